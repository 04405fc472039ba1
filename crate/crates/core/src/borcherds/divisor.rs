use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::vvform::VVForm;
use crate::arith::Q;
use crate::error::{Error, Result};
use crate::weil::WeilRep;

/// A formal integer combination of Heegner classes `H(±γ, n)`, keyed by the
/// element index and `n = λ²/2 < 0` (the exponent of `q` that produces it).
/// Elements of 2-elementary groups satisfy `γ = −γ`, so each key is already
/// a `±1`-orbit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeegnerSum {
    pub terms: BTreeMap<(usize, Q), BigInt>,
}

impl HeegnerSum {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, idx: usize, n: Q) -> BigInt {
        self.terms.get(&(idx, n)).cloned().unwrap_or_default()
    }

    /// Splits the sum as `a·D′ + (a+b)·D″ + extras`, where `D′ + D″ = H(0, −1)`
    /// and `D″ = Σ_{q(γ) ≡ −1/2} H(γ, −1/4)`. `b` is the coefficient shared
    /// by the `q(γ) ≡ −1/2` classes other than `1_Λ`. When no class has
    /// `q(γ) ≡ −1/2` (always the case for `δ = 0`) the divisor `D″` is empty.
    pub fn ledger(&self, rep: &WeilRep) -> DivisorLedger {
        let quarter = Q::new(-1, 4);
        let one = rep.characteristic_index();
        let a = self.get(0, Q::from(-1));
        let class3: Vec<usize> = (0..rep.size()).filter(|&i| rep.q_class(i) == 3).collect();
        let mut others = class3.iter().filter(|&&i| i != one).map(|&i| self.get(i, quarter));
        let b = match others.next() {
            Some(first) if others.all(|x| x == first) => first,
            Some(_) => BigInt::zero(),
            None if class3.contains(&one) => self.get(one, quarter),
            None => BigInt::zero(),
        };
        let mut extras = Vec::new();
        for (&(i, n), c) in &self.terms {
            let explained = if i == 0 && n == Q::from(-1) {
                a.clone()
            } else if n == quarter && class3.contains(&i) {
                b.clone()
            } else {
                BigInt::zero()
            };
            let rest = c - explained;
            if !rest.is_zero() {
                extras.push((i, n, rest));
            }
        }
        // Classes of the D″ family with no term at all still carry −b.
        if !b.is_zero() {
            for &i in &class3 {
                if !self.terms.contains_key(&(i, quarter)) {
                    extras.push((i, quarter, -b.clone()));
                }
            }
        }
        extras.sort();
        let d_double_prime = (!class3.is_empty()).then(|| &a + &b);
        DivisorLedger { d_prime: a, d_double_prime, extras }
    }
}

/// `div = d′·D′ + d″·D″ + Σ extras`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorLedger {
    pub d_prime: BigInt,
    /// `None` when `D″` is empty.
    pub d_double_prime: Option<BigInt>,
    /// `(element index, n = λ²/2, multiplicity)`.
    pub extras: Vec<(usize, Q, BigInt)>,
}

impl DivisorLedger {
    /// The shape `D′ + (2^{(r−l)/2}+1)D″` with nothing else.
    pub fn is_standard(&self, r: i64, l: i64) -> bool {
        let want = BigInt::from((1i64 << ((r - l) / 2)) + 1);
        self.d_prime.is_one() && self.d_double_prime.as_ref().is_none_or(|d| *d == want) && self.extras.is_empty()
    }
}

impl fmt::Display for DivisorLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·D′", self.d_prime)?;
        if let Some(d) = &self.d_double_prime {
            write!(f, " + {d}·D″")?;
        }
        for (i, n, c) in &self.extras {
            write!(f, " + {c}·H(#{i}, λ²={})", *n * Q::from(2))?;
        }
        Ok(())
    }
}

/// Reads the Heegner divisor off the principal part: multiplicity `c_γ(n)` on
/// the class `(±γ, n)` for every `n < 0`.
pub fn borcherds_divisor(f: &VVForm) -> Result<HeegnerSum> {
    let mut terms = BTreeMap::new();
    for i in 0..f.len() {
        for (n, c) in f.component(i).iter() {
            if n >= Q::zero() {
                break;
            }
            let r = c.to_rational().filter(|r| r.is_integer()).ok_or_else(|| {
                Error::Inconsistent(alloc::format!("principal part coefficient {c} is not an integer"))
            })?;
            terms.insert((i, n), r.to_integer());
        }
    }
    Ok(HeegnerSum { terms })
}
