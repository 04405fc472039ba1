//! The cyclotomic field `Q(ζ)` with `ζ = e^{2πi/8}`.
//!
//! Elements are stored as `(n₀ + n₁ζ + n₂ζ² + n₃ζ³)/d` with integer
//! numerators and a positive common denominator, kept in lowest terms so that
//! structural equality is field equality.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mp::{Mp, MpC};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cyc8 {
    num: [BigInt; 4],
    den: BigInt,
}

impl Cyc8 {
    pub fn zero() -> Self {
        Cyc8 { num: Default::default(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Cyc8 { num: [n, BigInt::zero(), BigInt::zero(), BigInt::zero()], den: BigInt::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_parts(
            [q.numer().clone(), BigInt::zero(), BigInt::zero(), BigInt::zero()],
            q.denom().clone(),
        )
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_parts([BigInt::from(n), BigInt::zero(), BigInt::zero(), BigInt::zero()], BigInt::from(d))
    }

    /// Builds `Σ cᵢ ζⁱ` from four rational coefficients.
    pub fn from_coeffs(c: [BigRational; 4]) -> Self {
        let mut den = BigInt::one();
        for ci in &c {
            den = den.lcm(ci.denom());
        }
        let num = c.map(|ci| ci.numer() * (&den / ci.denom()));
        Self::from_parts(num, den)
    }

    /// `ζᵏ` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut num: [BigInt; 4] = Default::default();
        if k < 4 {
            num[k] = BigInt::one();
        } else {
            num[k - 4] = -BigInt::one();
        }
        Cyc8 { num, den: BigInt::one() }
    }

    pub fn i() -> Self {
        Self::zeta_pow(2)
    }

    /// `√2 = ζ − ζ³`.
    pub fn sqrt2() -> Self {
        Self::zeta_pow(1) - Self::zeta_pow(3)
    }

    /// `2^{e/2}` for any integer `e`.
    pub fn sqrt2_pow(e: i64) -> Self {
        let half = e.div_euclid(2);
        let mut x = Self::two_pow(half);
        if e.rem_euclid(2) == 1 {
            x = x * Self::sqrt2();
        }
        x
    }

    pub fn two_pow(e: i64) -> Self {
        if e >= 0 {
            Self::from_bigint(BigInt::one() << (e as usize))
        } else {
            Self::from_parts(
                [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()],
                BigInt::one() << ((-e) as usize),
            )
        }
    }

    fn from_parts(mut num: [BigInt; 4], mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for n in num.iter_mut() {
                *n = -core::mem::take(n);
            }
        }
        let mut g = den.clone();
        for n in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            for n in num.iter_mut() {
                *n /= &g;
            }
            den /= &g;
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        }
        Cyc8 { num, den }
    }

    /// The rational coefficient of `ζⁱ`, `i ∈ 0..4`.
    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> [BigRational; 4] {
        [self.coeff(0), self.coeff(1), self.coeff(2), self.coeff(3)]
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.den.is_one()
    }

    /// The value as a rational, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeff(0))
    }

    /// Applies the automorphism `ζ ↦ ζᵏ` (`k` odd).
    pub fn galois(&self, k: i64) -> Self {
        assert!(k.rem_euclid(2) == 1, "Galois exponent must be odd");
        let mut num: [BigInt; 4] = Default::default();
        for (j, c) in self.num.iter().enumerate() {
            let e = (j as i64 * k).rem_euclid(8) as usize;
            if e < 4 {
                num[e] += c;
            } else {
                num[e - 4] -= c;
            }
        }
        Cyc8 { num, den: self.den.clone() }
    }

    /// Complex conjugation, `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        self.galois(7)
    }

    /// The field norm down to `Q`.
    pub fn norm(&self) -> BigRational {
        let p = self * &self.galois(3) * self.galois(5) * self.galois(7);
        p.to_rational().expect("norm is rational")
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let others = self.galois(3) * self.galois(5) * self.galois(7);
        let n = (self * &others).to_rational().expect("norm is rational");
        others.scale(&n.recip())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.clone().map(|n| n * q.numer());
        Self::from_parts(num, &self.den * q.denom())
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        let num = self.num.clone().map(|x| x * n);
        Self::from_parts(num, self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Returns `k` if the element equals `ζᵏ`.
    pub fn root_of_unity_index(&self) -> Option<u8> {
        (0..8).find(|&k| *self == Self::zeta_pow(k)).map(|k| k as u8)
    }

    /// Embedding into `C` at double precision.
    pub fn to_c64(&self) -> (f64, f64) {
        let c = |i: usize| self.coeff(i).to_f64().unwrap_or(f64::NAN);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        (c(0) + s * (c(1) - c(3)), c(2) + s * (c(1) + c(3)))
    }

    /// Embedding into `C` at `mp.prec()` bits.
    pub fn embed(&self, mp: &mut Mp) -> MpC {
        let p = mp.prec();
        let d = mp.from_bigint(&self.den);
        let c: [_; 4] = core::array::from_fn(|i| mp.from_bigint(&self.num[i]).div(&d, p, super::mp::RM));
        let r = mp.sqrt_half();
        let re = c[1].sub(&c[3], p, super::mp::RM).mul(&r, p, super::mp::RM).add(&c[0], p, super::mp::RM);
        let im = c[1].add(&c[3], p, super::mp::RM).mul(&r, p, super::mp::RM).add(&c[2], p, super::mp::RM);
        MpC::new(re, im, p)
    }

    /// Sum of absolute values of the coefficients, used for error bounds.
    pub fn l1(&self) -> f64 {
        (0..4).map(|i| self.coeff(i).abs().to_f64().unwrap_or(f64::INFINITY)).sum()
    }

    /// Space separated coefficient list, the serialization used by the
    /// q-series text format.
    pub fn to_coeff_string(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        for i in 0..4 {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{}", self.coeff(i));
        }
        s
    }
}

impl Default for Cyc8 {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Cyc8 {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for Cyc8 {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

impl From<&BigRational> for Cyc8 {
    fn from(q: &BigRational) -> Self {
        Self::from_rational(q)
    }
}

fn add_impl(a: &Cyc8, b: &Cyc8, sign: i8) -> Cyc8 {
    if a.den == b.den {
        let num = core::array::from_fn(|i| if sign > 0 { &a.num[i] + &b.num[i] } else { &a.num[i] - &b.num[i] });
        return Cyc8::from_parts(num, a.den.clone());
    }
    let l = a.den.lcm(&b.den);
    let fa = &l / &a.den;
    let fb = &l / &b.den;
    let num = core::array::from_fn(|i| {
        let x = &a.num[i] * &fa;
        let y = &b.num[i] * &fb;
        if sign > 0 {
            x + y
        } else {
            x - y
        }
    });
    Cyc8::from_parts(num, l)
}

fn mul_impl(a: &Cyc8, b: &Cyc8) -> Cyc8 {
    if a.is_zero() || b.is_zero() {
        return Cyc8::zero();
    }
    let mut num: [BigInt; 4] = Default::default();
    for i in 0..4 {
        if a.num[i].is_zero() {
            continue;
        }
        for j in 0..4 {
            if b.num[j].is_zero() {
                continue;
            }
            let p = &a.num[i] * &b.num[j];
            let k = i + j;
            if k < 4 {
                num[k] += p;
            } else {
                num[k - 4] -= p;
            }
        }
    }
    Cyc8::from_parts(num, &a.den * &b.den)
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyc8> for &'a Cyc8 {
            type Output = Cyc8;
            fn $m(self, rhs: &'a Cyc8) -> Cyc8 {
                $body(self, rhs)
            }
        }
        impl $tr<Cyc8> for Cyc8 {
            type Output = Cyc8;
            fn $m(self, rhs: Cyc8) -> Cyc8 {
                $body(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Cyc8> for Cyc8 {
            type Output = Cyc8;
            fn $m(self, rhs: &'a Cyc8) -> Cyc8 {
                $body(&self, rhs)
            }
        }
        impl<'a> $tr<Cyc8> for &'a Cyc8 {
            type Output = Cyc8;
            fn $m(self, rhs: Cyc8) -> Cyc8 {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| add_impl(a, b, 1));
forward_binop!(Sub, sub, |a, b| add_impl(a, b, -1));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |a: &Cyc8, b: &Cyc8| mul_impl(a, &b.inv()));

impl AddAssign<&Cyc8> for Cyc8 {
    fn add_assign(&mut self, rhs: &Cyc8) {
        *self = add_impl(self, rhs, 1);
    }
}

impl SubAssign<&Cyc8> for Cyc8 {
    fn sub_assign(&mut self, rhs: &Cyc8) {
        *self = add_impl(self, rhs, -1);
    }
}

impl MulAssign<&Cyc8> for Cyc8 {
    fn mul_assign(&mut self, rhs: &Cyc8) {
        *self = mul_impl(self, rhs);
    }
}

impl Neg for Cyc8 {
    type Output = Cyc8;
    fn neg(self) -> Cyc8 {
        Cyc8 { num: self.num.map(|n| -n), den: self.den }
    }
}

impl Neg for &Cyc8 {
    type Output = Cyc8;
    fn neg(self) -> Cyc8 {
        -(self.clone())
    }
}

impl fmt::Display for Cyc8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for i in 0..4 {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mon = match i {
                0 => "",
                1 => "ζ",
                2 => "ζ^2",
                _ => "ζ^3",
            };
            if i == 0 || !a.is_one() {
                write!(f, "{a}")?;
            }
            f.write_str(mon)?;
        }
        Ok(())
    }
}
