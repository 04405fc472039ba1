use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::arith::intseries::IntSeries;
use crate::arith::{Cyc8, QSeries, Q};

/// Number of integer steps `j ≥ 0` with `offset + j < order`.
pub fn dense_len(offset: Q, order: Q) -> usize {
    (order - offset).ceil().to_integer().max(0) as usize
}

/// `Π η(mτ)^e` as a list of `(m, e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    pub factors: Vec<(u32, i64)>,
}

impl EtaQuotient {
    pub fn new(factors: impl IntoIterator<Item = (u32, i64)>) -> Self {
        EtaQuotient { factors: factors.into_iter().filter(|f| f.1 != 0).collect() }
    }

    /// `η(τ)⁻⁸η(2τ)⁸η(4τ)⁻⁸`.
    pub fn borcherds_seed() -> Self {
        Self::new([(1, -8), (2, 8), (4, -8)])
    }

    /// Leading exponent `Σ e·m/24`.
    pub fn offset(&self) -> Q {
        self.factors.iter().map(|&(m, e)| Q::new(e * i64::from(m), 24)).sum()
    }

    pub fn weight(&self) -> Q {
        self.factors.iter().map(|&(_, e)| Q::new(e, 2)).sum()
    }

    /// The product part `Π_{m,e} Π_n (1 − q^{mn})^e` to `len` coefficients.
    pub fn product(&self, len: usize) -> IntSeries {
        let mut s = IntSeries::one(len);
        for &(m, e) in &self.factors {
            let mut k = m as usize;
            while k < len {
                s.mul_one_minus_pow(k, e);
                k += m as usize;
            }
        }
        s
    }

    /// Expansion valid for exponents below `order`.
    pub fn expand(&self, order: Q) -> QSeries {
        let off = self.offset();
        let len = dense_len(off, order);
        QSeries::from_dense(off, Q::from(1), &self.product(len).0, Some(order))
    }
}

/// `η(mτ)^e`.
pub fn eta_power(m: u32, e: i64, order: Q) -> QSeries {
    EtaQuotient::new([(m, e)]).expand(order)
}

/// `1 + 2Σ q^{n²}` as a dense integer series.
fn theta_int(len: usize) -> IntSeries {
    let mut v = vec![BigInt::zero(); len];
    if len > 0 {
        v[0] = BigInt::from(1);
    }
    let mut n = 1usize;
    while n * n < len {
        v[n * n] = BigInt::from(2);
        n += 1;
    }
    IntSeries(v)
}

/// `Σ_{n≥0} q^{n(n+1)}`.
fn triangular_int(len: usize) -> IntSeries {
    let mut v = vec![BigInt::zero(); len];
    let mut n = 0usize;
    while n * (n + 1) < len {
        v[n * (n + 1)] = BigInt::from(1);
        n += 1;
    }
    IntSeries(v)
}

/// `θ_{A₁⁺}(τ) = Σ q^{n²}` or, with `half`, `θ_{A₁⁺+½}(τ) = Σ q^{(n+½)²}`.
pub fn theta_a1(half: bool, order: Q) -> QSeries {
    if half {
        let off = Q::new(1, 4);
        let len = dense_len(off, order);
        QSeries::from_dense(off, Q::from(1), &triangular_int(len).scale(&BigInt::from(2)).0, Some(order))
    } else {
        QSeries::from_dense(Q::zero(), Q::from(1), &theta_int(dense_len(Q::zero(), order)).0, Some(order))
    }
}

/// `f_k⁽⁰⁾ = η(2τ)⁸θ_{A₁⁺}(τ)^k / (η(τ)⁸η(4τ)⁸) = q⁻¹ + (8 + 2k) + O(q)`.
pub fn f0(k: i64, order: Q) -> QSeries {
    let off = Q::from(-1);
    let len = dense_len(off, order);
    let p = EtaQuotient::borcherds_seed().product(len).mul(&theta_int(len).pow(k));
    QSeries::from_dense(off, Q::from(1), &p.0, Some(order))
}

/// `f_k⁽¹⁾ = −16η(4τ)⁸θ_{A₁⁺+½}(τ)^k / η(2τ)¹⁶ = −2^{k+4}q^{k/4}(1 + (k+16)q² + …)`.
pub fn f1(k: i64, order: Q) -> QSeries {
    let off = Q::new(k, 4);
    let len = dense_len(off, order);
    let p = EtaQuotient::new([(4, 8), (2, -16)]).product(len).mul(&triangular_int(len).pow(k));
    QSeries::from_dense(off, Q::from(1), &p.0, Some(order)).scale(&-Cyc8::two_pow(k + 4))
}

/// `g_k⁽ⁱ⁾ = Σ_{l ≡ i (4)} c_k⁽⁰⁾(l) q^{l/4}`.
pub fn g_i(k: i64, i: i64, order: Q) -> QSeries {
    let i = i.rem_euclid(4);
    f0(k, order * Q::from(4))
        .filter(|e| e.is_integer() && e.to_integer().rem_euclid(4) == i)
        .scale_exponents(Q::new(1, 4))
}

/// `E₄ = 1 + 240Σ σ₃(n)qⁿ`.
pub fn e4(order: Q) -> QSeries {
    let len = dense_len(Q::zero(), order);
    let mut v = vec![BigInt::zero(); len];
    for d in 1..len {
        let d3 = BigInt::from((d as u64).pow(3)) * 240;
        for n in (d..len).step_by(d) {
            v[n] += &d3;
        }
    }
    if len > 0 {
        v[0] = BigInt::from(1);
    }
    QSeries::from_dense(Q::zero(), Q::from(1), &v, Some(order))
}

/// Jacobi thetas in `q = e^{2πiτ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobiTheta {
    /// `ϑ₂ = Σ q^{(n+½)²/2}`
    Two,
    /// `ϑ₃ = Σ q^{n²/2}`
    Three,
    /// `ϑ₄ = Σ (−1)ⁿ q^{n²/2}`
    Four,
}

pub fn jacobi_theta(which: JacobiTheta, order: Q) -> QSeries {
    let bound = order.to_f64().unwrap_or(0.0).max(0.0);
    let nmax = libm::sqrt(2.0 * bound) as i64 + 2;
    let terms = (-nmax..=nmax).map(|n| match which {
        JacobiTheta::Two => (Q::new((2 * n + 1) * (2 * n + 1), 8), Cyc8::one()),
        JacobiTheta::Three => (Q::new(n * n, 2), Cyc8::one()),
        JacobiTheta::Four => (Q::new(n * n, 2), Cyc8::from_int(if n.is_even() { 1 } else { -1 })),
    });
    QSeries::from_terms(terms, Some(order))
}
