//! Dense integer power series `Σ_{j<n} a_j q^j` used as the fast kernel for
//! eta products and theta powers before they are wrapped into [`QSeries`].
//!
//! [`QSeries`]: super::QSeries

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Truncated power series with `len` known coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries(pub Vec<BigInt>);

impl IntSeries {
    pub fn one(len: usize) -> Self {
        let mut v = vec![BigInt::zero(); len];
        if len > 0 {
            v[0] = BigInt::one();
        }
        IntSeries(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies in place by `(1 − q^m)^e`, `e` of either sign.
    pub fn mul_one_minus_pow(&mut self, m: usize, e: i64) {
        let n = self.0.len();
        if m == 0 || m >= n {
            return;
        }
        if e >= 0 {
            for _ in 0..e {
                for j in (m..n).rev() {
                    let t = self.0[j - m].clone();
                    self.0[j] -= t;
                }
            }
        } else {
            for _ in 0..(-e) {
                for j in m..n {
                    let t = self.0[j - m].clone();
                    self.0[j] += t;
                }
            }
        }
    }

    /// `Π_{n≥1} (1 − q^{mn})^e` to `len` coefficients.
    pub fn euler_power(m: usize, e: i64, len: usize) -> Self {
        let mut s = Self::one(len);
        let mut k = m;
        while k < len {
            s.mul_one_minus_pow(k, e);
            k += m;
        }
        s
    }

    pub fn mul(&self, o: &IntSeries) -> IntSeries {
        let n = self.len().min(o.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntSeries(out)
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse_unit(&self) -> IntSeries {
        assert!(self.0.first().is_some_and(One::is_one), "constant term must be 1");
        let n = self.len();
        let mut b = vec![BigInt::zero(); n];
        b[0] = BigInt::one();
        for m in 1..n {
            let mut acc = BigInt::zero();
            for k in 1..=m {
                if !self.0[k].is_zero() {
                    acc += &self.0[k] * &b[m - k];
                }
            }
            b[m] = -acc;
        }
        IntSeries(b)
    }

    /// Integer power; negative exponents need a unit constant term.
    pub fn pow(&self, e: i64) -> IntSeries {
        if e < 0 {
            return self.inverse_unit().pow(-e);
        }
        let mut acc = Self::one(self.len());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> IntSeries {
        IntSeries(self.0.iter().map(|a| a * c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_i64(s: &IntSeries) -> Vec<i64> {
        use num_traits::ToPrimitive;
        s.0.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn euler_and_inverse() {
        // Π(1−qⁿ)⁻¹ counts partitions.
        let p = IntSeries::euler_power(1, -1, 10);
        assert_eq!(to_i64(&p), [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]);
        let e = IntSeries::euler_power(1, 1, 10);
        assert_eq!(e.mul(&p), IntSeries::one(10));
        assert_eq!(e.inverse_unit(), p);
    }

    #[test]
    fn power_matches_repeated_product() {
        let e = IntSeries::euler_power(2, 1, 12);
        assert_eq!(e.pow(3), e.mul(&e).mul(&e));
        assert_eq!(IntSeries::euler_power(2, 3, 12), e.pow(3));
    }
}
