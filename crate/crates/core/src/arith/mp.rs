//! Multiprecision complex numbers on top of `astro-float`.
//!
//! Transcendental functions need a constants cache, which is expensive to
//! build, so they live on the [`Mp`] context that callers keep around.

use core::ops::{Add, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Negation by reference (the operator form consumes its argument).
pub trait NegF {
    fn negf(&self) -> Self;
}

impl NegF for BigFloat {
    fn negf(&self) -> BigFloat {
        let mut y = self.clone();
        y.inv_sign();
        y
    }
}

/// Working context: precision in bits plus the constants cache.
pub struct Mp {
    prec: usize,
    cc: Consts,
}

impl core::fmt::Debug for Mp {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Mp").field("prec", &self.prec).finish()
    }
}

impl Mp {
    pub fn new(prec: usize) -> Self {
        let cc = Consts::new().expect("constants cache allocation");
        Mp { prec: prec.max(64), cc }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn set_prec(&mut self, prec: usize) {
        self.prec = prec.max(64);
    }

    pub fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.prec)
    }

    pub fn from_bigint(&self, n: &BigInt) -> BigFloat {
        bigint_to_bf(n, self.prec)
    }

    pub fn ratio(&self, n: i64, d: i64) -> BigFloat {
        self.int(n).div(&self.int(d), self.prec, RM)
    }

    pub fn c(&self, re: f64, im: f64) -> MpC {
        MpC::new(self.real(re), self.real(im), self.prec)
    }

    pub fn cint(&self, n: i64) -> MpC {
        MpC::new(self.int(n), self.int(0), self.prec)
    }

    pub fn czero(&self) -> MpC {
        self.cint(0)
    }

    pub fn cone(&self) -> MpC {
        self.cint(1)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, RM)
    }

    pub fn ln2(&mut self) -> BigFloat {
        self.cc.ln_2(self.prec, RM)
    }

    /// `1/√2`.
    pub fn sqrt_half(&mut self) -> BigFloat {
        self.ratio(1, 2).sqrt(self.prec, RM)
    }

    pub fn exp_r(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.prec, RM, &mut self.cc)
    }

    pub fn ln_r(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.prec, RM, &mut self.cc)
    }

    pub fn sqrt_r(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.prec, RM)
    }

    /// `(cos x, sin x)`.
    pub fn cos_sin(&mut self, x: &BigFloat) -> (BigFloat, BigFloat) {
        (x.cos(self.prec, RM, &mut self.cc), x.sin(self.prec, RM, &mut self.cc))
    }

    /// Two-argument arctangent with range `(−π, π]`.
    pub fn atan2(&mut self, y: &BigFloat, x: &BigFloat) -> BigFloat {
        let p = self.prec;
        if x.is_zero() && y.is_zero() {
            return self.int(0);
        }
        let pi = self.pi();
        if x.abs().cmp(&y.abs()).unwrap_or(0) >= 0 {
            let a = y.div(x, p, RM).atan(p, RM, &mut self.cc);
            if x.is_negative() {
                if y.is_negative() {
                    a.sub(&pi, p, RM)
                } else {
                    a.add(&pi, p, RM)
                }
            } else {
                a
            }
        } else {
            let half_pi = pi.div(&self.int(2), p, RM);
            let a = x.div(y, p, RM).atan(p, RM, &mut self.cc);
            if y.is_negative() {
                half_pi.negf().sub(&a, p, RM)
            } else {
                half_pi.sub(&a, p, RM)
            }
        }
    }

    pub fn exp(&mut self, z: &MpC) -> MpC {
        let m = self.exp_r(&z.re);
        let (c, s) = self.cos_sin(&z.im);
        let p = self.prec;
        MpC::new(m.mul(&c, p, RM), m.mul(&s, p, RM), p)
    }

    /// `e^{2πi z}`.
    pub fn e2pii(&mut self, z: &MpC) -> MpC {
        let two_pi = self.pi().mul(&self.int(2), self.prec, RM);
        let w = z.mul_i().scale(&two_pi);
        self.exp(&w)
    }

    /// Principal logarithm, imaginary part in `(−π, π]`.
    pub fn ln(&mut self, z: &MpC) -> MpC {
        let p = self.prec;
        let r2 = z.abs2();
        let lr = self.ln_r(&r2).div(&self.int(2), p, RM);
        let a = self.atan2(&z.im, &z.re);
        MpC::new(lr, a, p)
    }

    /// Principal square root, argument in `(−π/2, π/2]`.
    pub fn sqrt(&mut self, z: &MpC) -> MpC {
        let p = self.prec;
        if z.im.is_zero() {
            if z.re.is_negative() {
                return MpC::new(self.int(0), z.re.negf().sqrt(p, RM), p);
            }
            return MpC::new(z.re.sqrt(p, RM), self.int(0), p);
        }
        let r = self.sqrt_r(&z.abs2());
        let t = r.add(&z.re.abs(), p, RM).div(&self.int(2), p, RM).sqrt(p, RM);
        let u = z.im.abs().div(&t, p, RM).div(&self.int(2), p, RM);
        if !z.re.is_negative() {
            let im = if z.im.is_negative() { u.negf() } else { u };
            MpC::new(t, im, p)
        } else {
            let im = if z.im.is_negative() { t.negf() } else { t };
            MpC::new(u, im, p)
        }
    }

    pub fn sqrt_real(&mut self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.prec, RM)
    }
}

/// Converts a big integer with correct rounding to `p` bits.
pub fn bigint_to_bf(n: &BigInt, p: usize) -> BigFloat {
    if let Some(v) = n.to_i64() {
        return BigFloat::from_i64(v, p);
    }
    let (sign, digits) = n.to_u64_digits();
    let mut acc = BigFloat::from_u64(0, p);
    for d in digits.iter().rev() {
        // acc·2^64 + d, the shift done exactly through the exponent.
        if !acc.is_zero() {
            let e = acc.exponent().unwrap_or(0);
            acc.set_exponent(e + 64);
        }
        acc = acc.add(&BigFloat::from_u64(*d, p), p, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc = acc.negf();
    }
    acc
}

/// Nearest `f64` to a `BigFloat` (truncating the mantissa).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let Some((m, _, s, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *m.last().unwrap_or(&0);
    let v = libm::ldexp(top as f64, e - 64);
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

/// A complex number with real and imaginary parts at precision `p`.
#[derive(Debug)]
pub struct MpC {
    pub re: BigFloat,
    pub im: BigFloat,
    p: usize,
}

impl Clone for MpC {
    fn clone(&self) -> Self {
        MpC { re: self.re.clone(), im: self.im.clone(), p: self.p }
    }
}

impl MpC {
    pub fn new(re: BigFloat, im: BigFloat, p: usize) -> Self {
        MpC { re, im, p }
    }

    pub fn prec(&self) -> usize {
        self.p
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        MpC::new(BigFloat::from_f64(re, p), BigFloat::from_f64(im, p), p)
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    pub fn conj(&self) -> Self {
        MpC::new(self.re.clone(), self.im.negf(), self.p)
    }

    pub fn mul_i(&self) -> Self {
        MpC::new(self.im.negf(), self.re.clone(), self.p)
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        MpC::new(self.re.mul(s, self.p, RM), self.im.mul(s, self.p, RM), self.p)
    }

    pub fn abs2(&self) -> BigFloat {
        let p = self.p;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.abs2().sqrt(self.p, RM)
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_c64();
        libm::hypot(a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn recip(&self) -> Self {
        let p = self.p;
        let d = self.abs2();
        MpC::new(self.re.div(&d, p, RM), self.im.negf().div(&d, p, RM), p)
    }

    pub fn div(&self, o: &MpC) -> Self {
        self * &o.recip()
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            return self.recip().powi(-e);
        }
        let mut acc = MpC::new(BigFloat::from_i64(1, self.p), BigFloat::from_i64(0, self.p), self.p);
        let mut b = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// `|self − other|` as a double, the usual comparison in tests.
    pub fn dist(&self, other: &MpC) -> f64 {
        (self - other).abs_f64()
    }

    pub fn re_is_negative(&self) -> bool {
        self.re.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !(self.re.is_nan() || self.im.is_nan() || self.re.is_inf() || self.im.is_inf())
    }
}

impl<'a> Add<&'a MpC> for &'a MpC {
    type Output = MpC;
    fn add(self, o: &'a MpC) -> MpC {
        let p = self.p.max(o.p);
        MpC::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }
}

impl<'a> Sub<&'a MpC> for &'a MpC {
    type Output = MpC;
    fn sub(self, o: &'a MpC) -> MpC {
        let p = self.p.max(o.p);
        MpC::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }
}

impl<'a> Mul<&'a MpC> for &'a MpC {
    type Output = MpC;
    fn mul(self, o: &'a MpC) -> MpC {
        let p = self.p.max(o.p);
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        MpC::new(ac.sub(&bd, p, RM), ad.add(&bc, p, RM), p)
    }
}

impl Add for MpC {
    type Output = MpC;
    fn add(self, o: MpC) -> MpC {
        &self + &o
    }
}

impl Sub for MpC {
    type Output = MpC;
    fn sub(self, o: MpC) -> MpC {
        &self - &o
    }
}

impl Mul for MpC {
    type Output = MpC;
    fn mul(self, o: MpC) -> MpC {
        &self * &o
    }
}

impl Neg for MpC {
    type Output = MpC;
    fn neg(self) -> MpC {
        MpC::new(self.re.negf(), self.im.negf(), self.p)
    }
}

impl Neg for &MpC {
    type Output = MpC;
    fn neg(self) -> MpC {
        MpC::new(self.re.negf(), self.im.negf(), self.p)
    }
}

/// Checks `|x| < tol` for a real `BigFloat`, useful for exact-zero tests.
pub fn below(x: &BigFloat, tol: f64) -> bool {
    to_f64(&x.abs()) < tol
}

/// Absolute value of a big integer as a double (saturating).
pub fn bigint_abs_f64(n: &BigInt) -> f64 {
    n.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_roundtrip() {
        for x in [1.0, -0.75, 3.5e-30, 12345.678, -1e200] {
            assert_eq!(to_f64(&BigFloat::from_f64(x, 128)), x);
        }
    }

    #[test]
    fn big_integer_conversion() {
        let n = BigInt::from(3u8).pow(100u32);
        let x = bigint_to_bf(&n, 256);
        let rel = (to_f64(&x) - 5.153775207320113e47) / 5.153775207320113e47;
        assert!(rel.abs() < 1e-15);
    }

    #[test]
    fn exp_log_sqrt() {
        let mut mp = Mp::new(128);
        let z = mp.c(0.3, -1.7);
        let l = mp.ln(&z);
        let w = mp.exp(&l);
        assert!(w.dist(&z) < 1e-35);
        let s = mp.sqrt(&z);
        assert!((&s * &s).dist(&z) < 1e-35);
        assert!(!s.re_is_negative());
        let minus_one = mp.cint(-1);
        let m1 = mp.sqrt(&minus_one);
        assert!(m1.dist(&mp.c(0.0, 1.0)) < 1e-35);
    }

    #[test]
    fn atan2_quadrants() {
        let mut mp = Mp::new(64);
        for (y, x) in [(1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0), (0.0, -1.0), (2.0, 0.1), (-2.0, 0.1)] {
            let (yy, xx) = (mp.real(y), mp.real(x));
            let a = to_f64(&mp.atan2(&yy, &xx));
            assert!((a - libm::atan2(y, x)).abs() < 1e-15, "{y} {x}");
        }
    }
}
