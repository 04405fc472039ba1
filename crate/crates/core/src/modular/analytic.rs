//! Evaluation of `η` and the Jacobi thetas anywhere in the upper half-plane.
//!
//! Points are first moved into a region where the defining series converge
//! quickly using `η(τ+1) = e^{πi/12}η(τ)`, `η(−1/τ) = √(−iτ)η(τ)` and the
//! corresponding rules for `(ϑ₂, ϑ₃, ϑ₄)`. The results are independent of any
//! q-expansion truncation, which makes them usable as oracles for identities
//! that involve points with small imaginary part.

use crate::arith::mp::{to_f64, RM};
use crate::arith::{Cyc8, Mp, MpC};
use crate::error::{Error, Result};

const MAX_STEPS: usize = 4096;

fn check(tau: &MpC) -> Result<()> {
    if !tau.im.is_positive() {
        return Err(Error::Domain("point must lie in the upper half-plane".into()));
    }
    Ok(())
}

fn round_re(tau: &MpC) -> i64 {
    libm::round(to_f64(&tau.re)) as i64
}

fn minus_inv(tau: &MpC) -> MpC {
    -tau.recip()
}

/// `√(−iτ)`, principal branch (real part positive for `Im τ > 0`).
fn sqrt_minus_i(tau: &MpC, mp: &mut Mp) -> MpC {
    let w = tau.mul_i();
    mp.sqrt(&-w)
}

/// Smallest tolerated term magnitude for the direct series.
fn eps(mp: &Mp) -> f64 {
    libm::ldexp(1.0, -(mp.prec() as i32) - 8)
}

/// Dedekind `η(τ) = q^{1/24}Π(1−qⁿ)`.
pub fn eta(tau: &MpC, mp: &mut Mp) -> Result<MpC> {
    check(tau)?;
    let mut z = tau.clone();
    let mut factor = mp.cone();
    for _ in 0..MAX_STEPS {
        let n = round_re(&z);
        if n != 0 {
            // η(z) = e^{πin/12}η(z − n)
            let rot = mp.e2pii(&MpC::new(mp.ratio(n, 24), mp.int(0), mp.prec()));
            factor = &factor * &rot;
            z = &z - &mp.cint(n);
        }
        if to_f64(&z.abs2()) < 0.999 {
            // η(z) = η(−1/z)/√(−iz)
            let s = sqrt_minus_i(&z, mp);
            factor = factor.div(&s);
            z = minus_inv(&z);
        } else {
            return Ok(&factor * &eta_direct(&z, mp));
        }
    }
    Err(Error::Domain("eta reduction did not terminate".into()))
}

/// Pentagonal-number series, for `Im τ` bounded below.
fn eta_direct(tau: &MpC, mp: &mut Mp) -> MpC {
    let q = mp.e2pii(tau);
    let absq = q.abs_f64();
    let e = eps(mp);
    let mut acc = mp.cone();
    let mut n: i64 = 1;
    loop {
        let a = n * (3 * n - 1) / 2;
        let b = n * (3 * n + 1) / 2;
        if libm::pow(absq, a as f64) < e {
            break;
        }
        let t = &q.powi(a) + &q.powi(b);
        acc = if n % 2 == 0 { &acc + &t } else { &acc - &t };
        n += 1;
    }
    let q24 = mp.e2pii(&tau.scale(&mp.ratio(1, 24)));
    &q24 * &acc
}

/// `(ϑ₂, ϑ₃, ϑ₄)(τ)` with nome `e^{πiτ}`, so `ϑ₃(τ) = Σ e^{πin²τ}`.
pub fn thetas(tau: &MpC, mp: &mut Mp) -> Result<[MpC; 3]> {
    check(tau)?;
    thetas_rec(tau, mp, 0)
}

fn thetas_rec(tau: &MpC, mp: &mut Mp, depth: usize) -> Result<[MpC; 3]> {
    if depth > MAX_STEPS {
        return Err(Error::Domain("theta reduction did not terminate".into()));
    }
    if to_f64(&tau.im) >= 0.5 {
        return Ok(thetas_direct(tau, mp));
    }
    let n = round_re(tau);
    if n != 0 {
        let [t2, t3, t4] = thetas_rec(&(tau - &mp.cint(n)), mp, depth + 1)?;
        let rot = Cyc8::zeta_pow(n).embed(mp);
        let t2 = &rot * &t2;
        return Ok(if n % 2 == 0 { [t2, t3, t4] } else { [t2, t4, t3] });
    }
    // τ = −1/w with Im w > Im τ.
    let w = minus_inv(tau);
    let [t2, t3, t4] = thetas_rec(&w, mp, depth + 1)?;
    let s = sqrt_minus_i(&w, mp);
    Ok([&s * &t4, &s * &t3, &s * &t2])
}

fn thetas_direct(tau: &MpC, mp: &mut Mp) -> [MpC; 3] {
    let pi = mp.pi();
    let q = mp.exp(&tau.mul_i().scale(&pi));
    let absq = q.abs_f64();
    let e = eps(mp);
    let mut s3 = mp.czero();
    let mut s4 = mp.czero();
    let mut s2 = mp.czero();
    let mut n: i64 = 1;
    loop {
        let mag = libm::pow(absq, (n * (n - 1)) as f64);
        if mag < e {
            break;
        }
        let qn2 = q.powi(n * n);
        s3 = &s3 + &qn2;
        s4 = if n % 2 == 0 { &s4 + &qn2 } else { &s4 - &qn2 };
        // ϑ₂ = 2q^{1/4}Σ_{m≥0} q^{m(m+1)}, indexed here by m = n − 1.
        s2 = &s2 + &q.powi(n * (n - 1));
        n += 1;
    }
    let two = mp.int(2);
    let one = mp.cone();
    let q4 = mp.exp(&tau.mul_i().scale(&pi.div(&mp.int(4), mp.prec(), RM)));
    [(&q4 * &s2).scale(&two), &one + &s3.scale(&two), &one + &s4.scale(&two)]
}

/// `θ_{A₁⁺}(τ) = ϑ₃(2τ)`.
pub fn theta_a1(tau: &MpC, mp: &mut Mp) -> Result<MpC> {
    let [_, t3, _] = thetas(&tau.scale(&mp.int(2)), mp)?;
    Ok(t3)
}

/// `θ_{A₁⁺+½}(τ) = ϑ₂(2τ)`.
pub fn theta_a1_half(tau: &MpC, mp: &mut Mp) -> Result<MpC> {
    let [t2, _, _] = thetas(&tau.scale(&mp.int(2)), mp)?;
    Ok(t2)
}

/// `f_k⁽⁰⁾(τ)` from its eta-product definition.
pub fn f0(k: i64, tau: &MpC, mp: &mut Mp) -> Result<MpC> {
    let e1 = eta(tau, mp)?;
    let e2 = eta(&tau.scale(&mp.int(2)), mp)?;
    let e4 = eta(&tau.scale(&mp.int(4)), mp)?;
    let th = theta_a1(tau, mp)?;
    let num = &e2.powi(8) * &th.powi(k);
    Ok(num.div(&(&e1 * &e4).powi(8)))
}

/// `f_k⁽¹⁾(τ) = −16η(4τ)⁸θ_{A₁⁺+½}(τ)^k/η(2τ)¹⁶`.
pub fn f1(k: i64, tau: &MpC, mp: &mut Mp) -> Result<MpC> {
    let e2 = eta(&tau.scale(&mp.int(2)), mp)?;
    let e4 = eta(&tau.scale(&mp.int(4)), mp)?;
    let th = theta_a1_half(tau, mp)?;
    let num = (&e4.powi(8) * &th.powi(k)).scale(&mp.int(-16));
    Ok(num.div(&e2.powi(16)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, Q};
    use crate::modular;

    #[test]
    fn special_values() {
        let mut mp = Mp::new(128);
        let i = mp.c(0.0, 1.0);
        let (e, _) = eta(&i, &mut mp).unwrap().to_c64();
        assert!((e - 0.768_225_422_326_056_6).abs() < 1e-15);
        let [_, t3, _] = thetas(&i, &mut mp).unwrap();
        assert!((t3.to_c64().0 - 1.086_434_811_213_308).abs() < 1e-15);
    }

    #[test]
    fn reduction_matches_series() {
        let mut mp = Mp::new(160);
        for (x, y) in [(0.13, 0.09), (-0.41, 0.2), (0.37, 0.05)] {
            let tau = mp.c(x, y);
            // Jacobi: ϑ₂ϑ₃ϑ₄ = 2η³ holds at every point.
            let [a, b, c] = thetas(&tau, &mut mp).unwrap();
            let lhs = &(&a * &b) * &c;
            let rhs = eta(&tau, &mut mp).unwrap().powi(3).scale(&mp.int(2));
            assert!(lhs.dist(&rhs) < 1e-35 * rhs.abs_f64(), "{x} {y}");
            // Jacobi quartic: ϑ₃⁴ = ϑ₂⁴ + ϑ₄⁴.
            let d = &b.powi(4) - &(&a.powi(4) + &c.powi(4));
            assert!(d.abs_f64() < 1e-35 * b.powi(4).abs_f64());
        }
        // Away from the real line the q-expansions agree with the reductions.
        let tau = mp.c(0.31, 1.1);
        let (s, tail) = modular::f0(3, q(60, 1)).eval(&tau, &mut mp).unwrap();
        let a = f0(3, &tau, &mut mp).unwrap();
        assert!(s.dist(&a) < 1e-30 + tail);
        let (s, tail) = modular::f1(-3, q(60, 1)).eval(&tau, &mut mp).unwrap();
        let a = f1(-3, &tau, &mut mp).unwrap();
        assert!(s.dist(&a) < 1e-30 + tail);
        let (s, _) = modular::eta_power(1, 1, Q::from(40)).eval(&tau, &mut mp).unwrap();
        assert!(s.dist(&eta(&tau, &mut mp).unwrap()) < 1e-35);
    }
}

/// `f_k⁽⁰⁾|_{ST^l}(τ) = f_k⁽⁰⁾(−1/(τ+l))·√(τ+l)^{8−k}`.
pub fn f0_slash_st(k: i64, l: i64, tau: &MpC, mp: &mut Mp) -> Result<MpC> {
    let tl = tau + &mp.cint(l);
    let j = mp.sqrt(&tl);
    Ok(&f0(k, &minus_inv(&tl), mp)? * &j.powi(8 - k))
}

/// `f_k⁽⁰⁾|_V(τ) = f_k⁽⁰⁾(τ/(1−2τ))·√(1−2τ)^{8−k}`.
pub fn f0_slash_v(k: i64, tau: &MpC, mp: &mut Mp) -> Result<MpC> {
    let den = &mp.cone() - &tau.scale(&mp.int(2));
    let j = mp.sqrt(&den);
    Ok(&f0(k, &tau.div(&den), mp)? * &j.powi(8 - k))
}

#[cfg(test)]
mod slash_tests {
    use super::*;

    #[test]
    fn slash_identities_all_k() {
        let mut mp = Mp::new(128);
        let tau = mp.c(0.2, 1.1);
        for k in -4..=12 {
            let c = (&Cyc8::sqrt2_pow(8 - k) * &Cyc8::zeta_pow(-k)).embed(&mut mp);
            for l in 0..4 {
                let lhs = f0_slash_st(k, l, &tau, &mut mp).unwrap();
                let arg = (&tau + &mp.cint(l)).scale(&mp.ratio(1, 4));
                let rhs = &c * &f0(k, &arg, &mut mp).unwrap();
                assert!(lhs.dist(&rhs) < 1e-30 * (1.0 + rhs.abs_f64()), "k={k} l={l}");
            }
            let lhs = f0_slash_v(k, &tau, &mut mp).unwrap();
            let rhs = f1(k, &tau, &mut mp).unwrap();
            assert!(lhs.dist(&rhs) < 1e-30 * (1.0 + rhs.abs_f64()), "k={k}");
        }
    }
}
