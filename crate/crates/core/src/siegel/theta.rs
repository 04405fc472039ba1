use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};
use core::fmt;

use astro_float::BigFloat;

use super::point::SiegelPoint;
use crate::arith::mp::{to_f64, RM};
use crate::arith::{Mp, MpC};
use crate::error::{Error, Result};

/// A characteristic `(a, b) ∈ {0, ½}^g × {0, ½}^g`; bit `i` of `a` (or `b`)
/// set means the `i`-th entry is `½`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaChar {
    pub g: usize,
    pub a: u32,
    pub b: u32,
}

impl ThetaChar {
    pub fn new(g: usize, a: u32, b: u32) -> ThetaChar {
        assert!(g <= 16 && a >> g == 0 && b >> g == 0, "characteristic out of range");
        ThetaChar { g, a, b }
    }

    /// `4·aᵀb` even.
    pub fn is_even(&self) -> bool {
        (self.a & self.b).count_ones().is_multiple_of(2)
    }
}

impl fmt::Display for ThetaChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |m: u32| (0..self.g).map(|i| if m >> i & 1 == 1 { "½" } else { "0" }).collect::<Vec<_>>().join(" ");
        write!(f, "[{}; {}]", bits(self.a), bits(self.b))
    }
}

/// The `2^{g−1}(2^g+1)` even characteristics, ordered by `(a, b)`.
pub fn even_characteristics(g: usize) -> Vec<ThetaChar> {
    let n = 1u32 << g;
    (0..n).flat_map(|a| (0..n).map(move |b| ThetaChar::new(g, a, b))).filter(ThetaChar::is_even).collect()
}

/// Weight `2^{g+1}(2^g+1)` of `χ_g⁸`.
pub fn chi_weight(g: usize) -> u64 {
    (1u64 << (g + 1)) * ((1u64 << g) + 1)
}

#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub ch: ThetaChar,
    pub value: MpC,
    /// `Σ |terms|`, the scale for rounding error.
    pub abs_sum: f64,
    /// Bound on the dropped part of the lattice sum.
    pub tail: f64,
    pub prec: usize,
}

impl ThetaValue {
    /// True when `|θ|` is indistinguishable from zero given the tail bound and
    /// the rounding error of the summation.
    pub fn is_numerical_zero(&self) -> bool {
        self.value.abs_f64() <= self.tail + self.abs_sum * libm::exp2(-(self.prec as f64) + 8.0)
    }
}

/// `Σ_{n} exp(πi(n+a)ᵀΣ(n+a) + 2πi(n+a)ᵀb)` over `(n+a)ᵀ(Im Σ)(n+a) ≤ ρ`,
/// where `ρ = ((prec+16)·ln 2 + g·ln(4 + 4/λ_min))/π` makes the Gaussian tail
/// smaller than `2^{−prec−16}`.
pub fn theta_constant(ch: ThetaChar, point: &SiegelPoint, prec: usize) -> Result<MpC> {
    Ok(theta_constants(&[ch], point, prec)?.remove(0).value)
}

/// All requested constants; terms `exp(πi vᵀΣv)` are shared between
/// characteristics with the same `a`.
pub fn theta_constants(chars: &[ThetaChar], point: &SiegelPoint, prec: usize) -> Result<Vec<ThetaValue>> {
    let g = point.g();
    if chars.iter().any(|c| c.g != g) {
        return Err(Error::OutOfRange("characteristic degree differs from the point".into()));
    }
    let prec = prec.max(64);
    let tail = libm::exp2(-(prec as f64) - 16.0);
    if g == 0 {
        let mp = Mp::new(prec);
        return Ok(chars.iter().map(|&ch| ThetaValue { ch, value: mp.cone(), abs_sum: 1.0, tail: 0.0, prec }).collect());
    }
    let lmin = point.lambda_min();
    let rho = ((prec as f64 + 16.0) * LN_2 + g as f64 * libm::log(4.0 + 4.0 / lmin)) / PI;
    let chol = point.imag_f64().cholesky().ok_or_else(|| Error::Domain("Im Σ is not positive definite".into()))?;
    let lt = chol.l().transpose();
    let mut avals: Vec<u32> = chars.iter().map(|c| c.a).collect();
    avals.sort_unstable();
    avals.dedup();

    let per_a = |a: u32| -> Vec<(u32, MpC, f64)> {
        let mut mp = Mp::new(prec);
        let pts = enumerate(&lt, a, rho);
        let quarter_pi = mp.pi().div(&mp.int(4), prec, RM);
        let terms: Vec<(Vec<i64>, MpC)> = pts
            .into_iter()
            .map(|v2| {
                // vᵀΣv·4 with 2v integral.
                let mut w = mp.czero();
                for i in 0..g {
                    for j in 0..g {
                        w = &w + &(&mp.cint(v2[i] * v2[j]) * point.entry(i, j));
                    }
                }
                let e = mp.exp(&w.mul_i().scale(&quarter_pi));
                (v2, e)
            })
            .collect();
        chars
            .iter()
            .filter(|c| c.a == a)
            .map(|c| {
                let mut acc = mp.czero();
                let mut abs = 0.0;
                for (v2, e) in &terms {
                    let k: i64 = (0..g).filter(|i| c.b >> i & 1 == 1).map(|i| v2[i]).sum();
                    abs += e.abs_f64();
                    acc = &acc + &times_i_pow(e, k);
                }
                (c.b, acc, abs)
            })
            .collect()
    };

    #[cfg(feature = "parallel")]
    let groups: Vec<Vec<(u32, MpC, f64)>> = {
        use rayon::prelude::*;
        avals.par_iter().map(|&a| per_a(a)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let groups: Vec<Vec<(u32, MpC, f64)>> = avals.iter().map(|&a| per_a(a)).collect();

    chars
        .iter()
        .map(|&ch| {
            let gi = avals.binary_search(&ch.a).map_err(|_| Error::Inconsistent("missing characteristic group".into()))?;
            let (_, value, abs_sum) = groups[gi].iter().find(|(b, _, _)| *b == ch.b).cloned().expect("group holds every b");
            Ok(ThetaValue { ch, value, abs_sum, tail, prec })
        })
        .collect()
}

fn times_i_pow(z: &MpC, k: i64) -> MpC {
    match k.rem_euclid(4) {
        0 => z.clone(),
        1 => z.mul_i(),
        2 => -z,
        _ => -&z.mul_i(),
    }
}

/// Vectors `2v` with `v ∈ a + Z^g` and `vᵀYv ≤ ρ`, where `Y = L Lᵀ` and `lt = Lᵀ`.
fn enumerate(lt: &nalgebra::DMatrix<f64>, a: u32, rho: f64) -> Vec<Vec<i64>> {
    let g = lt.nrows();
    let shift: Vec<f64> = (0..g).map(|i| if a >> i & 1 == 1 { 0.5 } else { 0.0 }).collect();
    let mut out = Vec::new();
    let mut v = alloc::vec![0.0f64; g];
    fn rec(i: usize, lt: &nalgebra::DMatrix<f64>, shift: &[f64], rem: f64, v: &mut [f64], out: &mut Vec<Vec<i64>>) {
        let g = v.len();
        let s: f64 = (i + 1..g).map(|j| lt[(i, j)] * v[j]).sum();
        let d = lt[(i, i)];
        let r = rem.max(0.0).sqrt();
        // v_i = n + shift ∈ [(−s − r)/d, (−s + r)/d].
        let lo = ((-s - r) / d - shift[i]).ceil() as i64;
        let hi = ((-s + r) / d - shift[i]).floor() as i64;
        for n in lo..=hi {
            let vi = n as f64 + shift[i];
            let t = d * vi + s;
            let left = rem - t * t;
            if left < 0.0 {
                continue;
            }
            v[i] = vi;
            if i == 0 {
                out.push(v.iter().map(|x| libm::round(2.0 * x) as i64).collect());
            } else {
                rec(i - 1, lt, shift, left, v, out);
            }
        }
    }
    rec(g - 1, lt, &shift, rho, &mut v, &mut out);
    out
}

/// `χ_g(Σ) = Π_{(a,b) even} θ_{a,b}(Σ)`; `χ₀ = 1`.
pub fn chi_g(point: &SiegelPoint, prec: usize) -> Result<MpC> {
    let vals = theta_constants(&even_characteristics(point.g()), point, prec)?;
    let mp = Mp::new(prec);
    Ok(vals.iter().fold(mp.cone(), |acc, t| &acc * &t.value))
}

/// `ln((det Im Σ)^w·|χ_g⁸|²)` with `w = 2^{g+1}(2^g+1)`, at the precision of `mp`.
/// Errors when some theta constant is numerically zero.
pub fn log_chi_g8_petersson_mp(point: &SiegelPoint, mp: &mut Mp) -> Result<BigFloat> {
    let g = point.g();
    if g == 0 {
        return Ok(mp.int(0));
    }
    let p = mp.prec();
    let vals = theta_constants(&even_characteristics(g), point, p)?;
    if let Some(z) = vals.iter().find(|t| t.is_numerical_zero()) {
        return Err(Error::Domain(alloc::format!("θ{} vanishes numerically", z.ch)));
    }
    let det = point.det_imag(mp);
    let mut acc = mp.ln_r(&det).mul(&mp.int(chi_weight(g) as i64), p, RM);
    for t in &vals {
        // 16·ln|θ| = 8·ln|θ|².
        let l = mp.ln_r(&t.value.abs2()).mul(&mp.int(8), p, RM);
        acc = acc.add(&l, p, RM);
    }
    Ok(acc)
}

pub fn log_chi_g8_petersson(point: &SiegelPoint, prec: usize) -> Result<f64> {
    let mut mp = Mp::new(prec);
    Ok(to_f64(&log_chi_g8_petersson_mp(point, &mut mp)?))
}

/// `‖χ_g⁸‖ = (det Im Σ)^w·|χ_g⁸|²`; exactly `0` when some even theta constant
/// vanishes to within its error bound.
pub fn chi_g8_petersson(point: &SiegelPoint, prec: usize) -> Result<f64> {
    let vals = theta_constants(&even_characteristics(point.g()), point, prec)?;
    if vals.iter().any(ThetaValue::is_numerical_zero) {
        return Ok(0.0);
    }
    Ok(libm::exp(log_chi_g8_petersson(point, prec)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mp::below;
    use crate::modular::analytic;

    fn pt(rows: &[&[(f64, f64)]]) -> SiegelPoint {
        SiegelPoint::from_c64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 128).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(even_characteristics(0).len(), 1);
        for (g, n) in [(1, 3), (2, 10), (3, 36), (4, 136), (5, 528)] {
            assert_eq!(even_characteristics(g).len(), n);
        }
    }

    #[test]
    fn theta3_at_i() {
        let s = pt(&[&[(0.0, 1.0)]]);
        let t = theta_constant(ThetaChar::new(1, 0, 0), &s, 128).unwrap();
        let (re, im) = t.to_c64();
        assert!((re - 1.086_434_811_213_308).abs() < 1e-15 && im.abs() < 1e-30);
        let odd = theta_constants(&[ThetaChar::new(1, 1, 1)], &s, 128).unwrap();
        assert!(odd[0].is_numerical_zero());
    }

    #[test]
    fn one_dimensional_matches_jacobi() {
        let mut mp = Mp::new(128);
        let tau = mp.c(0.3, 0.8);
        let s = SiegelPoint::new(alloc::vec![alloc::vec![tau.clone()]]).unwrap();
        let [t2, t3, t4] = analytic::thetas(&tau, &mut mp).unwrap();
        for (ch, want) in [((1, 0), t2), ((0, 0), t3), ((0, 1), t4)] {
            let got = theta_constant(ThetaChar::new(1, ch.0, ch.1), &s, 128).unwrap();
            assert!(got.dist(&want) < 1e-30);
        }
        // χ₁⁸ = 2⁸η²⁴ under the product-of-even-constants definition.
        let chi = chi_g(&s, 128).unwrap().powi(8);
        let eta = analytic::eta(&tau, &mut mp).unwrap().powi(24);
        let ratio = chi.div(&eta);
        assert!(ratio.dist(&mp.cint(256)) < 1e-25);
    }

    #[test]
    fn block_factorization() {
        let mp = Mp::new(128);
        let s1 = pt(&[&[(0.1, 1.1)]]);
        let s2 = pt(&[&[(0.2, 0.9), (-0.1, 0.3)], &[(-0.1, 0.3), (0.4, 1.3)]]);
        let s = s1.block_diag(&s2, &mp);
        for c in even_characteristics(3).into_iter().chain([ThetaChar::new(3, 1, 1)]) {
            let whole = theta_constant(c, &s, 128).unwrap();
            let lo = ThetaChar::new(1, c.a & 1, c.b & 1);
            let hi = ThetaChar::new(2, c.a >> 1, c.b >> 1);
            let prod = &theta_constant(lo, &s1, 128).unwrap() * &theta_constant(hi, &s2, 128).unwrap();
            assert!(whole.dist(&prod) <= 1e-15 * prod.abs_f64() + 1e-35, "{c}");
        }
    }

    #[test]
    fn chi2_vanishes_on_diagonal() {
        let mp = Mp::new(128);
        let s = pt(&[&[(0.1, 1.1)]]).block_diag(&pt(&[&[(-0.3, 0.8)]]), &mp);
        let vals = theta_constants(&even_characteristics(2), &s, 128).unwrap();
        let zeros: Vec<_> = vals.iter().filter(|t| t.is_numerical_zero()).map(|t| t.ch).collect();
        assert_eq!(zeros, [ThetaChar::new(2, 3, 3)]);
        assert_eq!(chi_g8_petersson(&s, 128).unwrap(), 0.0);
        assert!(below(&chi_g(&s, 128).unwrap().abs(), 1e-30));
    }

    #[test]
    fn modular_invariance() {
        let mut mp = Mp::new(160);
        let s = pt(&[&[(0.13, 1.05), (0.21, 0.32)], &[(0.21, 0.32), (-0.37, 0.94)]]);
        let base = log_chi_g8_petersson_mp(&s, &mut mp).unwrap();
        let shifted = s.add_integer(&[alloc::vec![1, -2], alloc::vec![-2, 3]]).unwrap();
        let moved = s.transform(&[alloc::vec![2, 1], alloc::vec![1, 1]], &mp).unwrap();
        for other in [shifted, moved] {
            let v = log_chi_g8_petersson_mp(&other, &mut mp).unwrap();
            assert!(below(&v.sub(&base, 160, RM), 1e-25));
        }
        assert_eq!(log_chi_g8_petersson(&SiegelPoint::empty(), 64).unwrap(), 0.0);
    }
}
