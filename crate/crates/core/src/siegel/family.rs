use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::point::SiegelPoint;
use super::theta::{even_characteristics, theta_constants};
use crate::arith::mp::{to_f64, RM};
use crate::arith::{Mp, MpC};
use crate::error::{Error, Result};

fn mpc(z: Complex64, mp: &Mp) -> MpC {
    mp.c(z.re, z.im)
}

/// `Σ(t) = (log t/2πi)·e₁₁ + ψ`; `ψ` need not have positive imaginary part
/// in the `(1,1)` entry.
pub fn fay_family(psi: &[Vec<MpC>], t: Complex64, mp: &mut Mp) -> Result<SiegelPoint> {
    if psi.is_empty() {
        return Err(Error::OutOfRange("degree must be positive".into()));
    }
    let r = t.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!("need 0 < |t| < 1, got {r}")));
    }
    let p = mp.prec();
    let lt = mp.ln(&mpc(t, mp));
    let two_pi = mp.pi().mul(&mp.int(2), p, RM);
    // log t/(2πi) = (arg t − i·ln|t|)/2π.
    let shift = MpC::new(lt.im.div(&two_pi, p, RM), lt.re.div(&two_pi, p, RM).neg(), p);
    let mut s = psi.to_vec();
    s[0][0] = &s[0][0] + &shift;
    SiegelPoint::new(s).map_err(|e| Error::Domain(format!("positivity fails at t = {t}: {e}")))
}

/// `Σ(t) = (ψ₁, t·a; t·aᵀ, ψ₂)`, degenerating to the block-diagonal locus.
pub fn split_family(psi1: &SiegelPoint, psi2: &SiegelPoint, a: &[Vec<Complex64>], t: Complex64, mp: &Mp) -> Result<SiegelPoint> {
    let (g1, g2) = (psi1.g(), psi2.g());
    if a.len() != g1 || a.iter().any(|r| r.len() != g2) {
        return Err(Error::OutOfRange("coupling block has the wrong shape".into()));
    }
    let base = psi1.block_diag(psi2, mp);
    let mut s: Vec<Vec<MpC>> = base.rows().to_vec();
    for i in 0..g1 {
        for j in 0..g2 {
            let c = mpc(a[i][j] * t, mp);
            s[i][g1 + j] = c.clone();
            s[g1 + j][i] = c;
        }
    }
    SiegelPoint::new(s).map_err(|e| Error::Domain(format!("positivity fails at t = {t}: {e}")))
}

/// Least-squares line through `(log|t|², log|χ_g⁸|²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// Points used in the fit.
    pub points: Vec<(f64, f64)>,
}

/// `|t| = 10^{−3−k/2}` for `k = 0..=10`, on the positive real axis.
pub fn default_grid() -> Vec<Complex64> {
    (0..=10).map(|k| Complex64::new(libm::pow(10.0, -3.0 - k as f64 / 2.0), 0.0)).collect()
}

/// Fits the vanishing order of `χ_g⁸` along a family. The two largest `|t|`
/// are dropped before fitting to keep lower-order terms out of the slope.
pub fn vanishing_order_fit(
    family: &dyn Fn(Complex64, &mut Mp) -> Result<SiegelPoint>,
    grid: &[Complex64],
    prec: usize,
) -> Result<SlopeFit> {
    if grid.len() < 6 {
        return Err(Error::OutOfRange("slope fits need at least 6 grid points".into()));
    }
    let mut ts = grid.to_vec();
    ts.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let mut mp = Mp::new(prec);
    let p = mp.prec();
    let mut points = Vec::with_capacity(ts.len() - 2);
    for &t in &ts[2..] {
        let s = family(t, &mut mp)?;
        let vals = theta_constants(&even_characteristics(s.g()), &s, p)?;
        if let Some(z) = vals.iter().find(|v| v.is_numerical_zero()) {
            return Err(Error::Precision(format!("θ{} is numerically zero at t = {t}", z.ch)));
        }
        let mut acc = mp.int(0);
        for v in &vals {
            acc = acc.add(&mp.ln_r(&v.value.abs2()), p, RM);
        }
        // log|χ⁸|² = 8·Σ log|θ|².
        points.push((2.0 * libm::log(t.norm()), 8.0 * to_f64(&acc)));
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = libm::sqrt(points.iter().map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n);
    Ok(SlopeFit { slope, intercept, residual, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn psi(mp: &Mp, rows: &[&[(f64, f64)]]) -> Vec<Vec<MpC>> {
        rows.iter().map(|r| r.iter().map(|&(a, b)| mp.c(a, b)).collect()).collect()
    }

    #[test]
    fn fay_imaginary_part() {
        let mut mp = Mp::new(64);
        let p = psi(&mp, &[&[(0.2, -0.5), (0.1, 0.2)], &[(0.1, 0.2), (0.0, 1.0)]]);
        let t = Complex64::new(1e-4, 0.0);
        let s = fay_family(&p, t, &mut mp).unwrap();
        let y = s.imag_f64();
        assert!((y[(0, 0)] - (-0.5 - libm::log(1e-4) / (2.0 * core::f64::consts::PI))).abs() < 1e-12);
        assert!((s.real_f64()[(0, 0)] - 0.2).abs() < 1e-15);
        assert!(fay_family(&p, Complex64::new(0.9, 0.0), &mut mp).is_err());
    }

    #[test]
    fn slopes() {
        let grid = default_grid();
        let fay1 = |t: Complex64, mp: &mut Mp| {
            let p = psi(mp, &[&[(0.3, 0.0)]]);
            fay_family(&p, t, mp)
        };
        let fay2 = |t: Complex64, mp: &mut Mp| {
            let p = psi(mp, &[&[(0.3, 0.0), (0.27, 0.11)], &[(0.27, 0.11), (-0.1, 0.95)]]);
            fay_family(&p, t, mp)
        };
        let split = |t: Complex64, mp: &mut Mp| {
            let a = SiegelPoint::from_c64(&[alloc::vec![(0.1, 1.1)]], 64)?;
            let b = SiegelPoint::from_c64(&[alloc::vec![(-0.25, 0.9)]], 64)?;
            split_family(&a, &b, &[alloc::vec![Complex64::new(0.7, 0.2)]], t, mp)
        };
        for (f, want) in [(&fay1 as &dyn Fn(Complex64, &mut Mp) -> Result<SiegelPoint>, 1.0), (&fay2, 4.0), (&split, 8.0)] {
            let fit = vanishing_order_fit(f, &grid, 64).unwrap();
            assert!((fit.slope - want).abs() < 0.05, "{want}: {fit:?}");
        }
    }
}
