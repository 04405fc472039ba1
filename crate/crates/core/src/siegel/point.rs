use alloc::vec::Vec;

use astro_float::BigFloat;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::arith::mp::{to_f64, NegF, RM};
use crate::arith::{Mp, MpC};
use crate::error::{Error, Result};

/// A symmetric complex `g×g` matrix with positive-definite imaginary part.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    sigma: Vec<Vec<MpC>>,
}

impl SiegelPoint {
    pub fn new(sigma: Vec<Vec<MpC>>) -> Result<SiegelPoint> {
        let g = sigma.len();
        if sigma.iter().any(|r| r.len() != g) {
            return Err(Error::OutOfRange("matrix must be square".into()));
        }
        for i in 0..g {
            for j in 0..i {
                if sigma[i][j].dist(&sigma[j][i]) > 0.0 {
                    return Err(Error::Domain("matrix must be symmetric".into()));
                }
            }
        }
        let p = SiegelPoint { sigma };
        p.check_positive()?;
        Ok(p)
    }

    /// From `(re, im)` pairs at the given precision.
    pub fn from_c64(rows: &[Vec<(f64, f64)>], prec: usize) -> Result<SiegelPoint> {
        Self::new(rows.iter().map(|r| r.iter().map(|&(a, b)| MpC::from_f64(a, b, prec.max(64))).collect()).collect())
    }

    /// The degree-0 point.
    pub fn empty() -> SiegelPoint {
        SiegelPoint { sigma: Vec::new() }
    }

    pub fn g(&self) -> usize {
        self.sigma.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &MpC {
        &self.sigma[i][j]
    }

    pub fn rows(&self) -> &[Vec<MpC>] {
        &self.sigma
    }

    pub fn imag_f64(&self) -> DMatrix<f64> {
        let g = self.g();
        DMatrix::from_fn(g, g, |i, j| to_f64(&self.sigma[i][j].im))
    }

    pub fn real_f64(&self) -> DMatrix<f64> {
        let g = self.g();
        DMatrix::from_fn(g, g, |i, j| to_f64(&self.sigma[i][j].re))
    }

    /// Cholesky of `Im Σ` with a relative pivot guard.
    fn check_positive(&self) -> Result<()> {
        if self.g() == 0 {
            return Ok(());
        }
        let y = self.imag_f64();
        let scale = y.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let chol = y.cholesky().ok_or_else(|| Error::Domain("Im Σ is not positive definite".into()))?;
        let l = chol.l();
        if (0..self.g()).any(|i| l[(i, i)] * l[(i, i)] <= 1e-13 * scale) {
            return Err(Error::Domain("Im Σ is numerically singular".into()));
        }
        Ok(())
    }

    /// Smallest eigenvalue of `Im Σ`.
    pub fn lambda_min(&self) -> f64 {
        if self.g() == 0 {
            return f64::INFINITY;
        }
        SymmetricEigen::new(self.imag_f64()).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ + B` for an integer symmetric `B`.
    pub fn add_integer(&self, b: &[Vec<i64>]) -> Result<SiegelPoint> {
        let g = self.g();
        let mut s = self.sigma.clone();
        for i in 0..g {
            for j in 0..g {
                let p = s[i][j].prec();
                let re = s[i][j].re.add(&BigFloat::from_i64(b[i][j], p), p, RM);
                s[i][j] = MpC::new(re, s[i][j].im.clone(), p);
            }
        }
        Self::new(s)
    }

    /// `AᵀΣA` for an integer matrix `A`.
    pub fn transform(&self, a: &[Vec<i64>], mp: &Mp) -> Result<SiegelPoint> {
        let g = self.g();
        let mut out = Vec::with_capacity(g);
        for i in 0..g {
            let mut row = Vec::with_capacity(g);
            for j in 0..g {
                let mut acc = mp.czero();
                for k in 0..g {
                    for l in 0..g {
                        let c = a[k][i] * a[l][j];
                        if c != 0 {
                            acc = &acc + &(&mp.cint(c) * &self.sigma[k][l]);
                        }
                    }
                }
                row.push(acc);
            }
            out.push(row);
        }
        Self::new(out)
    }

    /// `diag(self, other)`.
    pub fn block_diag(&self, other: &SiegelPoint, mp: &Mp) -> SiegelPoint {
        let (g1, g2) = (self.g(), other.g());
        let n = g1 + g2;
        let sigma = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < g1, j < g1) {
                        (true, true) => self.sigma[i][j].clone(),
                        (false, false) => other.sigma[i - g1][j - g1].clone(),
                        _ => mp.czero(),
                    })
                    .collect()
            })
            .collect();
        SiegelPoint { sigma }
    }

    /// `det Im Σ` by elimination at working precision.
    pub fn det_imag(&self, mp: &Mp) -> BigFloat {
        let g = self.g();
        let p = mp.prec();
        let mut a: Vec<Vec<BigFloat>> = self.sigma.iter().map(|r| r.iter().map(|z| z.im.clone()).collect()).collect();
        let mut det = mp.int(1);
        for c in 0..g {
            // Im Σ is positive definite, so diagonal pivots never vanish.
            let piv = a[c][c].clone();
            det = det.mul(&piv, p, RM);
            for r in c + 1..g {
                let f = a[r][c].div(&piv, p, RM);
                for k in c..g {
                    let v = f.mul(&a[c][k], p, RM);
                    a[r][k] = a[r][k].add(&v.negf(), p, RM);
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(SiegelPoint::from_c64(&[alloc::vec![(0.0, -1.0)]], 64).is_err());
        assert!(SiegelPoint::from_c64(&[alloc::vec![(0.0, 1.0), (0.0, 2.0)], alloc::vec![(0.0, 2.0), (0.0, 1.0)]], 64).is_err());
        assert!(SiegelPoint::from_c64(&[alloc::vec![(0.0, 1.0), (0.1, 0.0)], alloc::vec![(0.2, 0.0), (0.0, 1.0)]], 64).is_err());
    }

    #[test]
    fn determinant_and_transform() {
        let mp = Mp::new(128);
        let s = SiegelPoint::from_c64(&[alloc::vec![(0.1, 2.0), (0.3, 0.5)], alloc::vec![(0.3, 0.5), (-0.2, 1.5)]], 128).unwrap();
        assert!((to_f64(&s.det_imag(&mp)) - 2.75).abs() < 1e-15);
        let t = s.transform(&[alloc::vec![1, 1], alloc::vec![0, 1]], &mp).unwrap();
        assert!((to_f64(&t.det_imag(&mp)) - 2.75).abs() < 1e-15);
        assert!((s.lambda_min() - (1.75 - libm::sqrt(0.0625 + 0.25))).abs() < 1e-12);
    }
}
