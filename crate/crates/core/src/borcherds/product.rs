use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::enumerate::short_vectors;
use super::vvform::{check_split, VVForm};
use crate::arith::Q;
use crate::error::{Error, Result};
use crate::lattice::{matrix, Lattice};

/// A point `z = x + iy ∈ L ⊗ C` of the tube domain for `Λ = U(N) ⊕ L`, in the
/// coordinates of the basis of `L`.
#[derive(Clone, Debug)]
pub struct TubePoint {
    pub n: i64,
    pub lattice: Lattice,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TubePoint {
    pub fn new(n: i64, lattice: &Lattice, x: Vec<f64>, y: Vec<f64>) -> Result<TubePoint> {
        if x.len() != lattice.rank() || y.len() != lattice.rank() {
            return Err(Error::OutOfRange("tube point has the wrong dimension".into()));
        }
        if n <= 0 {
            return Err(Error::OutOfRange("N must be positive".into()));
        }
        let p = TubePoint { n, lattice: lattice.clone(), x, y };
        if p.y_norm() <= 0.0 {
            return Err(Error::Domain("(Im z)² must be positive".into()));
        }
        Ok(p)
    }

    fn pair_f(&self, a: &[f64], b: &[f64]) -> f64 {
        let g = self.lattice.gram();
        (0..a.len()).map(|i| (0..b.len()).map(|j| a[i] * g[i][j] as f64 * b[j]).sum::<f64>()).sum()
    }

    /// `(Im z)²`.
    pub fn y_norm(&self) -> f64 {
        self.pair_f(&self.y, &self.y)
    }

    pub fn z(&self) -> Vec<Complex64> {
        self.x.iter().zip(&self.y).map(|(a, b)| Complex64::new(*a, *b)).collect()
    }
}

/// Truncated product `Π (1 − e(a/N + ⟨λ,z⟩))^{c_{(a/N,0,λ)}(λ²/2)}` over
/// `λ ∈ L^∨` with `0 < ⟨λ, Im z⟩ ≤ bound` and `0 ≤ a < N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductValue {
    pub log_abs: f64,
    /// Argument in `(−π, π]`.
    pub arg: f64,
    /// Heuristic size of the dropped log-tail: `Σ |c|·|e(⟨λ,z⟩)|` over the
    /// outer half-shell `bound/2 < ⟨λ, Im z⟩ ≤ bound`.
    pub tail: f64,
    /// Number of factors with nonzero exponent.
    pub terms: usize,
    pub bound: f64,
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Evaluates the product for `F` on `Λ = U(N) ⊕ L` at `z`. With a Weyl vector
/// `ρ` the factor `e(⟨ρ, z⟩)` is included; without it only the product part
/// is returned. Factors with `λ = 0` are constant and left out.
pub fn product_eval(f: &VVForm, z: &TubePoint, weyl: Option<&[Q]>, bound: f64) -> Result<ProductValue> {
    let l = &z.lattice;
    check_split(f.lattice(), z.n, l)?;
    if !(bound > 0.0) {
        return Err(Error::OutOfRange("bound must be positive".into()));
    }
    let r = l.rank();
    let gi = matrix::inverse_q(l.gram());
    let yr: Vec<BigRational> =
        z.y.iter().map(|v| BigRational::from_float(*v).ok_or_else(|| Error::Domain("non-finite Im z".into()))).collect::<Result<_>>()?;
    let gy: Vec<BigRational> = (0..r).map(|i| (0..r).map(|j| &yr[j] * rat(l.gram()[i][j])).sum()).collect();
    let y2: BigRational = (0..r).map(|i| &yr[i] * &gy[i]).sum();
    // With λ = G⁻¹m: ⟨λ,y⟩ = mᵀy and λ² = mᵀG⁻¹m, so the majorant
    // 2⟨λ,y⟩²/y² − λ² is positive definite in m.
    let two = rat(2);
    let qf: Vec<Vec<BigRational>> =
        (0..r).map(|i| (0..r).map(|j| &two * &yr[i] * &yr[j] / &y2 - &gi[i][j]).collect()).collect();
    let y2f = y2.to_f64().unwrap_or(f64::NAN);
    let nmin = f.min_exponent().unwrap_or_else(Q::zero).min(Q::zero());
    let nmin_f = *nmin.numer() as f64 / *nmin.denom() as f64;
    let radius = 2.0 * bound * bound / y2f - 2.0 * nmin_f;
    let needed = bound * bound / (2.0 * y2f);
    if let Some(t) = f.trunc() {
        let tf = *t.numer() as f64 / *t.denom() as f64;
        if needed >= tf {
            return Err(Error::Precision(format!(
                "order {t} is too small for bound {bound} at (Im z)² = {y2f}; need order > {needed:.3}"
            )));
        }
    }
    // Integer form of G⁻¹ for the exact per-candidate checks.
    let den = gi.iter().flatten().fold(BigInt::from(1), |a, x| num_integer::Integer::lcm(&a, x.denom()));
    let h: Vec<Vec<i64>> = gi
        .iter()
        .map(|row| row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer().to_i64()).collect::<Option<_>>())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Precision("inverse Gram matrix overflows i64".into()))?;
    let den = den.to_i64().ok_or_else(|| Error::Precision("Gram determinant overflows i64".into()))?;
    let big_den = num_integer::lcm(den, z.n);
    let disc = f.rep().disc();
    let mut cache: BTreeMap<(usize, Q), f64> = BTreeMap::new();
    let mut factors: Vec<(f64, f64, f64)> = Vec::new(); // (c, ⟨λ,y⟩, phase)
    for m in short_vectors(&qf, radius)? {
        let s: f64 = m.iter().zip(&z.y).map(|(a, b)| *a as f64 * b).sum();
        if s <= 0.0 || s > bound {
            continue;
        }
        // λ = hm/den and λ² = mᵀhm/den.
        let hm: Vec<i64> = h.iter().map(|row| row.iter().zip(&m).map(|(a, b)| a * b).sum()).collect();
        let norm: i64 = hm.iter().zip(&m).map(|(a, b)| a * b).sum();
        let n = Q::new(norm, 2 * den);
        if n < nmin {
            continue;
        }
        if f.trunc().is_some_and(|t| n >= t) {
            return Err(Error::Precision(format!("coefficient at q^{n} is beyond the truncation")));
        }
        let xl: f64 = m.iter().zip(&z.x).map(|(a, b)| *a as f64 * b).sum();
        for a in 0..z.n {
            let mut w = Vec::with_capacity(r + 2);
            w.push(a * (big_den / z.n));
            w.push(0);
            w.extend(hm.iter().map(|v| v * (big_den / den)));
            let e = disc.from_scaled(&w, big_den).ok_or_else(|| Error::Inconsistent("product index is not dual".into()))?;
            let idx = disc.index(&e);
            let c = match cache.get(&(idx, n)) {
                Some(c) => *c,
                None => {
                    let c = f
                        .coeff(idx, n)
                        .to_rational()
                        .and_then(|q| q.to_f64())
                        .ok_or_else(|| Error::Inconsistent("non-rational exponent in the product".into()))?;
                    cache.insert((idx, n), c);
                    c
                }
            };
            if c != 0.0 {
                factors.push((c, s, a as f64 / z.n as f64 + xl));
            }
        }
    }
    let logs = log_factors(&factors);
    let (mut log_abs, mut arg) = (0.0, 0.0);
    let mut tail = 0.0;
    for ((c, s, _), lg) in factors.iter().zip(&logs) {
        log_abs += c * lg.re;
        arg += c * lg.im;
        if *s > bound / 2.0 {
            tail += c.abs() * (-2.0 * PI * s).exp();
        }
    }
    if let Some(rho) = weyl {
        if rho.len() != r {
            return Err(Error::OutOfRange("Weyl vector has the wrong dimension".into()));
        }
        let rf: Vec<f64> = rho.iter().map(|q| *q.numer() as f64 / *q.denom() as f64).collect();
        log_abs -= 2.0 * PI * z.pair_f(&rf, &z.y);
        arg += 2.0 * PI * z.pair_f(&rf, &z.x);
    }
    let arg = -(-arg + PI).rem_euclid(2.0 * PI) + PI;
    Ok(ProductValue { log_abs, arg, tail, terms: factors.len(), bound })
}

/// `log(1 − e(phase)·e^{−2πs})` per factor, in input order.
fn log_factors(factors: &[(f64, f64, f64)]) -> Vec<Complex64> {
    let one = |&(_, s, ph): &(f64, f64, f64)| {
        let u = Complex64::from_polar((-2.0 * PI * s).exp(), 2.0 * PI * ph);
        (Complex64::new(1.0, 0.0) - u).ln()
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        factors.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        factors.iter().map(one).collect()
    }
}

/// The period vector `(−z²/2, 1/N, z)` in `U(N) ⊕ L` coordinates.
pub fn tube_period(z: &TubePoint) -> Vec<Complex64> {
    let g = z.lattice.gram();
    let zz = z.z();
    let r = zz.len();
    let z2: Complex64 = (0..r).map(|i| (0..r).map(|j| zz[i] * g[i][j] as f64 * zz[j]).sum::<Complex64>()).sum();
    let mut v = Vec::with_capacity(r + 2);
    v.push(-z2 / 2.0);
    v.push(Complex64::new(1.0 / z.n as f64, 0.0));
    v.extend(zz);
    v
}

/// `K^p·|value|²` with `K = ⟨η,η̄⟩/|⟨η,l⟩|²`.
pub fn petersson_norm_point(gram: &[Vec<i64>], eta: &[Complex64], l: &[f64], p: f64, value_abs: f64) -> Result<f64> {
    let n = gram.len();
    if eta.len() != n || l.len() != n {
        return Err(Error::OutOfRange("vector length does not match the lattice".into()));
    }
    let bil = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        (0..n).map(|i| (0..n).map(|j| a[i] * gram[i][j] as f64 * b[j]).sum::<Complex64>()).sum()
    };
    let conj: Vec<Complex64> = eta.iter().map(|c| c.conj()).collect();
    let lc: Vec<Complex64> = l.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let hh = bil(eta, &conj).re;
    let scale = eta.iter().map(|c| c.norm_sqr()).sum::<f64>();
    if bil(eta, eta).norm() > 1e-9 * scale.max(1.0) {
        return Err(Error::Domain("η is not isotropic".into()));
    }
    if hh <= 0.0 {
        return Err(Error::Domain("⟨η, η̄⟩ must be positive".into()));
    }
    let el = bil(eta, &lc).norm_sqr();
    if el == 0.0 {
        return Err(Error::Domain("⟨η, l⟩ vanishes".into()));
    }
    Ok((hh / el).powf(p) * value_abs * value_abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::borcherds::construct_f;
    use crate::lattice::LatticeExpr;

    fn lat(s: &str) -> Lattice {
        LatticeExpr::parse(s).unwrap().eval().unwrap()
    }

    fn e8_2_point(u: (f64, f64), x: f64) -> (Vec<f64>, Vec<f64>) {
        let mut y = alloc::vec![0.0; 10];
        y[0] = u.0;
        y[1] = u.1;
        let mut xs = alloc::vec![0.0; 10];
        xs[0] = x;
        xs[3] = -0.37 * x;
        (xs, y)
    }

    #[test]
    fn constant_for_empty_divisor() {
        // Weight 0 and no divisor: log|Π| is affine in Im z and blind to Re z.
        let l = lat("U(2)+E8(2)");
        let f = construct_f(&lat("U(2)+U(2)+E8(2)"), q(2, 1)).unwrap();
        let val = |u: (f64, f64), x: f64| {
            let (xs, y) = e8_2_point(u, x);
            let p = TubePoint::new(2, &l, xs, y).unwrap();
            product_eval(&f, &p, None, 6.5).unwrap()
        };
        let base = val((3.0, 3.0), 0.0);
        assert!(base.terms > 0);
        for x in [0.1, 0.3, 0.77] {
            assert!((val((3.0, 3.0), x).log_abs - base.log_abs).abs() < 1e-8);
        }
        let a = base.log_abs;
        let b = val((3.2, 3.0), 0.0).log_abs;
        let c = val((3.4, 3.0), 0.0).log_abs;
        assert!((a - 2.0 * b + c).abs() < 1e-8, "{a} {b} {c}");
    }

    #[test]
    fn wall_slope() {
        let l = lat("U+E8(2)");
        let f = construct_f(&lat("U(2)+U+E8(2)"), q(3, 1)).unwrap();
        let pts: Vec<(f64, f64)> = [1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&e| {
                let mut y = alloc::vec![0.0; 10];
                y[0] = 3.0;
                y[1] = 3.0 + e;
                let p = TubePoint::new(2, &l, alloc::vec![0.0; 10], y).unwrap();
                (libm::log(e), product_eval(&f, &p, None, 4.0).unwrap().log_abs)
            })
            .collect();
        for w in pts.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            assert!((slope - 1.0).abs() < 0.05, "{slope}");
        }
    }

    #[test]
    fn truncation_consistency() {
        let l = lat("U+A1+A1");
        let f = construct_f(&lat("U(2)+U+A1+A1"), q(3, 1)).unwrap();
        let p = TubePoint::new(2, &l, alloc::vec![0.1, -0.3, 0.2, 0.05], alloc::vec![2.5, 3.0, 0.1, -0.2]).unwrap();
        let a = product_eval(&f, &p, None, 3.0).unwrap();
        let b = product_eval(&f, &p, None, 6.0).unwrap();
        assert!(a.tail > 0.0);
        assert!((a.log_abs - b.log_abs).abs() <= a.tail, "{a:?} {b:?}");
    }

    #[test]
    fn shallow_point_reports_order() {
        let l = lat("U+E8(2)");
        let f = construct_f(&lat("U(2)+U+E8(2)"), q(1, 1)).unwrap();
        let mut y = alloc::vec![0.0; 10];
        y[0] = 1.0;
        y[1] = 1.0;
        let p = TubePoint::new(2, &l, alloc::vec![0.0; 10], y).unwrap();
        assert!(matches!(product_eval(&f, &p, None, 5.0), Err(Error::Precision(_))));
    }

    #[test]
    fn tube_kernel() {
        let l = lat("U+A1");
        let big = lat("U(2)+U+A1");
        let p = TubePoint::new(2, &l, alloc::vec![0.3, -0.2, 0.1], alloc::vec![1.0, 2.0, 0.5]).unwrap();
        let eta = tube_period(&p);
        let e = [1.0, 0.0, 0.0, 0.0, 0.0];
        let k = petersson_norm_point(big.gram(), &eta, &e, 1.0, 1.0).unwrap();
        assert!((k - 2.0 * p.y_norm()).abs() < 1e-12);
        let eta2: Vec<Complex64> = eta.iter().map(|c| c * Complex64::new(2.0, -1.0)).collect();
        for pw in [0.0, 1.5, 4.0] {
            let a = petersson_norm_point(big.gram(), &eta, &e, pw, 0.7).unwrap();
            let b = petersson_norm_point(big.gram(), &eta2, &e, pw, 0.7).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
        assert_eq!(petersson_norm_point(big.gram(), &eta, &e, 0.0, 3.0).unwrap(), 9.0);
        let bad: Vec<Complex64> = (0..5).map(|i| Complex64::new(i as f64, 1.0)).collect();
        assert!(petersson_norm_point(big.gram(), &bad, &e, 1.0, 1.0).is_err());
    }
}
