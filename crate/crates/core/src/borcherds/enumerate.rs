//! Short vectors of positive-definite rational quadratic forms.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `Q(x) = Σᵢ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)²`, computed exactly.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub d: Vec<BigRational>,
    pub mu: Vec<Vec<BigRational>>,
}

/// Exact `LDLᵀ` of a symmetric rational matrix; errors unless positive definite.
pub fn ldl(q: &[Vec<BigRational>]) -> Result<Ldl> {
    let n = q.len();
    let mut a: Vec<Vec<BigRational>> = q.to_vec();
    let mut d = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let p = a[i][i].clone();
        if !p.is_positive() {
            return Err(Error::Domain("quadratic form is not positive definite".into()));
        }
        for j in i + 1..n {
            mu[i][j] = &a[i][j] / &p;
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let v = &mu[i][j] * &a[i][k];
                a[j][k] -= v;
            }
        }
        d.push(p);
    }
    Ok(Ldl { d, mu })
}

/// All nonzero `x ∈ Zⁿ` with `Q(x) ≤ radius`, via Fincke–Pohst on the exact
/// decomposition. The search runs in `f64` with the radius widened by a
/// relative `1e-9`; callers filter the candidates exactly.
pub fn short_vectors(q: &[Vec<BigRational>], radius: f64) -> Result<Vec<Vec<i64>>> {
    let n = q.len();
    let f = ldl(q)?;
    let d: Vec<f64> = f.d.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let mu: Vec<Vec<f64>> = f.mu.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    if d.iter().chain(mu.iter().flatten()).any(|x| !x.is_finite()) {
        return Err(Error::Precision("form entries overflow f64".into()));
    }
    let r = radius * (1.0 + 1e-9) + 1e-12;
    let mut out = Vec::new();
    if n == 0 || r < 0.0 {
        return Ok(out);
    }
    let mut x = vec![0i64; n];
    // rem[i]: budget left for coordinates 0..=i once i+1.. are fixed.
    let mut rem = vec![0.0f64; n + 1];
    rem[n] = r;
    search(n - 1, &d, &mu, &mut x, &mut rem, &mut out);
    Ok(out)
}

fn search(i: usize, d: &[f64], mu: &[Vec<f64>], x: &mut [i64], rem: &mut [f64], out: &mut Vec<Vec<i64>>) {
    let n = d.len();
    let c: f64 = -(i + 1..n).map(|j| mu[i][j] * x[j] as f64).sum::<f64>();
    let budget = rem[i + 1];
    let half = (budget.max(0.0) / d[i]).sqrt();
    let lo = (c - half).ceil() as i64;
    let hi = (c + half).floor() as i64;
    for v in lo..=hi {
        let t = v as f64 - c;
        let left = budget - d[i] * t * t;
        if left < -1e-12 * budget.abs().max(1.0) {
            continue;
        }
        x[i] = v;
        rem[i] = left;
        if i == 0 {
            if x.iter().any(|&e| e != 0) {
                out.push(x.to_vec());
            }
        } else {
            search(i - 1, d, mu, x, rem, out);
        }
    }
    x[i] = 0;
}

/// `xᵀQx` exactly.
pub fn eval_form(q: &[Vec<BigRational>], x: &[i64]) -> BigRational {
    let mut s = BigRational::zero();
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (j, xj) in x.iter().enumerate() {
            if *xj != 0 {
                s += &q[i][j] * BigRational::from_integer((xi * xj).into());
            }
        }
    }
    s
}
