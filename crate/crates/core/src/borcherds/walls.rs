use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::enumerate::short_vectors;
use super::vvform::construct_f;
use crate::arith::{q, Q};
use crate::error::{Error, Result};
use crate::lattice::{matrix, Lattice};

/// One wall `λ^⊥`, with `λ = G⁻¹m ∈ L^∨`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    /// `Gλ`, so that `⟨λ, v⟩ = m·v`.
    pub m: Vec<i64>,
    pub lambda: Vec<Q>,
    pub norm: Q,
    /// Index of the class of `λ` in `A_L`.
    pub class: usize,
    /// The principal-part coefficient `c_λ(λ²/2)` of `F_L`.
    pub coeff: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WallReport {
    pub walls: Vec<Wall>,
    /// `max |⟨λ, v₁⟩|` over walls meeting the segment, bounded a priori.
    pub derived_bound: f64,
    /// The slab actually searched: the larger of the requested and derived bounds.
    pub bound_used: f64,
}

/// Walls `λ^⊥` with `λ² ∈ norms` and `c_λ(λ²/2) ≠ 0` in `F_L` that separate
/// `v₁` from `v₂` (`⟨λ,v₁⟩⟨λ,v₂⟩ < 0`). Both `±λ` are listed.
///
/// Every wall crossing the segment is orthogonal to some `w` on it, which
/// gives `⟨λ,v₁⟩² ≤ |λ²|·(max(v₁², ⟨v₁,v₂⟩)²/min(v₁², v₂²) − v₁²)`.
pub fn separating_walls(l: &Lattice, v1: &[i64], v2: &[i64], norms: &[Q], pairing_bound: Option<f64>) -> Result<WallReport> {
    let r = l.rank();
    if v1.len() != r || v2.len() != r {
        return Err(Error::OutOfRange("vector length does not match the lattice".into()));
    }
    if norms.iter().any(|n| *n != Q::from(-2) && *n != q(-1, 2)) {
        return Err(Error::OutOfRange("norms must be −2 or −1/2".into()));
    }
    let (a11, a12, a22) = (l.pair(v1, v1), l.pair(v1, v2), l.pair(v2, v2));
    if a11 <= 0 || a22 <= 0 || a12 <= 0 {
        return Err(Error::Domain("v₁, v₂ must lie in the same positive cone".into()));
    }
    let numax = norms.iter().map(|n| -(*n.numer() as f64) / *n.denom() as f64).fold(0.0, f64::max);
    let p = (a11.max(a12) as f64).powi(2) / a11.min(a22) as f64 - a11 as f64;
    let derived_bound = (numax * p.max(0.0)).sqrt();
    let bound_used = pairing_bound.unwrap_or(0.0).max(derived_bound);
    if norms.is_empty() {
        return Ok(WallReport { walls: Vec::new(), derived_bound, bound_used });
    }

    let f = construct_f(l, Q::from(1))?;
    let gi = matrix::inverse_q(l.gram());
    let rat = |x: i64| BigRational::from_integer(BigInt::from(x));
    let v1r: Vec<BigRational> = v1.iter().map(|&x| rat(x)).collect();
    let two = rat(2);
    let qf: Vec<Vec<BigRational>> =
        (0..r).map(|i| (0..r).map(|j| &two * &v1r[i] * &v1r[j] / rat(a11) - &gi[i][j]).collect()).collect();
    let radius = 2.0 * bound_used * bound_used / a11 as f64 + numax;

    let den = gi.iter().flatten().fold(BigInt::from(1), |a, x| num_integer::Integer::lcm(&a, x.denom()));
    let den_i = den.to_i64().ok_or_else(|| Error::Precision("Gram determinant overflows i64".into()))?;
    let h: Vec<Vec<i64>> = gi
        .iter()
        .map(|row| row.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer().to_i64()).collect::<Option<_>>())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Precision("inverse Gram matrix overflows i64".into()))?;
    let disc = f.rep().disc();
    let mut walls = Vec::new();
    for m in short_vectors(&qf, radius)? {
        let hm: Vec<i64> = h.iter().map(|row| row.iter().zip(&m).map(|(a, b)| a * b).sum()).collect();
        let norm = Q::new(hm.iter().zip(&m).map(|(a, b)| a * b).sum(), den_i);
        if !norms.contains(&norm) {
            continue;
        }
        let p1: i64 = m.iter().zip(v1).map(|(a, b)| a * b).sum();
        let p2: i64 = m.iter().zip(v2).map(|(a, b)| a * b).sum();
        let class = disc
            .from_scaled(&hm, den_i)
            .map(|e| disc.index(&e))
            .ok_or_else(|| Error::Inconsistent("wall vector is not dual".into()))?;
        let c = f.coeff(class, norm / Q::from(2));
        if c.is_zero() {
            continue;
        }
        if p1 == 0 || p2 == 0 {
            return Err(Error::Domain(format!("degenerate: an endpoint lies on the wall of {m:?}")));
        }
        if (p1 < 0) == (p2 < 0) {
            continue;
        }
        let coeff = c
            .to_rational()
            .filter(|x| x.is_integer())
            .map(|x| x.to_integer())
            .ok_or_else(|| Error::Inconsistent("non-integral principal part".into()))?;
        debug_assert!(!coeff.is_negative() || class == f.rep().characteristic_index());
        let lambda = hm.iter().map(|&x| Q::new(x, den_i)).collect();
        walls.push(Wall { m, lambda, norm, class, coeff });
    }
    walls.sort_by(|a, b| a.m.cmp(&b.m));
    Ok(WallReport { walls, derived_bound, bound_used })
}
