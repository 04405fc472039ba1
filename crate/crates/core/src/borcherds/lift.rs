use alloc::vec::Vec;

use crate::arith::{Mp, MpC};
use crate::error::Result;
use crate::modular::analytic;
use crate::weil::{Mp2, WeilRep};

/// Coset representatives `{1, S, ST, ST², ST³, V}` of `MΓ₀(4)\Mp₂(Z)`.
pub fn lift_representatives() -> [Mp2; 6] {
    let st = |l| Mp2::S.mul(&Mp2::t_pow(l));
    [Mp2::ONE, Mp2::S, st(1), st(2), st(3), Mp2::v()]
}

/// `B_Λ[φ](τ) = Σ_g φ|_g(τ)·ρ_Λ(g⁻¹)e₀` for `φ = f_k⁽⁰⁾`, `k = 8 + σ(Λ)`, with
/// `φ|_g(τ) = φ(gτ)·j(g,τ)^{8−k}`. Every `φ(gτ)` is computed from eta and
/// theta values after reduction to the fundamental domain, so the result does
/// not depend on any q-expansion.
pub fn lift_oracle(rep: &WeilRep, tau: &MpC, mp: &mut Mp) -> Result<Vec<MpC>> {
    let k = 8 + rep.sigma();
    let mut out: Vec<MpC> = (0..rep.size()).map(|_| mp.czero()).collect();
    let e0 = rep.basis(0);
    for g in lift_representatives() {
        let gt = g.act(tau, mp);
        let j = g.j(tau, mp);
        let slash = &analytic::f0(k, &gt, mp)? * &j.powi(8 - k);
        let v = rep.apply(&g.inverse(), &e0);
        for (o, c) in out.iter_mut().zip(&v) {
            if !c.is_zero() {
                *o = &*o + &(&c.embed(mp) * &slash);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::borcherds::construct_f;
    use crate::lattice::LatticeExpr;

    #[test]
    fn lift_matches_series() {
        let mut mp = Mp::new(128);
        for s in ["U+A1plus", "U+U(2)", "A1plus^2+A1"] {
            let l = LatticeExpr::parse(s).unwrap().eval().unwrap();
            let f = construct_f(&l, q(40, 1)).unwrap();
            let tau = mp.c(0.1, 1.0);
            let (vals, tail) = f.eval(&tau, &mut mp).unwrap();
            let lift = lift_oracle(f.rep(), &tau, &mut mp).unwrap();
            for (a, b) in vals.iter().zip(&lift) {
                assert!(a.dist(b) < 1e-20, "{s}: {:?} vs {:?} (tail {tail:e})", a.to_c64(), b.to_c64());
            }
        }
    }

    fn act(rep: &WeilRep, g: &Mp2, v: &[MpC], mp: &mut Mp) -> Vec<MpC> {
        let m = rep.matrix(g).unwrap();
        (0..v.len())
            .map(|i| {
                let mut acc = mp.czero();
                for (j, vj) in v.iter().enumerate() {
                    let e = m.get(i, j);
                    if !e.is_zero() {
                        acc = &acc + &(&e.embed(mp) * vj);
                    }
                }
                acc
            })
            .collect()
    }

    #[test]
    fn series_transforms_under_t_and_s() {
        let mut mp = Mp::new(128);
        for s in ["U+A1plus", "A1plus^2+A1", "U+U(2)+A1"] {
            let l = LatticeExpr::parse(s).unwrap().eval().unwrap();
            let f = construct_f(&l, q(40, 1)).unwrap();
            let tau = mp.c(0.21, 1.1);
            let (v, _) = f.eval(&tau, &mut mp).unwrap();
            let (vt, _) = f.eval(&Mp2::T.act(&tau, &mp), &mut mp).unwrap();
            let want = act(f.rep(), &Mp2::T, &v, &mut mp);
            assert!(vt.iter().zip(&want).all(|(a, b)| a.dist(b) < 1e-20), "{s} T");
            // F(−1/τ) = √τ^σ ρ(S) F(τ).
            let (vs, _) = f.eval(&Mp2::S.act(&tau, &mp), &mut mp).unwrap();
            let j = Mp2::S.j(&tau, &mut mp).powi(f.rep().sigma());
            let want: Vec<MpC> = act(f.rep(), &Mp2::S, &v, &mut mp).iter().map(|x| x * &j).collect();
            assert!(vs.iter().zip(&want).all(|(a, b)| a.dist(b) < 1e-20), "{s} S");
        }
    }
}
