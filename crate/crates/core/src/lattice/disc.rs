//! Discriminant groups `A_L = L^∨/L` with their finite quadratic forms.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::lattice::Lattice;
use super::matrix::{self, IMat};
use crate::arith::Q;
use crate::error::{Error, Result};

/// An element of a discriminant group: exponents modulo the orders of the
/// generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscElement {
    pub coords: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct DiscGroup {
    gram: IMat,
    /// Coset generators as rational vectors in lattice coordinates.
    gens: Vec<Vec<Q>>,
    orders: Vec<i64>,
    /// Rows of `D·Q⁻¹` for the nontrivial Smith positions: applied to a dual
    /// vector they give its generator coordinates.
    extract: Vec<Vec<i64>>,
    /// `q(gᵢ)` in `[0, 2)`.
    qgen: Vec<Q>,
    /// `b(gᵢ, gⱼ)` in `[0, 1)`.
    bgen: Vec<Vec<Q>>,
}

fn mod_q(x: Q, m: i64) -> Q {
    let m = Q::from(m);
    let k = (x / m).floor();
    x - k * m
}

impl DiscGroup {
    pub fn new(l: &Lattice) -> DiscGroup {
        let gram = l.gram().clone();
        let n = gram.len();
        let s = matrix::smith(&gram);
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut extract = Vec::new();
        for (k, &d) in s.diag.iter().enumerate() {
            if d > 1 {
                gens.push((0..n).map(|i| mod_q(Q::new(s.q[i][k], d), 1)).collect::<Vec<_>>());
                orders.push(d);
                extract.push(s.q_inv[k].iter().map(|x| x * d).collect());
            }
        }
        let mut g = DiscGroup { gram, gens, orders, extract, qgen: Vec::new(), bgen: Vec::new() };
        let m = g.gens.len();
        g.qgen = (0..m).map(|i| mod_q(g.raw_pair(&g.gens[i], &g.gens[i]), 2)).collect();
        g.bgen = (0..m).map(|i| (0..m).map(|j| mod_q(g.raw_pair(&g.gens[i], &g.gens[j]), 1)).collect()).collect();
        g
    }

    fn raw_pair(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if self.gram[i][j] != 0 && !yj.is_zero() {
                    s += *xi * *yj * self.gram[i][j];
                }
            }
        }
        s
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Number of generators (the length `l` for 2-elementary groups).
    pub fn length(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<i64>() as usize
    }

    pub fn is_two_elementary(&self) -> bool {
        self.orders.iter().all(|&d| d == 2)
    }

    pub fn generators(&self) -> &[Vec<Q>] {
        &self.gens
    }

    pub fn zero(&self) -> DiscElement {
        DiscElement { coords: vec![0; self.orders.len()] }
    }

    pub fn generator(&self, i: usize) -> DiscElement {
        let mut e = self.zero();
        e.coords[i] = 1;
        e
    }

    /// Mixed-radix index, first generator least significant.
    pub fn index(&self, e: &DiscElement) -> usize {
        let mut idx = 0usize;
        for (c, d) in e.coords.iter().zip(self.orders.iter()).rev() {
            idx = idx * (*d as usize) + *c as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> DiscElement {
        let coords = self
            .orders
            .iter()
            .map(|&d| {
                let c = idx % d as usize;
                idx /= d as usize;
                c as i64
            })
            .collect();
        DiscElement { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = DiscElement> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &DiscElement, b: &DiscElement) -> DiscElement {
        let coords = a.coords.iter().zip(&b.coords).zip(&self.orders).map(|((x, y), d)| (x + y).rem_euclid(*d)).collect();
        DiscElement { coords }
    }

    pub fn neg(&self, a: &DiscElement) -> DiscElement {
        let coords = a.coords.iter().zip(&self.orders).map(|(x, d)| (-x).rem_euclid(*d)).collect();
        DiscElement { coords }
    }

    /// Canonical coset representative with coordinates in `[0, 1)`.
    pub fn vector(&self, e: &DiscElement) -> Vec<Q> {
        let n = self.gram.len();
        let mut v = vec![Q::zero(); n];
        for (c, g) in e.coords.iter().zip(&self.gens) {
            if *c == 0 {
                continue;
            }
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += *gi * *c;
            }
        }
        v.into_iter().map(|x| mod_q(x, 1)).collect()
    }

    /// `q(γ) = γ²` in `[0, 2)`, from the generator table.
    pub fn q(&self, e: &DiscElement) -> Q {
        let m = self.orders.len();
        let mut s = Q::zero();
        for i in 0..m {
            let ci = e.coords[i];
            if ci == 0 {
                continue;
            }
            s += self.qgen[i] * (ci * ci);
            for j in i + 1..m {
                let cj = e.coords[j];
                if cj != 0 {
                    s += self.bgen[i][j] * (2 * ci * cj);
                }
            }
        }
        mod_q(s, 2)
    }

    /// `q(γ)` recomputed from the canonical representative vector.
    pub fn q_direct(&self, e: &DiscElement) -> Q {
        let v = self.vector(e);
        mod_q(self.raw_pair(&v, &v), 2)
    }

    /// `b(γ, δ)` in `[0, 1)`.
    pub fn b(&self, a: &DiscElement, b: &DiscElement) -> Q {
        let mut s = Q::zero();
        for (i, ci) in a.coords.iter().enumerate() {
            if *ci == 0 {
                continue;
            }
            for (j, cj) in b.coords.iter().enumerate() {
                if *cj != 0 {
                    s += self.bgen[i][j] * (ci * cj);
                }
            }
        }
        mod_q(s, 1)
    }

    /// The class of a dual vector, or an error if the vector is not in `L^∨`.
    pub fn from_vector(&self, v: &[Q]) -> Result<DiscElement> {
        let n = self.gram.len();
        if v.len() != n {
            return Err(Error::OutOfRange("vector length does not match rank".into()));
        }
        for i in 0..n {
            let s: Q = (0..n).map(|j| v[j] * self.gram[i][j]).sum();
            if !s.is_integer() {
                return Err(Error::OutOfRange("vector is not in the dual lattice".into()));
            }
        }
        let coords = self
            .extract
            .iter()
            .zip(&self.orders)
            .map(|(row, d)| {
                let w: Q = row.iter().zip(v).map(|(r, x)| *x * *r).sum();
                debug_assert!(w.is_integer());
                w.to_integer().rem_euclid(*d)
            })
            .collect();
        Ok(DiscElement { coords })
    }

    /// The class of `num/den ∈ L^∨` for an integer vector `num`, without the
    /// membership check of [`DiscGroup::from_vector`]. `None` signals a
    /// vector that is visibly not dual.
    pub fn from_scaled(&self, num: &[i64], den: i64) -> Option<DiscElement> {
        let coords = self
            .extract
            .iter()
            .zip(&self.orders)
            .map(|(row, d)| {
                let w: i64 = row.iter().zip(num).map(|(r, x)| r * x).sum();
                (w % den == 0).then(|| (w / den).rem_euclid(*d))
            })
            .collect::<Option<Vec<_>>>()?;
        Some(DiscElement { coords })
    }

    /// True when some element has `q(γ) ∉ Z`.
    pub fn has_odd_values(&self) -> bool {
        self.elements().any(|e| !self.q(&e).is_integer())
    }

    /// The characteristic element `1_L`: the unique `γ` with
    /// `b(γ, x) ≡ q(x) mod 1` for all `x`, found by solving over `F₂`.
    pub fn characteristic(&self) -> Result<DiscElement> {
        if !self.is_two_elementary() {
            return Err(Error::NotTwoElementary);
        }
        let m = self.orders.len();
        // Row j: Σᵢ cᵢ·2b(gᵢ,gⱼ) ≡ 2q(gⱼ) (mod 2).
        let two = Q::from(2);
        let mut rows: Vec<(Vec<u8>, u8)> = (0..m)
            .map(|j| {
                let coeffs = (0..m).map(|i| ((self.bgen[i][j] * two).to_integer() & 1) as u8).collect();
                let rhs = ((mod_q(self.qgen[j], 1) * two).to_integer() & 1) as u8;
                (coeffs, rhs)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            let Some(p) = (r..m).find(|&i| rows[i].0[c] == 1) else { continue };
            rows.swap(r, p);
            for i in 0..m {
                if i != r && rows[i].0[c] == 1 {
                    let (pr, pb) = rows[r].clone();
                    for (x, y) in rows[i].0.iter_mut().zip(pr.iter()) {
                        *x ^= y;
                    }
                    rows[i].1 ^= pb;
                }
            }
            pivots.push(c);
            r += 1;
        }
        if r != m {
            return Err(Error::Inconsistent("discriminant bilinear form is degenerate".into()));
        }
        let mut coords = vec![0i64; m];
        for (row, &c) in rows.iter().zip(&pivots) {
            coords[c] = i64::from(row.1);
        }
        let e = DiscElement { coords };
        for x in self.elements() {
            if self.b(&e, &x) != mod_q(self.q(&x), 1) {
                return Err(Error::Inconsistent("characteristic element check failed".into()));
            }
        }
        Ok(e)
    }

    /// `2q(γ) mod 4` as an integer, the index of the `g^{(i)}` component.
    pub fn q_class(&self, e: &DiscElement) -> i64 {
        let t = self.q(e) * Q::from(2);
        debug_assert!(t.is_integer());
        t.to_integer().rem_euclid(4)
    }

    /// Every generator is killed by its order.
    pub fn check_orders(&self) -> bool {
        self.gens.iter().zip(&self.orders).all(|(g, d)| g.iter().all(|x| (*x * *d).is_integer()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::StdLattice;

    fn lat(s: StdLattice) -> Lattice {
        Lattice::standard(s)
    }

    #[test]
    fn hyperbolic_plane_is_unimodular() {
        assert_eq!(lat(StdLattice::U).discriminant_group().size(), 1);
    }

    #[test]
    fn a1_generator() {
        let d = lat(StdLattice::A1).discriminant_group();
        assert_eq!(d.orders(), &[2]);
        let g = d.generator(0);
        assert_eq!(d.q(&g), Q::new(3, 2)); // −1/2 mod 2
        assert_eq!(d.characteristic().unwrap(), g);
    }

    #[test]
    fn rescaled_hyperbolic_plane() {
        let d = lat(StdLattice::U2).discriminant_group();
        assert_eq!(d.orders(), &[2, 2]);
        for e in d.elements() {
            assert!(d.q(&e).is_integer());
        }
        assert_eq!(d.b(&d.generator(0), &d.generator(1)), Q::new(1, 2));
        assert_eq!(d.characteristic().unwrap(), d.zero());
    }

    #[test]
    fn fast_and_direct_q_agree() {
        let l = lat(StdLattice::U2).direct_sum(&lat(StdLattice::D2k(2))).direct_sum(&lat(StdLattice::A1));
        let d = l.discriminant_group();
        for e in d.elements() {
            assert_eq!(d.q(&e), d.q_direct(&e));
            let v = d.vector(&e);
            assert_eq!(d.from_vector(&v).unwrap(), e);
            let den = v.iter().fold(1i64, |a, x| num_integer::lcm(a, *x.denom()));
            let num: Vec<i64> = v.iter().map(|x| (*x * den).to_integer()).collect();
            assert_eq!(d.from_scaled(&num, den), Some(e));
        }
        assert!(d.check_orders());
    }

    #[test]
    fn e8_rescaled_length() {
        let d = lat(StdLattice::E8Rescaled2).discriminant_group();
        assert_eq!(d.length(), 8);
        assert!(d.is_two_elementary());
    }
}
