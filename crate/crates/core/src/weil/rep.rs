use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::mp2::{Letter, Mp2};
use crate::arith::{Cyc8, Q};
use crate::error::{Error, Result};
use crate::lattice::{DiscElement, DiscGroup, Lattice};

/// Largest `l` for which dense matrices are materialized.
pub const DENSE_MAX_LENGTH: usize = 8;

/// The Weil representation `ρ_Λ` of a 2-elementary lattice, acting on
/// vectors indexed by the discriminant group (index = bit mask of generator
/// coordinates, first generator least significant).
#[derive(Clone, Debug)]
pub struct WeilRep {
    disc: DiscGroup,
    sigma: i64,
    /// `4q(γ) mod 8`.
    q4: Vec<i64>,
    /// Columns of the `F₂` matrix of `2b` on generators, as bit masks.
    bmat: Vec<u64>,
    /// Index of `1_Λ`.
    one: usize,
}

/// A dense `|A|×|A|` matrix over `Q(ζ₈)`; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilMatrix {
    pub n: usize,
    pub entries: Vec<Cyc8>,
}

impl WeilRep {
    pub fn new(lattice: &Lattice) -> Result<WeilRep> {
        let disc = lattice.discriminant_group();
        if !disc.is_two_elementary() {
            return Err(Error::NotTwoElementary);
        }
        let l = disc.length();
        if l > 24 {
            return Err(Error::OutOfRange(format!("discriminant length {l} too large")));
        }
        let q4 = disc
            .elements()
            .map(|e| {
                let t = disc.q(&e) * Q::from(4);
                debug_assert!(t.is_integer());
                t.to_integer().rem_euclid(8)
            })
            .collect();
        let bmat = (0..l)
            .map(|j| {
                (0..l).fold(0u64, |m, i| {
                    let two_b = disc.b(&disc.generator(i), &disc.generator(j)) * Q::from(2);
                    m | (((two_b.to_integer() & 1) as u64) << i)
                })
            })
            .collect();
        let one = disc.index(&disc.characteristic()?);
        Ok(WeilRep { disc, sigma: lattice.sigma(), q4, bmat, one })
    }

    pub fn disc(&self) -> &DiscGroup {
        &self.disc
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn size(&self) -> usize {
        self.q4.len()
    }

    pub fn length(&self) -> usize {
        self.disc.length()
    }

    pub fn characteristic_index(&self) -> usize {
        self.one
    }

    pub fn index(&self, e: &DiscElement) -> usize {
        self.disc.index(e)
    }

    /// `4q(γ) mod 8` by index.
    pub fn q4(&self, i: usize) -> i64 {
        self.q4[i]
    }

    /// `2q(γ) mod 4`, the `k` with `e_γ` in the support of `v_k`.
    pub fn q_class(&self, i: usize) -> i64 {
        self.q4[i] / 2
    }

    /// `2b(γ, δ) mod 2`.
    fn pair_bit(&self, g: usize, d: usize) -> u32 {
        let bd = self.b_image(d);
        ((g as u64) & bd).count_ones() & 1
    }

    /// The mask `B·δ` over `F₂`.
    fn b_image(&self, d: usize) -> u64 {
        let mut m = 0u64;
        let mut d = d as u64;
        let mut j = 0;
        while d != 0 {
            if d & 1 == 1 {
                m ^= self.bmat[j];
            }
            d >>= 1;
            j += 1;
        }
        m
    }

    pub fn basis(&self, i: usize) -> Vec<Cyc8> {
        let mut v = vec![Cyc8::zero(); self.size()];
        v[i] = Cyc8::one();
        v
    }

    /// `ρ(T)e_γ = e^{πiγ²}e_γ`.
    pub fn apply_t(&self, v: &[Cyc8], inverse: bool) -> Vec<Cyc8> {
        v.iter()
            .zip(&self.q4)
            .map(|(x, &k)| if x.is_zero() { x.clone() } else { x * &Cyc8::zeta_pow(if inverse { -k } else { k }) })
            .collect()
    }

    /// `ρ(S)e_γ = i^{−σ/2}|A|^{−1/2} Σ_δ e^{−2πi⟨γ,δ⟩} e_δ`, with `i^{−σ/2} = ζ^{−σ}`
    /// for either parity of `σ`. Uses a Walsh–Hadamard transform:
    /// `(ρ(S)v)_δ = c·Σ_γ (−1)^{γ·Bδ} v_γ`.
    pub fn apply_s(&self, v: &[Cyc8]) -> Vec<Cyc8> {
        let n = self.size();
        let mut h = v.to_vec();
        let mut len = 1;
        while len < n {
            for start in (0..n).step_by(2 * len) {
                for i in start..start + len {
                    let (x, y) = (h[i].clone(), h[i + len].clone());
                    h[i] = &x + &y;
                    h[i + len] = &x - &y;
                }
            }
            len *= 2;
        }
        let c = &Cyc8::zeta_pow(-self.sigma) * &Cyc8::sqrt2_pow(-(self.length() as i64));
        (0..n).map(|d| &h[self.b_image(d) as usize] * &c).collect()
    }

    pub fn apply_letter(&self, l: Letter, v: &[Cyc8]) -> Vec<Cyc8> {
        match l {
            Letter::S => self.apply_s(v),
            Letter::T => self.apply_t(v, false),
            Letter::TInv => self.apply_t(v, true),
        }
    }

    /// `ρ(w₁⋯wₙ)v`, applying `wₙ` first.
    pub fn apply_word(&self, w: &[Letter], v: &[Cyc8]) -> Vec<Cyc8> {
        w.iter().rev().fold(v.to_vec(), |acc, l| self.apply_letter(*l, &acc))
    }

    pub fn apply(&self, g: &Mp2, v: &[Cyc8]) -> Vec<Cyc8> {
        self.apply_word(&g.word(), v)
    }

    /// Dense matrix of `ρ(g)`, for `l ≤ DENSE_MAX_LENGTH`.
    pub fn matrix(&self, g: &Mp2) -> Result<WeilMatrix> {
        self.matrix_of_word(&g.word())
    }

    pub fn matrix_of_word(&self, w: &[Letter]) -> Result<WeilMatrix> {
        if self.length() > DENSE_MAX_LENGTH {
            return Err(Error::OutOfRange(format!(
                "dense Weil matrices need l ≤ {DENSE_MAX_LENGTH}, got {}",
                self.length()
            )));
        }
        let n = self.size();
        let mut entries = vec![Cyc8::zero(); n * n];
        for j in 0..n {
            let col = self.apply_word(w, &self.basis(j));
            for (i, x) in col.into_iter().enumerate() {
                entries[i * n + j] = x;
            }
        }
        Ok(WeilMatrix { n, entries })
    }

    pub fn generator(&self, l: Letter) -> Result<WeilMatrix> {
        self.matrix_of_word(&[l])
    }

    /// The scalar `λ` with `ρ(g)e₀ = λe₀` for `g ∈ MΓ₀(4)`.
    pub fn invariant_vector_check(&self, g: &Mp2) -> Result<Cyc8> {
        if !g.in_gamma0(4) {
            return Err(Error::Domain(format!("{g} is not in MΓ₀(4)")));
        }
        let v = self.apply(g, &self.basis(0));
        let lambda = v[0].clone();
        if v.iter().skip(1).any(|x| !x.is_zero()) || lambda.root_of_unity_index().is_none() {
            return Err(Error::Inconsistent(format!("e₀ is not an eigenvector of ρ({g})")));
        }
        Ok(lambda)
    }

    /// `v_k = Σ_{γ² ≡ k/2 mod 2} e_γ`.
    pub fn v_k(&self, k: i64) -> Vec<Cyc8> {
        (0..self.size()).map(|i| if self.q_class(i) == k.rem_euclid(4) { Cyc8::one() } else { Cyc8::zero() }).collect()
    }

    /// Closed form of `ρ((STˡ)⁻¹)e₀ = i^{σ/2}2^{−l(Λ)/2} Σ_k i^{−lk} v_k`.
    pub fn closed_form_st_inv(&self, l: i64) -> Vec<Cyc8> {
        let c = &Cyc8::zeta_pow(self.sigma) * &Cyc8::sqrt2_pow(-(self.length() as i64));
        (0..self.size()).map(|i| &c * &Cyc8::zeta_pow(-2 * l * self.q_class(i))).collect()
    }

    /// Closed form of `ρ(V⁻¹)e₀ = e_{1_Λ}`.
    pub fn closed_form_v_inv(&self) -> Vec<Cyc8> {
        self.basis(self.one)
    }

    /// `(ρ(S)²)` acts as `e_γ ↦ i^{−σ}e_{−γ}`; on 2-elementary groups `−γ = γ`.
    pub fn z_scalar(&self) -> Cyc8 {
        Cyc8::zeta_pow(-2 * self.sigma)
    }

    #[doc(hidden)]
    pub fn pair_bit_for_tests(&self, g: usize, d: usize) -> u32 {
        self.pair_bit(g, d)
    }
}

impl WeilMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Cyc8::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Cyc8::one();
        }
        WeilMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc8 {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, o: &WeilMatrix) -> WeilMatrix {
        let n = self.n;
        let mut entries = vec![Cyc8::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += &(a * b);
                    }
                }
            }
        }
        WeilMatrix { n, entries }
    }

    pub fn conj_transpose(&self) -> WeilMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).conj()).collect();
        WeilMatrix { n, entries }
    }

    pub fn is_unitary(&self) -> bool {
        self.conj_transpose().mul(self) == WeilMatrix::identity(self.n)
    }

    pub fn column(&self, j: usize) -> Vec<Cyc8> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }
}
