use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::disc::DiscGroup;
use super::matrix::{self, IMat};
use super::triple::LatticeTriple;
use crate::error::{Error, Result};

/// An even nondegenerate lattice given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: IMat,
    label: Option<String>,
}

/// The named building blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StdLattice {
    U,
    U2,
    A1,
    A1Plus,
    /// `D_{2k}`, rank `2k ≥ 4`.
    D2k(usize),
    E7,
    E8,
    E8Rescaled2,
}

impl Lattice {
    pub fn new(gram: IMat) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidLattice("Gram matrix must be square".into()));
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(Error::InvalidLattice(format!("odd diagonal entry at {i}")));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice("Gram matrix must be symmetric".into()));
                }
            }
        }
        if n > 0 && matrix::det(&gram) == BigInt::from(0) {
            return Err(Error::InvalidLattice("degenerate form".into()));
        }
        Ok(Lattice { gram, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn standard(which: StdLattice) -> Lattice {
        let (gram, label) = match which {
            StdLattice::U => (vec![vec![0, 1], vec![1, 0]], "U".to_string()),
            StdLattice::U2 => (vec![vec![0, 2], vec![2, 0]], "U(2)".to_string()),
            StdLattice::A1 => (vec![vec![-2]], "A1".to_string()),
            StdLattice::A1Plus => (vec![vec![2]], "A1+".to_string()),
            StdLattice::D2k(k) => {
                assert!(k >= 2, "D_2k needs k ≥ 2");
                (cartan_d(2 * k), format!("D{}", 2 * k))
            }
            StdLattice::E7 => (cartan_e(7), "E7".to_string()),
            StdLattice::E8 => (cartan_e(8), "E8".to_string()),
            StdLattice::E8Rescaled2 => (scale(&cartan_e(8), 2), "E8(2)".to_string()),
        };
        Lattice { gram, label: Some(label) }
    }

    /// Looks up a building block by name: `U`, `U2`, `A1`, `A1plus`, `D<2k>`,
    /// `E7`, `E8`, `E8_2`.
    pub fn by_name(name: &str) -> Result<Lattice> {
        let which = match name {
            "U" => StdLattice::U,
            "U2" => StdLattice::U2,
            "A1" => StdLattice::A1,
            "A1plus" | "A1+" | "A1⁺" => StdLattice::A1Plus,
            "E7" => StdLattice::E7,
            "E8" => StdLattice::E8,
            "E8_2" => StdLattice::E8Rescaled2,
            _ => {
                let n = name
                    .strip_prefix('D')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|n| *n >= 4 && n % 2 == 0)
                    .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown lattice name {name:?}") })?;
                StdLattice::D2k(n / 2)
            }
        };
        Ok(Self::standard(which))
    }

    pub fn gram(&self) -> &IMat {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        matrix::det(&self.gram)
    }

    /// `⟨x, y⟩` for integer coordinate vectors.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0 {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.gram[i][j] * yj;
            }
        }
        s
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        Lattice { gram: matrix::block_diag(&self.gram, &other.gram), label }
    }

    /// `L(k)`: the form multiplied by `k`.
    pub fn rescale(&self, k: i64) -> Lattice {
        assert!(k > 0, "rescaling factor must be positive");
        let label = self.label.as_ref().map(|l| {
            if l.contains('+') {
                format!("({l})({k})")
            } else {
                format!("{l}({k})")
            }
        });
        Lattice { gram: scale(&self.gram, k), label }
    }

    /// `k` copies of the lattice.
    pub fn power(&self, k: usize) -> Lattice {
        let mut acc = Lattice { gram: Vec::new(), label: None };
        for _ in 0..k {
            acc = acc.direct_sum(self);
        }
        acc.label = self.label.as_ref().map(|l| format!("{l}^{k}"));
        acc
    }

    pub fn signature(&self) -> (usize, usize) {
        matrix::signature(&self.gram)
    }

    /// `σ = b⁺ − b⁻`.
    pub fn sigma(&self) -> i64 {
        let (p, n) = self.signature();
        p as i64 - n as i64
    }

    pub fn discriminant_group(&self) -> DiscGroup {
        DiscGroup::new(self)
    }

    pub fn is_two_elementary(&self) -> bool {
        matrix::smith(&self.gram).diag.iter().all(|&d| d == 1 || d == 2)
    }

    /// `(r, l, δ)`; errors for lattices that are not 2-elementary.
    pub fn invariants(&self) -> Result<LatticeTriple> {
        let d = self.discriminant_group();
        if !d.is_two_elementary() {
            return Err(Error::NotTwoElementary);
        }
        let delta = u8::from(d.has_odd_values());
        LatticeTriple::new(self.rank() as i64, d.orders().len() as i64, delta)
    }
}

fn scale(g: &IMat, k: i64) -> IMat {
    g.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

/// Negative-definite Cartan matrix of `D_n`.
fn cartan_d(n: usize) -> IMat {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = -2;
    }
    let mut link = |a: usize, b: usize| {
        g[a][b] = 1;
        g[b][a] = 1;
    };
    for i in 0..n - 2 {
        link(i, i + 1);
    }
    link(n - 3, n - 1);
    g
}

/// Negative-definite Cartan matrix of `E_n` (`n = 7, 8`): a chain with the
/// extra node attached to the third vertex.
fn cartan_e(n: usize) -> IMat {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = -2;
    }
    let mut link = |a: usize, b: usize| {
        g[a][b] = 1;
        g[b][a] = 1;
    };
    // Chain 0-1-…-(n−2), branch node n−1 attached to node 2.
    for i in 0..n - 2 {
        link(i, i + 1);
    }
    link(2, n - 1);
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_determinants() {
        let e8 = Lattice::standard(StdLattice::E8);
        assert_eq!(e8.det(), BigInt::from(1));
        assert_eq!(e8.signature(), (0, 8));
        assert_eq!(Lattice::standard(StdLattice::E7).det(), BigInt::from(-2));
        assert_eq!(Lattice::standard(StdLattice::D2k(2)).det(), BigInt::from(4));
        assert_eq!(Lattice::standard(StdLattice::U).det(), BigInt::from(-1));
        assert_eq!(Lattice::standard(StdLattice::U).rescale(2).det(), BigInt::from(-4));
    }

    #[test]
    fn k3_lattice() {
        let u = Lattice::standard(StdLattice::U);
        let e8 = Lattice::standard(StdLattice::E8);
        let k3 = u.power(3).direct_sum(&e8.power(2));
        assert_eq!(k3.det(), BigInt::from(-1));
        assert_eq!(k3.signature(), (3, 19));
    }

    #[test]
    fn rejects_odd_or_degenerate() {
        assert!(Lattice::new(vec![vec![1]]).is_err());
        assert!(Lattice::new(vec![vec![2, 2], vec![2, 2]]).is_err());
        assert!(Lattice::new(vec![vec![2, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(Lattice::by_name("D8").unwrap().rank(), 8);
        assert!(Lattice::by_name("D5").is_err());
        assert!(Lattice::by_name("F4").is_err());
    }
}
