use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeExpr, LatticeTriple};

/// One orthogonal complement `Λ = M⊥` from the list of 2-elementary K3 types
/// with `r(M) > 10` or `(r(M), δ(M)) = (10, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    /// `g(M)`, the genus of the fixed curve.
    pub g: i64,
    pub perp: LatticeExpr,
    pub delta_perp: u8,
}

fn a1_tail(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "+A1".into(),
        _ => format!("+A1^{k}"),
    }
}

fn row(g: i64, expr: &str, delta_perp: u8) -> Table1Row {
    let perp = LatticeExpr::parse(expr).expect("table entries are well formed");
    Table1Row { g, perp, delta_perp }
}

/// The 43 complements, grouped by `g(M)` with the `δ = 1` family first.
pub fn table1() -> Vec<Table1Row> {
    let mut t = Vec::with_capacity(43);
    for k in 0..=9 {
        t.push(row(0, &format!("A1plus^2{}", a1_tail(k)), 1));
    }
    t.push(row(0, "U(2)^2", 0));
    for k in 0..=9 {
        t.push(row(1, &format!("U+A1plus{}", a1_tail(k)), 1));
    }
    t.push(row(1, "U(2)^2+D4", 0));
    t.push(row(1, "U+U(2)", 0));
    for k in 1..=8 {
        t.push(row(2, &format!("U^2{}", a1_tail(k)), 1));
    }
    t.push(row(2, "U+U(2)+D4", 0));
    t.push(row(2, "U^2", 0));
    for k in 1..=4 {
        t.push(row(3, &format!("U^2+D4{}", a1_tail(k)), 1));
    }
    t.push(row(3, "U^2+D4", 0));
    for k in 0..=2 {
        t.push(row(4, &format!("A1plus^2+E8{}", a1_tail(k)), 1));
    }
    for k in 0..=1 {
        t.push(row(5, &format!("U+A1plus+E8{}", a1_tail(k)), 1));
    }
    t
}

impl Table1Row {
    pub fn lattice(&self) -> Result<Lattice> {
        self.perp.eval()
    }

    /// `(r, l, δ)` of `M⊥`, recomputed from the Gram matrix.
    pub fn perp_triple(&self) -> Result<LatticeTriple> {
        self.lattice()?.invariants()
    }

    /// `(r, l, δ)` of `M`, taking `δ(M) = δ(M⊥)` from the anti-isometry of
    /// discriminant forms.
    pub fn m_triple(&self) -> Result<LatticeTriple> {
        self.perp_triple()?.complement()
    }

    /// Recomputes the invariants and checks them against the row placement.
    pub fn validate(&self) -> Result<LatticeTriple> {
        let t = self.perp_triple()?;
        let g = t.genus_k()?;
        if g != self.g || t.delta != self.delta_perp {
            return Err(Error::Inconsistent(format!(
                "{}: computed {t} with g = {g}, listed g = {} and δ = {}",
                self.perp, self.g, self.delta_perp
            )));
        }
        let m = t.complement()?;
        if m.genus_g()? != self.g {
            return Err(Error::Inconsistent(format!("{}: g(M) of {m} differs from the row", self.perp)));
        }
        Ok(t)
    }
}
