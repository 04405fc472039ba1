use core::fmt;

use crate::error::{Error, Result};

/// The invariants `(r, l, δ)` of an even 2-elementary lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeTriple {
    pub r: i64,
    pub l: i64,
    pub delta: u8,
}

/// The three kinds of K3-graph edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Odd,
    EvenWu,
    EvenNonWu,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 3] = [EdgeKind::Odd, EdgeKind::EvenWu, EdgeKind::EvenNonWu];

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Odd => "odd",
            EdgeKind::EvenWu => "even_wu",
            EdgeKind::EvenNonWu => "even_nonwu",
        }
    }
}

impl LatticeTriple {
    pub fn new(r: i64, l: i64, delta: u8) -> Result<Self> {
        if l < 0 || l > r || (r - l) % 2 != 0 || delta > 1 {
            return Err(Error::InvalidTriple(alloc::format!("({r},{l},{delta})")));
        }
        Ok(LatticeTriple { r, l, delta })
    }

    /// `g = (22 − r − l)/2`, the total genus of the fixed curve.
    pub fn genus_g(&self) -> Result<i64> {
        let t = 22 - self.r - self.l;
        if t < 0 || t % 2 != 0 {
            return Err(Error::InvalidTriple(alloc::format!("g undefined for {self}")));
        }
        Ok(t / 2)
    }

    /// `k = (r − l)/2`, the number of rational fixed curves.
    pub fn genus_k(&self) -> Result<i64> {
        if self.r < self.l || (self.r - self.l) % 2 != 0 {
            return Err(Error::InvalidTriple(alloc::format!("k undefined for {self}")));
        }
        Ok((self.r - self.l) / 2)
    }

    /// The triple of `[M⊥d]` for an edge of the given kind.
    pub fn perp_transition(&self, kind: EdgeKind) -> Result<LatticeTriple> {
        match kind {
            EdgeKind::Odd => LatticeTriple::new(self.r + 1, self.l + 1, 1),
            EdgeKind::EvenWu | EdgeKind::EvenNonWu => {
                if self.l == 0 {
                    return Err(Error::InvalidTriple(alloc::format!("even edge from {self} needs l ≥ 1")));
                }
                LatticeTriple::new(self.r + 1, self.l - 1, u8::from(kind == EdgeKind::EvenNonWu))
            }
        }
    }

    /// Complement bookkeeping inside the K3 lattice: `(22 − r, l, δ)`.
    pub fn complement(&self) -> Result<LatticeTriple> {
        LatticeTriple::new(22 - self.r, self.l, self.delta)
    }
}

impl fmt::Display for LatticeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.l, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genera() {
        let t = LatticeTriple::new(10, 10, 1).unwrap();
        assert_eq!(t.genus_g().unwrap(), 1);
        assert_eq!(t.genus_k().unwrap(), 0);
        assert_eq!(LatticeTriple::new(10, 10, 0).unwrap().genus_g().unwrap(), 1);
    }

    #[test]
    fn transitions() {
        let t = LatticeTriple::new(2, 2, 1).unwrap();
        assert_eq!(t.perp_transition(EdgeKind::Odd).unwrap(), LatticeTriple::new(3, 3, 1).unwrap());
        let s = LatticeTriple::new(9, 9, 1).unwrap();
        let n = s.perp_transition(EdgeKind::EvenWu).unwrap();
        assert_eq!((n.r, n.l), (10, 8));
        let z = LatticeTriple::new(2, 0, 0).unwrap();
        assert!(z.perp_transition(EdgeKind::EvenWu).is_err());
        assert!(LatticeTriple::new(3, 2, 0).is_err());
    }
}
