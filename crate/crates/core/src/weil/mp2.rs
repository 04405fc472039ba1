use alloc::vec::Vec;
use core::fmt;

use crate::arith::{Mp, MpC};

/// An element `(A, ε√(cτ+d))` of `Mp₂(Z)`; the square root is principal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mp2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    /// `±1`.
    pub eps: i8,
}

/// Generators used in words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    S,
    T,
    TInv,
}

pub type Word = Vec<Letter>;

/// `arg z` for `z = x + iy` given exactly by integers.
fn arg(x: i128, y: i128) -> f64 {
    libm::atan2(y as f64, x as f64)
}

impl Mp2 {
    pub const ONE: Mp2 = Mp2 { a: 1, b: 0, c: 0, d: 1, eps: 1 };
    pub const S: Mp2 = Mp2 { a: 0, b: -1, c: 1, d: 0, eps: 1 };
    pub const T: Mp2 = Mp2 { a: 1, b: 1, c: 0, d: 1, eps: 1 };
    pub const T_INV: Mp2 = Mp2 { a: 1, b: -1, c: 0, d: 1, eps: 1 };

    /// Lifts a matrix of determinant one with the given sheet.
    pub fn new(a: i64, b: i64, c: i64, d: i64, eps: i8) -> Option<Mp2> {
        (a * d - b * c == 1 && (eps == 1 || eps == -1)).then_some(Mp2 { a, b, c, d, eps })
    }

    pub fn t_pow(n: i64) -> Mp2 {
        Mp2 { a: 1, b: n, c: 0, d: 1, eps: 1 }
    }

    /// `Z = S²`, central of order four.
    pub fn z() -> Mp2 {
        Self::S.mul(&Self::S)
    }

    /// `V = S⁻¹T²S`, with matrix `(1 0; −2 1)`.
    pub fn v() -> Mp2 {
        Self::S.pow(7).mul(&Self::t_pow(2)).mul(&Self::S)
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// Group law: `(A, j_A)(B, j_B) = (AB, j_A(Bτ)·j_B(τ))`. The sign relating
    /// `√(c_A Bτ + d_A)·√(c_B τ + d_B)` to `√(c τ + d)` is read off at `τ = i`.
    pub fn mul(&self, o: &Mp2) -> Mp2 {
        let (a, b, c, d) = (
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        );
        let (ca, da) = (self.c as i128, self.d as i128);
        let (ab, bb, cb, db) = (o.a as i128, o.b as i128, o.c as i128, o.d as i128);
        // (c_A·Bi + d_A)·|c_B i + d_B|² = X + iY
        let x1 = ca * (ab * cb + bb * db) + da * (cb * cb + db * db);
        let y1 = ca;
        let t = arg(x1, y1) + arg(db, cb) - arg(d as i128, c as i128);
        let k = libm::round(t / (2.0 * core::f64::consts::PI)) as i64;
        let s: i8 = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        Mp2 { a, b, c, d, eps: self.eps * o.eps * s }
    }

    pub fn pow(&self, n: u32) -> Mp2 {
        (0..n).fold(Mp2::ONE, |acc, _| acc.mul(self))
    }

    pub fn inverse(&self) -> Mp2 {
        let h = Mp2 { a: self.d, b: -self.b, c: -self.c, d: self.a, eps: 1 };
        let p = self.mul(&h);
        debug_assert_eq!((p.a, p.b, p.c, p.d), (1, 0, 0, 1));
        Mp2 { eps: p.eps, ..h }
    }

    pub fn in_gamma0(&self, n: i64) -> bool {
        self.c % n == 0
    }

    /// `gτ = (aτ+b)/(cτ+d)`.
    pub fn act(&self, tau: &MpC, mp: &Mp) -> MpC {
        let num = &tau.scale(&mp.int(self.a)) + &mp.cint(self.b);
        num.div(&self.cocycle_sq(tau, mp))
    }

    fn cocycle_sq(&self, tau: &MpC, mp: &Mp) -> MpC {
        &tau.scale(&mp.int(self.c)) + &mp.cint(self.d)
    }

    /// `j(g, τ) = ε√(cτ+d)`.
    pub fn j(&self, tau: &MpC, mp: &mut Mp) -> MpC {
        let r = mp.sqrt(&self.cocycle_sq(tau, mp));
        if self.eps == 1 {
            r
        } else {
            -r
        }
    }

    pub fn from_word(w: &[Letter]) -> Mp2 {
        w.iter().fold(Mp2::ONE, |acc, l| acc.mul(&l.element()))
    }

    /// A word in `S, T, T⁻¹` whose product is exactly `self`, found by the
    /// Euclidean algorithm on the first column and a final power of `Z = S²`.
    pub fn word(&self) -> Word {
        let mut w = Word::new();
        let (mut a, mut b, mut c, mut d) = (self.a, self.b, self.c, self.d);
        while c != 0 {
            // M = T^n S M′ with M′ = S⁻¹T⁻ⁿM.
            let n = a.div_euclid(c);
            push_t(&mut w, n);
            w.push(Letter::S);
            let (a1, b1) = (a - n * c, b - n * d);
            (a, b, c, d) = (c, d, -a1, -b1);
        }
        // Now M = ±T^{±b}.
        push_t(&mut w, a * b);
        let got = Mp2::from_word(&w);
        for m in 0..4 {
            let cand: Word = w.iter().copied().chain(core::iter::repeat_n(Letter::S, 2 * m)).collect();
            if Mp2::from_word(&cand) == *self {
                return cand;
            }
        }
        unreachable!("no power of Z matches {self} (partial product {got})")
    }
}

fn push_t(w: &mut Word, n: i64) {
    let l = if n >= 0 { Letter::T } else { Letter::TInv };
    w.extend(core::iter::repeat_n(l, n.unsigned_abs() as usize));
}

impl Letter {
    pub fn element(self) -> Mp2 {
        match self {
            Letter::S => Mp2::S,
            Letter::T => Mp2::T,
            Letter::TInv => Mp2::T_INV,
        }
    }
}

impl fmt::Display for Mp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.eps == 1 { "+" } else { "-" };
        write!(f, "(({} {}; {} {}), {s}√(cτ+d))", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_has_order_four() {
        let z = Mp2::z();
        assert_eq!((z.a, z.d, z.eps), (-1, -1, 1));
        assert_eq!(z.pow(2), Mp2 { a: 1, b: 0, c: 0, d: 1, eps: -1 });
        assert_eq!(z.pow(4), Mp2::ONE);
        assert_eq!(Mp2::S.pow(8), Mp2::ONE);
    }

    #[test]
    fn v_matrix_and_branch() {
        let v = Mp2::v();
        assert_eq!(v.matrix(), [[1, 0], [-2, 1]]);
        assert_eq!(v.eps, 1);
    }

    #[test]
    fn braid_relation() {
        let st = Mp2::S.mul(&Mp2::T);
        assert_eq!(st.pow(3), Mp2::z());
    }

    #[test]
    fn words_reconstruct() {
        assert_eq!(Mp2::T.word(), [Letter::T]);
        assert_eq!(Mp2::z().word(), [Letter::S, Letter::S]);
        for (a, b, c, d) in [(1, 0, -2, 1), (2, 1, 7, 4), (-3, 5, 4, -7), (5, 2, -8, -3), (0, 1, -1, 0)] {
            for eps in [1, -1] {
                let g = Mp2::new(a, b, c, d, eps).unwrap();
                assert_eq!(Mp2::from_word(&g.word()), g);
                assert_eq!(g.mul(&g.inverse()), Mp2::ONE);
            }
        }
    }

    #[test]
    fn cocycle_matches_numeric_sqrt() {
        let mut mp = Mp::new(64);
        let tau = mp.c(0.3, 0.7);
        let g = Mp2::new(2, 1, 7, 4, 1).unwrap();
        let h = Mp2::new(-3, 5, 4, -7, -1).unwrap();
        let gh = g.mul(&h);
        let lhs = gh.j(&tau, &mut mp);
        let ht = h.act(&tau, &mp);
        let rhs = &g.j(&ht, &mut mp) * &h.j(&tau, &mut mp);
        assert!(lhs.dist(&rhs) < 1e-12);
    }
}
