//! Exact integer and rational linear algebra for small Gram matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<i64>>;

/// Smith normal form `P·G·Q = diag(d)`; only `Q` and `Q⁻¹` are kept since the
/// discriminant group needs column data alone.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<i64>,
    pub q: IMat,
    pub q_inv: IMat,
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Smith normal form of a square integer matrix with nonzero determinant.
pub fn smith(g: &IMat) -> Smith {
    let n = g.len();
    let mut a: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut q: Vec<Vec<i128>> = identity(n).into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
    let mut qi = q.clone();

    // Column operation helpers keep `q` and `q⁻¹` in sync.
    fn col_add(a: &mut [Vec<i128>], q: &mut [Vec<i128>], qi: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
        for row in a.iter_mut() {
            row[dst] -= k * row[src];
        }
        for row in q.iter_mut() {
            row[dst] -= k * row[src];
        }
        // Q' = Q(I − k e_src e_dstᵀ) so Q'⁻¹ = (I + k e_src e_dstᵀ)Q⁻¹.
        let r = qi[dst].clone();
        for (x, y) in qi[src].iter_mut().zip(r.iter()) {
            *x += k * y;
        }
    }
    fn col_swap(a: &mut [Vec<i128>], q: &mut [Vec<i128>], qi: &mut [Vec<i128>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in q.iter_mut() {
            row.swap(i, j);
        }
        qi.swap(i, j);
    }

    for t in 0..n {
        loop {
            // Pivot: smallest nonzero entry in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            if pj != t {
                col_swap(&mut a, &mut q, &mut qi, t, pj);
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..n {
                let k = a[i][t].div_euclid(p);
                if k != 0 {
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(rt.iter()) {
                        *x -= k * y;
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..n {
                let k = a[t][j].div_euclid(p);
                if k != 0 {
                    col_add(&mut a, &mut q, &mut qi, j, t, k);
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            // Divisibility: fold a row with a non-multiple into row t.
            let mut fixed = true;
            'outer: for i in t + 1..n {
                for j in t + 1..n {
                    if a[i][j] % p != 0 {
                        let ri = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(ri.iter()) {
                            *x += y;
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let to64 = |m: Vec<Vec<i128>>| -> IMat {
        m.into_iter().map(|r| r.into_iter().map(|x| i64::try_from(x).expect("overflow in Smith form")).collect()).collect()
    };
    Smith { diag: (0..n).map(|i| a[i][i] as i64).collect(), q: to64(q), q_inv: to64(qi) }
}

/// Determinant by fraction-free elimination.
pub fn det(g: &IMat) -> BigInt {
    let n = g.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = g.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Signature `(b⁺, b⁻)` of a symmetric integer matrix by congruence
/// diagonalization over `Q`, with the `e_i + e_j` trick for zero pivots.
pub fn signature(g: &IMat) -> (usize, usize) {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> =
        g.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&k0) = active.first() {
        // Find a nonzero diagonal entry among active indices.
        let piv = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let k = match piv {
            Some(k) => k,
            None => {
                // All active diagonals vanish; find an off-diagonal entry.
                let mut found = None;
                'f: for &i in &active {
                    for &j in &active {
                        if i != j && !a[i][j].is_zero() {
                            found = Some((i, j));
                            break 'f;
                        }
                    }
                }
                let Some((i, j)) = found else {
                    // Remaining block is zero: degenerate, count nothing.
                    let _ = k0;
                    break;
                };
                // Replace e_i by e_i + e_j: row_i += row_j, col_i += col_j.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                i
            }
        };
        let d = a[k][k].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&x| x != k);
        for &i in &active {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &d;
            for &j in &active {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
            a[i][k] = BigRational::zero();
        }
        for &j in &active {
            a[k][j] = BigRational::zero();
        }
    }
    (pos, neg)
}

pub fn block_diag(a: &IMat, b: &IMat) -> IMat {
    let (n, m) = (a.len(), b.len());
    let mut g = vec![vec![0i64; n + m]; n + m];
    for i in 0..n {
        g[i][..n].copy_from_slice(&a[i]);
    }
    for i in 0..m {
        g[n + i][n..].copy_from_slice(&b[i]);
    }
    g
}

/// Inverse of an integer matrix over `Q` (Gauss–Jordan).
pub fn inverse_q(g: &IMat) -> Vec<Vec<BigRational>> {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            row.extend((0..n).map(|j| BigRational::from_integer(BigInt::from(i64::from(i == j)))));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular matrix");
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let rc = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(rc.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &IMat, b: &IMat) -> IMat {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    }

    #[test]
    fn smith_of_rescaled_hyperbolic() {
        let s = smith(&vec![vec![0, 2], vec![2, 0]]);
        assert_eq!(s.diag, [2, 2]);
        assert_eq!(mul(&s.q, &s.q_inv), identity(2));
    }

    #[test]
    fn smith_inverse_tracking() {
        let g = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = smith(&g);
        assert_eq!(s.diag, [2, 6, 12]);
        assert_eq!(mul(&s.q, &s.q_inv), identity(3));
    }

    #[test]
    fn signatures() {
        assert_eq!(signature(&vec![vec![0, 1], vec![1, 0]]), (1, 1));
        assert_eq!(signature(&vec![vec![2, 0], vec![0, -2]]), (1, 1));
        assert_eq!(signature(&vec![vec![0, 0, 1], vec![0, -2, 0], vec![1, 0, 0]]), (1, 2));
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(det(&vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]), BigInt::from(4));
    }
}
