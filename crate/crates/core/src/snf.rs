//! Smith normal form of 2×2 integer matrices in exact arithmetic.
//!
//! All pivots are manipulated as checked 128-bit integers; any overflow is
//! reported rather than wrapped, so results are bit-exact whenever a result
//! is returned at all.

use crate::error::{Result, SolError};

pub type Mat2 = [[i64; 2]; 2];

type W = [[i128; 2]; 2];

/// `u · m · v = d` with `u`, `v` unimodular and `d = diag(d1, d2)`,
/// `d1 >= 0`, `d1 | d2` or `d2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Snf {
    pub u: Mat2,
    pub d: Mat2,
    pub v: Mat2,
}

pub fn det2(m: Mat2) -> Result<i64> {
    let d = (m[0][0] as i128)
        .checked_mul(m[1][1] as i128)
        .and_then(|p| p.checked_sub((m[0][1] as i128).checked_mul(m[1][0] as i128)?))
        .ok_or(SolError::IntegerOverflow)?;
    i64::try_from(d).map_err(|_| SolError::IntegerOverflow)
}

fn widen(m: Mat2) -> W {
    [[m[0][0] as i128, m[0][1] as i128], [m[1][0] as i128, m[1][1] as i128]]
}

fn narrow(m: W) -> Result<Mat2> {
    let conv = |v: i128| i64::try_from(v).map_err(|_| SolError::IntegerOverflow);
    Ok([[conv(m[0][0])?, conv(m[0][1])?], [conv(m[1][0])?, conv(m[1][1])?]])
}

fn sub_mul_row(m: &mut W, dst: usize, src: usize, q: i128) -> Result<()> {
    for c in 0..2 {
        m[dst][c] = m[dst][c]
            .checked_sub(q.checked_mul(m[src][c]).ok_or(SolError::IntegerOverflow)?)
            .ok_or(SolError::IntegerOverflow)?;
    }
    Ok(())
}

fn sub_mul_col(m: &mut W, dst: usize, src: usize, q: i128) -> Result<()> {
    for r in 0..2 {
        m[r][dst] = m[r][dst]
            .checked_sub(q.checked_mul(m[r][src]).ok_or(SolError::IntegerOverflow)?)
            .ok_or(SolError::IntegerOverflow)?;
    }
    Ok(())
}

fn swap_rows(m: &mut W) {
    m.swap(0, 1);
}

fn swap_cols(m: &mut W) {
    for r in 0..2 {
        let t = m[r][0];
        m[r][0] = m[r][1];
        m[r][1] = t;
    }
}

fn negate_row(m: &mut W, r: usize) {
    for c in 0..2 {
        m[r][c] = -m[r][c];
    }
}

/// Smith normal form by Euclidean row/column reduction.
pub fn smith_normal_form(m: Mat2) -> Result<Snf> {
    let mut a = widen(m);
    let mut u: W = [[1, 0], [0, 1]];
    let mut v: W = [[1, 0], [0, 1]];

    // Bring the matrix to diag(d1, d2) with d1 | d2.
    loop {
        // Move a minimal-magnitude nonzero entry to (0,0).
        let mut best: Option<(usize, usize)> = None;
        for r in 0..2 {
            for c in 0..2 {
                if a[r][c] != 0
                    && best.map_or(true, |(br, bc)| a[r][c].abs() < a[br][bc].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((r, c)) = best else { break };
        if r == 1 {
            swap_rows(&mut a);
            swap_rows(&mut u);
        }
        if c == 1 {
            swap_cols(&mut a);
            swap_cols(&mut v);
        }

        if a[1][0] % a[0][0] != 0 {
            let q = a[1][0] / a[0][0];
            sub_mul_row(&mut a, 1, 0, q)?;
            sub_mul_row(&mut u, 1, 0, q)?;
            continue;
        }
        if a[0][1] % a[0][0] != 0 {
            let q = a[0][1] / a[0][0];
            sub_mul_col(&mut a, 1, 0, q)?;
            sub_mul_col(&mut v, 1, 0, q)?;
            continue;
        }
        let q = a[1][0] / a[0][0];
        sub_mul_row(&mut a, 1, 0, q)?;
        sub_mul_row(&mut u, 1, 0, q)?;
        let q = a[0][1] / a[0][0];
        sub_mul_col(&mut a, 1, 0, q)?;
        sub_mul_col(&mut v, 1, 0, q)?;

        // Divisibility of the second invariant factor.
        if a[1][1] != 0 && a[1][1] % a[0][0] != 0 {
            // col 0 += col 1 re-couples the pivots; reduce again.
            sub_mul_col(&mut a, 0, 1, -1)?;
            sub_mul_col(&mut v, 0, 1, -1)?;
            continue;
        }
        break;
    }

    if a[0][0] == 0 && a[1][1] != 0 {
        swap_rows(&mut a);
        swap_rows(&mut u);
        swap_cols(&mut a);
        swap_cols(&mut v);
    }
    if a[0][0] < 0 {
        negate_row(&mut a, 0);
        negate_row(&mut u, 0);
    }
    if a[1][1] < 0 {
        negate_row(&mut a, 1);
        negate_row(&mut u, 1);
    }

    Ok(Snf { u: narrow(u)?, d: narrow(a)?, v: narrow(v)? })
}

impl Snf {
    pub fn d1(&self) -> i64 {
        self.d[0][0]
    }

    pub fn d2(&self) -> i64 {
        self.d[1][1]
    }

    /// Invariant factors larger than 1: the torsion of `Z^2 / M Z^2`.
    pub fn torsion_factors(&self) -> alloc::vec::Vec<i64> {
        [self.d1(), self.d2()].into_iter().filter(|&d| d > 1).collect()
    }

    /// Order of `Z^2 / M Z^2` (0 means infinite).
    pub fn cokernel_order(&self) -> i64 {
        self.d1() * self.d2()
    }
}

pub fn mat2_mul(a: Mat2, b: Mat2) -> Result<Mat2> {
    let mut c = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let s = (a[i][0] as i128)
                .checked_mul(b[0][j] as i128)
                .and_then(|p| p.checked_add((a[i][1] as i128).checked_mul(b[1][j] as i128)?))
                .ok_or(SolError::IntegerOverflow)?;
            c[i][j] = i64::try_from(s).map_err(|_| SolError::IntegerOverflow)?;
        }
    }
    Ok(c)
}

pub fn mat2_pow(a: Mat2, n: u32) -> Result<Mat2> {
    let mut out = [[1, 0], [0, 1]];
    let mut base = a;
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            out = mat2_mul(out, base)?;
        }
        n >>= 1;
        if n > 0 {
            base = mat2_mul(base, base)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: order of `Z^2 / M Z^2` by counting the image of
    /// `x ↦ adj(M) x mod |det M|` over a full residue system.
    pub(crate) fn coset_count(m: Mat2) -> Option<u64> {
        let det = det2(m).ok()?;
        if det == 0 {
            return None;
        }
        let d = det.unsigned_abs();
        let adj = [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]];
        let modd = |v: i64| -> u64 { v.rem_euclid(d as i64) as u64 };
        let mut seen = alloc::collections::BTreeSet::new();
        for x in 0..d {
            for y in 0..d {
                let ax = modd(adj[0][0].wrapping_mul(x as i64) + adj[0][1].wrapping_mul(y as i64));
                let ay = modd(adj[1][0].wrapping_mul(x as i64) + adj[1][1].wrapping_mul(y as i64));
                seen.insert((ax, ay));
            }
        }
        Some(seen.len() as u64)
    }

    fn check_invariants(m: Mat2) -> Snf {
        let snf = smith_normal_form(m).unwrap();
        assert_eq!(det2(snf.u).unwrap().abs(), 1, "U not unimodular for {m:?}");
        assert_eq!(det2(snf.v).unwrap().abs(), 1, "V not unimodular for {m:?}");
        let umv = mat2_mul(mat2_mul(snf.u, m).unwrap(), snf.v).unwrap();
        assert_eq!(umv, snf.d, "UMV != D for {m:?}");
        assert_eq!(snf.d[0][1], 0);
        assert_eq!(snf.d[1][0], 0);
        assert!(snf.d1() >= 0);
        assert!(snf.d2() == 0 || (snf.d1() != 0 && snf.d2() % snf.d1() == 0) || snf.d1() == 0);
        assert!(snf.d2() >= 0);
        snf
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_invariants([[1, 1], [1, 0]]).d, [[1, 0], [0, 1]]);
        assert_eq!(check_invariants([[2, 0], [0, 2]]).d, [[2, 0], [0, 2]]);
        assert_eq!(check_invariants([[2, 2], [1, 0]]).d, [[1, 0], [0, 2]]);
        assert_eq!(check_invariants([[0, 0], [0, 0]]).d, [[0, 0], [0, 0]]);
        assert_eq!(check_invariants([[4, 0], [0, 6]]).d, [[2, 0], [0, 12]]);
    }

    #[test]
    fn snf_matches_coset_enumeration() {
        for a in -4..=4i64 {
            for b in -4..=4i64 {
                for c in -2..=2i64 {
                    let m = [[a, b], [c, a - b + 1]];
                    let snf = check_invariants(m);
                    if let Some(count) = coset_count(m) {
                        assert_eq!(
                            snf.cokernel_order().unsigned_abs(),
                            count,
                            "coset mismatch for {m:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_power() {
        let cat = [[2, 1], [1, 1]];
        assert_eq!(mat2_pow(cat, 0).unwrap(), [[1, 0], [0, 1]]);
        assert_eq!(mat2_pow(cat, 1).unwrap(), cat);
        assert_eq!(mat2_pow(cat, 2).unwrap(), [[5, 3], [3, 2]]);
        assert_eq!(mat2_pow(cat, 3).unwrap(), [[13, 8], [8, 5]]);
    }

    proptest! {
        #[test]
        fn snf_invariants_hold(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let snf = check_invariants([[a, b], [c, d]]);
            let det = det2([[a, b], [c, d]]).unwrap();
            prop_assert_eq!(snf.cokernel_order().abs(), det.abs());
        }
    }
}
