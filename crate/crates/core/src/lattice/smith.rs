use super::{IntMatrix, LatticeError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`, `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Invariant factors other than 1.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

// Row/column operations mirrored on the transforms.
fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    a.swap(i, j);
    u.swap(i, j);
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    for r in a.iter_mut() {
        r.swap(i, j);
    }
    for r in v.iter_mut() {
        r.swap(i, j);
    }
}

/// Rows `(i, j)` replaced by `(p r_i + q r_j, r r_i + s r_j)`.
fn combine_rows(m: &mut IntMatrix, i: usize, j: usize, c: [&BigInt; 4]) {
    for k in 0..m[i].len() {
        let (x, y) = (m[i][k].clone(), m[j][k].clone());
        m[i][k] = c[0] * &x + c[1] * &y;
        m[j][k] = c[2] * &x + c[3] * &y;
    }
}

fn combine_cols(m: &mut IntMatrix, i: usize, j: usize, c: [&BigInt; 4]) {
    for r in m.iter_mut() {
        let (x, y) = (r[i].clone(), r[j].clone());
        r[i] = c[0] * &x + c[1] * &y;
        r[j] = c[2] * &x + c[3] * &y;
    }
}

fn bezout(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = x.extended_gcd(y);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Smith normal form of a square integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm, LatticeError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LatticeError::NotSquare);
    }
    let mut a = m.clone();
    let mut u = identity(n);
    let mut v = identity(n);
    for t in 0..n {
        // pivot: smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            return Err(LatticeError::Singular);
        };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let (g, s, r) = if a[i][t].is_multiple_of(&a[t][t]) {
                    (a[t][t].clone(), BigInt::one(), BigInt::zero())
                } else {
                    bezout(&a[t][t], &a[i][t])
                };
                let p = &a[t][t] / &g;
                let q = &a[i][t] / &g;
                let c = [&s, &r, &(-&q), &p];
                combine_rows(&mut a, t, i, c);
                combine_rows(&mut u, t, i, c);
                changed = true;
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let (g, s, r) = if a[t][j].is_multiple_of(&a[t][t]) {
                    (a[t][t].clone(), BigInt::one(), BigInt::zero())
                } else {
                    bezout(&a[t][t], &a[t][j])
                };
                let p = &a[t][t] / &g;
                let q = &a[t][j] / &g;
                let c = [&s, &r, &(-&q), &p];
                combine_cols(&mut a, t, j, c);
                combine_cols(&mut v, t, j, c);
                changed = true;
            }
            if !changed {
                // divisibility: fold a row containing a non-multiple into row t
                let piv = a[t][t].clone();
                let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&piv)));
                match bad {
                    Some(i) => {
                        let one = BigInt::one();
                        let zero = BigInt::zero();
                        combine_rows(&mut a, t, i, [&one, &one, &zero, &one]);
                        combine_rows(&mut u, t, i, [&one, &one, &zero, &one]);
                    }
                    None => break,
                }
            }
        }
        if a[t][t].is_negative() {
            for k in 0..n {
                a[t][k] = -&a[t][k];
                u[t][k] = -&u[t][k];
            }
        }
    }
    Ok(SmithForm {
        diagonal: (0..n).map(|i| a[i][i].clone()).collect(),
        u,
        v,
    })
}

/// Row-style Hermite normal form; returns the nonzero rows spanning the same lattice.
pub fn hnf_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            if a[r][c].is_zero() {
                a.swap(r, i);
                continue;
            }
            let (g, s, t) = bezout(&a[r][c], &a[i][c]);
            let p = &a[r][c] / &g;
            let q = &a[i][c] / &g;
            combine_rows(&mut a, r, i, [&s, &t, &(-&q), &p]);
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let f = a[i][c].div_floor(&a[r][c]);
            if !f.is_zero() {
                for k in 0..cols {
                    let v = &f * &a[r][k];
                    a[i][k] -= v;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Nonzero invariant factors of a nondegenerate Gram matrix, omitting 1s.
pub fn smith_invariants(gram: &IntMatrix) -> Result<Vec<BigInt>, LatticeError> {
    Ok(smith_normal_form(gram)?.invariants())
}

#[cfg(test)]
mod tests {
    use super::super::{build_lattice, det, mat_mul};
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m).unwrap();
        let d = mat_mul(&mat_mul(&s.u, m), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(x, &s.diagonal[i]);
                } else {
                    assert!(x.is_zero());
                }
            }
        }
        assert_eq!(det(&s.u).abs(), BigInt::one());
        assert_eq!(det(&s.v).abs(), BigInt::one());
        for w in s.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(check(&mat(&[&[2, 0], &[0, 6]])).invariants(), ints(&[2, 6]));
        assert_eq!(check(&mat(&[&[4, 2], &[2, 4]])).invariants(), ints(&[2, 6]));
        let d4 = build_lattice("D4(-1)").unwrap();
        assert_eq!(check(&d4.gram).invariants(), ints(&[2, 2]));
        assert_eq!(check(&mat(&[&[2, 0], &[0, 3]])).invariants(), ints(&[6]));
        assert!(check(&build_lattice("U").unwrap().gram)
            .invariants()
            .is_empty());
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(
            smith_normal_form(&mat(&[&[2, 4], &[1, 2]])),
            Err(LatticeError::Singular)
        );
    }

    #[test]
    fn hnf_example() {
        let h = hnf_rows(&mat(&[&[2, 4], &[3, 5], &[1, 1]]));
        assert_eq!(h, mat(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn rescaling_doubles_invariants() {
        for g in [
            mat(&[&[2, 0], &[0, 6]]),
            mat(&[&[2, 1], &[1, 4]]),
            mat(&[&[4, 0], &[0, 10]]),
        ] {
            let s1 = smith_normal_form(&g).unwrap().diagonal;
            let g2: IntMatrix = g
                .iter()
                .map(|r| r.iter().map(|x| x * 2).collect())
                .collect();
            let s2 = smith_normal_form(&g2).unwrap().diagonal;
            let doubled: Vec<BigInt> = s1.iter().map(|x| x * 2).collect();
            assert_eq!(s2, doubled);
        }
    }

    proptest! {
        #[test]
        fn product_is_abs_det(entries in proptest::collection::vec(-9i64..10, 9)) {
            let m: IntMatrix = (0..3)
                .map(|i| (0..3).map(|j| BigInt::from(entries[3 * i + j])).collect())
                .collect();
            prop_assume!(!det(&m).is_zero());
            let s = check(&m);
            let prod: BigInt = s.diagonal.iter().product();
            prop_assert_eq!(prod, det(&m).abs());
        }
    }
}
