//! Neron-Severi lattices of elliptic fibrations from fibre root types and torsion sections.

use super::{hnf_rows, mat_mul, transpose, EvenLattice, IntMatrix, LatticeError, RootType};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A section given by its contact with the zero section and the fibre components it meets.
///
/// `components[v]` is 0 for the identity component and otherwise the 1-based index of the
/// simple root of fibre `v` whose component the section meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionGlue {
    pub po: i64,
    pub components: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationLattice {
    /// `U` spanned by zero section and fibre, plus the fibre root lattices.
    pub trivial: EvenLattice,
    /// The overlattice generated by `trivial` and the glued sections.
    pub ns: EvenLattice,
    /// `[ns : trivial]`.
    pub index: BigInt,
}

/// Exact inverse of a nonsingular integer matrix.
pub fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<BigRational>>, LatticeError> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or(LatticeError::Singular)?;
        a.swap(k, p);
        let piv = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x /= &piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let v = &f * &a[k][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Builds `NS = <O, F, fibre roots, sections>` for an elliptic surface of arithmetic genus
/// `chi` with torsion sections `sections`. Only even `chi` gives an even lattice.
///
/// A torsion section has class `O + (chi + P.O) F - sum_v C_v^{-1} e_{i_v}` in the trivial
/// lattice tensored with `Q`, with fibre roots of self-intersection `-2`.
pub fn ns_from_fibration(
    chi: i64,
    fibres: &[RootType],
    sections: &[SectionGlue],
) -> Result<FibrationLattice, LatticeError> {
    if chi <= 0 || chi % 2 != 0 {
        return Err(LatticeError::Invalid(format!(
            "chi = {chi}: the zero section has odd self-intersection or the surface is not elliptic"
        )));
    }
    let mut trivial = EvenLattice::new(vec![
        vec![BigInt::from(-chi), BigInt::one()],
        vec![BigInt::one(), BigInt::zero()],
    ])?;
    let mut inverses = Vec::new();
    for &t in fibres {
        let c = t.cartan()?;
        inverses.push(rational_inverse(&c)?);
        trivial = trivial.direct_sum(&EvenLattice::root(t)?.scaled(-1)?);
    }
    let r = trivial.rank();
    let mut gens: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for s in sections {
        if s.components.len() != fibres.len() {
            return Err(LatticeError::Invalid(format!(
                "section lists {} components for {} fibres",
                s.components.len(),
                fibres.len()
            )));
        }
        let mut v = vec![
            BigRational::one(),
            BigRational::from_integer(BigInt::from(chi + s.po)),
        ];
        for (k, &t) in fibres.iter().enumerate() {
            let n = t.rank();
            let i = s.components[k];
            if i > n {
                return Err(LatticeError::Invalid(format!(
                    "component {i} out of range for {t:?}"
                )));
            }
            for j in 0..n {
                v.push(if i == 0 {
                    BigRational::zero()
                } else {
                    -inverses[k][j][i - 1].clone()
                });
            }
        }
        gens.push(v);
    }
    let l = gens
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntMatrix = gens
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let basis = hnf_rows(&scaled);
    let g = mat_mul(&mat_mul(&basis, &trivial.gram), &transpose(&basis));
    let l2 = &l * &l;
    let mut ns_gram = Vec::with_capacity(r);
    for row in g {
        let mut out = Vec::with_capacity(r);
        for x in row {
            if !x.is_multiple_of(&l2) {
                return Err(LatticeError::NonIntegralGlue);
            }
            out.push(x / &l2);
        }
        ns_gram.push(out);
    }
    let ns = EvenLattice::new(ns_gram).map_err(|e| match e {
        LatticeError::Odd => LatticeError::NonIntegralGlue,
        e => e,
    })?;
    let ratio = trivial.det() / ns.det();
    let index = ratio.sqrt();
    Ok(FibrationLattice { trivial, ns, index })
}
