//! Even integral lattices of small rank, discriminant groups and discriminant forms.

mod discform;
mod fibration;
mod smith;

pub use discform::{
    disc_forms_isomorphic, discriminant_form, is_two_divisible, rank2_forms_by_disc_form,
    FiniteQuadraticForm, Isomorphism, MAX_GROUP_ORDER,
};
pub use fibration::{ns_from_fibration, rational_inverse, FibrationLattice, SectionGlue};
pub use smith::{hnf_rows, smith_invariants, smith_normal_form, SmithForm};

use crate::bqf::BinaryQuadraticForm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix has an odd diagonal entry")]
    Odd,
    #[error("Gram matrix is singular")]
    Singular,
    #[error("rescaling by zero")]
    ZeroScale,
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("cannot parse lattice expression: {0}")]
    Parse(String),
    #[error("discriminant group of order {0} exceeds the search limit")]
    TooLarge(u64),
    #[error("glue vectors do not span an integral overlattice")]
    NonIntegralGlue,
    #[error("{0}")]
    Invalid(String),
}

/// Root lattice types, with their positive-definite Cartan matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A(usize),
    D(usize),
    E(usize),
}

impl RootType {
    pub fn rank(self) -> usize {
        match self {
            RootType::A(n) | RootType::D(n) | RootType::E(n) => n,
        }
    }

    pub fn cartan(self) -> Result<IntMatrix, LatticeError> {
        let n = self.rank();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        match self {
            RootType::A(n) if n >= 1 => edges.extend((1..n).map(|i| (i - 1, i))),
            RootType::D(n) if n >= 4 => {
                edges.extend((1..n - 1).map(|i| (i - 1, i)));
                edges.push((n - 3, n - 1));
            }
            // Bourbaki labels 1-3-4-5-..., with 2 attached to 4
            RootType::E(n) if (6..=8).contains(&n) => {
                edges.push((0, 2));
                edges.push((1, 3));
                edges.extend((3..n).map(|i| (i - 1, i)));
            }
            _ => return Err(LatticeError::UnknownName(format!("{self:?}"))),
        }
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = BigInt::from(2);
        }
        for (i, j) in edges {
            m[i][j] = BigInt::from(-1);
            m[j][i] = BigInt::from(-1);
        }
        Ok(m)
    }
}

/// An even nondegenerate lattice given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenLattice {
    #[serde(with = "gram_serde")]
    pub gram: IntMatrix,
}

mod gram_serde {
    use super::IntMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "crate::intser::vec")] Vec<num_bigint::BigInt>);

    pub fn serialize<S: Serializer>(g: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Row> = g.iter().map(|r| Row(r.clone())).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let rows: Vec<Row> = Vec::deserialize(d)?;
        Ok(rows.into_iter().map(|r| r.0).collect())
    }
}

impl EvenLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            if gram[i][i].is_odd() {
                return Err(LatticeError::Odd);
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        if n > 0 && det(&gram).is_zero() {
            return Err(LatticeError::Singular);
        }
        Ok(Self { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        if self.gram.is_empty() {
            return BigInt::one();
        }
        det(&self.gram)
    }

    pub fn hyperbolic_plane() -> Self {
        Self::from_i64(&[&[0, 1], &[1, 0]]).unwrap()
    }

    pub fn root(t: RootType) -> Result<Self, LatticeError> {
        Self::new(t.cartan()?)
    }

    /// The rank-one lattice `<n>`.
    pub fn rank_one(n: i64) -> Result<Self, LatticeError> {
        Self::from_i64(&[&[n]])
    }

    /// The even lattice `((2a, b), (b, 2c))` of a binary form.
    pub fn from_form(q: &BinaryQuadraticForm) -> Self {
        Self::new(q.gram().iter().map(|r| r.to_vec()).collect()).expect("positive-definite form")
    }

    /// `L(n)`: the Gram matrix multiplied by `n`.
    pub fn scaled(&self, n: i64) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::ZeroScale);
        }
        let n = BigInt::from(n);
        Ok(Self {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|x| x * &n).collect())
                .collect(),
        })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.rank(), other.rank());
        let mut g = vec![vec![BigInt::zero(); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                g[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                g[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        Self { gram: g }
    }

    /// `(n_+, n_-)`.
    pub fn signature(&self) -> (usize, usize) {
        signature(&self.gram)
    }
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn mat_mul(x: &IntMatrix, y: &IntMatrix) -> IntMatrix {
    let n = x.len();
    let m = y.first().map_or(0, Vec::len);
    let k = y.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigInt::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                .collect()
        })
        .collect()
}

pub fn transpose(x: &IntMatrix) -> IntMatrix {
    let m = x.first().map_or(0, Vec::len);
    (0..m)
        .map(|j| x.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Inertia of a symmetric integer matrix by congruence diagonalisation over `Q`.
pub fn signature(g: &IntMatrix) -> (usize, usize) {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k <- e_k + e_j makes the pivot 2 a_kj (a_jj = 0 here)
                for i in 0..n {
                    let v = a[j][i].clone();
                    a[k][i] += v;
                }
                for i in 0..n {
                    let v = a[i][j].clone();
                    a[i][k] += v;
                }
            } else {
                continue;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
            a[i][k] = BigRational::zero();
        }
    }
    (pos, neg)
}

/// Parses and builds a lattice from an expression such as `U + 2E8(-1) + <-4> + A5(-1)`.
///
/// Summands: `U`, `A<n>`, `D<n>`, `E6`, `E7`, `E8`, `<k>` and `Q(a,b,c)` for a binary
/// form. Each may carry a multiplicity prefix and a rescaling suffix `(n)`.
pub fn build_lattice(expr: &str) -> Result<EvenLattice, LatticeError> {
    let mut out = EvenLattice { gram: Vec::new() };
    let terms = split_top_level(expr)?;
    if terms.is_empty() {
        return Err(LatticeError::Parse("empty expression".into()));
    }
    for term in terms {
        let (mult, lat) = parse_term(&term)?;
        for _ in 0..mult {
            out = out.direct_sum(&lat);
        }
    }
    EvenLattice::new(out.gram)
}

fn split_top_level(expr: &str) -> Result<Vec<String>, LatticeError> {
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in expr.chars() {
        match ch {
            '(' | '<' => depth += 1,
            ')' | '>' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(LatticeError::Parse(format!(
                "unbalanced brackets in `{expr}`"
            )));
        }
        if ch == '+' && depth == 0 {
            terms.push(std::mem::take(&mut cur));
        } else if !ch.is_whitespace() {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(LatticeError::Parse(format!(
            "unbalanced brackets in `{expr}`"
        )));
    }
    terms.push(cur);
    if terms.iter().any(String::is_empty) {
        return Err(LatticeError::Parse(format!("empty summand in `{expr}`")));
    }
    Ok(terms)
}

fn parse_int(s: &str) -> Result<i64, LatticeError> {
    s.trim()
        .parse()
        .map_err(|_| LatticeError::Parse(format!("expected an integer, got `{s}`")))
}

fn parse_term(term: &str) -> Result<(usize, EvenLattice), LatticeError> {
    let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
    let mult = if digits.is_empty() {
        1
    } else {
        digits
            .parse::<usize>()
            .map_err(|e| LatticeError::Parse(e.to_string()))?
    };
    let rest = &term[digits.len()..];
    let (base, rest) = if let Some(r) = rest.strip_prefix('<') {
        let end = r
            .find('>')
            .ok_or_else(|| LatticeError::Parse(format!("unclosed `<` in `{term}`")))?;
        (EvenLattice::rank_one(parse_int(&r[..end])?)?, &r[end + 1..])
    } else if let Some(r) = rest.strip_prefix("Q(") {
        let end = r
            .find(')')
            .ok_or_else(|| LatticeError::Parse(format!("unclosed `(` in `{term}`")))?;
        let v: Vec<i64> = r[..end]
            .split(',')
            .map(parse_int)
            .collect::<Result<_, _>>()?;
        if v.len() != 3 {
            return Err(LatticeError::Parse(format!(
                "Q needs three entries in `{term}`"
            )));
        }
        let q = BinaryQuadraticForm::from_i64(v[0], v[1], v[2])
            .map_err(|e| LatticeError::Invalid(e.to_string()))?;
        (EvenLattice::from_form(&q), &r[end + 1..])
    } else {
        let name_len = rest.find('(').unwrap_or(rest.len());
        let name = &rest[..name_len];
        let lat = match name {
            "U" => EvenLattice::hyperbolic_plane(),
            _ => {
                let (kind, n) = name.split_at(name.len().min(1));
                let n: usize = n
                    .parse()
                    .map_err(|_| LatticeError::UnknownName(name.to_string()))?;
                let t = match kind {
                    "A" => RootType::A(n),
                    "D" => RootType::D(n),
                    "E" => RootType::E(n),
                    _ => return Err(LatticeError::UnknownName(name.to_string())),
                };
                EvenLattice::root(t)?
            }
        };
        (lat, &rest[name_len..])
    };
    let lat = if rest.is_empty() {
        base
    } else {
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| LatticeError::Parse(format!("bad rescaling in `{term}`")))?;
        base.scaled(parse_int(inner)?)?
    };
    Ok((mult, lat))
}
