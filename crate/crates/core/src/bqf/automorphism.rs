use super::{mat2_det, BinaryQuadraticForm, BqfError, Mat2};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutName {
    Trivial,
    Klein,
    #[serde(rename = "D8")]
    D8,
    #[serde(rename = "D12")]
    D12,
}

impl AutName {
    pub fn order(self) -> usize {
        match self {
            AutName::Trivial => 2,
            AutName::Klein => 4,
            AutName::D8 => 8,
            AutName::D12 => 12,
        }
    }
}

impl fmt::Display for AutName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AutName::Trivial => "trivial",
            AutName::Klein => "klein",
            AutName::D8 => "D8",
            AutName::D12 => "D12",
        };
        f.write_str(s)
    }
}

/// The full integral orthogonal group `{M : M^T G M = G}` of a reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismGroup {
    pub order: usize,
    pub name: AutName,
    #[serde(skip)]
    pub matrices: Vec<Mat2>,
}

/// Name by shape of the reduced form.
pub fn aut_name_by_shape(q: &BinaryQuadraticForm) -> AutName {
    let (a, b, c) = (&q.a, &q.b, &q.c);
    if b.is_zero() && a == c {
        AutName::D8
    } else if a == b && a == c {
        AutName::D12
    } else if b.is_zero() || a == b || a == c {
        AutName::Klein
    } else {
        AutName::Trivial
    }
}

/// All integral `(x, y)` with `Q(x, y) = n`.
fn representations(q: &BinaryQuadraticForm, n: &BigInt) -> Vec<(BigInt, BigInt)> {
    let d = -q.discriminant();
    let four_a = BigInt::from(4) * &q.a;
    // a Q(x,y) = (a x + b y / 2)^2 + |d| y^2 / 4, so y^2 <= 4 a n / |d|
    let ymax = (&four_a * n / &d).sqrt();
    let mut out = Vec::new();
    let mut y = -ymax.clone();
    while y <= ymax {
        // a x^2 + b y x + (c y^2 - n) = 0
        let disc = &q.b * &q.b * &y * &y - &four_a * (&q.c * &y * &y - n);
        if !disc.is_negative() {
            let s = disc.sqrt();
            if &s * &s == disc {
                let two_a = BigInt::from(2) * &q.a;
                let by = &q.b * &y;
                let mut roots = vec![-&by + &s, -&by - &s];
                roots.dedup();
                for r in roots {
                    if r.is_multiple_of(&two_a) {
                        out.push((r / &two_a, y.clone()));
                    }
                }
            }
        }
        y += 1;
    }
    out.sort();
    out
}

/// Brute-force automorphism group of a reduced form.
pub fn automorphism_group(q: &BinaryQuadraticForm) -> Result<AutomorphismGroup, BqfError> {
    if !q.is_reduced() {
        return Err(BqfError::NotReduced(q.clone()));
    }
    let vs = representations(q, &q.a);
    let ws = representations(q, &q.c);
    let two = BigInt::from(2);
    let mut matrices = Vec::new();
    for (x1, y1) in &vs {
        for (x2, y2) in &ws {
            // v^T G w with G = ((2a, b), (b, 2c))
            let cross = &two * &q.a * x1 * x2 + &q.b * (x1 * y2 + x2 * y1) + &two * &q.c * y1 * y2;
            if cross != q.b {
                continue;
            }
            let m: Mat2 = [[x1.clone(), x2.clone()], [y1.clone(), y2.clone()]];
            debug_assert_eq!(mat2_det(&m).abs(), BigInt::from(1));
            matrices.push(m);
        }
    }
    Ok(AutomorphismGroup {
        order: matrices.len(),
        name: aut_name_by_shape(q),
        matrices,
    })
}
