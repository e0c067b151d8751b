use super::{mat_mul, smith_normal_form, transpose, EvenLattice, LatticeError};
use crate::bqf::{reduced_forms, BinaryQuadraticForm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Largest group order accepted by the exhaustive isomorphism search.
pub const MAX_GROUP_ORDER: u64 = 10_000;

/// A finite quadratic form on `Z/n_1 x ... x Z/n_k`, given by `q` on generators and `b`
/// between generators. `q` values lie in `[0, 2)`, `b` values in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteQuadraticForm {
    pub invariant_factors: Vec<u64>,
    #[serde(with = "crate::intser::rational::vec")]
    pub q_gens: Vec<BigRational>,
    #[serde(with = "rat_matrix")]
    pub b_gens: Vec<Vec<BigRational>>,
}

mod rat_matrix {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "crate::intser::rational::vec")] Vec<BigRational>);

    pub fn serialize<S: Serializer>(m: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Row> = m.iter().map(|r| Row(r.clone())).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let rows: Vec<Row> = Vec::deserialize(d)?;
        Ok(rows.into_iter().map(|r| r.0).collect())
    }
}

fn mod_rat(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let k = (x / &m).floor();
    x - k * m
}

/// Integer tables scaled by a common denominator `n`: `q` mod `2n`, `b` mod `n`.
#[derive(Debug, Clone)]
struct Scaled {
    n: i64,
    orders: Vec<u64>,
    q: Vec<i64>,
    b: Vec<Vec<i64>>,
}

impl Scaled {
    fn q_of(&self, x: &[u64]) -> i64 {
        let two_n = 2 * self.n as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            let xi = x[i] as i128;
            acc += xi * xi % two_n * self.q[i] as i128;
            for j in i + 1..x.len() {
                acc += 2 * (xi * x[j] as i128 % two_n) * self.b[i][j] as i128;
            }
            acc %= two_n;
        }
        acc.rem_euclid(two_n) as i64
    }

    fn b_of(&self, x: &[u64], y: &[u64]) -> i64 {
        let n = self.n as i128;
        let mut acc: i128 = 0;
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            for j in 0..y.len() {
                acc += (x[i] as i128 * y[j] as i128 % n) * self.b[i][j] as i128;
                acc %= n;
            }
        }
        acc.rem_euclid(n) as i64
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), m)| (a + b) % m)
            .collect()
    }

    fn scale(&self, x: &[u64], k: u64) -> Vec<u64> {
        x.iter()
            .zip(&self.orders)
            .map(|(a, m)| ((*a as u128 * k as u128) % *m as u128) as u64)
            .collect()
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &m in &self.orders {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..m).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn order_of(&self, x: &[u64]) -> u64 {
        x.iter()
            .zip(&self.orders)
            .fold(1u64, |acc, (a, m)| acc.lcm(&(m / a.gcd(m))))
    }
}

impl FiniteQuadraticForm {
    pub fn trivial() -> Self {
        Self {
            invariant_factors: vec![],
            q_gens: vec![],
            b_gens: vec![],
        }
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn length(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.iter().fold(1, |a, b| a.lcm(b))
    }

    pub fn negated(&self) -> Self {
        Self {
            invariant_factors: self.invariant_factors.clone(),
            q_gens: self.q_gens.iter().map(|x| mod_rat(&-x, 2)).collect(),
            b_gens: self
                .b_gens
                .iter()
                .map(|r| r.iter().map(|x| mod_rat(&-x, 1)).collect())
                .collect(),
        }
    }

    /// Common denominator of all stored values, a multiple of the exponent.
    fn denominator(&self) -> i64 {
        let mut n = BigInt::from(self.exponent());
        for x in self.q_gens.iter().chain(self.b_gens.iter().flatten()) {
            n = n.lcm(x.denom());
        }
        n.to_i64().expect("denominator fits in i64")
    }

    fn scaled(&self) -> Scaled {
        self.scaled_with(self.denominator())
    }

    fn scaled_with(&self, n: i64) -> Scaled {
        let nr = BigRational::from_integer(BigInt::from(n));
        let to_int = |x: &BigRational, m: i64| -> i64 {
            (x * &nr)
                .to_integer()
                .mod_floor(&BigInt::from(m))
                .to_i64()
                .unwrap()
        };
        Scaled {
            n,
            orders: self.invariant_factors.clone(),
            q: self.q_gens.iter().map(|x| to_int(x, 2 * n)).collect(),
            b: self
                .b_gens
                .iter()
                .map(|r| r.iter().map(|x| to_int(x, n)).collect())
                .collect(),
        }
    }

    fn rat(&self, num: i64, n: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(n))
    }

    /// All group elements as coordinate vectors, in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.scaled().elements()
    }

    /// `q(x)` in `[0, 2)`.
    pub fn q(&self, x: &[u64]) -> BigRational {
        let s = self.scaled();
        self.rat(s.q_of(x), s.n)
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &[u64], y: &[u64]) -> BigRational {
        let s = self.scaled();
        self.rat(s.b_of(x, y), s.n)
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.scaled().add(x, y)
    }

    /// `(element, q(element))` for every element.
    pub fn q_values(&self) -> Vec<(Vec<u64>, BigRational)> {
        let s = self.scaled();
        s.elements()
            .into_iter()
            .map(|x| {
                let v = self.rat(s.q_of(&x), s.n);
                (x, v)
            })
            .collect()
    }

    /// Sorted multiset of `q` over nonzero elements.
    pub fn nonzero_q_multiset(&self) -> Vec<BigRational> {
        let mut v: Vec<BigRational> = self
            .q_values()
            .into_iter()
            .filter(|(x, _)| x.iter().any(|&k| k != 0))
            .map(|(_, v)| v)
            .collect();
        v.sort();
        v
    }

    /// The `p`-primary part, with generators `(n_i / p^{v_p(n_i)}) g_i`.
    pub fn primary_part(&self, p: u64) -> Self {
        let mut keep = Vec::new();
        for (i, &n) in self.invariant_factors.iter().enumerate() {
            let mut pk = 1;
            let mut m = n;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            if pk > 1 {
                keep.push((i, pk, m));
            }
        }
        let big = |x: u64| BigRational::from_integer(BigInt::from(x));
        Self {
            invariant_factors: keep.iter().map(|k| k.1).collect(),
            q_gens: keep
                .iter()
                .map(|&(i, _, m)| mod_rat(&(&self.q_gens[i] * big(m * m)), 2))
                .collect(),
            b_gens: keep
                .iter()
                .map(|&(i, _, mi)| {
                    keep.iter()
                        .map(|&(j, _, mj)| mod_rat(&(&self.b_gens[i][j] * big(mi * mj)), 1))
                        .collect()
                })
                .collect(),
        }
    }

    /// Checks `q(x + y) - q(x) - q(y) = 2 b(x, y)` and `q(-x) = q(x)` on all pairs.
    pub fn check_compatibility(&self) -> bool {
        let s = self.scaled();
        let els = s.elements();
        let two_n = 2 * s.n;
        for x in &els {
            let neg = s.scale(x, s.orders.iter().product::<u64>().max(1) - 1);
            if s.q_of(&neg) != s.q_of(x) {
                return false;
            }
            for y in &els {
                let lhs = (s.q_of(&s.add(x, y)) - s.q_of(x) - s.q_of(y)).rem_euclid(two_n);
                let rhs = (2 * s.b_of(x, y)).rem_euclid(two_n);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Discriminant form of an even nondegenerate lattice.
///
/// With `U G V = D` in Smith form, the classes `V e_i / d_i` generate `L^v / L`, and
/// `b(g_i, g_j) = (V^T G V)_ij / (d_i d_j)`.
pub fn discriminant_form(l: &EvenLattice) -> Result<FiniteQuadraticForm, LatticeError> {
    if l.rank() == 0 {
        return Ok(FiniteQuadraticForm::trivial());
    }
    let snf = smith_normal_form(&l.gram)?;
    let vtgv = mat_mul(&mat_mul(&transpose(&snf.v), &l.gram), &snf.v);
    let idx: Vec<usize> = (0..l.rank())
        .filter(|&i| !snf.diagonal[i].is_one())
        .collect();
    let mut factors = Vec::new();
    for &i in &idx {
        let d = snf.diagonal[i]
            .to_u64()
            .filter(|&d| d <= MAX_GROUP_ORDER * MAX_GROUP_ORDER)
            .ok_or(LatticeError::TooLarge(u64::MAX))?;
        factors.push(d);
    }
    let val = |i: usize, j: usize| {
        BigRational::new(vtgv[i][j].clone(), &snf.diagonal[i] * &snf.diagonal[j])
    };
    Ok(FiniteQuadraticForm {
        invariant_factors: factors,
        q_gens: idx.iter().map(|&i| mod_rat(&val(i, i), 2)).collect(),
        b_gens: idx
            .iter()
            .map(|&i| idx.iter().map(|&j| mod_rat(&val(i, j), 1)).collect())
            .collect(),
    })
}

/// A `q`-preserving group isomorphism, as generator images in the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isomorphism {
    pub images: Vec<Vec<u64>>,
}

/// Searches for an isomorphism `f1 -> f2` (or `f1 -> -f2` when `negate_second`).
pub fn disc_forms_isomorphic(
    f1: &FiniteQuadraticForm,
    f2: &FiniteQuadraticForm,
    negate_second: bool,
) -> Result<Option<Isomorphism>, LatticeError> {
    for f in [f1, f2] {
        if f.order() > MAX_GROUP_ORDER {
            return Err(LatticeError::TooLarge(f.order()));
        }
    }
    if f1.order() != f2.order() {
        return Ok(None);
    }
    let target = if negate_second {
        f2.negated()
    } else {
        f2.clone()
    };
    let n = f1.denominator().lcm(&target.denominator());
    let s1 = f1.scaled_with(n);
    let s2 = target.scaled_with(n);
    let els2 = s2.elements();
    let gens1: Vec<Vec<u64>> = (0..s1.orders.len())
        .map(|i| (0..s1.orders.len()).map(|j| u64::from(i == j)).collect())
        .collect();
    // candidates per generator: exact order and matching q
    let cands: Vec<Vec<&Vec<u64>>> = gens1
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let qg = s1.q_of(g);
            els2.iter()
                .filter(|y| s2.order_of(y) == s1.orders[i] && s2.q_of(y) == qg)
                .collect()
        })
        .collect();
    let mut chosen: Vec<Vec<u64>> = Vec::new();
    if search(&s1, &s2, &gens1, &cands, &mut chosen) {
        Ok(Some(Isomorphism { images: chosen }))
    } else {
        Ok(None)
    }
}

fn search(
    s1: &Scaled,
    s2: &Scaled,
    gens1: &[Vec<u64>],
    cands: &[Vec<&Vec<u64>>],
    chosen: &mut Vec<Vec<u64>>,
) -> bool {
    let k = chosen.len();
    if k == gens1.len() {
        return image_size(s2, chosen) == s2.orders.iter().product::<u64>();
    }
    for &y in &cands[k] {
        let ok = (0..k).all(|j| s2.b_of(y, &chosen[j]) == s1.b_of(&gens1[k], &gens1[j]));
        if !ok {
            continue;
        }
        chosen.push(y.clone());
        if search(s1, s2, gens1, cands, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn image_size(s: &Scaled, gens: &[Vec<u64>]) -> u64 {
    let zero = vec![0u64; s.orders.len()];
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = s.add(&x, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len() as u64
}

/// Whether `Q = Q'(2)` for an even form `Q'`; returns `Q'`.
pub fn is_two_divisible(q: &BinaryQuadraticForm) -> Option<BinaryQuadraticForm> {
    let two = BigInt::from(2);
    if q.a.is_even() && q.b.is_even() && q.c.is_even() {
        Some(BinaryQuadraticForm {
            a: &q.a / &two,
            b: &q.b / &two,
            c: &q.c / &two,
        })
    } else {
        None
    }
}

/// Reduced forms (primitive or not) of discriminant `d` whose discriminant form is
/// isomorphic to `sign * target`.
pub fn rank2_forms_by_disc_form(
    d: &BigInt,
    target: &FiniteQuadraticForm,
    sign: i8,
) -> Result<Vec<BinaryQuadraticForm>, LatticeError> {
    let forms = reduced_forms(d, false).map_err(|e| LatticeError::Invalid(e.to_string()))?;
    let mut out = Vec::new();
    for q in forms {
        let f = discriminant_form(&EvenLattice::from_form(&q))?;
        if disc_forms_isomorphic(&f, target, sign < 0)?.is_some() {
            out.push(q);
        }
    }
    Ok(out)
}
