use super::{compose, reduce, validate_discriminant, BinaryQuadraticForm, BqfError};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Class group of primitive forms of discriminant `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    #[serde(with = "crate::intser")]
    pub d: BigInt,
    pub elements: Vec<BinaryQuadraticForm>,
    /// Invariant factors `n_1 | n_2 | ...`, omitting 1s.
    pub structure: Vec<u64>,
    pub principal: BinaryQuadraticForm,
}

impl ClassGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_two_torsion(&self) -> bool {
        self.structure.iter().all(|&n| n == 2)
    }

    pub fn contains(&self, q: &BinaryQuadraticForm) -> bool {
        let r = reduce(q).form;
        self.elements.contains(&r)
    }

    /// Order of the class of `q`.
    pub fn element_order(&self, q: &BinaryQuadraticForm) -> Result<u64, BqfError> {
        element_order(q, &self.principal)
    }
}

/// Canonical ordering of reduced forms: by `a`, then `|b|`, positive `b` first, then `c`.
pub(crate) fn form_order(x: &BinaryQuadraticForm, y: &BinaryQuadraticForm) -> Ordering {
    x.a.cmp(&y.a)
        .then_with(|| x.b.abs().cmp(&y.b.abs()))
        .then_with(|| y.b.cmp(&x.b))
        .then_with(|| x.c.cmp(&y.c))
}

fn small_discriminant(d: &BigInt) -> Result<i64, BqfError> {
    validate_discriminant(d)?;
    d.to_i64()
        .filter(|v| *v > -(1i64 << 52))
        .ok_or_else(|| BqfError::InvalidDiscriminant(d.clone()))
}

/// Calls `f(a, b, c)` for every reduced form of discriminant `d` (primitive or not).
fn for_each_reduced(d: i64, mut f: impl FnMut(i64, i64, i64)) {
    let n = -d;
    let amax = (n / 3).sqrt();
    for a in 1..=amax {
        let four_a = 4 * a;
        for b in (-a + 1)..=a {
            let num = b * b - d;
            if num % four_a != 0 {
                continue;
            }
            let c = num / four_a;
            if c < a || (c == a && b < 0) {
                continue;
            }
            f(a, b, c);
        }
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// All reduced forms of discriminant `d` in canonical order.
pub fn reduced_forms(
    d: &BigInt,
    primitive_only: bool,
) -> Result<Vec<BinaryQuadraticForm>, BqfError> {
    let d = small_discriminant(d)?;
    let mut out = Vec::new();
    for_each_reduced(d, |a, b, c| {
        if !primitive_only || gcd3(a, b, c) == 1 {
            out.push(BinaryQuadraticForm {
                a: a.into(),
                b: b.into(),
                c: c.into(),
            });
        }
    });
    out.sort_by(form_order);
    Ok(out)
}

/// `h(d)` by counting reduced primitive forms.
pub fn class_number(d: &BigInt) -> Result<u64, BqfError> {
    let d = small_discriminant(d)?;
    Ok(class_number_i64(d))
}

fn class_number_i64(d: i64) -> u64 {
    let mut h = 0;
    for_each_reduced(d, |a, b, c| {
        if gcd3(a, b, c) == 1 {
            h += 1;
        }
    });
    h
}

fn element_order(
    q: &BinaryQuadraticForm,
    principal: &BinaryQuadraticForm,
) -> Result<u64, BqfError> {
    let q = reduce(q).form;
    let mut x = q.clone();
    let mut k = 1;
    while &x != principal {
        x = compose(&x, &q)?;
        k += 1;
    }
    Ok(k)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            ps.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

/// Invariant factors of a finite abelian group from the multiset of its element orders.
pub(crate) fn structure_from_orders(orders: &[u64]) -> Vec<u64> {
    let h = orders.len() as u64;
    // per prime, exponents of the cyclic p-factors, largest first
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for p in prime_factors(h) {
        let mut hp = 1u64;
        while h % (hp * p) == 0 {
            hp *= p;
        }
        let mut ranks = vec![0u32];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let mut r = 0;
            let mut c = count;
            while c > 1 {
                c /= p;
                r += 1;
            }
            ranks.push(r);
            if count == hp {
                break;
            }
        }
        // number of factors of size >= p^i is ranks[i] - ranks[i-1]
        let mut factors: Vec<u64> = Vec::new();
        let levels = ranks.len() - 1;
        for i in (1..=levels).rev() {
            let at_least_i = (ranks[i] - ranks[i - 1]) as usize;
            while factors.len() < at_least_i {
                factors.push(p.pow(i as u32));
            }
        }
        columns.push(factors);
    }
    let width = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut inv: Vec<u64> = (0..width)
        .map(|k| {
            columns
                .iter()
                .map(|c| c.get(k).copied().unwrap_or(1))
                .product()
        })
        .collect();
    inv.reverse();
    inv
}

/// Enumerates `Cl(d)` and computes its structure from composition orders.
pub fn class_group(d: &BigInt) -> Result<ClassGroup, BqfError> {
    let elements = reduced_forms(d, true)?;
    let principal = BinaryQuadraticForm::principal(d)?;
    let orders = elements
        .iter()
        .map(|q| element_order(q, &principal))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClassGroup {
        d: d.clone(),
        structure: structure_from_orders(&orders),
        elements,
        principal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusInfo {
    pub genus_members: Vec<BinaryQuadraticForm>,
    pub genus_size: usize,
    pub in_principal_genus: bool,
}

/// The genus of `[q]` as the coset `[q] * Cl(d)^2`.
pub fn genus_info(q: &BinaryQuadraticForm) -> Result<GenusInfo, BqfError> {
    if !q.is_primitive() {
        return Err(BqfError::Imprimitive(q.clone()));
    }
    let cl = class_group(&q.discriminant())?;
    let squares = squares_of(&cl)?;
    let rq = reduce(q).form;
    let mut members = squares
        .iter()
        .map(|s| compose(&rq, s))
        .collect::<Result<Vec<_>, _>>()?;
    members.sort_by(form_order);
    members.dedup();
    Ok(GenusInfo {
        genus_size: squares.len(),
        in_principal_genus: squares.contains(&rq),
        genus_members: members,
    })
}

pub(crate) fn squares_of(cl: &ClassGroup) -> Result<Vec<BinaryQuadraticForm>, BqfError> {
    let mut sq = cl
        .elements
        .iter()
        .map(|x| compose(x, x))
        .collect::<Result<Vec<_>, _>>()?;
    sq.sort_by(form_order);
    sq.dedup();
    Ok(sq)
}

/// Kronecker symbol `(d/2)`.
pub fn kronecker_at_2(d: &BigInt) -> i8 {
    if d.is_even() {
        return 0;
    }
    match d.mod_floor(&BigInt::from(8)).to_u8().unwrap_or(0) {
        1 | 7 => 1,
        _ => -1,
    }
}

/// A reduced form is of order at most two exactly when `b = 0`, `a = b` or `a = c`.
fn ambiguous(a: i64, b: i64, c: i64) -> bool {
    b == 0 || a == b || a == c
}

fn two_torsion_i64(d: i64) -> bool {
    let mut ok = true;
    for_each_reduced(d, |a, b, c| {
        if ok && gcd3(a, b, c) == 1 && !ambiguous(a, b, c) {
            ok = false;
        }
    });
    ok
}

/// Whether every class in `Cl(d)` has order at most two.
pub fn is_two_torsion_discriminant(d: &BigInt) -> Result<bool, BqfError> {
    Ok(two_torsion_i64(small_discriminant(d)?))
}

fn discriminants_up_to(bound: u64) -> Vec<i64> {
    (3..=bound as i64)
        .filter(|n| n % 4 == 0 || n % 4 == 3)
        .map(|n| -n)
        .collect()
}

/// All discriminants `d` with `|d| <= bound` whose class group has exponent at most two,
/// sorted by `|d|`.
pub fn two_torsion_scan(bound: u64) -> Vec<i64> {
    let mut out: Vec<i64> = discriminants_up_to(bound)
        .into_par_iter()
        .filter(|&d| two_torsion_i64(d))
        .collect();
    out.sort_by_key(|d| d.unsigned_abs());
    out
}

/// All discriminants with `|d| <= bound` and `h(d) = 1`, sorted by `|d|`.
pub fn class_number_one_scan(bound: u64) -> Vec<i64> {
    let mut out: Vec<i64> = discriminants_up_to(bound)
        .into_par_iter()
        .filter(|&d| class_number_i64(d) == 1)
        .collect();
    out.sort_by_key(|d| d.unsigned_abs());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn f(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::from_i64(a, b, c).unwrap()
    }

    fn big(d: i64) -> BigInt {
        BigInt::from(d)
    }

    #[test]
    fn class_group_examples() {
        let cl = class_group(&big(-23)).unwrap();
        assert_eq!(cl.elements, vec![f(1, 1, 6), f(2, 1, 3), f(2, -1, 3)]);
        assert_eq!(cl.structure, vec![3]);
        let cl = class_group(&big(-12)).unwrap();
        assert_eq!(cl.elements, vec![f(1, 0, 3)]);
        assert!(cl.structure.is_empty());
        let cl = class_group(&big(-4)).unwrap();
        assert_eq!(cl.elements, vec![f(1, 0, 1)]);
        assert!(class_group(&big(5)).is_err());
        assert!(class_group(&big(-6)).is_err());
    }

    #[test]
    fn known_structures() {
        // Cl(-84) = (Z/2)^2, Cl(-56) = Z/4, Cl(-420) = (Z/2)^3, Cl(-47) = Z/5
        assert_eq!(class_group(&big(-84)).unwrap().structure, vec![2, 2]);
        assert_eq!(class_group(&big(-56)).unwrap().structure, vec![4]);
        assert_eq!(class_group(&big(-420)).unwrap().structure, vec![2, 2, 2]);
        assert_eq!(class_group(&big(-47)).unwrap().structure, vec![5]);
    }

    #[test]
    fn structure_from_orders_mixed() {
        // Z/2 x Z/4: orders 1, 2 (x3), 4 (x4)
        let orders = [1, 2, 2, 2, 4, 4, 4, 4];
        assert_eq!(structure_from_orders(&orders), vec![2, 4]);
        // Z/6 = Z/2 x Z/3
        let orders = [1, 2, 3, 3, 6, 6];
        assert_eq!(structure_from_orders(&orders), vec![6]);
        assert!(structure_from_orders(&[1]).is_empty());
    }

    #[test]
    fn genus_examples() {
        let g = genus_info(&f(2, 1, 3)).unwrap();
        assert_eq!(g.genus_size, 3);
        assert!(g.in_principal_genus);
        let g = genus_info(&f(2, 2, 3)).unwrap();
        assert_eq!(g.genus_size, 1);
        assert!(!g.in_principal_genus);
        let g = genus_info(&f(1, 0, 5)).unwrap();
        assert_eq!(g.genus_size, 1);
        assert!(g.in_principal_genus);
        assert!(genus_info(&f(2, 2, 2)).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_at_2(&big(-7)), 1);
        assert_eq!(kronecker_at_2(&big(-12)), 0);
        assert_eq!(kronecker_at_2(&big(-11)), -1);
        assert_eq!(kronecker_at_2(&big(-3)), -1);
        assert_eq!(kronecker_at_2(&big(-15)), 1);
    }

    #[test]
    fn small_two_torsion_scan() {
        let s = two_torsion_scan(12);
        assert_eq!(s, vec![-3, -4, -7, -8, -11, -12]);
    }

    #[test]
    fn class_number_one_list() {
        let s = class_number_one_scan(200);
        assert_eq!(
            s,
            vec![-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163]
        );
    }

    // Cross-check of the shape criterion against actual composition orders.
    #[test]
    fn ambiguous_shape_matches_composition() {
        for n in 3..=500i64 {
            if n % 4 == 1 || n % 4 == 2 {
                continue;
            }
            let d = big(-n);
            let cl = class_group(&d).unwrap();
            for q in &cl.elements {
                let sq = compose(q, q).unwrap();
                let by_shape = ambiguous(
                    q.a.to_i64().unwrap(),
                    q.b.to_i64().unwrap(),
                    q.c.to_i64().unwrap(),
                );
                assert_eq!(sq == cl.principal, by_shape, "{q}");
            }
            let by_orders = cl.is_two_torsion();
            assert_eq!(two_torsion_i64(-n), by_orders, "d = -{n}");
        }
    }

    // Group axioms of composition against the enumerated class group.
    #[test]
    fn group_axioms_small() {
        for n in [23i64, 47, 56, 71, 84, 104, 140, 199, 260] {
            let cl = class_group(&big(-n)).unwrap();
            let e = &cl.elements;
            for x in e {
                assert_eq!(&compose(x, &cl.principal).unwrap(), x);
                assert_eq!(compose(x, &x.inverse()).unwrap(), cl.principal);
                for y in e {
                    let xy = compose(x, y).unwrap();
                    assert!(e.contains(&xy));
                    assert_eq!(xy, compose(y, x).unwrap());
                    for z in e {
                        assert_eq!(
                            compose(&xy, z).unwrap(),
                            compose(x, &compose(y, z).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn genera_partition() {
        for n in [84i64, 420, 260, 231, 96] {
            let cl = class_group(&big(-n)).unwrap();
            let mut seen: BTreeMap<String, usize> = BTreeMap::new();
            let mut size = None;
            for q in &cl.elements {
                let g = genus_info(q).unwrap();
                if let Some(s) = size {
                    assert_eq!(s, g.genus_members.len());
                }
                size = Some(g.genus_members.len());
                assert!(g.genus_members.contains(q));
                for m in &g.genus_members {
                    seen.entry(m.to_string()).or_default();
                }
            }
            assert_eq!(seen.len(), cl.order());
            assert_eq!(cl.order() % size.unwrap(), 0);
        }
    }

    fn valid_neg_disc() -> impl Strategy<Value = i64> {
        (1i64..2000)
            .prop_map(|k| if k % 2 == 0 { -(2 * k) } else { -(2 * k + 1) })
            .prop_filter("d = 0, 1 mod 4", |d| d.rem_euclid(4) <= 1 && *d <= -3)
    }

    proptest! {
        #[test]
        fn structure_product_is_class_number(d in valid_neg_disc()) {
            let cl = class_group(&big(d)).unwrap();
            let prod: u64 = cl.structure.iter().product();
            prop_assert_eq!(prod as usize, cl.order());
            for w in cl.structure.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            for q in &cl.elements {
                prop_assert!(q.is_reduced());
                prop_assert!(q.is_primitive());
            }
        }
    }
}
