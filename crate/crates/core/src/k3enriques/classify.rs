//! Enriques involutions on `X_Q`, base change involutions on Inose's pencil, the exceptional
//! forms, fields of definition, the Kummer sandwich and the Brauer example lattice.

use super::K3Error;
use crate::bqf::{
    class_group, class_number, class_number_one_scan, genus_info, is_two_torsion_discriminant,
    kronecker_at_2, reduce, two_torsion_scan, BinaryQuadraticForm,
};
use crate::lattice::{build_lattice, is_two_divisible};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Largest `|d|` among the known two-torsion discriminants.
pub const EXCEPTION_SCAN_BOUND: u64 = 7392;
pub const EXCEPTION_COUNT: usize = 62;
pub const EXCEPTION_CAVEAT: &str = "62 forms (1,0,|d|/4), one for each of the 65 known even \
    two-torsion discriminants except -4, -8, -16; one further discriminant may exist if GRH \
    fails, which would make 63";

fn small(d: &BigInt) -> i64 {
    d.to_i64().unwrap_or(i64::MIN)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

/// Whether `X_Q` admits an Enriques involution.
pub fn enriques_admissible(q: &BinaryQuadraticForm) -> Admissibility {
    let d = q.discriminant();
    let ds = small(&d);
    let f = reduce(q).form;
    let (admissible, reason) = if ds.rem_euclid(8) == 5 {
        (false, "d = 5 mod 8".to_string())
    } else if ds == -4 || ds == -8 {
        (false, format!("d = {ds}"))
    } else if ds == -16 && f == BinaryQuadraticForm::from_i64(1, 0, 4).expect("form") {
        (false, "d = -16 and Q = diag(2,8) is not Kummer".to_string())
    } else if ds == -16 {
        (true, "d = -16 and Q = diag(4,4) is Kummer".to_string())
    } else {
        (true, "no obstruction".to_string())
    };
    Admissibility { admissible, reason }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Exception,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Exception => "exception",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeVerdict {
    pub verdict: Verdict,
    pub mechanism: String,
}

/// Existence of an Enriques involution of base change type on Inose's pencil.
pub fn base_change_enriques(q: &BinaryQuadraticForm) -> Result<BaseChangeVerdict, K3Error> {
    let adm = enriques_admissible(q);
    if !adm.admissible {
        return Ok(BaseChangeVerdict {
            verdict: Verdict::No,
            mechanism: format!("no Enriques involution: {}", adm.reason),
        });
    }
    let d = q.discriminant();
    if d.is_odd() {
        // admissible odd d are exactly d = 1 mod 8
        return Ok(BaseChangeVerdict {
            verdict: Verdict::Yes,
            mechanism: "rank one pencil, d = 1 mod 8 gives a free involution".into(),
        });
    }
    let f = reduce(q).form;
    let diag = BinaryQuadraticForm {
        a: 1.into(),
        b: 0.into(),
        c: -&d / 4,
    };
    if f == diag && is_two_torsion_discriminant(&d)? {
        return Ok(BaseChangeVerdict {
            verdict: Verdict::Exception,
            mechanism: "Q = diag(2,|d|/2) with Cl(d) two-torsion".into(),
        });
    }
    Ok(BaseChangeVerdict {
        verdict: Verdict::Yes,
        mechanism: "rank two pencil, section on a conjugate pair".into(),
    })
}

/// The forms `(1,0,|d|/4)` for even two-torsion `d`, excluding `d = -4, -8, -16`.
pub fn exception_list() -> Vec<BinaryQuadraticForm> {
    static LIST: OnceLock<Vec<BinaryQuadraticForm>> = OnceLock::new();
    LIST.get_or_init(|| {
        two_torsion_scan(EXCEPTION_SCAN_BOUND)
            .into_iter()
            .filter(|d| d % 2 == 0 && ![-4, -8, -16].contains(d))
            .map(|d| BinaryQuadraticForm::from_i64(1, 0, -d / 4).expect("form"))
            .collect()
    })
    .clone()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldReport {
    #[serde(with = "crate::intser")]
    pub d: BigInt,
    pub class_number: u64,
    /// `[H(d):K] = h(d)`.
    #[serde(rename = "deg_HK")]
    pub deg_hk: u64,
    #[serde(rename = "deg_H4d_over_Hd")]
    pub deg_h4d_over_hd: u8,
    pub genus_size: usize,
    #[serde(with = "crate::intser")]
    pub kummer_disc: BigInt,
    /// Any field of definition `L` has `genus_size | [L:K]`.
    pub min_field_bound: String,
    /// Set when `Q` was imprimitive and genus data comes from its primitive part.
    pub via_primitive_part: Option<BinaryQuadraticForm>,
}

/// `[H(4d):H(d)]` by the residue of `d` at 2.
pub fn deg_h4d_over_hd(d: &BigInt) -> u8 {
    let ds = small(d);
    if ds == -3 || ds == -4 || kronecker_at_2(d) == 1 {
        1
    } else if d.is_even() {
        2
    } else {
        3
    }
}

pub fn fields_report(q: &BinaryQuadraticForm) -> Result<FieldReport, K3Error> {
    let d = q.discriminant();
    let (_, prim) = q.primitive_part();
    let h = class_number(&d)?;
    let genus = genus_info(&prim)?;
    Ok(FieldReport {
        class_number: h,
        deg_hk: h,
        deg_h4d_over_hd: deg_h4d_over_hd(&d),
        genus_size: genus.genus_size,
        kummer_disc: &d * 4,
        min_field_bound: format!("{} divides [L:K]", genus.genus_size),
        via_primitive_part: (!q.is_primitive()).then_some(prim),
        d,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerSandwich {
    pub kummer_form: BinaryQuadraticForm,
    #[serde(with = "crate::intser")]
    pub kummer_disc: BigInt,
    pub is_kummer: bool,
    pub half_form: Option<BinaryQuadraticForm>,
}

/// `T(X') = T(X)(2)` for the Kummer surface `X'` sandwiching `X`.
pub fn kummer_sandwich(q: &BinaryQuadraticForm) -> KummerSandwich {
    let half = is_two_divisible(q);
    KummerSandwich {
        kummer_form: BinaryQuadraticForm {
            a: &q.a * 2,
            b: &q.b * 2,
            c: &q.c * 2,
        },
        kummer_disc: q.discriminant() * 4,
        is_kummer: half.is_some(),
        half_form: half,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerExample {
    pub ns_expression: String,
    pub rank: usize,
    #[serde(with = "crate::intser")]
    pub det: BigInt,
    #[serde(with = "crate::intser")]
    pub d: BigInt,
    pub notes: Vec<String>,
}

/// `NS(X) = U + 2E8(-1) + <-4M> + <-2N>`, `N > 1` odd.
pub fn brauer_example(m: u64, n: u64) -> Result<BrauerExample, K3Error> {
    if m == 0 || n <= 1 || n % 2 == 0 {
        return Err(K3Error::Invalid(format!(
            "need M >= 1 and N > 1 odd, got M = {m}, N = {n}"
        )));
    }
    let expr = format!("U + 2E8(-1) + <-{}> + <-{}>", 4 * m, 2 * n);
    let lat = build_lattice(&expr)?;
    let det = lat.det();
    let d = BigInt::from(-8) * m * n;
    if det != d {
        return Err(K3Error::Internal(format!(
            "det {det} differs from -8MN = {d}"
        )));
    }
    Ok(BrauerExample {
        ns_expression: expr,
        rank: lat.rank(),
        det,
        d,
        notes: vec![
            format!(
                "the section of height {} induces the Enriques involution",
                4 * m
            ),
            format!(
                "the orthogonal section of height {} is anti-invariant",
                2 * n
            ),
            "hence the pull-back of Br(Y) vanishes".into(),
        ],
    })
}

/// Discriminants with `h(d) = 1` up to `10^4`; exactly 13.
pub fn class_number_one_discriminants() -> Result<Vec<i64>, K3Error> {
    let ds = class_number_one_scan(10_000);
    if ds.len() != 13 {
        return Err(K3Error::Internal(format!(
            "{} discriminants of class number one, expected 13",
            ds.len()
        )));
    }
    Ok(ds)
}

/// Whether `Q` is the principal form of its discriminant.
pub fn is_principal_class(q: &BinaryQuadraticForm) -> Result<bool, K3Error> {
    let f = reduce(q).form;
    Ok(class_group(&f.discriminant())?.principal == f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bqf::reduced_forms;
    use proptest::prelude::*;

    fn form(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::from_i64(a, b, c).unwrap()
    }

    #[test]
    fn admissibility() {
        assert!(!enriques_admissible(&form(1, 0, 4)).admissible);
        assert!(enriques_admissible(&form(2, 0, 2)).admissible);
        assert!(!enriques_admissible(&form(1, 1, 3)).admissible);
        assert!(!enriques_admissible(&form(1, 0, 1)).admissible);
        assert!(!enriques_admissible(&form(1, 0, 2)).admissible);
        // non-reduced representative of diag(2,8)
        assert!(!enriques_admissible(&form(1, 2, 5)).admissible);
        assert!(enriques_admissible(&form(1, 0, 3)).admissible);
    }

    #[test]
    fn base_change() {
        let v = |a, b, c| base_change_enriques(&form(a, b, c)).unwrap().verdict;
        assert_eq!(v(1, 1, 2), Verdict::Yes);
        assert_eq!(v(1, 0, 3), Verdict::Exception);
        assert_eq!(v(2, 0, 3), Verdict::Yes);
        assert_eq!(v(1, 0, 6), Verdict::Exception);
        assert_eq!(v(1, 1, 3), Verdict::No);
        assert_eq!(v(1, 0, 1), Verdict::No);
        // h(-56) = 4 is cyclic, so (1,0,14) is not exceptional
        assert_eq!(v(1, 0, 14), Verdict::Yes);
    }

    #[test]
    fn exceptions() {
        let e = exception_list();
        assert_eq!(e.len(), EXCEPTION_COUNT);
        assert!(e.contains(&form(1, 0, 3)));
        assert!(e.contains(&form(1, 0, 1848)));
        assert!(!e.contains(&form(1, 0, 4)));
        for q in &e {
            assert_eq!(base_change_enriques(q).unwrap().verdict, Verdict::Exception);
        }
    }

    #[test]
    fn field_degrees() {
        let deg = |a, b, c| fields_report(&form(a, b, c)).unwrap().deg_h4d_over_hd;
        assert_eq!(deg(1, 0, 3), 2);
        assert_eq!(deg(1, 1, 2), 1);
        assert_eq!(deg(1, 1, 3), 3);
        assert_eq!(deg(1, 1, 1), 1);
        assert_eq!(deg(1, 0, 1), 1);
        let r = fields_report(&form(2, 1, 3)).unwrap();
        assert_eq!((r.class_number, r.deg_hk, r.genus_size), (3, 3, 3));
        assert_eq!(r.kummer_disc, BigInt::from(-92));
        let r = fields_report(&form(2, 0, 2)).unwrap();
        assert_eq!(r.via_primitive_part, Some(form(1, 0, 1)));
        assert_eq!(r.d, BigInt::from(-16));
    }

    #[test]
    fn kummer() {
        let k = kummer_sandwich(&form(1, 0, 3));
        assert_eq!(k.kummer_form, form(2, 0, 6));
        assert_eq!(k.kummer_disc, BigInt::from(-48));
        assert!(!k.is_kummer && k.half_form.is_none());
        let k = kummer_sandwich(&form(2, 0, 2));
        assert_eq!(k.half_form, Some(form(1, 0, 1)));
        let k = kummer_sandwich(&form(2, 2, 2));
        assert_eq!(k.half_form, Some(form(1, 1, 1)));
    }

    #[test]
    fn brauer() {
        assert_eq!(brauer_example(1, 3).unwrap().d, BigInt::from(-24));
        assert_eq!(brauer_example(1, 5).unwrap().d, BigInt::from(-40));
        let b = brauer_example(2, 3).unwrap();
        assert_eq!((b.d, b.rank), (BigInt::from(-48), 20));
        assert!(brauer_example(1, 4).is_err());
        assert!(brauer_example(1, 1).is_err());
        assert!(brauer_example(0, 3).is_err());
    }

    #[test]
    fn class_number_one() {
        let ds = class_number_one_discriminants().unwrap();
        assert_eq!(ds.len(), 13);
        for d in [-163, -12, -16, -3, -4] {
            assert!(ds.contains(&d));
        }
    }

    #[test]
    fn odd_discriminant_coherence() {
        for n in (3..=1000i64).filter(|n| n % 4 == 3) {
            let d = BigInt::from(-n);
            for q in reduced_forms(&d, false).unwrap() {
                let adm = enriques_admissible(&q).admissible;
                let bc = base_change_enriques(&q).unwrap().verdict;
                assert_eq!(bc == Verdict::Yes, adm, "{q}");
                assert_eq!(adm, (-n).rem_euclid(8) == 1);
            }
        }
    }

    proptest! {
        #[test]
        fn exception_coherence(n in 3i64..2000) {
            let d = BigInt::from(-n);
            prop_assume!((-n).rem_euclid(4) <= 1);
            let exceptions = exception_list();
            for q in reduced_forms(&d, false).unwrap() {
                let bc = base_change_enriques(&q).unwrap();
                if bc.verdict == Verdict::Exception {
                    prop_assert!(enriques_admissible(&q).admissible);
                    prop_assert!(exceptions.contains(&q));
                }
                if bc.verdict == Verdict::Yes {
                    prop_assert!(enriques_admissible(&q).admissible);
                }
            }
        }

        #[test]
        fn sandwich_round_trip(a in 1i64..60, b in -60i64..60, c in 1i64..60) {
            let q = BinaryQuadraticForm { a: a.into(), b: b.into(), c: c.into() };
            prop_assume!(q.discriminant() < BigInt::from(0));
            let k = kummer_sandwich(&q);
            prop_assert!(k.kummer_disc == &q.discriminant() * 4);
            prop_assert_eq!(kummer_sandwich(&k.kummer_form).half_form, Some(q));
        }
    }
}
