//! Local height contributions and heights of sections.

use super::field::{rat, Fe};
use super::kodaira::{KodairaFiber, KodairaType};
use super::poly::Poly;
use super::ratfun::RationalFunction;
use super::survey::{bad_places, fiber_survey, localize_minimal, Place};
use super::weierstrass::WeierstrassModel;
use super::EllsurfError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

/// Number of simple components; valid indices are `0..count`.
///
/// `I_n`: components `0..n` around the cycle. `I_n^*`: 1 near, 2 and 3 far.
/// `III`, `III*`: 1. `IV`, `IV*`: 1, 2.
pub fn simple_components(t: KodairaType) -> usize {
    match t {
        KodairaType::I(0) => 1,
        KodairaType::I(n) => n as usize,
        KodairaType::II | KodairaType::IIStar => 1,
        KodairaType::III | KodairaType::IIIStar => 2,
        KodairaType::IV | KodairaType::IVStar => 3,
        KodairaType::IStar(_) => 4,
    }
}

fn br(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

/// `contr_v(P, Q)` for `P` on component `i` and `Q` on component `j`.
pub fn local_pairing(t: KodairaType, i: usize, j: usize) -> Result<BigRational, EllsurfError> {
    let count = simple_components(t);
    if i >= count || j >= count {
        return Err(EllsurfError::Input(format!(
            "component index out of range for {t}: ({i}, {j}), valid 0..{count}"
        )));
    }
    if i == 0 || j == 0 {
        return Ok(BigRational::zero());
    }
    let (i, j) = (i.min(j), i.max(j));
    Ok(match t {
        KodairaType::I(n) => br((i * (n as usize - j)) as i64, n as i64),
        KodairaType::III => br(1, 2),
        KodairaType::IIIStar => br(3, 2),
        KodairaType::IV => br(if i == j { 2 } else { 1 }, 3),
        KodairaType::IVStar => br(if i == j { 4 } else { 2 }, 3),
        KodairaType::IStar(n) => {
            let n = n as i64;
            match (i, j) {
                (1, 1) => br(1, 1),
                (1, _) => br(1, 2),
                (a, b) if a == b => br(4 + n, 4),
                _ => br(2 + n, 4),
            }
        }
        KodairaType::II | KodairaType::IIStar => unreachable!("single simple component"),
    })
}

/// `contr_v(P)` for `P` meeting component `i`.
pub fn local_contribution(t: KodairaType, i: usize) -> Result<BigRational, EllsurfError> {
    local_pairing(t, i, i)
}

/// `h(P) = 2 chi + 2 (P.O) - sum contr_v(P)`.
pub fn height_from_data(chi: u32, po: u32, contribs: &[BigRational]) -> BigRational {
    let s: BigRational = contribs.iter().sum();
    BigRational::from_integer(BigInt::from(2 * chi + 2 * po)) - s
}

/// A section, either the zero section or an affine point `(x, y)` over `K(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionData {
    Zero,
    Point {
        x: RationalFunction,
        y: RationalFunction,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceRecord {
    pub place: Place,
    pub fiber: KodairaFiber,
    /// `v(x)` in the local minimal model; `None` when `x = 0`.
    pub x_valuation: Option<i64>,
    pub component: usize,
    /// Local intersection with the zero section, times the place degree.
    pub contact: u32,
    #[serde(with = "crate::intser::rational")]
    pub contribution: BigRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionAnalysis {
    pub chi: u32,
    /// `P.O`; `None` for the zero section.
    pub po: Option<u32>,
    /// Singular fibres plus any place where `P` meets `O`.
    pub places: Vec<PlaceRecord>,
    /// Contact with `O` at places outside `places` (good fibres over non-linear places).
    pub other_contact: u32,
    #[serde(with = "crate::intser::rational")]
    pub height: BigRational,
}

fn v_or_inf(v: Option<i64>) -> i64 {
    v.unwrap_or(i64::MAX / 8)
}

/// Height of a section through the local analysis at every singular fibre.
pub fn analyze_section(
    w: &WeierstrassModel,
    p: &SectionData,
) -> Result<SectionAnalysis, EllsurfError> {
    let survey = fiber_survey(w)?;
    let (x, y) = match p {
        SectionData::Zero => {
            return Ok(SectionAnalysis {
                chi: survey.chi,
                po: None,
                places: Vec::new(),
                other_contact: 0,
                height: BigRational::zero(),
            })
        }
        SectionData::Point { x, y } => (x, y),
    };
    if !w.contains(x, y) {
        return Err(EllsurfError::NotOnCurve);
    }
    let bad = bad_places(w)?;
    let mut places: Vec<Place> = bad.linear.iter().map(Place::at).collect();
    places.push(Place::Infinity);

    let mut records = Vec::new();
    for place in &places {
        let loc = localize_minimal(w, place);
        let kind = loc.kodaira_type()?;
        let fiber = KodairaFiber {
            kind,
            split: loc.split(),
        };
        let (xl, yl) = loc.transport(w, x, y);
        let vx = loc.valuation(&xl);
        let (component, contact) = if v_or_inf(vx) < 0 {
            let v = -vx.expect("finite");
            if v % 2 != 0 {
                return Err(EllsurfError::Internal(format!(
                    "odd pole order {v} of x at {place}"
                )));
            }
            (0, (v / 2) as u32 * place.degree() as u32)
        } else {
            (component_of(&loc.model, &loc, kind, &xl, &yl)?, 0)
        };
        let contribution = local_contribution(kind, component)?;
        if kind != KodairaType::I(0) || contact > 0 {
            records.push(PlaceRecord {
                place: place.clone(),
                fiber,
                x_valuation: vx,
                component,
                contact,
                contribution,
            });
        }
    }

    // poles of x away from the linear places: the model is minimal there
    let (xs, _) = w.to_short_point(x, y);
    let mut den = xs.den().clone();
    for r in &bad.linear {
        den = den.valuation_by(&Poly::linear(r)).1;
    }
    let rest = den.degree().unwrap_or(0);
    if rest % 2 != 0 {
        return Err(EllsurfError::Internal(format!(
            "denominator of x has odd degree {rest} away from the singular fibres"
        )));
    }
    let other_contact = (rest / 2) as u32;
    let po = records.iter().map(|r| r.contact).sum::<u32>() + other_contact;
    let contribs: Vec<BigRational> = records.iter().map(|r| r.contribution.clone()).collect();
    Ok(SectionAnalysis {
        chi: survey.chi,
        po: Some(po),
        places: records,
        other_contact,
        height: height_from_data(survey.chi, po, &contribs),
    })
}

/// Simple component met by a point with integral `x` on a minimal short model.
fn component_of(
    model: &WeierstrassModel,
    loc: &super::survey::LocalModel,
    kind: KodairaType,
    x: &RationalFunction,
    y: &RationalFunction,
) -> Result<usize, EllsurfError> {
    let rf = |p: &Poly| RationalFunction::from_poly(p.clone());
    let (a4, a6) = (rf(&model.a[3]), rf(&model.a[4]));
    let c = |n: i64| RationalFunction::constant(Fe::from_int(n));
    let psi2 = &c(2) * y;
    let fx = &(&c(3) * &(x * x)) + &a4;
    let v2 = loc.valuation(&psi2);
    if v_or_inf(v2) == 0 || v_or_inf(loc.valuation(&fx)) == 0 {
        return Ok(0);
    }
    if let KodairaType::I(n) = kind {
        if n == 0 {
            return Err(EllsurfError::Internal(
                "singular reduction on a smooth fibre".into(),
            ));
        }
        let a = v_or_inf(v2).min((n / 2) as i64);
        return Ok(a as usize);
    }
    // psi3 = 3x^4 + 6 a4 x^2 + 12 a6 x - a4^2
    let x2 = x * x;
    let psi3 = &(&(&(&c(3) * &(&x2 * &x2)) + &(&(&c(6) * &a4) * &x2)) + &(&(&c(12) * &a6) * x))
        - &(&a4 * &a4);
    let v3 = loc.valuation(&psi3);
    let contr = if v3.is_some() && v_or_inf(v3) >= 3 * v_or_inf(v2) {
        BigRational::new((2 * v_or_inf(v2)).into(), 3.into())
    } else {
        BigRational::new(v_or_inf(v3).into(), 4.into())
    };
    (1..simple_components(kind))
        .find(|&i| local_contribution(kind, i).is_ok_and(|c| c == contr))
        .ok_or_else(|| {
            EllsurfError::ComponentAmbiguity(format!(
                "local correction {contr} does not match a simple component of {kind} at {}",
                loc.place
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::super::parse::{parse_fe, parse_ratfun};
    use super::super::weierstrass::{example_rational_model, family_model};
    use super::*;
    use KodairaType::*;

    #[test]
    fn contribution_table() {
        assert_eq!(local_contribution(I(2), 1).unwrap(), br(1, 2));
        assert_eq!(local_contribution(I(4), 2).unwrap(), br(1, 1));
        assert_eq!(local_contribution(I(6), 2).unwrap(), br(4, 3));
        assert_eq!(local_contribution(IIIStar, 1).unwrap(), br(3, 2));
        assert_eq!(local_contribution(IVStar, 2).unwrap(), br(4, 3));
        assert_eq!(local_contribution(IStar(0), 3).unwrap(), br(1, 1));
        assert_eq!(local_contribution(IStar(2), 1).unwrap(), br(1, 1));
        assert_eq!(local_contribution(IStar(2), 2).unwrap(), br(3, 2));
        assert_eq!(local_pairing(IStar(2), 2, 3).unwrap(), br(1, 1));
        assert_eq!(local_pairing(I(6), 1, 3).unwrap(), br(1, 2));
        assert_eq!(local_pairing(IV, 1, 2).unwrap(), br(1, 3));
        for t in [I(3), II, III, IV, IStar(1), IVStar, IIIStar, IIStar] {
            assert!(local_contribution(t, 0).unwrap().is_zero());
        }
        assert!(local_contribution(II, 1).is_err());
        assert!(local_contribution(I(2), 2).is_err());
    }

    /// The contribution table agrees with the inverse Cartan matrix of the fibre root lattice:
    /// `contr(i, j) = (C^-1)_{ij}` on the simple components' dual vectors.
    #[test]
    fn contributions_match_inverse_cartan() {
        use crate::lattice::{build_lattice, rational_inverse};
        // simple component -> root index (1-based) of its dual vector, Bourbaki labels
        let cases: Vec<(KodairaType, &str, Vec<usize>)> = vec![
            (I(5), "A4", vec![1, 2, 3, 4]),
            (III, "A1", vec![1]),
            (IV, "A2", vec![1, 2]),
            (IStar(0), "D4", vec![1, 3, 4]),
            (IStar(3), "D7", vec![1, 6, 7]),
            (IVStar, "E6", vec![1, 6]),
            (IIIStar, "E7", vec![7]),
        ];
        for (t, name, idx) in cases {
            let inv = rational_inverse(&build_lattice(name).unwrap().gram).unwrap();
            for (a, &ra) in idx.iter().enumerate() {
                for (b, &rb) in idx.iter().enumerate() {
                    let want = inv[ra - 1][rb - 1].clone();
                    let got = local_pairing(t, a + 1, b + 1).unwrap();
                    assert_eq!(got, want, "{t} ({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn height_formula() {
        assert_eq!(height_from_data(2, 0, &[br(1, 2)]), br(7, 2));
        assert_eq!(height_from_data(2, 1, &[br(3, 2), br(3, 2)]), br(3, 1));
        assert_eq!(height_from_data(2, 0, &[]), br(4, 1));
    }

    #[test]
    fn example_height_three() {
        let w = family_model(&parse_fe("1/9").unwrap(), -3).unwrap();
        let x = parse_ratfun("-12t^3/(9t-1)^2").unwrap();
        let y = parse_ratfun("2/9*sqrt(-3)*t^3*(9t+1)*(81t^2-36t+1)/(9t-1)^3").unwrap();
        assert!(w.contains(&x, &y));
        let a = analyze_section(&w, &SectionData::Point { x, y }).unwrap();
        assert_eq!(a.height, br(3, 1));
        assert_eq!(a.po, Some(1));
        assert_eq!(a.chi, 2);
        let iii: Vec<&PlaceRecord> = a
            .places
            .iter()
            .filter(|r| r.fiber.kind == IIIStar)
            .collect();
        assert_eq!(iii.len(), 2);
        assert!(iii.iter().all(|r| r.contribution == br(3, 2)));
    }

    /// `y^2 = x^3 + t x + 1` has a III* fibre at infinity and `P = (0, 1)` of height 1/2;
    /// the double cover `t = u^2` turns it into I0* and doubles the height.
    #[test]
    fn height_doubles_under_quadratic_base_change() {
        let w = WeierstrassModel::short(Poly::from_ints(&[0, 1]), Poly::one(), 1).unwrap();
        let p = SectionData::Point {
            x: RationalFunction::zero(),
            y: RationalFunction::from_poly(Poly::one()),
        };
        let a = analyze_section(&w, &p).unwrap();
        assert_eq!((a.chi, a.height.clone()), (1, br(1, 2)));
        let phi = parse_ratfun("u^2").unwrap();
        let b = w.base_change(&phi).unwrap();
        assert_eq!(
            fiber_survey(&b)
                .unwrap()
                .fiber_at(&Place::Infinity)
                .unwrap()
                .kind,
            IStar(0)
        );
        let (x, y) = w
            .base_change_point(
                &phi,
                &RationalFunction::zero(),
                &RationalFunction::from_poly(Poly::one()),
            )
            .unwrap();
        let h = analyze_section(&b, &SectionData::Point { x, y })
            .unwrap()
            .height;
        assert_eq!(h, &a.height * br(2, 1));
    }

    #[test]
    fn zero_section() {
        let w = example_rational_model();
        let a = analyze_section(&w, &SectionData::Zero).unwrap();
        assert!(a.height.is_zero());
        assert_eq!(a.po, None);
    }

    #[test]
    fn torsion_section_through_base_change() {
        let w = example_rational_model();
        let p = RationalFunction::from_poly(Poly::from_ints(&[-1, 1]));
        let a = analyze_section(
            &w,
            &SectionData::Point {
                x: p.clone(),
                y: p.clone(),
            },
        )
        .unwrap();
        assert!(a.height.is_zero());
        let phi = parse_ratfun("-8*s^2/(s^2-1)").unwrap();
        let k3 = w.base_change(&phi).unwrap();
        let (x, y) = w.base_change_point(&phi, &p, &p).unwrap();
        let a = analyze_section(&k3, &SectionData::Point { x, y }).unwrap();
        assert!(a.height.is_zero());
        let at = |pl: &Place| a.places.iter().find(|r| &r.place == pl).unwrap().component;
        assert_eq!(at(&Place::at(&Fe::from_int(0))), 0);
        assert_eq!(at(&Place::Infinity), 0);
    }

    #[test]
    fn off_curve_rejected() {
        let w = example_rational_model();
        let (x, y) = (
            RationalFunction::t(),
            RationalFunction::from_poly(Poly::one()),
        );
        assert_eq!(
            analyze_section(&w, &SectionData::Point { x, y }).unwrap_err(),
            EllsurfError::NotOnCurve
        );
    }
}
