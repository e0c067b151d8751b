//! Inose's pencil `y^2 = x^3 - 3 A t^4 x + t^5 (t^2 - 2 B t + 1)` on `X_Q`, with
//! `A^3 = j j' / 12^6` and `B^2 = (1 - j/12^3)(1 - j'/12^3)`.

use super::cm::{cm_points, CMPoint};
use super::jfunc::{from_bigint, j_cm_full, terms_for, to_f64, Complex, JValue, GUARD, RM};
use super::K3Error;
use crate::bqf::BinaryQuadraticForm;
use crate::ellsurf::weierstrass::inose_model;
use crate::ellsurf::{Fe, KodairaType, Poly, WeierstrassModel};
use astro_float::{BigFloat, Consts, Radix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Singular fibres of the pencil besides the two `II*` and the `I1`s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExtraFibers {
    #[serde(rename = "none")]
    None,
    I2,
    #[serde(rename = "2I2")]
    TwoI2,
    IV,
}

impl ExtraFibers {
    pub fn kinds(&self) -> Vec<KodairaType> {
        match self {
            ExtraFibers::None => vec![],
            ExtraFibers::I2 => vec![KodairaType::I(2)],
            ExtraFibers::TwoI2 => vec![KodairaType::I(2), KodairaType::I(2)],
            ExtraFibers::IV => vec![KodairaType::IV],
        }
    }
}

impl std::fmt::Display for ExtraFibers {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExtraFibers::None => "none",
            ExtraFibers::I2 => "I2",
            ExtraFibers::TwoI2 => "2I2",
            ExtraFibers::IV => "IV",
        })
    }
}

/// Mordell-Weil rank and extra fibres of the pencil, decided from the class of `Q` alone.
pub fn pencil_row(principal: bool, d: i64) -> (u8, ExtraFibers) {
    match (principal, d) {
        (false, _) => (2, ExtraFibers::None),
        (true, -4) => (0, ExtraFibers::TwoI2),
        (true, -3) => (0, ExtraFibers::IV),
        (true, _) => (1, ExtraFibers::I2),
    }
}

/// Exact value when `j, j'` are certified integers, otherwise a decimal approximation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InoseCoefficient {
    #[serde(with = "crate::intser::rational::option")]
    pub exact: Option<BigRational>,
    pub re: String,
    pub im: String,
}

impl InoseCoefficient {
    pub fn approx(&self) -> (f64, f64) {
        (
            self.re.parse().unwrap_or(f64::NAN),
            self.im.parse().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InoseData {
    pub form: BinaryQuadraticForm,
    #[serde(with = "crate::intser")]
    pub d: BigInt,
    pub j: JValue,
    pub j_prime: JValue,
    pub a_cubed: InoseCoefficient,
    pub b_squared: InoseCoefficient,
    pub mw_rank: u8,
    pub extra_fibers: ExtraFibers,
    pub e_isomorphic_eprime: bool,
    /// Rational model, present when both coefficients are exact.
    #[serde(skip)]
    pub model: Option<WeierstrassModel>,
}

const DIGITS: usize = 40;

fn decimal(x: &BigFloat, cc: &mut Consts) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x
        .format(Radix::Dec, RM, cc)
        .unwrap_or_else(|_| format!("{}", to_f64(x)));
    round_mantissa(&s, DIGITS)
}

/// Round a decimal `[-]d.ddd...e[+-]N` rendering to `n` significant digits.
fn round_mantissa(s: &str, n: usize) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let digits: Vec<u8> = mant
        .bytes()
        .filter(u8::is_ascii_digit)
        .map(|b| b - b'0')
        .collect();
    if digits.len() <= n {
        return s.to_string();
    }
    let mut kept = digits[..n].to_vec();
    let mut exp = exp;
    if digits[n] >= 5 {
        let mut i = n;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                exp += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    while kept.len() > 1 && kept.last() == Some(&0) {
        kept.pop();
    }
    let body: String = kept.iter().map(|d| char::from(b'0' + d)).collect();
    let (head, tail) = body.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

fn coefficient(exact: Option<BigRational>, value: &Complex, cc: &mut Consts) -> InoseCoefficient {
    InoseCoefficient {
        exact,
        re: decimal(&value.re, cc),
        im: decimal(&value.im, cc),
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `y^2 = x^3 - 3 B^2 A^3 t^4 x + B^2 A^3 t^5 (B^2 t^2 - 2 B^2 t + 1)`: the pencil after
/// `t -> B t` and the quadratic twist by `A B`, rational in `A^3, B^2` when `A B != 0`.
pub fn rational_inose_model(
    a3: &BigRational,
    b2: &BigRational,
) -> Result<WeierstrassModel, K3Error> {
    let fe = |x: &BigRational| Fe::from_rat(x.clone());
    if a3.is_zero() && b2.is_zero() {
        return Err(K3Error::Invalid("A and B both vanish".into()));
    }
    if a3.is_zero() {
        // t -> -t identifies B and -B
        if *b2 != rat(1) {
            return Err(K3Error::Invalid(format!("A = 0 needs B^2 = 1, got {b2}")));
        }
        return Ok(inose_model(&Fe::zero(), &Fe::one(), 1)?);
    }
    if b2.is_zero() {
        if *a3 != rat(1) {
            return Err(K3Error::Invalid(format!("B = 0 needs A^3 = 1, got {a3}")));
        }
        return Ok(inose_model(&Fe::one(), &Fe::zero(), 1)?);
    }
    let k = fe(&(a3 * b2));
    let t = Poly::t();
    let a4 = t.pow(4).scale(&(&k * &Fe::from_int(-3)));
    let quad = Poly::new(vec![Fe::one(), fe(&(b2 * rat(-2))), fe(b2)]);
    let a6 = (&t.pow(5) * &quad).scale(&k);
    Ok(WeierstrassModel::short(a4, a6, 1)?)
}

fn certified(v: &JValue) -> Option<BigRational> {
    v.certified.clone().map(BigRational::from_integer)
}

/// Coefficients, Mordell-Weil rank and extra fibres of Inose's pencil on `X_Q`.
pub fn inose_pencil(q: &BinaryQuadraticForm, bits: usize) -> Result<InoseData, K3Error> {
    let pts = cm_points(q)?;
    let d = pts.form.discriminant();
    let p = bits + GUARD;
    let eval = |tau: &CMPoint| -> Result<(JValue, Complex), K3Error> {
        j_cm_full(tau, bits, terms_for(tau, bits))
    };
    let (jv, j) = eval(&pts.tau)?;
    let (jpv, jp) = eval(&pts.tau_prime)?;

    let c1728 = Complex::real(BigFloat::from_i64(1728, p), p);
    let c12_6 = Complex::real(from_bigint(&BigInt::from(12).pow(6), p), p);
    let one = Complex::real(BigFloat::from_i64(1, p), p);
    let a3 = j.mul(&jp, p).div(&c12_6, p);
    let b2 = one
        .sub(&j.div(&c1728, p), p)
        .mul(&one.sub(&jp.div(&c1728, p), p), p);

    let (a3_exact, b2_exact) = match (certified(&jv), certified(&jpv)) {
        (Some(j), Some(jp)) => {
            let a3 = &j * &jp / BigRational::from_integer(BigInt::from(12).pow(6));
            let b2 = (BigRational::one() - &j / rat(1728)) * (BigRational::one() - &jp / rat(1728));
            (Some(a3), Some(b2))
        }
        _ => (None, None),
    };

    let d_small = i64::try_from(&d).unwrap_or(i64::MIN);
    let (mw_rank, extra_fibers) = pencil_row(pts.e_isomorphic_eprime, d_small);
    // j = 0 and j = 12^3 pin d = -3 and d = -4
    if let Some(j) = &jv.certified {
        let special = j.is_zero() || *j == BigInt::from(1728);
        if special != matches!(d_small, -3 | -4) {
            return Err(K3Error::Internal(format!("j = {j} at discriminant {d}")));
        }
    }

    let model = match (&a3_exact, &b2_exact) {
        (Some(a), Some(b)) => Some(rational_inose_model(a, b)?),
        _ => None,
    };
    let mut cc = Consts::new().map_err(|e| K3Error::Precision(format!("{e:?}")))?;
    Ok(InoseData {
        form: pts.form,
        d,
        a_cubed: coefficient(a3_exact, &a3, &mut cc),
        b_squared: coefficient(b2_exact, &b2, &mut cc),
        j: jv,
        j_prime: jpv,
        mw_rank,
        extra_fibers,
        e_isomorphic_eprime: pts.e_isomorphic_eprime,
        model,
    })
}

#[cfg(test)]
mod tests {
    use super::super::jfunc::DEFAULT_BITS;
    use super::*;
    use crate::bqf::{class_number_one_scan, reduced_forms};
    use crate::ellsurf::fiber_survey;
    use proptest::prelude::*;

    fn form(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::from_i64(a, b, c).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn example_coefficients() {
        let x = inose_pencil(&form(1, 0, 3), DEFAULT_BITS).unwrap();
        assert_eq!(x.a_cubed.exact, Some(r(15625, 16)));
        assert_eq!(x.b_squared.exact, Some(r(14641, 16)));
        assert_eq!((x.mw_rank, x.extra_fibers), (1, ExtraFibers::I2));
        assert_eq!(x.a_cubed.re, "9.765625e2");
        assert_eq!(x.a_cubed.im, "0");

        let x = inose_pencil(&form(1, 0, 1), DEFAULT_BITS).unwrap();
        assert_eq!(x.a_cubed.exact, Some(r(1, 1)));
        assert_eq!(x.b_squared.exact, Some(r(0, 1)));
        assert_eq!((x.mw_rank, x.extra_fibers), (0, ExtraFibers::TwoI2));

        let x = inose_pencil(&form(1, 1, 1), DEFAULT_BITS).unwrap();
        assert_eq!(x.a_cubed.exact, Some(r(0, 1)));
        assert_eq!((x.mw_rank, x.extra_fibers), (0, ExtraFibers::IV));
    }

    #[test]
    fn non_principal_class() {
        let x = inose_pencil(&form(2, 1, 3), DEFAULT_BITS).unwrap();
        assert_eq!((x.mw_rank, x.extra_fibers), (2, ExtraFibers::None));
        assert!(x.a_cubed.exact.is_none() && x.model.is_none());
        assert!(!x.e_isomorphic_eprime);
        // A^3 = j j' / 12^6 with j' real and j complex
        let (jr, ji) = x.j.approx;
        let (jpr, _) = x.j_prime.approx;
        let (ar, ai) = x.a_cubed.approx();
        let s = 12f64.powi(6);
        assert!((ar - jr * jpr / s).abs() < 1e-9 * ar.abs().max(1.0));
        assert!((ai - ji * jpr / s).abs() < 1e-9 * ai.abs().max(1.0));
    }

    #[test]
    fn imprimitive_rejected() {
        assert!(matches!(
            inose_pencil(&form(2, 0, 6), DEFAULT_BITS),
            Err(K3Error::Imprimitive(_))
        ));
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(round_mantissa("1.23456e+5", 3), "1.23e5");
        assert_eq!(round_mantissa("-9.5", 5), "-9.5");
        assert_eq!(round_mantissa("-9.9996e-3", 3), "-1e-2");
        assert_eq!(round_mantissa("9.7656249999999e+2", 8), "9.765625e2");
    }

    #[test]
    fn model_handoff_for_class_number_one() {
        let ds = class_number_one_scan(200);
        assert_eq!(ds.len(), 13);
        for d in ds {
            let q = crate::bqf::class_group(&BigInt::from(d)).unwrap().principal;
            let x = inose_pencil(&q, DEFAULT_BITS).unwrap();
            let w = x.model.as_ref().expect("rational model");
            let s = fiber_survey(w).unwrap();
            assert_eq!(s.euler_sum, 24, "d = {d}");
            let mut expect = vec![KodairaType::IIStar, KodairaType::IIStar];
            expect.extend(x.extra_fibers.kinds());
            let mut got: Vec<KodairaType> = s
                .all_fibers()
                .iter()
                .map(|f| f.kind)
                .filter(|k| *k != KodairaType::I(1))
                .collect();
            expect.sort();
            got.sort();
            assert_eq!(got, expect, "d = {d}");
        }
    }

    #[test]
    fn pencil_rows_over_small_discriminants() {
        for d in (3..=300i64).map(|n| -n).filter(|d| d.rem_euclid(4) <= 1) {
            let dd = BigInt::from(d);
            let cg = crate::bqf::class_group(&dd).unwrap();
            for f in reduced_forms(&dd, true).unwrap() {
                let (rank, extra) = pencil_row(f == cg.principal, d);
                assert_eq!(rank == 2, f != cg.principal);
                assert_eq!(
                    matches!(extra, ExtraFibers::TwoI2 | ExtraFibers::IV),
                    matches!(d, -3 | -4)
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn pencil_rows_agree_with_pencil(n in 3i64..300) {
            let d = -n;
            prop_assume!(d.rem_euclid(4) <= 1);
            let dd = BigInt::from(d);
            let forms = reduced_forms(&dd, true).unwrap();
            let f = forms.last().unwrap();
            let x = inose_pencil(f, 128).unwrap();
            let principal = *f == crate::bqf::class_group(&dd).unwrap().principal;
            prop_assert_eq!((x.mw_rank, x.extra_fibers), pencil_row(principal, d));
            prop_assert_eq!(x.model.is_some(), forms.len() == 1);
        }
    }
}
