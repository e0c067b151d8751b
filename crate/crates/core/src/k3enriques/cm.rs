//! CM points `tau = (p + q sqrt d) / r` in the upper half plane.

use super::K3Error;
use crate::bqf::{class_group, reduce, BinaryQuadraticForm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMPoint {
    #[serde(with = "crate::intser")]
    pub p: BigInt,
    #[serde(with = "crate::intser")]
    pub q: BigInt,
    #[serde(with = "crate::intser")]
    pub r: BigInt,
    #[serde(with = "crate::intser")]
    pub d: BigInt,
}

impl CMPoint {
    /// `(p + q sqrt d) / r` with `d < 0`, `q > 0`, `r > 0`, reduced by the common gcd.
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Result<Self, K3Error> {
        if !d.is_negative() || !q.is_positive() || !r.is_positive() {
            return Err(K3Error::Invalid(format!(
                "CM point needs d < 0, q > 0, r > 0; got ({p} + {q} sqrt({d}))/{r}"
            )));
        }
        let g = p.gcd(&q).gcd(&r);
        Ok(Self {
            p: p / &g,
            q: q / &g,
            r: r / &g,
            d,
        })
    }

    /// Primitive form `(A, B, C)` with `A tau^2 + B tau + C = 0`, `A > 0`.
    pub fn defining_form(&self) -> BinaryQuadraticForm {
        // (r x - p)^2 = q^2 d
        let a = &self.r * &self.r;
        let b = BigInt::from(-2) * &self.p * &self.r;
        let c = &self.p * &self.p - &self.q * &self.q * &self.d;
        let g = a.gcd(&b).gcd(&c);
        BinaryQuadraticForm {
            a: a / &g,
            b: b / &g,
            c: c / &g,
        }
    }

    /// Discriminant of the order of CM.
    pub fn discriminant(&self) -> BigInt {
        self.defining_form().discriminant()
    }

    /// `(re, im)` as `(p / r, q sqrt|d| / r)` in `f64`.
    pub fn approx(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let re = self.p.to_f64().unwrap_or(f64::NAN) / r;
        let im =
            self.q.to_f64().unwrap_or(f64::NAN) * (-self.d.to_f64().unwrap_or(f64::NAN)).sqrt() / r;
        (re, im)
    }
}

impl fmt::Display for CMPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = if self.q.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.q, self.d)
        };
        let num = if self.p.is_zero() {
            root
        } else {
            format!("{} + {}", self.p, root)
        };
        if self.r.is_one() {
            write!(f, "{num}")
        } else if self.p.is_zero() {
            write!(f, "{num}/{}", self.r)
        } else {
            write!(f, "({num})/{}", self.r)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmPoints {
    /// Reduced form the points are read from.
    pub form: BinaryQuadraticForm,
    pub tau: CMPoint,
    pub tau_prime: CMPoint,
    pub e_isomorphic_eprime: bool,
}

/// `tau = (-b + sqrt d) / 2a` and `tau' = (b + sqrt d) / 2` for the reduced form of `Q`.
pub fn cm_points(q: &BinaryQuadraticForm) -> Result<CmPoints, K3Error> {
    if !q.is_primitive() {
        return Err(K3Error::Imprimitive(q.clone()));
    }
    let f = reduce(q).form;
    let d = f.discriminant();
    let tau = CMPoint::new(-&f.b, BigInt::one(), BigInt::from(2) * &f.a, d.clone())?;
    let tau_prime = CMPoint::new(f.b.clone(), BigInt::one(), BigInt::from(2), d.clone())?;
    // principal class <=> E and E' isomorphic
    let cg = class_group(&d)?;
    let e_iso = cg.principal == f;
    Ok(CmPoints {
        form: f,
        tau,
        tau_prime,
        e_isomorphic_eprime: e_iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::from_i64(a, b, c).unwrap()
    }

    #[test]
    fn examples() {
        let c = cm_points(&form(1, 0, 3)).unwrap();
        assert_eq!(c.tau.to_string(), "sqrt(-12)/2");
        assert_eq!(c.tau, c.tau_prime);
        assert!(c.e_isomorphic_eprime);
        assert_eq!(c.tau.discriminant(), BigInt::from(-12));

        let c = cm_points(&form(2, 1, 3)).unwrap();
        assert_eq!(c.tau.to_string(), "(-1 + sqrt(-23))/4");
        assert_eq!(c.tau_prime.to_string(), "(1 + sqrt(-23))/2");
        assert!(!c.e_isomorphic_eprime);
        assert_eq!(c.tau.defining_form(), form(2, 1, 3));
        assert_eq!(c.tau_prime.defining_form(), form(1, -1, 6));

        let c = cm_points(&form(1, 1, 1)).unwrap();
        assert_eq!(c.tau.to_string(), "(-1 + sqrt(-3))/2");
        assert!(c.e_isomorphic_eprime);
        let (re, im) = c.tau.approx();
        assert!((re + 0.5).abs() < 1e-15 && (im - 0.75f64.sqrt()).abs() < 1e-15);

        assert!(matches!(
            cm_points(&form(2, 0, 2)),
            Err(K3Error::Imprimitive(_))
        ));
    }

    #[test]
    fn non_reduced_input_is_reduced() {
        let c = cm_points(&form(3, 1, 2)).unwrap();
        assert_eq!(c.form, form(2, -1, 3));
    }
}
