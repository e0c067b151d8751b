//! Positive-definite binary quadratic forms.
//!
//! A form is stored as the classical triple `(a, b, c)` standing for
//! `a x^2 + b x y + c y^2`; its even Gram matrix is `((2a, b), (b, 2c))`.
//! Equivalence is proper (`SL_2(Z)`) equivalence throughout.

mod automorphism;
mod class_group;

pub use automorphism::{automorphism_group, AutName, AutomorphismGroup};
pub use class_group::{
    class_group, class_number, class_number_one_scan, genus_info, is_two_torsion_discriminant,
    kronecker_at_2, reduced_forms, two_torsion_scan, ClassGroup, GenusInfo,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BqfError {
    #[error("form ({0}, {1}, {2}) is not positive definite")]
    NotPositiveDefinite(BigInt, BigInt, BigInt),
    #[error("discriminants differ: {0} vs {1}")]
    DiscriminantMismatch(BigInt, BigInt),
    #[error("form {0} is not primitive")]
    Imprimitive(BinaryQuadraticForm),
    #[error("{0} is not a negative discriminant (need d < 0 and d = 0, 1 mod 4)")]
    InvalidDiscriminant(BigInt),
    #[error("form {0} is not reduced")]
    NotReduced(BinaryQuadraticForm),
}

/// An integral 2x2 matrix, row major.
pub type Mat2 = [[BigInt; 2]; 2];

pub fn mat2_identity() -> Mat2 {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ]
}

pub fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_transpose(x: &Mat2) -> Mat2 {
    [
        [x[0][0].clone(), x[1][0].clone()],
        [x[0][1].clone(), x[1][1].clone()],
    ]
}

pub fn mat2_det(x: &Mat2) -> BigInt {
    &x[0][0] * &x[1][1] - &x[0][1] * &x[1][0]
}

/// Positive-definite binary quadratic form `a x^2 + b x y + c y^2`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    #[serde(with = "crate::intser")]
    pub a: BigInt,
    #[serde(with = "crate::intser")]
    pub b: BigInt,
    #[serde(with = "crate::intser")]
    pub c: BigInt,
}

impl fmt::Debug for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl BinaryQuadraticForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self, BqfError> {
        let d = &b * &b - BigInt::from(4) * &a * &c;
        if !a.is_positive() || !d.is_negative() {
            return Err(BqfError::NotPositiveDefinite(a, b, c));
        }
        Ok(Self { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self, BqfError> {
        Self::new(a.into(), b.into(), c.into())
    }

    /// Builds a form from its even Gram matrix `((2a, b), (b, 2c))`.
    pub fn from_gram(g: &Mat2) -> Result<Self, BqfError> {
        let two = BigInt::from(2);
        if g[0][1] != g[1][0] || g[0][0].is_odd() || g[1][1].is_odd() {
            return Err(BqfError::NotPositiveDefinite(
                g[0][0].clone(),
                g[0][1].clone(),
                g[1][1].clone(),
            ));
        }
        Self::new(&g[0][0] / &two, g[0][1].clone(), &g[1][1] / &two)
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: &BigInt) -> Result<Self, BqfError> {
        validate_discriminant(d)?;
        let four = BigInt::from(4);
        if d.mod_floor(&four).is_zero() {
            Self::new(BigInt::one(), BigInt::zero(), -d / &four)
        } else {
            Self::new(BigInt::one(), BigInt::one(), (BigInt::one() - d) / &four)
        }
    }

    /// `b^2 - 4ac`, always negative.
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// The even Gram matrix `((2a, b), (b, 2c))`.
    pub fn gram(&self) -> Mat2 {
        let two = BigInt::from(2);
        [
            [&two * &self.a, self.b.clone()],
            [self.b.clone(), &two * &self.c],
        ]
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `-a < b <= a <= c`, and `b >= 0` when `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        -a < *b && b <= a && a <= c && !(a == c && b.is_negative())
    }

    /// The inverse class `(a, -b, c)`, reduced.
    pub fn inverse(&self) -> Self {
        reduce(&Self {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
        })
        .form
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self {
            a: &self.a * k,
            b: &self.b * k,
            c: &self.c * k,
        }
    }

    /// Divides out the content, returning the content and the primitive part.
    pub fn primitive_part(&self) -> (BigInt, Self) {
        let g = self.content();
        (
            g.clone(),
            Self {
                a: &self.a / &g,
                b: &self.b / &g,
                c: &self.c / &g,
            },
        )
    }

    /// Applies the substitution `(x, y) -> M (x, y)`, i.e. Gram `G -> M^T G M`.
    pub fn transform(&self, m: &Mat2) -> Self {
        let (p, q, r, s) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
        let a = self.eval(p, r);
        let c = self.eval(q, s);
        let b = BigInt::from(2) * &self.a * p * q
            + &self.b * (p * s + q * r)
            + BigInt::from(2) * &self.c * r * s;
        Self { a, b, c }
    }

    pub fn is_principal(&self) -> bool {
        let r = reduce(self).form;
        r.a.is_one()
    }
}

pub(crate) fn validate_discriminant(d: &BigInt) -> Result<(), BqfError> {
    let m = d.mod_floor(&BigInt::from(4));
    if !d.is_negative() || !(m.is_zero() || m.is_one()) {
        return Err(BqfError::InvalidDiscriminant(d.clone()));
    }
    Ok(())
}

/// Result of [`reduce`]: the reduced form and an `SL_2(Z)` matrix `M` with
/// `M^T G_Q M = G_R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub form: BinaryQuadraticForm,
    pub transform: Mat2,
}

/// Reduces a positive-definite form, returning the reduced representative and the
/// transporting matrix.
pub fn reduce(q: &BinaryQuadraticForm) -> Reduction {
    let (mut a, mut b, mut c) = (q.a.clone(), q.b.clone(), q.c.clone());
    let mut m = mat2_identity();
    let swap: Mat2 = [
        [BigInt::zero(), -BigInt::one()],
        [BigInt::one(), BigInt::zero()],
    ];
    loop {
        if !(-&a < b && b <= a) {
            let two_a = BigInt::from(2) * &a;
            let k = (&a - &b).div_floor(&two_a);
            c = &a * &k * &k + &b * &k + &c;
            b += &two_a * &k;
            let t: Mat2 = [[BigInt::one(), k], [BigInt::zero(), BigInt::one()]];
            m = mat2_mul(&m, &t);
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            m = mat2_mul(&m, &swap);
            continue;
        }
        if a == c && b.is_negative() {
            b = -b;
            m = mat2_mul(&m, &swap);
        }
        break;
    }
    Reduction {
        form: BinaryQuadraticForm { a, b, c },
        transform: m,
    }
}

fn ext_gcd(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = x.extended_gcd(y);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Gauss composition of two primitive forms of equal discriminant; the result is
/// reduced.
pub fn compose(
    q1: &BinaryQuadraticForm,
    q2: &BinaryQuadraticForm,
) -> Result<BinaryQuadraticForm, BqfError> {
    let disc = q1.discriminant();
    let d2 = q2.discriminant();
    if disc != d2 {
        return Err(BqfError::DiscriminantMismatch(disc, d2));
    }
    for q in [q1, q2] {
        if !q.is_primitive() {
            return Err(BqfError::Imprimitive(q.clone()));
        }
    }
    let (f1, f2) = if q1.a > q2.a { (q2, q1) } else { (q1, q2) };
    let (a1, b1) = (&f1.a, &f1.b);
    let (a2, b2, c2) = (&f2.a, &f2.b, &f2.c);
    let s: BigInt = (b1 + b2) / 2;
    let n = b2 - &s;

    let (y1, d) = if a2.is_multiple_of(a1) {
        (BigInt::zero(), a1.clone())
    } else {
        let (g, u, _v) = ext_gcd(a2, a1);
        (u, g)
    };
    let (x2, y2, d1) = if s.is_multiple_of(&d) {
        (BigInt::zero(), -BigInt::one(), d.clone())
    } else {
        let (g, u, v) = ext_gcd(&s, &d);
        (u, -v, g)
    };
    let v1 = a1 / &d1;
    let v2 = a2 / &d1;
    let r = (&y1 * &y2 * &n - &x2 * c2).mod_floor(&v1);
    let b3 = b2 + BigInt::from(2) * &v2 * &r;
    let a3 = &v1 * &v2;
    let c3 = (&b3 * &b3 - &disc) / (BigInt::from(4) * &a3);
    let composite = BinaryQuadraticForm {
        a: a3,
        b: b3,
        c: c3,
    };
    debug_assert_eq!(composite.discriminant(), disc);
    Ok(reduce(&composite).form)
}

/// `q^n` in the class group (`n >= 0`), reduced.
pub fn power(q: &BinaryQuadraticForm, n: u64) -> Result<BinaryQuadraticForm, BqfError> {
    let mut result = BinaryQuadraticForm::principal(&q.discriminant())?;
    let mut base = reduce(q).form;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = compose(&result, &base)?;
        }
        base = compose(&base, &base)?;
        e >>= 1;
    }
    Ok(result)
}

/// `b^2 - 4ac`.
pub fn discriminant(q: &BinaryQuadraticForm) -> BigInt {
    q.discriminant()
}
