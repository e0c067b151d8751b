//! Exact arithmetic in `Q` and in a quadratic field `Q(sqrt m)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `u + v sqrt(m)` with `m` squarefree; `m = 1` stands for `Q` and forces `v = 0`.
///
/// Elements with `v = 0` are compatible with every field.
#[derive(Clone, Debug)]
pub struct Fe {
    pub u: BigRational,
    pub v: BigRational,
    pub m: i64,
}

impl PartialEq for Fe {
    fn eq(&self, other: &Self) -> bool {
        self.u == other.u && self.v == other.v && (self.v.is_zero() || self.m == other.m)
    }
}

impl Eq for Fe {}

/// Squarefree part `m` and square factor `f` with `n = f^2 m`.
pub fn squarefree_decompose(n: i64) -> (i64, i64) {
    assert!(n != 0, "squarefree part of zero");
    let sign = n.signum();
    let mut rest = n.unsigned_abs();
    let mut m = 1u64;
    let mut f = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += 1;
    }
    m *= rest;
    (sign * m as i64, f as i64)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Square root of a nonnegative rational when it is a perfect square.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl Fe {
    pub fn new(u: BigRational, v: BigRational, m: i64) -> Self {
        assert!(m != 0, "m must be nonzero");
        if m == 1 {
            assert!(v.is_zero(), "Q has no sqrt(1) component");
        }
        Self { u, v, m }
    }

    pub fn from_rat(u: BigRational) -> Self {
        Self {
            u,
            v: BigRational::zero(),
            m: 1,
        }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rat(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn from_bigint(k: BigInt) -> Self {
        Self::from_rat(BigRational::from_integer(k))
    }

    /// `sqrt(n)` for any nonzero integer `n`, written over `Q(sqrt m)` with `m` squarefree.
    pub fn sqrt_of_int(n: i64) -> Self {
        let (m, f) = squarefree_decompose(n);
        if m == 1 {
            Self::from_int(f)
        } else {
            Self::new(BigRational::zero(), BigRational::from_integer(f.into()), m)
        }
    }

    /// The field tag, or `None` when the element is rational.
    pub fn field(&self) -> Option<i64> {
        if self.v.is_zero() {
            None
        } else {
            Some(self.m)
        }
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn with_field(mut self, m: i64) -> Self {
        if self.v.is_zero() {
            self.m = m;
        }
        self
    }

    fn join(a: &Fe, b: &Fe) -> i64 {
        match (a.field(), b.field()) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixing Q(sqrt {x}) and Q(sqrt {y})");
                x
            }
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => {
                if a.m != 1 {
                    a.m
                } else {
                    b.m
                }
            }
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            u: self.u.clone(),
            v: -&self.v,
            m: self.m,
        }
    }

    /// `u^2 - m v^2`.
    pub fn norm(&self) -> BigRational {
        &self.u * &self.u - BigRational::from_integer(self.m.into()) * &self.v * &self.v
    }

    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt {})", self.m);
        Self {
            u: &self.u / &n,
            v: -&self.v / &n,
            m: self.m,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Fe::one().with_field(self.m);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// A square root inside `Q(sqrt m)`, if one exists.
    pub fn sqrt_in(&self, m: i64) -> Option<Fe> {
        if self.is_zero() {
            return Some(Fe::zero());
        }
        let x = self.clone().with_field(m);
        if x.v.is_zero() {
            if let Some(r) = rational_sqrt(&x.u) {
                return Some(Fe::from_rat(r).with_field(m));
            }
            if m != 1 {
                let mr = BigRational::from_integer(m.into());
                if let Some(r) = rational_sqrt(&(&x.u / &mr)) {
                    return Some(Fe::new(BigRational::zero(), r, m));
                }
            }
            return None;
        }
        // (a + b sqrt m)^2 = x forces a^2 = (u +- sqrt(N(x))) / 2
        let s = rational_sqrt(&x.norm())?;
        let two = BigRational::from_integer(2.into());
        for cand in [(&x.u + &s) / &two, (&x.u - &s) / &two] {
            if let Some(a) = rational_sqrt(&cand) {
                if a.is_zero() {
                    continue;
                }
                let b = &x.v / (&two * &a);
                let r = Fe::new(a, b, m);
                if &r * &r == x {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn is_square_in(&self, m: i64) -> bool {
        self.sqrt_in(m).is_some()
    }

    /// Complex value under the embedding sending `sqrt m` to `sign * sqrt(m)` (principal root).
    pub fn embed(&self, sign: f64) -> (f64, f64) {
        let u = self.u.to_f64().unwrap_or(f64::NAN);
        let v = self.v.to_f64().unwrap_or(f64::NAN) * sign;
        if self.v.is_zero() {
            (u, 0.0)
        } else if self.m > 0 {
            (u + v * (self.m as f64).sqrt(), 0.0)
        } else {
            (u, v * ((-self.m) as f64).sqrt())
        }
    }

    /// Sort key for deterministic output.
    pub fn sort_key(&self) -> (BigRational, BigRational) {
        (self.u.clone(), self.v.clone())
    }
}

impl Zero for Fe {
    fn zero() -> Self {
        Fe::from_int(0)
    }

    fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
}

impl One for Fe {
    fn one() -> Self {
        Fe::from_int(1)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = crate::intser::rational::to_string;
        if self.v.is_zero() {
            return write!(f, "{}", r(&self.u));
        }
        let root = format!("sqrt({})", self.m);
        let vpart = if self.v.is_one() {
            root
        } else if (-&self.v).is_one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", r(&self.v))
        };
        if self.u.is_zero() {
            write!(f, "{vpart}")
        } else if vpart.starts_with('-') {
            write!(f, "{} - {}", r(&self.u), &vpart[1..])
        } else {
            write!(f, "{} + {}", r(&self.u), vpart)
        }
    }
}

impl<'a> Add<&'a Fe> for &'a Fe {
    type Output = Fe;
    fn add(self, o: &Fe) -> Fe {
        Fe {
            m: Fe::join(self, o),
            u: &self.u + &o.u,
            v: &self.v + &o.v,
        }
    }
}

impl<'a> Sub<&'a Fe> for &'a Fe {
    type Output = Fe;
    fn sub(self, o: &Fe) -> Fe {
        Fe {
            m: Fe::join(self, o),
            u: &self.u - &o.u,
            v: &self.v - &o.v,
        }
    }
}

impl<'a> Mul<&'a Fe> for &'a Fe {
    type Output = Fe;
    fn mul(self, o: &Fe) -> Fe {
        let m = Fe::join(self, o);
        let mr = BigRational::from_integer(m.into());
        Fe {
            u: &self.u * &o.u + mr * &self.v * &o.v,
            v: &self.u * &o.v + &self.v * &o.u,
            m,
        }
    }
}

impl<'a> Div<&'a Fe> for &'a Fe {
    type Output = Fe;
    fn div(self, o: &Fe) -> Fe {
        let m = Fe::join(self, o);
        self * &o.clone().with_field(m).inv()
    }
}

impl Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        Fe {
            u: -&self.u,
            v: -&self.v,
            m: self.m,
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Fe> for Fe {
            type Output = Fe;
            fn $f(self, o: Fe) -> Fe {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Fe> for Fe {
            type Output = Fe;
            fn $f(self, o: &Fe) -> Fe {
                (&self).$f(o)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        -&self
    }
}

/// Least common denominator of `u` and `v`.
pub fn denominator(x: &Fe) -> BigInt {
    x.u.denom().lcm(x.v.denom())
}
