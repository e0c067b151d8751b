//! Rational functions over `Q(sqrt m)` in lowest terms.

use super::field::Fe;
use super::poly::Poly;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g), den.div_exact(&g));
        let l = d.lead();
        if !l.is_one() {
            let inv = l.inv();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Self { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(x: Fe) -> Self {
        Self::from_poly(Poly::constant(x))
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        if self.is_polynomial() {
            Some(self.num.scale(&self.den.lead().inv()))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Self {
        let p = Self::new(
            self.num.pow(e.unsigned_abs()),
            self.den.pow(e.unsigned_abs()),
        );
        if e < 0 {
            p.inv()
        } else {
            p
        }
    }

    pub fn scale(&self, k: &Fe) -> Self {
        Self::new(self.num.scale(k), self.den.clone())
    }

    /// Order of vanishing at `t = r` (negative at poles); `None` for zero.
    pub fn valuation_at(&self, r: &Fe) -> Option<i64> {
        let vn = self.num.valuation_at(r)? as i64;
        let vd = self.den.valuation_at(r).unwrap_or(0) as i64;
        Some(vn - vd)
    }

    /// Order along the irreducible polynomial `p`; `None` for zero.
    pub fn valuation_by(&self, p: &Poly) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(self.num.valuation_by(p).0 as i64 - self.den.valuation_by(p).0 as i64)
    }

    /// Order at infinity, `deg den - deg num`.
    pub fn valuation_at_infinity(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(self.den.degree().unwrap_or(0) as i64 - dn)
    }

    /// Value at `t = r`; `None` at a pole.
    pub fn eval(&self, r: &Fe) -> Option<Fe> {
        let d = self.den.eval(r);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(r) / &d)
    }

    /// `f(p / q)` as a rational function.
    pub fn substitute(&self, phi: &RationalFunction) -> RationalFunction {
        let sub = |p: &Poly| -> RationalFunction {
            p.coeffs()
                .iter()
                .rev()
                .fold(RationalFunction::zero(), |acc, c| {
                    &(&acc * phi) + &RationalFunction::constant(c.clone())
                })
        };
        &sub(&self.num) / &sub(&self.den)
    }

    /// `s^(-k) f(1/s)`-style chart change: `f(1/s) * s^k`.
    pub fn at_inverse(&self, k: i64) -> RationalFunction {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        // f(1/s) = s^(dd - dn) * rev(num) / rev(den)
        let e = dd as i64 - dn as i64 + k;
        let n = self.num.reversed(dn);
        let d = self.den.reversed(dd);
        let s = Poly::t();
        if e >= 0 {
            RationalFunction::new(&n * &s.pow(e as u32), d)
        } else {
            RationalFunction::new(n, &d * &s.pow((-e) as u32))
        }
    }

    pub fn field(&self) -> Option<i64> {
        self.num.field().or_else(|| self.den.field())
    }

    pub fn format_in(&self, var: &str) -> String {
        if self.den.is_constant() {
            return self.num.format_in(var);
        }
        let wrap = |p: &Poly| {
            let s = p.format_in(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in("t"))
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction::new(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        assert!(!o.is_zero(), "division by the zero rational function");
        RationalFunction::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

macro_rules! owned_rf_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, o: RationalFunction) -> RationalFunction {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, o: &RationalFunction) -> RationalFunction {
                (&self).$f(o)
            }
        }
    };
}

owned_rf_ops!(Add, add);
owned_rf_ops!(Sub, sub);
owned_rf_ops!(Mul, mul);
owned_rf_ops!(Div, div);

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}
