//! Dense univariate polynomials over `Q(sqrt m)`.

use super::field::Fe;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients in increasing degree, trailing zeros stripped; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    c: Vec<Fe>,
}

impl Poly {
    pub fn new(mut c: Vec<Fe>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Fe::one())
    }

    pub fn constant(x: Fe) -> Self {
        Self::new(vec![x])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::new(vec![Fe::zero(), Fe::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| Fe::from_int(k)).collect())
    }

    /// `t - r`.
    pub fn linear(r: &Fe) -> Self {
        Self::new(vec![-r, Fe::one()])
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).cloned().unwrap_or_else(Fe::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.c.last().cloned().unwrap_or_else(Fe::zero)
    }

    /// The field tag of the first irrational coefficient, if any.
    pub fn field(&self) -> Option<i64> {
        self.c.iter().find_map(Fe::field)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, k: &Fe) -> Self {
        Self::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lead().inv())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Fe::zero(); k];
        c.extend(self.c.iter().cloned());
        Self { c }
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        self.c
            .iter()
            .rev()
            .fold(Fe::zero(), |acc, a| &(&acc * x) + a)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * &Fe::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        let inv = d.lead().inv();
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Fe::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] * &inv;
            if f.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&f * dj);
            }
            q[i] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, p: &Self) -> bool {
        p.div_rem(self).1.is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(v, p^(-v) f)` where `v` is the exponent of `p` in `f`; `f` nonzero.
    pub fn valuation_by(&self, p: &Self) -> (u32, Self) {
        assert!(!self.is_zero(), "valuation of the zero polynomial");
        let mut f = self.clone();
        let mut v = 0;
        loop {
            let (q, r) = f.div_rem(p);
            if !r.is_zero() {
                return (v, f);
            }
            f = q;
            v += 1;
        }
    }

    /// Order of vanishing at `t = r`; `None` for the zero polynomial.
    pub fn valuation_at(&self, r: &Fe) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(self.valuation_by(&Self::linear(r)).0)
    }

    /// `f_1, f_2, ...` squarefree and pairwise coprime with `monic(self) = prod f_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        // Yun's algorithm
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_exact(&a);
        let mut c = fp.div_exact(&a) - b.derivative();
        while !b.is_constant() {
            let d = b.gcd(&c);
            out.push(d.clone());
            b = b.div_exact(&d);
            c = c.div_exact(&d) - b.derivative();
        }
        out
    }

    pub fn squarefree_part(&self) -> Self {
        self.squarefree_decomposition()
            .iter()
            .fold(Self::one(), |acc, f| &acc * f)
    }

    /// `s^n f(1/s)` for `n >= deg f`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c = vec![Fe::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            assert!(i <= n, "reversal degree below polynomial degree");
            c[n - i] = a.clone();
        }
        Self::new(c)
    }

    /// Tags rational coefficients with the field `m`.
    pub fn with_field(self, m: i64) -> Self {
        Self {
            c: self.c.into_iter().map(|x| x.with_field(m)).collect(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(Fe::is_rational)
    }

    pub fn format_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = a.to_string();
            let needs_paren = !a.is_rational() && !a.u.is_zero();
            let term = if mono.is_empty() {
                if needs_paren {
                    format!("({coef})")
                } else {
                    coef
                }
            } else if a.is_one() {
                mono
            } else if (-a).is_one() {
                format!("-{mono}")
            } else if needs_paren {
                format!("({coef})*{mono}")
            } else {
                format!("{coef}*{mono}")
            };
            parts.push(term);
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in("t"))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Fe::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! owned_poly_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly {
                (&self).$f(o)
            }
        }
    };
}

owned_poly_ops!(Add, add);
owned_poly_ops!(Sub, sub);
owned_poly_ops!(Mul, mul);
