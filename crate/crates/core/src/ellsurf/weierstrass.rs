//! Weierstrass models `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `K[t]`.

use super::field::Fe;
use super::parse::parse_fe;
use super::poly::Poly;
use super::ratfun::RationalFunction;
use super::EllsurfError;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Weights of `a1, a2, a3, a4, a6`.
pub const WEIGHTS: [u32; 5] = [1, 2, 3, 4, 6];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    /// `[a1, a2, a3, a4, a6]`.
    pub a: [Poly; 5],
    /// Base field `Q(sqrt m)`; `m = 1` is `Q`.
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: Poly,
    pub b4: Poly,
    pub b6: Poly,
    pub b8: Poly,
    pub c4: Poly,
    pub c6: Poly,
    pub disc: Poly,
}

fn k(n: i64) -> Fe {
    Fe::from_int(n)
}

fn fe_rat(n: i64, d: i64) -> Fe {
    Fe::from_rat(super::field::rat(n, d))
}

impl Invariants {
    fn of(a: &[Poly; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a;
        let b2 = &(a1 * a1) + &a2.scale(&k(4));
        let b4 = &a4.scale(&k(2)) + &(a1 * a3);
        let b6 = &(a3 * a3) + &a6.scale(&k(4));
        let b8 = &(&(&(&(a1 * a1) * a6) + &(a2 * a6).scale(&k(4))) - &(&(a1 * a3) * a4))
            + &(&(a2 * &(a3 * a3)) - &(a4 * a4));
        let c4 = &(&b2 * &b2) - &b4.scale(&k(24));
        let c6 = &(&(&b2 * &b4).scale(&k(36)) - &b2.pow(3)) - &b6.scale(&k(216));
        let disc = &(&(&(&b2 * &b2) * &b8).scale(&k(-1)) - &b4.pow(3).scale(&k(8)))
            + &(&(&b6 * &b6).scale(&k(-27)) + &(&(&b2 * &b4) * &b6).scale(&k(9)));
        Self {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
        }
    }

    /// `1728 disc == c4^3 - c6^2`.
    pub fn identity_holds(&self) -> bool {
        self.disc.scale(&k(1728)) == &self.c4.pow(3) - &(&self.c6 * &self.c6)
    }
}

impl WeierstrassModel {
    pub fn new(a: [Poly; 5], m: i64) -> Result<Self, EllsurfError> {
        for p in &a {
            if let Some(f) = p.field() {
                if f != m {
                    return Err(EllsurfError::FieldMismatch(f, m));
                }
            }
        }
        let a = a.map(|p| p.with_field(m));
        let w = Self { a, m };
        let inv = w.invariants_unchecked();
        if inv.disc.is_zero() {
            return Err(EllsurfError::Singular);
        }
        if !inv.identity_holds() {
            return Err(EllsurfError::Internal("1728 disc != c4^3 - c6^2".into()));
        }
        Ok(w)
    }

    /// `y^2 = x^3 + a4 x + a6`.
    pub fn short(a4: Poly, a6: Poly, m: i64) -> Result<Self, EllsurfError> {
        Self::new([Poly::zero(), Poly::zero(), Poly::zero(), a4, a6], m)
    }

    pub fn from_ints(a: [&[i64]; 5]) -> Result<Self, EllsurfError> {
        Self::new(a.map(Poly::from_ints), 1)
    }

    fn invariants_unchecked(&self) -> Invariants {
        Invariants::of(&self.a)
    }

    pub fn invariants(&self) -> Invariants {
        self.invariants_unchecked()
    }

    pub fn discriminant(&self) -> Poly {
        self.invariants().disc
    }

    pub fn is_short(&self) -> bool {
        self.a[0].is_zero() && self.a[1].is_zero() && self.a[2].is_zero()
    }

    /// Smallest `k` with `deg a_i <= i k`; the model is then a section of `O(k)` weights.
    pub fn weight(&self) -> u32 {
        self.a
            .iter()
            .zip(WEIGHTS)
            .filter_map(|(p, w)| p.degree().map(|d| (d as u32).div_ceil(w)))
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// Model in the chart `s = 1/t`: `a_i(s) = s^(i k) a_i(1/s)` with `k = weight`.
    pub fn at_infinity(&self) -> Self {
        let kk = self.weight() as usize;
        let a = std::array::from_fn(|i| self.a[i].reversed(WEIGHTS[i] as usize * kk));
        Self { a, m: self.m }
    }

    /// `y^2 = x^3 - c4/48 x - c6/864`, reached by `x' = x + b2/12`, `y' = y + (a1 x + a3)/2`.
    pub fn short_form(&self) -> Self {
        let inv = self.invariants();
        Self {
            a: [
                Poly::zero(),
                Poly::zero(),
                Poly::zero(),
                inv.c4.scale(&fe_rat(-1, 48)),
                inv.c6.scale(&fe_rat(-1, 864)),
            ],
            m: self.m,
        }
    }

    /// Image of a point of `self` on `short_form()`.
    pub fn to_short_point(
        &self,
        x: &RationalFunction,
        y: &RationalFunction,
    ) -> (RationalFunction, RationalFunction) {
        let rf = |p: &Poly| RationalFunction::from_poly(p.clone());
        let b2 = self.invariants().b2;
        let xs = x + &rf(&b2.scale(&fe_rat(1, 12)));
        let lin = &(&rf(&self.a[0]) * x) + &rf(&self.a[2]);
        let ys = y + &lin.scale(&fe_rat(1, 2));
        (xs, ys)
    }

    /// Left side minus right side of the equation at `(x, y)`.
    pub fn residual(&self, x: &RationalFunction, y: &RationalFunction) -> RationalFunction {
        let rf = |p: &Poly| RationalFunction::from_poly(p.clone());
        let [a1, a2, a3, a4, a6] = &self.a;
        let lhs = &(&(y * y) + &(&(&rf(a1) * x) * y)) + &(&rf(a3) * y);
        let x2 = x * x;
        let rhs = &(&(&(&x2 * x) + &(&rf(a2) * &x2)) + &(&rf(a4) * x)) + &rf(a6);
        &lhs - &rhs
    }

    pub fn contains(&self, x: &RationalFunction, y: &RationalFunction) -> bool {
        self.residual(x, y).is_zero()
    }

    /// Pullback along `t = phi(s)`, with `a_i(N/D)` multiplied by `D^(i k)` and common
    /// factors `u` with `u^i | a_i` removed.
    pub fn base_change(&self, phi: &RationalFunction) -> Result<Self, EllsurfError> {
        if phi.is_constant() {
            return Err(EllsurfError::ConstantSubstitution);
        }
        let a = self.base_change_raw(phi);
        let m = match phi.field() {
            Some(f) if self.m != 1 && f != self.m => {
                return Err(EllsurfError::FieldMismatch(f, self.m))
            }
            Some(f) => f,
            None => self.m,
        };
        Ok(Self::new(a, m)?.strip_common_factors())
    }

    /// Point transported along `base_change(phi)`.
    pub fn base_change_point(
        &self,
        phi: &RationalFunction,
        x: &RationalFunction,
        y: &RationalFunction,
    ) -> Result<(RationalFunction, RationalFunction), EllsurfError> {
        let target = self.base_change(phi)?;
        let kk = self.weight() as i32;
        let d = RationalFunction::from_poly(phi.den().clone());
        let mut xs = &x.substitute(phi) * &d.pow(2 * kk);
        let mut ys = &y.substitute(phi) * &d.pow(3 * kk);
        // undo the stripped scaling
        let u = RationalFunction::from_poly(strip_factor(&self.base_change_raw(phi)));
        xs = &xs / &u.pow(2);
        ys = &ys / &u.pow(3);
        debug_assert!(target.contains(&xs, &ys));
        Ok((xs, ys))
    }

    fn base_change_raw(&self, phi: &RationalFunction) -> [Poly; 5] {
        let kk = self.weight();
        let (n, d) = (phi.num(), phi.den());
        std::array::from_fn(|i| {
            let e = (WEIGHTS[i] * kk) as usize;
            let mut acc = Poly::zero();
            for (j, c) in self.a[i].coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = &acc + &(&n.pow(j as u32) * &d.pow((e - j) as u32)).scale(c);
                }
            }
            acc
        })
    }

    /// Divides out the largest monic `u` with `u^i | a_i` for every `i`.
    pub fn strip_common_factors(&self) -> Self {
        let u = strip_factor(&self.a);
        if u.is_constant() {
            return self.clone();
        }
        let a = std::array::from_fn(|i| {
            if self.a[i].is_zero() {
                Poly::zero()
            } else {
                self.a[i].div_exact(&u.pow(WEIGHTS[i]))
            }
        });
        Self { a, m: self.m }
    }

    /// `y^2 = x^3 + gamma^2 a4 x + gamma^3 a6`; requires a short model.
    pub fn quadratic_twist(&self, gamma: &Poly) -> Result<Self, EllsurfError> {
        if gamma.is_zero() {
            return Err(EllsurfError::ZeroTwist);
        }
        if !self.is_short() {
            return Err(EllsurfError::NotShort);
        }
        let m = match gamma.field() {
            Some(f) if self.m != 1 && f != self.m => {
                return Err(EllsurfError::FieldMismatch(f, self.m))
            }
            Some(f) => f,
            None => self.m,
        };
        Self::short(&self.a[3] * &gamma.pow(2), &self.a[4] * &gamma.pow(3), m)
    }

    /// A point `(u, sqrt(gamma) v)` of `self` becomes `(gamma u, gamma^2 v)` on the twist.
    pub fn twist_point(
        gamma: &Poly,
        u: &RationalFunction,
        v: &RationalFunction,
    ) -> (RationalFunction, RationalFunction) {
        let g = RationalFunction::from_poly(gamma.clone());
        (&g * u, &g.pow(2) * v)
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            field: FieldSpec { m: self.m },
            a: self
                .a
                .iter()
                .map(|p| p.coeffs().iter().map(Coefficient::from_fe).collect())
                .collect(),
        }
    }

    pub fn from_file(f: &ModelFile) -> Result<Self, EllsurfError> {
        if f.a.len() != 5 {
            return Err(EllsurfError::Input(format!(
                "expected 5 coefficient lists, found {}",
                f.a.len()
            )));
        }
        let mut polys = Vec::with_capacity(5);
        for list in &f.a {
            let c = list
                .iter()
                .map(|c| c.to_fe())
                .collect::<Result<Vec<_>, _>>()?;
            polys.push(Poly::new(c));
        }
        Self::new(polys.try_into().expect("five"), f.field.m)
    }
}

/// Largest monic `u` with `u^i | a_i` for all nonzero `a_i`.
fn strip_factor(a: &[Poly; 5]) -> Poly {
    let mut total = Poly::one();
    let mut cur: Vec<Poly> = a.to_vec();
    loop {
        let g = cur
            .iter()
            .filter(|p| !p.is_zero())
            .fold(Poly::zero(), |acc, p| acc.gcd(p));
        if g.is_constant() {
            return total;
        }
        let r = g.squarefree_part();
        // irreducible factors p of r with p^w | a for each coefficient
        let mut u = r.clone();
        for (p, w) in cur.iter().zip(WEIGHTS) {
            if p.is_zero() {
                continue;
            }
            let low = p.gcd(&r.pow(w - 1));
            let s = r.gcd(&p.div_exact(&low));
            u = u.gcd(&s);
        }
        if u.is_constant() {
            return total;
        }
        for (p, w) in cur.iter_mut().zip(WEIGHTS) {
            if !p.is_zero() {
                *p = p.div_exact(&u.pow(w));
            }
        }
        total = &total * &u;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub m: i64,
}

/// JSON coefficient: an integer, or a string such as `"-3/4"` or `"2/9*sqrt(-3)"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    pub fn from_fe(x: &Fe) -> Self {
        if x.is_rational() && x.u.is_integer() {
            if let Some(i) = x.u.to_integer().to_i64() {
                return Coefficient::Int(i);
            }
        }
        Coefficient::Text(x.to_string())
    }

    pub fn to_fe(&self) -> Result<Fe, EllsurfError> {
        match self {
            Coefficient::Int(i) => Ok(Fe::from_bigint(BigInt::from(*i))),
            Coefficient::Text(s) => parse_fe(s).map_err(|e| EllsurfError::Input(e.to_string())),
        }
    }
}

/// `{"field": {"m": ...}, "a": [[a1 coefficients], ..., [a6 coefficients]]}`, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub field: FieldSpec,
    pub a: Vec<Vec<Coefficient>>,
}

/// Rational elliptic surface with fibres I6, I3, I2, I1: `y^2 + (t-2)xy - t(t-1)y = x^3 - t x^2`.
pub fn example_rational_model() -> WeierstrassModel {
    WeierstrassModel::from_ints([&[-2, 1], &[0, -1], &[0, 1, -1], &[], &[]]).expect("valid")
}

/// `y^2 = x^3 - 3 A t^4 x + t^5 (t^2 - 2 B t + 1)`.
pub fn inose_model(a: &Fe, b: &Fe, m: i64) -> Result<WeierstrassModel, EllsurfError> {
    let a4 = Poly::t().pow(4).scale(&(a * &k(-3)));
    let a6 = &Poly::t().pow(5) * &Poly::new(vec![Fe::one(), b * &k(-2), Fe::one()]);
    WeierstrassModel::short(a4, a6, m)
}

/// `y^2 = x^3 + t^2 x^2 + t^3 (t - a)^2 x`.
pub fn family_model(a: &Fe, m: i64) -> Result<WeierstrassModel, EllsurfError> {
    let t = Poly::t();
    let lin = Poly::linear(a);
    WeierstrassModel::new(
        [
            Poly::zero(),
            t.pow(2),
            Poly::zero(),
            &t.pow(3) * &lin.pow(2),
            Poly::zero(),
        ],
        m,
    )
}
