//! Places, local minimal models, fibre classification and Shioda–Tate bookkeeping.

use super::field::Fe;
use super::kodaira::{KodairaFiber, KodairaType};
use super::poly::Poly;
use super::ratfun::RationalFunction;
use super::roots::roots_in_field;
use super::weierstrass::WeierstrassModel;
use super::EllsurfError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;

/// A place of `K(t)`: a monic irreducible polynomial or `t = infinity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn at(r: &Fe) -> Self {
        Place::Finite(Poly::linear(r))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    /// The rational point `t = r` of a linear finite place.
    pub fn root(&self) -> Option<Fe> {
        match self {
            Place::Finite(p) if p.degree() == Some(1) => Some(-p.coeff(0)),
            _ => None,
        }
    }

    /// Uniformizer and root in the local chart (`s = 1/t` at infinity).
    fn chart(&self) -> (Poly, Option<Fe>) {
        match self {
            Place::Finite(p) => (p.clone(), self.root()),
            Place::Infinity => (Poly::t(), Some(Fe::zero())),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Finite(p) => match self.root() {
                Some(r) => write!(f, "{r}"),
                None => write!(f, "{p} = 0"),
            },
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Short minimal model at one place, in the chart variable (`s = 1/t` at infinity).
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub place: Place,
    /// Minimal short model `y^2 = x^3 + a4 x + a6` in the chart.
    pub model: WeierstrassModel,
    /// `u = pi^u_exponent` in `(x, y) -> (u^2 x, u^3 y)`.
    pub u_exponent: u32,
    /// Weight used for the chart at infinity; 0 for finite places.
    pub chart_weight: u32,
    pub v4: Option<u32>,
    pub v6: Option<u32>,
    pub vd: u32,
}

fn val(p: &Poly, pi: &Poly) -> Option<u32> {
    (!p.is_zero()).then(|| p.valuation_by(pi).0)
}

impl LocalModel {
    fn uniformizer(&self) -> Poly {
        self.place.chart().0
    }

    /// Valuation at the place of a rational function in chart coordinates.
    pub fn valuation(&self, f: &RationalFunction) -> Option<i64> {
        f.valuation_by(&self.uniformizer())
    }

    pub fn kodaira_type(&self) -> Result<KodairaType, EllsurfError> {
        KodairaType::from_valuations(self.v4, self.v6, self.vd).ok_or_else(|| {
            EllsurfError::Internal(format!(
                "inconsistent valuations (v(c4), v(c6), v(disc)) = ({:?}, {:?}, {}) at {}",
                self.v4, self.v6, self.vd, self.place
            ))
        })
    }

    /// Split flag for multiplicative fibres at linear places: `-c6` a square in the residue
    /// field, i.e. the tangent cone at the node factors.
    pub fn split(&self) -> Option<bool> {
        if self.v4 != Some(0) || self.vd == 0 {
            return None;
        }
        let (_, r) = self.place.chart();
        let r = r?;
        // -c6 = 864 a6
        let minus_c6 = &self.model.a[4].eval(&r) * &Fe::from_int(864);
        Some(minus_c6.is_square_in(self.model.m))
    }

    /// Image of a point of the global model in the local minimal coordinates.
    pub fn transport(
        &self,
        w: &WeierstrassModel,
        x: &RationalFunction,
        y: &RationalFunction,
    ) -> (RationalFunction, RationalFunction) {
        let (chart, x, y) = match self.place {
            Place::Infinity => {
                let k = self.chart_weight as i64;
                (w.at_infinity(), x.at_inverse(2 * k), y.at_inverse(3 * k))
            }
            Place::Finite(_) => (w.clone(), x.clone(), y.clone()),
        };
        let (xs, ys) = chart.to_short_point(&x, &y);
        let u = RationalFunction::from_poly(self.uniformizer().pow(self.u_exponent));
        (&xs / &u.pow(2), &ys / &u.pow(3))
    }
}

/// Minimal short model at `p`, dividing out `u = pi^e` while `v(c4) >= 4` and `v(c6) >= 6`.
pub fn localize_minimal(w: &WeierstrassModel, p: &Place) -> LocalModel {
    let (chart, k) = match p {
        Place::Infinity => (w.at_infinity(), w.weight()),
        Place::Finite(_) => (w.clone(), 0),
    };
    let (pi, _) = p.chart();
    let short = chart.short_form();
    let (a4, a6) = (&short.a[3], &short.a[4]);
    let (v4, v6) = (val(a4, &pi), val(a6, &pi));
    let vd = val(&short.discriminant(), &pi).expect("nonzero discriminant");
    let e = v4
        .map_or(u32::MAX, |v| v / 4)
        .min(v6.map_or(u32::MAX, |v| v / 6));
    let e = e.min(vd / 12);
    let div = |q: &Poly, pw: u32| {
        if q.is_zero() {
            Poly::zero()
        } else {
            q.div_exact(&pi.pow(pw * e))
        }
    };
    let model = WeierstrassModel::short(div(a4, 4), div(a6, 6), w.m).expect("nonsingular");
    LocalModel {
        place: p.clone(),
        model,
        u_exponent: e,
        chart_weight: k,
        v4: v4.map(|v| v - 4 * e),
        v6: v6.map(|v| v - 6 * e),
        vd: vd - 12 * e,
    }
}

pub fn kodaira_type(w: &WeierstrassModel, p: &Place) -> Result<KodairaFiber, EllsurfError> {
    let loc = localize_minimal(w, p);
    Ok(KodairaFiber {
        kind: loc.kodaira_type()?,
        split: loc.split(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SurveyEntry {
    pub place: Place,
    pub fiber: KodairaFiber,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberSurvey {
    /// Singular fibres at linear places and infinity, finite places by `(u, v)` then infinity.
    pub fibers: Vec<SurveyEntry>,
    /// Product of the unsplit irreducible factors of the discriminant, each an `I1` bundle.
    #[serde(serialize_with = "ser_opt_poly")]
    pub residual: Option<Poly>,
    pub residual_i1: u32,
    pub euler_sum: u32,
    pub chi: u32,
}

fn ser_opt_poly<S: Serializer>(p: &Option<Poly>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&p.to_string()),
        None => s.serialize_none(),
    }
}

impl FiberSurvey {
    /// Every fibre, with the residual bundle expanded into `I1`s.
    pub fn all_fibers(&self) -> Vec<KodairaFiber> {
        let mut v: Vec<KodairaFiber> = self.fibers.iter().map(|e| e.fiber).collect();
        v.extend((0..self.residual_i1).map(|_| KodairaFiber::new(KodairaType::I(1))));
        v
    }

    /// Multiset of types as `(type, count)`, sorted.
    pub fn type_counts(&self) -> Vec<(KodairaType, usize)> {
        let mut v: Vec<KodairaType> = self.all_fibers().iter().map(|f| f.kind).collect();
        v.sort();
        let mut out: Vec<(KodairaType, usize)> = Vec::new();
        for t in v {
            match out.last_mut() {
                Some((u, c)) if *u == t => *c += 1,
                _ => out.push((t, 1)),
            }
        }
        out
    }

    pub fn fiber_at(&self, p: &Place) -> Option<KodairaFiber> {
        self.fibers.iter().find(|e| &e.place == p).map(|e| e.fiber)
    }
}

/// Linear places dividing the discriminant (including non-minimal ones) and the residual.
pub(crate) struct BadPlaces {
    pub linear: Vec<Fe>,
    pub residual: Poly,
}

pub(crate) fn bad_places(w: &WeierstrassModel) -> Result<BadPlaces, EllsurfError> {
    let inv = w.invariants();
    let parts = inv.disc.squarefree_decomposition();
    let mut linear = Vec::new();
    let mut residual = Poly::one();
    for (i, f) in parts.iter().enumerate() {
        let mult = i + 1;
        let roots = roots_in_field(f, w.m);
        let rest = roots
            .iter()
            .fold(f.clone(), |acc, r| acc.div_exact(&Poly::linear(r)));
        linear.extend(roots);
        if rest.is_constant() {
            continue;
        }
        if mult > 1 || !rest.gcd(&inv.c4).is_constant() {
            return Err(EllsurfError::NonLinearPlace(format!(
                "{rest} divides the discriminant to order {mult}; extend the base field so \
                 that this place splits into linear factors"
            )));
        }
        residual = &residual * &rest;
    }
    linear.sort_by_key(Fe::sort_key);
    Ok(BadPlaces { linear, residual })
}

/// Classifies all singular fibres and enforces `sum e(F_v) in {12, 24}`.
pub fn fiber_survey(w: &WeierstrassModel) -> Result<FiberSurvey, EllsurfError> {
    let bad = bad_places(w)?;
    let mut places: Vec<Place> = bad.linear.iter().map(Place::at).collect();
    places.push(Place::Infinity);
    let classified: Vec<(Place, KodairaFiber)> = places
        .into_par_iter()
        .map(|p| kodaira_type(w, &p).map(|f| (p, f)))
        .collect::<Result<_, _>>()?;
    let fibers: Vec<SurveyEntry> = classified
        .into_iter()
        .filter(|(_, f)| f.kind != KodairaType::I(0))
        .map(|(place, fiber)| SurveyEntry { place, fiber })
        .collect();
    let residual_i1 = bad.residual.degree().unwrap_or(0) as u32;
    let euler_sum = fibers.iter().map(|e| e.fiber.euler()).sum::<u32>() + residual_i1;
    if euler_sum != 12 && euler_sum != 24 {
        return Err(EllsurfError::EulerChecksum(euler_sum));
    }
    Ok(FiberSurvey {
        fibers,
        residual: (residual_i1 > 0).then_some(bad.residual),
        residual_i1,
        euler_sum,
        chi: euler_sum / 12,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiodaTate {
    pub rho: u32,
    #[serde(with = "crate::intser")]
    pub ns_disc: BigInt,
}

/// `rho = 2 + sum (m_v - 1) + rank` and `|disc NS| = prod |A_v| * disc MWL / |tors|^2`, with
/// the sign `(-1)^(rho - 1)` of a hyperbolic lattice.
pub fn shioda_tate(
    fibers: &[KodairaFiber],
    mw_rank: u32,
    torsion_order: u32,
    mwl_disc: &BigRational,
) -> Result<ShiodaTate, EllsurfError> {
    if torsion_order == 0 {
        return Err(EllsurfError::Input("torsion order must be positive".into()));
    }
    let rho = 2
        + fibers
            .iter()
            .map(KodairaFiber::rank_contribution)
            .sum::<u32>()
        + mw_rank;
    let prod: BigInt = fibers
        .iter()
        .map(|f| BigInt::from(f.group_order()))
        .product();
    let t = BigInt::from(torsion_order);
    let d = BigRational::from_integer(prod) * mwl_disc.abs() / BigRational::from_integer(&t * &t);
    if !d.is_integer() {
        return Err(EllsurfError::Input(format!(
            "non-integral discriminant {d}: inconsistent fibre/Mordell-Weil data"
        )));
    }
    let mut ns_disc = d.to_integer();
    if rho % 2 == 0 {
        ns_disc = -ns_disc;
    }
    Ok(ShiodaTate { rho, ns_disc })
}

fn p_exponents(factors: &[u32], p: u32) -> Vec<u32> {
    let mut e: Vec<u32> = factors
        .iter()
        .map(|&n| {
            let (mut n, mut k) = (n, 0);
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            k
        })
        .filter(|&k| k > 0)
        .collect();
    e.sort_unstable_by(|a, b| b.cmp(a));
    e
}

/// Whether the abelian group with invariant factors `torsion` embeds into the product of the
/// component groups. Torsion sections inject there, so `false` excludes the group; `true` does
/// not produce the sections.
pub fn torsion_embeds(fibers: &[KodairaFiber], torsion: &[u32]) -> bool {
    let target: Vec<u32> = fibers
        .iter()
        .flat_map(|f| f.kind.component_group())
        .collect();
    let mut primes: Vec<u32> = Vec::new();
    for &n in torsion {
        let (mut n, mut p) = (n, 2);
        while n > 1 {
            if n % p == 0 {
                primes.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
    }
    primes.sort_unstable();
    primes.dedup();
    primes.into_iter().all(|p| {
        let a = p_exponents(torsion, p);
        let b = p_exponents(&target, p);
        a.len() <= b.len() && a.iter().zip(&b).all(|(x, y)| x <= y)
    })
}
