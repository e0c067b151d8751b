//! The modular `j`-function at CM points and Hilbert class polynomials, in multiprecision.
//!
//! `j = E4^3 / Delta` with `E4 = 1 + 240 sum sigma_3(n) q^n` and `Delta = q prod (1 - q^n)^24`.

use super::cm::CMPoint;
use super::K3Error;
use crate::bqf::{class_group, class_number};
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_BITS: usize = 256;
pub const DEFAULT_TERMS: usize = 64;
/// Distance to the nearest integer below which a value of class number one is certified.
pub const CERT_TOL: f64 = 1e-10;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;
pub(crate) const GUARD: usize = 64;

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub(crate) fn real(x: BigFloat, p: usize) -> Self {
        Self {
            re: x,
            im: BigFloat::from_i64(0, p),
        }
    }

    pub(crate) fn add(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
        }
    }

    pub(crate) fn sub(&self, o: &Self, p: usize) -> Self {
        Self {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
        }
    }

    pub(crate) fn mul(&self, o: &Self, p: usize) -> Self {
        let re = self
            .re
            .mul(&o.re, p, RM)
            .sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self
            .re
            .mul(&o.im, p, RM)
            .add(&self.im.mul(&o.re, p, RM), p, RM);
        Self { re, im }
    }

    pub(crate) fn scale(&self, k: &BigFloat, p: usize) -> Self {
        Self {
            re: self.re.mul(k, p, RM),
            im: self.im.mul(k, p, RM),
        }
    }

    pub(crate) fn div(&self, o: &Self, p: usize) -> Self {
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let conj = Complex {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let n = self.mul(&conj, p);
        Self {
            re: n.re.div(&den, p, RM),
            im: n.im.div(&den, p, RM),
        }
    }

    pub(crate) fn powi(&self, mut e: u32, p: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Complex::real(BigFloat::from_i64(1, p), p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p);
            }
            base = base.mul(&base, p);
            e >>= 1;
        }
        acc
    }
}

/// `x` as `(nearest integer, |x - nearest|)`.
pub fn round_to_int(x: &BigFloat) -> (BigInt, f64) {
    if x.is_zero() {
        return (BigInt::zero(), 0.0);
    }
    let p = x.mantissa_max_bit_len().unwrap_or(64);
    let r = x.round(0, RM);
    let diff = x.sub(&r, p, RM);
    (exact_int(&r), to_f64(&diff).abs())
}

/// Exact value of an integral `BigFloat`.
fn exact_int(x: &BigFloat) -> BigInt {
    let Some((words, nbits, sign, e, _)) = x.as_raw_parts() else {
        return BigInt::zero();
    };
    if nbits == 0 || x.is_zero() {
        return BigInt::zero();
    }
    let digits: Vec<u32> = words
        .iter()
        .flat_map(|w| {
            let w = *w as u64;
            [w as u32, (w >> 32) as u32]
        })
        .collect();
    let m = BigUint::new(digits);
    let total = (words.len() * std::mem::size_of_val(&words[0]) * 8) as i64;
    let shift = e as i64 - total;
    let v = if shift >= 0 {
        m << (shift as usize)
    } else {
        m >> ((-shift) as usize)
    };
    let v = BigInt::from(v);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Nearest `f64`; saturates to infinity outside its range.
pub fn to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if x.is_zero() {
        return 0.0;
    }
    let top = *words.last().expect("nonempty mantissa") as u64;
    let v = (top as f64) * 2f64.powi(e as i32 - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub(crate) fn from_bigint(n: &BigInt, p: usize) -> BigFloat {
    match n.to_i64() {
        Some(v) => BigFloat::from_i64(v, p),
        None => {
            let mut cc = Consts::new().expect("constants cache");
            BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, &mut cc)
        }
    }
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|k| n % k == 0).map(|k| k * k * k).sum()
}

/// High-precision `j(tau)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct JValue {
    pub tau: CMPoint,
    /// `f64` rendering of the real and imaginary parts.
    pub approx: (f64, f64),
    /// Nearest integer when certified (class number one and within `CERT_TOL`).
    #[serde(with = "crate::intser::option")]
    pub certified: Option<BigInt>,
    pub precision_bits: usize,
    pub terms: usize,
    /// `log2` of the relative truncation error bound.
    pub tail_bound_log2: f64,
    #[serde(skip)]
    pub distance_to_integer: f64,
}

/// `log2` of a bound for the relative truncation error of `E4^3 / prod (1 - q^n)^24`.
fn tail_bound_log2(abs_q_log2: f64, terms: usize) -> f64 {
    let n = (terms + 1) as f64;
    // E4 tail <= 240 * 1.21 * n^3 |q|^n / (1 - |q|)^4, product tail <= 2 |q|^n; 3 and 24 copies
    let e4 = (3.0 * 240.0 * 1.21 * 2.0f64).log2() + 3.0 * n.log2();
    let prod = (48.0f64).log2();
    e4.max(prod) + 1.0 + n * abs_q_log2
}

pub(crate) fn j_complex(
    tau: &CMPoint,
    bits: usize,
    terms: usize,
) -> Result<(Complex, f64), K3Error> {
    if bits < 64 {
        return Err(K3Error::Precision(format!(
            "precision {bits} below 64 bits"
        )));
    }
    let p = bits + GUARD;
    let mut cc = Consts::new().map_err(|e| K3Error::Precision(format!("{e:?}")))?;
    let pi = cc.pi(p, RM);
    let two_pi = pi.mul(&BigFloat::from_i64(2, p), p, RM);
    let r = from_bigint(&tau.r, p);
    let x = from_bigint(&tau.p, p).div(&r, p, RM);
    let y = from_bigint(&tau.q, p)
        .mul(&from_bigint(&(-&tau.d), p).sqrt(p, RM), p, RM)
        .div(&r, p, RM);
    let (_, im) = tau.approx();
    if im <= 0.0 {
        return Err(K3Error::Invalid(format!(
            "{tau} is not in the upper half plane"
        )));
    }
    let abs_q_log2 = -2.0 * std::f64::consts::PI * im / std::f64::consts::LN_2;
    let tail = tail_bound_log2(abs_q_log2, terms);
    if tail > -((bits / 2) as f64) {
        return Err(K3Error::Precision(format!(
            "{terms} terms leave a tail bound 2^{tail:.1} above 2^-{}; raise the term count",
            bits / 2
        )));
    }
    let abs_q = two_pi.mul(&y, p, RM).neg().exp(p, RM, &mut cc);
    let arg = two_pi.mul(&x, p, RM);
    let q = Complex {
        re: abs_q.mul(&arg.cos(p, RM, &mut cc), p, RM),
        im: abs_q.mul(&arg.sin(p, RM, &mut cc), p, RM),
    };
    let one = Complex::real(BigFloat::from_i64(1, p), p);
    let mut qn = one.clone();
    let mut e4_sum = Complex::real(BigFloat::from_i64(0, p), p);
    let mut prod = one.clone();
    for n in 1..=terms as u64 {
        qn = qn.mul(&q, p);
        let s = BigFloat::from_u64(sigma3(n), p);
        e4_sum = e4_sum.add(&qn.scale(&s, p), p);
        prod = prod.mul(&one.sub(&qn, p), p);
    }
    let e4 = one.add(&e4_sum.scale(&BigFloat::from_i64(240, p), p), p);
    let delta = q.mul(&prod.powi(24, p), p);
    Ok((e4.powi(3, p).div(&delta, p), tail))
}

/// `j(tau)`, certified as an integer when `h(disc(tau)) = 1` and it lies within `CERT_TOL`.
pub fn j_cm(tau: &CMPoint, bits: usize, terms: usize) -> Result<JValue, K3Error> {
    Ok(j_cm_full(tau, bits, terms)?.0)
}

pub(crate) fn j_cm_full(
    tau: &CMPoint,
    bits: usize,
    terms: usize,
) -> Result<(JValue, Complex), K3Error> {
    let (j, tail) = j_complex(tau, bits, terms)?;
    let (n, dist) = round_to_int(&j.re);
    let im = to_f64(&j.im);
    let h = class_number(&tau.discriminant())?;
    let certified = (h == 1 && dist < CERT_TOL && im.abs() < CERT_TOL).then(|| n.clone());
    let v = JValue {
        tau: tau.clone(),
        approx: (to_f64(&j.re), im),
        certified,
        precision_bits: bits,
        terms,
        tail_bound_log2: tail,
        distance_to_integer: dist.max(im.abs()),
    };
    Ok((v, j))
}

/// `prod (X - j(tau_Q))` over the reduced primitive forms of discriminant `d`, low degree
/// first, rounded to integers and re-verified at doubled precision.
pub fn hilbert_class_poly(d: &BigInt, bits: usize) -> Result<Vec<BigInt>, K3Error> {
    let first = class_poly_rounded(d, bits)?;
    let second = class_poly_rounded(d, 2 * bits)?;
    if first != second {
        return Err(K3Error::Precision(format!(
            "class polynomial of {d} changes between {bits} and {} bits",
            2 * bits
        )));
    }
    Ok(first)
}

fn class_poly_rounded(d: &BigInt, bits: usize) -> Result<Vec<BigInt>, K3Error> {
    let cg = class_group(d)?;
    let p = bits + GUARD;
    let js: Vec<Complex> = cg
        .elements
        .par_iter()
        .map(|f| {
            let tau = CMPoint::new(-&f.b, 1.into(), BigInt::from(2) * &f.a, d.clone())?;
            let terms = terms_for(&tau, bits);
            Ok(j_complex(&tau, bits, terms)?.0)
        })
        .collect::<Result<_, K3Error>>()?;
    // expand prod (X - j_i)
    let zero = Complex::real(BigFloat::from_i64(0, p), p);
    let mut coeffs = vec![Complex::real(BigFloat::from_i64(1, p), p)];
    for j in &js {
        let mut next = vec![zero.clone(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c, p);
            next[i] = next[i].sub(&c.mul(j, p), p);
        }
        coeffs = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    for (i, c) in coeffs.iter().enumerate() {
        let (n, dist) = round_to_int(&c.re);
        let im = to_f64(&c.im).abs();
        if dist > CERT_TOL || im > CERT_TOL {
            return Err(K3Error::Precision(format!(
                "coefficient {i} of the class polynomial of {d} is {dist:.3e} from an integer \
                 (imaginary part {im:.3e}) at {bits} bits"
            )));
        }
        out.push(n);
    }
    Ok(out)
}

/// Smallest term count with tail bound below `2^(-bits/2)`, at least `DEFAULT_TERMS`.
pub fn terms_for(tau: &CMPoint, bits: usize) -> usize {
    let (_, im) = tau.approx();
    let abs_q_log2 = -2.0 * std::f64::consts::PI * im / std::f64::consts::LN_2;
    let mut terms = DEFAULT_TERMS;
    while tail_bound_log2(abs_q_log2, terms) > -((bits / 2) as f64) {
        terms += 8;
    }
    terms
}
