//! Roots of polynomials inside `Q(sqrt m)`: floating-point Aberth iteration proposes
//! candidates `(P + Q sqrt m) / 2D`, exact evaluation accepts or rejects them.

use super::field::{denominator, Fe};
use super::poly::Poly;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, a| acc * z + a)
}

/// All complex roots of `sum c_i z^i`, `c` low degree first with nonzero leading term.
pub fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let dc: Vec<Complex64> = (1..=n).map(|i| c[i] * i as f64).collect();
    // Fujiwara bound
    let radius = (1..=n)
        .map(|k| c[n - k].norm().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, th)
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        let scale = z.iter().map(|w| w.norm()).fold(1.0f64, f64::max);
        for k in 0..n {
            let p = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / horner(&dc, z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                max_step = max_step.max(w.norm());
            }
        }
        if max_step <= 1e-15 * scale {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let d = horner(&dc, *zk);
            if d.norm() == 0.0 {
                break;
            }
            let w = horner(&c, *zk) / d;
            if w.is_finite() {
                *zk -= w;
            }
        }
    }
    z
}

fn embed_poly(f: &Poly, sign: f64) -> Vec<Complex64> {
    f.coeffs()
        .iter()
        .map(|a| {
            let (re, im) = a.embed(sign);
            Complex64::new(re, im)
        })
        .collect()
}

fn is_real(z: &Complex64) -> bool {
    z.im.abs() <= 1e-6 * z.norm().max(1.0)
}

fn round_big(x: f64) -> Option<BigInt> {
    BigInt::from_f64(x.round())
}

/// Distinct roots of `f` in `Q(sqrt m)` (`m = 1` for `Q`), sorted by `(u, v)`.
pub fn roots_in_field(f: &Poly, m: i64) -> Vec<Fe> {
    let Some(n) = f.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let f = f.monic().with_field(m);
    let mut out: Vec<Fe> = Vec::new();
    let push = |r: Fe, out: &mut Vec<Fe>| {
        if !out.contains(&r) && f.eval(&r).is_zero() {
            out.push(r);
        }
    };
    if n == 1 {
        push(-f.coeff(0), &mut out);
        return out;
    }
    if n == 2 {
        // t^2 + b t + c
        let (b, c) = (f.coeff(1), f.coeff(0));
        let disc = &(&b * &b) - &(&c * &Fe::from_int(4));
        if let Some(s) = disc.sqrt_in(m) {
            let half = Fe::from_rat(super::field::rat(1, 2));
            push(&(&(-&b) + &s) * &half, &mut out);
            push(&(&(-&b) - &s) * &half, &mut out);
        }
        out.sort_by_key(Fe::sort_key);
        return out;
    }
    let d = f.coeffs().iter().fold(BigInt::one(), |acc, a| {
        num_integer::Integer::lcm(&acc, &denominator(a))
    });
    let two_d = BigRational::from_integer(&d * 2);
    let two_d_f = num_traits::ToPrimitive::to_f64(&two_d).unwrap_or(f64::INFINITY);
    let make = |u: f64, v: f64| -> Option<Fe> {
        let p = round_big(u * two_d_f)?;
        let q = round_big(v * two_d_f)?;
        Some(Fe::new(
            BigRational::from_integer(p) / &two_d,
            BigRational::from_integer(q) / &two_d,
            m,
        ))
    };
    if m == 1 {
        for z in aberth(&embed_poly(&f, 1.0)).iter().filter(|z| is_real(z)) {
            if let Some(r) = make(z.re, 0.0) {
                push(r, &mut out);
            }
        }
    } else if m < 0 {
        let s = ((-m) as f64).sqrt();
        for z in aberth(&embed_poly(&f, 1.0)) {
            if let Some(r) = make(z.re, z.im / s) {
                push(r, &mut out);
            }
        }
    } else {
        let s = (m as f64).sqrt();
        let zs: Vec<f64> = aberth(&embed_poly(&f, 1.0))
            .into_iter()
            .filter(is_real)
            .map(|z| z.re)
            .collect();
        let ws: Vec<f64> = aberth(&embed_poly(&f, -1.0))
            .into_iter()
            .filter(is_real)
            .map(|z| z.re)
            .collect();
        for z in &zs {
            for w in &ws {
                if let Some(r) = make((z + w) / 2.0, (z - w) / (2.0 * s)) {
                    push(r, &mut out);
                }
            }
        }
    }
    out.sort_by_key(Fe::sort_key);
    out
}
