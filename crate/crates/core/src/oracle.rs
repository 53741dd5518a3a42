//! Floating-point cross-checks: log-log slopes of `|f(gamma(t))|` and of the
//! distance from an arc to the equidistant slice of a branch.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arc::{Arc, BranchGerm};
use crate::bivariate::BivariatePoly;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::ring::Rational;
use crate::series::PuiseuxSeries;

pub const DEFAULT_CONJ_SAMPLES: usize = 64;

/// Relative size below which a direct evaluation is treated as cancelled.
const CANCELLATION: f64 = 1e-8;
const BISECTION_STEPS: usize = 200;
const GOLDEN_STEPS: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub slope: f64,
    /// Root-mean-square residual of the fit, in natural-log units.
    pub residual: f64,
    pub samples: usize,
    pub t_range: (f64, f64),
}

fn check_range(t_min: f64, t_max: f64, n: usize) -> Result<()> {
    if !(t_min > 0.0 && t_min < t_max && t_max < 1.0) || n < 4 {
        return Err(Error::RangeError {
            message: format!("need 0 < t_min < t_max < 1 and n >= 4, got [{t_min:e}, {t_max:e}], n = {n}"),
            suggested_min: 1e-6,
            suggested_max: 1e-3,
        });
    }
    Ok(())
}

fn geometric(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// Least-squares slope of `ys` against `xs` with the RMS residual.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - icept - slope * x).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

fn eval_series(s: &PuiseuxSeries, t: f64) -> Complex64 {
    s.terms()
        .iter()
        .map(|(e, c)| c.to_complex() * t.powf(e.to_f64().unwrap_or(f64::NAN)))
        .sum()
}

fn arc_point(a: &Arc, t: f64) -> (Complex64, Complex64) {
    match a {
        Arc::XNormalized { p, y } => (Complex64::new(t.powi(*p as i32), 0.0), eval_series(y, t)),
        Arc::YAxis { e, v } => (Complex64::new(0.0, 0.0), eval_series(v, t) * t.powi(*e as i32)),
    }
}

fn arc_series(a: &Arc) -> (PuiseuxSeries, PuiseuxSeries) {
    let one = CycloNumber::from_int(1);
    match a {
        Arc::XNormalized { p, y } => (PuiseuxSeries::monomial(one, Rational::from_integer((*p).into())), y.clone()),
        Arc::YAxis { e, v } => (
            PuiseuxSeries::zero(),
            v.mul(&PuiseuxSeries::monomial(one, Rational::from_integer((*e).into()))),
        ),
    }
}

fn fit_or_range_error(ts: &[f64], vals: &[f64], t_min: f64, t_max: f64, what: &str) -> Result<SlopeEstimate> {
    let bad: Vec<usize> = (0..vals.len()).filter(|&k| !(vals[k].is_finite() && vals[k] > 0.0)).collect();
    if !bad.is_empty() {
        let good: Vec<f64> = (0..vals.len()).filter(|k| !bad.contains(k)).map(|k| ts[k]).collect();
        let (lo, hi) = match (good.first(), good.last()) {
            (Some(&lo), Some(&hi)) if lo < hi => (lo, hi),
            _ => (t_max.sqrt().min(0.1), 0.5),
        };
        return Err(Error::RangeError {
            message: format!("{what} underflows or overflows at {} of {} samples", bad.len(), vals.len()),
            suggested_min: lo,
            suggested_max: hi,
        });
    }
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
    let (slope, residual) = fit_slope(&xs, &ys);
    Ok(SlopeEstimate { slope, residual, samples: ts.len(), t_range: (t_min, t_max) })
}

/// Slope of `log |f(a(t))|` against `log t`.
///
/// Points are evaluated directly in double precision; when the terms of `f` cancel to
/// below a relative `1e-8`, the exactly composed expansion of `f(a(t))` is evaluated instead.
pub fn estimate_order(f: &BivariatePoly, a: &Arc, t_min: f64, t_max: f64, n: usize) -> Result<SlopeEstimate> {
    check_range(t_min, t_max, n)?;
    let ts = geometric(t_min, t_max, n);
    let mut composed: Option<PuiseuxSeries> = None;
    let mut vals = Vec::with_capacity(n);
    for &t in &ts {
        let (x, y) = arc_point(a, t);
        let mut value = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (&(i, j), c) in f.terms() {
            let term = c.to_complex() * x.powu(i) * y.powu(j);
            value += term;
            scale += term.norm();
        }
        let v = if value.norm() < CANCELLATION * scale {
            let s = composed.get_or_insert_with(|| {
                let (xs, ys) = arc_series(a);
                f.compose_series(&xs, &ys)
            });
            if s.is_exact_zero() {
                return Err(Error::RangeError {
                    message: "the function vanishes identically along the arc".into(),
                    suggested_min: t_min,
                    suggested_max: t_max,
                });
            }
            eval_series(s, t).norm()
        } else {
            value.norm()
        };
        vals.push(v);
    }
    fit_or_range_error(&ts, &vals, t_min, t_max, "|f(gamma(t))|")
}

fn binomial_row(e: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 1..=e as usize {
        let prev = row[k - 1];
        row.push(prev * (e as f64 - k as f64 + 1.0) / k as f64);
    }
    row
}

/// `(1 + z)^e - 1` without cancellation for small `z`.
fn pow_minus_one(z: Complex64, row: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zp = Complex64::new(1.0, 0.0);
    for c in row.iter().skip(1) {
        zp *= z;
        acc += zp * c;
    }
    acc
}

/// Branch data prepared for distance evaluation.
struct Curve {
    m: u32,
    terms: Vec<(u32, Complex64, Vec<f64>)>,
    m_row: Vec<f64>,
}

impl Curve {
    fn new(b: &BranchGerm) -> Self {
        let terms = b
            .psi()
            .terms()
            .iter()
            .map(|(e, c)| {
                let e = e.to_integer().to_u32().expect("branch exponents are small integers");
                (e, c.to_complex(), binomial_row(e))
            })
            .collect();
        Curve { m: b.m(), terms, m_row: binomial_row(b.m()) }
    }

    fn point(&self, u: Complex64) -> (Complex64, Complex64) {
        let y = self.terms.iter().map(|(e, c, _)| c * u.powu(*e)).sum();
        (u.powu(self.m), y)
    }

    /// `X(u0 (1 + z)) - X(u0)`.
    fn delta(&self, u0: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let dx = u0.powu(self.m) * pow_minus_one(z, &self.m_row);
        let dy = self.terms.iter().map(|(e, c, row)| c * u0.powu(*e) * pow_minus_one(z, row)).sum();
        (dx, dy)
    }
}

fn inner_re(p: (Complex64, Complex64), d: (Complex64, Complex64)) -> f64 {
    (p.0 * d.0.conj() + p.1 * d.1.conj()).re
}

fn norm2(d: (Complex64, Complex64)) -> f64 {
    d.0.norm_sqr() + d.1.norm_sqr()
}

/// Bisection for the root of an increasing function on `[lo, hi]`, expanding `hi` as needed.
fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut grow = 0;
    while g(hi) < 0.0 {
        hi = lo + 2.0 * (hi - lo);
        grow += 1;
        if grow > 200 || !hi.is_finite() {
            return Err(Error::RangeError {
                message: "radial bisection found no point of the curve at the arc's distance".into(),
                suggested_min: 1e-4,
                suggested_max: 1e-2,
            });
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn golden_min(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..GOLDEN_STEPS {
        if b - a <= f64::MIN_POSITIVE || c >= d {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(fc.min(fd))
}

/// Distance from `p` to the slice of the curve at radius `|p|`, using anchors
/// `u0 = zeta_m^k tau` (same first coordinate as `p`) and offsets `D0_k = p - X(u0)`.
fn slice_distance_anchored(
    curve: &Curve,
    p: (Complex64, Complex64),
    anchors: &[(Complex64, (Complex64, Complex64))],
    conj_samples: usize,
) -> Result<f64> {
    let m = curve.m as f64;
    let sector = std::f64::consts::PI / m;
    let per = (conj_samples / curve.m as usize).max(4);
    let mut best = f64::INFINITY;
    for &(u0, d0) in anchors {
        // Point on the slice at angle offset phi: u = u0 (1 + a) e^(i phi).
        let dist_at = |phi: f64| -> Result<f64> {
            let rot = Complex64::new(-2.0 * (phi / 2.0).sin().powi(2), phi.sin());
            let z_of = |a: f64| Complex64::new(a, 0.0) * (rot + 1.0) + rot;
            let d_of = |a: f64| {
                let dx = curve.delta(u0, z_of(a));
                (d0.0 - dx.0, d0.1 - dx.1)
            };
            let g = |a: f64| {
                let d = d_of(a);
                norm2(d) - 2.0 * inner_re(p, d)
            };
            let a = bisect(g, -1.0, 1.0)?;
            Ok(norm2(d_of(a)).sqrt())
        };
        let step = 2.0 * sector / per as f64;
        let mut coarse_best = (dist_at(0.0)?, 0.0);
        for j in 0..per {
            let phi = -sector + step * (j as f64 + 0.5);
            let d = dist_at(phi)?;
            if d < coarse_best.0 {
                coarse_best = (d, phi);
            }
        }
        let refined = golden_min(&dist_at, coarse_best.1 - step, coarse_best.1 + step)?;
        best = best.min(refined).min(coarse_best.0);
    }
    Ok(best)
}

/// Distance for arcs without an x-normalized anchor (y-axis arcs).
fn slice_distance_direct(curve: &Curve, p: (Complex64, Complex64), conj_samples: usize) -> Result<f64> {
    let r2 = norm2(p);
    let dist_at = |phi: f64| -> Result<f64> {
        let dir = Complex64::from_polar(1.0, phi);
        let g = |rho: f64| norm2(curve.point(dir * rho)) - r2;
        let rho = bisect(g, 0.0, r2.sqrt().powf(1.0 / curve.m as f64).max(1e-300))?;
        let q = curve.point(dir * rho);
        Ok(norm2((p.0 - q.0, p.1 - q.1)).sqrt())
    };
    let step = 2.0 * std::f64::consts::PI / conj_samples as f64;
    let mut coarse = (f64::INFINITY, 0.0);
    for j in 0..conj_samples {
        let phi = step * j as f64;
        let d = dist_at(phi)?;
        if d < coarse.0 {
            coarse = (d, phi);
        }
    }
    Ok(golden_min(&dist_at, coarse.1 - step, coarse.1 + step)?.min(coarse.0))
}

/// Slope of `log dist(a(t), X(|a(t)|))` against `log |a(t)|`: the contact of the arc
/// with the branch, measured against the distance to the origin.
pub fn estimate_contact(
    a: &Arc,
    b: &BranchGerm,
    t_min: f64,
    t_max: f64,
    n: usize,
    conj_samples: usize,
) -> Result<SlopeEstimate> {
    check_range(t_min, t_max, n)?;
    if !b.psi().is_exact() {
        return Err(Error::InvalidBranch("the contact oracle needs an exact branch".into()));
    }
    let curve = Curve::new(b);
    let m = b.m();
    let differences: Option<Vec<PuiseuxSeries>> = match a {
        Arc::XNormalized { p, y } => {
            let common = y.reparameterize(m, *p);
            let diffs: Vec<PuiseuxSeries> = (0..m as i64).map(|k| common.sub(&b.conjugate(k))).collect();
            if diffs.iter().any(|d| d.is_exact_zero()) {
                return Err(Error::DegenerateContact);
            }
            Some(diffs)
        }
        Arc::YAxis { .. } => None,
    };
    let ts = geometric(t_min, t_max, n);
    let mut radii = Vec::with_capacity(n);
    let mut dists = Vec::with_capacity(n);
    for &t in &ts {
        let p = arc_point(a, t);
        radii.push(norm2(p).sqrt());
        let d = match (&differences, a) {
            (Some(diffs), Arc::XNormalized { p: pe, .. }) => {
                let tau = t.powf(*pe as f64 / m as f64);
                let anchors: Vec<(Complex64, (Complex64, Complex64))> = diffs
                    .iter()
                    .enumerate()
                    .map(|(k, diff)| {
                        let u0 = Complex64::from_polar(tau, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
                        (u0, (Complex64::new(0.0, 0.0), eval_series(diff, tau)))
                    })
                    .collect();
                slice_distance_anchored(&curve, p, &anchors, conj_samples)?
            }
            _ => slice_distance_direct(&curve, p, conj_samples)?,
        };
        dists.push(d);
    }
    if dists.iter().all(|&d| d == 0.0) {
        return Err(Error::DegenerateContact);
    }
    let est = fit_or_range_error(&radii, &dists, t_min, t_max, "distance to the curve slice")?;
    Ok(SlopeEstimate { t_range: (t_min, t_max), samples: n, ..est })
}
