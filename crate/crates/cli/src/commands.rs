use germ_core::json::{
    arc_to_json, certificate_to_json, ext_rational_to_json, invariants_to_json, rational_to_json, report_to_json,
    GermInput,
};
use germ_core::{
    arc_size_order, decide_equivalence, estimate_contact, estimate_order, expand as expand_poly, order_along_halfbranch,
    order_of_germ, verify_certificate, Arc, BivariatePoly, BranchGerm, Error, ExpandOptions, ExtRational,
    GermPresentation, PuiseuxSeries, Rational, Result, SlopeEstimate,
};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::input;
use crate::Options;

const MAX_DEPTH: i64 = 512;

/// Retries `job` with a growing truncation depth while it reports short data.
fn with_depth<T>(mut job: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut depth = 16;
    loop {
        match job(depth) {
            Err(Error::InsufficientTruncation(_)) if depth < MAX_DEPTH => depth *= 2,
            r => return r,
        }
    }
}

fn deeper(opts: &ExpandOptions, depth: i64) -> ExpandOptions {
    let target = opts.target_trunc.clone().max(Rational::from_integer(depth.into()));
    ExpandOptions { target_trunc: target, ..opts.clone() }
}

fn shear_json(shear: &Option<(Rational, Rational)>) -> Value {
    match shear {
        Some((a, b)) => json!([rational_to_json(a), rational_to_json(b)]),
        None => Value::Null,
    }
}

/// A germ together with the polynomial it came from, re-expandable at any depth.
struct Source {
    value: Value,
    poly: Option<BivariatePoly>,
}

impl Source {
    fn load(src: &str) -> Result<Self> {
        let value = input::germ_value(src)?;
        let poly = match value.get("polynomial").and_then(Value::as_str) {
            Some(p) => Some(germ_core::parse_polynomial(p)?),
            None => None,
        };
        Ok(Source { value, poly })
    }

    fn read(&self, opts: &ExpandOptions) -> Result<GermInput> {
        germ_core::json::read_germ(&self.value, opts)
    }

    /// The defining polynomial in the original coordinates.
    fn polynomial(&self, germ: &GermPresentation) -> Result<BivariatePoly> {
        match &self.poly {
            Some(p) => Ok(p.clone()),
            None => germ.polynomial(),
        }
    }
}

/// The germ and the arc expressed in the germ's expansion coordinates.
fn germ_with_arc(src: &Source, arc: &Arc, opts: &ExpandOptions, depth: i64) -> Result<(GermInput, Arc)> {
    let gi = src.read(&deeper(opts, depth))?;
    let shear = gi.report.as_ref().and_then(|r| r.applied_shear.clone());
    let moved = match shear {
        Some((a, _)) => arc.sheared(&a, &Rational::from_integer(depth.into()), opts.conductor_cap)?,
        None => arc.clone(),
    };
    Ok((gi, moved))
}

fn applied_shear(gi: &GermInput) -> Value {
    shear_json(&gi.report.as_ref().and_then(|r| r.applied_shear.clone()))
}

fn estimate_json(s: &SlopeEstimate, symbolic: Option<&Rational>, tol: f64) -> Value {
    let err = symbolic.and_then(|v| v.to_f64()).map(|v| (s.slope - v).abs());
    json!({
        "slope": s.slope,
        "residual": s.residual,
        "samples": s.samples,
        "t_range": [s.t_range.0, s.t_range.1],
        "symbolic": symbolic.map(rational_to_json),
        "abs_error": err,
        "pass": err.map(|e| e <= tol),
    })
}

fn disagreement(what: &str, checks: &[Value]) -> Result<()> {
    if checks.iter().any(|c| c["pass"] == json!(false)) {
        return Err(Error::Inconsistent(format!("{what}: numeric estimate disagrees with the symbolic value")));
    }
    Ok(())
}

pub fn invariants(germ: &str, opts: &Options) -> Result<Value> {
    Ok(invariants_to_json(&input::germ(germ, opts)?.germ))
}

pub fn expand(germ: &str, opts: &Options) -> Result<Value> {
    let src = Source::load(germ)?;
    let f = src.poly.as_ref().ok_or_else(|| Error::Schema {
        pointer: String::new(),
        message: "expand needs a {\"polynomial\": ...} germ".into(),
    })?;
    Ok(report_to_json(&expand_poly(f, &input::expand_options(opts, None)?)?))
}

fn order_value(src: &Source, arc: &Arc, opts: &Options) -> Result<(Value, Option<Rational>, GermInput)> {
    let eo = input::expand_options(opts, None)?;
    let ((gi, moved), nu, factors) = with_depth(|depth| {
        let (gi, moved) = germ_with_arc(src, arc, &eo, depth)?;
        let nu = order_of_germ(&gi.germ, &moved)?;
        let factors = gi
            .germ
            .factors()
            .iter()
            .map(|f| {
                let r = order_along_halfbranch(&f.branch, &moved)?;
                Ok(json!({
                    "mult": f.mult,
                    "nu": ext_rational_to_json(&r.nu),
                    "k": r.k,
                    "contact": ext_rational_to_json(&r.contact),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(((gi, moved), nu, factors))
    })?;
    let mu = arc_size_order(arc)?;
    let nu_t = nu.scale(&mu);
    let value = json!({
        "nu": ext_rational_to_json(&nu),
        "nu_t": ext_rational_to_json(&nu_t),
        "mu": rational_to_json(&mu),
        "expansion_arc": arc_to_json(&moved),
        "applied_shear": applied_shear(&gi),
        "factors": factors,
    });
    Ok((value, nu_t.finite().cloned(), gi))
}

pub fn order(germ: &str, arc: &str, opts: &Options) -> Result<Value> {
    let (src, arc) = (Source::load(germ)?, input::arc(arc)?);
    let (mut value, nu_t, gi) = order_value(&src, &arc, opts)?;
    if opts.check {
        let check = order_check(&src, &gi, &arc, nu_t, opts)?;
        disagreement("order", std::slice::from_ref(&check))?;
        value["check"] = check;
    }
    Ok(value)
}

fn order_check(src: &Source, gi: &GermInput, arc: &Arc, nu_t: Option<Rational>, opts: &Options) -> Result<Value> {
    let f = src.polynomial(&gi.germ)?;
    let r = &opts.oracle;
    let s = estimate_order(&f, arc, r.t_min, r.t_max, r.samples)?;
    Ok(estimate_json(&s, nu_t.as_ref(), r.tolerance))
}

/// The branch cut to an exact polynomial parameterization past `lambda`, for the distance oracle.
fn exact_branch(src: &Source, index: usize, opts: &ExpandOptions, lambda: &ExtRational) -> Result<BranchGerm> {
    let depth = match lambda {
        ExtRational::Finite(l) => (l.ceil().to_integer().to_i64().unwrap_or(0) + 4).max(16),
        ExtRational::Infinity => 16,
    };
    let gi = src.read(&deeper(opts, 2 * depth))?;
    let b = &gi.germ.factors()[index].branch;
    BranchGerm::new(b.m(), PuiseuxSeries::exact(b.psi().terms().to_vec()))
}

fn contact_value(src: &Source, arc: &Arc, opts: &Options) -> Result<(Value, Vec<(ExtRational, ExtRational)>, GermInput, Arc)> {
    let eo = input::expand_options(opts, None)?;
    let (gi, moved, results) = with_depth(|depth| {
        let (gi, moved) = germ_with_arc(src, arc, &eo, depth)?;
        let results = gi
            .germ
            .factors()
            .iter()
            .map(|f| {
                let r = order_along_halfbranch(&f.branch, &moved)?;
                Ok((r.contact, r.lambda))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((gi, moved, results))
    })?;
    let best = results.iter().map(|(c, _)| c.clone()).max().expect("a germ has factors");
    let factors: Vec<Value> = gi
        .germ
        .factors()
        .iter()
        .zip(&results)
        .map(|(f, (c, _))| json!({ "mult": f.mult, "contact": ext_rational_to_json(c) }))
        .collect();
    let value = json!({
        "contact": ext_rational_to_json(&best),
        "expansion_arc": arc_to_json(&moved),
        "applied_shear": applied_shear(&gi),
        "factors": factors,
    });
    Ok((value, results, gi, moved))
}

fn contact_checks(src: &Source, moved: &Arc, results: &[(ExtRational, ExtRational)], opts: &Options) -> Result<Vec<Value>> {
    let eo = input::expand_options(opts, None)?;
    let r = &opts.oracle;
    results
        .iter()
        .enumerate()
        .map(|(i, (c, lambda))| {
            let b = exact_branch(src, i, &eo, lambda)?;
            match estimate_contact(moved, &b, r.t_min, r.t_max, r.samples, r.conj_samples) {
                Ok(s) => Ok(estimate_json(&s, c.finite(), r.tolerance)),
                Err(Error::DegenerateContact) if c.is_infinite() => Ok(json!({ "degenerate": true, "symbolic": "inf", "pass": true })),
                Err(e) => Err(e),
            }
        })
        .collect()
}

pub fn contact(germ: &str, arc: &str, opts: &Options) -> Result<Value> {
    let (src, arc) = (Source::load(germ)?, input::arc(arc)?);
    let (mut value, results, _, moved) = contact_value(&src, &arc, opts)?;
    if opts.check {
        let checks = contact_checks(&src, &moved, &results, opts)?;
        disagreement("contact", &checks)?;
        value["check"] = json!(checks);
    }
    Ok(value)
}

pub fn oracle(germ: &str, arc: &str, opts: &Options) -> Result<Value> {
    let (src, arc) = (Source::load(germ)?, input::arc(arc)?);
    let (order, nu_t, gi) = order_value(&src, &arc, opts)?;
    let (contact, results, _, moved) = contact_value(&src, &arc, opts)?;
    let order_check = order_check(&src, &gi, &arc, nu_t, opts)?;
    let contact_checks = contact_checks(&src, &moved, &results, opts)?;
    if opts.check {
        disagreement("order", std::slice::from_ref(&order_check))?;
        disagreement("contact", &contact_checks)?;
    }
    Ok(json!({
        "order": { "symbolic": order["nu_t"], "estimate": order_check },
        "contacts": results
            .iter()
            .zip(contact_checks)
            .map(|((c, _), e)| json!({ "symbolic": ext_rational_to_json(c), "estimate": e }))
            .collect::<Vec<_>>(),
        "contact": contact["contact"],
        "applied_shear": order["applied_shear"],
    }))
}

/// Expands both germs in one coordinate system.
fn common_germs(a: &Source, b: &Source, opts: &ExpandOptions) -> Result<(GermInput, GermInput, Value)> {
    let shear = match (&a.poly, &b.poly) {
        (Some(f), Some(g)) => Some(expand_poly(&f.mul(g), opts)?.applied_shear.map(|(s, _)| s).unwrap_or_default()),
        (None, None) => None,
        _ => Some(Rational::default()),
    };
    let forced = ExpandOptions { shear: shear.clone(), ..opts.clone() };
    let shear_value = match shear {
        Some(s) if s != Rational::default() => json!([rational_to_json(&s), "0"]),
        _ => Value::Null,
    };
    Ok((a.read(&forced)?, b.read(&forced)?, shear_value))
}

pub fn intersect(germ: &str, other: &str, opts: &Options) -> Result<Value> {
    let (a, b) = (Source::load(germ)?, Source::load(other)?);
    let eo = input::expand_options(opts, None)?;
    let (ga, gb, shear, matrix) = with_depth(|depth| {
        let (ga, gb, shear) = common_germs(&a, &b, &deeper(&eo, depth))?;
        let matrix = ga
            .germ
            .factors()
            .iter()
            .map(|fa| {
                gb.germ
                    .factors()
                    .iter()
                    .map(|fb| germ_core::intersection_number(&fa.branch, &fb.branch))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((ga, gb, shear, matrix))
    })?;
    let mut total = 0u64;
    for (fa, row) in ga.germ.factors().iter().zip(&matrix) {
        for (fb, v) in gb.germ.factors().iter().zip(row) {
            total += fa.mult as u64 * fb.mult as u64 * v;
        }
    }
    let mults = |g: &GermInput| g.germ.factors().iter().map(|f| f.mult).collect::<Vec<_>>();
    Ok(json!({
        "intersection_number": total,
        "matrix": matrix,
        "left_mults": mults(&ga),
        "right_mults": mults(&gb),
        "applied_shear": shear,
    }))
}

pub fn equiv(germ: &str, other: &str, opts: &Options) -> Result<Value> {
    let (a, b) = (input::germ(germ, opts)?, input::germ(other, opts)?);
    Ok(certificate_to_json(&decide_equivalence(&a.germ, &b.germ)?))
}

pub fn verify(germ: &str, other: &str, sigma: &[usize], opts: &Options) -> Result<Value> {
    let (a, b) = (input::germ(germ, opts)?, input::germ(other, opts)?);
    let valid = verify_certificate(&a.germ, &b.germ, sigma)?;
    Ok(json!({ "valid": valid, "sigma": sigma }))
}
