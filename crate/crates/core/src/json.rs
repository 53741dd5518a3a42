//! JSON forms of the exact objects. Rationals are always strings `"p/q"`.

use serde_json::{json, Map, Value};

use crate::arc::{Arc, BranchGerm};
use crate::cyclo::CycloNumber;
use crate::equivalence::EquivalenceCertificate;
use crate::error::{Error, Result};
use crate::germ::{germ_from_branch_data, BranchSpec, GermPresentation};
use crate::invariants::{CharData, ExtRational};
use crate::newton::{expand, ExpandOptions, ExpansionReport};
use crate::parser::{parse_polynomial, parse_univariate};
use crate::ring::{format_rational, parse_rational, Rational};
use crate::series::PuiseuxSeries;

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.to_string(), message: message.into() }
}

fn field<'a>(v: &'a Value, key: &str, pointer: &str) -> Result<&'a Value> {
    let obj = v.as_object().ok_or_else(|| schema(pointer, "expected an object"))?;
    obj.get(key).ok_or_else(|| schema(pointer, format!("missing key \"{key}\"")))
}

fn as_u32(v: &Value, pointer: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| schema(pointer, "expected a non-negative integer"))
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// Accepts `"p/q"` strings and JSON integers.
pub fn rational_from_json(v: &Value, pointer: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| schema(pointer, format!("not a rational: {s:?}"))),
        Value::Number(n) => n
            .as_i64()
            .map(|n| Rational::from_integer(n.into()))
            .ok_or_else(|| schema(pointer, "expected an integer or a \"p/q\" string")),
        _ => Err(schema(pointer, "expected an integer or a \"p/q\" string")),
    }
}

pub fn ext_rational_to_json(q: &ExtRational) -> Value {
    match q {
        ExtRational::Finite(q) => rational_to_json(q),
        ExtRational::Infinity => Value::String("inf".into()),
    }
}

pub fn cyclo_to_json(c: &CycloNumber) -> Value {
    json!({
        "conductor": c.conductor(),
        "coeffs": c.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

/// Object form, or a rational (string or integer) as shorthand for an element of `Q`.
pub fn cyclo_from_json(v: &Value, pointer: &str) -> Result<CycloNumber> {
    if !v.is_object() {
        return Ok(CycloNumber::rational(rational_from_json(v, pointer)?));
    }
    let n = as_u32(field(v, "conductor", pointer)?, &format!("{pointer}/conductor"))?;
    if n == 0 {
        return Err(schema(&format!("{pointer}/conductor"), "conductor must be positive"));
    }
    let cp = format!("{pointer}/coeffs");
    let coeffs = field(v, "coeffs", pointer)?
        .as_array()
        .ok_or_else(|| schema(&cp, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, c)| rational_from_json(c, &format!("{cp}/{i}")))
        .collect::<Result<Vec<_>>>()?;
    CycloNumber::from_coeffs(n, coeffs).map_err(|e| schema(&cp, e.to_string()))
}

fn terms_to_json(s: &PuiseuxSeries) -> Value {
    s.terms()
        .iter()
        .map(|(e, c)| json!({ "exp": rational_to_json(e), "coeff": cyclo_to_json(c) }))
        .collect()
}

pub fn series_to_json(s: &PuiseuxSeries) -> Value {
    json!({
        "exact": s.is_exact(),
        "trunc": s.trunc().map(rational_to_json),
        "terms": terms_to_json(s),
    })
}

fn terms_from_json(v: &Value, pointer: &str) -> Result<Vec<(Rational, CycloNumber)>> {
    v.as_array()
        .ok_or_else(|| schema(pointer, "expected an array of terms"))?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{pointer}/{i}");
            let e = rational_from_json(field(t, "exp", &p)?, &format!("{p}/exp"))?;
            let c = cyclo_from_json(field(t, "coeff", &p)?, &format!("{p}/coeff"))?;
            Ok((e, c))
        })
        .collect()
}

/// A series as a JSON object, a bare term list (exact), or an expression string in `var` (exact).
pub fn series_from_json(v: &Value, var: &str, pointer: &str) -> Result<PuiseuxSeries> {
    match v {
        Value::String(s) => parse_univariate(s, var),
        Value::Array(_) => Ok(PuiseuxSeries::exact(terms_from_json(v, pointer)?)),
        Value::Object(o) => {
            let terms = terms_from_json(field(v, "terms", pointer)?, &format!("{pointer}/terms"))?;
            let trunc = match o.get("trunc") {
                None | Some(Value::Null) => None,
                Some(t) => Some(rational_from_json(t, &format!("{pointer}/trunc"))?),
            };
            let exact = match o.get("exact") {
                None => trunc.is_none(),
                Some(Value::Bool(b)) => *b,
                Some(_) => return Err(schema(&format!("{pointer}/exact"), "expected a boolean")),
            };
            if exact != trunc.is_none() {
                return Err(schema(pointer, "\"exact\" must be true exactly when \"trunc\" is null"));
            }
            Ok(PuiseuxSeries::new(terms, trunc))
        }
        _ => Err(schema(pointer, "expected a series object, a term array or an expression string")),
    }
}

pub fn char_data_to_json(c: &CharData) -> Value {
    serde_json::to_value(c).expect("characteristic data serializes")
}

fn branch_to_json(b: &BranchGerm, mult: u32) -> Value {
    let psi: Vec<Value> = b
        .psi()
        .terms()
        .iter()
        .map(|(e, c)| json!({ "exp": rational_to_json(e), "coeff": cyclo_to_json(c) }))
        .collect();
    json!({ "m": b.m(), "psi": psi, "mult": mult })
}

/// Branch-data form `{"branches": [...]}` of a germ.
pub fn germ_to_json(g: &GermPresentation) -> Value {
    json!({ "branches": g.factors().iter().map(|f| branch_to_json(&f.branch, f.mult)).collect::<Vec<_>>() })
}

/// Invariants of a germ: per-factor characteristic data with the factor's multiplicity,
/// and the intersection matrix.
pub fn invariants_to_json(g: &GermPresentation) -> Value {
    let factors: Vec<Value> = g
        .factors()
        .iter()
        .zip(g.char_data())
        .map(|(f, c)| {
            let mut obj = char_data_to_json(c);
            obj["mult"] = json!(f.mult);
            obj
        })
        .collect();
    json!({
        "multiplicity": g.multiplicity(),
        "factors": factors,
        "intersection_matrix": g.intersection_matrix(),
    })
}

pub fn report_to_json(r: &ExpansionReport) -> Value {
    let branches: Vec<Value> = r
        .branches
        .iter()
        .map(|b| {
            json!({
                "m": b.branch.m(),
                "psi": series_to_json(b.branch.psi()),
                "mult": b.mult,
                "certified_trunc": rational_to_json(&b.certified_trunc),
                "char": char_data_to_json(&crate::invariants::characteristic_data(&b.branch).expect("expanded branch")),
            })
        })
        .collect();
    json!({
        "polynomial": r.polynomial.to_string(),
        "applied_shear": r.applied_shear.as_ref().map(|(a, b)| vec![rational_to_json(a), rational_to_json(b)]),
        "branches": branches,
        "intersection_matrix": r.germ.intersection_matrix(),
    })
}

pub fn certificate_to_json(c: &EquivalenceCertificate) -> Value {
    serde_json::to_value(c).expect("certificate serializes")
}

pub fn error_to_json(e: &Error) -> Value {
    let mut obj = Map::new();
    obj.insert("code".into(), Value::String(e.code().into()));
    obj.insert("message".into(), Value::String(e.to_string()));
    if let Error::Schema { pointer, .. } = e {
        obj.insert("pointer".into(), Value::String(pointer.clone()));
    }
    json!({ "error": Value::Object(obj) })
}

/// A germ read from JSON, with the expansion when it came from a polynomial.
#[derive(Debug, Clone)]
pub struct GermInput {
    pub germ: GermPresentation,
    pub report: Option<ExpansionReport>,
}

/// Reads `{"polynomial": "<expr>"}` or `{"branches": [{"m", "psi", "mult"}]}`.
pub fn read_germ(v: &Value, opts: &ExpandOptions) -> Result<GermInput> {
    let obj = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    match (obj.get("polynomial"), obj.get("branches")) {
        (Some(_), Some(_)) => Err(schema("", "give either \"polynomial\" or \"branches\", not both")),
        (Some(Value::String(s)), None) => {
            let report = expand(&parse_polynomial(s)?, opts)?;
            Ok(GermInput { germ: report.germ.clone(), report: Some(report) })
        }
        (Some(_), None) => Err(schema("/polynomial", "expected a string")),
        (None, Some(Value::Array(bs))) => {
            if bs.is_empty() {
                return Err(schema("/branches", "at least one branch is required"));
            }
            let specs = bs
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let p = format!("/branches/{i}");
                    let m = as_u32(field(b, "m", &p)?, &format!("{p}/m"))?;
                    let psi = series_from_json(field(b, "psi", &p)?, "t", &format!("{p}/psi"))?;
                    let mult = match b.get("mult") {
                        None => 1,
                        Some(x) => as_u32(x, &format!("{p}/mult"))?,
                    };
                    Ok(BranchSpec { m, psi, mult })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(GermInput { germ: germ_from_branch_data(&specs)?, report: None })
        }
        (None, Some(_)) => Err(schema("/branches", "expected an array")),
        (None, None) => Err(schema("", "missing key \"polynomial\" or \"branches\"")),
    }
}

/// `{"p": p, "y": series}` for `t -> (t^p, y(t))`, or `{"e": e, "v": series}` for `t -> (0, t^e v(t))`.
pub fn arc_from_json(v: &Value) -> Result<Arc> {
    let obj = v.as_object().ok_or_else(|| schema("", "expected an object"))?;
    if obj.contains_key("p") {
        let p = as_u32(&obj["p"], "/p")?;
        let y = series_from_json(field(v, "y", "")?, "t", "/y")?;
        Arc::x_normalized(p, y)
    } else if obj.contains_key("e") {
        let e = as_u32(&obj["e"], "/e")?;
        let v = match obj.get("v") {
            None => PuiseuxSeries::exact(vec![(Rational::from_integer(0.into()), CycloNumber::from_int(1))]),
            Some(x) => series_from_json(x, "t", "/v")?,
        };
        Arc::y_axis(e, v)
    } else {
        Err(schema("", "an arc needs \"p\" and \"y\", or \"e\" and \"v\""))
    }
}

pub fn arc_to_json(a: &Arc) -> Value {
    match a {
        Arc::XNormalized { p, y } => json!({ "p": p, "y": series_to_json(y) }),
        Arc::YAxis { e, v } => json!({ "e": e, "v": series_to_json(v) }),
    }
}

/// A single branch `{"m", "psi"}`, used where an operation takes one irreducible germ.
pub fn branch_from_json(v: &Value) -> Result<BranchGerm> {
    let m = as_u32(field(v, "m", "")?, "/m")?;
    let psi = series_from_json(field(v, "psi", "")?, "t", "/psi")?;
    BranchGerm::new(m, PuiseuxSeries::exact(psi.terms().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::decide_equivalence;

    #[test]
    fn cyclo_round_trip() {
        let z = CycloNumber::root_of_unity(6, 1).scale(&Rational::new(3.into(), 4.into()));
        let v = cyclo_to_json(&z);
        assert_eq!(v["conductor"], 6);
        assert_eq!(cyclo_from_json(&v, "").unwrap(), z);
        assert_eq!(cyclo_from_json(&json!("-2/3"), "").unwrap(), CycloNumber::rational(Rational::new((-2).into(), 3.into())));
    }

    #[test]
    fn series_round_trip() {
        let half = Rational::new(3.into(), 2.into());
        let s = parse_univariate("-2*t^2", "t")
            .unwrap()
            .add(&PuiseuxSeries::monomial(CycloNumber::from_int(1), half))
            .truncate(&Rational::from_integer(5.into()));
        let v = series_to_json(&s);
        assert_eq!(v["exact"], false);
        assert_eq!(v["trunc"], "5");
        assert_eq!(v["terms"][0]["exp"], "3/2");
        assert_eq!(series_from_json(&v, "t", "").unwrap(), s);
    }

    #[test]
    fn char_data_form() {
        let g = read_germ(&json!({"polynomial": "y^2 - x^5"}), &ExpandOptions::default()).unwrap();
        assert_eq!(char_data_to_json(&g.germ.char_data()[0]), json!({"m": 2, "pairs": [[5, 1]], "msub": [2]}));
    }

    #[test]
    fn both_input_paths_agree() {
        let opts = ExpandOptions::default();
        let a = read_germ(&json!({"polynomial": "y^2 - x^3"}), &opts).unwrap();
        let b = read_germ(&json!({"branches": [{"m": 2, "psi": [{"exp": 3, "coeff": "1"}], "mult": 1}]}), &opts).unwrap();
        assert_eq!(a.germ.char_data(), b.germ.char_data());
        assert!(b.report.is_none());
        let c = read_germ(&germ_to_json(&a.germ), &opts).unwrap();
        assert!(decide_equivalence(&a.germ, &c.germ).unwrap().is_equivalent());
    }

    #[test]
    fn input_errors() {
        let opts = ExpandOptions::default();
        assert_eq!(read_germ(&json!({"polynomial": "1 + y"}), &opts).unwrap_err().code(), "GermNotVanishing");
        let e = read_germ(&json!({"branches": [{"m": 2, "psi": [{"exp": 3}]}]}), &opts).unwrap_err();
        assert_eq!(e, schema("/branches/0/psi/0", "missing key \"coeff\""));
        assert_eq!(read_germ(&json!({}), &opts).unwrap_err().code(), "SchemaViolation");
    }

    #[test]
    fn arcs() {
        let a = arc_from_json(&json!({"p": 2, "y": "t^3"})).unwrap();
        assert_eq!(arc_from_json(&arc_to_json(&a)).unwrap(), a);
        assert!(matches!(arc_from_json(&json!({"e": 1})).unwrap(), Arc::YAxis { e: 1, .. }));
    }
}
