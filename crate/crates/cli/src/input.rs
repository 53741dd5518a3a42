use std::path::Path;

use germ_core::json::{arc_from_json, read_germ, GermInput};
use germ_core::ring::parse_rational;
use germ_core::{Arc, Error, ExpandOptions, Result};
use serde_json::{json, Value};

use crate::Options;

fn syntax(err: &serde_json::Error, src: &str) -> Error {
    // serde_json reports 1-based line and column; convert to a byte offset.
    let offset = src
        .split_inclusive('\n')
        .take(err.line().saturating_sub(1))
        .map(str::len)
        .sum::<usize>()
        + err.column().saturating_sub(1);
    Error::Syntax { offset, message: format!("invalid JSON: {err}") }
}

fn parse_json(src: &str) -> Result<Value> {
    serde_json::from_str(src).map_err(|e| syntax(&e, src))
}

/// Inline JSON, a JSON file, or `None` when the argument is neither.
fn load(src: &str) -> Result<Option<Value>> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return parse_json(src).map(Some);
    }
    let path = Path::new(src);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Schema { pointer: String::new(), message: format!("cannot read {src}: {e}") })?;
        return parse_json(&text).map(Some);
    }
    Ok(None)
}

pub fn expand_options(opts: &Options, shear: Option<germ_core::Rational>) -> Result<ExpandOptions> {
    let target_trunc = parse_rational(&opts.trunc).ok_or_else(|| Error::Syntax {
        offset: 0,
        message: format!("--trunc expects an integer or p/q, got {:?}", opts.trunc),
    })?;
    Ok(ExpandOptions { target_trunc, conductor_cap: opts.conductor_cap, shear })
}

pub fn germ_value(src: &str) -> Result<Value> {
    Ok(load(src)?.unwrap_or_else(|| json!({ "polynomial": src })))
}

pub fn germ(src: &str, opts: &Options) -> Result<GermInput> {
    read_germ(&germ_value(src)?, &expand_options(opts, None)?)
}

/// JSON, or the shorthand `p: y(t)`.
pub fn arc(src: &str) -> Result<Arc> {
    if let Some(v) = load(src)? {
        return arc_from_json(&v);
    }
    let (p, y) = src.split_once(':').ok_or_else(|| Error::Syntax {
        offset: 0,
        message: "an arc is JSON or `p: y(t)`".into(),
    })?;
    let p: u32 = p.trim().parse().map_err(|_| Error::Syntax { offset: 0, message: format!("bad exponent {p:?}") })?;
    arc_from_json(&json!({ "p": p, "y": y.trim() }))
}
