//! JSON serialization of the kernel's data types (schema version 1).
//!
//! A polynomial is a list of `[numerator, denominator, exponents]` triples —
//! the coefficient as decimal strings (arbitrary precision survives) and the
//! exponent vector positional against an accompanying `"vars"` list.
//! Staircase ideals are lists of `[m, n]` pairs. Standalone rationals are
//! `"p/q"` strings in lowest terms. Every top-level document carries
//! `"schema": 1`.
//!
//! Serialization is deterministic: object keys are emitted in sorted order
//! (serde_json's default map) and polynomial terms in their canonical
//! storage order, so equal values produce byte-identical documents.

use crate::error::{Error, Result};
use crate::intrinsic::IntrinsicIdeal;
use crate::monomial::Monomial;
use crate::poly::{Polynomial, Term};
use crate::transition::{
    BifurcationDiagram, ParameterRegion, PersistentDiagrams, RegionDecomposition, SideConditions,
    TransitionComponent, TransitionSet,
};
use crate::unfolding::Unfolding;
use crate::vars::{Var, VarList};
use crate::Rat;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use std::str::FromStr;

/// Schema version stamped on every document.
pub const SCHEMA: u64 = 1;

/// Wrap a body object as a top-level document: `{"schema": 1, "kind": …}`
/// plus the body's fields.
pub fn document(kind: &str, body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("kind".into(), json!(kind));
    m.extend(body);
    Value::Object(m)
}

/// Render a document with stable formatting (compact, sorted keys).
pub fn to_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable value")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::invalid(msg)
}

pub fn rat_to_json(r: &Rat) -> Value {
    if r.denom() == &BigInt::from(1) {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn rat_from_json(v: &Value) -> Result<Rat> {
    let s = v.as_str().ok_or_else(|| bad("rational must be a string"))?;
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|e| bad(format!("bad numerator {num:?}: {e}")))?;
    let d = BigInt::from_str(den).map_err(|e| bad(format!("bad denominator {den:?}: {e}")))?;
    if d == BigInt::from(0) {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

pub fn var_from_name(s: &str) -> Result<Var> {
    match s {
        "x" => Ok(Var::X),
        "lambda" => Ok(Var::Lambda),
        "t" => Ok(Var::T),
        "zeta" => Ok(Var::Zeta),
        "x1" => Ok(Var::X1),
        "x2" => Ok(Var::X2),
        _ => match s.strip_prefix("alpha").and_then(|k| k.parse::<u8>().ok()) {
            Some(k) if k >= 1 => Ok(Var::Alpha(k)),
            _ => Err(bad(format!("unknown variable name {s:?}"))),
        },
    }
}

pub fn vars_to_json(vars: &VarList) -> Value {
    Value::Array(vars.iter().map(|v| json!(v.to_string())).collect())
}

pub fn vars_from_json(v: &Value) -> Result<VarList> {
    let arr = v.as_array().ok_or_else(|| bad("vars must be a list"))?;
    let mut out = Vec::with_capacity(arr.len());
    for name in arr {
        let s = name
            .as_str()
            .ok_or_else(|| bad("variable names must be strings"))?;
        out.push(var_from_name(s)?);
    }
    Ok(VarList(out))
}

pub fn monomial_to_json(m: &Monomial) -> Value {
    Value::Array(m.0.iter().map(|&e| json!(e)).collect())
}

pub fn monomial_from_json(v: &Value) -> Result<Monomial> {
    let arr = v.as_array().ok_or_else(|| bad("monomial must be a list"))?;
    let mut exps = Vec::with_capacity(arr.len());
    for e in arr {
        let n = e
            .as_u64()
            .ok_or_else(|| bad("exponents must be nonnegative integers"))?;
        exps.push(u32::try_from(n).map_err(|_| bad("exponent too large"))?);
    }
    Ok(Monomial(exps))
}

/// `{"vars": […], "terms": [[num, den, [e…]], …]}` with terms in canonical
/// order.
pub fn polynomial_to_json(p: &Polynomial) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .map(|t| {
            json!([
                t.coef.numer().to_string(),
                t.coef.denom().to_string(),
                monomial_to_json(&t.mono),
            ])
        })
        .collect();
    json!({ "vars": vars_to_json(p.vars()), "terms": terms })
}

pub fn polynomial_from_json(v: &Value) -> Result<Polynomial> {
    let obj = v.as_object().ok_or_else(|| bad("polynomial must be an object"))?;
    let vars = vars_from_json(obj.get("vars").ok_or_else(|| bad("missing vars"))?)?;
    let raw = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing terms list"))?;
    let mut terms = Vec::with_capacity(raw.len());
    for t in raw {
        let triple = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| {
            bad("each term must be a [numerator, denominator, exponents] triple")
        })?;
        let num = triple[0]
            .as_str()
            .ok_or_else(|| bad("numerator must be a string"))?;
        let den = triple[1]
            .as_str()
            .ok_or_else(|| bad("denominator must be a string"))?;
        let coef = rat_from_json(&Value::String(format!("{num}/{den}")))?;
        let mono = monomial_from_json(&triple[2])?;
        if mono.nvars() != vars.len() {
            return Err(bad("exponent vector length does not match vars"));
        }
        terms.push(Term { coef, mono });
    }
    Ok(Polynomial::new(vars, terms))
}

/// Staircase ideal as its `[m, n]` corner pairs.
pub fn staircase_to_json(i: &IntrinsicIdeal) -> Value {
    Value::Array(
        i.stairs
            .iter()
            .map(|&(m, n)| json!([m, n]))
            .collect(),
    )
}

pub fn staircase_from_json(v: &Value) -> Result<IntrinsicIdeal> {
    let arr = v.as_array().ok_or_else(|| bad("staircase must be a list"))?;
    let mut stairs = Vec::with_capacity(arr.len());
    for pair in arr {
        let p = pair
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad("each stair must be an [m, n] pair"))?;
        let m = p[0].as_u64().ok_or_else(|| bad("m must be an integer"))?;
        let n = p[1].as_u64().ok_or_else(|| bad("n must be an integer"))?;
        stairs.push((
            u32::try_from(m).map_err(|_| bad("m too large"))?,
            u32::try_from(n).map_err(|_| bad("n too large"))?,
        ));
    }
    let admissible = stairs
        .windows(2)
        .all(|w| w[0].1 < w[1].1 && w[0].0 + w[0].1 > w[1].0 + w[1].1);
    if !admissible {
        return Err(bad(
            "stairs must have strictly increasing n and strictly decreasing m+n",
        ));
    }
    Ok(IntrinsicIdeal::new(stairs))
}

/// `{"base": …, "directions": […], "parameters": […], "poly": …}`.
pub fn unfolding_to_json(u: &Unfolding) -> Value {
    json!({
        "base": polynomial_to_json(&u.base),
        "directions": u.directions.iter().map(monomial_to_json).collect::<Vec<_>>(),
        "parameters": u.alpha_list().iter().map(|v| json!(v.to_string())).collect::<Vec<_>>(),
        "poly": polynomial_to_json(&u.poly),
    })
}

pub fn unfolding_from_json(v: &Value) -> Result<Unfolding> {
    let obj = v.as_object().ok_or_else(|| bad("unfolding must be an object"))?;
    let poly = polynomial_from_json(obj.get("poly").ok_or_else(|| bad("missing poly"))?)?;
    let u = Unfolding::from_polynomial(&poly)?;
    if let Some(b) = obj.get("base") {
        if polynomial_from_json(b)? != u.base {
            return Err(bad("base does not match the α = 0 restriction of poly"));
        }
    }
    Ok(u)
}

fn side_conditions_to_json(s: &SideConditions) -> Value {
    json!({
        "sampled": s.sampled,
        "realized": s.realized,
        "descriptors": s.descriptors.iter().map(|d| json!(d.to_string())).collect::<Vec<_>>(),
    })
}

fn component_to_json(c: &TransitionComponent) -> Value {
    json!({
        "kind": c.kind.label(),
        "trivial": c.trivial.map(|t| format!("{t:?}")),
        "generators": c.generators.iter().map(polynomial_to_json).collect::<Vec<_>>(),
        "side_conditions": side_conditions_to_json(&c.side),
    })
}

pub fn transition_set_to_json(t: &TransitionSet) -> Value {
    json!({
        "parameters": vars_to_json(&t.alpha_vars),
        "bifurcation": component_to_json(&t.bifurcation),
        "hysteresis": component_to_json(&t.hysteresis),
        "double_limit": component_to_json(&t.double_limit),
    })
}

fn region_to_json(r: &ParameterRegion) -> Value {
    json!({
        "id": r.id,
        "representative": r.representative.iter().map(rat_to_json).collect::<Vec<_>>(),
        "signs": r.signs,
        "cells": r.cells,
    })
}

pub fn regions_to_json(d: &RegionDecomposition) -> Value {
    json!({
        "parameters": vars_to_json(&d.alpha_vars),
        "cutting": d.cutting.iter().map(polynomial_to_json).collect::<Vec<_>>(),
        "regions": d.regions.iter().map(region_to_json).collect::<Vec<_>>(),
        "blocked_cells": d.blocked,
        "warnings": d.warnings,
    })
}

pub fn diagram_to_json(d: &BifurcationDiagram) -> Value {
    json!({
        "lambda": d.lambda,
        "branches": d.branches,
        "counts": d.counts,
        "signature": { "counts": d.signature.counts, "folds": d.signature.folds },
        "max_residual": d.max_residual,
    })
}

pub fn persistent_diagrams_to_json(p: &PersistentDiagrams) -> Value {
    json!({
        "lambda_range": [p.lambda_range.0, p.lambda_range.1],
        "per_region": p.per_region.iter()
            .map(|(id, d)| json!({ "region": id, "diagram": diagram_to_json(d) }))
            .collect::<Vec<_>>(),
        "shortlist": p.shortlist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{parse_germ, parse_unfolding};
    use crate::unfolding::unfold;
    use crate::{int, rat};
    use proptest::prelude::*;

    fn poly(src: &str) -> Polynomial {
        parse_germ(src).unwrap().to_polynomial(&VarList::xl()).unwrap()
    }

    #[test]
    fn polynomial_round_trip_exact() {
        let p = poly("7/12*x^4+lambda-2*x*lambda^3");
        let v = polynomial_to_json(&p);
        assert_eq!(polynomial_from_json(&v).unwrap(), p);
    }

    #[test]
    fn rationals_round_trip_and_stay_canonical() {
        for r in [int(0), int(-7), rat(22, 4), rat(-3, 9)] {
            let v = rat_to_json(&r);
            assert_eq!(rat_from_json(&v).unwrap(), r);
        }
        assert_eq!(rat_to_json(&rat(22, 4)), json!("11/2"));
    }

    #[test]
    fn staircase_round_trip() {
        let i = IntrinsicIdeal::new(vec![(5, 0), (1, 1)]);
        assert_eq!(staircase_from_json(&staircase_to_json(&i)).unwrap(), i);
        assert_eq!(staircase_to_json(&i), json!([[5, 0], [1, 1]]));
    }

    #[test]
    fn unfolding_round_trip() {
        let base = poly("x^4+lambda");
        let u = unfold(&base).unwrap();
        let v = unfolding_to_json(&u);
        let back = unfolding_from_json(&v).unwrap();
        assert_eq!(back.poly, u.poly);
        assert_eq!(back.directions, u.directions);
        assert_eq!(back.base, u.base);
    }

    #[test]
    fn documents_are_versioned_and_deterministic() {
        let p = poly("x^2+lambda");
        let mut body = Map::new();
        body.insert("value".into(), polynomial_to_json(&p));
        let d1 = to_string(&document("demo", body.clone()));
        let d2 = to_string(&document("demo", body));
        assert_eq!(d1, d2);
        assert!(d1.contains("\"schema\": 1"));
    }

    #[test]
    fn transition_document_serializes_parametric_family() {
        let g = parse_unfolding("x^3+lambda*x+alpha1")
            .unwrap()
            .to_polynomial(&VarList::unfolding(1))
            .unwrap();
        let u = Unfolding::from_polynomial(&g).unwrap();
        let t = crate::transition::transition_set(&u).unwrap();
        let v = transition_set_to_json(&t);
        let text = to_string(&v);
        assert!(text.contains("bifurcation"));
        assert!(text.contains("double_limit"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn polynomial_round_trip_random(raw in proptest::collection::vec(
            (0u32..5, 0u32..5, -40i64..40, 1i64..12), 0..8)
        ) {
            let vars = VarList::xl();
            let terms: Vec<Term> = raw.into_iter()
                .map(|(a, b, n, d)| Term { coef: rat(n, d), mono: Monomial(vec![a, b]) })
                .collect();
            let p = Polynomial::new(vars, terms);
            let v = polynomial_to_json(&p);
            prop_assert_eq!(polynomial_from_json(&v).unwrap(), p);
        }
    }
}
