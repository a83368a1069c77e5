//! JSON input/output: matroid and submodular-function descriptions,
//! triangulation files with certificates and metadata, and verification
//! reports. Rationals travel as "p/q" strings.

use crate::exact_linalg::{Int, Rat};
use crate::genperm::SubmodularFunction;
use crate::matroid::Matroid;
use crate::polytope::{AffineFunctional, PointConfiguration};
use crate::subdivision::{Cell, RegularityCertificate, Subdivision, Triangulation};
use crate::triangulate::{BuiltTriangulation, TriangulationMeta};
use crate::verifier::{FlagStatus, RegularityStatus, VerificationReport};
use crate::{Error, Result};
use num::{One, Zero};
use serde_json::{json, Value};
use std::str::FromStr;

fn err(msg: impl Into<String>) -> Error {
    Error::Io(msg.into())
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    let parse_int = |x: &str| Int::from_str(x.trim()).map_err(|e| err(format!("bad rational '{s}': {e}")));
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(err(format!("zero denominator in '{s}'")));
            }
            Ok(Rat::new(parse_int(p)?, q))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

fn elements_to_mask(list: &Value, n: usize) -> Result<u32> {
    let arr = list.as_array().ok_or_else(|| err("basis must be an array"))?;
    let mut mask = 0u32;
    for e in arr {
        let i = e.as_u64().ok_or_else(|| err("element must be an integer"))? as usize;
        if i < 1 || i > n {
            return Err(err(format!("element {i} out of range 1..={n}")));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

/// Matroid from its JSON description: an explicit 1-indexed basis list or
/// one of the constructor forms (uniform, graphic, direct_sum).
pub fn matroid_from_value(v: &Value) -> Result<Matroid> {
    let obj = v.as_object().ok_or_else(|| err("matroid must be an object"))?;
    if let Some(u) = obj.get("uniform") {
        let r = u["r"].as_u64().ok_or_else(|| err("uniform.r"))? as usize;
        let n = u["n"].as_u64().ok_or_else(|| err("uniform.n"))? as usize;
        if n == 0 || n > crate::matroid::MAX_GROUND_SET || r > n {
            return Err(err(format!("uniform({r},{n}) out of range")));
        }
        return Ok(Matroid::uniform(r, n));
    }
    if let Some(g) = obj.get("graphic") {
        let vertices = g["vertices"].as_u64().ok_or_else(|| err("graphic.vertices"))? as usize;
        let edges_v = g["edges"].as_array().ok_or_else(|| err("graphic.edges"))?;
        let mut edges = vec![];
        for e in edges_v {
            let pair = e.as_array().filter(|a| a.len() == 2).ok_or_else(|| err("edge"))?;
            let a = pair[0].as_u64().ok_or_else(|| err("edge endpoint"))? as usize;
            let b = pair[1].as_u64().ok_or_else(|| err("edge endpoint"))? as usize;
            if a < 1 || a > vertices || b < 1 || b > vertices {
                return Err(err("edge endpoint out of range"));
            }
            edges.push((a - 1, b - 1));
        }
        if edges.len() > crate::matroid::MAX_GROUND_SET {
            return Err(err("too many edges"));
        }
        return Ok(Matroid::graphic(vertices, &edges));
    }
    if let Some(ds) = obj.get("direct_sum") {
        let parts = ds.as_array().filter(|a| a.len() == 2).ok_or_else(|| err("direct_sum"))?;
        let a = matroid_from_value(&parts[0])?;
        let b = matroid_from_value(&parts[1])?;
        if a.n() + b.n() > crate::matroid::MAX_GROUND_SET {
            return Err(err("direct sum ground set too large"));
        }
        return Ok(Matroid::direct_sum(&a, &b));
    }
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| err("matroid needs \"n\""))? as usize;
    if n == 0 || n > crate::matroid::MAX_GROUND_SET {
        return Err(err(format!("n={n} out of range")));
    }
    let bases_v = obj
        .get("bases")
        .and_then(Value::as_array)
        .ok_or_else(|| err("matroid needs \"bases\""))?;
    let mut bases = vec![];
    for b in bases_v {
        bases.push(elements_to_mask(b, n)?);
    }
    Matroid::from_bases(n, bases)
}

fn subset_key_to_mask(key: &str, n: usize) -> Result<u32> {
    let mut mask = 0u32;
    for c in key.chars() {
        let d = c
            .to_digit(36)
            .filter(|&d| d >= 1 && d as usize <= n)
            .ok_or_else(|| err(format!("bad subset key '{key}'")))?;
        mask |= 1 << (d - 1);
    }
    Ok(mask)
}

/// Submodular function from `{"n": ..., "values": {...}}` (subset keys as
/// sorted digit strings, base 36 beyond 9) or `{"matroid_rank": <matroid>}`.
pub fn submodular_from_value(v: &Value) -> Result<SubmodularFunction> {
    let obj = v.as_object().ok_or_else(|| err("submodular must be an object"))?;
    if let Some(m) = obj.get("matroid_rank") {
        return Ok(SubmodularFunction::from_matroid_rank(&matroid_from_value(m)?));
    }
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| err("submodular needs \"n\""))? as usize;
    if n > crate::genperm::MAX_SUBMODULAR_GROUND {
        return Err(err(format!("n={n} out of range")));
    }
    let values = obj
        .get("values")
        .and_then(Value::as_object)
        .ok_or_else(|| err("submodular needs \"values\""))?;
    let mut table = vec![None; 1 << n];
    for (k, val) in values {
        let mask = subset_key_to_mask(k, n)?;
        let x = val.as_i64().ok_or_else(|| err("values must be integers"))?;
        table[mask as usize] = Some(x);
    }
    let table: Option<Vec<i64>> = table.into_iter().collect();
    let table = table.ok_or_else(|| err("values must cover every subset"))?;
    SubmodularFunction::new(n, table)
}

pub enum InputKind {
    Matroid(Matroid),
    Submodular(SubmodularFunction),
}

/// Parse a CLI input file, dispatching on shape.
pub fn parse_input(text: &str) -> Result<InputKind> {
    let v: Value = serde_json::from_str(text).map_err(|e| err(format!("JSON parse: {e}")))?;
    let obj = v.as_object().ok_or_else(|| err("input must be an object"))?;
    if obj.contains_key("values") || obj.contains_key("matroid_rank") {
        Ok(InputKind::Submodular(submodular_from_value(&v)?))
    } else {
        Ok(InputKind::Matroid(matroid_from_value(&v)?))
    }
}

fn functional_to_value(w: &AffineFunctional) -> Value {
    json!({
        "coeffs": w.coeffs.iter().map(rat_to_string).collect::<Vec<_>>(),
        "constant": rat_to_string(&w.constant),
    })
}

fn functional_from_value(v: &Value) -> Result<AffineFunctional> {
    let coeffs = v["coeffs"]
        .as_array()
        .ok_or_else(|| err("witness coeffs"))?
        .iter()
        .map(|c| rat_from_str(c.as_str().ok_or_else(|| err("witness coeff"))?))
        .collect::<Result<Vec<_>>>()?;
    let constant = rat_from_str(v["constant"].as_str().ok_or_else(|| err("witness constant"))?)?;
    Ok(AffineFunctional { coeffs, constant })
}

pub fn triangulation_to_value(b: &BuiltTriangulation) -> Value {
    let t = &b.tri;
    let mut out = json!({
        "points": t.sub.base.points,
        "cells": t.cell_sets(),
        "metadata": {
            "seed": b.meta.seed,
            "t_sequence": b.meta.t_sequence,
            "split_order": b.meta.split_order,
        },
    });
    if let Some(c) = &t.certificate {
        out["certificate"] = json!({
            "levels": c
                .levels
                .iter()
                .map(|l| l.iter().map(rat_to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "epsilon": rat_to_string(&c.epsilon),
            "heights": c.flat_heights.iter().map(rat_to_string).collect::<Vec<_>>(),
            "witnesses": c.flat_witnesses.iter().map(functional_to_value).collect::<Vec<_>>(),
        });
    }
    out
}

pub fn triangulation_from_value(v: &Value) -> Result<BuiltTriangulation> {
    let points: Vec<Vec<i64>> =
        serde_json::from_value(v["points"].clone()).map_err(|e| err(format!("points: {e}")))?;
    if points.is_empty() {
        return Err(err("empty point list"));
    }
    let n = points[0].len();
    if points.iter().any(|p| p.len() != n) {
        return Err(err("inconsistent point dimensions"));
    }
    let cells: Vec<Vec<usize>> =
        serde_json::from_value(v["cells"].clone()).map_err(|e| err(format!("cells: {e}")))?;
    let npts = points.len();
    for c in &cells {
        if c.is_empty() || c.iter().any(|&i| i >= npts) {
            return Err(err("cell index out of range"));
        }
        let mut s = c.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != c.len() {
            return Err(err("cell with duplicate vertex"));
        }
    }
    {
        let mut sorted = points.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(err("duplicate points"));
        }
    }
    let base = PointConfiguration::new(n, points);
    let certificate = match v.get("certificate") {
        None | Some(Value::Null) => None,
        Some(c) => {
            let levels = c["levels"]
                .as_array()
                .ok_or_else(|| err("certificate levels"))?
                .iter()
                .map(|l| {
                    l.as_array()
                        .ok_or_else(|| err("level"))?
                        .iter()
                        .map(|x| rat_from_str(x.as_str().ok_or_else(|| err("height"))?))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let epsilon = rat_from_str(c["epsilon"].as_str().ok_or_else(|| err("epsilon"))?)?;
            let flat_heights = c["heights"]
                .as_array()
                .ok_or_else(|| err("heights"))?
                .iter()
                .map(|x| rat_from_str(x.as_str().ok_or_else(|| err("height"))?))
                .collect::<Result<Vec<_>>>()?;
            let flat_witnesses = c["witnesses"]
                .as_array()
                .ok_or_else(|| err("witnesses"))?
                .iter()
                .map(functional_from_value)
                .collect::<Result<Vec<_>>>()?;
            Some(RegularityCertificate {
                levels,
                epsilon,
                flat_heights,
                flat_witnesses,
            })
        }
    };
    let meta = match v.get("metadata") {
        Some(m) => TriangulationMeta {
            seed: m["seed"].as_u64().unwrap_or(0),
            t_sequence: serde_json::from_value(m["t_sequence"].clone()).unwrap_or_default(),
            split_order: serde_json::from_value(m["split_order"].clone()).unwrap_or_default(),
        },
        None => TriangulationMeta {
            seed: 0,
            t_sequence: vec![],
            split_order: vec![],
        },
    };
    let mut sorted_cells: Vec<Vec<usize>> = cells
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    sorted_cells.sort();
    Ok(BuiltTriangulation {
        tri: Triangulation {
            sub: Subdivision {
                base,
                cells: sorted_cells
                    .into_iter()
                    .map(|points| Cell {
                        points,
                        witnesses: vec![],
                    })
                    .collect(),
            },
            certificate,
        },
        meta,
    })
}

pub fn report_to_value(r: &VerificationReport) -> Value {
    json!({
        "unimodular_all": r.unimodular_all,
        "covers": r.covers,
        "face_to_face": r.face_to_face,
        "regular_certified": match r.regularity {
            RegularityStatus::Certified => "certified",
            RegularityStatus::Failed => "failed",
            RegularityStatus::Unverifiable => "unverifiable",
        },
        "cells": r.cells,
        "volume": r.volume.to_string(),
        "f_vector": r.f_vector,
        "h_vector": r.h_vector,
        "flag_status": match &r.flag_status {
            FlagStatus::Flag => json!("flag"),
            FlagStatus::NotFlag(w) => json!({"not_flag": w}),
            FlagStatus::NotComputed => json!("not_computed"),
        },
        "failures": r.failures,
    })
}
