//! Versioned JSON cache of precomputed data, keyed by a content hash.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::curve::HyperellipticCurve;
use crate::error::{Error, Result};
use crate::padic::{Padic, PadicMatrix};

use super::kedlaya::{FrobeniusPrimitive, MWFrobeniusData};
use super::precompute::{precompute, PrecomputedData, WMode};
use super::structure::EtaBasis;

pub const CACHE_VERSION: u64 = 1;

/// SHA-256 of the curve's defining data, `N`, `W` mode and format version.
pub fn cache_key(curve: &HyperellipticCurve, n: i64, mode: WMode) -> String {
    let desc = json!({
        "version": CACHE_VERSION,
        "curve": curve.descriptor(),
        "N": n,
        "w_mode": mode.as_str(),
    });
    hex::encode(Sha256::digest(desc.to_string().as_bytes()))
}

fn vec_json(v: &[Padic]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_canonical_string())).collect())
}

fn matrix_json(m: &PadicMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vec_json(r)).collect())
}

pub fn to_cache_json(d: &PrecomputedData) -> Value {
    let h: Vec<Value> = d
        .frobenius
        .h
        .iter()
        .map(|h| Value::Array(h.terms.iter().map(|(e, poly)| json!({"y": e, "x": vec_json(poly)})).collect()))
        .collect();
    json!({
        "version": CACHE_VERSION,
        "key": cache_key(&d.curve, d.target, d.w_mode),
        "curve": d.curve.descriptor(),
        "model": vec_json(d.curve.coefficients()),
        "N": d.target,
        "w_mode": d.w_mode.as_str(),
        "n_work": d.n_work,
        "Phi": matrix_json(&d.frobenius.phi),
        "phi_precision": d.frobenius.precision,
        "h": h,
        "c": vec_json(&d.eta.c),
        "Frob": matrix_json(&d.frob),
        "M": matrix_json(&d.cup),
        "W": matrix_json(&d.w),
        "m": d.m,
        "m1": d.m1,
        "m2": d.m2,
    })
}

fn bad(msg: &str) -> Error {
    Error::Invalid(format!("malformed cache file: {}", msg))
}

fn parse_vec(p: u64, v: &Value) -> Result<Vec<Padic>> {
    v.as_array()
        .ok_or_else(|| bad("expected an array"))?
        .iter()
        .map(|s| Padic::parse_canonical(p, s.as_str().ok_or_else(|| bad("expected a string"))?))
        .collect()
}

fn parse_matrix(p: u64, v: &Value) -> Result<PadicMatrix> {
    let rows = v.as_array().ok_or_else(|| bad("expected a matrix"))?;
    Ok(PadicMatrix::from_rows(p, rows.iter().map(|r| parse_vec(p, r)).collect::<Result<_>>()?))
}

fn get<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| bad(&format!("missing field '{}'", k)))
}

fn get_i64(v: &Value, k: &str) -> Result<i64> {
    get(v, k)?.as_i64().ok_or_else(|| bad(&format!("field '{}' must be an integer", k)))
}

/// Rebuilds precomputed data from a cache record for `curve`; `None` if the record is for other inputs.
pub fn from_cache_json(v: &Value, curve: &HyperellipticCurve, n: i64, mode: WMode) -> Result<Option<PrecomputedData>> {
    if v.get("version").and_then(Value::as_u64) != Some(CACHE_VERSION) {
        return Ok(None);
    }
    if v.get("key").and_then(Value::as_str) != Some(cache_key(curve, n, mode).as_str()) {
        return Ok(None);
    }
    let p = curve.prime();
    let n_work = get_i64(v, "n_work")?;
    let phi = parse_matrix(p, get(v, "Phi")?)?;
    let precision = get_i64(v, "phi_precision")?;
    let h = get(v, "h")?
        .as_array()
        .ok_or_else(|| bad("h must be an array"))?
        .iter()
        .map(|hi| {
            let terms = hi
                .as_array()
                .ok_or_else(|| bad("h entry must be an array"))?
                .iter()
                .map(|t| Ok((get_i64(t, "y")?, parse_vec(p, get(t, "x")?)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(FrobeniusPrimitive { terms })
        })
        .collect::<Result<Vec<_>>>()?;
    let c = parse_vec(p, get(v, "c")?)?;
    let cup = parse_matrix(p, get(v, "M")?)?;
    let w = parse_matrix(p, get(v, "W")?)?;
    let model = parse_vec(p, get(v, "model")?)?;
    let curve = curve.at_precision(model.iter().map(|c| c.precision()).min().unwrap_or(n_work))?;
    let eta = EtaBasis { genus: curve.genus(), c };
    let fr = MWFrobeniusData { phi, h, precision };
    PrecomputedData::assemble(curve, n, n_work, mode, fr, eta, cup, Some(w)).map(Some)
}

/// Writes the cache record atomically: temporary file, then rename.
pub fn save_cache(d: &PrecomputedData, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&to_cache_json(d)).expect("serialisable") + "\n";
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Reads a cache file; `Ok(None)` when the file does not exist or is for other inputs.
pub fn load_cache(path: &Path, curve: &HyperellipticCurve, n: i64, mode: WMode) -> Result<Option<PrecomputedData>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    from_cache_json(&v, curve, n, mode)
}

fn resolve(location: &Path, curve: &HyperellipticCurve, n: i64, mode: WMode) -> PathBuf {
    if location.is_dir() {
        location.join(format!("{}.json", cache_key(curve, n, mode)))
    } else {
        location.to_path_buf()
    }
}

/// [`precompute`] backed by a cache file, or a directory of files named by their key.
pub fn precompute_cached(curve: &HyperellipticCurve, n: i64, mode: WMode, location: Option<&Path>) -> Result<PrecomputedData> {
    let Some(loc) = location else {
        return precompute(curve, n, mode);
    };
    let path = resolve(loc, curve, n, mode);
    if let Some(d) = load_cache(&path, curve, n, mode)? {
        return Ok(d);
    }
    let d = precompute(curve, n, mode)?;
    save_cache(&d, &path)?;
    Ok(d)
}
