//! JSON request parsing.
//!
//! ```json
//! {
//!   "curve": {"p": 7, "f": [576, -820, 273, -30, 1, 1], "prec": 10},
//!   "w_mode": "unit-root",
//!   "base_point": {"x": "1", "y": "1"},
//!   "D1": [[{"x": "1", "y": "1"}, 1], [{"x": "4", "y": "32"}, -1]],
//!   "D2": [{"point": {"x": "9", "y": "243"}, "mult": 1}, {"point": {"x": "16", "y": "1024"}, "mult": -1}],
//!   "from": "inf-", "to": {"x": "1", "y": "1"}
//! }
//! ```
//!
//! Coordinates are integers, rationals such as `"3/5"`, or p-adic strings
//! `"5*7 + O(7^10)"`. A point may omit `y`; it is then lifted from `y_residue`.

use std::str::FromStr;

use num_rational::BigRational;
use padic_heights::cohomology::WMode;
use padic_heights::curve::{Coordinate, PointSpec};
use padic_heights::heights::PointInput;
use padic_heights::padic::Padic;
use padic_heights::{Error, Result};
use serde_json::Value;

fn bad(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// Curve, precision and divisors after merging the request file with command-line flags.
#[derive(Clone, Debug)]
pub struct Request {
    pub p: u64,
    pub f: Vec<BigRational>,
    pub prec: i64,
    pub w_mode: WMode,
    pub base_point: Option<PointSpec>,
    pub d1: Vec<PointInput>,
    pub d2: Vec<PointInput>,
    pub from: Option<PointSpec>,
    pub to: Option<PointSpec>,
}

/// Values given on the command line take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub p: Option<u64>,
    pub prec: Option<i64>,
    pub w_mode: Option<WMode>,
}

fn rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| bad(format!("coefficient {} is not an integer", n))),
        Value::String(s) => BigRational::from_str(s.trim()).map_err(|_| bad(format!("cannot parse rational '{}'", s))),
        _ => Err(bad("expected a number or a string")),
    }
}

fn coordinate(p: u64, v: &Value) -> Result<Coordinate> {
    if let Value::String(s) = v {
        if s.contains("O(") {
            return Ok(Coordinate::Padic(Padic::parse_canonical(p, s)?));
        }
    }
    if v.is_object() {
        return Ok(Coordinate::Padic(Padic::from_json(p, v)?));
    }
    rational(v).map(Coordinate::Rational)
}

pub fn point(p: u64, v: &Value) -> Result<PointSpec> {
    if let Some(s) = v.as_str() {
        return match s {
            "inf+" => Ok(PointSpec::InfPlus),
            "inf-" => Ok(PointSpec::InfMinus),
            "inf" => Ok(PointSpec::Infinity),
            _ => Err(bad(format!("unknown point '{}'", s))),
        };
    }
    let x = v.get("x").ok_or_else(|| bad("point needs \"x\" or one of \"inf+\", \"inf-\", \"inf\""))?;
    let y = match v.get("y") {
        None | Some(Value::Null) => None,
        Some(y) => Some(coordinate(p, y)?),
    };
    let y_residue = match v.get("y_residue") {
        None | Some(Value::Null) => None,
        Some(r) => Some(r.as_u64().ok_or_else(|| bad("y_residue must be a non-negative integer"))?),
    };
    Ok(PointSpec::Affine { x: coordinate(p, x)?, y, y_residue })
}

fn divisor(p: u64, v: &Value) -> Result<Vec<PointInput>> {
    let items = v.as_array().ok_or_else(|| bad("a divisor is a list of [point, multiplicity]"))?;
    items
        .iter()
        .map(|it| {
            let (pt, m) = match it {
                Value::Array(a) if a.len() == 2 => (&a[0], &a[1]),
                Value::Object(_) => (
                    it.get("point").ok_or_else(|| bad("divisor term needs \"point\""))?,
                    it.get("mult").ok_or_else(|| bad("divisor term needs \"mult\""))?,
                ),
                _ => return Err(bad("divisor term must be [point, multiplicity] or {\"point\", \"mult\"}")),
            };
            let m = m.as_i64().ok_or_else(|| bad("multiplicity must be an integer"))?;
            Ok((point(p, pt)?, m))
        })
        .collect()
}

impl Request {
    pub fn parse(text: &str, over: &Overrides) -> Result<Request> {
        let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {}", e)))?;
        let curve = v.get("curve").ok_or_else(|| bad("missing \"curve\""))?;
        let p = match over.p {
            Some(p) => p,
            None => curve.get("p").and_then(Value::as_u64).ok_or_else(|| bad("curve needs an integer \"p\""))?,
        };
        let f = curve
            .get("f")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("curve needs a coefficient list \"f\""))?
            .iter()
            .map(rational)
            .collect::<Result<Vec<_>>>()?;
        let prec = match over.prec {
            Some(n) => n,
            None => curve.get("prec").and_then(Value::as_i64).ok_or_else(|| bad("missing precision: set curve.prec or --prec"))?,
        };
        let w_mode = match (over.w_mode, v.get("w_mode").and_then(Value::as_str)) {
            (Some(m), _) => m,
            (None, Some(s)) => s.parse()?,
            (None, None) => WMode::UnitRoot,
        };
        let opt_point = |k: &str| v.get(k).filter(|x| !x.is_null()).map(|x| point(p, x)).transpose();
        let opt_div = |k: &str| v.get(k).map(|x| divisor(p, x)).transpose().map(Option::unwrap_or_default);
        Ok(Request {
            p,
            f,
            prec,
            w_mode,
            base_point: opt_point("base_point")?,
            d1: opt_div("D1")?,
            d2: opt_div("D2")?,
            from: opt_point("from")?,
            to: opt_point("to")?,
        })
    }
}
