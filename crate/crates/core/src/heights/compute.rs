//! End-to-end evaluation from a user model: normalise, precompute, realise points, pair,
//! and retry at higher working precision when the target is not reached.

use std::path::PathBuf;

use num_rational::BigRational;

use crate::cohomology::{frobenius_precision_loss, precompute_cached, PrecomputedData, WMode};
use crate::curve::{build_curve_rational, map_point, normalize_model, HyperellipticCurve, ModelMap, PointSpec};
use crate::error::{Error, Result};

use super::pairing::{height_pairing, HeightOptions};
use super::{Divisor, HeightResult};

/// A divisor term as supplied by the user: point and multiplicity.
pub type PointInput = (PointSpec, i64);

/// Everything needed to evaluate `h_p(D1, D2)` on a user model.
#[derive(Clone, Debug)]
pub struct HeightRequest {
    pub p: u64,
    /// `f_0, ..., f_d`, p-integral.
    pub f: Vec<BigRational>,
    /// Target absolute precision `N`.
    pub prec: i64,
    pub w_mode: WMode,
    pub d1: Vec<PointInput>,
    pub d2: Vec<PointInput>,
    /// Point sent to `∞-` when normalising; scanned for when absent.
    pub base_point: Option<PointSpec>,
    pub options: HeightOptions,
    /// Cache file or directory for precomputed data.
    pub cache: Option<PathBuf>,
}

const MAX_ATTEMPTS: usize = 4;

/// Precomputed data for the normal model of `user` at target `n`, and the map from `user`
/// (rebuilt at a precision fine enough for points) onto it.
pub fn prepare_model(
    user: &HyperellipticCurve,
    base: Option<&PointSpec>,
    n: i64,
    mode: WMode,
    cache: Option<&std::path::Path>,
) -> Result<(PrecomputedData, ModelMap)> {
    let p = user.prime();
    let (norm, _) = normalize_model(&user.at_precision(n + 10)?, base)?;
    let d = precompute_cached(&norm, n, mode, cache)?;
    let n_pts = d.n_work + frobenius_precision_loss(p, d.n_work) + 10;
    let (_, map) = normalize_model(&user.at_precision(n_pts)?, base)?;
    Ok((d, map))
}

fn realize(terms: &[PointInput], map: &ModelMap) -> Result<Divisor> {
    let n = map.source.precision();
    let mut d = Divisor::default();
    for (spec, k) in terms {
        let pt = spec.realize(&map.source, n)?;
        d.add_point(map_point(map, &pt)?, *k);
    }
    Ok(d)
}

/// `h_p(D1, D2)` to absolute precision `N`.
pub fn compute_height(req: &HeightRequest) -> Result<HeightResult> {
    if req.prec < 1 {
        return Err(Error::Invalid("precision must be positive".into()));
    }
    let user = build_curve_rational(req.p, &req.f, req.prec + 10)?;
    let mut n_try = req.prec;
    let mut best = None;
    for _ in 0..MAX_ATTEMPTS {
        let (d, map) = prepare_model(&user, req.base_point.as_ref(), n_try, req.w_mode, req.cache.as_deref())?;
        let d1 = realize(&req.d1, &map)?;
        let d2 = realize(&req.d2, &map)?;
        let r = height_pairing(&d, &d1, &d2, req.options)?;
        if r.precision >= req.prec {
            return Ok(r.truncated(req.prec));
        }
        n_try += req.prec - r.precision + 2;
        best = Some(r.precision);
    }
    Err(Error::precision(format!(
        "reached only O(p^{}) after {} attempts, asked for O(p^{})",
        best.unwrap_or(0),
        MAX_ATTEMPTS,
        req.prec
    )))
}
