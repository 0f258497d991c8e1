//! Coleman integrals of odd differentials: tiny integrals inside a residue disc and
//! the Frobenius linear system between discs.

use std::sync::Arc;

use crate::cohomology::{precompute, PrecomputedData};
use crate::curve::{
    classify_point, involution, local_expansion, map_point, normalize_model, teichmuller_point, weierstrass_point,
    CurvePoint, DiscClass, DiscKind, HyperellipticCurve, OddDifferential, PointSpec,
};
use crate::error::{Error, Result};
use crate::padic::{floor_log, Padic, PadicMatrix};

/// `∫_S^R ω_i` for `i = 0, ..., 2g`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisIntegrals {
    pub start: CurvePoint,
    pub end: CurvePoint,
    pub values: Vec<Padic>,
}

impl BasisIntegrals {
    pub fn precision(&self) -> i64 {
        self.values.iter().map(|v| v.precision()).min().unwrap_or(i64::MAX)
    }

    fn zip(&self, o: &BasisIntegrals, end: CurvePoint, sign: i64) -> BasisIntegrals {
        let values = self
            .values
            .iter()
            .zip(&o.values)
            .map(|(a, b)| if sign > 0 { a + b } else { a - b })
            .collect();
        BasisIntegrals { start: self.start.clone(), end, values }
    }

    fn scaled(&self, c: &Padic) -> Vec<Padic> {
        self.values.iter().map(|v| v * c).collect()
    }
}

/// Whether the basis is `ω_0, ..., ω_2g` or `η_0, ..., η_{2g-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Omega,
    Eta,
}

/// Center of the expansion used for tiny integrals in the disc of `pt`.
fn disc_center(curve: &HyperellipticCurve, pt: &CurvePoint, cls: &DiscClass) -> Result<CurvePoint> {
    Ok(match cls.kind {
        DiscKind::OrdinaryAffine => pt.clone(),
        DiscKind::Weierstrass => weierstrass_point(curve, pt)?,
        DiscKind::InfinitePlus => CurvePoint::InfPlus,
        DiscKind::InfiniteMinus => CurvePoint::InfMinus,
    })
}

/// Series length and precision cap for integrating to `target` digits with `|t| <= p^-vt`.
///
/// The dropped terms `c_j t^(j+1)/(j+1)` have valuation at least
/// `μ + (j+1) vt - floor(log_p(j+1))`, which increases with `j`.
fn truncation(p: u64, target: i64, mu: i64, vt: i64) -> (i64, i64) {
    let bound = |k: i64| mu + (k + 1) * vt - floor_log(p, (k + 1) as u64) as i64;
    let mut k = 1;
    while bound(k) < target {
        k += 1;
    }
    (k, bound(k))
}

fn parameter_valuation(ts: &[&Padic], prec: i64) -> i64 {
    ts.iter().filter(|t| !t.is_zero()).map(|t| t.ord()).min().unwrap_or(prec).max(1)
}

/// Tiny integrals `∫_P^Q w` for several differentials, with `P`, `Q` in one residue disc.
fn tiny_many(curve: &HyperellipticCurve, forms: &[OddDifferential], p_pt: &CurvePoint, q_pt: &CurvePoint, target: i64) -> Result<Vec<Padic>> {
    let cp = classify_point(curve, p_pt)?;
    let cq = classify_point(curve, q_pt)?;
    if cp != cq {
        return Err(Error::domain("tiny integrals need both endpoints in one residue disc"));
    }
    let p = curve.prime();
    if cp.is_infinite() && forms.iter().any(|w| !w.holomorphic_at_infinity(curve.genus())) {
        return Err(Error::domain("differential has a pole in the disc at infinity"));
    }
    if p_pt == q_pt {
        return Ok(forms.iter().map(|_| Padic::zero(p, target)).collect());
    }
    let center = disc_center(curve, p_pt, &cp)?;
    // a short expansion to read off μ and the parameters
    let probe = local_expansion(curve, &center, 2)?;
    let tp = probe.parameter(p_pt)?;
    let tq = probe.parameter(q_pt)?;
    let vt = parameter_valuation(&[&tp, &tq], target);
    let mut mu = 0i64;
    let mut k = 0;
    let mut cap = 0;
    // μ depends on the coefficients, which depend on k; two passes settle it
    for _ in 0..3 {
        let (k2, cap2) = truncation(p, target, mu, vt);
        k = k2;
        cap = cap2;
        let e = local_expansion(curve, &center, k + 1)?;
        let mut new_mu = 0;
        for w in forms {
            if let Some(v) = e.differential(w)?.min_coefficient_valuation() {
                new_mu = new_mu.min(v);
            }
        }
        if new_mu >= mu {
            break;
        }
        mu = new_mu;
    }
    let e = local_expansion(curve, &center, k + 1)?;
    forms
        .iter()
        .map(|w| {
            let s = e.differential(w)?.truncate(k + 1);
            let f = s.antiderivative()?;
            let v = f.evaluate(&tq)? - f.evaluate(&tp)?;
            Ok(v.with_precision(cap))
        })
        .collect()
}

/// `∫_P^Q w` for `P`, `Q` in the same residue disc.
///
/// Allowed in infinite discs only when `w` is holomorphic at infinity.
pub fn tiny_integral(curve: &HyperellipticCurve, w: &OddDifferential, p_pt: &CurvePoint, q_pt: &CurvePoint, target: i64) -> Result<Padic> {
    Ok(tiny_many(curve, std::slice::from_ref(w), p_pt, q_pt, target)?.remove(0))
}

/// `∫_P^Q ω_i` for `i = 0..=2g`, `P` and `Q` in one finite residue disc.
pub fn tiny_integrals_on_basis(curve: &HyperellipticCurve, p_pt: &CurvePoint, q_pt: &CurvePoint, target: i64) -> Result<BasisIntegrals> {
    let cls = classify_point(curve, p_pt)?;
    if cls.is_infinite() {
        return Err(Error::domain("ω_g, ..., ω_2g have poles in the discs at infinity"));
    }
    let p = curve.prime();
    let forms: Vec<OddDifferential> =
        (0..=2 * curve.genus()).map(|i| OddDifferential::omega(p, i, curve.precision())).collect();
    let values = tiny_many(curve, &forms, p_pt, q_pt, target)?;
    Ok(BasisIntegrals { start: p_pt.clone(), end: q_pt.clone(), values })
}

/// Frobenius-system integral between ordinary affine points in different discs.
fn frobenius_path(d: &PrecomputedData, a: &CurvePoint, b: &CurvePoint) -> Result<BasisIntegrals> {
    let curve = &d.curve;
    let g = curve.genus();
    let p = curve.prime();
    let target = d.n_work;
    let at = teichmuller_point(curve, a)?;
    let bt = teichmuller_point(curve, b)?;
    let t1 = tiny_integrals_on_basis(curve, a, &at, target)?;
    let t3 = tiny_integrals_on_basis(curve, &bt, b, target)?;
    let (xa, ya) = (at.x().expect("affine"), at.y().expect("affine"));
    let (xb, yb) = (bt.x().expect("affine"), bt.y().expect("affine"));
    let rhs = d
        .frobenius
        .h
        .iter()
        .map(|h| Ok(h.eval(xb, yb)? - h.eval(xa, ya)?))
        .collect::<Result<Vec<_>>>()?;
    let phi = &d.frobenius.phi;
    let prec = phi.min_precision();
    let sys = PadicMatrix::identity(p, 2 * g + 1, prec).sub(&phi.transpose());
    let mid = sys.solve_vector(&rhs)?;
    let values = (0..=2 * g).map(|i| &t1.values[i] + &mid[i] + &t3.values[i]).collect();
    Ok(BasisIntegrals { start: a.clone(), end: b.clone(), values })
}

/// `∫_S^R ω_i` for `i = 0..=2g`.
///
/// Endpoints in the same disc give tiny integrals. Otherwise Weierstrass-disc endpoints are
/// routed through the Weierstrass point `T` of their disc, using `∫_a^T ω = ½ ∫_a^ι(a) ω`,
/// and ordinary discs are joined through Teichmüller points and the Frobenius system.
pub fn coleman_integrals_on_basis(d: &PrecomputedData, s: &CurvePoint, r: &CurvePoint) -> Result<BasisIntegrals> {
    let curve = &d.curve;
    let cs = classify_point(curve, s)?;
    let cr = classify_point(curve, r)?;
    if cs.is_infinite() || cr.is_infinite() {
        return Err(Error::Condition(format!(
            "Coleman integral with an endpoint in a disc at infinity ({} to {})",
            s.label(),
            r.label()
        )));
    }
    let target = d.n_work;
    if cs == cr {
        return tiny_integrals_on_basis(curve, s, r, target);
    }
    let anchor = |pt: &CurvePoint, c: &DiscClass| -> Result<CurvePoint> {
        if c.is_weierstrass() {
            weierstrass_point(curve, pt)
        } else {
            Ok(pt.clone())
        }
    };
    let sa = anchor(s, &cs)?;
    let ra = anchor(r, &cr)?;
    let p = curve.prime();
    let half = Padic::from_i64(p, 2, target).inv()?;
    let mid: Vec<Padic> = match (cs.is_weierstrass(), cr.is_weierstrass()) {
        (true, true) => vec![Padic::zero(p, target); 2 * curve.genus() + 1],
        (false, true) => frobenius_path(d, &sa, &involution(curve, &sa))?.scaled(&half),
        (true, false) => frobenius_path(d, &ra, &involution(curve, &ra))?.scaled(&half.neg_ref()),
        (false, false) => frobenius_path(d, &sa, &ra)?.values,
    };
    let first = tiny_integrals_on_basis(curve, s, &sa, target)?;
    let last = tiny_integrals_on_basis(curve, &ra, r, target)?;
    let mid = BasisIntegrals { start: sa, end: ra.clone(), values: mid };
    Ok(first.zip(&mid, ra, 1).zip(&last, r.clone(), 1))
}

/// `∫_S^R Σ a_i b_i` for the given basis.
pub fn integrate_combination(d: &PrecomputedData, s: &CurvePoint, r: &CurvePoint, coeffs: &[Padic], basis: Basis) -> Result<Padic> {
    let ints = coleman_integrals_on_basis(d, s, r)?;
    Ok(combine(d, &ints, coeffs, basis))
}

/// Linear combination of precomputed basis integrals.
pub fn combine(d: &PrecomputedData, ints: &BasisIntegrals, coeffs: &[Padic], basis: Basis) -> Padic {
    let vals = match basis {
        Basis::Omega => ints.values.clone(),
        Basis::Eta => d.eta.eta_integrals(&ints.values),
    };
    let p = d.prime();
    let n = ints.precision().min(d.n_work);
    coeffs.iter().zip(&vals).fold(Padic::zero(p, n), |acc, (c, v)| acc + c * v)
}

/// `∫_S^R η_i` for `i = 0, ..., 2g-1`.
pub fn eta_integrals(d: &PrecomputedData, s: &CurvePoint, r: &CurvePoint) -> Result<Vec<Padic>> {
    Ok(d.eta.eta_integrals(&coleman_integrals_on_basis(d, s, r)?.values))
}

fn tau_key(pt: &CurvePoint) -> String {
    match pt {
        CurvePoint::Affine { x, y } => format!("{}|{}", x.to_canonical_string(), y.to_canonical_string()),
        other => other.label(),
    }
}

/// Precomputed data for the model `C'_P` on which `P` goes to `∞-`; cached per `P`.
pub fn tau_model(d: &PrecomputedData, p_pt: &CurvePoint) -> Result<(Arc<PrecomputedData>, crate::curve::ModelMap)> {
    let cls = classify_point(&d.curve, p_pt)?;
    let y = p_pt.y().ok_or_else(|| Error::domain("τ needs an affine point"))?;
    if cls.kind != DiscKind::OrdinaryAffine || y.valuation() != Some(0) {
        return Err(Error::domain("τ needs ord_p(y(P)) = 0"));
    }
    let (_, map) = normalize_model(&d.curve, Some(&PointSpec::from_point(p_pt)))?;
    let key = tau_key(p_pt);
    if let Some(hit) = d.tau_cache.lock().expect("cache lock").get(&key) {
        return Ok((hit.clone(), map));
    }
    let data = Arc::new(precompute(&map.target, d.target, d.w_mode)?);
    let data = d.tau_cache.lock().expect("cache lock").entry(key).or_insert(data).clone();
    Ok((data, map))
}

/// `∫_S^R y(P)/(x - x(P)) dx/y`, computed as `∫_{S'}^{R'} ω_g` on `C'_P`.
pub fn integrate_omega_prime(d: &PrecomputedData, p_pt: &CurvePoint, s: &CurvePoint, r: &CurvePoint) -> Result<Padic> {
    let curve = &d.curve;
    let dp = classify_point(curve, p_pt)?;
    let dip = classify_point(curve, &involution(curve, p_pt))?;
    for e in [s, r] {
        let c = classify_point(curve, e)?;
        if c == dp || c == dip {
            return Err(Error::Condition(format!(
                "{} lies in the disc of {} or its conjugate",
                e.label(),
                p_pt.label()
            )));
        }
    }
    let (dt, map) = tau_model(d, p_pt)?;
    let s2 = map_point(&map, s)?;
    let r2 = map_point(&map, r)?;
    let ints = coleman_integrals_on_basis(&dt, &s2, &r2)?;
    Ok(ints.values[curve.genus()].clone())
}
