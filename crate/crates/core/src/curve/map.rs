use crate::error::{Error, Result};
use crate::padic::{is_square_mod_p, sqrt_mod_p, Padic};

use super::model::{HyperellipticCurve, Recipe};
use super::point::{Coordinate, CurvePoint, PointSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    Identity,
    /// `x' = 1/(x - a)`, `y' = -y / (b (x - a)^(g+1))`.
    Tau { a: Padic, b: Padic },
}

/// Isomorphism from a user model onto a monic even-degree model.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelMap {
    pub kind: MapKind,
    pub source: HyperellipticCurve,
    pub target: HyperellipticCurve,
}

/// First `x̄ = 0, 1, ...` with `f(x̄)` a nonzero square mod p, lifted with the smaller root.
pub fn scan_base_point(curve: &HyperellipticCurve) -> Result<PointSpec> {
    let p = curve.prime();
    for xb in 0..p {
        let v = curve.eval(&Padic::from_i64(p, xb as i64, curve.precision().max(1)));
        let Some(r) = v.residue() else { continue };
        if is_square_mod_p(r, p) {
            return Ok(PointSpec::Affine {
                x: Coordinate::integer(xb as i64),
                y: None,
                y_residue: sqrt_mod_p(r, p),
            });
        }
    }
    Err(Error::NoUnitYPoint)
}

/// Monic even-degree model of `curve`.
///
/// Already normal curves map by the identity unless a base point is given; otherwise
/// the base point `P0` (or the first one found by [`scan_base_point`]) is sent to `∞-`.
pub fn normalize_model(curve: &HyperellipticCurve, base: Option<&PointSpec>) -> Result<(HyperellipticCurve, ModelMap)> {
    if base.is_none() && curve.is_normal() {
        let map = ModelMap { kind: MapKind::Identity, source: curve.clone(), target: curve.clone() };
        return Ok((curve.clone(), map));
    }
    let base = match base {
        Some(b) => b.clone(),
        None => scan_base_point(curve)?,
    };
    let pt = base.realize(curve, curve.precision())?;
    let CurvePoint::Affine { x: a, y: b } = pt else {
        return Err(Error::domain("base point must be affine"));
    };
    if b.valuation() != Some(0) {
        return Err(Error::domain("base point needs ord_p(y) = 0"));
    }
    let recipe = Recipe::Tau { source: Box::new(curve.recipe().clone()), base };
    let target = HyperellipticCurve::from_recipe(curve.prime(), curve.genus(), recipe, curve.precision())?;
    target.assert_normal_form()?;
    let map = ModelMap { kind: MapKind::Tau { a, b }, source: curve.clone(), target: target.clone() };
    Ok((target, map))
}

/// Image of a source point on the target model.
pub fn map_point(m: &ModelMap, pt: &CurvePoint) -> Result<CurvePoint> {
    m.source.check_point(pt)?;
    let (a, b) = match &m.kind {
        MapKind::Identity => return Ok(pt.clone()),
        MapKind::Tau { a, b } => (a, b),
    };
    let p = m.source.prime();
    let g = m.source.genus() as i64;
    let n = a.precision().min(b.precision());
    let image = match pt {
        CurvePoint::Affine { x, y } => {
            let d = x - a;
            if d.is_zero() {
                if y.agrees_with(b) {
                    CurvePoint::InfMinus
                } else if y.agrees_with(&b.neg_ref()) {
                    CurvePoint::InfPlus
                } else {
                    return Err(Error::domain("point is not on the curve"));
                }
            } else {
                let xi = d.inv()?;
                let yi = -(y.div(&(b * d.pow(g as u64 + 1)))?);
                CurvePoint::Affine { x: xi, y: yi }
            }
        }
        CurvePoint::InfPlus | CurvePoint::InfMinus => {
            let s = m.source.infinity_scale()?.div(b)?;
            let y = if *pt == CurvePoint::InfPlus { s.neg_ref() } else { s };
            CurvePoint::Affine { x: Padic::zero(p, n), y }
        }
        CurvePoint::Infinity => CurvePoint::Affine { x: Padic::zero(p, n), y: Padic::zero(p, n) },
    };
    m.target.check_point(&image)?;
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::build_curve;

    fn c2() -> HyperellipticCurve {
        build_curve(7, &[576, -820, 273, -30, 1, 1], 14).unwrap()
    }

    #[test]
    fn tau_at_one_one() {
        let c = c2();
        let base = PointSpec::integers(1, 1);
        let (t, m) = normalize_model(&c, Some(&base)).unwrap();
        assert!(t.is_normal());
        let p = base.realize(&c, 14).unwrap();
        assert_eq!(map_point(&m, &p).unwrap(), CurvePoint::InfMinus);
        let ip = CurvePoint::Affine { x: p.x().unwrap().clone(), y: -p.y().unwrap().clone() };
        assert_eq!(map_point(&m, &ip).unwrap(), CurvePoint::InfPlus);
        let q = PointSpec::integers(4, 32).realize(&c, 14).unwrap();
        assert!(map_point(&m, &q).unwrap().is_affine());
        let inf = map_point(&m, &CurvePoint::Infinity).unwrap();
        assert!(inf.x().unwrap().is_zero() && inf.y().unwrap().is_zero());
    }

    #[test]
    fn scan_finds_zero() {
        let c = c2();
        let (t, m) = normalize_model(&c, None).unwrap();
        assert!(t.is_normal());
        let MapKind::Tau { a, b } = &m.kind else { panic!() };
        assert!(a.is_zero());
        assert!((b - Padic::from_i64(7, 24, 14)).is_zero());
    }

    #[test]
    fn bad_base_point() {
        // y = 0 at x = 1 on y^2 = x^5 - 1
        let c = build_curve(7, &[-1, 0, 0, 0, 0, 1], 10).unwrap();
        assert!(normalize_model(&c, Some(&PointSpec::integers(1, 0))).is_err());
    }
}
