use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{hensel_sqrt, teichmuller, Padic};

use super::model::HyperellipticCurve;

/// Point of `C(Q_p)`, including the points at infinity.
///
/// `InfPlus`/`InfMinus` exist on even-degree models, where `y/x^(g+1)` tends to
/// `+sqrt(lc)` resp. `-sqrt(lc)`; `Infinity` is the single point of an odd-degree model.
#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint {
    Affine { x: Padic, y: Padic },
    InfPlus,
    InfMinus,
    Infinity,
}

impl CurvePoint {
    pub fn affine(x: Padic, y: Padic) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn x(&self) -> Option<&Padic> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn y(&self) -> Option<&Padic> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            _ => None,
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, CurvePoint::Affine { .. })
    }

    /// Minimum precision of the coordinates; `i64::MAX` for points at infinity.
    pub fn precision(&self) -> i64 {
        match self {
            CurvePoint::Affine { x, y } => x.precision().min(y.precision()),
            _ => i64::MAX,
        }
    }

    pub fn label(&self) -> String {
        match self {
            CurvePoint::Affine { x, y } => format!("({}, {})", x, y),
            CurvePoint::InfPlus => "inf+".into(),
            CurvePoint::InfMinus => "inf-".into(),
            CurvePoint::Infinity => "inf".into(),
        }
    }

    /// Whether the two points agree to the available precision.
    pub fn agrees_with(&self, o: &CurvePoint) -> bool {
        match (self, o) {
            (CurvePoint::Affine { x, y }, CurvePoint::Affine { x: x2, y: y2 }) => x.agrees_with(x2) && y.agrees_with(y2),
            (a, b) => a == b,
        }
    }
}

/// A coordinate given exactly or as a p-adic number of finite precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Coordinate {
    Rational(BigRational),
    Padic(Padic),
}

impl Coordinate {
    pub fn integer(n: i64) -> Self {
        Coordinate::Rational(BigRational::from_integer(n.into()))
    }

    pub fn realize(&self, p: u64, n: i64) -> Padic {
        match self {
            Coordinate::Rational(r) => Padic::from_rational(p, r, n),
            Coordinate::Padic(x) => x.with_precision(n),
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Coordinate::Rational(r) if r.denom().is_one() => r.numer().to_string(),
            Coordinate::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Coordinate::Padic(x) => x.to_canonical_string(),
        }
    }
}

/// A point description that can be realised at any working precision.
///
/// An affine point without `y` is lifted by Hensel's lemma, with the unit part of
/// `y` congruent to `y_residue` (default: the smaller square root).
#[derive(Clone, Debug, PartialEq)]
pub enum PointSpec {
    Affine { x: Coordinate, y: Option<Coordinate>, y_residue: Option<u64> },
    InfPlus,
    InfMinus,
    Infinity,
}

impl PointSpec {
    pub fn integers(x: i64, y: i64) -> Self {
        PointSpec::Affine { x: Coordinate::integer(x), y: Some(Coordinate::integer(y)), y_residue: None }
    }

    pub fn from_point(pt: &CurvePoint) -> Self {
        match pt {
            CurvePoint::Affine { x, y } => PointSpec::Affine {
                x: Coordinate::Padic(x.clone()),
                y: Some(Coordinate::Padic(y.clone())),
                y_residue: None,
            },
            CurvePoint::InfPlus => PointSpec::InfPlus,
            CurvePoint::InfMinus => PointSpec::InfMinus,
            CurvePoint::Infinity => PointSpec::Infinity,
        }
    }

    /// The point on `curve` with coordinates at precision `n`; fails if it is not on the curve.
    pub fn realize(&self, curve: &HyperellipticCurve, n: i64) -> Result<CurvePoint> {
        let p = curve.prime();
        let pt = match self {
            PointSpec::Affine { x, y, y_residue } => {
                let x = x.realize(p, n);
                let y = match y {
                    Some(y) => y.realize(p, n),
                    None => {
                        let fx = curve.eval(&x);
                        hensel_sqrt(&fx, *y_residue).map_err(|e| match e {
                            Error::NoSquareRoot => Error::domain("f(x) is not a square in Q_p"),
                            e => e,
                        })?
                    }
                };
                CurvePoint::Affine { x, y }
            }
            PointSpec::InfPlus => CurvePoint::InfPlus,
            PointSpec::InfMinus => CurvePoint::InfMinus,
            PointSpec::Infinity => CurvePoint::Infinity,
        };
        curve.check_point(&pt)?;
        Ok(pt)
    }

    pub fn descriptor(&self) -> Value {
        match self {
            PointSpec::Affine { x, y, y_residue } => json!({
                "x": x.descriptor(),
                "y": y.as_ref().map(|c| c.descriptor()),
                "y_residue": y_residue,
            }),
            PointSpec::InfPlus => json!("inf+"),
            PointSpec::InfMinus => json!("inf-"),
            PointSpec::Infinity => json!("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscKind {
    OrdinaryAffine,
    Weierstrass,
    InfinitePlus,
    InfiniteMinus,
}

/// Residue disc of a point: its kind and the reduction `(x̄, ȳ)` when finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiscClass {
    pub kind: DiscKind,
    pub xbar: Option<u64>,
    pub ybar: Option<u64>,
}

impl DiscClass {
    pub fn is_infinite(&self) -> bool {
        matches!(self.kind, DiscKind::InfinitePlus | DiscKind::InfiniteMinus)
    }

    pub fn is_weierstrass(&self) -> bool {
        self.kind == DiscKind::Weierstrass
    }
}

fn residue_of(x: &Padic) -> Result<u64> {
    x.residue().ok_or_else(|| Error::precision("coordinate known to fewer than one digit"))
}

pub fn classify_point(curve: &HyperellipticCurve, pt: &CurvePoint) -> Result<DiscClass> {
    let inf = |kind| DiscClass { kind, xbar: None, ybar: None };
    match pt {
        CurvePoint::InfPlus => Ok(inf(DiscKind::InfinitePlus)),
        CurvePoint::InfMinus => Ok(inf(DiscKind::InfiniteMinus)),
        CurvePoint::Infinity => Ok(inf(DiscKind::Weierstrass)),
        CurvePoint::Affine { x, y } => {
            if !x.is_zero() && x.ord() < 0 {
                if curve.is_odd_degree() {
                    return Ok(inf(DiscKind::Weierstrass));
                }
                let g = curve.genus() as i64;
                let w = y * x.powi(-(g + 1))?;
                let s = residue_of(&curve.infinity_scale()?)?;
                let r = residue_of(&w)?;
                let p = curve.prime();
                return if r == s {
                    Ok(inf(DiscKind::InfinitePlus))
                } else if r == (p - s) % p {
                    Ok(inf(DiscKind::InfiniteMinus))
                } else {
                    Err(Error::domain("point is not on the curve"))
                };
            }
            let xbar = residue_of(x)?;
            let ybar = residue_of(y)?;
            let kind = if ybar == 0 { DiscKind::Weierstrass } else { DiscKind::OrdinaryAffine };
            Ok(DiscClass { kind, xbar: Some(xbar), ybar: Some(ybar) })
        }
    }
}

pub fn involution(_curve: &HyperellipticCurve, pt: &CurvePoint) -> CurvePoint {
    match pt {
        CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: y.neg_ref() },
        CurvePoint::InfPlus => CurvePoint::InfMinus,
        CurvePoint::InfMinus => CurvePoint::InfPlus,
        CurvePoint::Infinity => CurvePoint::Infinity,
    }
}

pub fn same_disc(curve: &HyperellipticCurve, a: &CurvePoint, b: &CurvePoint) -> Result<bool> {
    Ok(classify_point(curve, a)? == classify_point(curve, b)?)
}

/// Whether `y` is indistinguishable from zero, i.e. the point is (numerically) Weierstrass.
pub fn is_weierstrass_point(pt: &CurvePoint) -> bool {
    match pt {
        CurvePoint::Affine { y, .. } => y.is_zero(),
        CurvePoint::Infinity => true,
        _ => false,
    }
}

/// The Weierstrass point in the disc of `pt`, which must be a Weierstrass disc.
pub fn weierstrass_point(curve: &HyperellipticCurve, pt: &CurvePoint) -> Result<CurvePoint> {
    let cls = classify_point(curve, pt)?;
    if cls.kind != DiscKind::Weierstrass {
        return Err(Error::domain("not a Weierstrass disc"));
    }
    let Some(xbar) = cls.xbar else {
        return Ok(CurvePoint::Infinity);
    };
    let p = curve.prime();
    let n = curve.precision().min(pt.precision());
    let df = curve.derivative();
    let mut x = Padic::from_i64(p, xbar as i64, n);
    let mut reached = 1;
    while reached < 2 * n {
        let fx = curve.eval(&x);
        let d = super::poly::eval(&df, &x);
        x = (&x - fx.div(&d)?).with_precision(n);
        reached *= 2;
    }
    Ok(CurvePoint::Affine { x, y: Padic::zero(p, n) })
}

/// The Frobenius-fixed point of an ordinary affine disc: Teichmüller `x`, `y` lifted to match `ȳ`.
pub fn teichmuller_point(curve: &HyperellipticCurve, pt: &CurvePoint) -> Result<CurvePoint> {
    let cls = classify_point(curve, pt)?;
    if cls.kind != DiscKind::OrdinaryAffine {
        return Err(Error::domain("Teichmüller points are taken in ordinary affine discs"));
    }
    let x = pt.x().expect("affine");
    let n = x.precision().min(curve.precision());
    let p = curve.prime();
    let xt = if cls.xbar == Some(0) { Padic::zero(p, n) } else { teichmuller(&x.with_precision(n))? };
    let yt = hensel_sqrt(&curve.eval(&xt), cls.ybar)?;
    Ok(CurvePoint::Affine { x: xt, y: yt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::build_curve;

    fn x107() -> HyperellipticCurve {
        build_curve(7, &[-3, -4, -2, 2, 5, 2, 1], 12).unwrap()
    }

    #[test]
    fn classify_and_involution() {
        let c = x107();
        let p = PointSpec::integers(1, 1).realize(&c, 12).unwrap();
        let cls = classify_point(&c, &p).unwrap();
        assert_eq!(cls.kind, DiscKind::OrdinaryAffine);
        let ip = involution(&c, &p);
        assert!(!same_disc(&c, &p, &ip).unwrap());
        assert_eq!(involution(&c, &ip), p);
        assert_eq!(involution(&c, &CurvePoint::InfMinus), CurvePoint::InfPlus);
        assert!(PointSpec::integers(1, 2).realize(&c, 12).is_err());
    }

    #[test]
    fn teichmuller_point_is_fixed() {
        let c = x107();
        let p = PointSpec::integers(-1, 1).realize(&c, 12).unwrap();
        let t = teichmuller_point(&c, &p).unwrap();
        let x = t.x().unwrap();
        assert!((x.pow(7) - x).is_zero());
        assert!(same_disc(&c, &p, &t).unwrap());
        assert_eq!(t, p);
    }

    #[test]
    fn weierstrass_disc_root() {
        // (x-1)(x-2)(x-3)(x-4)(x-5)(x-6) + 7 has simple roots mod 7
        let c = build_curve(7, &[727, -1764, 1624, -735, 175, -21, 1], 12).unwrap();
        let near = CurvePoint::Affine { x: Padic::from_i64(7, 1, 12), y: Padic::zero(7, 12) };
        let t = weierstrass_point(&c, &near).unwrap();
        assert!(c.eval(t.x().unwrap()).is_zero());
        assert!(same_disc(&c, &near, &t).unwrap());
    }
}
