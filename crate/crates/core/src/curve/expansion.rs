//! Local expansions in a uniformizer and odd differentials `A(x)/(x - a) dx/y`.

use crate::error::{Error, Result};
use crate::padic::{Padic, PadicSeries};

use super::model::HyperellipticCurve;
use super::point::{classify_point, CurvePoint, DiscKind};
use super::poly;

/// How the local parameter `t` is defined.
#[derive(Clone, Debug, PartialEq)]
pub enum Uniformizer {
    /// `t = x - x0`, used in ordinary affine discs.
    XShift(Padic),
    /// `t = y - y0`, used in Weierstrass discs.
    YShift(Padic),
    /// `t = 1/x`, used at `∞±`.
    InverseX,
}

/// `x(t)`, `y(t)` around a point, together with `(dx/dt)/y`.
#[derive(Clone, Debug)]
pub struct LocalExpansion {
    pub center: CurvePoint,
    pub uniformizer: Uniformizer,
    pub x: PadicSeries,
    pub y: PadicSeries,
    /// `(dx/dt) / y`, computed without dividing by a vanishing `y`.
    pub dx_over_y: PadicSeries,
}

fn poly_series(p: u64, c: Vec<Padic>, order: i64, prec: i64) -> PadicSeries {
    PadicSeries::new(p, 0, c, order, prec)
}

fn series_sqrt_at_infinity(curve: &HyperellipticCurve, k: i64) -> Result<PadicSeries> {
    // S(t)^2 = t^(2g+2) f(1/t), S(0) = sqrt(lc)
    let p = curve.prime();
    let n = curve.precision();
    let rev: Vec<Padic> = curve.coefficients().iter().rev().cloned().collect();
    let s0 = curve.infinity_scale()?;
    poly_series(p, rev, k, n).sqrt_from(&s0)
}

/// Expansion of `x`, `y` around `center` to order `k`.
///
/// Ordinary affine discs use `t = x - x(P)`, Weierstrass discs `t = y - y(P)`,
/// and `∞±` use `t = 1/x` with `y t^(g+1) -> ±sqrt(lc)`.
pub fn local_expansion(curve: &HyperellipticCurve, center: &CurvePoint, k: i64) -> Result<LocalExpansion> {
    if k < 1 {
        return Err(Error::domain("expansion order must be positive"));
    }
    let p = curve.prime();
    let n = curve.precision().min(center.precision());
    let cls = classify_point(curve, center)?;
    match (cls.kind, center) {
        (DiscKind::OrdinaryAffine, CurvePoint::Affine { x: x0, y: y0 }) => {
            let x = poly_series(p, vec![x0.clone(), Padic::one(p, n)], k, n);
            let fs = poly_series(p, poly::taylor_shift(curve.coefficients(), x0), k, n);
            let y = fs.sqrt_from(y0)?;
            let dx_over_y = y.inverse()?;
            Ok(LocalExpansion { center: center.clone(), uniformizer: Uniformizer::XShift(x0.clone()), x, y, dx_over_y })
        }
        (DiscKind::Weierstrass, CurvePoint::Affine { x: x0, y: y0 }) => {
            let y = poly_series(p, vec![y0.clone(), Padic::one(p, n)], k, n);
            let y2 = y.mul(&y);
            let df = curve.derivative();
            let mut x = PadicSeries::constant(x0.with_precision(n), k);
            let mut steps = 0;
            let mut reached = 1;
            while reached < 2 * k || steps < 2 {
                let fx = x.compose_poly(curve.coefficients()).truncate(k).sub(&y2);
                let dfx = x.compose_poly(&df).truncate(k);
                x = x.sub(&fx.mul(&dfx.inverse()?)).truncate(k);
                reached *= 2;
                steps += 1;
            }
            let dfx = x.compose_poly(&df).truncate(k);
            let dx_over_y = dfx.inverse()?.scale(&Padic::from_i64(p, 2, n));
            Ok(LocalExpansion { center: center.clone(), uniformizer: Uniformizer::YShift(y0.clone()), x, y, dx_over_y })
        }
        (DiscKind::InfinitePlus | DiscKind::InfiniteMinus, CurvePoint::InfPlus | CurvePoint::InfMinus) => {
            let g = curve.genus() as i64;
            let sign = if *center == CurvePoint::InfPlus { 1 } else { -1 };
            let s = series_sqrt_at_infinity(curve, k + g + 1)?;
            let x = PadicSeries::monomial(Padic::one(p, n), -1, k);
            let y = s.scale(&Padic::from_i64(p, sign, n)).shift(-(g + 1));
            // dx/y = -t^-2 dt / (±t^-(g+1) S) = ∓ t^(g-1) S^-1 dt
            let dx_over_y = s.inverse()?.scale(&Padic::from_i64(p, -sign, n)).shift(g - 1);
            Ok(LocalExpansion { center: center.clone(), uniformizer: Uniformizer::InverseX, x, y, dx_over_y })
        }
        (DiscKind::InfinitePlus | DiscKind::InfiniteMinus, _) => {
            Err(Error::domain("affine points of an infinite disc are expanded at ∞±"))
        }
        _ => Err(Error::domain("local expansions need a model in monic even-degree form")),
    }
}

impl LocalExpansion {
    /// Value of the local parameter at `q`; it must lie in the open disc of convergence.
    pub fn parameter(&self, q: &CurvePoint) -> Result<Padic> {
        let t = match (&self.uniformizer, q) {
            (Uniformizer::XShift(x0), CurvePoint::Affine { x, .. }) => x - x0,
            (Uniformizer::YShift(y0), CurvePoint::Affine { y, .. }) => y - y0,
            (Uniformizer::InverseX, CurvePoint::Affine { x, .. }) => x.inv()?,
            (Uniformizer::InverseX, pt) if *pt == self.center => {
                let n = self.x.precision();
                return Ok(Padic::zero(self.x.prime(), n));
            }
            _ => return Err(Error::domain("point outside the disc of the expansion")),
        };
        if !t.is_zero() && t.ord() < 1 {
            return Err(Error::domain("point outside the disc of the expansion"));
        }
        Ok(t)
    }

    /// `A(x(t))` as a (Laurent) series.
    fn poly_at(&self, a: &[Padic]) -> PadicSeries {
        let p = self.x.prime();
        let n = self.x.precision();
        let k = self.x.order();
        match &self.uniformizer {
            Uniformizer::XShift(x0) => poly_series(p, poly::taylor_shift(a, x0), k, n),
            Uniformizer::YShift(_) => self.x.compose_poly(a).truncate(k),
            Uniformizer::InverseX => {
                let d = a.len() as i64 - 1;
                let rev: Vec<Padic> = a.iter().rev().cloned().collect();
                PadicSeries::new(p, -d, rev, k, n)
            }
        }
    }

    /// `ω/dt` for an odd differential.
    pub fn differential(&self, w: &OddDifferential) -> Result<PadicSeries> {
        let p = self.x.prime();
        let n = self.x.precision();
        if w.numerator.is_empty() {
            return Ok(PadicSeries::zero(p, self.dx_over_y.order(), n));
        }
        let mut s = self.poly_at(&w.numerator).mul(&self.dx_over_y);
        if let Some(a) = &w.pole {
            let xa = self.x.sub(&PadicSeries::constant(a.clone(), self.x.order()));
            match &self.uniformizer {
                Uniformizer::InverseX => {
                    if !a.is_zero() && a.ord() < 0 {
                        return Err(Error::domain("pole of the differential inside the disc at infinity"));
                    }
                }
                _ => {
                    let c0 = xa.coefficient(0);
                    if !c0.is_zero() && c0.ord() > 0 {
                        return Err(Error::domain("pole of the differential inside the disc, away from its center"));
                    }
                }
            }
            s = s.mul(&xa.inverse()?);
        }
        Ok(s)
    }
}

/// `A(x)/(x - a) · dx/y`, or `A(x) dx/y` when there is no pole.
#[derive(Clone, Debug, PartialEq)]
pub struct OddDifferential {
    numerator: Vec<Padic>,
    pole: Option<Padic>,
}

impl OddDifferential {
    pub fn new(numerator: Vec<Padic>, pole: Option<Padic>) -> Self {
        OddDifferential { numerator, pole }
    }

    /// `ω_i = x^i dx/y`.
    pub fn omega(p: u64, i: usize, prec: i64) -> Self {
        let mut c = vec![Padic::zero(p, prec); i + 1];
        c[i] = Padic::one(p, prec);
        OddDifferential { numerator: c, pole: None }
    }

    /// `Σ c_i ω_i`.
    pub fn combination(c: &[Padic]) -> Self {
        OddDifferential { numerator: c.to_vec(), pole: None }
    }

    /// `ω' = y(P)/(x - x(P)) dx/y`, with residues `+1` at `P` and `-1` at `ι(P)`.
    pub fn omega_prime(pt: &CurvePoint) -> Result<Self> {
        match pt {
            CurvePoint::Affine { x, y } => Ok(OddDifferential { numerator: vec![y.clone()], pole: Some(x.clone()) }),
            _ => Err(Error::domain("ω' is built from an affine point")),
        }
    }

    pub fn numerator(&self) -> &[Padic] {
        &self.numerator
    }

    pub fn pole(&self) -> Option<&Padic> {
        self.pole.as_ref()
    }

    /// `self - Σ c_i ω_i`.
    pub fn sub_combination(&self, c: &[Padic]) -> Self {
        let q: Vec<Padic> = match &self.pole {
            None => c.to_vec(),
            Some(a) => {
                // (x - a) Σ c_i x^i
                let p = a.prime();
                let mut out = vec![Padic::zero(p, a.precision()); c.len() + 1];
                for (i, ci) in c.iter().enumerate() {
                    out[i + 1] = &out[i + 1] + ci;
                    out[i] = &out[i] - ci * a;
                }
                out
            }
        };
        let len = self.numerator.len().max(q.len());
        let mut num = Vec::with_capacity(len);
        for i in 0..len {
            let v = match (self.numerator.get(i), q.get(i)) {
                (Some(x), Some(y)) => x - y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.neg_ref(),
                (None, None) => unreachable!(),
            };
            num.push(v);
        }
        OddDifferential { numerator: num, pole: self.pole.clone() }
    }

    /// Whether the differential has no pole at the points at infinity.
    pub fn holomorphic_at_infinity(&self, genus: usize) -> bool {
        let deg = self.numerator.iter().rposition(|c| !c.is_zero()).map(|d| d as i64).unwrap_or(-1);
        let deg = if self.pole.is_some() { deg - 1 } else { deg };
        deg < genus as i64
    }
}

/// Laurent series of `ω/dt` at `center` in the uniformizer of [`local_expansion`], to order `k`.
pub fn expand_odd_differential(curve: &HyperellipticCurve, w: &OddDifferential, center: &CurvePoint, k: i64) -> Result<PadicSeries> {
    let extra = w.numerator.len() as i64 + 3;
    let e = local_expansion(curve, center, k + extra)?;
    Ok(e.differential(w)?.truncate(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_curve, PointSpec};

    fn x107() -> HyperellipticCurve {
        build_curve(7, &[-3, -4, -2, 2, 5, 2, 1], 12).unwrap()
    }

    fn check_equation(c: &HyperellipticCurve, e: &LocalExpansion, upto: i64) {
        let lhs = e.y.mul(&e.y);
        let rhs = e.x.compose_poly(c.coefficients());
        let d = lhs.sub(&rhs);
        for j in d.lowest()..upto.min(d.order()) {
            assert!(d.coefficient(j).is_zero(), "t^{} residual {}", j, d.coefficient(j));
        }
    }

    #[test]
    fn ordinary_expansion() {
        let c = x107();
        let pt = PointSpec::integers(1, 1).realize(&c, 12).unwrap();
        let e = local_expansion(&c, &pt, 10).unwrap();
        check_equation(&c, &e, 10);
        // y'(0) = f'(1) / 2
        let lin = e.y.coefficient(1);
        let want = crate::curve::poly::eval(&c.derivative(), pt.x().unwrap()).div_int(2);
        assert!((lin - want).is_zero());
    }

    #[test]
    fn weierstrass_expansion_is_even() {
        let c = build_curve(7, &[727, -1764, 1624, -735, 175, -21, 1], 12).unwrap();
        let near = CurvePoint::Affine { x: Padic::from_i64(7, 1, 12), y: Padic::zero(7, 12) };
        let t = crate::curve::weierstrass_point(&c, &near).unwrap();
        let e = local_expansion(&c, &t, 9).unwrap();
        check_equation(&c, &e, 9);
        for j in (1..9).step_by(2) {
            assert!(e.x.coefficient(j).is_zero());
        }
    }

    #[test]
    fn infinity_expansion() {
        let c = x107();
        let e = local_expansion(&c, &CurvePoint::InfPlus, 10).unwrap();
        check_equation(&c, &e, 5);
        assert_eq!(e.y.lowest(), -3);
        assert!((e.y.coefficient(-3) - Padic::one(7, 12)).is_zero());
    }

    #[test]
    fn residues() {
        let c = x107();
        let one = Padic::one(7, 12);
        let wg = OddDifferential::omega(7, 2, 12);
        let rm = expand_odd_differential(&c, &wg, &CurvePoint::InfMinus, 6).unwrap().residue();
        let rp = expand_odd_differential(&c, &wg, &CurvePoint::InfPlus, 6).unwrap().residue();
        assert!((rm - &one).is_zero());
        assert!((rp + &one).is_zero());
        for i in 0..2 {
            let w = OddDifferential::omega(7, i, 12);
            assert!(expand_odd_differential(&c, &w, &CurvePoint::InfMinus, 6).unwrap().residue().is_zero());
        }
        for i in 3..5 {
            let w = OddDifferential::omega(7, i, 12);
            let a = expand_odd_differential(&c, &w, &CurvePoint::InfMinus, 6).unwrap().residue();
            let b = expand_odd_differential(&c, &w, &CurvePoint::InfPlus, 6).unwrap().residue();
            assert!((a + b).is_zero());
        }
        let pt = PointSpec::integers(1, 1).realize(&c, 12).unwrap();
        let wp = OddDifferential::omega_prime(&pt).unwrap();
        let r = expand_odd_differential(&c, &wp, &pt, 4).unwrap().residue();
        assert!((r - &one).is_zero());
        let ip = crate::curve::involution(&c, &pt);
        let r = expand_odd_differential(&c, &wp, &ip, 4).unwrap().residue();
        assert!((r + &one).is_zero());
    }

    #[test]
    fn sub_combination_clears_pole_part() {
        let p = 7;
        let a = Padic::from_i64(p, 3, 10);
        let w = OddDifferential::new(vec![Padic::one(p, 10)], Some(a.clone()));
        let c = vec![Padic::from_i64(p, 2, 10)];
        let d = w.sub_combination(&c);
        // (1 - 2(x - 3)) = 7 - 2x
        assert!((&d.numerator()[0] - Padic::from_i64(p, 7, 10)).is_zero());
        assert!((&d.numerator()[1] + Padic::from_i64(p, 2, 10)).is_zero());
    }
}
