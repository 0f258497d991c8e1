//! Branch formulas and the dispatcher for `h(P - Q, R - S)` on a normal-form model.

use std::cell::RefCell;

use crate::cohomology::{mixed_coordinates, PrecomputedData, WMode};
use crate::coleman::{coleman_integrals_on_basis, eta_integrals, integrate_omega_prime, tau_model, tiny_integral};
use crate::curve::{classify_point, involution, is_weierstrass_point, map_point, CurvePoint, DiscClass, DiscKind, OddDifferential};
use crate::error::{Error, Result};
use crate::padic::{log_iwasawa, Padic};

use super::{Branch, Divisor, HeightResult};

/// Runtime switches for the pairing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HeightOptions {
    /// Recompute every antisymmetric height on `C'_P` and compare.
    pub verify: bool,
}

/// Which point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

struct Ctx<'a> {
    d: &'a PrecomputedData,
    opts: HeightOptions,
    trace: RefCell<Vec<Branch>>,
}

impl<'a> Ctx<'a> {
    fn new(d: &'a PrecomputedData, opts: HeightOptions) -> Self {
        Ctx { d, opts, trace: RefCell::new(Vec::new()) }
    }

    fn note(&self, b: Branch) {
        self.trace.borrow_mut().push(b);
    }

    fn finish(self, v: Padic) -> HeightResult {
        HeightResult::new(v, self.trace.into_inner(), self.d.w_mode)
    }

    fn p(&self) -> u64 {
        self.d.prime()
    }

    fn zero(&self) -> Padic {
        Padic::zero(self.p(), self.d.n_work)
    }

    fn half(&self, v: Padic) -> Result<Padic> {
        v.div(&Padic::from_i64(self.p(), 2, self.d.n_work))
    }

    fn disc(&self, pt: &CurvePoint) -> Result<DiscClass> {
        classify_point(&self.d.curve, pt)
    }

    fn iota(&self, pt: &CurvePoint) -> CurvePoint {
        involution(&self.d.curve, pt)
    }

    fn infinite_disc(&self, pt: &CurvePoint) -> Result<bool> {
        Ok(self.disc(pt)?.is_infinite())
    }
}

fn is_inf(pt: &CurvePoint) -> bool {
    matches!(pt, CurvePoint::InfPlus | CurvePoint::InfMinus)
}

fn sub_u(v: Padic, u: &[Padic], ints: &[Padic]) -> Padic {
    u.iter().zip(ints).fold(v, |acc, (a, b)| acc - a * b)
}

/// `ψ(ω_g)` on the η basis and its first `g` mixed coordinates.
pub fn psi_omega_g(d: &PrecomputedData) -> (Vec<Padic>, Vec<Padic>) {
    (d.psi_g.clone(), d.u.clone())
}

/// `h(∞- - ∞+, R - S) = ∫_S^R ω_g - Σ_{i<g} u_i ∫_S^R ω_i`.
pub fn height_inf_inf(d: &PrecomputedData, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
    let ints = coleman_integrals_on_basis(d, s, r)?;
    let g = d.genus();
    Ok(sub_u(ints.values[g].clone(), &d.u, &ints.values[..g]))
}

/// `ψ(ω_{P-ιP})` on the η basis, from `M ψ = (∫_{ιP}^P η_j)_j`, and its first `g` mixed coordinates.
pub fn psi_antisymmetric(d: &PrecomputedData, p_pt: &CurvePoint) -> Result<(Vec<Padic>, Vec<Padic>)> {
    let ip = involution(&d.curve, p_pt);
    let e = eta_integrals(d, &ip, p_pt)?;
    let psi = d.cup.solve_vector(&e)?;
    let u = mixed_coordinates(&d.w, &psi, d.genus())?;
    Ok((psi, u))
}

/// `h(P - ιP, R - S) = ∫_S^R ω' - Σ_{i<g} u_i ∫_S^R ω_i` for `ord_p y(P) = 0`, `R`, `S` in finite discs.
pub fn height_antisymmetric(d: &PrecomputedData, p_pt: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
    let (_, u) = psi_antisymmetric(d, p_pt)?;
    let op = integrate_omega_prime(d, p_pt, s, r)?;
    let ints = coleman_integrals_on_basis(d, s, r)?;
    Ok(sub_u(op, &u, &ints.values[..d.genus()]))
}

/// `h(P - ιP, R - S)` two ways: directly and as `h(∞- - ∞+, τR - τS)` on `C'_P`.
/// Only meaningful when both models use the unit-root complement.
pub fn verify_antisymmetric(d: &PrecomputedData, p_pt: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<(Padic, Padic)> {
    if d.w_mode != WMode::UnitRoot {
        return Err(Error::NotSupported("verification needs the unit-root complement".into()));
    }
    let direct = height_antisymmetric(d, p_pt, r, s)?;
    let (dt, map) = tau_model(d, p_pt)?;
    let alt = height_inf_inf(&dt, &map_point(&map, r)?, &map_point(&map, s)?)?;
    Ok((direct, alt))
}

/// `h(∞∓ - Q, R - S)`.
pub fn height_one_infinity(d: &PrecomputedData, sign: Sign, q: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<HeightResult> {
    let ctx = Ctx::new(d, HeightOptions::default());
    ctx.check_condition(&inf_point(sign), q, r, s)?;
    let v = ctx.one_infinity(sign, q, r, s)?;
    Ok(ctx.finish(v))
}

/// `h(P - Q, R - S)` for affine points, `R`, `S` outside the discs at infinity.
pub fn height_affine(d: &PrecomputedData, p_pt: &CurvePoint, q: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<HeightResult> {
    let ctx = Ctx::new(d, HeightOptions::default());
    ctx.check_condition(p_pt, q, r, s)?;
    let v = ctx.affine(p_pt, q, r, s)?;
    Ok(ctx.finish(v))
}

fn inf_point(sign: Sign) -> CurvePoint {
    match sign {
        Sign::Plus => CurvePoint::InfPlus,
        Sign::Minus => CurvePoint::InfMinus,
    }
}

/// `h(D1, D2)` for degree-zero divisors with disjoint support on the model of `d`.
pub fn height_pairing(d: &PrecomputedData, d1: &Divisor, d2: &Divisor, opts: HeightOptions) -> Result<HeightResult> {
    if opts.verify && d.w_mode != WMode::UnitRoot {
        return Err(Error::Invalid("--verify requires the unit-root complement".into()));
    }
    if d1.support_meets(d2) {
        return Err(Error::Condition("divisors have a common point".into()));
    }
    for dv in [d1, d2] {
        for (pt, _) in &dv.terms {
            d.curve.check_point(pt)?;
            if matches!(pt, CurvePoint::Infinity) {
                return Err(Error::domain("odd-degree model; normalise first"));
            }
        }
    }
    let a = d1.pairs()?;
    let b = d2.pairs()?;
    let ctx = Ctx::new(d, opts);
    for (p_pt, q) in &a {
        for (r, s) in &b {
            ctx.check_condition(p_pt, q, r, s)?;
        }
    }
    let mut total = ctx.zero();
    for (p_pt, q) in &a {
        for (r, s) in &b {
            total = total + ctx.pair(p_pt, q, r, s)?;
        }
    }
    Ok(ctx.finish(total))
}

impl Ctx<'_> {
    /// No disc of `P`, `Q`, `ιP`, `ιQ` contains `R` or `S`.
    fn check_condition(&self, p_pt: &CurvePoint, q: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<()> {
        let left = [p_pt.clone(), q.clone(), self.iota(p_pt), self.iota(q)]
            .iter()
            .map(|x| self.disc(x))
            .collect::<Result<Vec<_>>>()?;
        for e in [r, s] {
            if left.contains(&self.disc(e)?) {
                return Err(Error::Condition(format!(
                    "pair ({} - {}, {} - {}): {} shares a residue disc with the first divisor or its conjugate",
                    p_pt.label(),
                    q.label(),
                    r.label(),
                    s.label(),
                    e.label()
                )));
            }
        }
        Ok(())
    }

    fn pair(&self, p_pt: &CurvePoint, q: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
        if p_pt.agrees_with(q) || r.agrees_with(s) {
            return Ok(self.zero());
        }
        match (p_pt, q) {
            (CurvePoint::InfMinus, CurvePoint::InfPlus) => {
                self.note(Branch::InfinityPair);
                return height_inf_inf(self.d, r, s);
            }
            (CurvePoint::InfPlus, CurvePoint::InfMinus) => {
                self.note(Branch::InfinityPair);
                return Ok(height_inf_inf(self.d, r, s)?.neg_ref());
            }
            _ => {}
        }
        if is_inf(r) || is_inf(s) {
            self.note(Branch::Swapped);
            return self.pair(r, s, p_pt, q);
        }
        match (p_pt, q) {
            (CurvePoint::InfMinus, _) => return self.one_infinity(Sign::Minus, q, r, s),
            (CurvePoint::InfPlus, _) => return self.one_infinity(Sign::Plus, q, r, s),
            (_, CurvePoint::InfMinus) => return Ok(self.one_infinity(Sign::Minus, p_pt, r, s)?.neg_ref()),
            (_, CurvePoint::InfPlus) => return Ok(self.one_infinity(Sign::Plus, p_pt, r, s)?.neg_ref()),
            _ => {}
        }
        let left_inf = self.infinite_disc(p_pt)? || self.infinite_disc(q)?;
        let right_inf = self.infinite_disc(r)? || self.infinite_disc(s)?;
        if right_inf && !left_inf {
            self.note(Branch::Swapped);
            return self.affine(r, s, p_pt, q);
        }
        self.affine(p_pt, q, r, s)
    }

    /// `h(∞- - Q, R - S) = ½[log((x_S - x_Q)/(x_R - x_Q)) + h(∞- - ∞+, R - S) - h(Q - ιQ, R - S)]`;
    /// the `∞+` case is its image under the involution.
    fn one_infinity(&self, sign: Sign, q: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
        self.note(Branch::OneInfinity);
        if sign == Sign::Plus {
            return self.one_infinity(Sign::Minus, &self.iota(q), &self.iota(r), &self.iota(s));
        }
        let xq = q.x().ok_or_else(|| Error::domain("expected an affine point"))?;
        let (xr, xs) = (r.x().expect("finite disc"), s.x().expect("finite disc"));
        let l = log_iwasawa(&(xs - xq).div(&(xr - xq))?)?;
        let hi = height_inf_inf(self.d, r, s)?;
        let a = self.anti(q, r, s)?;
        self.half(l + hi - a)
    }

    /// `½[h(P - ιP, R - S) - h(Q - ιQ, R - S) + log(cross ratio)]`.
    fn affine(&self, p_pt: &CurvePoint, q: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
        self.note(Branch::Affine);
        let x = |pt: &CurvePoint| pt.x().cloned().ok_or_else(|| Error::domain("expected an affine point"));
        let (xp, xq, xr, xs) = (x(p_pt)?, x(q)?, x(r)?, x(s)?);
        let ratio = ((&xr - &xp) * (&xs - &xq)).div(&((&xr - &xq) * (&xs - &xp)))?;
        let l = log_iwasawa(&ratio)?;
        let ap = self.anti(p_pt, r, s)?;
        let aq = self.anti(q, r, s)?;
        self.half(ap - aq + l)
    }

    /// `h(X - ιX, R - S)` for affine `X` and `R`, `S` in finite discs.
    fn anti(&self, x: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
        if is_weierstrass_point(x) {
            self.note(Branch::Weierstrass);
            return Ok(self.zero());
        }
        let dx = self.disc(x)?;
        if !dx.is_infinite() && self.disc(r)? == self.disc(s)? {
            return self.anti_tiny(x, r, s);
        }
        if dx.kind == DiscKind::OrdinaryAffine && x.y().is_some_and(|y| y.valuation() == Some(0)) {
            return self.antisymmetric(x, r, s);
        }
        self.note(Branch::SymmetricSplit);
        let a = self.sym(x, r)?;
        let b = self.sym(x, s)?;
        self.half(a - b)
    }

    fn antisymmetric(&self, x: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
        self.note(Branch::Antisymmetric);
        if !self.opts.verify {
            return height_antisymmetric(self.d, x, r, s);
        }
        let (direct, alt) = verify_antisymmetric(self.d, x, r, s)?;
        let n = direct.precision().min(alt.precision());
        if !direct.with_precision(n).agrees_with(&alt.with_precision(n)) {
            return Err(Error::Verification(format!(
                "h({} - ι, {} - {}): {} vs {}",
                x.label(),
                r.label(),
                s.label(),
                direct,
                alt
            )));
        }
        Ok(direct)
    }

    /// `∫_S^R (ω' - Σ u_i ω_i)` with `R`, `S` in one disc away from `X` and `ιX`.
    fn anti_tiny(&self, x: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Result<Padic> {
        self.note(Branch::AntisymmetricTiny);
        let w = self.omega_for(x)?;
        tiny_integral(&self.d.curve, &w, s, r, self.d.n_work)
    }

    /// `ω_{X-ιX} = ω' - Σ_{i<g} u_i ω_i`.
    fn omega_for(&self, x: &CurvePoint) -> Result<OddDifferential> {
        let (_, u) = psi_antisymmetric(self.d, x)?;
        Ok(OddDifferential::omega_prime(x)?.sub_combination(&u))
    }

    /// `h(A - ιA, B - ιB)`.
    fn sym(&self, a: &CurvePoint, b: &CurvePoint) -> Result<Padic> {
        if is_weierstrass_point(a) || is_weierstrass_point(b) {
            self.note(Branch::Weierstrass);
            return Ok(self.zero());
        }
        let (da, db) = (self.disc(a)?, self.disc(b)?);
        match db.kind {
            DiscKind::InfiniteMinus => return self.sym_infinite(a, b),
            DiscKind::InfinitePlus => return Ok(self.sym_infinite(a, &self.iota(b))?.neg_ref()),
            _ => {}
        }
        if da.is_infinite() {
            return self.sym(b, a);
        }
        let unit_y = |pt: &CurvePoint, c: &DiscClass| {
            c.kind == DiscKind::OrdinaryAffine && pt.y().is_some_and(|y| y.valuation() == Some(0))
        };
        if unit_y(a, &da) {
            return self.antisymmetric(a, b, &self.iota(b));
        }
        if unit_y(b, &db) {
            return self.antisymmetric(b, a, &self.iota(a));
        }
        if db.is_weierstrass() {
            return self.anti_tiny(a, b, &self.iota(b));
        }
        self.anti_tiny(b, a, &self.iota(a))
    }

    /// `h(A - ιA, B - ιB)` with `B` in the disc of `∞-`:
    /// `h(∞- - ∞+, A - ιA) + ∫_{∞-}^B ω_{A-ιA} - ∫_{∞+}^{ιB} ω_{A-ιA}`.
    fn sym_infinite(&self, a: &CurvePoint, b: &CurvePoint) -> Result<Padic> {
        self.note(Branch::InfiniteDisc);
        let ia = self.iota(a);
        let hi = height_inf_inf(self.d, a, &ia)?;
        let w = self.omega_for(a)?;
        let n = self.d.n_work;
        let t1 = tiny_integral(&self.d.curve, &w, &CurvePoint::InfMinus, b, n)?;
        let t2 = tiny_integral(&self.d.curve, &w, &CurvePoint::InfPlus, &self.iota(b), n)?;
        Ok(hi + t1 - t2)
    }
}
