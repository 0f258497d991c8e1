use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{hensel_sqrt, Padic, PadicMatrix};

use super::point::{CurvePoint, PointSpec};
use super::poly;

/// How to rebuild a model's coefficients at any precision.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Recipe {
    Exact(Vec<BigRational>),
    Tau { source: Box<Recipe>, base: PointSpec },
    Fixed(Vec<Padic>),
}

/// Hyperelliptic curve `y^2 = f(x)` over Q_p with coefficients known to `prec` digits.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperellipticCurve {
    p: u64,
    genus: usize,
    prec: i64,
    f: Vec<Padic>,
    recipe: Recipe,
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Fraction-free determinant.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Sylvester matrix of `a` and `b`, coefficients given lowest first.
fn sylvester<T: Clone>(a: &[T], b: &[T], zero: T) -> Vec<Vec<T>> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let n = da + db;
    let mut rows = Vec::with_capacity(n);
    for i in 0..db {
        let mut r = vec![zero.clone(); n];
        for (j, c) in a.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..da {
        let mut r = vec![zero.clone(); n];
        for (j, c) in b.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    rows
}

fn rational_to_padic(p: u64, c: &BigRational, n: i64) -> Padic {
    Padic::from_rational(p, c, n)
}

fn rational_string(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Validated curve from integer coefficients `f_0, ..., f_d`.
pub fn build_curve(p: u64, f: &[i64], prec: i64) -> Result<HyperellipticCurve> {
    let coeffs: Vec<BigRational> = f.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    build_curve_rational(p, &coeffs, prec)
}

/// Validated curve from p-integral rational coefficients `f_0, ..., f_d`.
///
/// Odd-degree or non-monic input is accepted and reported by
/// [`HyperellipticCurve::needs_normalization`].
pub fn build_curve_rational(p: u64, f: &[BigRational], prec: i64) -> Result<HyperellipticCurve> {
    if !is_odd_prime(p) {
        return Err(Error::domain(format!("{} is not an odd prime", p)));
    }
    let mut f = f.to_vec();
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    if f.len() < 4 {
        return Err(Error::domain("f must have degree at least 3"));
    }
    let deg = f.len() - 1;
    let genus = (deg - 1) / 2;
    if p as usize <= genus {
        return Err(Error::PrimeTooSmall);
    }
    let pb = BigInt::from(p);
    if f.iter().any(|c| c.denom().is_multiple_of(&pb)) {
        return Err(Error::domain("coefficients must be p-integral"));
    }
    let den = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let deriv: Vec<BigInt> = ints.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let res = bareiss_det(sylvester(&ints, &deriv, BigInt::zero()));
    if res.is_zero() {
        return Err(Error::Singular);
    }
    let lc = ints.last().expect("nonempty");
    if lc.is_multiple_of(&pb) || res.is_multiple_of(&pb) {
        return Err(Error::BadReduction);
    }
    HyperellipticCurve::from_recipe(p, genus, Recipe::Exact(f), prec)
}

impl HyperellipticCurve {
    pub(crate) fn from_recipe(p: u64, genus: usize, recipe: Recipe, prec: i64) -> Result<Self> {
        let f = match &recipe {
            Recipe::Exact(c) => c.iter().map(|c| rational_to_padic(p, c, prec)).collect(),
            Recipe::Fixed(c) => c.iter().map(|c| c.with_precision(prec)).collect(),
            Recipe::Tau { source, base } => {
                let src = HyperellipticCurve::from_recipe(p, genus, (**source).clone(), prec)?;
                let pt = base.realize(&src, prec)?;
                let CurvePoint::Affine { x: a, y: b } = pt else {
                    return Err(Error::domain("base point must be affine"));
                };
                tau_coefficients(&src, &a, &b)?
            }
        };
        let prec = f.iter().map(|c: &Padic| c.precision()).min().unwrap_or(prec).min(prec);
        Ok(HyperellipticCurve { p, genus, prec, f, recipe })
    }

    /// Curve with fixed p-adic coefficients; it cannot be rebuilt at higher precision.
    pub fn from_padic_coefficients(f: Vec<Padic>) -> Result<Self> {
        let p = f.first().ok_or_else(|| Error::domain("empty polynomial"))?.prime();
        if f.len() < 4 {
            return Err(Error::domain("f must have degree at least 3"));
        }
        let genus = (f.len() - 2) / 2;
        let prec = f.iter().map(|c| c.precision()).min().unwrap_or(0);
        let c = HyperellipticCurve { p, genus, prec, f: f.clone(), recipe: Recipe::Fixed(f) };
        c.check_good_reduction()?;
        Ok(c)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn coefficients(&self) -> &[Padic] {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn is_odd_degree(&self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn leading_coefficient(&self) -> &Padic {
        self.f.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        (self.leading_coefficient() - Padic::one(self.p, self.prec)).is_zero()
    }

    /// Monic of even degree, the form all cohomology code assumes.
    pub fn is_normal(&self) -> bool {
        !self.is_odd_degree() && self.is_monic()
    }

    pub fn needs_normalization(&self) -> bool {
        !self.is_normal()
    }

    /// Same curve with coefficients at precision `n`, rebuilt from its defining data.
    pub fn at_precision(&self, n: i64) -> Result<Self> {
        HyperellipticCurve::from_recipe(self.p, self.genus, self.recipe.clone(), n)
    }

    pub(crate) fn recipe(&self) -> &Recipe {
        &self.recipe
    }

    pub fn eval(&self, x: &Padic) -> Padic {
        poly::eval(&self.f, x)
    }

    pub fn derivative(&self) -> Vec<Padic> {
        poly::derivative(&self.f)
    }

    /// `sqrt(lc)` fixing the sign convention at infinity, `y/x^(g+1) -> ±sqrt(lc)`.
    pub fn infinity_scale(&self) -> Result<Padic> {
        if self.is_odd_degree() {
            return Err(Error::domain("odd-degree models have a single point at infinity"));
        }
        hensel_sqrt(self.leading_coefficient(), None)
    }

    /// Stable description of the defining data, used for cache keys.
    pub fn descriptor(&self) -> Value {
        recipe_descriptor(self.p, &self.recipe)
    }

    fn check_good_reduction(&self) -> Result<()> {
        let lc = self.leading_coefficient();
        if lc.valuation() != Some(0) {
            return Err(Error::BadReduction);
        }
        let d = poly::derivative(&self.f);
        let m = PadicMatrix::from_rows(self.p, sylvester(&self.f, &d, Padic::zero(self.p, self.prec)));
        match m.det().valuation() {
            Some(0) => Ok(()),
            Some(_) => Err(Error::BadReduction),
            None => Err(Error::Singular),
        }
    }

    pub fn assert_normal_form(&self) -> Result<()> {
        if !self.is_normal() {
            return Err(Error::domain("curve is not in monic even-degree form"));
        }
        self.check_good_reduction()
    }

    /// Whether `(x, y)` satisfies the curve equation to its precision.
    pub(crate) fn on_curve(&self, x: &Padic, y: &Padic) -> bool {
        let r = y * y - self.eval(x);
        let scale = (2 * y.ord()).min(0).min(if x.is_zero() { 0 } else { self.degree() as i64 * x.ord() });
        r.is_zero() && r.precision() - scale >= 1
    }

    pub fn check_point(&self, pt: &CurvePoint) -> Result<()> {
        match pt {
            CurvePoint::Affine { x, y } => {
                if self.on_curve(x, y) {
                    Ok(())
                } else {
                    Err(Error::domain("point is not on the curve"))
                }
            }
            CurvePoint::InfPlus | CurvePoint::InfMinus => {
                self.infinity_scale().map(|_| ()).map_err(|_| Error::domain("no points ∞± on this model"))
            }
            CurvePoint::Infinity => {
                if self.is_odd_degree() {
                    Ok(())
                } else {
                    Err(Error::domain("even-degree models have two points at infinity, use inf+ or inf-"))
                }
            }
        }
    }
}

fn recipe_descriptor(p: u64, r: &Recipe) -> Value {
    match r {
        Recipe::Exact(c) => json!({"p": p, "f": c.iter().map(rational_string).collect::<Vec<_>>()}),
        Recipe::Fixed(c) => json!({"p": p, "f": c.iter().map(|x| x.to_canonical_string()).collect::<Vec<_>>()}),
        Recipe::Tau { source, base } => json!({"p": p, "tau": {"source": recipe_descriptor(p, source), "base": base.descriptor()}}),
    }
}

/// Coefficients of `f'(x') = x'^(2g+2) f(a + 1/x') / b^2`; monic when `b^2 = f(a)`.
pub(crate) fn tau_coefficients(src: &HyperellipticCurve, a: &Padic, b: &Padic) -> Result<Vec<Padic>> {
    if b.valuation() != Some(0) {
        return Err(Error::domain("base point needs ord_p(y) = 0"));
    }
    if !src.on_curve(a, b) {
        return Err(Error::domain("base point is not on the curve"));
    }
    let d = 2 * src.genus() + 2;
    let prec = a.precision().min(b.precision()).min(src.precision());
    let raw = poly::reciprocal_shift(src.coefficients(), a, d, prec);
    let binv = (b * b).inv()?;
    let mut out: Vec<Padic> = raw.iter().map(|c| c * &binv).collect();
    let top = out.last().expect("degree 2g+2");
    let one = Padic::one(src.prime(), prec);
    if !(top - &one).is_zero() {
        return Err(Error::domain("transformed model is not monic"));
    }
    let n = out.len();
    out[n - 1] = one.with_precision(top.precision());
    Ok(out)
}
