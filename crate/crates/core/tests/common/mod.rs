//! Shared fixtures: the test curves and random points in prescribed kinds of residue discs.
#![allow(dead_code)]

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use padic_heights::cohomology::PrecomputedData;
use padic_heights::curve::{
    build_curve, classify_point, involution, Coordinate, CurvePoint, DiscClass, DiscKind, HyperellipticCurve, PointSpec,
};
use padic_heights::padic::{hensel_sqrt, Padic};

pub const X107: (u64, [i64; 7]) = (7, [-3, -4, -2, 2, 5, 2, 1]);
pub const X67: (u64, [i64; 7]) = (11, [1, -2, 1, 2, 2, 4, 1]);
/// Genus 2 with a Weierstrass disc at `x̄ = 0` mod 7.
pub const WDISC: (u64, [i64; 7]) = (7, [7, 2, 1, 0, 3, 0, 1]);

pub fn curve(c: (u64, [i64; 7]), n: i64) -> HyperellipticCurve {
    build_curve(c.0, &c.1, n).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Precision at which test points are realised for `d`.
pub fn point_precision(d: &PrecomputedData) -> i64 {
    d.n_work + 30
}

fn is_sq(a: u64, p: u64) -> bool {
    a != 0 && (1..p).any(|t| t * t % p == a)
}

fn eval_mod(f: &[i64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0i64, |acc, &c| (acc * x as i64 + c).rem_euclid(p as i64)) as u64
}

/// Random point of an ordinary affine disc, with unit `y`.
pub fn ordinary_point(c: &HyperellipticCurve, f: &[i64], r: &mut ChaCha8Rng, n: i64) -> CurvePoint {
    let p = c.prime();
    loop {
        let xb = r.gen_range(0..p);
        if !is_sq(eval_mod(f, xb, p), p) {
            continue;
        }
        let x = xb as i64 + p as i64 * r.gen_range(0..(p * p * p) as i64);
        let spec = PointSpec::Affine { x: Coordinate::integer(x), y: None, y_residue: None };
        let pt = spec.realize(c, n).unwrap();
        return if r.gen_bool(0.5) { pt } else { involution(c, &pt) };
    }
}

/// Random non-Weierstrass point of a Weierstrass disc, if the reduction has a root.
pub fn weierstrass_disc_point(c: &HyperellipticCurve, f: &[i64], r: &mut ChaCha8Rng, n: i64) -> Option<CurvePoint> {
    let p = c.prime();
    let roots: Vec<u64> = (0..p).filter(|&x| eval_mod(f, x, p) == 0).collect();
    if roots.is_empty() {
        return None;
    }
    let xb = roots[r.gen_range(0..roots.len())];
    let y = Padic::from_i64(p, p as i64 * r.gen_range(1..p as i64), n);
    let y2 = &y * &y;
    let df: Vec<Padic> = c.derivative();
    let mut x = Padic::from_i64(p, xb as i64, n);
    for _ in 0..2 * n {
        let fx = c.eval(&x) - &y2;
        let d = df.iter().rev().fold(Padic::zero(p, n), |acc, a| acc * &x + a);
        x = (&x - fx.div(&d).unwrap()).with_precision(n);
    }
    Some(CurvePoint::affine(x, y))
}

/// Random affine point in the disc at infinity of the requested sign.
pub fn infinite_disc_point(c: &HyperellipticCurve, r: &mut ChaCha8Rng, n: i64, kind: DiscKind) -> CurvePoint {
    let p = c.prime();
    let u = r.gen_range(1..p as i64) + p as i64 * r.gen_range(0..p as i64);
    let x = Coordinate::Rational(BigRational::new(1.into(), (p as i64 * u).into())).realize(p, n);
    let y = hensel_sqrt(&c.eval(&x), None).unwrap();
    let pt = CurvePoint::affine(x, y);
    if classify_point(c, &pt).unwrap().kind == kind {
        pt
    } else {
        involution(c, &pt)
    }
}

pub fn disc(c: &HyperellipticCurve, pt: &CurvePoint) -> DiscClass {
    classify_point(c, pt).unwrap()
}

/// Discs of `pts` and of their conjugates.
pub fn blocked(c: &HyperellipticCurve, pts: &[&CurvePoint]) -> Vec<DiscClass> {
    pts.iter().flat_map(|p| [disc(c, p), disc(c, &involution(c, p))]).collect()
}

/// Random ordinary points avoiding `avoid` and distinct from each other.
pub fn ordinary_avoiding(
    c: &HyperellipticCurve,
    f: &[i64],
    r: &mut ChaCha8Rng,
    n: i64,
    avoid: &[DiscClass],
    count: usize,
) -> Vec<CurvePoint> {
    let mut out: Vec<CurvePoint> = Vec::new();
    while out.len() < count {
        let q = ordinary_point(c, f, r, n);
        if avoid.contains(&disc(c, &q)) || out.iter().any(|o| o.agrees_with(&q)) {
            continue;
        }
        out.push(q);
    }
    out
}

/// Whether two values agree to their common precision, capped at `n`.
pub fn agree(a: &Padic, b: &Padic, n: i64) -> bool {
    let n = n.min(a.precision()).min(b.precision());
    a.with_precision(n).agrees_with(&b.with_precision(n))
}
