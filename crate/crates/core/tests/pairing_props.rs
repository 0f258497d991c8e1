//! Symmetry, involution invariance and bilinearity across every dispatch branch.

mod common;

use common::*;
use padic_heights::cohomology::{precompute, PrecomputedData, WMode};
use padic_heights::curve::{involution, CurvePoint, DiscKind};
use padic_heights::heights::{height_pairing, Branch, Divisor, HeightOptions, HeightResult};

const N: i64 = 6;

fn setup(mode: WMode) -> PrecomputedData {
    precompute(&curve(X107, 80), N, mode).unwrap()
}

fn h(d: &PrecomputedData, a: &Divisor, b: &Divisor) -> HeightResult {
    height_pairing(d, a, b, HeightOptions::default()).unwrap()
}

fn diff(a: &CurvePoint, b: &CurvePoint) -> Divisor {
    Divisor::difference(a.clone(), b.clone())
}

fn check_symmetric(d: &PrecomputedData, p: &CurvePoint, q: &CurvePoint, r: &CurvePoint, s: &CurvePoint) -> Vec<Branch> {
    let (d1, d2) = (diff(p, q), diff(r, s));
    let a = h(d, &d1, &d2);
    let b = h(d, &d2, &d1);
    assert!(agree(&a.value, &b.value, N), "h(D1,D2) = {} but h(D2,D1) = {}", a.value, b.value);
    let c = &d.curve;
    let i = |x: &CurvePoint| involution(c, x);
    let e = h(d, &diff(&i(p), &i(q)), &diff(&i(r), &i(s)));
    assert!(agree(&a.value, &e.value, N), "involution: {} vs {}", a.value, e.value);
    let mut t = a.trace;
    t.extend(b.trace);
    t
}

#[test]
fn ordinary_points_both_modes() {
    for mode in [WMode::UnitRoot, WMode::Symplectic] {
        let d = setup(mode);
        let c = &d.curve;
        let n = point_precision(&d);
        let mut r = rng(1);
        let pq = ordinary_avoiding(c, &X107.1, &mut r, n, &[], 2);
        let rs = ordinary_avoiding(c, &X107.1, &mut r, n, &blocked(c, &[&pq[0], &pq[1]]), 2);
        check_symmetric(&d, &pq[0], &pq[1], &rs[0], &rs[1]);
    }
}

#[test]
fn points_at_infinity() {
    let d = setup(WMode::UnitRoot);
    let c = &d.curve;
    let n = point_precision(&d);
    let mut r = rng(2);
    let rs = ordinary_avoiding(c, &X107.1, &mut r, n, &[], 2);
    let t = check_symmetric(&d, &CurvePoint::InfMinus, &CurvePoint::InfPlus, &rs[0], &rs[1]);
    assert!(t.contains(&Branch::InfinityPair));
    let q = ordinary_avoiding(c, &X107.1, &mut r, n, &blocked(c, &[&rs[0], &rs[1]]), 1);
    let t = check_symmetric(&d, &CurvePoint::InfPlus, &q[0], &rs[0], &rs[1]);
    assert!(t.contains(&Branch::OneInfinity));
}

#[test]
fn weierstrass_and_infinite_discs() {
    let d = precompute(&curve(WDISC, 80), N, WMode::Symplectic).unwrap();
    let c = &d.curve;
    let n = point_precision(&d);
    let mut r = rng(3);
    let w = weierstrass_disc_point(c, &WDISC.1, &mut r, n).unwrap();
    let inf = infinite_disc_point(c, &mut r, n, DiscKind::InfiniteMinus);
    let avoid = blocked(c, &[&w, &inf]);
    let rs = ordinary_avoiding(c, &WDISC.1, &mut r, n, &avoid, 2);
    let t = check_symmetric(&d, &w, &inf, &rs[0], &rs[1]);
    assert!(t.contains(&Branch::InfiniteDisc) || t.contains(&Branch::SymmetricSplit), "{:?}", t);
}

/// `h(A + ιA - B - ιB, R - S) = log((x_R - a)(x_S - b) / ((x_R - b)(x_S - a)))`.
#[test]
fn principal_divisor_of_x_quotient() {
    use padic_heights::padic::log_iwasawa;
    let d = setup(WMode::UnitRoot);
    let c = &d.curve;
    let n = point_precision(&d);
    let mut r = rng(4);
    let ab = ordinary_avoiding(c, &X107.1, &mut r, n, &[], 2);
    let rs = ordinary_avoiding(c, &X107.1, &mut r, n, &blocked(c, &[&ab[0], &ab[1]]), 2);
    let d1 = Divisor::new(vec![
        (ab[0].clone(), 1),
        (involution(c, &ab[0]), 1),
        (ab[1].clone(), -1),
        (involution(c, &ab[1]), -1),
    ]);
    let got = h(&d, &d1, &diff(&rs[0], &rs[1])).value;
    let x = |p: &CurvePoint| p.x().unwrap().clone();
    let (a, b, xr, xs) = (x(&ab[0]), x(&ab[1]), x(&rs[0]), x(&rs[1]));
    let want = log_iwasawa(&((&xr - &a) * (&xs - &b)).div(&((&xr - &b) * (&xs - &a))).unwrap()).unwrap();
    assert!(agree(&got, &want, N), "{} vs {}", got, want);
}

#[test]
fn bilinear_and_pairing_order_free() {
    let d = setup(WMode::Symplectic);
    let c = &d.curve;
    let n = point_precision(&d);
    let mut r = rng(5);
    let pqt = ordinary_avoiding(c, &X107.1, &mut r, n, &[], 3);
    let rs = ordinary_avoiding(c, &X107.1, &mut r, n, &blocked(c, &[&pqt[0], &pqt[1], &pqt[2]]), 2);
    let d2 = diff(&rs[0], &rs[1]);
    let a = h(&d, &diff(&pqt[0], &pqt[1]), &d2).value;
    let b = h(&d, &diff(&pqt[1], &pqt[2]), &d2).value;
    let ab = h(&d, &diff(&pqt[0], &pqt[2]), &d2).value;
    assert!(agree(&(&a + &b), &ab, N));
    let e1 = Divisor::new(vec![(pqt[0].clone(), 1), (pqt[1].clone(), 1), (pqt[2].clone(), -2)]);
    let e2 = Divisor::new(vec![(pqt[1].clone(), 1), (pqt[2].clone(), -2), (pqt[0].clone(), 1)]);
    let x = h(&d, &e1, &d2).value;
    let y = h(&d, &e2, &d2).value;
    assert!(agree(&x, &y, N));
    assert!(agree(&x, &(&ab + &b), N), "{} vs h(P - T) + h(Q - T)", x);
}

#[test]
fn verify_mode_agrees() {
    let d = setup(WMode::UnitRoot);
    let c = &d.curve;
    let n = point_precision(&d);
    let mut r = rng(6);
    let pq = ordinary_avoiding(c, &X107.1, &mut r, n, &[], 2);
    let rs = ordinary_avoiding(c, &X107.1, &mut r, n, &blocked(c, &[&pq[0], &pq[1]]), 2);
    let opts = HeightOptions { verify: true };
    let v = height_pairing(&d, &diff(&pq[0], &pq[1]), &diff(&rs[0], &rs[1]), opts).unwrap();
    assert!(v.trace.contains(&Branch::Antisymmetric));
    let s = setup(WMode::Symplectic);
    assert!(height_pairing(&s, &diff(&pq[0], &pq[1]), &diff(&rs[0], &rs[1]), opts).is_err());
}
