//! Property tests for points, the involution, model changes and local expansions.

mod common;

use common::*;
use proptest::prelude::*;

use padic_heights::curve::{
    classify_point, involution, local_expansion, map_point, normalize_model, Coordinate, CurvePoint, DiscKind, PointSpec,
};

const N: i64 = 20;

fn ordinary_x() -> impl Strategy<Value = i64> {
    // x ≡ 1 mod 7 lies in an ordinary disc of X0+(107).
    (0i64..2000).prop_map(|k| 1 + 7 * k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn involution_is_an_involution(x in ordinary_x()) {
        let c = curve(X107, N);
        let spec = PointSpec::Affine { x: Coordinate::integer(x), y: None, y_residue: None };
        let pt = spec.realize(&c, N).unwrap();
        let ip = involution(&c, &pt);
        prop_assert!(c.check_point(&ip).is_ok());
        prop_assert_eq!(involution(&c, &ip), pt.clone());
        prop_assert!(classify_point(&c, &ip).unwrap() != classify_point(&c, &pt).unwrap());
    }

    #[test]
    fn tau_images_lie_on_the_target(x in ordinary_x(), flip in any::<bool>()) {
        // C2 is odd degree; τ at (1, 1) gives the normal model.
        let c2 = padic_heights::curve::build_curve(7, &[576, -820, 273, -30, 1, 1], N).unwrap();
        let (target, map) = normalize_model(&c2, Some(&PointSpec::integers(1, 1))).unwrap();
        prop_assert!(target.is_normal());
        let x = x - 1; // x ≡ 0, away from the base disc x ≡ 1
        let spec = PointSpec::Affine { x: Coordinate::integer(x), y: None, y_residue: None };
        let pt = spec.realize(&c2, N).unwrap();
        let pt = if flip { involution(&c2, &pt) } else { pt };
        let img = map_point(&map, &pt).unwrap();
        prop_assert!(target.check_point(&img).is_ok());
        // τ commutes with ι.
        let a = map_point(&map, &involution(&c2, &pt)).unwrap();
        prop_assert!(a.agrees_with(&involution(&target, &img)));
    }

    #[test]
    fn local_expansions_satisfy_the_equation(x in ordinary_x()) {
        let c = curve(X107, N);
        let spec = PointSpec::Affine { x: Coordinate::integer(x), y: None, y_residue: None };
        let pt = spec.realize(&c, N).unwrap();
        let k = 12;
        for center in [pt, CurvePoint::InfMinus, CurvePoint::InfPlus] {
            let e = local_expansion(&c, &center, k).unwrap();
            let d = e.y.mul(&e.y).sub(&e.x.compose_poly(c.coefficients()));
            for j in d.lowest()..(d.lowest() + k).min(d.order()) {
                prop_assert!(d.coefficient(j).is_zero(), "t^{} residual at {}", j, center.label());
            }
        }
    }

    #[test]
    fn infinite_disc_points_classify_by_sign(seed in 0u64..1000) {
        let c = curve(X107, N);
        let mut r = rng(seed);
        for kind in [DiscKind::InfinitePlus, DiscKind::InfiniteMinus] {
            let pt = infinite_disc_point(&c, &mut r, N, kind);
            prop_assert_eq!(classify_point(&c, &pt).unwrap().kind, kind);
            prop_assert!(pt.x().unwrap().ord() < 0);
        }
    }
}

#[test]
fn base_point_goes_to_infinity_minus() {
    let c2 = padic_heights::curve::build_curve(7, &[576, -820, 273, -30, 1, 1], N).unwrap();
    let (_, map) = normalize_model(&c2, Some(&PointSpec::integers(1, 1))).unwrap();
    let base = PointSpec::integers(1, 1).realize(&c2, N).unwrap();
    assert_eq!(map_point(&map, &base).unwrap(), CurvePoint::InfMinus);
    assert_eq!(map_point(&map, &involution(&c2, &base)).unwrap(), CurvePoint::InfPlus);
}
