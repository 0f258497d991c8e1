use num_rational::BigRational;
use padic_heights::cohomology::WMode;
use padic_heights::curve::PointSpec;
use padic_heights::heights::{compute_height, HeightOptions, HeightRequest};

const C2_VALUE: &str = "5*7 + 4*7^3 + 6*7^4 + 3*7^5 + 3*7^6 + 4*7^7 + 4*7^8 + 6*7^9 + O(7^10)";

fn c2_request(base: Option<PointSpec>, mode: WMode) -> HeightRequest {
    let f = [576, -820, 273, -30, 1, 1].iter().map(|&c| BigRational::from_integer(c.into())).collect();
    HeightRequest {
        p: 7,
        f,
        prec: 10,
        w_mode: mode,
        d1: vec![(PointSpec::integers(1, 1), 1), (PointSpec::integers(4, 32), -1)],
        d2: vec![(PointSpec::integers(9, 243), 1), (PointSpec::integers(16, 1024), -1)],
        base_point: base,
        options: HeightOptions::default(),
        cache: None,
    }
}

#[test]
fn c2_golden_scanned_base() {
    let r = compute_height(&c2_request(None, WMode::UnitRoot)).unwrap();
    assert_eq!(r.value.to_canonical_string(), C2_VALUE);
    assert_eq!(r.precision, 10);
}

#[test]
fn c2_golden_base_at_p() {
    let r = compute_height(&c2_request(Some(PointSpec::integers(1, 1)), WMode::UnitRoot)).unwrap();
    assert_eq!(r.value.to_canonical_string(), C2_VALUE);
}
