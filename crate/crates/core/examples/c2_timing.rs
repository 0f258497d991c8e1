//! Times the C_2 height at the precision given as the first argument.

use std::time::Instant;

use num_rational::BigRational;
use padic_heights::cohomology::WMode;
use padic_heights::curve::PointSpec;
use padic_heights::heights::{compute_height, HeightOptions, HeightRequest};

fn main() {
    let n: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let f = [576, -820, 273, -30, 1, 1].iter().map(|&c| BigRational::from_integer(c.into())).collect();
    let req = HeightRequest {
        p: 7,
        f,
        prec: n,
        w_mode: WMode::UnitRoot,
        d1: vec![(PointSpec::integers(1, 1), 1), (PointSpec::integers(4, 32), -1)],
        d2: vec![(PointSpec::integers(9, 243), 1), (PointSpec::integers(16, 1024), -1)],
        base_point: None,
        options: HeightOptions::default(),
        cache: None,
    };
    let t = Instant::now();
    let r = compute_height(&req).expect("height");
    println!("{}", r.value);
    println!("N = {}, {:.2} s", n, t.elapsed().as_secs_f64());
}
