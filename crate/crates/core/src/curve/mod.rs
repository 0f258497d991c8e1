//! Hyperelliptic curves `y^2 = f(x)`, their points, residue discs and local expansions.

mod expansion;
mod map;
mod model;
mod point;
pub(crate) mod poly;

pub use expansion::{expand_odd_differential, local_expansion, LocalExpansion, OddDifferential, Uniformizer};
pub use map::{map_point, normalize_model, scan_base_point, MapKind, ModelMap};
pub use model::{build_curve, build_curve_rational, HyperellipticCurve};
pub use point::{
    classify_point, involution, is_weierstrass_point, same_disc, teichmuller_point, weierstrass_point, Coordinate, CurvePoint,
    DiscClass, DiscKind, PointSpec,
};
