//! Local Coleman–Gross height pairing at `p`.

mod compute;
mod pairing;

pub use compute::{compute_height, prepare_model, HeightRequest, PointInput};
pub use pairing::{
    height_affine, height_antisymmetric, height_inf_inf, height_one_infinity, height_pairing, psi_antisymmetric, psi_omega_g,
    verify_antisymmetric, HeightOptions, Sign,
};

use std::fmt;

use crate::cohomology::WMode;
use crate::curve::CurvePoint;
use crate::error::{Error, Result};
use crate::padic::Padic;

/// Finite formal sum of points.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Divisor {
    pub terms: Vec<(CurvePoint, i64)>,
}

impl Divisor {
    pub fn new(terms: Vec<(CurvePoint, i64)>) -> Self {
        let mut d = Divisor { terms: Vec::new() };
        for (pt, n) in terms {
            d.add_point(pt, n);
        }
        d
    }

    /// `P - Q`.
    pub fn difference(p: CurvePoint, q: CurvePoint) -> Self {
        Divisor::new(vec![(p, 1), (q, -1)])
    }

    pub fn add_point(&mut self, pt: CurvePoint, n: i64) {
        if let Some(e) = self.terms.iter_mut().find(|(q, _)| *q == pt) {
            e.1 += n;
        } else {
            self.terms.push((pt, n));
        }
        self.terms.retain(|(_, n)| *n != 0);
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(_, n)| n).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Writes a degree-zero divisor as `Σ (P_i - Q_i)`, pairing positive and negative
    /// points in input order.
    pub fn pairs(&self) -> Result<Vec<(CurvePoint, CurvePoint)>> {
        if self.degree() != 0 {
            return Err(Error::Invalid(format!("divisor has degree {}, expected 0", self.degree())));
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (pt, n) in &self.terms {
            let list = if *n > 0 { &mut pos } else { &mut neg };
            for _ in 0..n.unsigned_abs() {
                list.push(pt.clone());
            }
        }
        Ok(pos.into_iter().zip(neg).collect())
    }

    pub fn support_meets(&self, o: &Divisor) -> bool {
        self.terms.iter().any(|(a, _)| o.terms.iter().any(|(b, _)| a.agrees_with(b)))
    }
}

/// Which formula produced (part of) a height.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `h(∞- - ∞+, R - S)` from `ψ(ω_g)`.
    InfinityPair,
    /// `h(P - ιP, R - S)` through the model `C'_P`.
    Antisymmetric,
    /// `h(P - ιP, R - S)` as a tiny integral when `R`, `S` share a disc.
    AntisymmetricTiny,
    /// Four affine points, symmetric plus antisymmetric parts.
    Affine,
    /// One point at infinity.
    OneInfinity,
    /// Endpoint in a disc at infinity.
    InfiniteDisc,
    /// Splitting through `h(P - ιP, R - ιR)`.
    SymmetricSplit,
    /// Divisor fixed by the involution.
    Weierstrass,
    /// Arguments swapped by symmetry.
    Swapped,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::InfinityPair => "infinity-pair",
            Branch::Antisymmetric => "antisymmetric",
            Branch::AntisymmetricTiny => "antisymmetric-tiny",
            Branch::Affine => "affine",
            Branch::OneInfinity => "one-infinity",
            Branch::InfiniteDisc => "infinite-disc",
            Branch::SymmetricSplit => "symmetric-split",
            Branch::Weierstrass => "weierstrass",
            Branch::Swapped => "swapped",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A local height with its attained precision and the branches that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct HeightResult {
    pub value: Padic,
    pub precision: i64,
    pub trace: Vec<Branch>,
    pub w_mode: WMode,
}

impl HeightResult {
    pub(crate) fn new(value: Padic, trace: Vec<Branch>, w_mode: WMode) -> Self {
        let mut t = Vec::new();
        for b in trace {
            if !t.contains(&b) {
                t.push(b);
            }
        }
        HeightResult { precision: value.precision(), value, trace: t, w_mode }
    }

    pub fn truncated(&self, n: i64) -> HeightResult {
        let value = self.value.with_precision(n);
        HeightResult { precision: value.precision(), value, trace: self.trace.clone(), w_mode: self.w_mode }
    }
}
