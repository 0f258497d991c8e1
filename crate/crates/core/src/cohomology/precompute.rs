use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use crate::curve::HyperellipticCurve;
use crate::error::{Error, Result};
use crate::padic::{floor_log, Padic, PadicMatrix};

use super::kedlaya::{frobenius_precision_loss, frobenius_structure, MWFrobeniusData};
use super::structure::{
    cup_product_matrix, eta_basis_constants, eta_frobenius, mixed_coordinates, symplectic_complement, unit_root_subspace,
    EtaBasis,
};

/// Choice of the isotropic complement `W` of the holomorphic forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WMode {
    UnitRoot,
    Symplectic,
}

impl WMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            WMode::UnitRoot => "unit-root",
            WMode::Symplectic => "symplectic",
        }
    }
}

impl fmt::Display for WMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit-root" | "unit_root" | "unit" => Ok(WMode::UnitRoot),
            "symplectic" => Ok(WMode::Symplectic),
            _ => Err(Error::Invalid(format!("unknown W mode '{}'", s))),
        }
    }
}

/// Everything about a curve that height computations reuse.
pub struct PrecomputedData {
    pub curve: HyperellipticCurve,
    /// Requested precision `N`.
    pub target: i64,
    /// Precision the structures were computed at.
    pub n_work: i64,
    pub w_mode: WMode,
    pub frobenius: MWFrobeniusData,
    pub eta: EtaBasis,
    /// Frobenius on the η basis, columns are images.
    pub frob: PadicMatrix,
    /// Cup product matrix on the η basis.
    pub cup: PadicMatrix,
    /// Columns are the coordinates of `κ_0, ..., κ_{g-1}`.
    pub w: PadicMatrix,
    /// `ord_p det(Frob - pI)`.
    pub m: i64,
    /// `ord_p det(Φ - I)`.
    pub m1: i64,
    /// `ord_p det(M)`.
    pub m2: i64,
    /// `ψ(ω_g)` on the η basis.
    pub psi_g: Vec<Padic>,
    /// First `g` mixed-basis coordinates of `ψ(ω_g)`.
    pub u: Vec<Padic>,
    pub(crate) tau_cache: Mutex<HashMap<String, Arc<PrecomputedData>>>,
}

impl fmt::Debug for PrecomputedData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecomputedData")
            .field("curve", &self.curve.descriptor())
            .field("target", &self.target)
            .field("n_work", &self.n_work)
            .field("w_mode", &self.w_mode)
            .field("m", &self.m)
            .field("m1", &self.m1)
            .field("m2", &self.m2)
            .finish()
    }
}

fn det_valuation(a: &PadicMatrix, what: &str) -> Result<i64> {
    a.det().valuation().ok_or_else(|| Error::precision(format!("det({}) indistinguishable from zero", what)))
}

impl PrecomputedData {
    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    pub fn prime(&self) -> u64 {
        self.curve.prime()
    }

    /// Assembles the derived quantities from the stored structures.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        curve: HyperellipticCurve,
        target: i64,
        n_work: i64,
        w_mode: WMode,
        frobenius: MWFrobeniusData,
        eta: EtaBasis,
        cup: PadicMatrix,
        w: Option<PadicMatrix>,
    ) -> Result<Self> {
        let g = curve.genus();
        let p = curve.prime();
        let frob = eta_frobenius(&frobenius.phi, &eta);
        let prec = frob.min_precision();
        let pi = PadicMatrix::identity(p, 2 * g, prec).scale(&Padic::from_i64(p, p as i64, prec));
        let frob_p = frob.sub(&pi);
        let m = det_valuation(&frob_p, "Frob - pI")?;
        let ident = PadicMatrix::identity(p, 2 * g + 1, frobenius.phi.min_precision());
        let m1 = det_valuation(&frobenius.phi.sub(&ident), "Φ - I")?;
        let m2 = det_valuation(&cup, "M")?;
        let w = match w {
            Some(w) => w,
            None => match w_mode {
                WMode::UnitRoot => unit_root_subspace(&frob, g, n_work.max(0) as usize)?,
                WMode::Symplectic => symplectic_complement(&cup, g)?,
            },
        };
        let col: Vec<Padic> = (0..=2 * g).filter(|&i| i != g).map(|i| frobenius.phi.get(i, g).clone()).collect();
        let psi_g = frob_p.solve_vector(&col)?;
        let u = mixed_coordinates(&w, &psi_g, g)?;
        Ok(PrecomputedData {
            curve,
            target,
            n_work,
            w_mode,
            frobenius,
            eta,
            frob,
            cup,
            w,
            m,
            m1,
            m2,
            psi_g,
            u,
            tau_cache: Mutex::new(HashMap::new()),
        })
    }
}

fn build(curve: &HyperellipticCurve, target: i64, n: i64, mode: WMode) -> Result<PrecomputedData> {
    let p = curve.prime();
    let c = curve.at_precision(n + frobenius_precision_loss(p, n) + 2)?;
    let fr = frobenius_structure(&c, n)?;
    let eta = eta_basis_constants(&c)?;
    let cup = cup_product_matrix(&c, &eta)?;
    PrecomputedData::assemble(c, target, n, mode, fr, eta, cup, None)
}

/// Working precision for a target `n` given the loss valuations.
pub fn working_precision(p: u64, n: i64, losses: i64) -> i64 {
    n + losses + floor_log(p, (2 * (n + losses)).max(1) as u64) as i64 + 1
}

/// Frobenius structure, η basis, cup product and complement of a normal-form curve,
/// at a working precision inflated by the determinant valuations `m`, `m'`, `m''`.
pub fn precompute(curve: &HyperellipticCurve, n: i64, mode: WMode) -> Result<PrecomputedData> {
    curve.assert_normal_form()?;
    if n < 1 {
        return Err(Error::Invalid("precision must be positive".into()));
    }
    let p = curve.prime();
    let mut n_work = working_precision(p, n, 0) + 1;
    for _ in 0..6 {
        let d = build(curve, n, n_work, mode)?;
        let need = working_precision(p, n, d.m + d.m1 + d.m2);
        if need <= n_work {
            return Ok(d);
        }
        n_work = need;
    }
    Err(Error::precision("working precision did not stabilise"))
}
