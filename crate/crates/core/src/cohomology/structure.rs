//! The η basis, Frobenius on it, the cup product and isotropic complements.

use crate::curve::{expand_odd_differential, CurvePoint, HyperellipticCurve, OddDifferential};
use crate::error::{Error, Result};
use crate::padic::{Padic, PadicMatrix};

/// Residue constants `c_i = Res_{∞-}(ω_i)` for `i = 0..=2g`, with `c_i = 0` for `i < g` and `c_g = 1`.
///
/// `η_i = ω_i` for `i < g` and `η_i = ω_{i+1} - c_{i+1} ω_g` for `g <= i < 2g`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaBasis {
    pub genus: usize,
    pub c: Vec<Padic>,
}

impl EtaBasis {
    /// Coefficients of `η_i` on `ω_0, ..., ω_2g`.
    pub fn eta_in_omega(&self, i: usize) -> Vec<Padic> {
        let g = self.genus;
        let p = self.c[0].prime();
        let n = self.c.iter().map(|c| c.precision()).min().unwrap_or(0);
        let mut v = vec![Padic::zero(p, n); 2 * g + 1];
        if i < g {
            v[i] = Padic::one(p, n);
        } else {
            v[i + 1] = Padic::one(p, n);
            v[g] = self.c[i + 1].neg_ref();
        }
        v
    }

    pub fn eta(&self, i: usize) -> OddDifferential {
        OddDifferential::combination(&self.eta_in_omega(i))
    }

    /// `∫η_i` from the integrals of `ω_0, ..., ω_2g`.
    pub fn eta_integrals(&self, omega: &[Padic]) -> Vec<Padic> {
        let g = self.genus;
        (0..2 * g)
            .map(|i| if i < g { omega[i].clone() } else { &omega[i + 1] - &self.c[i + 1] * &omega[g] })
            .collect()
    }

    /// `Σ a_i η_i` rewritten on the `ω` basis.
    pub fn to_omega(&self, a: &[Padic]) -> Vec<Padic> {
        let g = self.genus;
        let p = self.c[0].prime();
        let n = a.iter().map(|x| x.precision()).min().unwrap_or(0);
        let mut v = vec![Padic::zero(p, n); 2 * g + 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, e) in self.eta_in_omega(i).iter().enumerate() {
                if !e.is_zero() {
                    v[j] = &v[j] + ai * e;
                }
            }
        }
        v
    }
}

pub fn eta_basis_constants(curve: &HyperellipticCurve) -> Result<EtaBasis> {
    curve.assert_normal_form()?;
    let g = curve.genus();
    let p = curve.prime();
    let n = curve.precision();
    let c = (0..=2 * g)
        .map(|i| {
            let w = OddDifferential::omega(p, i, n);
            Ok(expand_odd_differential(curve, &w, &CurvePoint::InfMinus, 1)?.residue())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EtaBasis { genus: g, c })
}

/// Frobenius on `η_0, ..., η_{2g-1}`: delete row and column `g` of `Φ`, correcting the columns by `c`.
pub fn eta_frobenius(phi: &PadicMatrix, eta: &EtaBasis) -> PadicMatrix {
    let g = eta.genus;
    let p = phi.prime();
    let rows: Vec<usize> = (0..2 * g + 1).filter(|&i| i != g).collect();
    let data = rows
        .iter()
        .map(|&i| {
            (0..2 * g)
                .map(|k| {
                    if k < g {
                        phi.get(i, k).clone()
                    } else {
                        phi.get(i, k + 1) - &eta.c[k + 1] * phi.get(i, g)
                    }
                })
                .collect()
        })
        .collect();
    PadicMatrix::from_rows(p, data)
}

/// `M_ij = 2 Res_{∞+}(η_j ∫η_i)`.
pub fn cup_product_matrix(curve: &HyperellipticCurve, eta: &EtaBasis) -> Result<PadicMatrix> {
    let g = eta.genus;
    let p = curve.prime();
    let k = 2 * g as i64 + 3;
    let series = (0..2 * g)
        .map(|i| expand_odd_differential(curve, &eta.eta(i), &CurvePoint::InfPlus, k))
        .collect::<Result<Vec<_>>>()?;
    let integrals = series.iter().map(|s| s.antiderivative()).collect::<Result<Vec<_>>>()?;
    let two = Padic::from_i64(p, 2, curve.precision());
    let data = (0..2 * g)
        .map(|i| (0..2 * g).map(|j| series[j].mul(&integrals[i]).residue() * &two).collect())
        .collect();
    Ok(PadicMatrix::from_rows(p, data))
}

fn idx(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

/// The complement `W = [A; B]` with `B = M12^-1`, `A = ½ Bᵀ M22 B`; together with
/// `η_0, ..., η_{g-1}` its columns form a symplectic basis.
pub fn symplectic_complement(m: &PadicMatrix, g: usize) -> Result<PadicMatrix> {
    let m12 = m.submatrix(&idx(0, g), &idx(g, 2 * g));
    let m22 = m.submatrix(&idx(g, 2 * g), &idx(g, 2 * g));
    let b = m12.inverse()?;
    let s = b.transpose().mul(&m22).mul(&b);
    let half = Padic::from_i64(m.prime(), 2, s.min_precision()).inv()?;
    let a = s.scale(&half);
    let rows = a.to_rows().into_iter().chain(b.to_rows()).collect();
    Ok(PadicMatrix::from_rows(m.prime(), rows))
}

/// Whether `charpoly(Frob)` has exactly `g` roots of valuation zero.
pub fn is_ordinary(frob: &PadicMatrix, g: usize) -> bool {
    let cp = frob.charpoly();
    cp.get(g).map(|c| c.valuation() == Some(0)).unwrap_or(false)
}

/// Unit-root subspace: `Frob^n` applied to the coordinates of `η_g, ..., η_{2g-1}`,
/// normalised so the bottom block is the identity.
pub fn unit_root_subspace(frob: &PadicMatrix, g: usize, n: usize) -> Result<PadicMatrix> {
    if !is_ordinary(frob, g) {
        return Err(Error::NotOrdinary);
    }
    let p = frob.prime();
    let prec = frob.min_precision();
    let rows = (0..2 * g)
        .map(|r| (0..g).map(|c| if r == g + c { Padic::one(p, prec) } else { Padic::zero(p, prec) }).collect())
        .collect();
    let mut v = PadicMatrix::from_rows(p, rows);
    for _ in 0..n {
        v = frob.mul(&v);
    }
    let bottom = v.submatrix(&idx(g, 2 * g), &idx(0, g));
    Ok(v.mul(&bottom.inverse()?))
}

/// First `g` coordinates of `ψ` in the basis `η_0, ..., η_{g-1}, κ_0, ..., κ_{g-1}`.
pub fn mixed_coordinates(w: &PadicMatrix, psi: &[Padic], g: usize) -> Result<Vec<Padic>> {
    let p = w.prime();
    let prec = w.min_precision();
    let rows = (0..2 * g)
        .map(|r| {
            let mut row: Vec<Padic> =
                (0..g).map(|c| if r == c { Padic::one(p, prec) } else { Padic::zero(p, prec) }).collect();
            row.extend(w.row(r));
            row
        })
        .collect();
    let basis = PadicMatrix::from_rows(p, rows);
    let u = basis.solve_vector(psi)?;
    Ok(u[..g].to_vec())
}
