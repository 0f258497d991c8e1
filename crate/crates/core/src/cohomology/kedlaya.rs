//! Frobenius action on the odd part of Monsky–Washnitzer cohomology.
//!
//! `φ*(ω_i) = p x^(p(i+1)-1) y^-p Σ_k binom(-1/2, k) E^k y^(-2pk) dx` with
//! `E = f(x^p) - f(x)^p`, reduced with `d(β y^-(2m-1))` and `d(x^j y)` until only
//! `ω_0, ..., ω_2g` remain. All arithmetic happens in `Z/p^K` on values scaled by
//! `p^S`, which keeps the reduction loop free of per-coefficient precision bookkeeping.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::curve::HyperellipticCurve;
use crate::error::{Error, Result};
use crate::padic::{floor_log, prime_power, Padic, PadicMatrix};

type Poly = Vec<BigUint>;

/// `Z/p^k`.
struct Ring {
    p: u64,
    m: BigUint,
}

/// Raised when an intermediate value has a larger denominator than the scale allows.
struct ScaleTooSmall;

impl Ring {
    fn new(p: u64, k: i64) -> Self {
        Ring { p, m: (*prime_power(p, k)).clone() }
    }

    #[cfg(test)]
    fn elem(&self, n: i64) -> BigUint {
        let a = BigUint::from(n.unsigned_abs()) % &self.m;
        if n < 0 {
            self.neg(&a)
        } else {
            a
        }
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.m {
            s - &self.m
        } else {
            s
        }
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.m - (b - a)
        }
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            a.clone()
        } else {
            &self.m - a
        }
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.m
    }

    fn inv_unit(&self, a: &BigUint) -> Option<BigUint> {
        a.modinv(&self.m)
    }

    /// `x / n` for a value known to be divisible by the p-part of `n`.
    fn div_int(&self, x: &BigUint, n: i64) -> std::result::Result<BigUint, ScaleTooSmall> {
        let mut e = 0u32;
        let mut u = n.unsigned_abs();
        while u.is_multiple_of(self.p) {
            u /= self.p;
            e += 1;
        }
        let mut y = self.mul(x, &self.inv_unit(&BigUint::from(u)).expect("unit"));
        if n < 0 {
            y = self.neg(&y);
        }
        if e == 0 {
            return Ok(y);
        }
        let pe = BigUint::from(self.p).pow(e);
        let (q, r) = y.div_rem(&pe);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ScaleTooSmall)
        }
    }

    fn poly_add_assign(&self, a: &mut Poly, b: &[BigUint]) {
        if a.len() < b.len() {
            a.resize(b.len(), BigUint::zero());
        }
        for (x, y) in a.iter_mut().zip(b) {
            if !y.is_zero() {
                *x = self.add(x, y);
            }
        }
    }

    fn poly_mul(&self, a: &[BigUint], b: &[BigUint]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
            // keep the accumulators from growing without bound
            if i % 32 == 31 {
                for c in out.iter_mut() {
                    *c %= &self.m;
                }
            }
        }
        for c in out.iter_mut() {
            *c %= &self.m;
        }
        out
    }

    fn poly_scale(&self, a: &[BigUint], c: &BigUint) -> Poly {
        a.iter().map(|x| self.mul(x, c)).collect()
    }

    /// Quotient and remainder by a monic polynomial.
    fn divmod_monic(&self, a: &[BigUint], f: &[BigUint]) -> (Poly, Poly) {
        let d = f.len() - 1;
        if a.len() <= d {
            return (Vec::new(), a.to_vec());
        }
        let mut r = a.to_vec();
        let mut q = vec![BigUint::zero(); a.len() - d];
        for k in (0..q.len()).rev() {
            let c = r[k + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, fj) in f.iter().enumerate().take(d) {
                if !fj.is_zero() {
                    r[k + j] = self.sub(&r[k + j], &self.mul(&c, fj));
                }
            }
            r[k + d] = BigUint::zero();
            q[k] = c;
        }
        r.truncate(d);
        (q, r)
    }

    fn derivative(&self, a: &[BigUint]) -> Poly {
        a.iter().enumerate().skip(1).map(|(i, c)| self.mul(c, &BigUint::from(i))).collect()
    }

    /// Solves the square system by elimination with unit pivots.
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, mut a: Vec<Vec<BigUint>>, mut b: Vec<BigUint>) -> Option<Vec<BigUint>> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n).find(|&r| !(&a[r][col] % self.p).is_zero())?;
            a.swap(col, piv);
            b.swap(col, piv);
            let inv = self.inv_unit(&a[col][col])?;
            for j in col..n {
                a[col][j] = self.mul(&a[col][j], &inv);
            }
            b[col] = self.mul(&b[col], &inv);
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let k = a[r][col].clone();
                for j in col..n {
                    let v = self.mul(&k, &a[col][j]);
                    a[r][j] = self.sub(&a[r][j], &v);
                }
                let v = self.mul(&k, &b[col]);
                b[r] = self.sub(&b[r], &v);
            }
        }
        Some(b)
    }
}

/// Primitive `h_i = Σ_n P_n(x) y^n` with `φ*(ω_i) = dh_i + Σ_j Φ_ji ω_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusPrimitive {
    /// `y`-exponent to the polynomial in `x` multiplying it.
    pub terms: BTreeMap<i64, Vec<Padic>>,
}

impl FrobeniusPrimitive {
    /// Value at an affine point with `y` a unit.
    pub fn eval(&self, x: &Padic, y: &Padic) -> Result<Padic> {
        let p = x.prime();
        let n = x.precision().min(y.precision());
        let mut acc = Padic::zero(p, n);
        let yinv = y.inv()?;
        let y2inv = &yinv * &yinv;
        // walk the negative exponents downwards, one factor y^-2 at a time
        let mut cur_e = -1i64;
        let mut cur = yinv.clone();
        for (&e, poly) in self.terms.iter().rev() {
            let ypow = if e >= 0 {
                y.pow(e as u64)
            } else {
                while cur_e > e {
                    cur = &cur * &y2inv;
                    cur_e -= 2;
                }
                if cur_e != e {
                    y.powi(e)?
                } else {
                    cur.clone()
                }
            };
            acc = acc + crate::curve::poly::eval(poly, x) * ypow;
        }
        Ok(acc)
    }
}

/// Frobenius matrix `Φ` and primitives `h_i` on `ω_0, ..., ω_2g`.
///
/// Column `j` of `phi` holds the coordinates of `φ*(ω_j)`: `Φ_ij` is the coefficient of `ω_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct MWFrobeniusData {
    pub phi: PadicMatrix,
    pub h: Vec<FrobeniusPrimitive>,
    pub precision: i64,
}

struct Sizing {
    nterms: usize,
    scale: i64,
    loss: i64,
    modulus: i64,
}

fn sizing(p: u64, n: i64, extra_scale: i64) -> Sizing {
    let mut nterms = (n + 2) as usize;
    loop {
        let m_top = (p as usize * (2 * (nterms - 1) + 1) - 1) / 2;
        let lg = floor_log(p, (2 * m_top + 1) as u64) as i64;
        let loss = 2 * lg + 1;
        let want = (n + 2 * loss) as usize;
        if want <= nterms {
            let scale = lg + 1 + extra_scale;
            return Sizing { nterms, scale, loss, modulus: n + scale + loss };
        }
        nterms = want;
    }
}

/// Digits the reduction loses for a target precision `n`; the curve must be known to `n` plus this.
pub fn frobenius_precision_loss(p: u64, n: i64) -> i64 {
    sizing(p, n, 0).loss
}

/// Frobenius structure to absolute precision `n` (less if the curve coefficients are coarser).
pub fn frobenius_structure(curve: &HyperellipticCurve, n: i64) -> Result<MWFrobeniusData> {
    curve.assert_normal_form()?;
    for extra in 0..8 {
        let sz = sizing(curve.prime(), n, extra);
        match run(curve, n, &sz) {
            Ok(d) => return Ok(d),
            Err(None) => continue,
            Err(Some(e)) => return Err(e),
        }
    }
    Err(Error::precision("Frobenius reduction needs an unexpectedly large scale"))
}

fn run(curve: &HyperellipticCurve, n: i64, sz: &Sizing) -> std::result::Result<MWFrobeniusData, Option<Error>> {
    let p = curve.prime();
    let g = curve.genus();
    let d = curve.degree();
    let ring = Ring::new(p, sz.modulus);
    let to_ring = |c: &Padic| -> std::result::Result<BigUint, Option<Error>> {
        c.to_biguint_mod(sz.modulus).ok_or_else(|| Some(Error::domain("curve coefficients must be p-integral")))
    };
    let f: Poly = curve.coefficients().iter().map(to_ring).collect::<std::result::Result<_, _>>()?;
    let df = ring.derivative(&f);

    // a f + b f' = 1 with deg a <= d-2, deg b <= d-1
    let size = 2 * d - 1;
    let mut sys = vec![vec![BigUint::zero(); size]; size];
    for i in 0..d - 1 {
        for (j, c) in f.iter().enumerate() {
            sys[i + j][i] = c.clone();
        }
    }
    for i in 0..d {
        for (j, c) in df.iter().enumerate() {
            sys[i + j][d - 1 + i] = c.clone();
        }
    }
    let mut rhs = vec![BigUint::zero(); size];
    rhs[0] = BigUint::one();
    let sol = ring.solve(sys, rhs).ok_or(Some(Error::BadReduction))?;
    let bez_b: Poly = sol[d - 1..].to_vec();

    // E = f(x^p) - f(x)^p and its powers
    let mut e_poly = vec![BigUint::zero(); d * p as usize + 1];
    for (i, c) in f.iter().enumerate() {
        e_poly[i * p as usize] = c.clone();
    }
    let mut fp = vec![BigUint::one()];
    for _ in 0..p {
        fp = ring.poly_mul(&fp, &f);
    }
    for (i, c) in fp.iter().enumerate() {
        e_poly[i] = ring.sub(&e_poly[i], c);
    }
    let mut epows: Vec<Poly> = vec![vec![BigUint::one()]];
    for _ in 1..sz.nterms {
        let next = ring.poly_mul(epows.last().expect("nonempty"), &e_poly);
        epows.push(next);
    }

    // p^S * p * binom(-1/2, k) = p^(S+1) (-1)^k C(2k,k) / 4^k
    let scale = BigUint::from(p).pow(sz.scale as u32) % &ring.m;
    let inv4 = ring.inv_unit(&BigUint::from(4u32)).expect("p odd");
    let mut coef = Vec::with_capacity(sz.nterms);
    let mut central = BigUint::one();
    let mut inv4k = BigUint::one();
    for k in 0..sz.nterms {
        if k > 0 {
            let kk = k as u64;
            central = central * BigUint::from(2 * (2 * kk - 1)) / BigUint::from(kk);
            inv4k = ring.mul(&inv4k, &inv4);
        }
        let mut c = ring.mul(&ring.mul(&(&central % &ring.m), &inv4k), &ring.mul(&scale, &BigUint::from(p)));
        if k % 2 == 1 {
            c = ring.neg(&c);
        }
        coef.push(c);
    }

    let m_of = |k: usize| (p as usize * (2 * k + 1) - 1) / 2;
    let m_top = m_of(sz.nterms - 1);
    let half = ring.inv_unit(&BigUint::from(2u32)).expect("p odd");
    let df_half = ring.poly_scale(&df, &half);

    let mut phi = vec![vec![BigUint::zero(); 2 * g + 1]; 2 * g + 1];
    let mut hs_raw: Vec<BTreeMap<i64, Poly>> = Vec::with_capacity(2 * g + 1);
    let too_small = |_: ScaleTooSmall| None;

    for i in 0..=2 * g {
        let mut levels: Vec<Option<Poly>> = vec![None; m_top + 1];
        let shift = p as usize * (i + 1) - 1;
        for k in 0..sz.nterms {
            let mut a = vec![BigUint::zero(); shift];
            a.extend(ring.poly_scale(&epows[k], &coef[k]));
            let m = m_of(k);
            match &mut levels[m] {
                Some(l) => ring.poly_add_assign(l, &a),
                slot => *slot = Some(a),
            }
        }
        let mut h: BTreeMap<i64, Poly> = BTreeMap::new();
        for m in (1..=m_top).rev() {
            let Some(a) = levels[m].take() else { continue };
            let (q, r) = ring.divmod_monic(&a, &f);
            let (_, mut beta) = ring.divmod_monic(&ring.poly_mul(&r, &bez_b), &f);
            beta.resize(d, BigUint::zero());
            let mut num = r;
            let bf = ring.poly_mul(&beta, &df);
            num.resize(num.len().max(bf.len()), BigUint::zero());
            for (x, y) in num.iter_mut().zip(&bf) {
                *x = ring.sub(x, y);
            }
            let (alpha, _) = ring.divmod_monic(&num, &f);
            let s = 2 * m as i64 - 1;
            let dbeta: Poly = ring
                .derivative(&beta)
                .iter()
                .map(|c| ring.div_int(&ring.mul(c, &BigUint::from(2u32)), s))
                .collect::<std::result::Result<_, _>>()
                .map_err(too_small)?;
            let hterm: Poly = beta
                .iter()
                .map(|c| ring.div_int(&ring.mul(c, &BigUint::from(2u32)), -s))
                .collect::<std::result::Result<_, _>>()
                .map_err(too_small)?;
            if hterm.iter().any(|c| !c.is_zero()) {
                ring.poly_add_assign(h.entry(-s).or_default(), &hterm);
            }
            let next = levels[m - 1].get_or_insert_with(Vec::new);
            ring.poly_add_assign(next, &q);
            ring.poly_add_assign(next, &alpha);
            ring.poly_add_assign(next, &dbeta);
        }
        let mut a0 = levels[0].take().unwrap_or_default();
        for nn in (2 * g + 1..a0.len()).rev() {
            if a0[nn].is_zero() {
                continue;
            }
            let j = nn - 2 * g - 1;
            let lam = ring.div_int(&a0[nn], (j + g + 1) as i64).map_err(too_small)?;
            // G_j = j x^(j-1) f + x^j f'/2, from d(x^j y)
            let mut gj = vec![BigUint::zero(); j + d];
            if j > 0 {
                let jf = ring.poly_scale(&f, &BigUint::from(j));
                for (t, c) in jf.iter().enumerate() {
                    gj[j - 1 + t] = ring.add(&gj[j - 1 + t], c);
                }
            }
            for (t, c) in df_half.iter().enumerate() {
                gj[j + t] = ring.add(&gj[j + t], c);
            }
            let e = h.entry(1).or_default();
            if e.len() <= j {
                e.resize(j + 1, BigUint::zero());
            }
            e[j] = ring.add(&e[j], &lam);
            for (t, c) in gj.iter().enumerate() {
                a0[t] = ring.sub(&a0[t], &ring.mul(&lam, c));
            }
        }
        a0.resize(2 * g + 1, BigUint::zero());
        for (jj, row) in phi.iter_mut().enumerate() {
            row[i] = a0[jj].clone();
        }
        hs_raw.push(h);
    }

    let out = (sz.modulus - sz.scale).min(curve.precision()) - sz.loss;
    let out = out.min(n);
    if out < 1 {
        return Err(Some(Error::precision("curve coefficients too coarse for the Frobenius reduction")));
    }
    let conv = |x: &BigUint| Padic::from_parts(p, -sz.scale, x.clone(), sz.modulus - sz.scale).with_precision(out);
    let phi_m = PadicMatrix::from_rows(p, phi.iter().map(|r| r.iter().map(conv).collect()).collect());
    let h = hs_raw
        .into_iter()
        .map(|h| FrobeniusPrimitive {
            terms: h.into_iter().map(|(e, poly)| (e, poly.iter().map(conv).collect())).collect(),
        })
        .collect();
    Ok(MWFrobeniusData { phi: phi_m, h, precision: out })
}
