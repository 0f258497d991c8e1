use crate::error::{Error, Result};

use super::functions::hensel_sqrt;
use super::number::Padic;

/// Truncated Laurent series `Σ c_e t^e` for `lowest <= e < order`.
///
/// Coefficients at exponents `>= order` are unknown and never read.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicSeries {
    p: u64,
    lowest: i64,
    order: i64,
    coeffs: Vec<Padic>,
    prec: i64,
}

impl PadicSeries {
    /// Series with the given coefficients starting at `lowest`, known below `order`.
    /// `prec` is the precision used for padding coefficients.
    pub fn new(p: u64, lowest: i64, mut coeffs: Vec<Padic>, order: i64, prec: i64) -> Self {
        let len = (order - lowest).max(0) as usize;
        coeffs.truncate(len);
        while coeffs.len() < len {
            coeffs.push(Padic::zero(p, prec));
        }
        PadicSeries { p, lowest, order: order.max(lowest), coeffs, prec }
    }

    pub fn zero(p: u64, order: i64, prec: i64) -> Self {
        Self::new(p, 0, Vec::new(), order, prec)
    }

    pub fn constant(c: Padic, order: i64) -> Self {
        let prec = c.precision();
        Self::new(c.prime(), 0, vec![c], order, prec)
    }

    pub fn monomial(c: Padic, e: i64, order: i64) -> Self {
        let prec = c.precision();
        Self::new(c.prime(), e, vec![c], order, prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(self.prec).min(self.prec)
    }

    /// Coefficient of `t^e`; panics when `e >= order`.
    pub fn coefficient(&self, e: i64) -> Padic {
        assert!(e < self.order, "coefficient t^{} beyond truncation order {}", e, self.order);
        if e < self.lowest {
            Padic::zero(self.p, self.prec)
        } else {
            self.coeffs[(e - self.lowest) as usize].clone()
        }
    }

    fn coef_ref(&self, e: i64) -> Option<&Padic> {
        if e < self.lowest || e >= self.order {
            None
        } else {
            Some(&self.coeffs[(e - self.lowest) as usize])
        }
    }

    pub fn coefficients(&self) -> &[Padic] {
        &self.coeffs
    }

    /// Exponent of the first coefficient distinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.lowest + i as i64)
    }

    /// Smallest valuation among the known nonzero coefficients.
    pub fn min_coefficient_valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn add(&self, o: &PadicSeries) -> PadicSeries {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &PadicSeries) -> PadicSeries {
        self.combine(o, true)
    }

    fn combine(&self, o: &PadicSeries, negate: bool) -> PadicSeries {
        let lowest = self.lowest.min(o.lowest);
        let order = self.order.min(o.order);
        let prec = self.prec.min(o.prec);
        let coeffs = (lowest..order)
            .map(|e| match (self.coef_ref(e), o.coef_ref(e)) {
                (Some(a), Some(b)) => {
                    if negate {
                        a - b
                    } else {
                        a + b
                    }
                }
                (Some(a), None) => a.with_precision(prec),
                (None, Some(b)) => {
                    if negate {
                        b.neg_ref().with_precision(prec)
                    } else {
                        b.with_precision(prec)
                    }
                }
                (None, None) => Padic::zero(self.p, prec),
            })
            .collect();
        Self::new(self.p, lowest, coeffs, order, prec)
    }

    pub fn neg(&self) -> PadicSeries {
        let coeffs = self.coeffs.iter().map(|c| c.neg_ref()).collect();
        Self::new(self.p, self.lowest, coeffs, self.order, self.prec)
    }

    pub fn scale(&self, c: &Padic) -> PadicSeries {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::new(self.p, self.lowest, coeffs, self.order, self.prec)
    }

    pub fn mul(&self, o: &PadicSeries) -> PadicSeries {
        let lowest = self.lowest + o.lowest;
        let order = (self.lowest + o.order).min(o.lowest + self.order);
        let prec = self.prec.min(o.prec);
        let n = (order - lowest).max(0) as usize;
        let mut acc: Vec<Padic> = vec![Padic::zero(self.p, prec); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                acc[i + j] = &acc[i + j] + a * b;
            }
        }
        Self::new(self.p, lowest, acc, order, prec)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> PadicSeries {
        Self::new(self.p, self.lowest + k, self.coeffs.clone(), self.order + k, self.prec)
    }

    pub fn truncate(&self, order: i64) -> PadicSeries {
        Self::new(self.p, self.lowest, self.coeffs.clone(), order.min(self.order), self.prec)
    }

    /// Multiplicative inverse; the first coefficient distinguishable from zero leads.
    pub fn inverse(&self) -> Result<PadicSeries> {
        let e0 = self
            .valuation()
            .ok_or_else(|| Error::precision("inverting a series indistinguishable from zero"))?;
        let start = (e0 - self.lowest) as usize;
        let c = &self.coeffs[start..];
        let n = c.len();
        let c0inv = c[0].inv()?;
        let mut g: Vec<Padic> = Vec::with_capacity(n);
        g.push(c0inv.clone());
        for j in 1..n {
            let mut acc = Padic::zero(self.p, self.prec);
            for i in 1..=j {
                acc = acc + &c[i] * &g[j - i];
            }
            g.push(-(acc * &c0inv));
        }
        Ok(Self::new(self.p, -e0, g, -e0 + n as i64, self.prec))
    }

    /// Square root with the unit residue of the leading coefficient fixed by `hint`.
    pub fn sqrt(&self, hint: Option<u64>) -> Result<PadicSeries> {
        let e0 = self
            .valuation()
            .ok_or_else(|| Error::precision("square root of a series indistinguishable from zero"))?;
        if e0 % 2 != 0 {
            return Err(Error::domain("series square root needs an even leading exponent"));
        }
        let start = (e0 - self.lowest) as usize;
        let c = &self.coeffs[start..];
        let n = c.len();
        let s0 = hensel_sqrt(&c[0], hint)?;
        let inv2s0 = s0.mul_int(2).inv()?;
        let mut s: Vec<Padic> = Vec::with_capacity(n);
        s.push(s0);
        for j in 1..n {
            let mut acc = c[j].clone();
            for i in 1..j {
                acc = acc - &s[i] * &s[j - i];
            }
            s.push(acc * &inv2s0);
        }
        Ok(Self::new(self.p, e0 / 2, s, e0 / 2 + n as i64, self.prec))
    }

    /// Square root of a power series whose constant term is `s0^2`, with constant term `s0`.
    pub fn sqrt_from(&self, s0: &Padic) -> Result<PadicSeries> {
        if self.lowest != 0 {
            return Err(Error::domain("sqrt_from needs a power series"));
        }
        let c = &self.coeffs;
        let n = c.len();
        let inv2s0 = s0.mul_int(2).inv()?;
        let mut s: Vec<Padic> = Vec::with_capacity(n);
        if n > 0 {
            s.push(s0.clone());
        }
        for j in 1..n {
            let mut acc = c[j].clone();
            for i in 1..j {
                acc = acc - &s[i] * &s[j - i];
            }
            s.push(acc * &inv2s0);
        }
        Ok(Self::new(self.p, 0, s, self.order, self.prec))
    }

    pub fn derivative(&self) -> PadicSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul_int(self.lowest + i as i64))
            .collect();
        Self::new(self.p, self.lowest - 1, coeffs, self.order - 1, self.prec)
    }

    /// Termwise antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Result<PadicSeries> {
        if self.lowest <= -1 && -1 < self.order && !self.coefficient(-1).is_zero() {
            return Err(Error::LogTermRequired);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = self.lowest + i as i64;
                if e == -1 {
                    Padic::zero(self.p, self.prec)
                } else {
                    c.div_int(e + 1)
                }
            })
            .collect();
        Ok(Self::new(self.p, self.lowest + 1, coeffs, self.order + 1, self.prec))
    }

    /// Coefficient of `t^-1`.
    pub fn residue(&self) -> Padic {
        if self.lowest <= -1 && -1 < self.order {
            self.coefficient(-1)
        } else {
            Padic::zero(self.p, self.prec)
        }
    }

    /// Sum of the known terms at `t`. Truncation error is the caller's concern.
    pub fn evaluate(&self, t: &Padic) -> Result<Padic> {
        let mut acc = Padic::zero(self.p, self.prec);
        if self.coeffs.is_empty() {
            return Ok(acc);
        }
        let mut tp = t.powi(self.lowest)?;
        for c in &self.coeffs {
            acc = acc + c * &tp;
            tp = tp * t;
        }
        Ok(acc)
    }

    /// Composition `P(self)` for a polynomial `P` given by coefficients, lowest first.
    pub fn compose_poly(&self, poly: &[Padic]) -> PadicSeries {
        let Some((top, rest)) = poly.split_last() else {
            return PadicSeries::zero(self.p, self.order, self.prec);
        };
        let wide = self.order + (poly.len() as i64 + 1) * (self.lowest.abs() + 1);
        let mut acc = PadicSeries::constant(top.clone(), wide);
        for c in rest.iter().rev() {
            acc = acc.mul(self).add(&PadicSeries::constant(c.clone(), wide));
        }
        acc
    }
}

/// Termwise antiderivative with zero constant term.
pub fn formal_antiderivative(s: &PadicSeries) -> Result<PadicSeries> {
    s.antiderivative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Padic {
        Padic::from_i64(7, n, 12)
    }

    #[test]
    fn antiderivative_of_power() {
        let s = PadicSeries::monomial(c(1), 6, 10);
        let a = s.antiderivative().unwrap();
        let k = a.coefficient(7);
        assert_eq!(k.valuation(), Some(-1));
        assert_eq!(k.precision(), 11);
        let r = PadicSeries::monomial(c(1), -1, 3);
        assert_eq!(r.antiderivative(), Err(Error::LogTermRequired));
    }

    #[test]
    fn inverse_round_trip() {
        let s = PadicSeries::new(7, 0, vec![c(3), c(1), c(5), c(2)], 8, 12);
        let inv = s.inverse().unwrap();
        let prod = s.mul(&inv);
        assert!((prod.coefficient(0) - c(1)).is_zero());
        for e in 1..prod.order() {
            assert!(prod.coefficient(e).is_zero());
        }
    }

    #[test]
    fn laurent_inverse_shifts() {
        let s = PadicSeries::new(7, -2, vec![c(1), c(2)], 5, 12);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.lowest(), 2);
        assert_eq!(inv.order(), 9);
    }

    #[test]
    fn sqrt_squares_back() {
        let s = PadicSeries::new(7, 0, vec![c(2), c(1), c(3)], 10, 12);
        let r = s.sqrt(Some(3)).unwrap();
        let sq = r.mul(&r);
        for e in 0..sq.order() {
            assert!((sq.coefficient(e) - s.coefficient(e)).is_zero());
        }
    }
}
