use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};

thread_local! {
    static POWERS: RefCell<HashMap<(u64, u32), Rc<BigUint>>> = RefCell::new(HashMap::new());
}

/// `p^k`, memoised per thread.
pub(crate) fn prime_power(p: u64, k: i64) -> Rc<BigUint> {
    debug_assert!(k >= 0);
    let k = k as u32;
    POWERS.with(|cache| {
        if let Some(v) = cache.borrow().get(&(p, k)) {
            return v.clone();
        }
        let v = Rc::new(BigUint::from(p).pow(k));
        cache.borrow_mut().insert((p, k), v.clone());
        v
    })
}

pub(crate) fn mod_small(x: &BigUint, p: u64) -> u64 {
    let mut r: u128 = 0;
    for d in x.iter_u64_digits().rev() {
        r = ((r << 64) | d as u128) % p as u128;
    }
    r as u64
}

/// Splits a nonzero integer as `p^v * u` with `p` not dividing `u`.
pub(crate) fn split_valuation(p: u64, n: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut u = n.clone();
    let pb = BigInt::from(p);
    while !u.is_zero() && mod_small(u.magnitude(), p) == 0 {
        u /= &pb;
        v += 1;
    }
    (v, u)
}

/// Valuation of a machine integer; `i64::MAX` for zero.
pub fn valuation_i64(n: i64, p: u64) -> i64 {
    if n == 0 {
        return i64::MAX;
    }
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Element of Q_p known modulo `p^prec`.
///
/// A nonzero value is `p^val * unit` with `unit` coprime to `p` and reduced
/// modulo `p^(prec - val)`. Zero is `O(p^prec)` and stores `val == prec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u64,
    val: i64,
    unit: BigUint,
    prec: i64,
}

impl Padic {
    pub fn zero(p: u64, prec: i64) -> Self {
        Padic { p, val: prec, unit: BigUint::zero(), prec }
    }

    pub fn one(p: u64, prec: i64) -> Self {
        Self::from_i64(p, 1, prec)
    }

    pub fn from_i64(p: u64, n: i64, prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    pub fn from_bigint(p: u64, n: &BigInt, prec: i64) -> Self {
        if n.is_zero() {
            return Self::zero(p, prec);
        }
        let (v, u) = split_valuation(p, n);
        Self::from_unit_int(p, v, &u, prec)
    }

    /// Exact rational `num/den` rounded to absolute precision `prec`.
    pub fn from_rational(p: u64, r: &BigRational, prec: i64) -> Self {
        if r.numer().is_zero() {
            return Self::zero(p, prec);
        }
        let (vn, un) = split_valuation(p, r.numer());
        let (vd, ud) = split_valuation(p, r.denom());
        let v = vn - vd;
        if v >= prec {
            return Self::zero(p, prec);
        }
        let num = Self::from_unit_int(p, 0, &un, prec - v);
        let den = Self::from_unit_int(p, 0, &ud, prec - v);
        let q = num.mul_ref(&den.inv().expect("unit denominator"));
        q.shift(v)
    }

    fn from_unit_int(p: u64, v: i64, u: &BigInt, prec: i64) -> Self {
        if v >= prec {
            return Self::zero(p, prec);
        }
        let m = prime_power(p, prec - v);
        let mut r = u.magnitude() % &*m;
        if u.sign() == Sign::Minus {
            r = &*m - r;
        }
        Padic { p, val: v, unit: r, prec }
    }

    /// Builds `p^val * unit + O(p^prec)`, stripping any factors of `p` from `unit`.
    pub fn from_parts(p: u64, val: i64, unit: BigUint, prec: i64) -> Self {
        normalized(p, val, unit, prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Absolute precision `N`: the element is known modulo `p^N`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation, or `None` when indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Valuation, with zero reported as its precision.
    pub fn ord(&self) -> i64 {
        self.val
    }

    pub fn unit_part(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }

    /// Base-p digits of the unit part, lowest first, up to the last nonzero digit.
    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut u = self.unit.clone();
        while !u.is_zero() {
            out.push(mod_small(&u, self.p));
            u /= self.p;
        }
        out
    }

    /// Reduction modulo p, if the element is integral and known to at least one digit.
    pub fn residue(&self) -> Option<u64> {
        if self.prec < 1 || (!self.is_zero() && self.val < 0) {
            return None;
        }
        if self.is_zero() || self.val > 0 {
            Some(0)
        } else {
            Some(mod_small(&self.unit, self.p))
        }
    }

    /// Integer representative in `[0, p^prec)` for integral elements.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.val < 0 {
            return None;
        }
        let v = &self.unit * &*prime_power(self.p, self.val);
        Some(BigInt::from(v))
    }

    /// Integer representative modulo `p^k` for integral elements; digits beyond
    /// the known precision are taken to be zero.
    pub(crate) fn to_biguint_mod(&self, k: i64) -> Option<BigUint> {
        if self.is_zero() || self.val >= k {
            return Some(BigUint::zero());
        }
        if self.val < 0 {
            return None;
        }
        let v = &self.unit * &*prime_power(self.p, self.val);
        Some(v % &*prime_power(self.p, k))
    }

    /// Reduces the precision to `min(self.precision(), n)`.
    pub fn with_precision(&self, n: i64) -> Padic {
        if n >= self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(self.p, n);
        }
        normalized(self.p, self.val, self.unit.clone(), n)
    }

    /// Raises the recorded precision to `n`, treating unknown digits as zero.
    /// Only meaningful for values known to be exact.
    pub fn lift_to(&self, n: i64) -> Padic {
        if n <= self.prec {
            return self.with_precision(n);
        }
        if self.is_zero() {
            return Self::zero(self.p, n);
        }
        Padic { p: self.p, val: self.val, unit: self.unit.clone(), prec: n }
    }

    /// Multiplication by `p^k`, exact.
    pub fn shift(&self, k: i64) -> Padic {
        Padic { p: self.p, val: self.val + k, unit: self.unit.clone(), prec: self.prec + k }
    }

    pub fn add_ref(&self, o: &Padic) -> Padic {
        debug_assert_eq!(self.p, o.p);
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            return o.with_precision(prec);
        }
        if o.is_zero() {
            return self.with_precision(prec);
        }
        let m = self.val.min(o.val);
        if m >= prec {
            return Self::zero(self.p, prec);
        }
        let term = |x: &Padic| -> Option<BigUint> {
            let k = x.val - m;
            if k >= prec - m {
                None
            } else if k == 0 {
                Some(x.unit.clone())
            } else {
                Some(&x.unit * &*prime_power(self.p, k))
            }
        };
        let sum = match (term(self), term(o)) {
            (Some(a), Some(b)) => a + b,
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return Self::zero(self.p, prec),
        };
        normalized(self.p, m, sum, prec)
    }

    pub fn neg_ref(&self) -> Padic {
        if self.is_zero() {
            return self.clone();
        }
        let m = prime_power(self.p, self.prec - self.val);
        Padic { p: self.p, val: self.val, unit: &*m - &self.unit, prec: self.prec }
    }

    pub fn sub_ref(&self, o: &Padic) -> Padic {
        self.add_ref(&o.neg_ref())
    }

    pub fn mul_ref(&self, o: &Padic) -> Padic {
        debug_assert_eq!(self.p, o.p);
        let prec = (self.val + o.prec).min(o.val + self.prec);
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p, prec);
        }
        let val = self.val + o.val;
        if val >= prec {
            return Self::zero(self.p, prec);
        }
        let m = prime_power(self.p, prec - val);
        let unit = (&self.unit * &o.unit) % &*m;
        Padic { p: self.p, val, unit, prec }
    }

    pub fn inv(&self) -> Result<Padic> {
        if self.is_zero() {
            return Err(Error::precision(format!(
                "inverting a value indistinguishable from zero modulo {}^{}",
                self.p, self.prec
            )));
        }
        let rel = self.prec - self.val;
        let m = prime_power(self.p, rel);
        let u = self.unit.modinv(&m).expect("unit part is invertible");
        Ok(Padic { p: self.p, val: -self.val, unit: u, prec: rel - self.val })
    }

    pub fn div(&self, o: &Padic) -> Result<Padic> {
        Ok(self.mul_ref(&o.inv()?))
    }

    pub fn pow(&self, mut n: u64) -> Padic {
        if n == 0 {
            return Padic::one(self.p, self.prec.max(1));
        }
        let mut base = self.clone();
        let mut acc: Option<Padic> = None;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_ref(&base),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul_ref(&base);
        }
        acc.expect("n > 0")
    }

    pub fn powi(&self, n: i64) -> Result<Padic> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs()))
        }
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, n: i64) -> Padic {
        if n == 0 {
            return Self::zero(self.p, self.prec);
        }
        let (e, u) = split_valuation(self.p, &BigInt::from(n));
        let shifted = self.shift(e);
        if shifted.is_zero() {
            return shifted;
        }
        let rel = shifted.prec - shifted.val;
        let f = Self::from_unit_int(self.p, 0, &u, rel);
        let m = prime_power(self.p, rel);
        let unit = (&shifted.unit * &f.unit) % &*m;
        Padic { p: self.p, val: shifted.val, unit, prec: shifted.prec }
    }

    /// Division by an exact nonzero integer.
    pub fn div_int(&self, n: i64) -> Padic {
        assert!(n != 0, "division by the integer zero");
        let (e, u) = split_valuation(self.p, &BigInt::from(n));
        let shifted = self.shift(-e);
        if shifted.is_zero() {
            return shifted;
        }
        let rel = shifted.prec - shifted.val;
        let f = Self::from_unit_int(self.p, 0, &u, rel);
        let finv = f.inv().expect("unit");
        let m = prime_power(self.p, rel);
        let unit = (&shifted.unit * &finv.unit) % &*m;
        Padic { p: self.p, val: shifted.val, unit, prec: shifted.prec }
    }

    /// Agreement of two values at the smaller of their precisions.
    pub fn agrees_with(&self, o: &Padic) -> bool {
        self.sub_ref(o).is_zero()
    }

    /// Canonical digit string, e.g. `5*7 + 4*7^3 + O(7^10)`.
    pub fn to_canonical_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, d) in self.digits().into_iter().enumerate() {
            if d == 0 {
                continue;
            }
            let e = self.val + i as i64;
            let term = match (d, e) {
                (d, 0) => d.to_string(),
                (1, e) => power_string(self.p, e),
                (d, e) => format!("{}*{}", d, power_string(self.p, e)),
            };
            terms.push(term);
        }
        terms.push(format!("O({})", power_string(self.p, self.prec)));
        terms.join(" + ")
    }

    /// Parses the canonical digit string for prime `p`.
    pub fn parse_canonical(p: u64, s: &str) -> Result<Padic> {
        let bad = |msg: &str| Error::Invalid(format!("cannot parse p-adic '{}': {}", s, msg));
        let parts: Vec<&str> = s.split('+').map(|t| t.trim()).collect();
        let last = parts.last().ok_or_else(|| bad("empty"))?;
        let inner = last
            .strip_prefix("O(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("missing O(p^N) term"))?;
        let prec = parse_power(p, inner.trim()).ok_or_else(|| bad("bad precision term"))?;
        let mut acc = Padic::zero(p, prec);
        for term in &parts[..parts.len() - 1] {
            let (d, e) = match term.split_once('*') {
                Some((d, pw)) => (
                    d.trim().parse::<u64>().map_err(|_| bad("bad digit"))?,
                    parse_power(p, pw.trim()).ok_or_else(|| bad("bad power"))?,
                ),
                None => match term.parse::<u64>() {
                    Ok(d) if term.chars().all(|c| c.is_ascii_digit()) && d < p => (d, 0),
                    _ => (1, parse_power(p, term).ok_or_else(|| bad("bad term"))?),
                },
            };
            if d >= p {
                return Err(bad("digit out of range"));
            }
            let t = Padic::from_i64(p, d as i64, prec - e).shift(e);
            acc = acc.add_ref(&t);
        }
        Ok(acc)
    }
}

impl Padic {
    /// JSON record `{"p", "val", "digits", "prec"}`; `val` is null for zero.
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "val": self.valuation(),
            "digits": self.digits(),
            "prec": self.prec,
        })
    }

    /// Inverse of [`Padic::to_json`]. A `p` field, when present, must match.
    pub fn from_json(p: u64, v: &Value) -> Result<Padic> {
        let bad = |msg: &str| Error::Invalid(format!("bad p-adic JSON: {}", msg));
        if let Some(q) = v.get("p") {
            if q.as_u64() != Some(p) {
                return Err(bad("prime mismatch"));
            }
        }
        let prec = v.get("prec").and_then(Value::as_i64).ok_or_else(|| bad("missing prec"))?;
        let digits = v.get("digits").and_then(Value::as_array).ok_or_else(|| bad("missing digits"))?;
        let val = match v.get("val") {
            None | Some(Value::Null) => {
                if digits.is_empty() {
                    return Ok(Padic::zero(p, prec));
                }
                return Err(bad("digits given for zero"));
            }
            Some(x) => x.as_i64().ok_or_else(|| bad("val must be an integer"))?,
        };
        let mut unit = BigUint::zero();
        for d in digits.iter().rev() {
            let d = d.as_u64().filter(|&d| d < p).ok_or_else(|| bad("digit out of range"))?;
            unit = unit * p + d;
        }
        if unit.is_zero() || mod_small(&unit, p) == 0 || val >= prec {
            return Err(bad("unit part must start with a nonzero digit below the precision"));
        }
        Ok(normalized(p, val, unit, prec))
    }
}

fn power_string(p: u64, e: i64) -> String {
    match e {
        0 => "1".to_string(),
        1 => p.to_string(),
        e => format!("{}^{}", p, e),
    }
}

fn parse_power(p: u64, s: &str) -> Option<i64> {
    if s == "1" {
        return Some(0);
    }
    match s.split_once('^') {
        Some((b, e)) => {
            if b.trim().parse::<u64>().ok()? != p {
                return None;
            }
            e.trim().parse::<i64>().ok()
        }
        None => (s.parse::<u64>().ok()? == p).then_some(1),
    }
}

fn normalized(p: u64, mut val: i64, mut unit: BigUint, prec: i64) -> Padic {
    if unit.is_zero() || val >= prec {
        return Padic::zero(p, prec);
    }
    while mod_small(&unit, p) == 0 {
        unit /= p;
        val += 1;
        if val >= prec {
            return Padic::zero(p, prec);
        }
    }
    let m = prime_power(p, prec - val);
    if unit >= *m {
        unit %= &*m;
    }
    Padic { p, val, unit, prec }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Padic> for &Padic {
            type Output = Padic;
            fn $m(self, o: &Padic) -> Padic {
                self.$imp(o)
            }
        }
        impl $tr<Padic> for Padic {
            type Output = Padic;
            fn $m(self, o: Padic) -> Padic {
                self.$imp(&o)
            }
        }
        impl $tr<&Padic> for Padic {
            type Output = Padic;
            fn $m(self, o: &Padic) -> Padic {
                self.$imp(o)
            }
        }
        impl $tr<Padic> for &Padic {
            type Output = Padic;
            fn $m(self, o: Padic) -> Padic {
                self.$imp(&o)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_ref()
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Padic {
        Padic::from_i64(7, n, 10)
    }

    #[test]
    fn interval_rules() {
        let a = Padic::from_i64(7, 7, 5);
        let b = Padic::from_i64(7, 3, 8);
        assert_eq!((&a + &b).precision(), 5);
        assert_eq!((&a * &b).precision(), 5);
        let z = Padic::zero(7, 4);
        assert_eq!((&z * &a).precision(), 5);
    }

    #[test]
    fn negative_and_rational() {
        let m1 = q(-1);
        assert_eq!(m1.digits(), vec![6; 10]);
        let half = Padic::from_rational(7, &BigRational::new(1.into(), 2.into()), 10);
        assert!((half.mul_int(2) - q(1)).is_zero());
        let r = Padic::from_rational(7, &BigRational::new(3.into(), 49.into()), 10);
        assert_eq!(r.valuation(), Some(-2));
        assert_eq!(r.precision(), 10);
    }

    #[test]
    fn inverse_precision() {
        let x = Padic::from_i64(7, 14, 10);
        let y = x.inv().unwrap();
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(y.precision(), 8);
        assert!(Padic::zero(7, 3).inv().is_err());
    }

    #[test]
    fn exact_integer_ops() {
        let x = q(1);
        let y = x.div_int(7);
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(y.precision(), 9);
        assert_eq!(y.mul_int(7), q(1).with_precision(10));
    }

    #[test]
    fn canonical_round_trip() {
        let x = Padic::from_i64(7, 5 * 7 + 4 * 343 + 1, 6);
        let s = x.to_canonical_string();
        assert_eq!(s, "1 + 5*7 + 4*7^3 + O(7^6)");
        assert_eq!(Padic::parse_canonical(7, &s).unwrap(), x);
        let z = Padic::zero(7, 3);
        assert_eq!(z.to_canonical_string(), "O(7^3)");
        assert_eq!(Padic::parse_canonical(7, "O(7^3)").unwrap(), z);
        let y = Padic::from_rational(7, &BigRational::new(1.into(), 7.into()), 2);
        assert_eq!(y.to_canonical_string(), "7^-1 + O(7^2)");
        assert_eq!(Padic::parse_canonical(7, &y.to_canonical_string()).unwrap(), y);
    }

    #[test]
    fn json_round_trip() {
        for x in [q(0), q(1), q(-49), Padic::from_rational(7, &BigRational::new(2.into(), 7.into()), 4)] {
            let j = x.to_json();
            assert_eq!(Padic::from_json(7, &j).unwrap(), x);
        }
        assert_eq!(q(0).to_json()["val"], Value::Null);
        assert!(Padic::from_json(5, &q(1).to_json()).is_err());
    }

    #[test]
    fn residue_and_integer() {
        assert_eq!(q(10).residue(), Some(3));
        assert_eq!(q(-1).to_bigint().unwrap(), BigInt::from(7i64.pow(10) - 1));
    }
}
