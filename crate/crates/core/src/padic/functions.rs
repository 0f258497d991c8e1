use crate::error::{Error, Result};

use super::number::{mod_small, Padic};

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Whether `a` is a nonzero square modulo the odd prime `p`.
pub fn is_square_mod_p(a: u64, p: u64) -> bool {
    let a = a % p;
    a != 0 && powmod(a, (p - 1) / 2, p) == 1
}

/// Square root of a nonzero quadratic residue modulo `p` (Tonelli-Shanks);
/// returns the smaller of the two roots.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if !is_square_mod_p(a, p) {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Iwasawa logarithm, normalised by `log(p) = 0`.
pub fn log_iwasawa(x: &Padic) -> Result<Padic> {
    if x.is_zero() {
        return Err(Error::domain("logarithm of zero"));
    }
    let p = x.prime();
    let u = x.shift(-x.ord());
    let n = u.precision();
    let one = Padic::one(p, n);
    let z = u.pow(p - 1) - &one;
    if z.is_zero() {
        return Ok(Padic::zero(p, z.precision()));
    }
    let vz = z.ord();
    let mut sum = Padic::zero(p, n);
    let mut zk = one;
    let mut k: i64 = 1;
    loop {
        let lg = floor_log(p, k as u64) as i64;
        if k * vz - lg >= n {
            break;
        }
        zk = zk * &z;
        let term = zk.div_int(k);
        sum = if k % 2 == 1 { sum + term } else { sum - term };
        k += 1;
    }
    Ok(sum.div_int(p as i64 - 1).with_precision(n))
}

/// Teichmüller representative of a unit: the `(p-1)`-st root of unity congruent to it.
pub fn teichmuller(x: &Padic) -> Result<Padic> {
    if x.valuation() != Some(0) {
        return Err(Error::domain("Teichmüller lift needs a unit"));
    }
    let p = x.prime();
    let mut y = x.clone();
    for _ in 0..=x.precision() {
        let z = y.pow(p);
        if z.agrees_with(&y) && z.precision() >= y.precision() {
            return Ok(z);
        }
        y = z;
    }
    Ok(y)
}

/// Square root `s` of `a` with `s ≡ hint (mod p)` on the unit part; when no hint
/// is given the root whose unit residue is the smaller representative is chosen.
pub fn hensel_sqrt(a: &Padic, hint: Option<u64>) -> Result<Padic> {
    let p = a.prime();
    if a.is_zero() {
        let n = a.precision();
        return Ok(Padic::zero(p, n.div_euclid(2) + n.rem_euclid(2)));
    }
    let v = a.ord();
    if v % 2 != 0 {
        return Err(Error::domain("square root of an element of odd valuation"));
    }
    let u = a.shift(-v);
    let ubar = mod_small(u.unit_part(), p);
    let root = sqrt_mod_p(ubar, p).ok_or(Error::NoSquareRoot)?;
    let start = match hint {
        Some(h) => {
            let h = h % p;
            if mulmod(h, h, p) != ubar {
                return Err(Error::domain("sign hint is not a square root modulo p"));
            }
            h
        }
        None => root,
    };
    let n = u.precision();
    let mut s = Padic::from_i64(p, start as i64, n);
    let mut reached = 1i64;
    while reached < n {
        s = (&s + u.div(&s)?).div_int(2);
        reached *= 2;
    }
    Ok(s.shift(v / 2))
}

pub(crate) fn floor_log(p: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_mod_small_primes() {
        for p in [3u64, 5, 7, 11, 13, 101, 10007] {
            for a in 1..p.min(200) {
                match sqrt_mod_p(a, p) {
                    Some(r) => assert_eq!(mulmod(r, r, p), a),
                    None => assert!(!is_square_mod_p(a, p)),
                }
            }
        }
    }

    #[test]
    fn log_of_p_and_one() {
        let p = Padic::from_i64(7, 7, 10);
        assert!(log_iwasawa(&p).unwrap().is_zero());
        assert!(log_iwasawa(&Padic::one(7, 10)).unwrap().is_zero());
        assert!(log_iwasawa(&Padic::zero(7, 10)).is_err());
    }

    #[test]
    fn teichmuller_minus_one() {
        let t = teichmuller(&Padic::from_i64(7, 6, 8)).unwrap();
        assert_eq!(t, Padic::from_i64(7, -1, 8));
        assert!(teichmuller(&Padic::from_i64(7, 7, 8)).is_err());
    }

    #[test]
    fn sqrt_errors() {
        assert_eq!(hensel_sqrt(&Padic::from_i64(7, 3, 5), None), Err(Error::NoSquareRoot));
        assert!(hensel_sqrt(&Padic::from_i64(7, 7, 5), None).is_err());
        let s = hensel_sqrt(&Padic::from_i64(7, 2 * 49, 9), Some(4)).unwrap();
        assert_eq!(s.ord(), 1);
        assert_eq!(s.shift(-1).residue(), Some(4));
        assert!((&s * &s - Padic::from_i64(7, 98, 9)).is_zero());
    }
}
