//! Dense polynomials over Q_p, coefficients lowest degree first.

use num_bigint::BigInt;
use num_integer::binomial;

use crate::padic::Padic;

pub(crate) fn eval(f: &[Padic], x: &Padic) -> Padic {
    let mut it = f.iter().rev();
    let Some(top) = it.next() else {
        return Padic::zero(x.prime(), x.precision());
    };
    let mut acc = top.clone();
    for c in it {
        acc = acc * x + c;
    }
    acc
}

pub(crate) fn derivative(f: &[Padic]) -> Vec<Padic> {
    f.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i64)).collect()
}

/// Coefficients of `f(a + t)` in `t`.
pub(crate) fn taylor_shift(f: &[Padic], a: &Padic) -> Vec<Padic> {
    let mut c = f.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let v = &c[j] + &c[j + 1] * a;
            c[j] = v;
        }
    }
    c
}

/// Coefficients of `x'^d f(a + 1/x')` for `d >= deg f`.
pub(crate) fn reciprocal_shift(f: &[Padic], a: &Padic, d: usize, prec: i64) -> Vec<Padic> {
    let p = a.prime();
    let mut out = vec![Padic::zero(p, prec); d + 1];
    let mut apow = vec![Padic::one(p, prec)];
    for j in 1..f.len() {
        let next = &apow[j - 1] * a;
        apow.push(next);
    }
    for (k, fk) in f.iter().enumerate() {
        if fk.is_zero() {
            continue;
        }
        for (j, aj) in apow.iter().enumerate().take(k + 1) {
            let b: BigInt = binomial(BigInt::from(k), BigInt::from(j));
            let c = fk * aj * Padic::from_bigint(p, &b, prec);
            out[j + d - k] = &out[j + d - k] + c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Padic {
        Padic::from_i64(7, n, 12)
    }

    #[test]
    fn shift_matches_evaluation() {
        let f = vec![q(3), q(-2), q(0), q(5)];
        let g = taylor_shift(&f, &q(4));
        for t in [0, 1, 9] {
            let lhs = eval(&g, &q(t));
            let rhs = eval(&f, &q(4 + t));
            assert!((lhs - rhs).is_zero());
        }
    }

    #[test]
    fn reciprocal_matches_evaluation() {
        let f = vec![q(1), q(2), q(3)];
        let r = reciprocal_shift(&f, &q(2), 4, 12);
        // x'^4 f(2 + 1/x') at x' = 3
        let x = q(3);
        let lhs = eval(&r, &x);
        let inner = q(2) + x.inv().unwrap();
        let rhs = x.pow(4) * eval(&f, &inner);
        assert!((lhs - rhs).is_zero());
    }
}
