//! Property tests for p-adic numbers, series and matrices, checked against integer
//! arithmetic modulo p^N and algebraic identities.

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use padic_heights::padic::{hensel_sqrt, log_iwasawa, teichmuller, Padic, PadicMatrix, PadicSeries};

const PRIMES: [u64; 4] = [3, 5, 7, 11];
const N: i64 = 12;

fn modp(v: i128, p: u64, n: i64) -> BigInt {
    BigInt::from(v).mod_floor(&BigInt::from(p).pow(n as u32))
}

fn int_of(x: &Padic) -> BigInt {
    x.to_bigint().expect("integral")
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(PRIMES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_operations_match_integers(p in prime(), a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
        let (x, y) = (Padic::from_i64(p, a, N), Padic::from_i64(p, b, N));
        let m = BigInt::from(p).pow(N as u32);
        prop_assert_eq!(int_of(&(&x + &y)).mod_floor(&m), modp(a as i128 + b as i128, p, N));
        prop_assert_eq!(int_of(&(&x - &y)).mod_floor(&m), modp(a as i128 - b as i128, p, N));
        let prod = &x * &y;
        prop_assert_eq!(int_of(&prod).mod_floor(&m), modp(a as i128 * b as i128, p, N));
    }

    #[test]
    fn precision_rules(p in prime(), a in 1i64..10_000, b in 1i64..10_000, ka in 0i64..3, kb in 0i64..3, na in 5i64..15, nb in 5i64..15) {
        let x = Padic::from_i64(p, a * (p as i64).pow(ka as u32), na);
        let y = Padic::from_i64(p, b * (p as i64).pow(kb as u32), nb);
        prop_assert_eq!((&x + &y).precision(), na.min(nb));
        let (va, vb) = (x.ord(), y.ord());
        prop_assert_eq!((&x * &y).precision(), (va + nb).min(vb + na));
        prop_assert_eq!(x.inv().unwrap().precision(), na - 2 * va);
    }

    #[test]
    fn division_inverts_multiplication(p in prime(), a in -100_000i64..100_000, b in 1i64..100_000) {
        prop_assume!(b % p as i64 != 0);
        let (x, y) = (Padic::from_i64(p, a, N), Padic::from_i64(p, b, N));
        prop_assert!((&x * &y).div(&y).unwrap().agrees_with(&x));
        prop_assert!((&y * &y.inv().unwrap()).agrees_with(&Padic::one(p, N)));
    }

    #[test]
    fn canonical_string_and_json_round_trip(p in prime(), a in -10_000_000i64..10_000_000, k in -3i64..3, n in 1i64..20) {
        let x = Padic::from_i64(p, a, n).shift(k);
        let s = x.to_canonical_string();
        prop_assert_eq!(Padic::parse_canonical(p, &s).unwrap(), x.clone());
        prop_assert_eq!(Padic::from_json(p, &x.to_json()).unwrap(), x);
    }

    #[test]
    fn iwasawa_log_is_a_homomorphism(p in prime(), a in 1i64..100_000, b in 1i64..100_000, k in 0u32..3) {
        prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
        let pk = (p as i64).pow(k);
        let (x, y) = (Padic::from_i64(p, a * pk, N), Padic::from_i64(p, b, N));
        let lhs = log_iwasawa(&(&x * &y)).unwrap();
        let rhs = log_iwasawa(&x).unwrap() + log_iwasawa(&y).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        prop_assert!(log_iwasawa(&Padic::from_i64(p, p as i64, N)).unwrap().is_zero());
    }

    #[test]
    fn teichmuller_is_fixed_by_frobenius(p in prime(), a in 1i64..100_000) {
        prop_assume!(a % p as i64 != 0);
        let x = Padic::from_i64(p, a, N);
        let t = teichmuller(&x).unwrap();
        prop_assert!(t.pow(p).agrees_with(&t));
        prop_assert_eq!(t.residue(), x.residue());
    }

    #[test]
    fn hensel_square_roots(p in prime(), a in 1i64..100_000, k in 0u32..2) {
        prop_assume!(a % p as i64 != 0);
        let sq = Padic::from_i64(p, a * a * (p as i64).pow(2 * k), N);
        let s = hensel_sqrt(&sq, None).unwrap();
        prop_assert!((&s * &s).agrees_with(&sq));
    }

    #[test]
    fn series_inverse_and_sqrt(p in prime(), c in prop::collection::vec(-50i64..50, 1..8), lead in 1i64..50) {
        prop_assume!(lead % p as i64 != 0);
        let order = 15;
        let mut coeffs = vec![Padic::from_i64(p, lead * lead, N)];
        coeffs.extend(c.iter().map(|&v| Padic::from_i64(p, v, N)));
        let s = PadicSeries::new(p, 0, coeffs, order, N);
        let one = PadicSeries::constant(Padic::one(p, N), order);
        prop_assert!(s.mul(&s.inverse().unwrap()).sub(&one).min_coefficient_valuation().is_none());
        let r = s.sqrt(None).unwrap();
        prop_assert!(r.mul(&r).sub(&s).min_coefficient_valuation().is_none());
        let d = s.antiderivative().unwrap().derivative();
        prop_assert!(d.sub(&s.truncate(d.order())).min_coefficient_valuation().is_none());
    }

    #[test]
    fn matrix_solve_and_determinant(p in prime(), e in prop::collection::vec(-20i64..20, 18)) {
        let m = |o: usize| PadicMatrix::from_rows(p, (0..3).map(|i| (0..3).map(|j| {
            let d = if i == j { 1 + p as i64 } else { 0 };
            Padic::from_i64(p, d + p as i64 * e[o + 3 * i + j], N)
        }).collect()).collect());
        let (a, b) = (m(0), m(9));
        prop_assert!(a.mul(&b).det().agrees_with(&(a.det() * b.det())));
        let rhs = b.column(0);
        let x = a.solve_vector(&rhs).unwrap();
        let back = a.mul_vector(&x);
        for (u, v) in back.iter().zip(&rhs) {
            prop_assert!(u.agrees_with(v));
        }
        // Cayley–Hamilton.
        let cp = a.charpoly();
        let mut acc = PadicMatrix::zeros(p, 3, 3, N);
        let mut pw = PadicMatrix::identity(p, 3, N);
        for c in &cp {
            acc = acc.add(&pw.scale(c));
            pw = pw.mul(&a);
        }
        prop_assert!(acc.is_zero());
    }
}
