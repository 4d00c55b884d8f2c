use std::thread;

use gbern::bernoulli::{
    bernoulli, bernoulli_polynomial, expand_in_gb_basis, family, from_gb_basis, gb_numbers, gb_polynomial,
    ode_residual, recurrence_residual,
};
use gbern::rational::{binomial_q, int, rat};
use gbern::{Poly, Rational};
use proptest::prelude::*;

#[test]
fn appell_property() {
    for m in 1..=6 {
        for n in 1..=20 {
            let d = gb_polynomial(m, n).unwrap().derivative();
            assert_eq!(d, gb_polynomial(m, n - 1).unwrap().scale(&int(n as i64)), "m={m} n={n}");
        }
    }
}

#[test]
fn level_one_is_classical() {
    for n in 0..=20 {
        assert_eq!(gb_polynomial(1, n).unwrap(), bernoulli_polynomial(n));
    }
    // sum_{k<n} C(n,k) B_k = 0
    for n in 2..=20 {
        let s = (0..n).fold(int(0), |acc, k| acc + binomial_q(n, k) * bernoulli(k));
        assert_eq!(s, int(0), "n={n}");
    }
    assert_eq!(bernoulli(12), rat(-691, 2730));
}

#[test]
fn cached_boundary_values() {
    for m in 1..=6 {
        let fam = family(m).unwrap();
        for k in 0..=15 {
            assert_eq!(fam.boundary(k), fam.polynomial(k).eval(&int(1)));
            assert_eq!(fam.number(k), fam.polynomial(k).eval(&int(0)));
        }
    }
}

#[test]
fn defining_recurrence_and_ode() {
    for m in 1..=5 {
        for n in 1..=12 {
            assert!(recurrence_residual(m, n).unwrap().is_zero(), "m={m} n={n}");
            assert!(ode_residual(m, n).unwrap().is_zero(), "m={m} n={n}");
        }
    }
}

#[test]
fn generating_function_coefficients() {
    // Taylor coefficients of z^m / (e^z - sum_{l<m} z^l/l!) times n!
    assert_eq!(gb_numbers(2, 4).unwrap(), vec![int(2), rat(-2, 3), rat(1, 9), rat(1, 45), rat(-1, 135)]);
    assert_eq!(
        gb_numbers(3, 6).unwrap(),
        vec![int(6), rat(-3, 2), rat(3, 20), rat(3, 80), rat(3, 2800), rat(-3, 448), rat(-13, 3200)]
    );
}

#[test]
fn invalid_level() {
    assert!(gb_numbers(0, 3).is_err());
}

#[test]
fn concurrent_growth() {
    let handles: Vec<_> = (0..8)
        .map(|i| thread::spawn(move || gb_polynomial(3, 10 + 2 * i).unwrap()))
        .collect();
    let polys: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for (i, p) in polys.iter().enumerate() {
        assert_eq!(*p, gb_polynomial(3, 10 + 2 * i).unwrap());
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn integral_formula(m in 1usize..6, n in 0usize..12, x0 in rational(), x1 in rational()) {
        let p = gb_polynomial(m, n).unwrap();
        let next = gb_polynomial(m, n + 1).unwrap();
        let want = (next.eval(&x1) - next.eval(&x0)) / int(n as i64 + 1);
        prop_assert_eq!(p.definite_integral(&x0, &x1), want);
    }

    #[test]
    fn basis_round_trip(m in 1usize..6, c in prop::collection::vec(rational(), 0..9)) {
        let p = Poly::new(c);
        let coeffs = expand_in_gb_basis(&p, m).unwrap();
        prop_assert_eq!(from_gb_basis(&coeffs, m).unwrap(), p);
    }

    #[test]
    fn translation_identity(m in 1usize..5, n in 0usize..10, x in rational(), y in rational()) {
        // Appell: B_n(x + y) = sum C(n,k) B_k(x) y^{n-k}
        let lhs = gb_polynomial(m, n).unwrap().eval(&(&x + &y));
        let mut rhs = int(0);
        for k in 0..=n {
            let yk = (0..n - k).fold(int(1), |a, _| a * &y);
            rhs += binomial_q(n, k) * gb_polynomial(m, k).unwrap().eval(&x) * yk;
        }
        prop_assert_eq!(lhs, rhs);
    }
}
