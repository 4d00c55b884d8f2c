//! Invariant suites behind `gbern check`.

use gbern::bernoulli::{
    bernoulli, bernoulli_polynomial, expand_in_gb_basis, family, from_gb_basis, gb_numbers, gb_polynomial,
    low_order_closed_form, ode_residual, recurrence_residual,
};
use gbern::em::{
    classical_product_integral, em_composite, em_unit_exact, l2_norm_sq, parseval_residual, parseval_rhs,
    product_integral, product_integral_oracle,
};
use gbern::fourier::{
    dirichlet_average, exact_polynomial_part, fourier_coeffs, fourier_partial_sum, periodic_eval, zeta_expansion,
    FourierTerms,
};
use gbern::function::{exp, harmonic, power};
use gbern::rational::{binomial_q, factorial_q, int, rat};
use gbern::series::{estimate_series, euler_constant, finite_identity_residual, rho_tail};
use gbern::zeta::{delta_from_jumps, delta_from_numbers, euler_zeta, zeta2_via_midpoint, zeta_even_via_gb};
use gbern::{BigFloat, Poly, Real};

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: impl Into<String>) -> Check {
    Check { name, pass, detail: detail.into() }
}

fn exact(name: &'static str, failures: usize, total: usize) -> Check {
    check(name, failures == 0, format!("{} of {total} cases hold exactly", total - failures))
}

pub fn run(suite: &str, prec: usize) -> Vec<Check> {
    match suite {
        "core" => core(),
        "fourier" => fourier(prec),
        "zeta" => zeta(prec),
        "quad" => quad(prec),
        "series" => series(prec),
        _ => Vec::new(),
    }
}

fn core() -> Vec<Check> {
    let mut out = Vec::new();

    let mut bad = 0;
    for m in 1..=6 {
        for n in 1..=20 {
            let d = gb_polynomial(m, n).unwrap().derivative();
            bad += (d != gb_polynomial(m, n - 1).unwrap().scale(&int(n as i64))) as usize;
        }
    }
    out.push(exact("appell", bad, 120));

    let mut bad = 0;
    let points = [(rat(-3, 2), rat(2, 7)), (int(0), int(1)), (rat(1, 3), rat(5, 2))];
    for m in 1..=6 {
        for n in 0..=10 {
            for (x0, x1) in &points {
                let next = gb_polynomial(m, n + 1).unwrap();
                let want = (next.eval(x1) - next.eval(x0)) / int(n as i64 + 1);
                bad += (gb_polynomial(m, n).unwrap().definite_integral(x0, x1) != want) as usize;
            }
        }
    }
    out.push(exact("integral_formula", bad, 198));

    let mut bad = 0;
    let p = Poly::new(vec![rat(1, 2), int(-3), rat(7, 5), int(0), rat(-2, 9), int(1)]);
    for m in 1..=6 {
        let c = expand_in_gb_basis(&p, m).unwrap();
        bad += (from_gb_basis(&c, m).unwrap() != p) as usize;
    }
    out.push(exact("basis_round_trip", bad, 6));

    let mut bad = 0;
    for n in 0..=20 {
        bad += (gb_polynomial(1, n).unwrap() != bernoulli_polynomial(n)) as usize;
        if n >= 2 {
            let s = (0..n).fold(int(0), |a, k| a + binomial_q(n, k) * bernoulli(k));
            bad += (s != int(0)) as usize;
        }
    }
    bad += (gb_numbers(1, 4).unwrap() != vec![int(1), rat(-1, 2), rat(1, 6), int(0), rat(-1, 30)]) as usize;
    out.push(exact("classical_reduction", bad, 41));

    let mut bad = 0;
    for m in 1..=6 {
        let fam = family(m).unwrap();
        for k in 0..=15 {
            bad += (fam.boundary(k) != fam.polynomial(k).eval(&int(1))) as usize;
        }
        for n in 0..=3 {
            bad += (gb_polynomial(m, n).unwrap() != low_order_closed_form(m, n).unwrap()) as usize;
        }
        for n in 1..=10 {
            bad += !recurrence_residual(m, n).unwrap().is_zero() as usize;
            bad += !ode_residual(m, n).unwrap().is_zero() as usize;
        }
    }
    out.push(exact("cache_closed_forms_recurrence", bad, 6 * 40));
    out
}

fn fourier(prec: usize) -> Vec<Check> {
    let mut out = Vec::new();

    let mut bad = 0;
    for r in 1..=3 {
        bad += !fourier_coeffs::<f64>(1, 2 * r, 50, 53).unwrap().b.iter().all(|b| *b == 0.0) as usize;
        bad += !fourier_coeffs::<f64>(1, 2 * r + 1, 50, 53).unwrap().a.iter().all(|a| *a == 0.0) as usize;
    }
    out.push(exact("level_one_parity", bad, 6));

    let mut worst: f64 = 0.0;
    for m in 1..=3 {
        for r in 1..=2 {
            let s = fourier_partial_sum::<f64>(m, 2 * r, &0.0, 10_000).unwrap();
            worst = worst.max((s - f64::from_rational(&dirichlet_average(m, 2 * r).unwrap(), 53)).abs());
        }
    }
    out.push(check("dirichlet_average", worst <= 1e-3, format!("max error {worst:.2e} at K = 10^4")));

    let tol = BigFloat::exp2(20 - prec as i64, prec);
    let mut worst = BigFloat::zero(prec);
    for m in 1..=5 {
        for n in 1..=10 {
            let z = zeta_expansion::<BigFloat>(m, n, prec).unwrap();
            let e = exact_polynomial_part(m, n).unwrap();
            for (j, c) in z.c.iter().enumerate() {
                let ej = BigFloat::from_rational(&e.coeff(j), prec);
                worst = worst.max((c.clone() - ej.clone()).abs() / ej.abs().max(BigFloat::one(prec)));
            }
        }
    }
    out.push(check("zeta_expansion", worst <= tol, format!("max error {}", worst.to_sci(4))));

    let x = BigFloat::from_f64(0.37, prec);
    let mut ok = true;
    for (m, n) in [(1, 4), (2, 5), (3, 3)] {
        let target = periodic_eval(m, n, &x).unwrap();
        let d = |h: f64| {
            let h = BigFloat::from_f64(h, prec);
            let up = periodic_eval(m, n + 1, &(x.clone() + h.clone())).unwrap();
            let down = periodic_eval(m, n + 1, &(x.clone() - h.clone())).unwrap();
            (up - down) / (BigFloat::from_i64(2, prec) * h)
        };
        let e3 = (d(1e-3) - target.clone()).abs().to_f64();
        let e4 = (d(1e-4) - target).abs().to_f64();
        ok &= e4 < 1e-6 && e4 <= e3 / 50.0;
    }
    out.push(check("derivative_off_integers", ok, "central differences converge at rate h^2"));
    out
}

fn zeta(prec: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let mut bad = 0;
    let mut forms = 0;
    for m in 1..=6 {
        for r in 1..=8 {
            bad += (zeta_even_via_gb(m, r).unwrap().q != euler_zeta(r).unwrap().q) as usize;
            forms += (delta_from_jumps(m, r).unwrap().q != delta_from_numbers(m, r).unwrap().q) as usize;
        }
    }
    out.push(exact("m_independence", bad, 48));
    out.push(exact("correction_forms_agree", forms, 48));
    let bad = (1..=10).filter(|&m| zeta2_via_midpoint(m).unwrap().q != rat(1, 6)).count();
    out.push(exact("zeta2_midpoint", bad, 10));
    let z2: BigFloat = euler_zeta(1).unwrap().to_real(prec);
    let digits = z2.to_sci(72);
    let ok = prec < 240 || digits.starts_with("1.644934066848226436472415166646025189218949901206798437735558229370007");
    out.push(check("zeta2_decimal", ok, digits));
    out
}

fn quad(prec: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let mut bad = 0;
    let f = Poly::new(vec![rat(1, 3), int(-2), rat(5, 7), int(1), rat(-1, 4), int(2), rat(3, 11)]);
    for m in [1, 2, 5] {
        let (main, rem) = em_unit_exact(&f, m, 7).unwrap();
        bad += (rem != int(0) || main != f.definite_integral(&int(0), &int(1))) as usize;
    }
    out.push(exact("unit_rule_exactness", bad, 3));

    let mut bad = 0;
    for m in 1..=4 {
        for r in 1..=8 {
            for n in 1..=8 {
                let p = product_integral(m, r, n).unwrap();
                bad += (p != product_integral_oracle(m, r, n).unwrap()) as usize;
                if m == 1 {
                    bad += (p != classical_product_integral(r, n)) as usize;
                }
            }
        }
    }
    out.push(exact("product_integrals", bad, 320));

    let mut bad = 0;
    for m in 1..=4 {
        for n in 1..=6 {
            let a0 = FourierTerms::<f64>::new(m, n, 53).unwrap().a0().clone();
            let nf2 = factorial_q(n) * factorial_q(n);
            let want = &nf2 * (&a0 * &a0 / int(4) + int(2) * parseval_rhs(m, n).unwrap());
            bad += (l2_norm_sq(m, n).unwrap() != want) as usize;
        }
    }
    out.push(exact("norm_fourier_form", bad, 24));

    let mut worst: f64 = 0.0;
    for (m, n) in [(1, 2), (2, 1), (2, 2), (5, 3)] {
        let res = parseval_residual::<f64>(m, n, 100_000, 53).unwrap();
        worst = worst.max(res / f64::from_rational(&parseval_rhs(m, n).unwrap(), 53));
    }
    out.push(check("parseval", worst <= 1e-4, format!("max relative residual {worst:.2e} at K = 10^5")));

    let fs = exp::<BigFloat>().unwrap();
    let (a, b) = (BigFloat::zero(prec), BigFloat::one(prec));
    let truth = BigFloat::one(prec).exp() - BigFloat::one(prec);
    let tol = BigFloat::exp2(40 - prec as i64, prec) * truth.clone();
    let mut ok = true;
    for m in 1..=5 {
        for r in 1..=4 {
            for nsub in [1, 4, 16] {
                let rep = em_composite(&fs, &a, &b, nsub, m, r).unwrap();
                ok &= (rep.total.clone() - truth.clone()).abs() <= tol && rep.remainder.abs() <= rep.remainder_bound;
            }
        }
    }
    out.push(check("composite_total", ok, "main sum plus remainder equals e - 1"));
    out
}

fn series(prec: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let fs = power::<BigFloat>(3).unwrap();
    let mut worst = BigFloat::zero(prec);
    for m in [1, 2, 5] {
        for r in [1, 2, 4] {
            let n = BigFloat::from_i64(40, prec);
            let integral = fs.exact_integral(&BigFloat::from_i64(5, prec), &n).unwrap();
            worst = worst.max(finite_identity_residual(&fs, m, r, 5, 40, prec).unwrap() / integral);
        }
    }
    let tol = BigFloat::exp2(40 - prec as i64, prec);
    out.push(check("finite_identity", worst <= tol, format!("max relative residual {}", worst.to_sci(4))));

    let tol = BigFloat::exp2(-((prec / 2) as i64), prec);
    let ok = (1..=6).all(|r| rho_tail(&fs, 1, r, 3, &tol).unwrap().value.is_zero());
    out.push(check("level_one_no_correction", ok, "correction series vanishes at m = 1"));

    let z3 = BigFloat::from_rational(
        &gbern::rational::parse_rational("1.2020569031595942853997381615114499907649862923405").unwrap(),
        prec,
    );
    let mut ok = true;
    let mut detail = Vec::new();
    for (m, r, p) in [(5, 2, 100), (2, 2, 20), (3, 4, 5)] {
        let e = estimate_series(&fs, m, r, p, prec).unwrap();
        let err = (e.value - z3.clone()).abs();
        ok &= err <= e.error_bound;
        detail.push(format!("({m},{r},{p}) {}", err.to_sci(3)));
    }
    out.push(check("zeta3_within_bound", ok, detail.join(", ")));

    let h = harmonic::<BigFloat>().unwrap();
    let g1 = euler_constant(&h, 1, 6, prec).unwrap().value;
    let g2 = euler_constant(&h, 2, 6, prec).unwrap().value;
    let gap = (g1.clone() - g2).abs();
    let ok = gap < BigFloat::exp2(-(prec as i64) / 3, prec) && g1.to_sci(13).starts_with("5.772156649015");
    out.push(check("euler_constant", ok, format!("{} , levels differ by {}", g1.to_sci(25), gap.to_sci(3))));
    out
}
