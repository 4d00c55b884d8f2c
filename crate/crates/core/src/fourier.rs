//! Periodic generalized Bernoulli functions `p_n^{[m-1]}(x) = B_n^{[m-1]}({x}) / n!`
//! and their Fourier series.
//!
//! For `m > 1` the functions jump at every integer, so the coefficients pick
//! up one term per jump `D_i = (B_i^{[m-1]}(1) - B_i^{[m-1]}) / i!`:
//!
//! ```text
//! a_k = sum_{j=0}^{n/2-1} (-1)^j     2 D_{n-2j-1} / (2 pi k)^{2j+2}
//! b_k = sum_{j=0}^{n/2}   (-1)^{j+1} 2 D_{n-2j}   / (2 pi k)^{2j+1}
//! ```
//!
//! with `a_0 = 2 D_{n+1}`.

use crate::bernoulli::{bernoulli_polynomial, family};
use crate::error::{check_level, Error, Result};
use crate::poly::{horner, RatPoly};
use crate::rational::{factorial_q, int, Rational};
use crate::scalar::{Precision, Real};
use crate::zeta::euler_zeta;

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `p_n^{[m-1]}` with coefficients rounded once to a working precision.
#[derive(Clone, Debug)]
pub struct PeriodicGb<F: Real> {
    m: usize,
    n: usize,
    coeffs: Vec<F>,
}

impl<F: Real> PeriodicGb<F> {
    pub fn new(m: usize, n: usize, prec: Precision) -> Result<Self> {
        let poly = family(m)?.polynomial(n).scale(&(Rational::from_integer(1.into()) / factorial_q(n)));
        Ok(PeriodicGb { m, n, coeffs: poly.to_real(prec) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Value at `x`; at integers this is the right limit `B_n^{[m-1]} / n!`.
    pub fn eval(&self, x: &F) -> F {
        horner(&self.coeffs, &x.fract())
    }

    /// `B_n^{[m-1]}(u) / n!` for `u` already in `[0, 1]`.
    pub fn eval_cell(&self, u: &F) -> F {
        horner(&self.coeffs, u)
    }
}

/// `p_n^{[m-1]}(x)`.
pub fn periodic_eval<F: Real>(m: usize, n: usize, x: &F) -> Result<F> {
    Ok(PeriodicGb::new(m, n, x.precision())?.eval(x))
}

/// `(p_n(0^+) + p_n(0^-)) / 2 = (B_n^{[m-1]} + B_n^{[m-1]}(1)) / (2 n!)`, the
/// value the Fourier series takes at integers.
pub fn dirichlet_average(m: usize, n: usize) -> Result<Rational> {
    let fam = family(m)?;
    Ok((fam.number(n) + fam.boundary(n)) / (int(2) * factorial_q(n)))
}

/// Fourier coefficients of `p_n^{[m-1]}` up to index `K`.
#[derive(Clone, Debug)]
pub struct FourierCoeffs<F: Real> {
    pub m: usize,
    pub n: usize,
    /// The full constant coefficient; the series starts with `a0 / 2`.
    pub a0: Rational,
    pub a: Vec<F>,
    pub b: Vec<F>,
}

/// Evaluates `a_k`, `b_k` for arbitrary `k` without storing them.
#[derive(Clone, Debug)]
pub struct FourierTerms<F: Real> {
    m: usize,
    n: usize,
    a0: Rational,
    /// `D_i` for `i = 0..=n`.
    jumps: Vec<F>,
    inv_two_pi: F,
    prec: Precision,
}

impl<F: Real> FourierTerms<F> {
    pub fn new(m: usize, n: usize, prec: Precision) -> Result<Self> {
        require_n(n)?;
        check_level(m)?;
        let fam = family(m)?;
        let jump = |i: usize| fam.jump(i) / factorial_q(i);
        let jumps = (0..=n).map(|i| F::from_rational(&jump(i), prec)).collect();
        let two_pi = F::pi(prec) * F::from_i64(2, prec);
        Ok(FourierTerms {
            m,
            n,
            a0: int(2) * jump(n + 1),
            jumps,
            inv_two_pi: F::one(prec) / two_pi,
            prec,
        })
    }

    pub fn a0(&self) -> &Rational {
        &self.a0
    }

    /// `(a_k, b_k)` for `k >= 1`.
    pub fn coeff(&self, k: u64) -> (F, F) {
        let p = self.prec;
        let n = self.n;
        let u = self.inv_two_pi.clone() / F::from_i64(k as i64, p);
        let u2 = u.clone() * u.clone();
        let two = F::from_i64(2, p);
        let mut a = F::zero(p);
        let mut pw = u2.clone();
        for j in 0..n / 2 {
            let t = two.clone() * pw.clone() * self.jumps[n - 2 * j - 1].clone();
            a = if j % 2 == 0 { a + t } else { a - t };
            pw = pw * u2.clone();
        }
        let mut b = F::zero(p);
        let mut pw = u;
        for j in 0..=n / 2 {
            let idx = n - 2 * j;
            if idx > 0 {
                let t = two.clone() * pw.clone() * self.jumps[idx].clone();
                b = if j % 2 == 0 { b - t } else { b + t };
            }
            pw = pw * u2.clone();
        }
        (a, b)
    }

    pub fn collect(&self, k_max: usize) -> FourierCoeffs<F> {
        let (a, b) = (1..=k_max as u64).map(|k| self.coeff(k)).unzip();
        FourierCoeffs { m: self.m, n: self.n, a0: self.a0.clone(), a, b }
    }
}

/// Coefficients `a_0` and `a_k, b_k` for `k = 1..=K`.
pub fn fourier_coeffs<F: Real>(m: usize, n: usize, k_max: usize, prec: Precision) -> Result<FourierCoeffs<F>> {
    Ok(FourierTerms::new(m, n, prec)?.collect(k_max))
}

/// `(cos 2 pi t, sin 2 pi t)` with `t` reduced to `[0, 1)` first.
pub fn cos_sin_turns<F: Real>(t: &F) -> (F, F) {
    let p = t.precision();
    let t = t.fract();
    let quarter = |q: i64| F::from_rational(&Rational::new(q.into(), 4.into()), p);
    let (o, z) = (F::one(p), F::zero(p));
    if t.is_zero() {
        return (o, z);
    }
    if t == quarter(1) {
        return (z, o);
    }
    if t == quarter(2) {
        return (-o, z);
    }
    if t == quarter(3) {
        return (z, -o);
    }
    let arg = F::pi(p) * F::from_i64(2, p) * t;
    let (s, c) = arg.sin_cos();
    (c, s)
}

/// `a0/2 + sum_{k=1}^{K} a_k cos(2 pi k x) + b_k sin(2 pi k x)`, summed in
/// ascending `k`.
pub fn fourier_partial_sum<F: Real>(m: usize, n: usize, x: &F, k_max: usize) -> Result<F> {
    let p = x.precision();
    let terms = FourierTerms::<F>::new(m, n, p)?;
    let xf = x.fract();
    let mut acc = F::from_rational(&(terms.a0.clone() / int(2)), p);
    for k in 1..=k_max as u64 {
        let (a, b) = terms.coeff(k);
        let t = (xf.clone() * F::from_i64(k as i64, p)).fract();
        let (c, s) = cos_sin_turns(&t);
        acc = acc + a * c + b * s;
    }
    Ok(acc)
}

/// `p_n^{[m-1]}(x) = sum_j c_j x^j + m! p_n(x)` on `(0, 1)`.
#[derive(Clone, Debug)]
pub struct ZetaExpansion<F: Real> {
    pub m: usize,
    pub n: usize,
    /// `c_0 .. c_{n-1}`.
    pub c: Vec<F>,
}

impl<F: Real> ZetaExpansion<F> {
    /// Evaluates the right-hand side at `x` in `(0, 1)`.
    pub fn eval(&self, x: &F) -> Result<F> {
        let p = x.precision();
        let classical = bernoulli_polynomial(self.n).eval_real(x) / F::from_rational(&factorial_q(self.n), p);
        let mf = F::from_rational(&factorial_q(self.m), p);
        Ok(horner(&self.c, x) + mf * classical)
    }
}

/// `B_j / j!` for the classical numbers, with even indices taken from
/// `zeta(j)`: `B_{2i} / (2i)! = (-1)^{i-1} 2 zeta(2i) / (2 pi)^{2i}`.
fn classical_over_factorial<F: Real>(j: usize, prec: Precision) -> Result<F> {
    if j == 1 {
        return Ok(F::from_rational(&Rational::new((-1).into(), 2.into()), prec));
    }
    if j % 2 == 1 {
        return Ok(F::zero(prec));
    }
    let i = j / 2;
    let z: F = euler_zeta(i)?.to_real(prec);
    let two_pi = F::pi(prec) * F::from_i64(2, prec);
    let v = F::from_i64(2, prec) * z / two_pi.powi(j as i64);
    Ok(if i % 2 == 1 { v } else { -v })
}

/// Builds the coefficients of `p_n^{[m-1]} - m! p_n` on `(0, 1)` by
/// iterated integration from `p_1^{[m-1]} - m! p_1 = m!(m-1)/(2(m+1))`.
pub fn zeta_expansion<F: Real>(m: usize, n: usize, prec: Precision) -> Result<ZetaExpansion<F>> {
    require_n(n)?;
    let fam = family(m)?;
    let mf = fam.m_factorial().clone();
    let mf_real = F::from_rational(&mf, prec);
    let start = &mf * Rational::new(((m as i64) - 1).into(), (2 * (m as i64) + 2).into());
    let mut q = vec![F::from_rational(&start, prec)];
    for k in 1..n {
        let j = k + 1;
        let level = F::from_rational(&(fam.number(j) / factorial_q(j)), prec);
        let classical = classical_over_factorial::<F>(j, prec)?;
        let mut next = Vec::with_capacity(q.len() + 1);
        next.push(level - mf_real.clone() * classical);
        for (i, c) in q.iter().enumerate() {
            next.push(c.clone() / F::from_i64(i as i64 + 1, prec));
        }
        q = next;
    }
    Ok(ZetaExpansion { m, n, c: q })
}

/// Exact `(B_n^{[m-1]}(x) - m! B_n(x)) / n!`, a polynomial of degree below `n`.
pub fn exact_polynomial_part(m: usize, n: usize) -> Result<RatPoly> {
    let fam = family(m)?;
    let diff = &fam.polynomial(n) - &bernoulli_polynomial(n).scale(fam.m_factorial());
    Ok(diff.scale(&(Rational::from_integer(1.into()) / factorial_q(n))))
}

/// Sampled `(x, B_n^{[m-1]}(x))` on `[0, 1]` and `(x, p_n^{[m-1]}(x))` on `[-1, 2]`.
pub fn sample_tables<F: Real>(m: usize, n: usize, samples: usize, prec: Precision) -> Result<(Vec<(F, F)>, Vec<(F, F)>)> {
    if samples < 2 {
        return Err(Error::InvalidArgument("at least two samples are needed".into()));
    }
    let poly = family(m)?.polynomial(n);
    let per = PeriodicGb::<F>::new(m, n, prec)?;
    let steps = F::from_i64(samples as i64 - 1, prec);
    let mut poly_rows = Vec::with_capacity(samples);
    let mut per_rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = F::from_i64(i as i64, prec) / steps.clone();
        poly_rows.push((t.clone(), poly.eval_real(&t)));
        let x = F::from_i64(3, prec) * t - F::one(prec);
        per_rows.push((x.clone(), per.eval(&x)));
    }
    Ok((poly_rows, per_rows))
}

impl<F: Real> FourierCoeffs<F> {
    /// `max_k k^2 |a_k|` and `max_k k |b_k|`.
    pub fn decay_constants(&self) -> (F, F) {
        let p = self.a.first().map(|v| v.precision()).unwrap_or(53);
        let mut ca = F::zero(p);
        let mut cb = F::zero(p);
        for (i, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let k = F::from_i64(i as i64 + 1, p);
            ca = ca.max(a.abs() * k.clone() * k.clone());
            cb = cb.max(b.abs() * k);
        }
        (ca, cb)
    }
}

/// `true` when every coefficient is zero.
pub fn all_zero<F: Real>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::scalar::BigFloat;
    use num_traits::Zero;

    #[test]
    fn periodic_values() {
        let x = 0.25f64;
        assert!((periodic_eval(1, 1, &x).unwrap() + 0.25).abs() < 1e-15);
        assert!((periodic_eval(1, 1, &7.25f64).unwrap() + 0.25).abs() < 1e-15);
        let v: BigFloat = periodic_eval(2, 1, &BigFloat::zero(128)).unwrap();
        assert_eq!(v, BigFloat::from_rational(&rat(-2, 3), 128));
    }

    #[test]
    fn level_one_coefficients() {
        let c = fourier_coeffs::<f64>(1, 2, 1, 53).unwrap();
        let expect = 2.0 / (2.0 * std::f64::consts::PI).powi(2);
        assert!((c.a[0] - expect).abs() < 1e-16);
        assert_eq!(c.b[0], 0.0);
        assert_eq!(c.a0, Rational::zero());
    }

    #[test]
    fn first_order_coefficients() {
        for m in 1..=5usize {
            let c = fourier_coeffs::<f64>(m, 1, 3, 53).unwrap();
            let mf = factorial_q(m);
            let expect = &mf * rat((m as i64) - 1, 2 * (m as i64) + 2);
            assert_eq!(c.a0.clone() / int(2), expect);
            for (k, (a, b)) in c.a.iter().zip(&c.b).enumerate() {
                assert_eq!(*a, 0.0);
                let mf = crate::rational::factorial(m).to_string().parse::<f64>().unwrap();
                let want = -2.0 * mf / (2.0 * std::f64::consts::PI * (k + 1) as f64);
                assert!((b - want).abs() < 1e-14 * want.abs());
            }
        }
    }

    #[test]
    fn level_two_second_order() {
        let c = fourier_coeffs::<f64>(2, 2, 1, 53).unwrap();
        let tp = 2.0 * std::f64::consts::PI;
        assert!((c.a[0] - 4.0 / (tp * tp)).abs() < 1e-15);
        assert!((c.b[0] + 2.0 / tp / 3.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_turns_are_exact() {
        let p = 128;
        let (c, s) = cos_sin_turns(&BigFloat::from_rational(&rat(5, 4), p));
        assert!(c.is_zero());
        assert_eq!(s, BigFloat::one(p));
    }

    #[test]
    fn expansion_constant_for_n1() {
        let z = zeta_expansion::<f64>(3, 1, 53).unwrap();
        assert_eq!(z.c.len(), 1);
        assert!((z.c[0] - 6.0 * 2.0 / 8.0).abs() < 1e-15);
    }
}
