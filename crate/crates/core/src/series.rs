//! Series against integrals: boundary sums, correction series, remainders,
//! Euler's constant of a function and the series estimator.
//!
//! With `S(l) = sum_{j<=l} f(j)` the composite rule of level `m` on
//! `[p, n]` with unit steps gives the exact identity
//!
//! ```text
//! int_p^n f = S(n-1) - S(p-1) + sigma(n) - sigma~(p) + rho(p, n) + R(p, n)
//! ```
//!
//! and letting `n -> inf`
//!
//! ```text
//! S(inf) = int_p^inf f + S(p-1) - sigma(inf) + sigma~(p) - e(p) - delta(p)
//! ```
//!
//! where `e(p) = rho(p, inf)` and `delta(p) = R(p, inf)`. Both tails are
//! summed or integrated directly up to a cut `Q` and the rest is expanded
//! against classical periodic Bernoulli functions, whose truncation is
//! bounded by `sup |B_n| <= 4 n! / (2 pi)^n` and `int_Q^inf |f^{(k)}|`.

use num_traits::Zero;

use crate::bernoulli::{bernoulli, expand_in_gb_basis, family};
use crate::em::sup_norm;
use crate::error::{Error, Result};
use crate::function::FunctionStack;
use crate::poly::horner;
use crate::quadrature::{GaussLegendre, CELL_NODES};
use crate::rational::{factorial_q, sign_pow, Rational};
use crate::scalar::{Precision, Real};

/// Smallest cut `Q` used for the tail expansions.
pub const FIRST_CUT: u64 = 32;

/// Number of times the cut may double before giving up.
const MAX_DOUBLINGS: u32 = 12;

/// Most terms taken from one periodic tail expansion.
const MAX_EXPANSION_TERMS: usize = 96;

fn at<F: Real>(j: u64, prec: Precision) -> F {
    F::from_i64(j as i64, prec)
}

fn require_r(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::InvalidArgument("r must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Default tail tolerance `2^{-P/2}`.
pub fn default_tolerance<F: Real>(prec: Precision) -> F {
    F::exp2(-((prec / 2) as i64), prec)
}

/// `S(l) = f(1) + ... + f(l)` in ascending order.
pub fn partial_sum<F: Real>(fs: &FunctionStack<F>, l: u64, prec: Precision) -> F {
    (1..=l).fold(F::zero(prec), |acc, j| acc + fs.f(&at(j, prec)))
}

/// `(1/m!) sum_{k=1}^r (-1)^{k+1} / k! f^{(k-1)}(q) c_k` for the given weights.
fn boundary_sum<F: Real>(
    fs: &FunctionStack<F>,
    m: usize,
    r: usize,
    q: &F,
    weight: impl Fn(usize) -> Rational,
) -> Result<F> {
    require_r(r)?;
    fs.require_order(r)?;
    let fam = family(m)?;
    let p = q.precision();
    let mut acc = F::zero(p);
    for k in 1..=r {
        let c = sign_pow(k + 1) * weight(k) / (fam.m_factorial() * factorial_q(k));
        acc = acc + F::from_rational(&c, p) * fs.deriv(k - 1, q)?;
    }
    Ok(acc)
}

/// `sigma(q) = (1/m!) sum_{k=1}^r (-1)^{k+1} / k! f^{(k-1)}(q) B_k^{[m-1]}(1)`.
pub fn sigma<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, q: u64, prec: Precision) -> Result<F> {
    let fam = family(m)?;
    boundary_sum(fs, m, r, &at(q, prec), |k| fam.boundary(k))
}

/// `sigma~(q) = f(q) + (1/m!) sum_{k=1}^r (-1)^{k+1} / k! f^{(k-1)}(q) B_k^{[m-1]}`.
pub fn sigma_tilde<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, q: u64, prec: Precision) -> Result<F> {
    let fam = family(m)?;
    let x = at(q, prec);
    Ok(fs.f(&x) + boundary_sum(fs, m, r, &x, |k| fam.number(k))?)
}

/// `sigma(inf) = lambda_0 B_1^{[m-1]}(1) / m! = lambda_0 m / (m+1)`; the
/// higher derivatives vanish at infinity.
pub fn sigma_infinity<F: Real>(fs: &FunctionStack<F>, m: usize, prec: Precision) -> Result<F> {
    let fam = family(m)?;
    let l = fs.limit().ok_or(Error::Missing("the limit of f at infinity"))?;
    let c = fam.boundary(1) / fam.m_factorial();
    Ok(F::from_rational(&c, prec) * l.clone())
}

/// Weights `(1/m!) (-1)^{k+1} / k! (B_k(1) - B_k)` for `k = 2..=r`.
fn rho_weights(m: usize, r: usize) -> Result<Vec<(usize, Rational)>> {
    let fam = family(m)?;
    Ok((2..=r)
        .map(|k| (k, sign_pow(k + 1) * fam.jump(k) / (fam.m_factorial() * factorial_q(k))))
        .filter(|(_, w)| !w.is_zero())
        .collect())
}

/// `rho(q1, q2) = (1/m!) sum_{j=q1+1}^{q2-1} sum_{k=2}^r (-1)^{k+1}/k! (B_k(1) - B_k) f^{(k-1)}(j)`.
pub fn rho<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, q1: u64, q2: u64, prec: Precision) -> Result<F> {
    require_r(r)?;
    fs.require_order(r)?;
    let weights = rho_weights(m, r)?;
    let w: Vec<(usize, F)> = weights.iter().map(|(k, c)| (*k, F::from_rational(c, prec))).collect();
    let mut acc = F::zero(prec);
    for j in (q1 + 1)..q2 {
        let x = at(j, prec);
        for (k, c) in &w {
            acc = acc + c.clone() * fs.deriv(k - 1, &x)?;
        }
    }
    Ok(acc)
}

/// A tail value with its certified truncation error.
#[derive(Clone, Debug)]
pub struct Certified<F: Real> {
    pub value: F,
    pub error: F,
    /// Cut where direct evaluation stopped.
    pub cut: u64,
}

/// `int_Q^inf g B_j({t}) dt` for `g = f^{(order)}` and the classical
/// `B_j`, `j >= 1`, by repeated integration by parts:
/// `sum_{i<L} (-1)^{i+1} j!/(j+i+1)! g^{(i)}(Q) B_{j+i+1}` with remainder at
/// most `4 j! / (2 pi)^{j+L} int_Q^inf |g^{(L)}|` (`1/2 int |g|` when `j + L = 1`).
fn periodic_tail<F: Real>(fs: &FunctionStack<F>, order: usize, j: usize, q: &F, tol: &F) -> Result<(F, F)> {
    let p = q.precision();
    let two_pi = F::pi(p) * F::from_i64(2, p);
    let jf = factorial_q(j);
    let max_l = fs.r_max().saturating_sub(order).min(MAX_EXPANSION_TERMS);
    let mut value = F::zero(p);
    let mut best: Option<(F, F)> = None;
    let mut worse = 0;
    let mut scale = F::from_rational(&(jf.clone() * Rational::from_integer(4.into())), p) / two_pi.powi(j as i64);
    for l in 0..=max_l {
        let Some(abs_tail) = fs.abs_deriv_tail(order + l, q) else {
            if best.is_none() {
                return Err(Error::Missing("a bound for the integral of |f^(k)| over the tail"));
            }
            break;
        };
        let s = if j + l == 1 { F::one(p) / F::from_i64(2, p) } else { scale.clone() };
        let err = s * abs_tail;
        let improved = best.as_ref().is_none_or(|(_, e)| err < *e);
        if improved {
            best = Some((value.clone(), err.clone()));
            worse = 0;
        } else {
            worse += 1;
        }
        if err <= *tol || worse >= 4 || l == max_l {
            break;
        }
        let idx = j + l + 1;
        if idx == 1 || idx % 2 == 0 {
            let c = sign_pow(l + 1) * &jf * bernoulli(idx) / factorial_q(idx);
            value = value + F::from_rational(&c, p) * fs.deriv(order + l, q)?;
        }
        scale = scale / two_pi.clone();
    }
    Ok(best.expect("at least one expansion order"))
}

/// `lim_{x -> inf} f^{(k)}(x)`: `lambda_0` for `k = 0`, zero otherwise.
fn derivative_limit<F: Real>(fs: &FunctionStack<F>, k: usize, prec: Precision) -> Result<F> {
    if k == 0 {
        fs.limit().cloned().ok_or(Error::Missing("the limit of f at infinity"))
    } else {
        Ok(F::zero(prec))
    }
}

fn certify<F: Real, G>(q1: u64, tol: &F, what: &str, mut attempt: G) -> Result<Certified<F>>
where
    G: FnMut(u64) -> Result<(F, F)>,
{
    let mut cut = q1.max(FIRST_CUT);
    let mut last_err = None;
    for _ in 0..=MAX_DOUBLINGS {
        let (value, error) = attempt(cut)?;
        if error <= *tol {
            return Ok(Certified { value, error, cut });
        }
        last_err = Some(error);
        cut *= 2;
    }
    Err(Error::TailNotCertifiable(format!(
        "{what}: truncation error {} still above tolerance {}",
        last_err.map(|e| e.to_sci(6)).unwrap_or_default(),
        tol.to_sci(6)
    )))
}

/// `e(q1) = rho(q1, inf)`, certified to `tol`.
pub fn rho_tail<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, q1: u64, tol: &F) -> Result<Certified<F>> {
    require_r(r)?;
    fs.require_order(r)?;
    let p = tol.precision();
    let weights = rho_weights(m, r)?;
    if weights.is_empty() {
        return Ok(Certified { value: F::zero(p), error: F::zero(p), cut: q1 });
    }
    let w: Vec<(usize, F)> = weights.iter().map(|(k, c)| (*k, F::from_rational(c, p))).collect();
    let total_weight = w.iter().fold(F::zero(p), |a, (_, c)| a + c.abs());
    let share = tol.clone() / total_weight.clone();
    let half = F::one(p) / F::from_i64(2, p);
    certify(q1, tol, "correction series tail", |cut| {
        let mut value = F::zero(p);
        let mut error = F::zero(p);
        for (k, c) in &w {
            // Direct terms j = q1+1 ..= cut.
            let mut direct = F::zero(p);
            for j in (q1 + 1)..=cut {
                direct = direct + fs.deriv(k - 1, &at(j, p))?;
            }
            // sum_{j>Q} g(j) = int_Q^inf g - g(Q)/2 + int_Q^inf g' B_1({t}).
            let q = at(cut, p);
            let integral = derivative_limit(fs, k - 2, p)? - fs.deriv(k - 2, &q)?;
            let (tail, err) = periodic_tail(fs, *k, 1, &q, &share)?;
            let rest = integral - half.clone() * fs.deriv(k - 1, &q)? + tail;
            value = value + c.clone() * (direct + rest);
            error = error + c.abs() * err;
        }
        Ok((value, error))
    })
}

/// Remainder integral `int_{q1}^{q2} f^{(r)}(t) B_r^{[m-1]}({t}) dt` over
/// unit cells, without the normalization, and an estimate of the
/// quadrature error. Cell `[j, j+1]` is split into `ceil(8/j)` pieces and
/// compared with twice that many.
fn cell_integral<F: Real>(
    fs: &FunctionStack<F>,
    m: usize,
    r: usize,
    q1: u64,
    q2: u64,
    prec: Precision,
) -> Result<(F, F)> {
    let fam = family(m)?;
    let gl = GaussLegendre::<F>::new(CELL_NODES, prec)?;
    let unit = gl.unit();
    let br = fam.polynomial(r).to_real::<F>(prec);
    let piece = |x0: &F, u0: &F, len: &F| -> Result<F> {
        let mut acc = F::zero(prec);
        for (u, w) in &unit {
            let v = u0.clone() + len.clone() * u.clone();
            acc = acc + w.clone() * fs.deriv(r, &(x0.clone() + v.clone()))? * horner(&br, &v);
        }
        Ok(acc * len.clone())
    };
    let split = |x0: &F, n: u64| -> Result<F> {
        let len = F::one(prec) / F::from_i64(n as i64, prec);
        let mut acc = F::zero(prec);
        for i in 0..n {
            acc = acc + piece(x0, &(len.clone() * F::from_i64(i as i64, prec)), &len)?;
        }
        Ok(acc)
    };
    let mut acc = F::zero(prec);
    let mut err = F::zero(prec);
    for j in q1..q2 {
        let x0: F = at(j, prec);
        let n = 8u64.div_ceil(j.max(1));
        let coarse = split(&x0, n)?;
        let fine = split(&x0, 2 * n)?;
        err = err + (fine.clone() - coarse).abs();
        acc = acc + fine;
    }
    Ok((acc, err))
}

/// `(-1)^r / (m! r!)`.
fn remainder_scale(m: usize, r: usize) -> Result<Rational> {
    let fam = family(m)?;
    Ok(sign_pow(r) / (fam.m_factorial() * factorial_q(r)))
}

/// `R(q1, q2) = (1/m!) (-1)^r / r! int_{q1}^{q2} f^{(r)}(t) B_r^{[m-1]}({t}) dt`.
pub fn remainder_r<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, q1: u64, q2: u64, prec: Precision) -> Result<F> {
    require_r(r)?;
    fs.require_order(r)?;
    let c = F::from_rational(&remainder_scale(m, r)?, prec);
    Ok(c * cell_integral(fs, m, r, q1, q2, prec)?.0)
}

/// `delta(q1) = R(q1, inf)` with its truncation error and the a priori
/// bound `mu_r / (m! r!) int_{q1}^inf |f^{(r)}|`.
#[derive(Clone, Debug)]
pub struct DeltaTail<F: Real> {
    pub value: F,
    pub truncation_error: F,
    pub bound: F,
    /// The same bound without the `1/m!` factor.
    pub bound_unscaled: F,
    pub cut: u64,
}

pub fn delta_tail<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, q1: u64, tol: &F) -> Result<DeltaTail<F>> {
    require_r(r)?;
    fs.require_order(r)?;
    let p = tol.precision();
    let fam = family(m)?;
    let start = at(q1, p);
    let abs_tail = fs
        .abs_deriv_tail(r, &start)
        .ok_or(Error::Missing("a bound for the integral of |f^(r)| over the tail"))?;
    let mu = sup_norm::<F>(m, r, p)?;
    let rf = F::from_rational(&factorial_q(r), p);
    let bound_unscaled = mu * abs_tail / rf;
    let bound = bound_unscaled.clone() / F::from_rational(fam.m_factorial(), p);

    let scale = remainder_scale(m, r)?;
    let scale_f = F::from_rational(&scale, p);
    let scale_abs = scale_f.abs();
    let coeffs = expand_in_gb_basis(&fam.polynomial(r), 1)?;
    let c: Vec<F> = coeffs.iter().map(|x| F::from_rational(x, p)).collect();
    let weight = c.iter().skip(1).fold(F::zero(p), |a, x| a + x.abs()) * scale_abs.clone();
    let share = if weight.is_zero() { tol.clone() } else { tol.clone() / weight };
    let limit = derivative_limit(fs, r - 1, p);
    let cert = certify(q1, tol, "remainder tail", |cut| {
        let (cells, quad_err) = cell_integral(fs, m, r, q1, cut, p)?;
        let q = at(cut, p);
        let mut tail = F::zero(p);
        let mut err = quad_err;
        if !c[0].is_zero() {
            let lim = limit.clone()?;
            tail = tail + c[0].clone() * (lim - fs.deriv(r - 1, &q)?);
        }
        for (j, cj) in c.iter().enumerate().skip(1) {
            if cj.is_zero() {
                continue;
            }
            let (v, e) = periodic_tail(fs, r, j, &q, &share)?;
            tail = tail + cj.clone() * v;
            err = err + cj.abs() * e;
        }
        Ok((scale_f.clone() * (cells + tail), scale_abs.clone() * err))
    })?;
    Ok(DeltaTail { value: cert.value, truncation_error: cert.error, bound, bound_unscaled, cut: cert.cut })
}

/// `|int_p^n f - [S(n-1) - S(p-1) + sigma(n) - sigma~(p) + rho(p, n) + R(p, n)]|`.
pub fn finite_identity_residual<F: Real>(
    fs: &FunctionStack<F>,
    m: usize,
    r: usize,
    p: u64,
    n: u64,
    prec: Precision,
) -> Result<F> {
    if p == 0 || p > n {
        return Err(Error::InvalidArgument("need 1 <= p <= n".into()));
    }
    let integral = fs
        .exact_integral(&at(p, prec), &at(n, prec))
        .ok_or(Error::Missing("an exact integral"))?;
    let rhs = partial_sum(fs, n - 1, prec) - partial_sum(fs, p - 1, prec) + sigma(fs, m, r, n, prec)?
        - sigma_tilde(fs, m, r, p, prec)?
        + rho(fs, m, r, p, n, prec)?
        + remainder_r(fs, m, r, p, n, prec)?;
    Ok((integral - rhs).abs())
}

/// Rounding allowance for `terms` accumulated operations on values of size `scale`.
fn rounding_budget<F: Real>(terms: u64, scale: &F, prec: Precision) -> F {
    let s = scale.abs().max(F::one(prec));
    F::exp2(-(prec as i64), prec) * F::from_i64(16 * (terms as i64 + 64), prec) * s
}

/// `gamma(f) = lambda_0 + sigma~(1) - sigma(inf) - rho(1, inf) - R(1, inf)`.
#[derive(Clone, Debug)]
pub struct EulerConstant<F: Real> {
    pub value: F,
    pub error_bound: F,
}

pub fn euler_constant<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, prec: Precision) -> Result<EulerConstant<F>> {
    euler_constant_with_tol(fs, m, r, &default_tolerance(prec))
}

pub fn euler_constant_with_tol<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, tol: &F) -> Result<EulerConstant<F>> {
    let prec = tol.precision();
    let lambda = fs.limit().cloned().ok_or(Error::Missing("the limit of f at infinity"))?;
    let st = sigma_tilde(fs, m, r, 1, prec)?;
    let si = sigma_infinity(fs, m, prec)?;
    let e = rho_tail(fs, m, r, 1, tol)?;
    let d = delta_tail(fs, m, r, 1, tol)?;
    let value = lambda + st - si - e.value - d.value;
    let rounding = rounding_budget(e.cut.max(d.cut) * CELL_NODES as u64, &value, prec);
    Ok(EulerConstant { error_bound: e.error + d.truncation_error + rounding, value })
}

/// Terms of the series estimate `S(inf)`.
#[derive(Clone, Debug)]
pub struct SeriesEstimate<F: Real> {
    pub m: usize,
    pub r: usize,
    pub p: u64,
    pub value: F,
    /// `int_p^inf f`.
    pub integral_tail: F,
    /// `S(p-1)`.
    pub partial_sum: F,
    pub sigma_tilde: F,
    pub sigma_inf: F,
    pub e_tail: F,
    pub delta_tail: F,
    /// Certified bound on `|value - S(inf)|`.
    pub error_bound: F,
    pub e_error: F,
    pub delta_error: F,
    pub rounding: F,
    /// `mu_r / (m! r!) int_p^inf |f^{(r)}|`.
    pub delta_bound: F,
    pub delta_bound_unscaled: F,
}

impl<F: Real> SeriesEstimate<F> {
    /// The estimate with `delta(p)` dropped.
    pub fn value_without_delta(&self) -> F {
        self.value.clone() + self.delta_tail.clone()
    }
}

/// `S(inf)` with the default tolerance `2^{-P/2}`.
pub fn estimate_series<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, p: u64, prec: Precision) -> Result<SeriesEstimate<F>> {
    estimate_series_with_tol(fs, m, r, p, &default_tolerance(prec))
}

pub fn estimate_series_with_tol<F: Real>(
    fs: &FunctionStack<F>,
    m: usize,
    r: usize,
    p: u64,
    tol: &F,
) -> Result<SeriesEstimate<F>> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be at least 1".into()));
    }
    let prec = tol.precision();
    let integral_tail = fs.tail_integral(&at(p, prec)).ok_or(Error::Missing("the tail integral of f"))?;
    let partial = partial_sum(fs, p - 1, prec);
    let st = sigma_tilde(fs, m, r, p, prec)?;
    let si = sigma_infinity(fs, m, prec)?;
    let e = rho_tail(fs, m, r, p, tol)?;
    let d = delta_tail(fs, m, r, p, tol)?;
    let value = integral_tail.clone() + partial.clone() - si.clone() + st.clone() - e.value.clone() - d.value.clone();
    let rounding = rounding_budget(p + e.cut.max(d.cut) * CELL_NODES as u64, &value, prec);
    Ok(SeriesEstimate {
        m,
        r,
        p,
        error_bound: e.error.clone() + d.truncation_error.clone() + rounding.clone(),
        value,
        integral_tail,
        partial_sum: partial,
        sigma_tilde: st,
        sigma_inf: si,
        e_tail: e.value,
        delta_tail: d.value,
        e_error: e.error,
        delta_error: d.truncation_error,
        rounding,
        delta_bound: d.bound,
        delta_bound_unscaled: d.bound_unscaled,
    })
}

/// Joint behaviour of `sum f(j)` and `int_1^inf f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    BothConverge,
    BothDiverge,
    Undetermined,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::BothConverge => "both_converge",
            Verdict::BothDiverge => "both_diverge",
            Verdict::Undetermined => "undetermined",
        }
    }
}

/// Applies the series/integral equivalence when its hypotheses can be
/// certified: a finite `lambda_0`, finite `int_1^inf |f^{(r)}|`, and an
/// absolutely convergent correction series, which follows from finite
/// `int |f^{(k-1)}|` and `int |f^{(k)}|` for every `k` with a nonzero jump.
pub fn convergence_verdict<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, prec: Precision) -> Verdict {
    if r == 0 || fs.require_order(r).is_err() {
        return Verdict::Undetermined;
    }
    let Some(lambda) = fs.limit() else {
        return Verdict::Undetermined;
    };
    let one = F::one(prec);
    let finite = |k: usize| fs.abs_deriv_tail(k, &one).is_some_and(|v| v.is_finite());
    if !finite(r) {
        return Verdict::Undetermined;
    }
    let Ok(weights) = rho_weights(m, r) else {
        return Verdict::Undetermined;
    };
    if weights.iter().any(|(k, _)| !finite(k - 1) || !finite(*k)) {
        return Verdict::Undetermined;
    }
    match fs.integral_converges() {
        Some(true) => Verdict::BothConverge,
        Some(false) => Verdict::BothDiverge,
        None if !lambda.is_zero() => Verdict::BothDiverge,
        None => Verdict::Undetermined,
    }
}
