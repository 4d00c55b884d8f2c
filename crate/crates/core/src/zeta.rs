//! Exact even zeta values `zeta(2r) = q pi^{2r}`.
//!
//! Besides Euler's classical relation this module evaluates the level-`m`
//! form `zeta(2r) = (-1)^{r-1} 2^{2r-1} pi^{2r} B_{2r}^{[m-1]} / (m! (2r)!) + Delta_r`,
//! whose correction `Delta_r` is computed both from boundary jumps and from
//! generalized Bernoulli numbers alone. The result does not depend on `m`.

use num_traits::{One, Zero};

use crate::bernoulli::{bernoulli, family};
use crate::error::{Error, Result};
use crate::rational::{binomial_q, factorial_q, format_rational, int, sign_pow, Rational};
use crate::scalar::{format_decimal, Precision, Real};

/// The exact value `q * pi^{2r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiMultiple {
    pub r: usize,
    pub q: Rational,
}

impl PiMultiple {
    pub fn new(r: usize, q: Rational) -> Self {
        PiMultiple { r, q }
    }

    pub fn to_real<F: Real>(&self, prec: Precision) -> F {
        F::from_rational(&self.q, prec) * F::pi(prec).powi(2 * self.r as i64)
    }

    /// Decimal string with `digits` significant digits.
    pub fn decimal<F: Real>(&self, prec: Precision, digits: usize) -> String {
        format_decimal(&self.to_real::<F>(prec), digits)
    }

    pub fn q_string(&self) -> String {
        format_rational(&self.q)
    }
}

fn require_r(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::InvalidArgument("r must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `(-1)^{r-1} 2^{2r-1}`.
fn euler_sign_power(r: usize) -> Rational {
    sign_pow(r - 1) * Rational::from_integer(num_bigint::BigInt::one() << (2 * r - 1))
}

/// Euler's relation `zeta(2r) = (-1)^{r-1} 2^{2r-1} B_{2r} / (2r)! pi^{2r}`.
pub fn euler_zeta(r: usize) -> Result<PiMultiple> {
    require_r(r)?;
    let q = euler_sign_power(r) * bernoulli(2 * r) / factorial_q(2 * r);
    Ok(PiMultiple::new(r, q))
}

/// `Delta_r^{[m-1]}` from the boundary jumps `B_j(1) - B_j`.
pub fn delta_from_jumps(m: usize, r: usize) -> Result<PiMultiple> {
    require_r(r)?;
    let fam = family(m)?;
    let mut bracket = fam.jump(2 * r) / (int(2) * factorial_q(2 * r)) - fam.jump(2 * r + 1) / factorial_q(2 * r + 1);
    for j in 1..r {
        let i = 2 * r - 2 * j + 1;
        bracket -= fam.jump(i) / factorial_q(i) * bernoulli(2 * j) / factorial_q(2 * j);
    }
    Ok(PiMultiple::new(r, euler_sign_power(r) * bracket / fam.m_factorial()))
}

/// `Delta_r^{[m-1]}` from generalized Bernoulli numbers only, with each jump
/// expanded as `B_i(1) - B_i = sum_{k<i} C(i,k) B_k`.
pub fn delta_from_numbers(m: usize, r: usize) -> Result<PiMultiple> {
    require_r(r)?;
    let fam = family(m)?;
    let partial = |i: usize| -> Rational {
        (0..i).fold(Rational::zero(), |acc, k| acc + binomial_q(i, k) * fam.number(k))
    };
    let mut bracket = partial(2 * r) / (int(2) * factorial_q(2 * r)) - partial(2 * r + 1) / factorial_q(2 * r + 1);
    for j in 1..r {
        let i = 2 * r - 2 * j + 1;
        bracket -= partial(i) * bernoulli(2 * j) / (factorial_q(i) * factorial_q(2 * j));
    }
    Ok(PiMultiple::new(r, euler_sign_power(r) * bracket / fam.m_factorial()))
}

/// `Delta_r^{[m-1]}`, checked to agree between both evaluations.
pub fn delta_term(m: usize, r: usize) -> Result<PiMultiple> {
    let a = delta_from_jumps(m, r)?;
    let b = delta_from_numbers(m, r)?;
    if a != b {
        return Err(Error::Inconsistent(format!(
            "Delta_{r} at level {m}: {} from jumps but {} from numbers",
            a.q_string(),
            b.q_string()
        )));
    }
    Ok(a)
}

/// `zeta(2r)` through the level-`m` generalization of Euler's relation.
pub fn zeta_even_via_gb(m: usize, r: usize) -> Result<PiMultiple> {
    let delta = delta_term(m, r)?;
    let fam = family(m)?;
    let main = euler_sign_power(r) * fam.number(2 * r) / (fam.m_factorial() * factorial_q(2 * r));
    Ok(PiMultiple::new(r, main + delta.q))
}

/// `zeta(2)` from the level-`m` polynomial `B_2^{[m-1]}` evaluated through
/// the Fourier series of `p_1^{[m-1]}` at one half.
pub fn zeta2_via_midpoint(m: usize) -> Result<PiMultiple> {
    let fam = family(m)?;
    let mf = fam.m_factorial().clone();
    let mq = int(m as i64);
    let one = Rational::one();
    let a = &mq - &one;
    let b = &mq + &one;
    let bracket = fam.number(2) / int(2) + &mf / int(4) * (&a / &b)
        - &mf / int(6) * (&a / (&b * &b)) * ((&mq * &mq + int(2) * &mq - int(2)) / (&mq + int(2)));
    Ok(PiMultiple::new(1, int(2) * bracket / mf))
}

/// Numeric `zeta(2r)` at `prec` bits.
pub fn zeta_even<F: Real>(r: usize, prec: Precision) -> Result<F> {
    Ok(euler_zeta(r)?.to_real(prec))
}
