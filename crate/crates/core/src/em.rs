//! Euler-Maclaurin quadrature of level `m`, product integrals, `L^2` norms
//! and sup norms of the generalized Bernoulli polynomials.
//!
//! On one cell the rule reads
//!
//! ```text
//! int_0^1 f = 1/m! [ sum_{k=1}^r A_k(f) + (-1)^r / r! int_0^1 f^{(r)} B_r ]
//! A_k(f)    = (-1)^k / k! (f^{(k-1)}(0) B_k - f^{(k-1)}(1) B_k(1))
//! ```
//!
//! and the composite rule applies it to every subinterval of width `h`.

use num_traits::{Signed, Zero};

use crate::bernoulli::family;
use crate::error::{check_level, Error, Result};
use crate::fourier::FourierTerms;
use crate::function::FunctionStack;
use crate::poly::{horner, RatPoly};
use crate::quadrature::{GaussLegendre, CELL_NODES};
use crate::rational::{binomial_q, factorial_q, int, sign_pow, Rational};
use crate::scalar::{Precision, Real};

/// Outcome of one quadrature run.
#[derive(Clone, Debug)]
pub struct QuadratureReport<F: Real> {
    /// The boundary terms.
    pub main_sum: F,
    /// The integral remainder, evaluated by Gauss-Legendre per cell.
    pub remainder: F,
    pub remainder_bound: F,
    pub total: F,
}

fn require_r(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::InvalidArgument("r must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Composite rule on `[a, b]` with `n_sub` subintervals.
pub fn em_composite<F: Real>(
    fs: &FunctionStack<F>,
    a: &F,
    b: &F,
    n_sub: usize,
    m: usize,
    r: usize,
) -> Result<QuadratureReport<F>> {
    require_r(r)?;
    fs.require_order(r)?;
    if n_sub == 0 {
        return Err(Error::InvalidArgument("n_sub must be at least 1".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument("need a < b".into()));
    }
    let p = a.precision().max(b.precision());
    let fam = family(m)?;
    let h = (b.clone() - a.clone()) / F::from_i64(n_sub as i64, p);
    let node = |j: usize| a.clone() + h.clone() * F::from_i64(j as i64, p);

    // Weights (-1)^{k+1} h^k / (m! k!) times B_k(1) and B_k.
    let mut w_one = Vec::with_capacity(r);
    let mut w_zero = Vec::with_capacity(r);
    let mut hk = F::one(p);
    for k in 1..=r {
        hk = hk * h.clone();
        let c = sign_pow(k + 1) / (fam.m_factorial() * factorial_q(k));
        w_one.push(hk.clone() * F::from_rational(&(&c * fam.boundary(k)), p));
        w_zero.push(hk.clone() * F::from_rational(&(&c * fam.number(k)), p));
    }
    let mut main = F::zero(p);
    for j in 0..n_sub {
        let (x0, x1) = (node(j), node(j + 1));
        for k in 1..=r {
            let d1 = fs.deriv(k - 1, &x1)?;
            let d0 = fs.deriv(k - 1, &x0)?;
            main = main + w_one[k - 1].clone() * d1 - w_zero[k - 1].clone() * d0;
        }
    }

    let gl = GaussLegendre::<F>::new(CELL_NODES, p)?;
    let unit = gl.unit();
    let br = fam.polynomial(r).to_real::<F>(p);
    let br_nodes: Vec<F> = unit.iter().map(|(u, _)| horner(&br, u)).collect();
    let mut integral = F::zero(p);
    let mut abs_integral = F::zero(p);
    for j in 0..n_sub {
        let x0 = node(j);
        let mut cell = F::zero(p);
        let mut cell_abs = F::zero(p);
        for ((u, w), bu) in unit.iter().zip(&br_nodes) {
            let d = fs.deriv(r, &(x0.clone() + h.clone() * u.clone()))?;
            cell = cell + w.clone() * d.clone() * bu.clone();
            cell_abs = cell_abs + w.clone() * d.abs();
        }
        integral = integral + cell * h.clone();
        abs_integral = abs_integral + cell_abs * h.clone();
    }
    let scale = F::from_rational(&(Rational::from_integer(1.into()) / (fam.m_factorial() * factorial_q(r))), p);
    let hr = h.powi(r as i64);
    let signed_hr = if r % 2 == 1 { -hr.clone() } else { hr.clone() };
    let remainder = signed_hr * scale.clone() * integral;
    let mu = sup_norm::<F>(m, r, p)?;
    let remainder_bound = hr * mu * scale * abs_integral;
    Ok(QuadratureReport { total: main.clone() + remainder.clone(), main_sum: main, remainder, remainder_bound })
}

/// Single-cell rule on `[0, 1]`.
pub fn em_unit<F: Real>(fs: &FunctionStack<F>, m: usize, r: usize, prec: Precision) -> Result<QuadratureReport<F>> {
    em_composite(fs, &F::zero(prec), &F::one(prec), 1, m, r)
}

/// `(main_sum, remainder)` of the single-cell rule for a polynomial, both exact.
pub fn em_unit_exact(f: &RatPoly, m: usize, r: usize) -> Result<(Rational, Rational)> {
    require_r(r)?;
    let fam = family(m)?;
    let mut main = Rational::zero();
    let mut d = f.clone();
    for k in 1..=r {
        let a_k = sign_pow(k) / factorial_q(k)
            * (d.eval(&int(0)) * fam.number(k) - d.eval(&int(1)) * fam.boundary(k));
        main += a_k;
        d = d.derivative();
    }
    let rem = sign_pow(r) / factorial_q(r) * (&d * &fam.polynomial(r)).definite_integral(&int(0), &int(1));
    let mf = fam.m_factorial();
    Ok((main / mf, rem / mf))
}

/// `int_0^1 B_r^{[m-1]} B_n^{[m-1]}` by the closed form obtained from the
/// single-cell rule applied to `B_{r+n}`.
pub fn product_integral(m: usize, r: usize, n: usize) -> Result<Rational> {
    require_r(r)?;
    require_r(n)?;
    let fam = family(m)?;
    let s = r + n;
    let mut acc = (fam.number(s + 1) - fam.boundary(s + 1)) / int(s as i64 + 1);
    let mut a_sum = Rational::zero();
    for k in 1..=r {
        let t = fam.number(s - k + 1) * fam.number(k) - fam.boundary(s - k + 1) * fam.boundary(k);
        a_sum += sign_pow(k) / int(k as i64) * binomial_q(s, k - 1) * t;
    }
    acc += a_sum / fam.m_factorial();
    Ok(sign_pow(r + 1) * factorial_q(r) * factorial_q(n) * fam.m_factorial() / factorial_q(s) * acc)
}

/// `int_0^1 B_r^{[m-1]} B_n^{[m-1]}` by exact polynomial multiplication.
pub fn product_integral_oracle(m: usize, r: usize, n: usize) -> Result<Rational> {
    let fam = family(m)?;
    Ok((&fam.polynomial(r) * &fam.polynomial(n)).definite_integral(&int(0), &int(1)))
}

/// The classical `int_0^1 B_s B_r = (-1)^{s+1} s! r! / (s+r)! B_{s+r}`.
pub fn classical_product_integral(s: usize, r: usize) -> Rational {
    sign_pow(s + 1) * factorial_q(s) * factorial_q(r) / factorial_q(s + r) * crate::bernoulli::bernoulli(s + r)
}

/// Shared sum `sum_{k=1}^n (-1)^k / ((2n+1-k)! k!) (B_{2n+1-k} B_k - B_{2n+1-k}(1) B_k(1))`.
fn norm_sum(m: usize, n: usize) -> Result<Rational> {
    let fam = family(m)?;
    let mut acc = Rational::zero();
    for k in 1..=n {
        let i = 2 * n + 1 - k;
        let t = fam.number(i) * fam.number(k) - fam.boundary(i) * fam.boundary(k);
        acc += sign_pow(k) / (factorial_q(i) * factorial_q(k)) * t;
    }
    Ok(acc)
}

/// `||B_n^{[m-1]}||^2` on `[0, 1]`.
pub fn l2_norm_sq(m: usize, n: usize) -> Result<Rational> {
    require_r(n)?;
    let fam = family(m)?;
    let nf2 = factorial_q(n) * factorial_q(n);
    let first = &nf2 * fam.m_factorial() * sign_pow(n) / factorial_q(2 * n + 1) * fam.jump(2 * n + 1);
    Ok(first + nf2 * sign_pow(n + 1) * norm_sum(m, n)?)
}

/// `sum_{k>=1} A_{k,n}^2 + B_{k,n}^2` in closed form, where `A, B` are half
/// the Fourier coefficients of `p_n^{[m-1]}`.
pub fn parseval_rhs(m: usize, n: usize) -> Result<Rational> {
    require_r(n)?;
    let fam = family(m)?;
    let nf2 = factorial_q(n) * factorial_q(n);
    let j = fam.jump(n + 1);
    let n1 = int(n as i64 + 1);
    let first = fam.m_factorial() * sign_pow(n) / (int(2) * factorial_q(2 * n + 1)) * fam.jump(2 * n + 1);
    let second = &j * &j / (int(2) * &n1 * &n1 * nf2);
    Ok(first - second + sign_pow(n + 1) / int(2) * norm_sum(m, n)?)
}

/// `sum_{k=1}^K A_{k,n}^2 + B_{k,n}^2`, ascending in `k`.
pub fn parseval_partial<F: Real>(m: usize, n: usize, k_max: usize, prec: Precision) -> Result<F> {
    let terms = FourierTerms::<F>::new(m, n, prec)?;
    let quarter = F::one(prec) / F::from_i64(4, prec);
    let mut acc = F::zero(prec);
    for k in 1..=k_max as u64 {
        let (a, b) = terms.coeff(k);
        acc = acc + (a.clone() * a + b.clone() * b) * quarter.clone();
    }
    Ok(acc)
}

/// `|parseval_rhs - parseval_partial(K)|`.
pub fn parseval_residual<F: Real>(m: usize, n: usize, k_max: usize, prec: Precision) -> Result<F> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    let rhs = F::from_rational(&parseval_rhs(m, n)?, prec);
    Ok((rhs - parseval_partial::<F>(m, n, k_max, prec)?).abs())
}

/// Sturm chain of a square-free polynomial.
fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while let Some(last) = chain.last() {
        if last.degree().unwrap_or(0) == 0 {
            break;
        }
        let (_, rem) = chain[chain.len() - 2].div_rem(last);
        if rem.is_zero() {
            break;
        }
        chain.push(-&rem);
    }
    chain
}

/// Sign of `p` just to the right of `x`.
fn sign_right(p: &RatPoly, x: &Rational) -> i32 {
    let mut d = p.clone();
    while !d.is_zero() {
        let v = d.eval(x);
        if !v.is_zero() {
            return if v.is_positive() { 1 } else { -1 };
        }
        d = d.derivative();
    }
    0
}

fn variations(chain: &[RatPoly], x: &Rational) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| sign_right(p, x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Approximations within `width` of every root of `p` in `(0, 1)`.
fn roots_in_unit_interval(p: &RatPoly, width: &Rational) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = {
        let g = p.gcd(&p.derivative());
        p.div_rem(&g).0
    };
    let chain = sturm_chain(&sf);
    let (zero, one) = (int(0), int(1));
    let mut total = variations(&chain, &zero) - variations(&chain, &one);
    if sf.eval(&one).is_zero() {
        total -= 1;
    }
    let mut out = Vec::new();
    let mut stack = vec![(zero, one, total)];
    while let Some((lo, hi, c)) = stack.pop() {
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push(refine_root(&sf, lo, hi, width));
            continue;
        }
        let mid = (&lo + &hi) / int(2);
        let left = variations(&chain, &lo) - variations(&chain, &mid);
        stack.push((mid.clone(), hi, c - left));
        stack.push((lo, mid, left));
    }
    out
}

/// Bisects the single root of square-free `p` in `(lo, hi]`.
fn refine_root(p: &RatPoly, mut lo: Rational, mut hi: Rational, width: &Rational) -> Rational {
    if p.eval(&hi).is_zero() {
        return hi;
    }
    let s_hi = sign_right(p, &hi);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / int(2);
        let v = p.eval(&mid);
        if v.is_zero() {
            return mid;
        }
        let s = if v.is_positive() { 1 } else { -1 };
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / int(2)
}

/// `max_{[0,1]} |B_r^{[m-1]}|` as an exact rational attained at a dyadic
/// point within `2^{-bits}` of the true maximizer.
pub fn sup_norm_rational(m: usize, r: usize, bits: usize) -> Result<Rational> {
    check_level(m)?;
    let fam = family(m)?;
    let br = fam.polynomial(r);
    if r == 0 {
        return Ok(fam.m_factorial().clone());
    }
    let width = Rational::new(1.into(), num_bigint::BigInt::from(1) << bits);
    let mut best = br.eval(&int(0)).abs().max(br.eval(&int(1)).abs());
    for x in roots_in_unit_interval(&fam.polynomial(r - 1), &width) {
        best = best.max(br.eval(&x).abs());
    }
    Ok(best)
}

/// `mu_r^{[m-1]} = max_{[0,1]} |B_r^{[m-1]}|` at `prec` bits.
pub fn sup_norm<F: Real>(m: usize, r: usize, prec: Precision) -> Result<F> {
    Ok(F::from_rational(&sup_norm_rational(m, r, prec / 2 + 8)?, prec))
}

/// `int_0^1 B_n^{[m-1]}` must vanish for `n >= 1`; exposed for the checks.
pub fn mean_value(m: usize, n: usize) -> Result<Rational> {
    let fam = family(m)?;
    Ok(fam.polynomial(n).definite_integral(&int(0), &int(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function;
    use crate::rational::rat;
    use crate::scalar::BigFloat;

    #[test]
    fn constant_function() {
        let fs = function::polynomial::<BigFloat>(&RatPoly::constant(int(1))).unwrap();
        let rep = em_unit(&fs, 2, 1, 128).unwrap();
        assert_eq!(rep.main_sum, BigFloat::one(128));
        assert!(rep.remainder.is_zero());
        let (main, rem) = em_unit_exact(&RatPoly::constant(int(1)), 2, 1).unwrap();
        assert_eq!((main, rem), (int(1), int(0)));
    }

    #[test]
    fn linear_function() {
        let (main, rem) = em_unit_exact(&RatPoly::x(), 2, 1).unwrap();
        assert_eq!(main, rat(2, 3));
        assert_eq!(rem, rat(-1, 6));
    }

    #[test]
    fn small_products() {
        assert_eq!(product_integral(1, 1, 1).unwrap(), rat(1, 12));
        assert_eq!(product_integral(1, 1, 2).unwrap(), int(0));
        assert_eq!(product_integral(2, 2, 2).unwrap(), product_integral_oracle(2, 2, 2).unwrap());
        assert_eq!(l2_norm_sq(1, 2).unwrap(), rat(1, 180));
    }

    #[test]
    fn sup_norms() {
        assert_eq!(sup_norm_rational(1, 2, 64).unwrap(), rat(1, 6));
        assert_eq!(sup_norm_rational(5, 2, 64).unwrap(), rat(1700, 21));
        assert_eq!(sup_norm_rational(1, 1, 64).unwrap(), rat(1, 2));
        assert_eq!(sup_norm_rational(3, 0, 64).unwrap(), int(6));
    }

    #[test]
    fn interior_maximum() {
        // B_3(x) = x^3 - 3x^2/2 + x/2 peaks at 1/2 - sqrt(3)/6.
        let mu: f64 = sup_norm(1, 3, 53).unwrap();
        let x = 0.5 - 3f64.sqrt() / 6.0;
        assert!((mu - (x * x * x - 1.5 * x * x + 0.5 * x)).abs() < 1e-15);
    }
}
