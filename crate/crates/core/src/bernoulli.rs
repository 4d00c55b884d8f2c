//! Generalized Bernoulli numbers and polynomials of level `m`.
//!
//! `B_n^{[m-1]}(x)` is the Appell sequence generated by
//! `z^m e^{xz} / (e^z - sum_{l<m} z^l / l!)`; level one is the classical
//! family. Numbers are obtained from the triangular system
//! `B_n = -m! sum_{k=1}^{n} C(n,k) k!/(m+k)! B_{n-k}`, and every polynomial
//! follows from `B_n(x) = sum_k C(n,k) B_k x^{n-k}`.
//!
//! A [`GbFamily`] caches the numbers, the boundary values `B_k(1)` and the
//! polynomials of one level and grows on demand; [`family`] hands out one
//! shared family per level.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{check_level, Error, Result};
use crate::poly::RatPoly;
use crate::rational::{big, binomial_q, factorial, factorial_q, int, Rational};

#[derive(Default)]
struct Tables {
    numbers: Vec<Rational>,
    boundary: Vec<Rational>,
    polys: Vec<RatPoly>,
}

/// Cached numbers, boundary values and polynomials of one level `m`.
pub struct GbFamily {
    m: usize,
    m_fact: Rational,
    tables: RwLock<Tables>,
}

impl std::fmt::Debug for GbFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.tables.read().map(|t| t.numbers.len()).unwrap_or(0);
        f.debug_struct("GbFamily").field("m", &self.m).field("cached", &n).finish()
    }
}

impl GbFamily {
    pub fn new(m: usize) -> Result<Self> {
        check_level(m)?;
        Ok(GbFamily { m, m_fact: factorial_q(m), tables: RwLock::new(Tables::default()) })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `m!`, which is `B_0^{[m-1]}` and the leading coefficient of every
    /// polynomial of the family.
    pub fn m_factorial(&self) -> &Rational {
        &self.m_fact
    }

    fn ensure(&self, n: usize) {
        if self.tables.read().expect("family lock poisoned").numbers.len() > n {
            return;
        }
        let mut t = self.tables.write().expect("family lock poisoned");
        let m = self.m;
        while t.numbers.len() <= n {
            let k = t.numbers.len();
            let b = if k == 0 {
                self.m_fact.clone()
            } else {
                // C(k,i) i!/(m+i)! = k! / ((k-i)! (m+i)!)
                let kf = factorial(k);
                let mut acc = Rational::zero();
                for i in 1..=k {
                    let w = Rational::new(kf.clone(), factorial(k - i) * factorial(m + i));
                    acc += w * &t.numbers[k - i];
                }
                -(&self.m_fact * acc)
            };
            t.numbers.push(b);
            let coeffs: Vec<Rational> =
                (0..=k).map(|j| binomial_q(k, j) * &t.numbers[k - j]).collect();
            let boundary = coeffs.iter().fold(Rational::zero(), |a, c| a + c);
            t.boundary.push(boundary);
            t.polys.push(RatPoly::new(coeffs));
        }
    }

    /// `B_k^{[m-1]}`.
    pub fn number(&self, k: usize) -> Rational {
        self.ensure(k);
        self.tables.read().expect("family lock poisoned").numbers[k].clone()
    }

    /// `B_0^{[m-1]} .. B_nmax^{[m-1]}`.
    pub fn numbers(&self, nmax: usize) -> Vec<Rational> {
        self.ensure(nmax);
        self.tables.read().expect("family lock poisoned").numbers[..=nmax].to_vec()
    }

    /// `B_k^{[m-1]}(1)`.
    pub fn boundary(&self, k: usize) -> Rational {
        self.ensure(k);
        self.tables.read().expect("family lock poisoned").boundary[k].clone()
    }

    /// `B_k^{[m-1]}(1) - B_k^{[m-1]}`.
    pub fn jump(&self, k: usize) -> Rational {
        self.boundary(k) - self.number(k)
    }

    /// `B_n^{[m-1]}(x)`.
    pub fn polynomial(&self, n: usize) -> RatPoly {
        self.ensure(n);
        self.tables.read().expect("family lock poisoned").polys[n].clone()
    }
}

fn registry() -> &'static Mutex<HashMap<usize, Arc<GbFamily>>> {
    static REG: OnceLock<Mutex<HashMap<usize, Arc<GbFamily>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared family of level `m`.
pub fn family(m: usize) -> Result<Arc<GbFamily>> {
    check_level(m)?;
    let mut reg = registry().lock().expect("family registry poisoned");
    if let Some(f) = reg.get(&m) {
        return Ok(f.clone());
    }
    let f = Arc::new(GbFamily::new(m)?);
    reg.insert(m, f.clone());
    Ok(f)
}

/// `B_0^{[m-1]} .. B_nmax^{[m-1]}`.
pub fn gb_numbers(m: usize, nmax: usize) -> Result<Vec<Rational>> {
    Ok(family(m)?.numbers(nmax))
}

/// `B_n^{[m-1]}(x)`; degree `n`, leading coefficient `m!`.
pub fn gb_polynomial(m: usize, n: usize) -> Result<RatPoly> {
    Ok(family(m)?.polynomial(n))
}

/// Classical Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rational {
    family(1).expect("level one").number(n)
}

/// Classical Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_polynomial(n: usize) -> RatPoly {
    family(1).expect("level one").polynomial(n)
}

/// Coefficients `c_0..c_n` with `p = sum_k c_k B_k^{[m-1]}`.
pub fn expand_in_gb_basis(p: &RatPoly, m: usize) -> Result<Vec<Rational>> {
    check_level(m)?;
    let Some(deg) = p.degree() else {
        return Ok(Vec::new());
    };
    let mut c = vec![Rational::zero(); deg + 1];
    for (n, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // x^n = sum_k C(n,k) k!/(m+k)! B_{n-k}(x)
        let nf = factorial(n);
        for k in 0..=n {
            let w = Rational::new(nf.clone(), factorial(n - k) * factorial(m + k));
            c[n - k] += a * w;
        }
    }
    Ok(c)
}

/// Recombines basis coefficients into a polynomial.
pub fn from_gb_basis(c: &[Rational], m: usize) -> Result<RatPoly> {
    let fam = family(m)?;
    Ok(c.iter()
        .enumerate()
        .fold(RatPoly::zero(), |acc, (k, ck)| &acc + &fam.polynomial(k).scale(ck)))
}

fn require_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// `B_n(x) - [(x - 1/(m+1)) B_{n-1}(x)
///   - 1/(n (m-1)!) sum_{k=0}^{n-2} C(n,k) B_{n-k} B_k(x)]`; identically zero.
pub fn recurrence_residual(m: usize, n: usize) -> Result<RatPoly> {
    require_positive(n, "n")?;
    let fam = family(m)?;
    let shift = RatPoly::new(vec![-Rational::new(1.into(), ((m + 1) as i64).into()), Rational::one()]);
    let mut rhs = &shift * &fam.polynomial(n - 1);
    let scale = Rational::one() / (int(n as i64) * factorial_q(m - 1));
    let mut sum = RatPoly::zero();
    for k in 0..n.saturating_sub(1) {
        let c = binomial_q(n, k) * fam.number(n - k);
        sum = &sum + &fam.polynomial(k).scale(&c);
    }
    rhs = &rhs - &sum.scale(&scale);
    Ok(&fam.polynomial(n) - &rhs)
}

/// `sum_{k=2}^{n} B_k/k! y^{(k)} + (m-1)! (1/(m+1) - x) y' + n (m-1)! y`
/// with `y = B_n^{[m-1]}(x)`; identically zero.
pub fn ode_residual(m: usize, n: usize) -> Result<RatPoly> {
    require_positive(n, "n")?;
    let fam = family(m)?;
    let y = fam.polynomial(n);
    let mut acc = RatPoly::zero();
    let mut dk = y.derivative();
    let dy = dk.clone();
    for k in 2..=n {
        dk = dk.derivative();
        let c = fam.number(k) / factorial_q(k);
        acc = &acc + &dk.scale(&c);
    }
    let mf = factorial_q(m - 1);
    let lin = RatPoly::new(vec![Rational::new(1.into(), ((m + 1) as i64).into()), -Rational::one()]);
    acc = &acc + &(&lin * &dy).scale(&mf);
    acc = &acc + &y.scale(&(int(n as i64) * mf));
    Ok(acc)
}

/// Closed forms of the first four polynomials of level `m`: `B_0 = m!`, `B_1 = m!(x - 1/(m+1))`,
/// `B_2 = m!(x^2 - 2x/(m+1) + 2/((m+1)^2 (m+2)))`,
/// `B_3 = m!(x^3 - 3x^2/(m+1) + 6x/((m+1)^2 (m+2)) + 6(m-1)/((m+1)^3 (m+2)(m+3)))`.
pub fn low_order_closed_form(m: usize, n: usize) -> Result<RatPoly> {
    check_level(m)?;
    let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let m1 = (m + 1) as i64;
    let m2 = (m + 2) as i64;
    let m3 = (m + 3) as i64;
    let c = match n {
        0 => vec![int(1)],
        1 => vec![-q(1, m1), int(1)],
        2 => vec![q(2, m1 * m1 * m2), -q(2, m1), int(1)],
        3 => vec![
            q(6 * (m as i64 - 1), m1 * m1 * m1 * m2 * m3),
            q(6, m1 * m1 * m2),
            -q(3, m1),
            int(1),
        ],
        _ => return Err(Error::InvalidArgument(format!("closed form only for n <= 3, got {n}"))),
    };
    Ok(RatPoly::new(c).scale(&big(factorial(m))))
}
