//! Dense univariate polynomials with ascending-degree coefficients.
//!
//! [`Poly`] is generic over any exact or floating coefficient field; the
//! crate mostly works with [`RatPoly`], whose arithmetic and evaluation at
//! rational points are exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num};

use crate::rational::{format_rational, Rational};
use crate::scalar::{Precision, Real};

/// Coefficient field of a [`Poly`].
pub trait Coefficient: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive {}

impl<T> Coefficient for T where T: Clone + fmt::Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive {}

/// Polynomial `c[0] + c[1] x + ... + c[d] x^d` with no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T: Coefficient> {
    coeffs: Vec<T>,
}

pub type RatPoly = Poly<Rational>;

impl<T: Coefficient> Default for Poly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c x^n`.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut v = vec![T::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// `x`.
    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^j`, zero beyond the degree.
    pub fn coeff(&self, j: usize) -> T {
        self.coeffs.get(j).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, a)| a.clone() * from_usize::<T>(j))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(T::zero());
        for (j, a) in self.coeffs.iter().enumerate() {
            v.push(a.clone() / from_usize::<T>(j + 1));
        }
        Self::new(v)
    }

    /// `k`-th derivative.
    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn definite_integral(&self, a: &T, b: &T) -> T {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![T::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let c = r[i + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * dj.clone();
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Same polynomial scaled to leading coefficient one.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

fn from_usize<T: Coefficient>(j: usize) -> T {
    T::from_usize(j).expect("integer fits the coefficient field")
}

impl RatPoly {
    /// Evaluation at a floating point, with coefficients rounded to the
    /// precision of `x`.
    pub fn eval_real<F: Real>(&self, x: &F) -> F {
        let p = x.precision();
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(p), |acc, c| acc * x.clone() + F::from_rational(c, p))
    }

    /// Coefficients rounded to `prec` bits.
    pub fn to_real<F: Real>(&self, prec: Precision) -> Vec<F> {
        self.coeffs.iter().map(|c| F::from_rational(c, prec)).collect()
    }

    /// Coefficients as `p/q` strings.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

/// Horner evaluation of pre-rounded coefficients.
pub fn horner<F: Real>(coeffs: &[F], x: &F) -> F {
    let p = x.precision();
    coeffs.iter().rev().fold(F::zero(p), |acc, c| acc * x.clone() + c.clone())
}

impl<T: Coefficient> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl<T: Coefficient> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl<T: Coefficient> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<T: Coefficient> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|a| -a.clone()).collect())
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl<T: Coefficient> $trait for Poly<T> {
            type Output = Poly<T>;
            fn $method(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let neg = num_traits::Signed::is_negative(c);
            let mag = num_traits::Signed::abs(c);
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = num_traits::One::is_one(&mag);
            match j {
                0 => f.write_str(&format_rational(&mag))?,
                _ => {
                    if !unit {
                        write!(f, "{}*", format_rational(&mag))?;
                    }
                    if j == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{j}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
