//! Functions with derivatives, fed to the quadrature and series estimators.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive};

use crate::bernoulli::family;
use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::rational::{big, factorial_q, format_rational, int, rising, Rational};
use crate::scalar::Real;

type Deriv<F> = Arc<dyn Fn(usize, &F) -> F + Send + Sync>;
type Unary<F> = Arc<dyn Fn(&F) -> F + Send + Sync>;
type Tail<F> = Arc<dyn Fn(usize, &F) -> Option<F> + Send + Sync>;

/// Order used when a family has closed-form derivatives of every order.
pub const UNBOUNDED_ORDER: usize = 1 << 12;

/// A function `f` with `f^{(k)}` for `k <= r_max` and optional tail data.
#[derive(Clone)]
pub struct FunctionStack<F: Real> {
    label: String,
    r_max: usize,
    deriv: Deriv<F>,
    antiderivative: Option<Unary<F>>,
    tail_integral: Option<Unary<F>>,
    abs_deriv_tail: Option<Tail<F>>,
    limit: Option<F>,
    integral_converges: Option<bool>,
}

impl<F: Real> fmt::Debug for FunctionStack<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionStack")
            .field("label", &self.label)
            .field("r_max", &self.r_max)
            .field("antiderivative", &self.antiderivative.is_some())
            .field("tail_integral", &self.tail_integral.is_some())
            .field("abs_deriv_tail", &self.abs_deriv_tail.is_some())
            .field("limit", &self.limit)
            .finish()
    }
}

/// Builder for [`FunctionStack`]; [`build`](Self::build) runs the
/// derivative consistency check.
pub struct FunctionStackBuilder<F: Real> {
    inner: FunctionStack<F>,
    check_points: Vec<F>,
}

impl<F: Real> FunctionStackBuilder<F> {
    /// Closed form antiderivative `F(x)`.
    pub fn antiderivative(mut self, g: impl Fn(&F) -> F + Send + Sync + 'static) -> Self {
        self.inner.antiderivative = Some(Arc::new(g));
        self
    }

    /// `int_p^inf f`.
    pub fn tail_integral(mut self, g: impl Fn(&F) -> F + Send + Sync + 'static) -> Self {
        self.inner.tail_integral = Some(Arc::new(g));
        self.inner.integral_converges = Some(true);
        self
    }

    /// Upper bound of `int_p^inf |f^{(k)}|`, or `None` where unknown.
    pub fn abs_deriv_tail(mut self, g: impl Fn(usize, &F) -> Option<F> + Send + Sync + 'static) -> Self {
        self.inner.abs_deriv_tail = Some(Arc::new(g));
        self
    }

    /// `lim_{x -> inf} f(x)`.
    pub fn limit(mut self, l: F) -> Self {
        self.inner.limit = Some(l);
        self
    }

    /// Asserts convergence or divergence of `int_1^inf f`.
    pub fn integral_converges(mut self, yes: bool) -> Self {
        self.inner.integral_converges = Some(yes);
        self
    }

    /// Points for the finite-difference check (three by default).
    pub fn check_at(mut self, points: Vec<F>) -> Self {
        self.check_points = points;
        self
    }

    pub fn build(self) -> Result<FunctionStack<F>> {
        let fs = self.inner;
        for x in &self.check_points {
            fs.check_derivatives_at(x)?;
        }
        Ok(fs)
    }
}

/// Highest order compared against finite differences.
const CHECKED_ORDERS: usize = 8;

impl<F: Real> FunctionStack<F> {
    /// Starts a builder; `deriv(k, x)` returns `f^{(k)}(x)`.
    pub fn builder(
        label: impl Into<String>,
        r_max: usize,
        deriv: impl Fn(usize, &F) -> F + Send + Sync + 'static,
    ) -> FunctionStackBuilder<F> {
        FunctionStackBuilder {
            inner: FunctionStack {
                label: label.into(),
                r_max,
                deriv: Arc::new(deriv),
                antiderivative: None,
                tail_integral: None,
                abs_deriv_tail: None,
                limit: None,
                integral_converges: None,
            },
            check_points: [5, 6, 8].iter().map(|&k| F::from_i64(k, 53) / F::from_i64(4, 53)).collect(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn f(&self, x: &F) -> F {
        (self.deriv)(0, x)
    }

    /// `f^{(k)}(x)`.
    pub fn deriv(&self, k: usize, x: &F) -> Result<F> {
        if k > self.r_max {
            return Err(Error::DerivativeOrder { requested: k, available: self.r_max });
        }
        Ok((self.deriv)(k, x))
    }

    pub fn require_order(&self, r: usize) -> Result<()> {
        if r > self.r_max {
            Err(Error::DerivativeOrder { requested: r, available: self.r_max })
        } else {
            Ok(())
        }
    }

    /// `int_a^b f` from the antiderivative or from tail integrals.
    pub fn exact_integral(&self, a: &F, b: &F) -> Option<F> {
        if let Some(g) = &self.antiderivative {
            return Some(g(b) - g(a));
        }
        self.tail_integral.as_ref().map(|t| t(a) - t(b))
    }

    pub fn has_antiderivative(&self) -> bool {
        self.antiderivative.is_some() || self.tail_integral.is_some()
    }

    pub fn tail_integral(&self, p: &F) -> Option<F> {
        self.tail_integral.as_ref().map(|t| t(p))
    }

    /// Bound of `int_p^inf |f^{(k)}|`.
    pub fn abs_deriv_tail(&self, k: usize, p: &F) -> Option<F> {
        self.abs_deriv_tail.as_ref().and_then(|t| t(k, p))
    }

    pub fn limit(&self) -> Option<&F> {
        self.limit.as_ref()
    }

    pub fn integral_converges(&self) -> Option<bool> {
        self.integral_converges
    }

    fn check_derivatives_at(&self, x0: &F) -> Result<()> {
        let p = x0.precision().max(53);
        let x = x0.clone();
        let h = F::exp2(-14, p);
        let two = F::from_i64(2, p);
        let tol = F::from_f64(1e-6, p);
        let floor = F::exp2(-40, p);
        for k in 1..=self.r_max.min(CHECKED_ORDERS) {
            let up = (self.deriv)(k - 1, &(x.clone() + h.clone()));
            let down = (self.deriv)(k - 1, &(x.clone() - h.clone()));
            let fd = (up - down) / (two.clone() * h.clone());
            let d = (self.deriv)(k, &x);
            let scale = d.abs().max(fd.abs()).max(floor.clone());
            if !d.is_finite() || (fd - d).abs() > tol.clone() * scale {
                return Err(Error::InconsistentDerivatives { order: k, at: x.to_sci(8) });
            }
        }
        Ok(())
    }
}

/// Description of `x^{-s}` with closed-form derivatives of every order.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerFunction {
    pub s: Rational,
}

impl PowerFunction {
    pub fn new(s: Rational) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::InvalidArgument(format!("exponent must be positive, got {}", format_rational(&s))));
        }
        Ok(PowerFunction { s })
    }

    /// `f^{(k)}(x) = (-1)^k s (s+1) ... (s+k-1) x^{-s-k}` as the
    /// coefficient `(-1)^k (s)_k` and exponent `-s-k`.
    pub fn derivative_coefficient(&self, k: usize) -> Rational {
        let mut c = Rational::one();
        for i in 0..k {
            c *= &self.s + int(i as i64);
        }
        if k % 2 == 1 {
            -c
        } else {
            c
        }
    }

    fn integer_exponent(&self) -> Option<i64> {
        if self.s.is_integer() {
            self.s.to_integer().to_i64()
        } else {
            None
        }
    }

    /// `x^{-e}` for `e = s + k`.
    fn power<F: Real>(&self, k: usize, x: &F) -> F {
        let p = x.precision();
        match self.integer_exponent() {
            Some(s) => x.powi(-(s + k as i64)),
            None => {
                let e = F::from_rational(&(-(&self.s + int(k as i64))), p);
                x.powf(&e)
            }
        }
    }

    pub fn stack<F: Real>(&self) -> Result<FunctionStack<F>> {
        let d = self.clone();
        let label = format!("x^(-{})", format_rational(&self.s));
        let mut b = FunctionStack::builder(label, UNBOUNDED_ORDER, move |k, x: &F| {
            F::from_rational(&d.derivative_coefficient(k), x.precision()) * d.power(k, x)
        });
        let one = Rational::one();
        if self.s > one {
            let t = self.clone();
            b = b.tail_integral(move |p: &F| {
                let sm1 = &t.s - Rational::one();
                let e = F::from_rational(&(-sm1.clone()), p.precision());
                let v = match t.integer_exponent() {
                    Some(s) => p.powi(1 - s),
                    None => p.powf(&e),
                };
                v / F::from_rational(&sm1, p.precision())
            });
        } else {
            b = b.integral_converges(false);
            if self.s == one {
                b = b.antiderivative(|x: &F| x.ln());
            } else {
                let t = self.clone();
                b = b.antiderivative(move |x: &F| {
                    let om = Rational::one() - &t.s;
                    x.powf(&F::from_rational(&om, x.precision())) / F::from_rational(&om, x.precision())
                });
            }
        }
        let tail = self.clone();
        b = b.abs_deriv_tail(move |k, p: &F| {
            if k == 0 {
                return None;
            }
            // f^{(k-1)} is monotone and vanishes at infinity.
            let c = tail.derivative_coefficient(k - 1);
            Some(F::from_rational(&c.abs(), p.precision()) * tail.power(k - 1, p))
        });
        b.limit(F::zero(53)).build()
    }

    /// Exact coefficients `c_k` with `sigma(q) = sum_{k=1}^{r} c_k q^{-s-k+1}`.
    pub fn sigma_coefficients(&self, m: usize, r: usize) -> Result<Vec<Rational>> {
        let fam = family(m)?;
        Ok((1..=r)
            .map(|k| self.raw_coefficient(k) * fam.boundary(k) / (fam.m_factorial() * factorial_q(k)))
            .collect())
    }

    /// Exact coefficients of `sigma~(q)`, including the leading `f(q)`.
    pub fn sigma_tilde_coefficients(&self, m: usize, r: usize) -> Result<Vec<Rational>> {
        let fam = family(m)?;
        let mut c: Vec<Rational> = (1..=r)
            .map(|k| self.raw_coefficient(k) * fam.number(k) / (fam.m_factorial() * factorial_q(k)))
            .collect();
        if let Some(first) = c.first_mut() {
            *first += Rational::one();
        }
        Ok(c)
    }

    /// `(s)_{k-1}`, the sign-free part of `(-1)^{k+1} f^{(k-1)}`.
    fn raw_coefficient(&self, k: usize) -> Rational {
        match self.integer_exponent() {
            Some(s) => big(rising(s, k - 1)),
            None => self.derivative_coefficient(k - 1).abs(),
        }
    }
}

/// `x^{-s}` for an integer `s >= 1`.
pub fn power<F: Real>(s: i64) -> Result<FunctionStack<F>> {
    PowerFunction::new(int(s))?.stack()
}

/// `1/x`.
pub fn harmonic<F: Real>() -> Result<FunctionStack<F>> {
    power(1)
}

/// `e^x`.
pub fn exp<F: Real>() -> Result<FunctionStack<F>> {
    FunctionStack::builder("exp(x)", UNBOUNDED_ORDER, |_, x: &F| x.exp())
        .antiderivative(|x: &F| x.exp())
        .build()
}

/// `e^{-x}`.
pub fn exp_neg<F: Real>() -> Result<FunctionStack<F>> {
    FunctionStack::builder("exp(-x)", UNBOUNDED_ORDER, |k, x: &F| {
        let v = (-x.clone()).exp();
        if k % 2 == 1 {
            -v
        } else {
            v
        }
    })
    .antiderivative(|x: &F| -(-x.clone()).exp())
    .tail_integral(|p: &F| (-p.clone()).exp())
    .abs_deriv_tail(|_, p: &F| Some((-p.clone()).exp()))
    .limit(F::zero(53))
    .build()
}

/// A polynomial with exact coefficients.
pub fn polynomial<F: Real>(p: &RatPoly) -> Result<FunctionStack<F>> {
    let deg = p.degree().unwrap_or(0);
    let derivs: Vec<RatPoly> = (0..=deg + 1).map(|k| p.nth_derivative(k)).collect();
    let anti = p.antiderivative();
    FunctionStack::builder(format!("{p}"), UNBOUNDED_ORDER, move |k, x: &F| match derivs.get(k) {
        Some(d) => d.eval_real(x),
        None => F::zero(x.precision()),
    })
    .antiderivative(move |x: &F| anti.eval_real(x))
    .build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::scalar::BigFloat;

    #[test]
    fn power_derivatives() {
        let fs = power::<f64>(3).unwrap();
        assert!((fs.deriv(2, &2.0).unwrap() - 12.0 / 32.0).abs() < 1e-15);
        assert!((fs.tail_integral(&10.0).unwrap() - 0.005).abs() < 1e-17);
        assert!((fs.abs_deriv_tail(2, &10.0).unwrap() - 3e-4).abs() < 1e-18);
    }

    #[test]
    fn fractional_power() {
        let f = PowerFunction::new(rat(3, 2)).unwrap();
        let fs: FunctionStack<BigFloat> = f.stack().unwrap();
        let four = BigFloat::from_i64(4, 128);
        assert!((fs.f(&four) - BigFloat::from_rational(&rat(1, 8), 128)).abs() < BigFloat::exp2(-120, 128));
    }

    #[test]
    fn inconsistent_derivatives_are_rejected() {
        let r = FunctionStack::<f64>::builder("bad", 2, |k, x: &f64| if k == 1 { 2.0 * x } else { x.sin() }).build();
        assert!(matches!(r, Err(Error::InconsistentDerivatives { order: 1, .. })));
    }

    #[test]
    fn order_is_checked() {
        let fs = FunctionStack::<f64>::builder("sin", 1, |k, x: &f64| if k == 0 { x.sin() } else { x.cos() })
            .build()
            .unwrap();
        assert_eq!(fs.deriv(2, &1.0), Err(Error::DerivativeOrder { requested: 2, available: 1 }));
    }

    #[test]
    fn sigma_coefficient_lists() {
        let f = PowerFunction::new(int(5)).unwrap();
        let want = [rat(2, 3), rat(35, 36), rat(8, 9), rat(77, 216), rat(-26, 81), rat(-151, 270)];
        assert_eq!(f.sigma_coefficients(2, 6).unwrap(), want);
        let want = [rat(2, 3), rat(5, 36), rat(1, 18), rat(-7, 216), rat(-5, 81), rat(-1, 270)];
        assert_eq!(f.sigma_tilde_coefficients(2, 6).unwrap(), want);
        let f = PowerFunction::new(int(3)).unwrap();
        assert_eq!(f.sigma_coefficients(5, 2).unwrap(), [rat(5, 6), rat(85, 84)]);
        assert_eq!(f.sigma_tilde_coefficients(5, 2).unwrap(), [rat(5, 6), rat(1, 84)]);
    }
}
