//! Gauss-Legendre rules generated at working precision.

use crate::error::{Error, Result};
use crate::scalar::{Precision, Real};

/// Number of nodes used per cell by the Euler-Maclaurin remainders.
pub const CELL_NODES: usize = 32;

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<F: Real> {
    nodes: Vec<F>,
    weights: Vec<F>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<F: Real>(n: usize, x: &F) -> (F, F) {
    let p = x.precision();
    let mut p0 = F::one(p);
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = F::from_i64(k as i64, p);
        let a = F::from_i64(2 * k as i64 - 1, p);
        let b = F::from_i64(k as i64 - 1, p);
        let p2 = (a * x.clone() * p1.clone() - b * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = F::from_i64(n as i64, p);
    let one = F::one(p);
    let d = nf * (x.clone() * p1.clone() - p0) / (x.clone() * x.clone() - one);
    (p1, d)
}

impl<F: Real> GaussLegendre<F> {
    /// `n`-point rule; Newton iteration from the usual cosine guesses until
    /// the correction drops below `2^{4-prec}`.
    pub fn new(n: usize, prec: Precision) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("a Gauss rule needs at least one node".into()));
        }
        let tol = F::exp2(4 - prec as i64, prec);
        let two = F::from_i64(2, prec);
        let one = F::one(prec);
        let half = n.div_ceil(2);
        let mut pos = Vec::with_capacity(half);
        for i in 1..=half {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut x = F::from_f64(guess, prec);
            let mut converged = false;
            for _ in 0..200 {
                let (pn, dpn) = legendre(n, &x);
                let dx = pn / dpn.clone();
                x = x - dx.clone();
                if dx.abs() <= tol {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Inconsistent(format!("Legendre root {i} of {n} did not converge")));
            }
            if n % 2 == 1 && i == half {
                x = F::zero(prec);
            }
            let (_, d) = legendre(n, &x);
            let w = two.clone() / ((one.clone() - x.clone() * x.clone()) * d.clone() * d);
            pos.push((x, w));
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (x, w) in pos.iter() {
            nodes.push(-x.clone());
            weights.push(w.clone());
        }
        let skip = if n % 2 == 1 { 1 } else { 0 };
        for (x, w) in pos.iter().rev().skip(skip) {
            nodes.push(x.clone());
            weights.push(w.clone());
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// Nodes mapped to `[0, 1]` with matching weights.
    pub fn unit(&self) -> Vec<(F, F)> {
        let p = self.nodes.first().map(|x| x.precision()).unwrap_or(53);
        let half = F::one(p) / F::from_i64(2, p);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| ((x.clone() + F::one(p)) * half.clone(), w.clone() * half.clone()))
            .collect()
    }

    /// `int_a^b f`, summed in ascending node order.
    pub fn integrate(&self, a: &F, b: &F, f: impl Fn(&F) -> F) -> F {
        let p = a.precision();
        let two = F::from_i64(2, p);
        let mid = (a.clone() + b.clone()) / two.clone();
        let rad = (b.clone() - a.clone()) / two;
        let mut acc = F::zero(p);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w.clone() * f(&(mid.clone() + rad.clone() * x.clone()));
        }
        acc * rad
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::BigFloat;

    #[test]
    fn weights_sum_to_two() {
        let g = GaussLegendre::<BigFloat>::new(CELL_NODES, 256).unwrap();
        let s = g.weights().iter().fold(BigFloat::zero(256), |a, w| a + w.clone());
        assert!((s - BigFloat::from_i64(2, 256)).abs() < BigFloat::exp2(-240, 256));
    }

    #[test]
    fn odd_rule_has_zero_node() {
        let g = GaussLegendre::<f64>::new(5, 53).unwrap();
        assert_eq!(g.nodes()[2], 0.0);
        assert!((g.weights()[2] - 128.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let g = GaussLegendre::<BigFloat>::new(8, 256).unwrap();
        let a = BigFloat::zero(256);
        let b = BigFloat::one(256);
        let v = g.integrate(&a, &b, |x| x.powi(15));
        let want = BigFloat::one(256) / BigFloat::from_i64(16, 256);
        assert!((v - want).abs() < BigFloat::exp2(-245, 256));
    }

    #[test]
    fn exp_on_unit_interval() {
        let p = 256;
        let g = GaussLegendre::<BigFloat>::new(CELL_NODES, p).unwrap();
        let v = g.integrate(&BigFloat::zero(p), &BigFloat::one(p), |x| x.exp());
        let want = BigFloat::one(p).exp() - BigFloat::one(p);
        assert!((v - want).abs() < BigFloat::exp2(-240, p));
    }
}
