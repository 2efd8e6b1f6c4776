//! Closed-form prox catalogue.

use crate::error::{Error, Result};
use crate::prox::{edge_prox_in_place, prox_abs_shifted, soft_threshold, ProxFunction};
use crate::scalar::{sign, Real};

/// `g ≡ 0`. Its prox is the identity.
#[derive(Debug, Clone, Copy)]
pub struct Zero;

impl<F: Real> ProxFunction<F> for Zero {
    fn eval(&self, _x: &[F]) -> F {
        F::zero()
    }

    fn prox_in_place(&self, _x: &mut [F], _gamma: F) -> Result<()> {
        Ok(())
    }

    fn accumulate_min_subgradient(&self, _x: &[F], _out: &mut [F]) {}

    fn lipschitz_bound(&self) -> Option<F> {
        Some(F::zero())
    }
}

/// `g(x) = Σ_i |x_i|`.
#[derive(Debug, Clone, Copy)]
pub struct Abs {
    dim: usize,
}

impl Abs {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    /// One-dimensional absolute value.
    pub fn scalar() -> Self {
        Self { dim: 1 }
    }
}

impl<F: Real> ProxFunction<F> for Abs {
    fn eval(&self, x: &[F]) -> F {
        debug_assert_eq!(x.len(), self.dim);
        x.iter().map(|v| v.abs()).sum()
    }

    fn prox_in_place(&self, x: &mut [F], gamma: F) -> Result<()> {
        for v in x.iter_mut() {
            *v = soft_threshold(*v, gamma);
        }
        Ok(())
    }

    fn accumulate_min_subgradient(&self, x: &[F], out: &mut [F]) {
        for (o, &v) in out.iter_mut().zip(x) {
            *o = *o + sign(v);
        }
    }

    fn lipschitz_bound(&self) -> Option<F> {
        Some(F::of(self.dim as f64).sqrt())
    }
}

/// `g(x) = Σ_i (|x_i| + x_i s_i)` for a fixed shift vector `s`.
///
/// With `s` drawn afresh each iteration this realizes the stochastic term
/// of the Laplace toy potential `E_s(|x| + x s)`.
#[derive(Debug, Clone)]
pub struct ShiftedAbs<F> {
    shift: Vec<F>,
}

impl<F: Real> ShiftedAbs<F> {
    pub fn new(shift: Vec<F>) -> Self {
        Self { shift }
    }

    pub fn scalar(s: F) -> Self {
        Self { shift: vec![s] }
    }
}

impl<F: Real> ProxFunction<F> for ShiftedAbs<F> {
    fn eval(&self, x: &[F]) -> F {
        debug_assert_eq!(x.len(), self.shift.len());
        x.iter()
            .zip(&self.shift)
            .map(|(&v, &s)| v.abs() + v * s)
            .sum()
    }

    fn prox_in_place(&self, x: &mut [F], gamma: F) -> Result<()> {
        for (v, &s) in x.iter_mut().zip(&self.shift) {
            *v = prox_abs_shifted(*v, gamma, s);
        }
        Ok(())
    }

    fn accumulate_min_subgradient(&self, x: &[F], out: &mut [F]) {
        // At 0 the subdifferential is [s − 1, s + 1]; its least-norm element
        // is s shrunk by 1.
        for ((o, &v), &s) in out.iter_mut().zip(x).zip(&self.shift) {
            let d = if v == F::zero() {
                soft_threshold(s, F::one())
            } else {
                sign(v) + s
            };
            *o = *o + d;
        }
    }

    fn lipschitz_bound(&self) -> Option<F> {
        let sq: F = self
            .shift
            .iter()
            .map(|&s| (F::one() + s.abs()) * (F::one() + s.abs()))
            .sum();
        Some(sq.sqrt())
    }
}

/// `g(x) = ‖x − c‖² / (2σ²)`.
#[derive(Debug, Clone)]
pub struct Quadratic<F> {
    center: Vec<F>,
    sigma2: F,
}

impl<F: Real> Quadratic<F> {
    pub fn new(center: Vec<F>, sigma2: F) -> Result<Self> {
        if !(sigma2 > F::zero()) {
            return Err(Error::InvalidParameter {
                name: "sigma2",
                reason: format!("must be positive, got {sigma2}"),
            });
        }
        Ok(Self { center, sigma2 })
    }
}

impl<F: Real> ProxFunction<F> for Quadratic<F> {
    fn eval(&self, x: &[F]) -> F {
        debug_assert_eq!(x.len(), self.center.len());
        let sq: F = x
            .iter()
            .zip(&self.center)
            .map(|(&v, &c)| (v - c) * (v - c))
            .sum();
        sq / (F::of(2.0) * self.sigma2)
    }

    fn prox_in_place(&self, x: &mut [F], gamma: F) -> Result<()> {
        let r = gamma / self.sigma2;
        let denom = F::one() + r;
        for (v, &c) in x.iter_mut().zip(&self.center) {
            *v = (*v + r * c) / denom;
        }
        Ok(())
    }

    fn accumulate_min_subgradient(&self, x: &[F], out: &mut [F]) {
        for ((o, &v), &c) in out.iter_mut().zip(x).zip(&self.center) {
            *o = *o + (v - c) / self.sigma2;
        }
    }

    fn lipschitz_bound(&self) -> Option<F> {
        None
    }
}

/// `g(x) = weight · |x(v) − x(w)|`, the graph trend-filtering edge term.
#[derive(Debug, Clone, Copy)]
pub struct EdgeDiff<F> {
    v: usize,
    w: usize,
    weight: F,
}

impl<F: Real> EdgeDiff<F> {
    pub fn new(v: usize, w: usize, weight: F) -> Result<Self> {
        if v == w {
            return Err(Error::DegenerateEdge(v));
        }
        if !(weight >= F::zero()) {
            return Err(Error::InvalidParameter {
                name: "weight",
                reason: format!("must be nonnegative, got {weight}"),
            });
        }
        Ok(Self { v, w, weight })
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.v, self.w)
    }
}

impl<F: Real> ProxFunction<F> for EdgeDiff<F> {
    fn eval(&self, x: &[F]) -> F {
        self.weight * (x[self.v] - x[self.w]).abs()
    }

    fn prox_in_place(&self, x: &mut [F], gamma: F) -> Result<()> {
        edge_prox_in_place(x, self.v, self.w, gamma * self.weight)
    }

    fn accumulate_min_subgradient(&self, x: &[F], out: &mut [F]) {
        let s = sign(x[self.v] - x[self.w]) * self.weight;
        out[self.v] = out[self.v] + s;
        out[self.w] = out[self.w] - s;
    }

    fn lipschitz_bound(&self) -> Option<F> {
        Some(F::of(2.0).sqrt() * self.weight)
    }
}
