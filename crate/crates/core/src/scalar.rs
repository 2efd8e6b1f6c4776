//! Scalar abstraction shared by every numerical routine in the crate.

use rand::Rng;

/// Floating-point scalar the library is generic over.
///
/// Implemented for `f32` and `f64`. The shipped entry points (CLI, planners,
/// diagnostics) all instantiate `f64`; the `f32` instantiation exists for
/// memory-bound embeddings and is exercised in tests only.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + core::iter::Sum
    + Send
    + Sync
    + 'static
{
    /// Conversion from `f64`, for constants and tolerances.
    fn of(v: f64) -> Self;

    /// Widening (for `f64`: identity) conversion used when reporting.
    fn as_f64(self) -> f64;

    /// One standard normal draw. Both implementations use the ziggurat
    /// sampler from `rand_distr`, which fixes the draw sequence for a given
    /// generator state.
    fn draw_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One uniform draw from `[0, 1)`.
    fn draw_standard_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f64 {
    fn of(v: f64) -> Self {
        v
    }

    fn as_f64(self) -> f64 {
        self
    }

    fn draw_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(rand_distr::StandardNormal)
    }

    fn draw_standard_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(rand::distr::StandardUniform)
    }
}

impl Real for f32 {
    fn of(v: f64) -> Self {
        v as f32
    }

    fn as_f64(self) -> f64 {
        f64::from(self)
    }

    fn draw_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(rand_distr::StandardNormal)
    }

    fn draw_standard_uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(rand::distr::StandardUniform)
    }
}

/// `sign` with the convention `sign(0) = 0`.
pub fn sign<F: Real>(x: F) -> F {
    if x > F::zero() {
        F::one()
    } else if x < F::zero() {
        -F::one()
    } else {
        F::zero()
    }
}

/// Squared Euclidean norm.
pub fn squared_norm<F: Real>(x: &[F]) -> F {
    x.iter().map(|&v| v * v).sum()
}

/// Squared Euclidean distance between equal-length slices.
pub fn squared_distance<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance.
pub fn distance<F: Real>(a: &[F], b: &[F]) -> F {
    squared_distance(a, b).sqrt()
}

pub fn all_finite<F: Real>(x: &[F]) -> bool {
    x.iter().all(|v| v.is_finite())
}
