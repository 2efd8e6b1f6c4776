//! Langevin samplers for composite potentials.
//!
//! The composite potential is `U = F + Σᵢ E_ξ Gᵢ(·, ξ)` where only an
//! unbiased gradient of the smooth part `F` and the realized prox terms
//! `gᵢ(·, ξ)` are available. One iteration of the main sampler
//! ([`spla_step`]) is
//!
//! ```text
//! z   = x − γ ∇f(x, ξ)
//! y₀  = z + √(2γ) W
//! yᵢ  = prox_{γ gᵢ(·, ξ)}(yᵢ₋₁)      i = 1, …, n
//! x'  = yₙ
//! ```
//!
//! with one fresh ξ per step shared by the gradient and every prox term,
//! drawn *before* the Gaussian `W`. That draw order is part of the
//! determinism contract: a fixed seed reproduces trajectories bit for bit.
//!
//! Baselines: [`ssla_step`] replaces the prox pass by subgradients all
//! evaluated at the current iterate, [`proxla_step`] applies one exact full
//! prox instead of the sequential pass, and [`la_step`] is the unadjusted
//! Langevin step with no nonsmooth handling at all.

mod averaging;
mod plan;

pub use averaging::{geometric_index, geometric_index_weight, uniform_index};
pub use plan::{
    compute_c, plan_convex, plan_strongly_convex, ChainSpec, Regime, StepPlan, TargetMetric,
};

use rand::SeedableRng;

use crate::error::{Error, Result, Stage};
use crate::prox::ProxChain;
use crate::scalar::{all_finite, Real};

/// Generator driving chain trajectories. Fixed concrete type: the
/// determinism contract promises bit-identical trajectories for a seed, so
/// the generator cannot be a swappable parameter.
pub type SamplerRng = rand_chacha::ChaCha8Rng;

/// Resumable generator state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngSnapshot {
    pub seed: [u8; 32],
    pub stream: u64,
    pub word_pos: u128,
}

/// Constants of the smooth part: gradient Lipschitz constant `L`, strong
/// convexity modulus `α` (zero in the merely convex case) and gradient noise
/// level `σ_F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothConstants<F> {
    pub lipschitz: F,
    pub strong_convexity: F,
    pub grad_noise: F,
}

impl<F: Real> SmoothConstants<F> {
    pub fn new(lipschitz: F, strong_convexity: F, grad_noise: F) -> Result<Self> {
        if !(strong_convexity >= F::zero()) {
            return Err(Error::InvalidParameter {
                name: "strong_convexity",
                reason: format!("must be nonnegative, got {strong_convexity}"),
            });
        }
        if !(lipschitz >= strong_convexity) {
            return Err(Error::InvalidParameter {
                name: "lipschitz",
                reason: format!(
                    "must be at least the strong convexity modulus \
                     ({lipschitz} < {strong_convexity})"
                ),
            });
        }
        if !(grad_noise >= F::zero()) {
            return Err(Error::InvalidParameter {
                name: "grad_noise",
                reason: format!("must be nonnegative, got {grad_noise}"),
            });
        }
        Ok(Self {
            lipschitz,
            strong_convexity,
            grad_noise,
        })
    }
}

type GradFn<F, Xi> = dyn Fn(&[F], &Xi, &mut [F]) + Send + Sync;
type TermsFn<F, Xi> = dyn Fn(&Xi) -> ProxChain<F> + Send + Sync;
type NoiseFn<Xi> = dyn Fn(&mut SamplerRng) -> Xi + Send + Sync;
type ValueFn<F> = dyn Fn(&[F]) -> F + Send + Sync;

/// Full prox operator `(y, γ) ↦ prox_{γ G}(y)` of the summed nonsmooth part,
/// needed by the exact-prox baseline.
pub type FullProx<F> = dyn Fn(&[F], F) -> Result<Vec<F>> + Send + Sync;

/// A composite potential `U = F + Σᵢ E_ξ Gᵢ(·, ξ)` described by callbacks:
/// an unbiased gradient of `F`, the realized prox chain for a noise draw,
/// and the noise sampler itself. An optional exact evaluation of `U` powers
/// diagnostics.
pub struct CompositePotential<F: Real, Xi> {
    dim: usize,
    constants: SmoothConstants<F>,
    smooth_grad: Box<GradFn<F, Xi>>,
    prox_terms: Box<TermsFn<F, Xi>>,
    noise_sampler: Box<NoiseFn<Xi>>,
    full_value: Option<Box<ValueFn<F>>>,
}

impl<F: Real, Xi> CompositePotential<F, Xi> {
    pub fn new(
        dim: usize,
        constants: SmoothConstants<F>,
        smooth_grad: impl Fn(&[F], &Xi, &mut [F]) + Send + Sync + 'static,
        prox_terms: impl Fn(&Xi) -> ProxChain<F> + Send + Sync + 'static,
        noise_sampler: impl Fn(&mut SamplerRng) -> Xi + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            constants,
            smooth_grad: Box::new(smooth_grad),
            prox_terms: Box::new(prox_terms),
            noise_sampler: Box::new(noise_sampler),
            full_value: None,
        }
    }

    /// Attaches an exact potential evaluation `x ↦ U(x)`.
    pub fn with_full_value(mut self, f: impl Fn(&[F]) -> F + Send + Sync + 'static) -> Self {
        self.full_value = Some(Box::new(f));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> SmoothConstants<F> {
        self.constants
    }

    pub fn draw_noise(&self, rng: &mut SamplerRng) -> Xi {
        (self.noise_sampler)(rng)
    }

    pub fn grad_into(&self, x: &[F], xi: &Xi, out: &mut [F]) {
        (self.smooth_grad)(x, xi, out);
    }

    pub fn prox_chain(&self, xi: &Xi) -> ProxChain<F> {
        (self.prox_terms)(xi)
    }

    pub fn full_value(&self, x: &[F]) -> Option<F> {
        self.full_value.as_ref().map(|f| f(x))
    }
}

/// Position, iteration counter and generator of one chain.
#[derive(Debug, Clone)]
pub struct ChainState<F: Real> {
    pub x: Vec<F>,
    pub k: u64,
    rng: SamplerRng,
}

impl<F: Real> ChainState<F> {
    pub fn new(x0: Vec<F>, seed: u64) -> Self {
        Self {
            x: x0,
            k: 0,
            rng: SamplerRng::seed_from_u64(seed),
        }
    }

    /// Serializable generator state; two states with equal fields produce
    /// identical trajectories.
    pub fn rng_snapshot(&self) -> RngSnapshot {
        RngSnapshot {
            seed: self.rng.get_seed(),
            stream: self.rng.get_stream(),
            word_pos: self.rng.get_word_pos(),
        }
    }

    pub fn restore(x: Vec<F>, k: u64, snapshot: &RngSnapshot) -> Self {
        let mut rng = SamplerRng::from_seed(snapshot.seed);
        rng.set_stream(snapshot.stream);
        rng.set_word_pos(snapshot.word_pos);
        Self { x, k, rng }
    }

    pub fn rng_mut(&mut self) -> &mut SamplerRng {
        &mut self.rng
    }
}

fn draw_gaussian_into<F: Real>(rng: &mut SamplerRng, out: &mut [F]) {
    for v in out.iter_mut() {
        *v = F::draw_standard_normal(rng);
    }
}

/// Shared prefix of every step: draw ξ, take the gradient step, add noise.
/// Returns the realized ξ and `y₀ = x − γ∇f(x, ξ) + √(2γ) W`.
fn diffuse<F: Real, Xi>(
    state: &mut ChainState<F>,
    pot: &CompositePotential<F, Xi>,
    gamma: F,
) -> Result<(Xi, Vec<F>)> {
    let k = state.k;
    let xi = pot.draw_noise(&mut state.rng);
    let mut grad = vec![F::zero(); state.x.len()];
    pot.grad_into(&state.x, &xi, &mut grad);
    if !all_finite(&grad) {
        return Err(Error::NonFinite {
            iteration: k,
            stage: Stage::Gradient,
        });
    }
    let mut w = vec![F::zero(); state.x.len()];
    draw_gaussian_into(&mut state.rng, &mut w);
    let scale = (F::of(2.0) * gamma).sqrt();
    let y0: Vec<F> = state
        .x
        .iter()
        .zip(&grad)
        .zip(&w)
        .map(|((&x, &g), &n)| x - gamma * g + scale * n)
        .collect();
    if !all_finite(&y0) {
        return Err(Error::NonFinite {
            iteration: k,
            stage: Stage::Noise,
        });
    }
    Ok((xi, y0))
}

/// One stochastic proximal Langevin step. Advances `state` and returns the
/// pre-prox point `y₀`, the sample the averaged measure is built from.
pub fn spla_step<F: Real, Xi>(
    state: &mut ChainState<F>,
    pot: &CompositePotential<F, Xi>,
    gamma: F,
) -> Result<Vec<F>> {
    let k = state.k;
    let (xi, y0) = diffuse(state, pot, gamma)?;
    let chain = pot.prox_chain(&xi);
    let mut y = y0.clone();
    chain.apply_in_place(&mut y, gamma).map_err(|e| match e {
        Error::NonFiniteIntermediate { term } => Error::NonFinite {
            iteration: k,
            stage: Stage::ProxTerm(term),
        },
        other => other,
    })?;
    state.x = y;
    state.k += 1;
    Ok(y0)
}

/// One stochastic subgradient Langevin step: every nonsmooth term enters
/// through its least-norm subgradient at the *current* iterate. Same draw
/// order as [`spla_step`]. Returns the new iterate.
pub fn ssla_step<F: Real, Xi>(
    state: &mut ChainState<F>,
    pot: &CompositePotential<F, Xi>,
    gamma: F,
) -> Result<Vec<F>> {
    let k = state.k;
    let xi = pot.draw_noise(&mut state.rng);
    let mut drift = vec![F::zero(); state.x.len()];
    pot.grad_into(&state.x, &xi, &mut drift);
    let chain = pot.prox_chain(&xi);
    chain.accumulate_min_subgradients(&state.x, &mut drift);
    if !all_finite(&drift) {
        return Err(Error::NonFinite {
            iteration: k,
            stage: Stage::Gradient,
        });
    }
    let mut w = vec![F::zero(); state.x.len()];
    draw_gaussian_into(&mut state.rng, &mut w);
    let scale = (F::of(2.0) * gamma).sqrt();
    for ((x, &g), &n) in state.x.iter_mut().zip(&drift).zip(&w) {
        *x = *x - gamma * g + scale * n;
    }
    if !all_finite(&state.x) {
        return Err(Error::NonFinite {
            iteration: k,
            stage: Stage::Noise,
        });
    }
    state.k += 1;
    Ok(state.x.clone())
}

/// One exact-prox Langevin step: the full prox of the summed nonsmooth part
/// replaces the sequential pass. Returns the pre-prox point `y₀`.
pub fn proxla_step<F: Real, Xi>(
    state: &mut ChainState<F>,
    pot: &CompositePotential<F, Xi>,
    full_prox: &FullProx<F>,
    gamma: F,
) -> Result<Vec<F>> {
    let k = state.k;
    let (_xi, y0) = diffuse(state, pot, gamma)?;
    let x = full_prox(&y0, gamma)?;
    if !all_finite(&x) {
        return Err(Error::NonFinite {
            iteration: k,
            stage: Stage::ProxTerm(0),
        });
    }
    state.x = x;
    state.k += 1;
    Ok(y0)
}

/// One unadjusted Langevin step on the smooth part alone. ξ is still drawn
/// (and consumed from the generator) so trajectories stay comparable across
/// algorithms. Returns the new iterate.
pub fn la_step<F: Real, Xi>(
    state: &mut ChainState<F>,
    pot: &CompositePotential<F, Xi>,
    gamma: F,
) -> Result<Vec<F>> {
    let (_xi, y0) = diffuse(state, pot, gamma)?;
    state.x = y0.clone();
    state.k += 1;
    Ok(y0)
}

/// Sampling algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Spla,
    Ssla,
    ProxLa,
    La,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Spla,
        Algorithm::Ssla,
        Algorithm::ProxLa,
        Algorithm::La,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Spla => "spla",
            Algorithm::Ssla => "ssla",
            Algorithm::ProxLa => "proxla",
            Algorithm::La => "la",
        }
    }
}

impl core::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "spla" => Ok(Algorithm::Spla),
            "ssla" => Ok(Algorithm::Ssla),
            "proxla" => Ok(Algorithm::ProxLa),
            "la" => Ok(Algorithm::La),
            other => Err(format!(
                "unknown algorithm `{other}` (expected spla, ssla, proxla or la)"
            )),
        }
    }
}

impl core::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which points a run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleTag {
    /// The iterate `x^k`.
    X,
    /// The per-step averaging sample: `y₀` for prox-based algorithms, the
    /// new iterate for the others.
    Y0,
}

/// Recording cadence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Record every `stride`-th iteration.
    Every(u64),
    /// Record powers of two plus every `tail_stride`-th iteration.
    GeometricWithTail { tail_stride: u64 },
}

impl Schedule {
    pub fn records(self, k: u64) -> bool {
        match self {
            Schedule::Every(stride) => k % stride.max(1) == 0,
            Schedule::GeometricWithTail { tail_stride } => {
                k.is_power_of_two() || k % tail_stride.max(1) == 0
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StoreConfig {
    pub record_x: bool,
    pub record_y0: bool,
    pub schedule: Schedule,
}

impl Default for StoreConfig {
    fn default() -> Self {
        Self {
            record_x: true,
            record_y0: true,
            schedule: Schedule::Every(1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleRecord<F> {
    pub k: u64,
    pub tag: SampleTag,
    pub point: Vec<F>,
}

/// Recorded samples of one run, plus the abort annotation if the run died.
#[derive(Debug, Clone)]
pub struct SampleStore<F: Real> {
    dim: usize,
    records: Vec<SampleRecord<F>>,
    abort: Option<String>,
}

impl<F: Real> SampleStore<F> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            records: Vec::new(),
            abort: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(&mut self, k: u64, tag: SampleTag, point: Vec<F>) {
        debug_assert_eq!(point.len(), self.dim);
        debug_assert!(
            self.records
                .iter()
                .rev()
                .find(|r| r.tag == tag)
                .is_none_or(|r| r.k < k),
            "records must be strictly increasing in k within a tag"
        );
        self.records.push(SampleRecord { k, tag, point });
    }

    pub fn records(&self) -> &[SampleRecord<F>] {
        &self.records
    }

    pub fn with_tag(&self, tag: SampleTag) -> impl Iterator<Item = &SampleRecord<F>> {
        self.records.iter().filter(move |r| r.tag == tag)
    }

    /// Scalar values of all records with `tag`, for one-dimensional chains.
    pub fn values_1d(&self, tag: SampleTag) -> Result<Vec<F>> {
        if self.dim != 1 {
            return Err(Error::NotOneDimensional { dim: self.dim });
        }
        Ok(self.with_tag(tag).map(|r| r.point[0]).collect())
    }

    /// Iteration numbers recorded under `tag`, in order.
    pub fn iterations(&self, tag: SampleTag) -> impl Iterator<Item = u64> + '_ {
        self.with_tag(tag).map(|r| r.k)
    }

    /// The `slot`-th recorded point under `tag`. Panics when out of range.
    pub fn nth_point(&self, tag: SampleTag, slot: usize) -> &[F] {
        self.with_tag(tag)
            .nth(slot)
            .map(|r| r.point.as_slice())
            .expect("record slot within range")
    }

    /// Annotation of the error that aborted the run, if any.
    pub fn abort(&self) -> Option<&str> {
        self.abort.as_deref()
    }

    fn annotate_abort(&mut self, e: &Error) {
        self.abort = Some(e.to_string());
    }
}

/// Runs `plan.iterations` steps of `algorithm` from `x0`, recording per
/// `store`. A numerical failure stops the run early; the partial store keeps
/// everything recorded so far and carries the abort annotation.
pub fn run<F: Real, Xi>(
    algorithm: Algorithm,
    pot: &CompositePotential<F, Xi>,
    x0: Vec<F>,
    plan: &StepPlan<F>,
    seed: u64,
    store: &StoreConfig,
    full_prox: Option<&FullProx<F>>,
) -> Result<SampleStore<F>> {
    let mut state = ChainState::new(x0, seed);
    let out = run_observed(algorithm, pot, &mut state, plan, store, full_prox, |_| {})?;
    Ok(out)
}

/// [`run`] on an existing state, invoking `on_record` at every recorded
/// iteration (after the step). The callback powers timing instrumentation
/// without entangling clocks with the sampling loop.
pub fn run_observed<F: Real, Xi>(
    algorithm: Algorithm,
    pot: &CompositePotential<F, Xi>,
    state: &mut ChainState<F>,
    plan: &StepPlan<F>,
    store: &StoreConfig,
    full_prox: Option<&FullProx<F>>,
    mut on_record: impl FnMut(&ChainState<F>),
) -> Result<SampleStore<F>> {
    if state.x.len() != pot.dim() {
        return Err(Error::DimensionMismatch {
            expected: pot.dim(),
            got: state.x.len(),
        });
    }
    if algorithm == Algorithm::ProxLa && full_prox.is_none() {
        return Err(Error::MissingFullProx);
    }
    let mut out = SampleStore::new(pot.dim());
    if store.record_x && state.k == 0 {
        out.push(0, SampleTag::X, state.x.clone());
    }
    let gamma = plan.gamma;
    for _ in 0..plan.iterations {
        let stepped = match algorithm {
            Algorithm::Spla => spla_step(state, pot, gamma),
            Algorithm::Ssla => ssla_step(state, pot, gamma),
            Algorithm::ProxLa => proxla_step(state, pot, full_prox.unwrap(), gamma),
            Algorithm::La => la_step(state, pot, gamma),
        };
        let y0 = match stepped {
            Ok(y0) => y0,
            Err(e) => {
                out.annotate_abort(&e);
                return Ok(out);
            }
        };
        if store.schedule.records(state.k) {
            if store.record_y0 {
                out.push(state.k, SampleTag::Y0, y0);
            }
            if store.record_x {
                out.push(state.k, SampleTag::X, state.x.clone());
            }
            on_record(state);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prox::{soft_threshold, Abs, ShiftedAbs};
    use std::sync::atomic::{AtomicU64, Ordering};
    use std::sync::Arc;

    fn free_constants() -> SmoothConstants<f64> {
        SmoothConstants::new(0.0, 0.0, 0.0).unwrap()
    }

    /// F ≡ 0 with no prox terms and no ξ consumption: pure diffusion.
    fn diffusion(dim: usize) -> CompositePotential<f64, ()> {
        CompositePotential::new(
            dim,
            free_constants(),
            |_x, _xi, out| out.fill(0.0),
            |_| ProxChain::empty(),
            |_| (),
        )
    }

    /// F = ½‖x‖², no prox terms.
    fn gaussian(dim: usize) -> CompositePotential<f64, ()> {
        CompositePotential::new(
            dim,
            SmoothConstants::new(1.0, 1.0, 0.0).unwrap(),
            |x, _xi, out| out.copy_from_slice(x),
            |_| ProxChain::empty(),
            |_| (),
        )
    }

    /// The scalar Laplace target: F ≡ 0, one stochastic term |x| + x·ξ with
    /// standard Gaussian ξ.
    fn laplace() -> CompositePotential<f64, f64> {
        CompositePotential::new(
            1,
            free_constants(),
            |_x, _xi, out| out.fill(0.0),
            |&xi| ProxChain::new(vec![Arc::new(ShiftedAbs::scalar(xi)) as _]),
            |rng| f64::draw_standard_normal(rng),
        )
    }

    /// Replays the generator stream of a chain: ξ draws per step, then `dim`
    /// Gaussians for W.
    fn replay_gaussians(seed: u64, xi_draws_per_step: usize, dim: usize, steps: usize) -> Vec<Vec<f64>> {
        let mut rng = SamplerRng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            for _ in 0..xi_draws_per_step {
                let _ = f64::draw_standard_normal(&mut rng);
            }
            out.push((0..dim).map(|_| f64::draw_standard_normal(&mut rng)).collect());
        }
        out
    }

    #[test]
    fn smooth_constants_ordering_is_enforced() {
        assert!(SmoothConstants::new(1.0, 1.0, 0.0).is_ok());
        assert!(SmoothConstants::new(0.5, 1.0, 0.0).is_err());
        assert!(SmoothConstants::new(1.0, -0.1, 0.0).is_err());
        assert!(SmoothConstants::new(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn pure_diffusion_step_is_scaled_noise() {
        // With γ = 0.5 the step is x + √(2γ)·W = W exactly.
        let pot = diffusion(1);
        let mut state = ChainState::new(vec![0.0], 42);
        let y0 = spla_step(&mut state, &pot, 0.5).unwrap();
        let w = replay_gaussians(42, 0, 1, 1)[0][0];
        assert_eq!(state.x, vec![w]);
        assert_eq!(y0, vec![w]);
        assert_eq!(state.k, 1);
    }

    #[test]
    fn unit_step_on_quadratic_cancels_the_iterate() {
        // γ = 1, x = 4: the drift z = 4 − 4 = 0 and only noise remains.
        let pot = gaussian(1);
        let mut state = ChainState::new(vec![4.0], 9);
        let y0 = spla_step(&mut state, &pot, 1.0).unwrap();
        let w = replay_gaussians(9, 0, 1, 1)[0][0];
        assert_eq!(y0[0], 2f64.sqrt() * w);
        assert_eq!(state.x, y0);
    }

    #[test]
    fn ssla_steps_along_the_minimal_subgradient() {
        let pot = CompositePotential::new(
            1,
            free_constants(),
            |_x, _xi: &(), out| out.fill(0.0),
            |_| ProxChain::new(vec![Arc::new(Abs::scalar()) as _]),
            |_| (),
        );
        // sign(3) = 1, so the drift removes γ·1 = 1 before the noise.
        let mut state = ChainState::new(vec![3.0], 5);
        let x1 = ssla_step(&mut state, &pot, 1.0).unwrap();
        let w = replay_gaussians(5, 0, 1, 1)[0][0];
        assert_eq!(x1[0], 2.0 + 2f64.sqrt() * w);

        // At the kink the minimal section is 0 and only noise acts.
        let mut state = ChainState::new(vec![0.0], 5);
        let x1 = ssla_step(&mut state, &pot, 1.0).unwrap();
        assert_eq!(x1[0], 2f64.sqrt() * w);
    }

    #[test]
    fn spla_with_empty_chain_equals_la_stepwise() {
        let pot = gaussian(2);
        let mut a = ChainState::new(vec![4.0, -1.5], 77);
        let mut b = ChainState::new(vec![4.0, -1.5], 77);
        for _ in 0..50 {
            let ya = spla_step(&mut a, &pot, 0.3).unwrap();
            let yb = la_step(&mut b, &pot, 0.3).unwrap();
            assert_eq!(ya, yb);
            assert_eq!(a.x, b.x);
        }
    }

    #[test]
    fn spla_single_term_equals_exact_prox_step() {
        // With one deterministic term the sequential pass *is* the full
        // prox, so SPLA and the exact-prox baseline coincide stepwise.
        let pot = CompositePotential::new(
            1,
            free_constants(),
            |_x, _xi: &(), out| out.fill(0.0),
            |_| ProxChain::new(vec![Arc::new(Abs::scalar()) as _]),
            |_| (),
        );
        let full: Box<FullProx<f64>> =
            Box::new(|y, gamma| Ok(vec![soft_threshold(y[0], gamma)]));
        let mut a = ChainState::new(vec![2.0], 3);
        let mut b = ChainState::new(vec![2.0], 3);
        for _ in 0..50 {
            let ya = spla_step(&mut a, &pot, 0.7).unwrap();
            let yb = proxla_step(&mut b, &pot, full.as_ref(), 0.7).unwrap();
            assert_eq!(ya, yb);
            assert_eq!(a.x, b.x);
        }
    }

    #[test]
    fn laplace_trajectory_matches_scalar_reference() {
        // Independently coded reference: raw generator draws and the
        // shift-then-threshold formula, no library calls.
        let (gamma, seed, steps) = (0.25f64, 2024, 30);
        let mut rng = SamplerRng::seed_from_u64(seed);
        let mut x_ref = 0.6f64;
        let mut reference = Vec::with_capacity(steps);
        for _ in 0..steps {
            let xi: f64 = f64::draw_standard_normal(&mut rng);
            let w: f64 = f64::draw_standard_normal(&mut rng);
            let y0 = x_ref + (2.0 * gamma).sqrt() * w;
            let v = y0 - gamma * xi;
            x_ref = v.signum() * (v.abs() - gamma).max(0.0);
            reference.push(x_ref);
        }

        let pot = laplace();
        let mut state = ChainState::new(vec![0.6], seed);
        for &expected in &reference {
            spla_step(&mut state, &pot, gamma).unwrap();
            assert!(
                (state.x[0] - expected).abs() <= 1e-12,
                "trajectory diverged: {} vs {expected}",
                state.x[0]
            );
        }
    }

    #[test]
    fn chain_state_snapshot_resumes_identically() {
        let pot = laplace();
        let mut state = ChainState::new(vec![0.0], 500);
        for _ in 0..10 {
            spla_step(&mut state, &pot, 0.1).unwrap();
        }
        let snap = state.rng_snapshot();
        let (x, k) = (state.x.clone(), state.k);

        let mut ahead = Vec::new();
        for _ in 0..5 {
            spla_step(&mut state, &pot, 0.1).unwrap();
            ahead.push(state.x.clone());
        }

        let mut resumed = ChainState::restore(x, k, &snap);
        for expected in &ahead {
            spla_step(&mut resumed, &pot, 0.1).unwrap();
            assert_eq!(&resumed.x, expected);
        }
    }

    #[test]
    fn index_draws_never_touch_the_chain_generator() {
        let pot = laplace();
        let mut plain = ChainState::new(vec![0.0], 21);
        let mut interleaved = ChainState::new(vec![0.0], 21);
        let mut index_rng = SamplerRng::seed_from_u64(9999);
        for k in 0..20 {
            spla_step(&mut plain, &pot, 0.1).unwrap();
            let _ = crate::sampler::uniform_index(k, &mut index_rng);
            spla_step(&mut interleaved, &pot, 0.1).unwrap();
            assert_eq!(plain.x, interleaved.x);
        }
    }

    #[test]
    fn schedule_selects_iterations() {
        assert!(Schedule::Every(1).records(1));
        assert!(Schedule::Every(3).records(3));
        assert!(!Schedule::Every(3).records(4));
        let geo = Schedule::GeometricWithTail { tail_stride: 100 };
        for k in [1, 2, 4, 8, 1024] {
            assert!(geo.records(k));
        }
        assert!(geo.records(300));
        assert!(!geo.records(96));
    }

    #[test]
    fn zero_iteration_run_stores_the_start_point() {
        let pot = diffusion(1);
        let plan = StepPlan::new(0.5, 0, Regime::Convex).unwrap();
        let store = run(
            Algorithm::Spla,
            &pot,
            vec![1.25],
            &plan,
            0,
            &StoreConfig::default(),
            None,
        )
        .unwrap();
        assert_eq!(store.records().len(), 1);
        assert_eq!(store.records()[0].k, 0);
        assert_eq!(store.records()[0].tag, SampleTag::X);
        assert_eq!(store.records()[0].point, vec![1.25]);
        assert!(store.abort().is_none());
    }

    #[test]
    fn same_seed_runs_are_bit_identical() {
        let pot = laplace();
        let plan = StepPlan::new(0.1, 200, Regime::Convex).unwrap();
        let cfg = StoreConfig::default();
        let a = run(Algorithm::Spla, &pot, vec![0.0], &plan, 31, &cfg, None).unwrap();
        let b = run(Algorithm::Spla, &pot, vec![0.0], &plan, 31, &cfg, None).unwrap();
        assert_eq!(a.records().len(), b.records().len());
        for (ra, rb) in a.records().iter().zip(b.records()) {
            assert_eq!(ra.k, rb.k);
            assert_eq!(ra.tag, rb.tag);
            assert_eq!(ra.point, rb.point);
        }
    }

    #[test]
    fn run_requires_matching_dimension_and_full_prox() {
        let pot = diffusion(2);
        let plan = StepPlan::new(0.5, 1, Regime::Convex).unwrap();
        let cfg = StoreConfig::default();
        assert!(matches!(
            run(Algorithm::Spla, &pot, vec![0.0], &plan, 0, &cfg, None),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(matches!(
            run(Algorithm::ProxLa, &pot, vec![0.0; 2], &plan, 0, &cfg, None),
            Err(Error::MissingFullProx)
        ));
    }

    #[test]
    fn numerical_failure_aborts_with_annotation() {
        // The gradient turns non-finite on the fourth step.
        let calls = Arc::new(AtomicU64::new(0));
        let counter = calls.clone();
        let pot = CompositePotential::new(
            1,
            free_constants(),
            move |_x, _xi: &(), out| {
                let n = counter.fetch_add(1, Ordering::Relaxed);
                out.fill(if n >= 3 { f64::NAN } else { 0.0 });
            },
            |_| ProxChain::empty(),
            |_| (),
        );
        let plan = StepPlan::new(0.5, 10, Regime::Convex).unwrap();
        let store = run(
            Algorithm::Spla,
            &pot,
            vec![0.0],
            &plan,
            1,
            &StoreConfig::default(),
            None,
        )
        .unwrap();
        let xs: Vec<u64> = store.iterations(SampleTag::X).collect();
        assert_eq!(xs, vec![0, 1, 2, 3]);
        let note = store.abort().expect("abort annotation");
        assert!(note.contains("iteration 3"), "unexpected note: {note}");
        assert!(note.contains("gradient"), "unexpected note: {note}");
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert!("mala".parse::<Algorithm>().is_err());
    }
}
