//! Langevin sampling for composite potentials `U = F + Σᵢ E_ξ Gᵢ(·, ξ)`
//! whose nonsmooth terms are handled through stochastic proximity operators.
//!
//! The crate provides:
//!
//! * [`prox`]: the prox-function contract, a catalogue of closed-form
//!   proximity operators, prox chains, Moreau envelopes and Yosida
//!   approximations, plus a derivative-free numerical oracle the closed
//!   forms are verified against;
//! * [`sampler`]: the stochastic proximal Langevin iteration and its
//!   baselines (stochastic subgradient, exact-prox, vanilla), step-size
//!   planners for the convex and strongly convex regimes, and the index
//!   samplers that turn iterates into an averaged measure;
//! * [`metrics`]: empirical measures, exact one-dimensional and
//!   assignment-based squared Wasserstein distances, entropy and KL
//!   estimators, and per-iteration diagnostic traces;
//! * [`graph`]: graphs, edge-list loading, graph trend filtering
//!   potentials, and an exact total-variation prox via its dual.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix the `f64` instantiation used by the shipped
//! binaries.

pub mod error;
pub mod graph;
pub mod metrics;
pub mod prox;
pub mod sampler;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type ProxChain64 = prox::ProxChain<f64>;
pub type CompositePotential64<Xi> = sampler::CompositePotential<f64, Xi>;
pub type ChainState64 = sampler::ChainState<f64>;
pub type SampleStore64 = sampler::SampleStore<f64>;
pub type StepPlan64 = sampler::StepPlan<f64>;
pub type EmpiricalMeasure64 = metrics::EmpiricalMeasure<f64>;
pub type DiagnosticsRecord64 = metrics::DiagnosticsRecord<f64>;
pub type GtfProblem64 = graph::GtfProblem<f64>;
