//! Linearized model of an optoelectromechanical interface: one microwave
//! cavity `a` and two optical cavities `c`, `d` coupled through a shared
//! mechanical mode `b`.
//!
//! The pipeline runs parameters → scattering matrix → output covariance →
//! bipartite entanglement of formation and a tripartite witness, with a
//! Routh–Hurwitz stability gate in front. Everything is generic over the
//! scalar type (`f32` or `f64`); the aliases at the crate root fix `f64`.
//! Rates and frequencies are in units of `2π × MHz`.

// `!(x > 0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod model;
pub mod moments;
pub mod numerics;
pub mod scalar;
pub mod scattering;
pub mod stability;

pub use num_complex;

pub use error::{Error, Result};
pub use model::{Branch, Cavity};
pub use moments::{CorrelationKind, Pair};
pub use scalar::Real;

pub type SystemParams = model::SystemParams<f64>;
pub type TransmissionMatrix = scattering::TransmissionMatrix<f64>;
pub type CovarianceMatrix = moments::CovarianceMatrix<f64>;
pub type ReducedCovariance = moments::ReducedCovariance<f64>;
pub type StandardFormCov = moments::StandardFormCov<f64>;
pub type EofResult = entanglement::EofResult<f64>;
pub type WeightVector = entanglement::WeightVector<f64>;
pub type TripartiteWitness = entanglement::TripartiteWitness<f64>;
pub type RhVerdict = stability::RhVerdict<f64>;
pub type EigVerdict = stability::EigVerdict<f64>;
