//! Minimax representations of nonexpansive, monotone and homogeneous maps on
//! `ℝⁿ`.
//!
//! The crate covers weak Minkowski norms and their dual sets, sampled checks
//! of the order-theoretic axioms, the minimax/maximin representation
//! formulas, Shapley operators of finite zero-sum games, polyhedral
//! approximation of payment-free operators and risk measures on finite
//! probability spaces. Brute-force oracles in [`oracle`] are kept apart from
//! the fast paths so each can check the other.
//!
//! Sampling loops run on rayon when the `parallel` feature is on (the
//! default). [`Execution::Sequential`] forces a single thread at run time;
//! both paths draw the same per-sample streams and give identical results.

pub mod approximation;
pub mod axioms;
pub mod error;
pub mod games;
pub mod norms;
pub mod numeric;
pub mod operator;
pub mod oracle;
pub mod par;
pub mod representation;
pub mod risk;

pub use approximation::{approximate_payment_free, net_smoothing, verify_sandwich, Approximation, SandwichReport, SmoothedMap};
pub use axioms::{check_axiom, check_nonexpansive, equivalence_suite, Axiom, AxiomReport, EquivalenceReport, Suite};
pub use error::{Error, Result};
pub use games::{
    build_payment_free_representation, eval_payment_free_rep, payment_free_from_spec, random_spec, recession,
    recession_operator, shapley_eval, value_iteration, GameSpec, PaymentFreeRep, RandomGameShape,
};
pub use norms::{epsilon_net, extreme_points, top, top_plus, EpsNet, NetTarget, WeakNorm};
pub use numeric::{sup_norm, Execution, SampleConfig, SplitMix64, StochasticVector, Tolerance, Vector, DEFAULT_SEED};
pub use operator::{Operator, OperatorHandle};
pub use representation::{
    halfspace_simplex_extremes, homogeneous_minimax_eval, maximin_eval, minimax_eval, zero_level_project, Witness,
    YNet,
};
pub use risk::{RiskMeasure, RiskSpace};
