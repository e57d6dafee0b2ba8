//! Fractional generalized counting distributions built on the three-parameter
//! Mittag-Leffler function.
//!
//! Start with the runnable examples (`cargo run --example <name>`):
//! each one walks a major capability end to end. The modules underneath:
//!
//! * [`mlf`]: series evaluation of E[gamma; mu, nu](z) with certified error
//!   bounds and automatic precision escalation,
//! * [`counting`]: the four-parameter counting family (pmf, generating
//!   functions, moments, rates),
//! * [`combinatorics`]: generalized Stirling numbers and Bell polynomials,
//! * [`special`]: gamma-family scalar helpers backing everything else.

pub mod cli;
pub mod coherent;
pub mod combinatorics;
pub mod compound;
pub mod counting;
pub mod error;
pub mod mlf;
pub mod renewal;
pub mod special;

pub use counting::{Moments, ParamSet, PmfTable};
pub use error::{Error, Result};
pub use mlf::{ml3_eval, ml3_eval_batch, MLQuery, MLResult, PrecisionPolicy};
pub use coherent::{
    coherent_state, displacement_operator, evolution_diagonal, mandel_q, photon_statistics,
    stretched_coherent, CoherentLabel, FockVector, PhotonStatistics, Truncation,
};
pub use compound::{
    compound_mean, compound_mgf, simulate_compound, CompoundResult, JumpLaw,
};
pub use renewal::{sample_counts, CountBatch, InterarrivalLaw, SampleBatch};
