//! Compound sums driven by the counting process: X(t) = sum of N(t)
//! independent jumps Y_i.
//!
//! With g(s) = E[exp(s Y)] the moment generating function of X(t) is the
//! counting probability generating function evaluated at g(s):
//!
//! ```text
//!     J(s) = Gamma(nu) E[gamma; mu, nu](u (g(s) - 1)),    u = lambda t^sigma,
//! ```
//!
//! so J'(0) = <Y> <N(t)>. Jump laws cover constant, uniform, Gaussian,
//! exponential, and empirical (data-driven) cases.

use crate::counting::ParamSet;
use crate::error::{Error, Result};
use crate::mlf;
use crate::renewal::split_seed;
use crate::special;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

/// Distribution of a single jump Y.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpLaw {
    Constant(f64),
    Uniform { lo: f64, hi: f64 },
    Gaussian { mean: f64, sd: f64 },
    Exponential { rate: f64 },
    Empirical(Vec<f64>),
}

/// Monte Carlo summary of the compound sum at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct CompoundResult {
    pub samples: Vec<f64>,
    pub analytic_mean: f64,
    pub empirical_mean: f64,
    pub std_error: f64,
    pub within_four_se: bool,
}

impl JumpLaw {
    pub fn validate(&self) -> Result<()> {
        match self {
            JumpLaw::Constant(a) => {
                if !a.is_finite() {
                    return Err(Error::Domain(format!("constant jump must be finite, got {a}")));
                }
            }
            JumpLaw::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::Domain(format!(
                        "uniform jump needs lo < hi, got [{lo}, {hi}]"
                    )));
                }
            }
            JumpLaw::Gaussian { mean, sd } => {
                if !(mean.is_finite() && sd.is_finite() && *sd > 0.0) {
                    return Err(Error::Domain(format!(
                        "gaussian jump needs finite mean and sd > 0, got ({mean}, {sd})"
                    )));
                }
            }
            JumpLaw::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return Err(Error::Domain(format!(
                        "exponential jump needs rate > 0, got {rate}"
                    )));
                }
            }
            JumpLaw::Empirical(values) => {
                if values.is_empty() {
                    return Err(Error::Domain("empirical jump law needs at least one value".into()));
                }
                if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Domain(format!(
                        "empirical jump values must be finite, got {bad}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Load an empirical law from a text file: one value per line, with
    /// commas inside a line also accepted as separators.
    pub fn empirical_from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut values = Vec::new();
        for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| {
                Error::Domain(format!("could not parse jump value {tok:?} in {}", path.display()))
            })?;
            values.push(v);
        }
        let law = JumpLaw::Empirical(values);
        law.validate()?;
        Ok(law)
    }

    /// g(s) = E[exp(s Y)].
    pub fn mgf(&self, s: f64) -> Result<f64> {
        if !s.is_finite() {
            return Err(Error::Domain(format!("mgf argument must be finite, got {s}")));
        }
        self.validate()?;
        Ok(match self {
            JumpLaw::Constant(a) => (s * a).exp(),
            JumpLaw::Uniform { lo, hi } => {
                let x = s * (hi - lo);
                if x.abs() < 1e-12 {
                    (s * lo).exp() * (1.0 + 0.5 * x)
                } else {
                    (s * lo).exp() * x.exp_m1() / x
                }
            }
            JumpLaw::Gaussian { mean, sd } => (s * mean + 0.5 * s * s * sd * sd).exp(),
            JumpLaw::Exponential { rate } => {
                if s >= *rate {
                    return Err(Error::Domain(format!(
                        "exponential jump mgf diverges for s >= rate ({s} >= {rate})"
                    )));
                }
                rate / (rate - s)
            }
            JumpLaw::Empirical(values) => {
                values.iter().map(|v| (s * v).exp()).sum::<f64>() / values.len() as f64
            }
        })
    }

    /// <Y>.
    pub fn mean(&self) -> Result<f64> {
        self.validate()?;
        Ok(match self {
            JumpLaw::Constant(a) => *a,
            JumpLaw::Uniform { lo, hi } => 0.5 * (lo + hi),
            JumpLaw::Gaussian { mean, .. } => *mean,
            JumpLaw::Exponential { rate } => 1.0 / rate,
            JumpLaw::Empirical(values) => values.iter().sum::<f64>() / values.len() as f64,
        })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            JumpLaw::Constant(a) => *a,
            JumpLaw::Uniform { lo, hi } => lo + (hi - lo) * rng.gen::<f64>(),
            JumpLaw::Gaussian { mean, sd } => {
                let u1 = 1.0 - rng.gen::<f64>();
                let u2 = rng.gen::<f64>();
                mean + sd * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            }
            JumpLaw::Exponential { rate } => -(1.0 - rng.gen::<f64>()).ln() / rate,
            JumpLaw::Empirical(values) => {
                let i = (rng.gen::<f64>() * values.len() as f64) as usize;
                values[i.min(values.len() - 1)]
            }
        }
    }
}

/// J(s) = E[exp(s X(t))] for the compound sum.
pub fn compound_mgf(params: &ParamSet, jump: &JumpLaw, t: f64, s: f64) -> Result<f64> {
    compound_mgf_from_g(params, t, jump.mgf(s)?)
}

/// The counting probability generating function evaluated at g: at g = 0
/// this is P(N(t) = 0), at g = 1 it is 1.
pub(crate) fn compound_mgf_from_g(params: &ParamSet, t: f64, g: f64) -> Result<f64> {
    if !g.is_finite() {
        return Err(Error::Domain(format!("generating argument must be finite, got {g}")));
    }
    let u = params.intensity(t)?;
    let (e, _) = mlf::eval_real(
        params.mu,
        params.nu,
        params.gamma,
        u * (g - 1.0),
        &crate::counting::pmf_policy(),
    )?;
    Ok(special::gamma_fn(params.nu)? * e)
}

/// <X(t)> = <Y> <N(t)>.
pub fn compound_mean(params: &ParamSet, jump: &JumpLaw, t: f64) -> Result<f64> {
    Ok(jump.mean()? * params.moments(t)?.mean)
}

/// Simulate the compound sum: counts by table inversion, jumps from their
/// own draws, all from one seeded stream.
pub fn simulate_compound(
    params: &ParamSet,
    jump: &JumpLaw,
    t: f64,
    count: usize,
    seed: u64,
) -> Result<CompoundResult> {
    if count == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    jump.validate()?;
    let table = params.pmf_table(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, 0));
    let mut samples = Vec::with_capacity(count);
    for _ in 0..count {
        let n = table.quantile(rng.gen::<f64>());
        let mut x = 0.0;
        for _ in 0..n {
            x += jump.sample(&mut rng);
        }
        samples.push(x);
    }
    let analytic_mean = compound_mean(params, jump, t)?;
    let empirical_mean = samples.iter().sum::<f64>() / count as f64;
    let var = samples
        .iter()
        .map(|x| (x - empirical_mean).powi(2))
        .sum::<f64>()
        / (count as f64 - 1.0).max(1.0);
    let std_error = (var / count as f64).sqrt();
    let within_four_se = (empirical_mean - analytic_mean).abs() <= 4.0 * std_error;
    Ok(CompoundResult {
        samples,
        analytic_mean,
        empirical_mean,
        std_error,
        within_four_se,
    })
}
