//! The four-parameter counting family: probability mass function, generating
//! functions, moments, and rates.
//!
//! A parameter set (mu, nu, gamma, sigma, lambda) defines counting
//! probabilities through the dimensionless intensity u = lambda t^sigma:
//!
//! ```text
//!     P(n, t) = Gamma(nu) (gamma)_n u^n / n! * E[gamma+n; mu, nu+n mu](-u)
//! ```
//!
//! Unit parameters collapse the family to the Poisson law; nu = gamma = 1
//! with sigma = mu gives the heavy-tailed fractional law; mu = nu = gamma = 1
//! with sigma free gives the stretched-exponential law.

use crate::combinatorics;
use crate::error::{Error, Result};
use crate::mlf::{self, PrecisionPolicy};
use crate::special;

/// Probability-domain parameters. Construction validates
/// 0 < mu <= 1, gamma > 0, nu >= mu gamma, 0 < sigma <= 1, lambda > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    pub mu: f64,
    pub nu: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub lambda: f64,
}

/// Default tail mass left uncovered by an automatically sized table.
pub const TABLE_TAIL_TARGET: f64 = 1e-12;
/// Hard cap on automatically sized tables.
pub const TABLE_CAP: usize = 100_000;

/// Accuracy contract used for every probability evaluation in this module.
pub(crate) fn pmf_policy() -> PrecisionPolicy {
    PrecisionPolicy {
        target_rel_tol: 3e-14,
        ..Default::default()
    }
}

impl ParamSet {
    pub fn new(mu: f64, nu: f64, gamma: f64, sigma: f64, lambda: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0 && mu <= 1.0) {
            return Err(Error::Domain(format!(
                "mu must lie in (0, 1], got {mu}"
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
        }
        if !(nu.is_finite() && nu >= mu * gamma) {
            return Err(Error::Domain(format!(
                "nu must satisfy nu >= mu * gamma = {}, got {nu}",
                mu * gamma
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0 && sigma <= 1.0) {
            return Err(Error::Domain(format!(
                "sigma must lie in (0, 1], got {sigma}"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
        }
        Ok(ParamSet {
            mu,
            nu,
            gamma,
            sigma,
            lambda,
        })
    }

    /// Poisson slice: mu = nu = gamma = sigma = 1.
    pub fn poisson(lambda: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, 1.0, lambda)
    }

    /// Heavy-tailed fractional slice: nu = gamma = 1, sigma locked to mu.
    pub fn fractional(mu: f64, lambda: f64) -> Result<Self> {
        Self::new(mu, 1.0, 1.0, mu, lambda)
    }

    /// Stretched-exponential slice: mu = nu = gamma = 1, sigma free.
    pub fn stretched(sigma: f64, lambda: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, sigma, lambda)
    }

    /// Dimensionless intensity u = lambda t^sigma.
    pub fn intensity(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!("t must be >= 0, got {t}")));
        }
        Ok(self.lambda * t.powf(self.sigma))
    }

    /// P(n, t).
    pub fn pmf(&self, t: f64, n: u64) -> Result<f64> {
        self.pmf_at_intensity(self.intensity(t)?, n)
    }

    /// P(n) at a directly supplied intensity u.
    pub fn pmf_at_intensity(&self, u: f64, n: u64) -> Result<f64> {
        pmf_core(self.mu, self.nu, self.gamma, u, n)
    }

    /// Automatically sized table of P(0..), covering all but
    /// [`TABLE_TAIL_TARGET`] of the mass or stopping at [`TABLE_CAP`].
    pub fn pmf_table(&self, t: f64) -> Result<PmfTable> {
        self.pmf_table_with(t, TABLE_TAIL_TARGET, TABLE_CAP)
    }

    /// Table with explicit tail target and row cap.
    pub fn pmf_table_with(&self, t: f64, target_tail: f64, cap: usize) -> Result<PmfTable> {
        if !(target_tail > 0.0 && target_tail < 1.0) {
            return Err(Error::Domain(format!(
                "target_tail must lie in (0, 1), got {target_tail}"
            )));
        }
        if cap == 0 {
            return Err(Error::Domain("cap must be positive".into()));
        }
        let u = self.intensity(t)?;
        let mut probs = Vec::new();
        let mut cum = 0.0f64;
        let mut comp = 0.0f64; // Neumaier compensation
        let mut tail = 1.0f64;
        let mut capped = true;
        for n in 0..cap {
            let p = pmf_core(self.mu, self.nu, self.gamma, u, n as u64)?;
            probs.push(p);
            let t0 = cum + p;
            if cum.abs() >= p.abs() {
                comp += (cum - t0) + p;
            } else {
                comp += (p - t0) + cum;
            }
            cum = t0;
            tail = (1.0 - (cum + comp)).max(0.0);
            if tail <= target_tail {
                capped = false;
                break;
            }
        }
        Ok(PmfTable {
            probs,
            tail,
            capped,
        })
    }

    /// Table with a fixed row range P(0..=n_max); `tail` reports the
    /// normalization remainder past the last row.
    pub fn pmf_table_fixed(&self, t: f64, n_max: u64) -> Result<PmfTable> {
        if n_max as usize >= TABLE_CAP {
            return Err(Error::Domain(format!(
                "n_max must be below {TABLE_CAP}, got {n_max}"
            )));
        }
        let u = self.intensity(t)?;
        let mut probs = Vec::with_capacity(n_max as usize + 1);
        let mut cum = 0.0f64;
        let mut comp = 0.0f64;
        for n in 0..=n_max {
            let p = pmf_core(self.mu, self.nu, self.gamma, u, n)?;
            probs.push(p);
            let t0 = cum + p;
            if cum.abs() >= p.abs() {
                comp += (cum - t0) + p;
            } else {
                comp += (p - t0) + cum;
            }
            cum = t0;
        }
        Ok(PmfTable {
            probs,
            tail: (1.0 - (cum + comp)).max(0.0),
            capped: false,
        })
    }

    /// Probability generating function G(s, t) = Gamma(nu) E[gamma; mu, nu](u (s-1)).
    pub fn pgf(&self, t: f64, s: f64) -> Result<f64> {
        if !s.is_finite() {
            return Err(Error::Domain(format!("s must be finite, got {s}")));
        }
        let u = self.intensity(t)?;
        let (e, _) = mlf::eval_real(self.mu, self.nu, self.gamma, u * (s - 1.0), &pmf_policy())?;
        Ok(special::gamma_fn(self.nu)? * e)
    }

    /// Moment generating function over e^{-s}:
    /// M(s, t) = Gamma(nu) E[gamma; mu, nu](u (e^{-s} - 1)).
    pub fn mgf(&self, t: f64, s: f64) -> Result<f64> {
        if !s.is_finite() {
            return Err(Error::Domain(format!("s must be finite, got {s}")));
        }
        let u = self.intensity(t)?;
        let z = u * (-s).exp_m1();
        let (e, _) = mlf::eval_real(self.mu, self.nu, self.gamma, z, &pmf_policy())?;
        Ok(special::gamma_fn(self.nu)? * e)
    }

    /// Mean, second moment, and variance in closed form.
    pub fn moments(&self, t: f64) -> Result<Moments> {
        let u = self.intensity(t)?;
        let (mean, second_moment) = moments_at_intensity(self.mu, self.nu, self.gamma, u)?;
        Ok(Moments {
            mean,
            second_moment,
            variance: second_moment - mean * mean,
        })
    }

    /// Variance through the Beta-ratio identity
    /// Var = mean + mean^2 [(1 + 1/gamma) B(mu+nu, mu+nu) / B(2mu+nu, nu) - 1],
    /// algebraically equal to the moment form.
    pub fn variance_beta_form(&self, t: f64) -> Result<f64> {
        let u = self.intensity(t)?;
        let (mean, _) = moments_at_intensity(self.mu, self.nu, self.gamma, u)?;
        let ratio = special::beta_fn(self.mu + self.nu, self.mu + self.nu)?
            / special::beta_fn(2.0 * self.mu + self.nu, self.nu)?;
        Ok(mean + mean * mean * ((1.0 + 1.0 / self.gamma) * ratio - 1.0))
    }

    /// m-th moment via the generalized Stirling expansion
    /// <n^m> = sum_l S[mu, nu, gamma](m, l) u^l, m <= 30.
    pub fn moment(&self, t: f64, m: u32) -> Result<f64> {
        let u = self.intensity(t)?;
        combinatorics::bell_polynomial(self.mu, self.nu, self.gamma, u, m)
    }

    /// Instantaneous event rate d<n>/dt. Diverges at t = 0 when sigma < 1.
    pub fn rate(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!("t must be >= 0, got {t}")));
        }
        let front = self.gamma * special::gamma_fn(self.nu)?
            / special::gamma_fn(self.mu + self.nu)?
            * self.sigma
            * self.lambda;
        Ok(front * t.powf(self.sigma - 1.0))
    }

    /// Expected count accumulated up to t; the integral of [`Self::rate`].
    pub fn cumulative_rate(&self, t: f64) -> Result<f64> {
        Ok(self.moments(t)?.mean)
    }
}

/// Closed-form low moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
}

/// Tabulated P(0..N) with the residual tail mass past the last row.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable {
    pub probs: Vec<f64>,
    pub tail: f64,
    /// True when the row cap was hit before the tail target.
    pub capped: bool,
}

impl PmfTable {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Inverse-distribution lookup: smallest n with x < P(0) + ... + P(n).
    /// Arguments landing past the covered mass fall into a tail bucket,
    /// reported as `len()`.
    pub fn quantile(&self, x: f64) -> usize {
        let mut cum = 0.0f64;
        for (n, &p) in self.probs.iter().enumerate() {
            cum += p;
            if x < cum {
                return n;
            }
        }
        self.probs.len()
    }
}

/// P(n) at intensity u for bare (mu, nu, gamma), the kernel behind every
/// probability in the crate. The prefactor is assembled in log space from
/// backend-rounded Gamma values; u = 0 is exact.
pub(crate) fn pmf_core(mu: f64, nu: f64, gamma: f64, u: f64, n: u64) -> Result<f64> {
    if !u.is_finite() || u < 0.0 {
        return Err(Error::Domain(format!("intensity must be >= 0, got {u}")));
    }
    if u == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    if n > u32::MAX as u64 {
        return Err(Error::Domain(format!("n = {n} is out of range")));
    }
    let nf = n as f64;
    let ln_pref = special::ln_gamma(nu)? + special::ln_pochhammer(gamma, n as u32)?
        + nf * u.ln()
        - special::ln_gamma(nf + 1.0)?;
    let (e, _) = mlf::eval_real(mu, nu + mu * nf, gamma + nf, -u, &pmf_policy())?;
    if e <= 0.0 {
        // the factor is positive in exact arithmetic; a nonpositive value
        // means the probability is below resolvable size
        return Ok(0.0);
    }
    // rounding can push a probability a few ulps past 1 near u = 0
    Ok((ln_pref + e.ln()).exp().min(1.0))
}

/// Closed-form mean and second moment at intensity u:
/// <n>   = gamma Gamma(nu) u / Gamma(mu + nu)
/// <n^2> = <n> + (gamma)_2 Gamma(nu) u^2 / Gamma(2 mu + nu)
pub(crate) fn moments_at_intensity(
    mu: f64,
    nu: f64,
    gamma: f64,
    u: f64,
) -> Result<(f64, f64)> {
    if !u.is_finite() || u < 0.0 {
        return Err(Error::Domain(format!("intensity must be >= 0, got {u}")));
    }
    let gnu = special::gamma_fn(nu)?;
    let mean = gamma * gnu * u / special::gamma_fn(mu + nu)?;
    let second = mean
        + special::pochhammer(gamma, 2)? * gnu * u * u / special::gamma_fn(2.0 * mu + nu)?;
    Ok((mean, second))
}
