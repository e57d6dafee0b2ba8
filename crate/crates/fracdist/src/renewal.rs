//! Interarrival (waiting-time) law of the counting process and its samplers.
//!
//! The time between events has survival function
//!
//! ```text
//!     S(tau) = Gamma(nu) E[gamma; mu, nu](-lambda tau^sigma)
//! ```
//!
//! and density
//!
//! ```text
//!     psi(tau) = Gamma(nu) gamma sigma lambda tau^{sigma-1}
//!                E[gamma+1; mu, nu+mu](-lambda tau^sigma),
//! ```
//!
//! which integrates to one and equals -dS/dtau. At mu = nu = gamma = 1 the
//! law is the stretched exponential S(tau) = exp(-lambda tau^sigma) with a
//! closed-form quantile; everywhere else sampling inverts S numerically by
//! bracketing and bisection. Deep in the tail, where the defining series
//! would need runaway precision, the sampler switches to the four-term
//! algebraic tail expansion of the survival function; the switch is scoped
//! to sampling (bias far below statistical resolution) and the public
//! `survival` keeps certified evaluation with honest errors instead.

use crate::counting::{pmf_policy, ParamSet};
use crate::error::{Error, Result};
use crate::mlf::{self, PrecisionPolicy};
use crate::special;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Waiting-time law parameterized like the counting family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterarrivalLaw {
    pub params: ParamSet,
}

/// A batch of draws together with the seed and method that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub method: &'static str,
}

/// A batch of count draws.
#[derive(Debug, Clone, PartialEq)]
pub struct CountBatch {
    pub values: Vec<u64>,
    pub seed: u64,
    pub method: &'static str,
}

/// Deterministic per-stream seed derivation: stream 0 is the seed itself,
/// other streams mix the index through a rotated Weyl step.
pub(crate) fn split_seed(seed: u64, stream: u64) -> u64 {
    seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
}

/// Series cost ceiling for sampling: past this many predicted bits the
/// sampler switches to the algebraic tail expansion, whose relative error
/// at the switch stays below about 1e-4 and falls off as x^{-4}.
const SAMPLER_SERIES_BIT_LIMIT: f64 = 320.0;

/// Sampler-internal accuracy: looser than the public policy, capped so the
/// tail expansion takes over where the series would thrash.
fn sampler_policy() -> PrecisionPolicy {
    PrecisionPolicy {
        target_rel_tol: 1e-9,
        max_precision_bits: 512,
        ..Default::default()
    }
}

/// Predicted working precision (bits) for the series at argument -x.
fn series_cost_bits(mu: f64, x: f64) -> f64 {
    1.443 * x.powf(1.0 / mu) + 56.0
}

impl InterarrivalLaw {
    pub fn new(params: ParamSet) -> Self {
        InterarrivalLaw { params }
    }

    pub fn from_parts(mu: f64, nu: f64, gamma: f64, sigma: f64, lambda: f64) -> Result<Self> {
        Ok(Self::new(ParamSet::new(mu, nu, gamma, sigma, lambda)?))
    }

    /// The closed-form slice mu = nu = gamma = 1.
    pub fn weibull_case(sigma: f64, lambda: f64) -> Result<Self> {
        Ok(Self::new(ParamSet::stretched(sigma, lambda)?))
    }

    fn is_weibull(&self) -> bool {
        self.params.mu == 1.0 && self.params.nu == 1.0 && self.params.gamma == 1.0
    }

    /// P(waiting time > tau), fully certified evaluation.
    pub fn survival(&self, tau: f64) -> Result<f64> {
        let x = self.argument(tau)?;
        let p = &self.params;
        let (e, _) = mlf::eval_real(p.mu, p.nu, p.gamma, -x, &pmf_policy())?;
        // rounding can push the product a few ulps outside [0, 1] at the ends
        Ok((special::gamma_fn(p.nu)? * e).clamp(0.0, 1.0))
    }

    /// Waiting-time density. Diverges at tau = 0 when sigma < 1.
    pub fn density(&self, tau: f64) -> Result<f64> {
        let x = self.argument(tau)?;
        let p = &self.params;
        let (e, _) = mlf::eval_real(p.mu, p.nu + p.mu, p.gamma + 1.0, -x, &pmf_policy())?;
        let front = special::gamma_fn(p.nu)? * p.gamma * p.sigma * p.lambda;
        Ok(front * tau.powf(p.sigma - 1.0) * e)
    }

    fn argument(&self, tau: f64) -> Result<f64> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::Domain(format!("tau must be >= 0, got {tau}")));
        }
        Ok(self.params.lambda * tau.powf(self.params.sigma))
    }

    /// k-th waiting-time moment in the mu = nu = gamma = 1 slice:
    /// <tau^k> = (k/sigma) Gamma(k/sigma) / lambda^{k/sigma}.
    pub fn weibull_moment(&self, k: u32) -> Result<f64> {
        self.require_weibull()?;
        if k == 0 {
            return Ok(1.0);
        }
        let p = &self.params;
        let r = k as f64 / p.sigma;
        Ok(r * special::gamma_fn(r)? / p.lambda.powf(r))
    }

    /// Waiting-time variance in the closed-form slice, direct moment form:
    /// (1 / (sigma lambda^{2/sigma})) { 2 Gamma(2/sigma) - (1/sigma) Gamma(1/sigma)^2 }.
    pub fn weibull_variance(&self) -> Result<f64> {
        self.require_weibull()?;
        let s = self.params.sigma;
        let l = self.params.lambda;
        let g1 = special::gamma_fn(1.0 / s)?;
        let g2 = special::gamma_fn(2.0 / s)?;
        Ok((2.0 * g2 - g1 * g1 / s) / (s * l.powf(2.0 / s)))
    }

    /// The same variance rearranged through Legendre duplication into a
    /// Beta-ratio bracket:
    /// Gamma(1/sigma)^2 / (sigma^2 lambda^{2/sigma})
    ///   { sigma 2^{2/sigma} / B(1/sigma, 1/2) - 1 }.
    pub fn weibull_variance_duplication_form(&self) -> Result<f64> {
        self.require_weibull()?;
        let s = self.params.sigma;
        let l = self.params.lambda;
        let g1 = special::gamma_fn(1.0 / s)?;
        let bracket = s * 2.0f64.powf(2.0 / s) / special::beta_fn(1.0 / s, 0.5)? - 1.0;
        Ok(g1 * g1 / (s * s * l.powf(2.0 / s)) * bracket)
    }

    fn require_weibull(&self) -> Result<()> {
        if self.is_weibull() {
            Ok(())
        } else {
            Err(Error::Domain(
                "closed-form waiting-time moments require mu = nu = gamma = 1".into(),
            ))
        }
    }

    /// Survival evaluation for the sampler: series below the cost threshold,
    /// algebraic tail expansion beyond it (and on precision failures).
    fn sampler_survival(&self, tau: f64) -> Result<f64> {
        let x = self.argument(tau)?;
        let p = &self.params;
        if series_cost_bits(p.mu, x) <= SAMPLER_SERIES_BIT_LIMIT {
            match mlf::eval_real(p.mu, p.nu, p.gamma, -x, &sampler_policy()) {
                Ok((e, _)) => return Ok(special::gamma_fn(p.nu)? * e),
                Err(Error::Precision { .. }) => {}
                Err(other) => return Err(other),
            }
        }
        Ok(self.survival_tail_expansion(x)?.max(0.0))
    }

    /// Four-term large-x expansion of Gamma(nu) E[gamma; mu, nu](-x):
    /// Gamma(nu) sum_k (-1)^k (gamma)_k / k! x^{-gamma-k} / Gamma(nu - mu(gamma+k)).
    fn survival_tail_expansion(&self, x: f64) -> Result<f64> {
        let p = &self.params;
        let gnu = special::gamma_fn(p.nu)?;
        let mut acc = 0.0f64;
        let mut sign = 1.0f64;
        for k in 0..4u32 {
            let kf = k as f64;
            let coeff = special::pochhammer(p.gamma, k)? / special::gamma_fn(kf + 1.0)?;
            let rg = special::rgamma_any(p.nu - p.mu * (p.gamma + kf));
            acc += sign * coeff * x.powf(-p.gamma - kf) * rg;
            sign = -sign;
        }
        Ok(gnu * acc)
    }

    /// Quantile of the survival function: the tau with S(tau) = u.
    pub(crate) fn invert_survival(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Domain(format!(
                "survival level must lie in (0, 1], got {u}"
            )));
        }
        if self.is_weibull() {
            // S(tau) = exp(-lambda tau^sigma)
            let p = &self.params;
            return Ok((-u.ln() / p.lambda).powf(1.0 / p.sigma));
        }
        self.invert_survival_numeric(u)
    }

    /// Bracketing + bisection inverse, used for every non-closed-form law.
    pub(crate) fn invert_survival_numeric(&self, u: f64) -> Result<f64> {
        if u >= 1.0 {
            return Ok(0.0);
        }
        let mut lo;
        let mut hi;
        if self.sampler_survival(1.0)? >= u {
            lo = 1.0;
            hi = 2.0;
            while self.sampler_survival(hi)? >= u {
                lo = hi;
                hi *= 2.0;
                if hi > 1e300 {
                    return Err(Error::Sampler(format!(
                        "survival level {u} not bracketed below tau = 1e300"
                    )));
                }
            }
        } else {
            hi = 1.0;
            lo = 0.5;
            while self.sampler_survival(lo)? < u {
                hi = lo;
                lo /= 2.0;
                if lo < 1e-300 {
                    return Err(Error::Sampler(format!(
                        "survival level {u} not bracketed above tau = 1e-300"
                    )));
                }
            }
        }
        while hi - lo > 1e-11 * hi {
            let mid = 0.5 * (lo + hi);
            if self.sampler_survival(mid)? < u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Draw waiting times by inverse transform on the survival function.
    pub fn sample_interarrivals(&self, count: usize, seed: u64) -> Result<SampleBatch> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let method = if self.is_weibull() {
            "closed-form-inverse"
        } else {
            "bisection-inverse"
        };
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            // uniform over (0, 1] so the logarithm stays finite
            let u = 1.0 - rng.gen::<f64>();
            values.push(self.invert_survival(u)?);
        }
        Ok(SampleBatch {
            values,
            seed,
            method,
        })
    }
}

/// Draw event counts N(t) by inverse lookup over an automatically sized
/// probability table. Draws past the covered mass (total probability at most
/// the table tail target) collapse into the first uncovered count.
pub fn sample_counts(params: &ParamSet, t: f64, count: usize, seed: u64) -> Result<CountBatch> {
    let table = params.pmf_table(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let u = rng.gen::<f64>();
        values.push(table.quantile(u) as u64);
    }
    Ok(CountBatch {
        values,
        seed,
        method: "table-inverse",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survival_starts_at_one_and_decreases() {
        let law = InterarrivalLaw::from_parts(0.7, 1.2, 1.5, 0.8, 0.9).unwrap();
        assert!((law.survival(0.0).unwrap() - 1.0).abs() <= 1e-13);
        let mut last = 1.0;
        let mut tau = 0.25;
        while tau <= 16.0 {
            let s = law.survival(tau).unwrap();
            assert!(s > 0.0 && s < last, "tau = {tau}");
            last = s;
            tau *= 2.0;
        }
    }

    #[test]
    fn density_is_minus_survival_slope() {
        for law in [
            InterarrivalLaw::from_parts(0.6, 1.1, 1.4, 0.7, 1.2).unwrap(),
            InterarrivalLaw::from_parts(0.95, 1.0, 1.0, 0.95, 0.6).unwrap(),
            InterarrivalLaw::weibull_case(0.8, 1.0).unwrap(),
        ] {
            let mut tau = 0.1f64;
            while tau <= 10.0 {
                let h = 1e-5 * tau;
                let fd = (law.survival(tau - h).unwrap() - law.survival(tau + h).unwrap())
                    / (2.0 * h);
                let psi = law.density(tau).unwrap();
                assert!(
                    (psi - fd).abs() <= 1e-6 * psi.abs().max(fd.abs()),
                    "tau = {tau}: {psi} vs {fd}"
                );
                tau *= 1.9;
            }
        }
    }

    fn simpson_integral<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut acc = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn density_integrates_to_one() {
        // substituting w = tau^sigma turns psi dtau into
        // Gamma(nu) gamma lambda E[gamma+1; mu, nu+mu](-lambda w) dw,
        // a smooth integrand, and the remainder past W is exactly the
        // survival at W^{1/sigma}
        for law in [
            InterarrivalLaw::from_parts(0.6, 1.3, 1.6, 0.7, 0.8).unwrap(),
            InterarrivalLaw::from_parts(0.9, 1.0, 1.0, 0.5, 1.5).unwrap(),
        ] {
            let p = law.params;
            let gnu = special::gamma_fn(p.nu).unwrap();
            let policy = PrecisionPolicy {
                target_rel_tol: 1e-10,
                ..Default::default()
            };
            let f = |w: f64| {
                let (e, _) =
                    mlf::eval_real(p.mu, p.nu + p.mu, p.gamma + 1.0, -p.lambda * w, &policy)
                        .unwrap();
                gnu * p.gamma * p.lambda * e
            };
            let w_end = 25.0f64;
            let bulk = simpson_integral(&f, 0.0, w_end, 2500);
            let rest = law.survival(w_end.powf(1.0 / p.sigma)).unwrap();
            let total = bulk + rest;
            assert!(
                (total - 1.0).abs() <= 1e-6,
                "{:?}: integral {total}",
                law.params
            );
        }
    }

    #[test]
    fn closed_form_slice_quantile_and_moments() {
        let law = InterarrivalLaw::weibull_case(1.0, 1.0).unwrap();
        // survival level e^{-1} sits exactly at tau = 1
        let tau = law.invert_survival((-1.0f64).exp()).unwrap();
        assert!((tau - 1.0).abs() < 1e-14);
        let law = InterarrivalLaw::weibull_case(0.5, 1.0).unwrap();
        assert!((law.weibull_moment(1).unwrap() - 2.0).abs() < 1e-13);
        assert!((law.weibull_moment(2).unwrap() - 24.0).abs() < 1e-12);
        assert!((law.weibull_variance().unwrap() - 20.0).abs() < 1e-12);
        // moments are gated to the closed-form slice
        let general = InterarrivalLaw::from_parts(0.7, 1.0, 1.0, 0.7, 1.0).unwrap();
        assert!(general.weibull_moment(1).is_err());
    }

    #[test]
    fn variance_forms_agree() {
        for &sigma in &[0.4, 0.5, 0.8, 1.0] {
            for &lambda in &[0.5, 1.0, 2.5] {
                let law = InterarrivalLaw::weibull_case(sigma, lambda).unwrap();
                let direct = law.weibull_variance().unwrap();
                let dup = law.weibull_variance_duplication_form().unwrap();
                assert!(
                    (direct - dup).abs() <= 1e-12 * direct,
                    "sigma = {sigma}, lambda = {lambda}: {direct} vs {dup}"
                );
            }
        }
    }

    #[test]
    fn numeric_inverse_agrees_with_closed_form() {
        // run the bisection machinery on a law whose quantile is known
        let law = InterarrivalLaw::weibull_case(0.8, 1.3).unwrap();
        for &u in &[0.9, 0.5, 0.12, 1e-3, 1e-6] {
            let numeric = law.invert_survival_numeric(u).unwrap();
            let exact = (-u.ln() / 1.3f64).powf(1.0 / 0.8);
            assert!(
                (numeric - exact).abs() <= 1e-9 * exact,
                "u = {u}: {numeric} vs {exact}"
            );
        }
    }

    #[test]
    fn tail_expansion_matches_erfc_asymptotics() {
        // mu = 1/2, nu = gamma = 1 makes the survival e^{x^2} erfc(x) in the
        // squared argument, whose tail is
        // 1/(sqrt(pi) x) - 1/(2 sqrt(pi) x^3) + 3/(4 sqrt(pi) x^5) - ...
        // the four-term expansion reproduces the first two (odd orders
        // vanish) and drops the x^{-5} term, a relative 0.75 x^{-4}
        let law = InterarrivalLaw::from_parts(0.5, 1.0, 1.0, 0.5, 1.0).unwrap();
        let sp = std::f64::consts::PI.sqrt();
        for &x in &[50.0f64, 400.0] {
            let mine = law.survival_tail_expansion(x).unwrap();
            let kept = 1.0 / (sp * x) - 1.0 / (2.0 * sp * x.powi(3));
            assert!(
                (mine - kept).abs() <= 1e-13 * kept,
                "x = {x}: {mine} vs kept terms {kept}"
            );
            let truth = kept + 3.0 / (4.0 * sp * x.powi(5));
            assert!(
                (mine - truth).abs() <= 1.5 * x.powi(-4) * truth,
                "x = {x}: {mine} vs {truth}"
            );
        }
    }

    #[test]
    fn sampler_survival_is_continuous_across_the_switch() {
        // around the cost threshold the series and tail expansion must agree
        // to sampling accuracy; the truncated expansion carries a relative
        // error near 0.75 x^{-4} for this law, well under the bound below
        let law = InterarrivalLaw::from_parts(0.5, 1.0, 1.0, 0.5, 1.0).unwrap();
        let x_switch = ((SAMPLER_SERIES_BIT_LIMIT - 56.0) / 1.443).powf(0.5);
        for &x in &[x_switch * 0.9, x_switch * 1.1] {
            let series = {
                let (e, _) = mlf::eval_real(0.5, 1.0, 1.0, -x, &pmf_policy()).unwrap();
                e
            };
            let tail = law.survival_tail_expansion(x).unwrap();
            assert!(
                (series - tail).abs() <= 2e-4 * series,
                "x = {x}: {series} vs {tail}"
            );
        }
    }

    #[test]
    fn empirical_survival_tracks_the_law() {
        let law = InterarrivalLaw::from_parts(0.8, 1.0, 1.0, 0.8, 1.0).unwrap();
        let n = 8_000usize;
        let batch = law.sample_interarrivals(n, 20_250_607).unwrap();
        assert_eq!(batch.method, "bisection-inverse");
        for &tau in &[0.2f64, 1.0, 3.0, 8.0] {
            let s = law.survival(tau).unwrap();
            let hits = batch.values.iter().filter(|&&v| v > tau).count() as f64;
            let emp = hits / n as f64;
            let se = (s * (1.0 - s) / n as f64).sqrt();
            assert!(
                (emp - s).abs() <= 3.5 * se,
                "tau = {tau}: empirical {emp} vs {s} (se {se})"
            );
        }
    }

    #[test]
    fn kolmogorov_smirnov_numeric_sampler() {
        let law = InterarrivalLaw::from_parts(0.95, 1.2, 1.2, 0.9, 1.0).unwrap();
        let n = 10_000usize;
        let mut values = law.sample_interarrivals(n, 7_031).unwrap().values;
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d = 0.0f64;
        for (i, &v) in values.iter().enumerate() {
            let cdf = 1.0 - law.survival(v).unwrap();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d = d.max((cdf - lo).abs()).max((cdf - hi).abs());
        }
        let stat = d * (n as f64).sqrt();
        // critical value 1.95 keeps the false-alarm rate near 1e-3; the
        // seed is fixed, so this is a deterministic regression check
        assert!(stat <= 1.95, "KS statistic {stat}");
    }

    #[test]
    fn closed_form_sampler_moments() {
        let law = InterarrivalLaw::weibull_case(0.5, 1.0).unwrap();
        let n = 200_000usize;
        let batch = law.sample_interarrivals(n, 99).unwrap();
        assert_eq!(batch.method, "closed-form-inverse");
        let mean: f64 = batch.values.iter().sum::<f64>() / n as f64;
        let want_mean = law.weibull_moment(1).unwrap();
        let var = law.weibull_variance().unwrap();
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - want_mean).abs() <= 3.0 * se,
            "mean {mean} vs {want_mean} (se {se})"
        );
    }

    #[test]
    fn batches_are_deterministic_and_streams_differ() {
        let law = InterarrivalLaw::weibull_case(0.7, 1.0).unwrap();
        let a = law.sample_interarrivals(50, 1234).unwrap();
        let b = law.sample_interarrivals(50, 1234).unwrap();
        assert_eq!(a, b);
        let c = law.sample_interarrivals(50, split_seed(1234, 1)).unwrap();
        assert_ne!(a.values, c.values);
        assert_eq!(split_seed(1234, 0), 1234);
    }

    #[test]
    fn count_sampler_matches_the_mean() {
        let params = ParamSet::poisson(4.0).unwrap();
        let n = 50_000usize;
        let batch = sample_counts(&params, 1.0, n, 777).unwrap();
        let mean: f64 = batch.values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
        let se = (4.0f64 / n as f64).sqrt();
        assert!((mean - 4.0).abs() <= 4.0 * se, "mean {mean}");
        let again = sample_counts(&params, 1.0, n, 777).unwrap();
        assert_eq!(batch, again);
    }

    #[test]
    fn rejects_bad_survival_levels() {
        let law = InterarrivalLaw::weibull_case(0.5, 1.0).unwrap();
        assert!(law.invert_survival(0.0).is_err());
        assert!(law.invert_survival(1.5).is_err());
        assert!(law.invert_survival(f64::NAN).is_err());
    }
}
