//! Generalized coherent states whose photon-number statistics follow the
//! counting family.
//!
//! A label varsigma and deformation exponent sigma fix the intensity
//! u = |varsigma|^{2 sigma}; the number-basis amplitudes are
//!
//! ```text
//!     c_n = exp(i n sigma Arg varsigma) sqrt(P(n; u)),
//! ```
//!
//! with P(n; u) the counting probabilities at intensity u, so normalization
//! and all photon moments come straight from the distribution. At
//! mu = nu = gamma = 1 the state collapses to the stretched displacement of
//! the vacuum, an exact eigenstate of the annihilation operator with
//! eigenvalue varsigma^sigma (principal branch throughout).

use crate::combinatorics::bell_polynomial;
use crate::counting::{moments_at_intensity, pmf_core};
use crate::error::{Error, Result};
use crate::mlf::{ml3_eval, MLQuery};
use crate::special;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// How many number-basis rows to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Grow until the lost mass drops below 1e-9 (error if the cap of
    /// 10_000 rows is hit first).
    Auto,
    Fixed(usize),
}

const AUTO_LOSS_TARGET: f64 = 1e-9;
const AUTO_ROW_CAP: usize = 10_000;

/// Label of a generalized coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    pub mu: f64,
    pub nu: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub varsigma: Complex64,
}

/// Truncated number-basis expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<Complex64>,
    /// Probability mass lost to truncation.
    pub loss: f64,
}

/// Photon-number statistics of a state with intensity u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStatistics {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    pub mandel_q: f64,
}

impl CoherentLabel {
    pub fn new(mu: f64, nu: f64, gamma: f64, sigma: f64, varsigma: Complex64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0 && mu <= 1.0) {
            return Err(Error::Domain(format!("mu must lie in (0, 1], got {mu}")));
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
        if !varsigma.re.is_finite() || !varsigma.im.is_finite() {
            return Err(Error::Domain(format!(
                "varsigma must be finite, got {varsigma}"
            )));
        }
        Ok(CoherentLabel {
            mu,
            nu,
            gamma,
            sigma,
            varsigma,
        })
    }

    /// Intensity u = |varsigma|^{2 sigma}.
    pub fn intensity(&self) -> f64 {
        self.varsigma.norm_sqr().powf(self.sigma)
    }

    /// varsigma^sigma, the stretched-case annihilation eigenvalue.
    pub fn eigenvalue(&self) -> Complex64 {
        self.varsigma.powf(self.sigma)
    }

    fn phase_step(&self) -> f64 {
        if self.varsigma == Complex64::new(0.0, 0.0) {
            0.0
        } else {
            self.sigma * self.varsigma.arg()
        }
    }
}

/// Build the truncated number-basis expansion of the state.
pub fn coherent_state(label: &CoherentLabel, trunc: Truncation) -> Result<FockVector> {
    coherent_state_capped(label, trunc, AUTO_ROW_CAP)
}

fn coherent_state_capped(
    label: &CoherentLabel,
    trunc: Truncation,
    cap: usize,
) -> Result<FockVector> {
    let u = label.intensity();
    let phase = label.phase_step();
    let rows = match trunc {
        Truncation::Fixed(n) => {
            if n == 0 {
                return Err(Error::Domain("truncation must keep at least one row".into()));
            }
            n
        }
        Truncation::Auto => cap,
    };
    let mut amplitudes = Vec::new();
    let mut mass = 0.0f64;
    let mut comp = 0.0f64;
    let mut loss = 1.0f64;
    for n in 0..rows {
        let p = pmf_core(label.mu, label.nu, label.gamma, u, n as u64)?;
        amplitudes.push(Complex64::from_polar(p.sqrt(), phase * n as f64));
        let t = mass + p;
        if mass.abs() >= p.abs() {
            comp += (mass - t) + p;
        } else {
            comp += (p - t) + mass;
        }
        mass = t;
        loss = (1.0 - (mass + comp)).max(0.0);
        if matches!(trunc, Truncation::Auto) && loss <= AUTO_LOSS_TARGET {
            break;
        }
    }
    if matches!(trunc, Truncation::Auto) && loss > AUTO_LOSS_TARGET {
        return Err(Error::Truncation { loss });
    }
    Ok(FockVector { amplitudes, loss })
}

/// Stretched displacement of the vacuum (mu = nu = gamma = 1):
/// c_n = e^{-u/2} alpha^n / sqrt(n!) with alpha = varsigma^sigma.
pub fn stretched_coherent(
    sigma: f64,
    varsigma: Complex64,
    trunc: Truncation,
) -> Result<FockVector> {
    let label = CoherentLabel::new(1.0, 1.0, 1.0, sigma, varsigma)?;
    let u = label.intensity();
    let alpha = label.eigenvalue();
    let rows = match trunc {
        Truncation::Fixed(n) => {
            if n == 0 {
                return Err(Error::Domain("truncation must keep at least one row".into()));
            }
            n
        }
        Truncation::Auto => AUTO_ROW_CAP,
    };
    let mut amplitudes = Vec::new();
    let mut c = Complex64::new((-0.5 * u).exp(), 0.0);
    let mut mass = 0.0f64;
    let mut loss = 1.0f64;
    for n in 0..rows {
        amplitudes.push(c);
        mass += c.norm_sqr();
        loss = (1.0 - mass).max(0.0);
        if matches!(trunc, Truncation::Auto) && loss <= AUTO_LOSS_TARGET {
            break;
        }
        c *= alpha / ((n as f64 + 1.0).sqrt());
    }
    if matches!(trunc, Truncation::Auto) && loss > AUTO_LOSS_TARGET {
        return Err(Error::Truncation { loss });
    }
    Ok(FockVector { amplitudes, loss })
}

impl FockVector {
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// <self | other>.
    pub fn overlap(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Photon-number moment sum_n n^j |c_n|^2 over the kept rows.
    pub fn number_moment(&self, j: u32) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| (n as f64).powi(j as i32) * c.norm_sqr())
            .sum()
    }

    /// l2 residual of (a - alpha) applied to the state, boundary row
    /// excluded (the cut row is a truncation artifact, not a property of
    /// the state).
    pub fn annihilation_residual(&self, alpha: Complex64) -> f64 {
        let n = self.amplitudes.len();
        if n < 2 {
            return 0.0;
        }
        (0..n - 1)
            .map(|k| {
                let lowered = ((k + 1) as f64).sqrt() * self.amplitudes[k + 1];
                (lowered - alpha * self.amplitudes[k]).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Closed-form Mandel parameter Q = <(Delta n)^2>/<n> - 1, linear in the
/// intensity:
/// Q = [ (gamma)_2 Gamma(mu+nu) / (gamma Gamma(2 mu + nu))
///       - gamma Gamma(nu) / Gamma(mu+nu) ] u.
pub fn mandel_q(label: &CoherentLabel) -> Result<f64> {
    let u = label.intensity();
    let slope = special::pochhammer(label.gamma, 2)? * special::gamma_fn(label.mu + label.nu)?
        / (label.gamma * special::gamma_fn(2.0 * label.mu + label.nu)?)
        - label.gamma * special::gamma_fn(label.nu)? / special::gamma_fn(label.mu + label.nu)?;
    Ok(slope * u)
}

/// Mean, variance, and Mandel Q from the closed-form moments.
pub fn photon_statistics(label: &CoherentLabel) -> Result<PhotonStatistics> {
    let u = label.intensity();
    let (mean, second_moment) = moments_at_intensity(label.mu, label.nu, label.gamma, u)?;
    let variance = second_moment - mean * mean;
    let mandel_q = if mean == 0.0 {
        0.0
    } else {
        variance / mean - 1.0
    };
    Ok(PhotonStatistics {
        mean,
        second_moment,
        variance,
        mandel_q,
    })
}

/// Diagonal free-evolution autocorrelation
/// <state(0) | state(t)> = Gamma(nu) E[gamma; mu, nu](u (e^{-i omega t} - 1)).
pub fn evolution_diagonal(label: &CoherentLabel, omega: f64, t: f64) -> Result<Complex64> {
    if !omega.is_finite() || !t.is_finite() {
        return Err(Error::Domain(format!(
            "omega and t must be finite, got ({omega}, {t})"
        )));
    }
    let u = label.intensity();
    let z = u * (Complex64::new(0.0, -omega * t).exp() - 1.0);
    let r = ml3_eval(
        &MLQuery::new(label.mu, label.nu, label.gamma, z),
        &crate::counting::pmf_policy(),
    )?;
    Ok(special::gamma_fn(label.nu)? * r.value)
}

/// Photon-number moment of the full state through the Bell polynomial
/// bridge: sum_n n^j P(n; u) = B_j(u) for the label's parameter triple.
pub fn number_moment_closed(label: &CoherentLabel, j: u32) -> Result<f64> {
    bell_polynomial(label.mu, label.nu, label.gamma, label.intensity(), j)
}

/// Annihilation operator on the first `dim` number states.
pub fn annihilation_matrix(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Displacement operator exp(alpha a^+ - conj(alpha) a) on the first `dim`
/// number states. Rows near the cut are distorted by truncation; interior
/// blocks (roughly the first half) carry the operator faithfully.
pub fn displacement_operator(alpha: Complex64, dim: usize) -> Result<DMatrix<Complex64>> {
    if dim < 2 {
        return Err(Error::Domain("displacement needs at least two rows".into()));
    }
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
    }
    let a = annihilation_matrix(dim);
    let generator = a.adjoint() * alpha - &a * alpha.conj();
    Ok(generator.exp())
}
