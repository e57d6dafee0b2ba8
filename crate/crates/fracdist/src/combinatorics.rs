//! Stirling partition numbers, their fractional generalization, and the
//! Bell-polynomial layer connecting them to the counting moments.
//!
//! The generalized array factorizes as
//!
//! ```text
//!     S[mu, nu, gamma](m, l) = Gamma(nu) (gamma)_l / Gamma(mu l + nu) * S(m, l)
//! ```
//!
//! with `S(m, l)` the classic Stirling number of the second kind, so the
//! classic array is the exact mu = nu = gamma = 1 slice. The prefactor is
//! formed from correctly rounded Gamma values and exact Pochhammer products,
//! which keeps that slice bit-exact through l = 18 (where l! stops being
//! exactly representable).

use crate::error::{Error, Result};
use crate::special::{gamma_fn, pochhammer};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Largest row for the exact integer triangle.
pub const CLASSIC_ORDER_LIMIT: u32 = 200;
/// Largest row for the real-valued generalized array and Bell polynomials.
pub const ORDER_LIMIT: u32 = 30;

fn check_order(m: u32, limit: u32) -> Result<()> {
    if m > limit {
        return Err(Error::Domain(format!(
            "order m = {m} exceeds the supported limit {limit}"
        )));
    }
    Ok(())
}

/// Row m of the classic Stirling triangle S(m, 0..=m), by the recurrence
/// S(m, l) = l S(m-1, l) + S(m-1, l-1).
pub fn classic_stirling_row(m: u32) -> Result<Vec<BigUint>> {
    check_order(m, CLASSIC_ORDER_LIMIT)?;
    let mut row: Vec<BigUint> = vec![BigUint::from(1u32)];
    for _ in 1..=m {
        let prev = row;
        let mut next = vec![BigUint::zero(); prev.len() + 1];
        for (l, v) in prev.iter().enumerate() {
            next[l] += v * l;
            next[l + 1] += v;
        }
        row = next;
    }
    Ok(row)
}

/// Classic Stirling number of the second kind S(m, l).
pub fn classic_stirling(m: u32, l: u32) -> Result<BigUint> {
    check_order(m, CLASSIC_ORDER_LIMIT)?;
    if l > m {
        return Ok(BigUint::zero());
    }
    Ok(classic_stirling_row(m)?[l as usize].clone())
}

/// Bell number B_m = sum_l S(m, l), exact.
pub fn bell_number(m: u32) -> Result<BigUint> {
    Ok(classic_stirling_row(m)?.iter().sum())
}

/// Column prefactor Gamma(nu) (gamma)_l / Gamma(mu l + nu).
fn column_prefactor(mu: f64, nu: f64, gamma: f64, l: u32) -> Result<f64> {
    Ok(gamma_fn(nu)? * pochhammer(gamma, l)? / gamma_fn(mu * l as f64 + nu)?)
}

/// Generalized Stirling number S[mu, nu, gamma](m, l).
pub fn frac_stirling(mu: f64, nu: f64, gamma: f64, m: u32, l: u32) -> Result<f64> {
    check_order(m, ORDER_LIMIT)?;
    if l > m {
        return Ok(0.0);
    }
    let classic = classic_stirling(m, l)?
        .to_f64()
        .ok_or_else(|| Error::Overflow {
            log2_magnitude: f64::INFINITY,
        })?;
    Ok(column_prefactor(mu, nu, gamma, l)? * classic)
}

/// Full generalized row S[mu, nu, gamma](m, 0..=m).
pub fn frac_stirling_row(mu: f64, nu: f64, gamma: f64, m: u32) -> Result<Vec<f64>> {
    check_order(m, ORDER_LIMIT)?;
    let classic = classic_stirling_row(m)?;
    let mut out = Vec::with_capacity(m as usize + 1);
    for (l, v) in classic.iter().enumerate() {
        let c = v.to_f64().ok_or(Error::Overflow {
            log2_magnitude: f64::INFINITY,
        })?;
        out.push(column_prefactor(mu, nu, gamma, l as u32)? * c);
    }
    Ok(out)
}

/// Generalized Bell polynomial B[mu, nu, gamma](x, m) = sum_l S(m, l) x^l.
/// Its value at the dimensionless intensity is the m-th counting moment.
pub fn bell_polynomial(mu: f64, nu: f64, gamma: f64, x: f64, m: u32) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("x must be >= 0, got {x}")));
    }
    let row = frac_stirling_row(mu, nu, gamma, m)?;
    // Horner over the row
    let mut acc = 0.0f64;
    for &s in row.iter().rev() {
        acc = acc * x + s;
    }
    Ok(acc)
}

/// Column generating functions at argument s together with their resummation:
/// returns the vector g_l = Gamma(nu) (gamma)_l (e^s - 1)^l / (l! Gamma(mu l + nu))
/// for l = 0..=l_max and the closed form
/// F = Gamma(nu) E[gamma; mu, nu](x (e^s - 1)), which equals sum_l x^l g_l.
pub fn stirling_generating_fns(
    mu: f64,
    nu: f64,
    gamma: f64,
    s: f64,
    x: f64,
    l_max: u32,
) -> Result<(Vec<f64>, f64)> {
    if !s.is_finite() || !x.is_finite() {
        return Err(Error::Domain("s and x must be finite".into()));
    }
    let w = s.exp_m1();
    let mut cols = Vec::with_capacity(l_max as usize + 1);
    let gnu = gamma_fn(nu)?;
    // w^l / l! by recurrence; the Gamma factors come fresh per column
    let mut wpow_over_fact = 1.0f64;
    for l in 0..=l_max {
        if l > 0 {
            wpow_over_fact *= w / l as f64;
        }
        cols.push(gnu * pochhammer(gamma, l)? * wpow_over_fact / gamma_fn(mu * l as f64 + nu)?);
    }
    let policy = crate::mlf::PrecisionPolicy::default();
    let (e, _) = crate::mlf::eval_real(mu, nu, gamma, x * w, &policy)?;
    Ok((cols, gnu * e))
}
