//! Multiprecision backend for the series evaluator. Same recurrence as the
//! f64 path, run on MPFR floats at a caller-chosen precision, with the error
//! accounting done on binary exponents so it survives magnitudes far outside
//! the f64 range.

use num_complex::Complex64;
use rug::Float;

pub(crate) enum Outcome {
    Done {
        value: Complex64,
        /// Absolute error bound on `value` (truncation + rounding + final
        /// f64 conversion), already collapsed to f64.
        bound: f64,
        terms: usize,
        /// Working precision a clean rerun would need (meaningful when the
        /// run missed the tolerance).
        need_bits: f64,
        /// True when the run met the tolerance.
        ok: bool,
    },
    Budget {
        partial: Complex64,
        terms: usize,
    },
    /// The converged sum does not fit in f64.
    TooBig { log2_magnitude: f64 },
}

fn exp_of(x: &Float) -> Option<i64> {
    x.get_exp().map(|e| e as i64)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn series(
    mu: f64,
    nu: f64,
    gamma: f64,
    z: Complex64,
    prec: u32,
    tol: f64,
    max_terms: usize,
    tolbits: i64,
) -> Outcome {
    let zr = Float::with_val(prec, z.re);
    let zi = Float::with_val(prec, z.im);
    let zmod = z.norm();
    let mu_f = Float::with_val(prec, mu);
    let nu_f = Float::with_val(prec, nu);
    let gamma_f = Float::with_val(prec, gamma);

    let mut lg_lo = Float::with_val(prec, &nu_f).ln_gamma();
    let mut lgmax = lg_lo.to_f64().abs();
    let mut tr = Float::with_val(prec, -&lg_lo).exp();
    let mut ti = Float::with_val(prec, 0);
    let mut sr = Float::with_val(prec, 0);
    let mut si = Float::with_val(prec, 0);
    let mut abs_sum = Float::with_val(prec, 0);
    let mut max_exp = i64::MIN;
    let mut m = 0usize;

    loop {
        let amag = Float::with_val(prec, tr.clone().abs() + ti.clone().abs());
        if let Some(e) = exp_of(&amag) {
            if e > max_exp {
                max_exp = e;
            }
        }
        sr += &tr;
        si += &ti;
        abs_sum += &amag;

        let m1 = Float::with_val(prec, (m + 1) as f64);
        let arg_hi = mu_f.clone().mul_add(&m1, &nu_f);
        let lg_hi = arg_hi.ln_gamma();
        let lg_hi_abs = lg_hi.to_f64().abs();
        let gratio = Float::with_val(prec, &lg_lo - &lg_hi).exp();
        let coeff = Float::with_val(
            prec,
            (Float::with_val(prec, m as f64) + &gamma_f) / &m1,
        );
        let gratio_f = gratio.to_f64();
        let coeff_f = coeff.to_f64();
        let rbar = zmod * coeff_f.max(1.0) * gratio_f;

        let amag_exp = exp_of(&amag);
        let smag = Float::with_val(prec, sr.clone().abs() + si.clone().abs());
        let s_exp = exp_of(&smag);
        let tail_log2 = match amag_exp {
            None => f64::NEG_INFINITY,
            Some(ae) => {
                if rbar < 0.5 && rbar > 0.0 {
                    ae as f64 + (rbar / (1.0 - rbar)).log2()
                } else if rbar == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
        };
        // demand two extra bits from the tail so the combined bound below
        // can still clear the tolerance when rounding is negligible
        let converged = match s_exp {
            Some(se) => tail_log2 <= tol.log2() + (se - 1) as f64 - 2.0,
            None => tail_log2 == f64::NEG_INFINITY,
        };

        if converged {
            let terms = m + 1;
            let abs_exp = exp_of(&abs_sum).unwrap_or(i64::MIN / 2) as f64;
            let round_budget_log2 = (terms as f64 * (60.0 + 3.0 * lgmax)).log2();
            let round_log2 = abs_exp + round_budget_log2 - prec as f64;
            let mut bound_log2 = 1.0 + tail_log2.max(round_log2);
            let vr = sr.to_f64();
            let vi = si.to_f64();
            if !vr.is_finite() || !vi.is_finite() {
                return Outcome::TooBig {
                    log2_magnitude: s_exp.unwrap_or(2000) as f64,
                };
            }
            if vr == 0.0 && vi == 0.0 {
                if let Some(se) = s_exp {
                    // f64 conversion underflowed; widen the bound to cover it
                    bound_log2 = bound_log2.max((se + 1) as f64);
                }
            }
            let bound = if bound_log2 > 1020.0 {
                f64::INFINITY
            } else {
                bound_log2.exp2().max(f64::MIN_POSITIVE)
            };
            let (ok, need_bits) = match s_exp {
                Some(se) => (
                    bound_log2 <= tol.log2() + (se - 1) as f64,
                    abs_exp - (se - 1) as f64 + round_budget_log2 + tolbits as f64 + 4.0,
                ),
                None => (false, 2.0 * prec as f64),
            };
            return Outcome::Done {
                value: Complex64::new(vr, vi),
                bound,
                terms,
                need_bits,
                ok,
            };
        }

        if m + 1 >= max_terms {
            return Outcome::Budget {
                partial: Complex64::new(sr.to_f64(), si.to_f64()),
                terms: m + 1,
            };
        }

        let step = Float::with_val(prec, &gratio * &coeff);
        let p1 = Float::with_val(prec, &tr * &zr);
        let p2 = Float::with_val(prec, &ti * &zi);
        let p3 = Float::with_val(prec, &tr * &zi);
        let p4 = Float::with_val(prec, &ti * &zr);
        tr = Float::with_val(prec, &p1 - &p2);
        tr *= &step;
        ti = Float::with_val(prec, &p3 + &p4);
        ti *= &step;
        if lg_hi_abs > lgmax {
            lgmax = lg_hi_abs;
        }
        lg_lo = lg_hi;
        m += 1;
    }
}
