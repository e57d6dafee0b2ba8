//! Coherent states over the counting family: number-basis amplitudes
//! c_n = e^{i n sigma arg(varsigma)} sqrt(P(n; |varsigma|^{2 sigma})),
//! photon statistics with the Mandel Q parameter, and diagonal evolution.
//!
//! On the stretched slice mu = nu = gamma = 1 the state is an exact
//! eigenstate of the annihilation operator with eigenvalue varsigma^sigma.

use fracdist::{
    coherent_state, evolution_diagonal, photon_statistics, stretched_coherent, CoherentLabel,
    Truncation,
};
use num_complex::Complex64;

fn main() -> fracdist::Result<()> {
    let vs = Complex64::new(1.2, 0.9);

    println!("stretched slice, sigma = 0.7, varsigma = 1.2 + 0.9i:");
    let state = stretched_coherent(0.7, vs, Truncation::Auto)?;
    let alpha = vs.powf(0.7);
    println!("  rows kept {}, truncation loss {:.2e}", state.len(), state.loss);
    println!("  annihilation residual |(a - alpha)|psi>| = {:.3e}", state.annihilation_residual(alpha));
    println!("  <n> from amplitudes = {:.12}", state.number_moment(1));

    println!("\nphoton statistics as mu leaves the stretched slice (sigma = 0.7):");
    println!("  mu     <n>          variance     Mandel Q");
    for &mu in &[1.0, 0.9, 0.75, 0.6, 0.5] {
        let label = CoherentLabel::new(mu, mu, 1.0, 0.7, vs)?;
        let s = photon_statistics(&label)?;
        println!("  {mu:<5}  {:<11.8}  {:<11.8}  {:+.8}", s.mean, s.variance, s.mandel_q);
    }
    println!("  (Q = 0 is Poissonian light; Q > 0 is super-Poissonian bunching)");

    println!("\noverlap of neighboring labels, mu = 0.8, nu = gamma = 1:");
    let a = CoherentLabel::new(0.8, 1.0, 1.0, 0.7, vs)?;
    let b = CoherentLabel::new(0.8, 1.0, 1.0, 0.7, vs * 1.05)?;
    let sa = coherent_state(&a, Truncation::Auto)?;
    let sb = coherent_state(&b, Truncation::Auto)?;
    println!("  |<psi_a|psi_a>| = {:.12}", sa.overlap(&sa).norm());
    println!("  |<psi_a|psi_b>| = {:.12}", sa.overlap(&sb).norm());

    println!("\ndiagonal evolution <psi| e^{{-i omega t n}} |psi> at omega = 1:");
    for &t in &[0.0, 0.5, 1.0, 2.0] {
        let v = evolution_diagonal(&a, 1.0, t)?;
        println!("  t {t:<4} value {:+.10} {:+.10}i  modulus {:.10}", v.re, v.im, v.norm());
    }
    Ok(())
}
