//! The generalized Stirling layer S[mu, nu, gamma](m, l) and the Bell
//! polynomials B[mu, nu, gamma](x, m) = sum_l S(m, l) x^l that turn counting
//! moments into finite sums: <n^m> = B(u, m) at intensity u.
//!
//! At mu = nu = gamma = 1 the layer collapses to the classic second-kind
//! triangle and B(1, m) to the Bell numbers 1, 1, 2, 5, 15, 52, ...

use fracdist::combinatorics::{
    bell_number, bell_polynomial, classic_stirling_row, frac_stirling_row,
};
use fracdist::ParamSet;

fn main() -> fracdist::Result<()> {
    println!("classic second-kind triangle, rows 0..6:");
    for m in 0..=6u32 {
        let row: Vec<String> = classic_stirling_row(m)?.iter().map(|v| v.to_string()).collect();
        println!("  m = {m}: {}", row.join(" "));
    }

    println!("\nBell numbers via B(m) = sum_l S(m, l):");
    let bells: Vec<String> = (0..=8u32)
        .map(|m| bell_number(m).map(|b| b.to_string()))
        .collect::<fracdist::Result<_>>()?;
    println!("  {}", bells.join(", "));

    println!("\nfractional row m = 4 as (mu, nu, gamma) moves off the classic point:");
    for &(mu, nu, gamma) in &[(1.0, 1.0, 1.0), (0.9, 1.0, 1.0), (0.7, 1.2, 1.5), (0.5, 1.5, 2.0)] {
        let row = frac_stirling_row(mu, nu, gamma, 4)?;
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
        println!("  ({mu}, {nu}, {gamma}): {}", cells.join("  "));
    }

    println!("\nmoment bridge at mu = 0.7, nu = 1.2, gamma = 1.5, u = lambda t^sigma:");
    let params = ParamSet::new(0.7, 1.2, 1.5, 0.8, 0.9)?;
    let t = 2.5;
    let u = params.intensity(t)?;
    let table = params.pmf_table_with(t, 1e-14, 100_000)?;
    for m in 1..=4u32 {
        let direct: f64 = table
            .probs
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64).powi(m as i32) * p)
            .sum();
        println!(
            "  <n^{m}>: Stirling sum {:.12}  vs probability-weighted sum {:.12}",
            bell_polynomial(0.7, 1.2, 1.5, u, m)?,
            direct
        );
    }
    Ok(())
}
