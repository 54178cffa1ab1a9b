//! Near-endpoint constants alpha_{n,k} = lambda_k (1/eta_k)^{k/n}, next to
//! the Schur-based variants used for k = 1, 2 at large n.
//!
//! ```not_rust
//! cargo run -q --example alpha_table
//! ```

use extremal_poly::bounds::{alpha_schur, alpha_table, beta_2, gamma_floor};

fn main() -> extremal_poly::Result<()> {
    for n in 4..=15 {
        let row: Vec<String> = (1..=n - 2)
            .map(|k| alpha_table(n, k).map(|a| format!("{:.2}", (a * 100.0).floor() / 100.0)))
            .collect::<Result<_, _>>()?;
        println!("n = {n:>2}: {}", row.join(" "));
    }
    println!();
    println!("{:>3} {:>8} {:>8} {:>8} {:>8} {:>8}", "n", "a1", "a2", "beta2", "g1", "g2");
    for n in [16, 20, 25, 30] {
        println!(
            "{n:>3} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            alpha_schur(n, 1)?,
            alpha_schur(n, 2)?,
            beta_2(n),
            gamma_floor(n, 1)?,
            gamma_floor(n, 2)?
        );
    }
    Ok(())
}
