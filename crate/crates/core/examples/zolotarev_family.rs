//! Sweep the Zolotarev family Z_n(., theta) from -sigma_n to sigma_n and
//! show how the regime, the alternation set and Z^{(k)}(1) move.
//!
//! ```not_rust
//! cargo run -q --example zolotarev_family -- 5
//! ```

use extremal_poly::chebyshev::sigma_n;
use extremal_poly::zolotarev::{solve_zolotarev, stretched_threshold, theta_for_endpoint};

fn main() -> extremal_poly::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let sn = sigma_n(n);
    println!("n = {n}, sigma_n = {sn}, stretched beyond |theta| >= {:.4}", stretched_threshold(n));

    for i in 0..=10 {
        let theta = sn * (-1.0 + i as f64 / 5.0);
        let z = solve_zolotarev(n, theta)?;
        let tau: Vec<String> = z.alternation.iter().map(|t| format!("{t:+.4}")).collect();
        println!(
            "theta {theta:>10.2}  {:<11} Z'(1) = {:>9.4}  beta = {:<10} tau = [{}]",
            format!("{:?}", z.regime),
            z.deriv_at(1, 1.0),
            z.beta.map_or("-".into(), |b| format!("{b:+.4}")),
            tau.join(", ")
        );
    }

    for k in 1..n - 1 {
        let (theta, z) = theta_for_endpoint(n, k)?;
        println!("k = {k}: Z^(k+1)(1) = 0 at theta = {theta:.6}, Z^(k)(1) = {:.6}", z.deriv_at(k, 1.0));
    }
    Ok(())
}
