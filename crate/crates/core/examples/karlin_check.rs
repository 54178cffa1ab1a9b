//! Check that the pointwise extremal value peaks at x = 1: first by the
//! closed-form bound comparison, then by an LP sweep over x.
//!
//! ```not_rust
//! cargo run -q --release --example karlin_check
//! ```

use extremal_poly::bounds::{karlin_polynomial_check, karlin_spline_check, sigma_grid};
use extremal_poly::chebyshev::sigma_n;
use extremal_poly::oracle::{karlin_profile, unit_grid};

fn main() -> extremal_poly::Result<()> {
    for n in [6, 10, 15] {
        for k in [1, n / 2, n - 2] {
            let reports = karlin_polynomial_check(n, k, &sigma_grid(n, 21))?;
            let worst = reports.iter().map(|r| r.a.max(r.a_star) / r.b).fold(0.0, f64::max);
            let spline = karlin_spline_check(n, k)?;
            println!(
                "n = {n:>2}, k = {k:>2}: worst max(A,A*)/B = {worst:.4}, spline {:?}",
                spline.status()
            );
        }
    }

    let xs = unit_grid(51);
    let p = karlin_profile(5, 2, 0.5 * sigma_n(5), &xs, 1001)?;
    println!("\nprofile n = 5, k = 2, sigma = sigma_n / 2");
    for (x, v) in p.points.iter().step_by(10) {
        println!("  x = {x:.2}  m = {v:.6}");
    }
    println!("max at x = {} (endpoint: {})", p.argmax, p.max_at_endpoint);
    Ok(())
}
