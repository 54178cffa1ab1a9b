//! Solve the pointwise extremal problem as a discretized LP and compare with
//! the Zolotarev value at the endpoint.
//!
//! ```not_rust
//! cargo run -q --release --example lp_oracle
//! ```

use extremal_poly::chebyshev::sigma_n;
use extremal_poly::oracle::lp_pointwise;
use extremal_poly::zolotarev::solve_zolotarev;

fn main() -> extremal_poly::Result<()> {
    let (n, k) = (5, 2);
    let sn = sigma_n(n);
    println!("{:>8} {:>6} {:>14} {:>14} {:>8} {:>6}", "sigma", "x", "m_k(x)", "Z^(k)(1)", "active", "grid");
    for q in [0.0, 0.25, 0.5, 1.0] {
        let z = solve_zolotarev(n, q * sn)?;
        for x in [0.5, 0.9, 1.0] {
            let s = lp_pointwise(n, k, x, q * sn, 1001)?;
            println!(
                "{:>8.1} {x:>6.2} {:>14.8} {:>14.8} {:>8} {:>6}",
                q * sn,
                s.objective,
                z.deriv_at(k, 1.0),
                s.active.len(),
                s.grid_size
            );
        }
    }
    Ok(())
}
