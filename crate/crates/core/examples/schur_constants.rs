//! Schur-type constants: the LP value with a stationarity constraint, its
//! maximum over x0, and the closed-form candidates it should match.
//!
//! ```not_rust
//! cargo run -q --release --example schur_constants
//! ```

use extremal_poly::bounds::schur_p3_ratio;
use extremal_poly::chebyshev::{endpoint_deriv_f64, local_maxima_abs_deriv};
use extremal_poly::oracle::{lp_schur, schur_max};
use extremal_poly::zolotarev::theta_for_endpoint;

fn main() -> extremal_poly::Result<()> {
    for n in 3..=7 {
        let at1 = lp_schur(n, 1, 1.0, 1001)?.objective;
        println!("n = {n}: mu*_1(1) = {at1:.6}, n^2/2 = {}", n * n / 2);
    }
    println!();
    for n in 3..=6 {
        for k in 1..=n - 2 {
            let (x0, v) = schur_max(n, k, 1001)?;
            let peak = local_maxima_abs_deriv(n, k)?.last().map_or(0.0, |p| p.1);
            let (_, z) = theta_for_endpoint(n, k)?;
            println!(
                "n = {n}, k = {k}: max {v:.6} at x0 = {x0:+.4}; |T^(k)(omega)| = {peak:.6}, |Z^(k)(1)| = {:.6}, /T^(k)(1) = {:.4}",
                z.deriv_at(k, 1.0).abs(),
                v / endpoint_deriv_f64(n, k)
            );
        }
    }
    println!();
    for n in [5, 10, 20, 40] {
        println!("explicit endpoint ratio n = {n}: k=1 {:.4}, k=2 {:.4}", schur_p3_ratio(n, 1)?, schur_p3_ratio(n, 2)?);
    }
    Ok(())
}
