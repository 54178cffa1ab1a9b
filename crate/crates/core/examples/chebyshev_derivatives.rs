//! Derivatives of T_n: the full vector at a point, exact endpoint values,
//! and the largest interior peak of |T_n^{(k)}|.
//!
//! ```not_rust
//! cargo run -q --example chebyshev_derivatives -- 8
//! ```

use extremal_poly::chebyshev::{cheb_deriv_vector, endpoint_deriv, local_maxima_abs_deriv, omega};

fn main() -> extremal_poly::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);

    let v = cheb_deriv_vector(n, 0.5)?;
    println!("T_{n}^(m)(0.5), m = 0..={n}:");
    for m in 0..=n {
        println!("  m = {m:>2}  {:>16.6}", v.get(m));
    }
    println!("recurrence residual {:.2e}\n", v.recurrence_residual());

    println!("{:>3} {:>22} {:>10} {:>12} {:>8}", "k", "T^(k)(1)", "omega_k", "peak/T(1)", "1/(2k+1)");
    for k in 1..n.saturating_sub(1) {
        let at_one = endpoint_deriv(n, k);
        let w = omega(n, k)?;
        let peak = local_maxima_abs_deriv(n, k)?.last().map_or(0.0, |p| p.1);
        println!(
            "{k:>3} {:>22} {w:>10.6} {:>12.6} {:>8.4}",
            at_one.value,
            peak / at_one.to_f64(),
            1.0 / (2 * k + 1) as f64
        );
    }
    Ok(())
}
