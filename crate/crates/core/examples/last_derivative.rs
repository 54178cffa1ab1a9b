//! The k = n - 1 case: interpolation remainder, the c1 <= c2 comparison, and
//! the LP cross-check.
//!
//! ```not_rust
//! cargo run -q --release --example last_derivative -- 4
//! ```

use extremal_poly::chebyshev::sigma_n;
use extremal_poly::oracle::{last_derivative_case, stretched_t};

fn main() -> extremal_poly::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let sn = sigma_n(n);
    println!("{:>9} {:<11} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}", "sigma", "regime", "D", "c1", "c2", "t", "interp", "lp rel");
    for i in 0..=8 {
        let sigma = sn * i as f64 / 8.0;
        let r = last_derivative_case(n, sigma, 1001)?;
        println!(
            "{sigma:>9.2} {:<11} {:>9.4} {:>9.6} {:>9.6} {:>9} {:>9.1e} {:>9.1e}",
            format!("{:?}", r.regime),
            r.d_value,
            r.c1,
            r.c2,
            stretched_t(n, sigma).map_or("-".into(), |t| format!("{t:.4}")),
            r.interpolation_error,
            r.oracle_rel_error()
        );
    }
    Ok(())
}
