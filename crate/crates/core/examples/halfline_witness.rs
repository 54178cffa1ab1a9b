//! Build g = phi * T_{n+m} and certify that |g^{(n)}| peaks at x = 1.
//!
//! ```not_rust
//! cargo run -q --release --example halfline_witness -- 9 2
//! ```

use extremal_poly::halfline::{build_witness, gamma_formula, verify_max_at_endpoint};

fn main() -> extremal_poly::Result<()> {
    let mut args = std::env::args().skip(1).filter_map(|a| a.parse::<usize>().ok());
    let n = args.next().unwrap_or(9);
    let m = args.next().unwrap_or(2);

    let w = build_witness(n, m)?;
    println!("n = {n}, m = {m}, c_n = {:.6}", w.c_n);
    println!("g^(k)(1): {:?}", &w.g_deriv_at_1[..4.min(w.g_deriv_at_1.len())]);

    let cert = verify_max_at_endpoint(&w);
    println!("status {:?}, margin {:.4e}", cert.status, cert.margin);
    println!("sup |g^(n)| = {:.6e} at x = {:.6}", w.sup_gn, w.argmax);

    for k in 1..n - 1 {
        println!("gamma_{{{n},{k}}} = {:.4}", gamma_formula(n, k, m)?);
    }
    Ok(())
}
