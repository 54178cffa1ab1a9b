//! Reproduce the half-line constants gamma_{n,k} for n = 4..15, each column
//! backed by a certified witness.
//!
//! ```not_rust
//! cargo run -q --release --example gamma_table
//! ```

use extremal_poly::bounds::alpha_table;
use extremal_poly::halfline::{default_m, gamma_row};

fn main() -> extremal_poly::Result<()> {
    print!("k\\n ");
    for n in 4..=15 {
        print!("{n:>6}");
    }
    println!();
    let mut cols = Vec::new();
    for n in 4..=15 {
        let m = default_m(n).expect("tabulated degree");
        let (cert, row) = gamma_row(n, m)?;
        assert!(cert.verified(), "witness for n = {n} not certified");
        cols.push(row);
    }
    for k in 1..=13 {
        print!("{k:>3} ");
        for (i, row) in cols.iter().enumerate() {
            let n = i + 4;
            match row.get(k - 1).filter(|_| k + 2 <= n) {
                Some(g) => {
                    let mark = if alpha_table(n, k)? <= *g { '*' } else { ' ' };
                    print!(" {:.2}{mark}", (g * 100.0).floor() / 100.0);
                }
                None => print!("      "),
            }
        }
        println!();
    }
    println!("* marks alpha_{{n,k}} <= gamma_{{n,k}}");
    Ok(())
}
