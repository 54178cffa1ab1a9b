//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//!     cargo test -p extremal-poly --test acceptance

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use extremal_poly::bounds::{
    alpha_schur, alpha_table, beta_2, gamma_floor, in_claimed_range, karlin_polynomial_check, sigma_grid,
};
use extremal_poly::chebyshev::{cheb_deriv_vector, endpoint_deriv_f64, local_maxima_abs_deriv, omega, sigma_n};
use extremal_poly::cli::{run, CommandKind, Report, RunConfig};
use extremal_poly::exact::{ratio_to_f64, RationalPoly};
use extremal_poly::halfline::{build_witness, gamma_gT, verify_max_at_endpoint, CertStatus};
use extremal_poly::oracle::{karlin_profile, last_derivative_case, lp_pointwise, lp_schur, schur_max, stretched_t, unit_grid};
use extremal_poly::zolotarev::{solve_zolotarev, theta_for_endpoint};

/// Printed tables hold two decimals truncated toward zero.
const TABLE_TOL: f64 = 0.005;
const TABLE_EPS: f64 = 1e-9;
const CLOSING_TABLE_TOL: f64 = 0.01;
const GAMMA_TIME: Duration = Duration::from_secs(5);
const ALPHA_TIME: Duration = Duration::from_secs(1);
const ZOLO_RESIDUAL: f64 = 1e-10;
const ZOLO_COEFF_TOL: f64 = 1e-10;
const ZOLO_TIME: Duration = Duration::from_secs(30);
const ORACLE_REL: f64 = 1e-5;
const MATORIN_REL: f64 = 1e-6;
const ORACLE_TIME: Duration = Duration::from_secs(120);
const SCHUR_REL: f64 = 1e-4;
const ANOMALY_X0_TOL: f64 = 1e-3;
const LAST_DERIV_CLOSED_FORM: f64 = 1e-10;
const GRID: usize = 1001;

const GAMMA_PRINTED: [[f64; 12]; 13] = [
    [0.87, 0.87, 0.87, 0.82, 0.82, 0.82, 0.82, 0.79, 0.79, 0.79, 0.80, 0.80],
    [0.79, 0.77, 0.77, 0.67, 0.67, 0.68, 0.68, 0.63, 0.63, 0.64, 0.64, 0.65],
    [0.0, 0.72, 0.70, 0.57, 0.57, 0.57, 0.57, 0.50, 0.51, 0.51, 0.52, 0.52],
    [0.0, 0.0, 0.66, 0.51, 0.49, 0.49, 0.49, 0.41, 0.41, 0.42, 0.42, 0.43],
    [0.0, 0.0, 0.0, 0.50, 0.45, 0.43, 0.43, 0.34, 0.34, 0.34, 0.35, 0.35],
    [0.0, 0.0, 0.0, 0.0, 0.46, 0.41, 0.39, 0.30, 0.29, 0.29, 0.29, 0.29],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.43, 0.38, 0.27, 0.26, 0.25, 0.25, 0.25],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.41, 0.27, 0.25, 0.23, 0.22, 0.22],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.31, 0.25, 0.22, 0.21, 0.20],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.29, 0.23, 0.20, 0.19],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.28, 0.22, 0.19],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.27, 0.20],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.26],
];

const ALPHA_PRINTED: [[f64; 12]; 13] = [
    [0.58, 0.55, 0.54, 0.53, 0.53, 0.52, 0.52, 0.52, 0.51, 0.51, 0.51, 0.51],
    [0.63, 0.48, 0.43, 0.40, 0.39, 0.38, 0.37, 0.36, 0.36, 0.36, 0.35, 0.35],
    [0.0, 0.63, 0.44, 0.37, 0.34, 0.32, 0.30, 0.30, 0.29, 0.28, 0.28, 0.28],
    [0.0, 0.0, 0.64, 0.42, 0.34, 0.30, 0.28, 0.26, 0.25, 0.24, 0.24, 0.23],
    [0.0, 0.0, 0.0, 0.65, 0.40, 0.32, 0.28, 0.25, 0.24, 0.22, 0.22, 0.21],
    [0.0, 0.0, 0.0, 0.0, 0.67, 0.40, 0.31, 0.26, 0.24, 0.22, 0.21, 0.20],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.68, 0.40, 0.30, 0.25, 0.22, 0.20, 0.19],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.69, 0.39, 0.29, 0.24, 0.21, 0.19],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.70, 0.39, 0.29, 0.24, 0.21],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.71, 0.39, 0.29, 0.23],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.72, 0.39, 0.28],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.73, 0.39],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.74],
];

/// Shaded cells: the largest proven `k` in each column `n = 4..15`.
const SHADED: [(usize, usize); 12] =
    [(4, 2), (5, 3), (6, 4), (7, 4), (8, 5), (9, 6), (10, 6), (11, 6), (12, 7), (13, 7), (14, 8), (15, 8)];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail.into())
    }
}

fn printed(table: &[[f64; 12]; 13], n: usize, k: usize) -> f64 {
    table[k - 1][n - 4]
}

fn table_run(command: CommandKind) -> Result<(Report, Duration), String> {
    let start = Instant::now();
    let report = run(&RunConfig::new(command)).map_err(|e| e.to_string())?;
    Ok((report, start.elapsed()))
}

fn cell_values(report: &Report) -> BTreeMap<(usize, usize), (f64, bool)> {
    report
        .rows
        .iter()
        .map(|r| ((r.n, r.k), (r.value.parse::<f64>().expect("numeric cell"), r.verdict == "proven")))
        .collect()
}

fn compare_table(report: &Report, table: &[[f64; 12]; 13], limit: Duration, took: Duration) -> Outcome {
    let cells = cell_values(report);
    let mut count = 0;
    for n in 4..=15 {
        for k in 1..=n - 2 {
            let p = printed(table, n, k);
            let (v, _) = *cells.get(&(n, k)).ok_or(format!("missing cell ({n},{k})"))?;
            check(
                (v - (p + TABLE_TOL)).abs() <= TABLE_TOL + TABLE_EPS,
                format!("({n},{k}): computed {v}, printed {p}"),
            )?;
            count += 1;
        }
    }
    check(cells.len() == count, format!("{} extra cells", cells.len() - count))?;
    check(took < limit, format!("took {took:?}"))?;
    Ok(format!("{count} cells, {took:.2?}"))
}

fn c1_gamma_table() -> Outcome {
    let (report, took) = table_run(CommandKind::TablesGamma)?;
    check(
        report.rows.iter().all(|r| r.provenance == "witness-verified"),
        "a cell is not witness-verified",
    )?;
    compare_table(&report, &GAMMA_PRINTED, GAMMA_TIME, took)
}

fn c2_alpha_table() -> Outcome {
    let (report, took) = table_run(CommandKind::TablesAlpha)?;
    compare_table(&report, &ALPHA_PRINTED, ALPHA_TIME, took)
}

fn c3_verdict_grid() -> Outcome {
    let (report, _) = table_run(CommandKind::TablesGamma)?;
    let cells = cell_values(&report);
    let shaded: BTreeMap<usize, usize> = SHADED.iter().copied().collect();
    for (&(n, k), &(_, proven)) in &cells {
        let direct = alpha_table(n, k).unwrap() <= gamma_gT(n, k, extremal_poly::halfline::default_m(n).unwrap()).unwrap();
        check(proven == direct, format!("({n},{k}): column disagrees with alpha <= gamma"))?;
        check(proven == (k <= shaded[&n]), format!("({n},{k}): shading mismatch"))?;
        if n <= 11 {
            check(proven == in_claimed_range(n, k), format!("({n},{k}): claimed range mismatch"))?;
        }
    }
    let proven = cells.values().filter(|c| c.1).count();
    Ok(format!("{proven} proven of {} cells", cells.len()))
}

fn c4_closing_table() -> Outcome {
    let close = |v: f64, p: f64| (v - p).abs() <= CLOSING_TABLE_TOL;
    let a42 = alpha_schur(4, 2).unwrap();
    let g42 = gamma_gT(4, 2, 1).unwrap();
    check(close(a42, 0.72), format!("alpha_42 = {a42}"))?;
    check(close(g42, 0.79), format!("gamma_42 = {g42}"))?;
    for n in 5..=15 {
        let m = extremal_poly::halfline::default_m(n).unwrap();
        let a = alpha_schur(n, 2).unwrap();
        let g = gamma_gT(n, 2, m).unwrap();
        check(a <= 0.50 + CLOSING_TABLE_TOL, format!("alpha_{n},2 = {a}"))?;
        check(g >= 0.63 - CLOSING_TABLE_TOL, format!("gamma_{n},2 = {g}"))?;
        check(beta_2(n) <= 0.60, format!("beta_{n},2"))?;
    }
    for n in 16..=30 {
        let (a, b, g) = (alpha_schur(n, 2).unwrap(), beta_2(n), gamma_floor(n, 2).unwrap());
        check(
            b < 0.288 + CLOSING_TABLE_TOL && g >= 0.293 - CLOSING_TABLE_TOL && b < g,
            format!("n = {n}: beta {b}, gamma {g}"),
        )?;
        check(a <= 0.277 + CLOSING_TABLE_TOL, format!("alpha_{n},2 = {a}"))?;
    }
    Ok(format!("alpha_42 = {a42:.4}, gamma_42 = {g42:.4}"))
}

fn exact_cheb(n: usize, sign: f64) -> Vec<f64> {
    RationalPoly::chebyshev(n).coeffs().iter().map(|c| sign * ratio_to_f64(c)).collect()
}

fn coeff_gap(a: &[f64], b: &[f64]) -> f64 {
    (0..a.len().max(b.len()))
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn c5_zolotarev() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut solves = 0;
    for n in 2..=12 {
        let sn = sigma_n(n);
        for i in 0..41 {
            let theta = -sn + 2.0 * sn * i as f64 / 40.0;
            let z = solve_zolotarev(n, theta).map_err(|e| format!("n = {n}, theta = {theta}: {e}"))?;
            let r = z.equioscillation_residual();
            worst = worst.max(r);
            check(r <= ZOLO_RESIDUAL, format!("n = {n}, theta = {theta}: residual {r:e}"))?;
            solves += 1;
        }
        for (theta, want) in [(sn, exact_cheb(n, 1.0)), (-sn, exact_cheb(n, -1.0)), (0.0, exact_cheb(n - 1, 1.0))] {
            let got = solve_zolotarev(n, theta).map_err(|e| e.to_string())?.monomial_coeffs();
            let gap = coeff_gap(&got, &want);
            check(gap <= ZOLO_COEFF_TOL, format!("n = {n}, theta = {theta}: coefficient gap {gap:e}"))?;
        }
    }
    let took = start.elapsed();
    check(took < ZOLO_TIME, format!("took {took:?}"))?;
    Ok(format!("{solves} solves, worst residual {worst:.1e}, {took:.2?}"))
}

fn c6_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        let sn = sigma_n(n);
        for k in 1..n {
            for i in 0..11 {
                let sigma = sn * i as f64 / 10.0;
                let lp = lp_pointwise(n, k, 1.0, sigma, GRID).map_err(|e| e.to_string())?.objective;
                let z = solve_zolotarev(n, sigma).map_err(|e| e.to_string())?.deriv_at(k, 1.0);
                let rel = (lp - z).abs() / z.abs();
                worst = worst.max(rel);
                check(rel <= ORACLE_REL, format!("n = {n}, k = {k}, sigma = {sigma}: rel {rel:e}"))?;
            }
            let m = lp_pointwise(n, k, 1.0, sn, GRID).map_err(|e| e.to_string())?.objective;
            let t = endpoint_deriv_f64(n, k);
            check((m - t).abs() <= MATORIN_REL * t, format!("endpoint n = {n}, k = {k}: {m} vs {t}"))?;
        }
    }
    let took = start.elapsed();
    check(took < ORACLE_TIME, format!("took {took:?}"))?;
    Ok(format!("worst rel {worst:.1e}, {took:.2?}"))
}

fn c7_karlin_profile() -> Outcome {
    let xs = unit_grid(101);
    let mut count = 0;
    for n in 2..=6 {
        for k in 1..n {
            for q in [0.25, 0.5, 0.75, 1.0] {
                let sigma = q * sigma_n(n);
                let p = karlin_profile(n, k, sigma, &xs, GRID).map_err(|e| e.to_string())?;
                check(
                    p.max_at_endpoint,
                    format!("n = {n}, k = {k}, sigma = {sigma}: max {} at x = {}", p.grid_max, p.argmax),
                )?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} profiles peak at x = 1"))
}

fn c8_schur() -> Outcome {
    for n in 3..=12 {
        let v = lp_schur(n, 1, 1.0, GRID).map_err(|e| e.to_string())?.objective;
        check(v < (n * n) as f64 / 2.0, format!("n = {n}: mu* = {v}"))?;
    }
    let mut worst: f64 = 0.0;
    for n in 3..=8 {
        for k in 1..=n - 2 {
            let (x0, v) = schur_max(n, k, GRID).map_err(|e| e.to_string())?;
            let w = omega(n, k).map_err(|e| e.to_string())?;
            let tw = cheb_deriv_vector(n, w).map_err(|e| e.to_string())?.get(k).abs();
            let (_, z) = theta_for_endpoint(n, k).map_err(|e| e.to_string())?;
            let want = tw.max(z.deriv_at(k, 1.0).abs());
            let rel = (v - want).abs() / want;
            worst = worst.max(rel);
            check(rel <= SCHUR_REL, format!("n = {n}, k = {k}: {v} at {x0} vs {want}"))?;
            if n == 3 {
                check(x0.abs() <= ANOMALY_X0_TOL, format!("n = 3 peak at x0 = {x0}"))?;
                let at1 = lp_schur(3, 1, 1.0, GRID).map_err(|e| e.to_string())?.objective;
                check(v > at1, "n = 3 interior value does not exceed the endpoint")?;
            }
        }
    }
    Ok(format!("worst rel {worst:.1e}"))
}

fn abs_deriv_at_omega(n: usize, k: usize) -> f64 {
    cheb_deriv_vector(n, omega(n, k).unwrap()).unwrap().get(k).abs()
}

fn c9_classical() -> Outcome {
    let mut count = 0;
    for n in 3..=20 {
        for k in 1..=n - 2 {
            let r = abs_deriv_at_omega(n, k) / endpoint_deriv_f64(n, k);
            check(r <= 1.0 / (2 * k + 1) as f64, format!("first: n = {n}, k = {k}, ratio {r}"))?;
            count += 1;
        }
    }
    for n in 5..=20 {
        let r = abs_deriv_at_omega(n, 1) / endpoint_deriv_f64(n, 1);
        check(r <= 0.25, format!("second: n = {n}, ratio {r}"))?;
        count += 1;
    }
    for n in 10..=30 {
        let r = abs_deriv_at_omega(n, 2) / endpoint_deriv_f64(n, 2);
        check(r <= 8.0 / 55.0, format!("third: n = {n}, ratio {r}"))?;
        count += 1;
    }
    check(
        local_maxima_abs_deriv(7, 2).unwrap().last().unwrap().1 <= abs_deriv_at_omega(7, 2) * (1.0 + 1e-12),
        "omega is not the location of the largest interior maximum",
    )?;
    Ok(format!("{count} inequalities"))
}

fn c10_halfline() -> Outcome {
    let mut margins = Vec::new();
    for (m, ns) in [(1, 3..=6), (2, 7..=10), (3, 11..=14)] {
        for n in ns {
            let w = build_witness(n, m).map_err(|e| e.to_string())?;
            let c = verify_max_at_endpoint(&w);
            check(c.status == CertStatus::Verified && c.margin > 0.0, format!("(n, m) = ({n}, {m}): {:?}", c.status))?;
            margins.push(c.margin);
        }
    }
    for n in 3..=30 {
        let g1 = gamma_floor(n, 1).unwrap();
        let g2 = gamma_floor(n, 2).unwrap();
        check(g1 > 0.541 && g2 > 0.293, format!("n = {n}: gamma_floor {g1}, {g2}"))?;
    }
    let least = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("{} witnesses, least margin {least:.3e}", margins.len()))
}

fn c11_last_derivative() -> Outcome {
    let mut closed = 0;
    for n in 2..=6 {
        let sn = sigma_n(n);
        for i in 0..9 {
            let sigma = sn * i as f64 / 8.0;
            let r = last_derivative_case(n, sigma, GRID).map_err(|e| e.to_string())?;
            let at = format!("n = {n}, sigma = {sigma}");
            check(r.d_value > 0.0, format!("{at}: D = {}", r.d_value))?;
            check(r.c1_le_c2(), format!("{at}: c1 {} > c2 {}", r.c1, r.c2))?;
            check(r.oracle_rel_error() <= ORACLE_REL, format!("{at}: oracle rel {:e}", r.oracle_rel_error()))?;
            if let Some(t) = stretched_t(n, sigma) {
                let want = match n {
                    2 => Some(((1.0 + t) / 2.0, (1.0 + t) / 2.0)),
                    3 => Some(((2.0 + t) / 3.0, (2.0 + 2.0 * t) / 3.0)),
                    4 => Some(((2f64.sqrt() + 1.0) / 4.0 * (1.0 + t), (3.0 + 3.0 * t) / 4.0)),
                    _ => None,
                };
                if let Some((c1, c2)) = want {
                    check(
                        (r.c1 - c1).abs() <= LAST_DERIV_CLOSED_FORM && (r.c2 - c2).abs() <= LAST_DERIV_CLOSED_FORM,
                        format!("{at}: c1 {} vs {c1}, c2 {} vs {c2}", r.c1, r.c2),
                    )?;
                    closed += 1;
                }
            }
        }
    }
    Ok(format!("45 sigma points, {closed} closed-form matches"))
}

fn c12_polynomial_case() -> Outcome {
    let mut count = 0;
    let mut ks = BTreeSet::new();
    for n in 4..=15 {
        for k in 1..=n - 2 {
            for r in karlin_polynomial_check(n, k, &sigma_grid(n, 21)).map_err(|e| e.to_string())? {
                check(r.verdict(), format!("n = {n}, k = {k}, sigma = {:?}", r.sigma))?;
                count += 1;
            }
            ks.insert((n, k));
        }
    }
    Ok(format!("{count} comparisons over {} (n, k) pairs", ks.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("gamma table reproduction", c1_gamma_table),
        ("alpha table reproduction", c2_alpha_table),
        ("proven-cell grid", c3_verdict_grid),
        ("k = 2 constants", c4_closing_table),
        ("Zolotarev solver", c5_zolotarev),
        ("oracle equivalence", c6_oracle),
        ("endpoint profile", c7_karlin_profile),
        ("Schur constants", c8_schur),
        ("interior maxima of T_n^(k)", c9_classical),
        ("half-line witness", c10_halfline),
        ("last derivative case", c11_last_derivative),
        ("polynomial case comparison", c12_polynomial_case),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
