//! Command-line front end. The binary is a thin wrapper around [`main_with_args`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{alpha_table, gamma_floor, karlin_polynomial_check, karlin_spline_check, sigma_grid, Status};
use crate::chebyshev::{local_maxima_abs_deriv, sigma_n};
use crate::error::{Error, Result};
use crate::halfline::{build_witness, default_m, gamma_formula, verify_max_at_endpoint, CertStatus};
use crate::oracle::{karlin_profile, lp_pointwise, lp_schur, schur_max, unit_grid};
use crate::zolotarev::{solve_zolotarev, theta_for_endpoint, Regime};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERIC: i32 = 70;

pub const THREADS_ENV: &str = "EXTREMAL_POLY_THREADS";

const CONFIG_HELP: &str = "\
CONFIG FILE
  --config FILE reads flat `key = value` lines; `#` starts a comment.
  Keys: n, k, sigma_points, grid_size, tolerance, format, output,
        theta, x, sigma, m.
  Flags override the file, which overrides built-in defaults.

ENVIRONMENT
  EXTREMAL_POLY_THREADS  worker threads for parameter sweeps.

EXIT STATUS
  0 all verdicts proven or explicitly unproven, 2 a verdict was falsified,
  64 usage error, 70 numerical failure.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    /// Half-line constants gamma_{n,k} with the proven column.
    TablesGamma,
    /// Near-endpoint constants alpha_{n,k} with the proven column.
    TablesAlpha,
    /// Bound comparisons on a sigma grid, plus an LP profile for small n.
    VerifyKarlin,
    /// Coefficients and alternation points of Z_n(., theta).
    Zolotarev,
    /// Schur constants from the LP oracle.
    Schur,
    /// Witness certificates for the half-line constants.
    Halfline,
    /// Single LP solves of the pointwise problem.
    Oracle,
}

#[derive(Debug, Parser)]
#[command(name = "extremal-poly", version, about = "Extremal polynomial constants and their verification", after_help = CONFIG_HELP)]
struct Cli {
    #[command(subcommand)]
    command: CommandKind,
    /// Degrees, e.g. `4..15`, `4..=15` or `6`.
    #[arg(long, global = true)]
    n: Option<String>,
    /// Derivative orders, same syntax as --n.
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    sigma_points: Option<usize>,
    /// LP constraint grid size (at least 101).
    #[arg(long, global = true)]
    grid_size: Option<usize>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Zolotarev parameter.
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Evaluation point for `oracle`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Bound on the n-th derivative for `oracle`.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    /// Degree excess for `halfline`.
    #[arg(long, global = true)]
    m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n_range: RangeInclusive<usize>,
    pub k_range: RangeInclusive<usize>,
    pub sigma_points: usize,
    pub grid_size: usize,
    pub tolerance: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub theta: Option<f64>,
    pub x: Option<f64>,
    pub sigma: Option<f64>,
    pub m: Option<usize>,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        let (n_range, k_range) = match command {
            CommandKind::TablesGamma | CommandKind::TablesAlpha => (4..=15, 1..=13),
            CommandKind::VerifyKarlin => (4..=8, 1..=6),
            CommandKind::Zolotarev => (5..=5, 1..=1),
            CommandKind::Schur => (3..=8, 1..=1),
            CommandKind::Halfline => (3..=15, 1..=2),
            CommandKind::Oracle => (4..=4, 1..=1),
        };
        RunConfig {
            command,
            n_range,
            k_range,
            sigma_points: 21,
            grid_size: 1001,
            tolerance: 1e-4,
            output: None,
            format: Format::Csv,
            theta: None,
            x: None,
            sigma: None,
            m: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.n_range.is_empty() || self.k_range.is_empty() {
            return bad("empty n or k range".into());
        }
        if self.grid_size < 101 {
            return bad(format!("grid size must be at least 101, got {}", self.grid_size));
        }
        if self.sigma_points == 0 {
            return bad("sigma_points must be positive".into());
        }
        Ok(())
    }
}

/// Parses `a..b` and `a..=b` (both inclusive) or a single integer.
pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let s = s.trim();
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad integer {t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        Ok(parse(a)?..=parse(b)?)
    } else {
        let v = parse(s)?;
        Ok(v..=v)
    }
}

fn parse_config_file(path: &Path) -> std::result::Result<HashMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), lineno + 1))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn build_config(cli: Cli) -> std::result::Result<RunConfig, String> {
    let mut cfg = RunConfig::new(cli.command);
    let file = match &cli.config {
        Some(p) => parse_config_file(p)?,
        None => HashMap::new(),
    };
    fn num<T: std::str::FromStr>(key: &str, v: &str) -> std::result::Result<T, String>
    where
        T::Err: std::fmt::Display,
    {
        v.parse().map_err(|e| format!("config key {key}: {e}"))
    }
    for (key, v) in &file {
        match key.as_str() {
            "n" => cfg.n_range = parse_range(v)?,
            "k" => cfg.k_range = parse_range(v)?,
            "sigma_points" => cfg.sigma_points = num(key, v)?,
            "grid_size" => cfg.grid_size = num(key, v)?,
            "tolerance" => cfg.tolerance = num(key, v)?,
            "format" => cfg.format = Format::from_str(v, true)?,
            "output" => cfg.output = Some(PathBuf::from(v)),
            "theta" => cfg.theta = Some(num(key, v)?),
            "x" => cfg.x = Some(num(key, v)?),
            "sigma" => cfg.sigma = Some(num(key, v)?),
            "m" => cfg.m = Some(num(key, v)?),
            other => return Err(format!("unknown config key {other:?}")),
        }
    }
    if let Some(n) = &cli.n {
        cfg.n_range = parse_range(n)?;
    }
    if let Some(k) = &cli.k {
        cfg.k_range = parse_range(k)?;
    }
    if let Some(v) = cli.sigma_points {
        cfg.sigma_points = v;
    }
    if let Some(v) = cli.grid_size {
        cfg.grid_size = v;
    }
    if let Some(v) = cli.tolerance {
        cfg.tolerance = v;
    }
    if let Some(v) = cli.format {
        cfg.format = v;
    }
    if let Some(v) = cli.output {
        cfg.output = Some(v);
    }
    cfg.theta = cli.theta.or(cfg.theta);
    cfg.x = cli.x.or(cfg.x);
    cfg.sigma = cli.sigma.or(cfg.sigma);
    cfg.m = cli.m.or(cfg.m);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// One output row. `verdict` is `proven`, `unproven`, `falsified`, or a
/// descriptive tag for rows that carry no claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub n: usize,
    pub k: usize,
    pub sigma_or_m: String,
    pub value: String,
    pub bound_kind: String,
    pub verdict: String,
    pub provenance: String,
}

/// Six significant digits, plain notation for moderate magnitudes.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (5 - mag).max(0) as usize, x)
    } else {
        format!("{x:.5e}")
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Proven => "proven",
        Status::Falsified => "falsified",
        Status::Unproven => "unproven",
    }
}

fn claim(ok: bool) -> String {
    if ok { "proven" } else { "falsified" }.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub rows: Vec<Row>,
    /// Extra lines for the pretty format (e.g. table grids).
    #[serde(skip)]
    pub pretty: Option<String>,
    /// Plain CSV with a command-specific header, replacing the shared schema.
    #[serde(skip)]
    pub custom_csv: Option<String>,
}

impl Report {
    pub fn falsified(&self) -> bool {
        self.rows.iter().any(|r| r.verdict == "falsified")
    }

    pub fn exit_code(&self) -> i32 {
        if self.falsified() {
            EXIT_FALSIFIED
        } else {
            EXIT_OK
        }
    }

    pub fn render(&self) -> Result<String> {
        match self.config.format {
            Format::Csv => {
                if let Some(c) = &self.custom_csv {
                    return Ok(c.clone());
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &self.rows {
                    w.serialize(r).map_err(|e| Error::InvalidArgument(e.to_string()))?;
                }
                if self.rows.is_empty() {
                    w.write_record(["n", "k", "sigma_or_m", "value", "bound_kind", "verdict", "provenance"])
                        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("csv is utf-8"))
            }
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.rows).expect("rows serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Pretty => Ok(match &self.pretty {
                Some(p) => p.clone(),
                None => pretty_rows(&self.rows),
            }),
        }
    }
}

fn pretty_rows(rows: &[Row]) -> String {
    let head = ["n", "k", "sigma_or_m", "value", "bound_kind", "verdict", "provenance"];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.n.to_string(),
                r.k.to_string(),
                r.sigma_or_m.clone(),
                r.value.clone(),
                r.bound_kind.clone(),
                r.verdict.clone(),
                r.provenance.clone(),
            ]
        })
        .collect();
    let mut width: Vec<usize> = head.iter().map(|h| h.len()).collect();
    for c in &cells {
        for (w, s) in width.iter_mut().zip(c) {
            *w = (*w).max(s.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, items: &[&str]| {
        let parts: Vec<String> = items.iter().zip(&width).map(|(s, w)| format!("{s:>w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &head);
    for c in &cells {
        let refs: Vec<&str> = c.iter().map(String::as_str).collect();
        line(&mut out, &refs);
    }
    out
}

/// `k` rows by `n` columns, `*` marking proven cells.
fn pretty_grid(title: &str, cfg: &RunConfig, cells: &HashMap<(usize, usize), (f64, bool)>) -> String {
    let mut out = format!("{title}  (* = proven)\n");
    let _ = write!(out, "{:>4}", "k\\n");
    for n in cfg.n_range.clone() {
        let _ = write!(out, "{n:>7}");
    }
    out.push('\n');
    for k in cfg.k_range.clone() {
        let _ = write!(out, "{k:>4}");
        for n in cfg.n_range.clone() {
            match cells.get(&(n, k)) {
                Some((v, p)) => {
                    let _ = write!(out, "{:>6.2}{}", (v * 100.0).floor() / 100.0, if *p { '*' } else { ' ' });
                }
                None => out.push_str("       "),
            }
        }
        out.push('\n');
    }
    out
}

fn table_cells(cfg: &RunConfig) -> Vec<(usize, usize)> {
    cfg.n_range
        .clone()
        .flat_map(|n| cfg.k_range.clone().filter(move |&k| k >= 1 && k + 2 <= n).map(move |k| (n, k)))
        .collect()
}

struct GammaCell {
    n: usize,
    k: usize,
    m: Option<usize>,
    gamma: f64,
    certified: Option<CertStatus>,
    proven: bool,
}

fn gamma_cells(cfg: &RunConfig) -> Result<Vec<GammaCell>> {
    let ns: Vec<usize> = cfg.n_range.clone().collect();
    let certs: HashMap<usize, CertStatus> = ns
        .par_iter()
        .filter_map(|&n| default_m(n).map(|m| (n, m)))
        .map(|(n, m)| build_witness(n, m).map(|w| (n, verify_max_at_endpoint(&w).status)))
        .collect::<Result<_>>()?;
    table_cells(cfg)
        .into_iter()
        .map(|(n, k)| {
            let m = default_m(n);
            let gamma = match m {
                Some(m) => gamma_formula(n, k, m)?,
                None => gamma_floor(n, k)?,
            };
            let proven = alpha_table(n, k)? <= gamma;
            Ok(GammaCell { n, k, m, gamma, certified: certs.get(&n).copied(), proven })
        })
        .collect()
}

fn tables_gamma(cfg: &RunConfig) -> Result<Report> {
    let cells = gamma_cells(cfg)?;
    let mut grid = HashMap::new();
    let mut rows = Vec::new();
    for c in &cells {
        grid.insert((c.n, c.k), (c.gamma, c.proven));
        let (provenance, verdict) = match c.certified {
            Some(CertStatus::Verified) => ("witness-verified", if c.proven { "proven" } else { "unproven" }),
            Some(CertStatus::Failed) => ("witness-verified", "falsified"),
            Some(CertStatus::Inconclusive) => {
                return Err(Error::WitnessNotCertified {
                    n: c.n,
                    m: c.m.unwrap_or(0),
                    detail: "inconclusive certificate".into(),
                })
            }
            None => ("closed-form", if c.proven { "proven" } else { "unproven" }),
        };
        rows.push(Row {
            n: c.n,
            k: c.k,
            sigma_or_m: c.m.map_or("floor".into(), |m| m.to_string()),
            value: fmt6(c.gamma),
            bound_kind: "gamma".into(),
            verdict: verdict.into(),
            provenance: provenance.into(),
        });
    }
    Ok(Report {
        pretty: Some(pretty_grid("gamma_{n,k}", cfg, &grid)),
        config: cfg.clone(),
        rows,
        custom_csv: None,
    })
}

fn tables_alpha(cfg: &RunConfig) -> Result<Report> {
    let cells = gamma_cells(cfg)?;
    let mut grid = HashMap::new();
    let mut rows = Vec::new();
    for c in &cells {
        let a = alpha_table(c.n, c.k)?;
        grid.insert((c.n, c.k), (a, c.proven));
        rows.push(Row {
            n: c.n,
            k: c.k,
            sigma_or_m: "sigma_n".into(),
            value: fmt6(a),
            bound_kind: "alpha".into(),
            verdict: if c.proven { "proven" } else { "unproven" }.into(),
            provenance: "closed-form".into(),
        });
    }
    Ok(Report {
        pretty: Some(pretty_grid("alpha_{n,k}", cfg, &grid)),
        config: cfg.clone(),
        rows,
        custom_csv: None,
    })
}

/// Largest degree for which `verify-karlin` also runs the LP profile.
pub const PROFILE_MAX_N: usize = 6;

fn verify_karlin(cfg: &RunConfig) -> Result<Report> {
    let mut rows = Vec::new();
    for n in cfg.n_range.clone() {
        for k in cfg.k_range.clone().filter(|&k| k >= 1 && k + 2 <= n) {
            let grid = sigma_grid(n, cfg.sigma_points);
            for r in karlin_polynomial_check(n, k, &grid)? {
                rows.push(Row {
                    n,
                    k,
                    sigma_or_m: fmt6(r.sigma.unwrap_or(f64::NAN)),
                    value: fmt6(r.a.max(r.a_star) / r.b),
                    bound_kind: "max(A,A*)/B".into(),
                    verdict: status_str(r.status()).into(),
                    provenance: "closed-form".into(),
                });
            }
            if n >= 4 {
                let r = karlin_spline_check(n, k)?;
                rows.push(Row {
                    n,
                    k,
                    sigma_or_m: "spline".into(),
                    value: fmt6(r.a.max(r.a_star) / r.b),
                    bound_kind: "max(A,alpha)/gamma".into(),
                    verdict: status_str(r.status()).into(),
                    provenance: if default_m(n).is_some() { "witness-verified" } else { "closed-form" }.into(),
                });
            }
            if n <= PROFILE_MAX_N {
                let xs = unit_grid(101);
                let profiles = grid
                    .par_iter()
                    .map(|&s| karlin_profile(n, k, s, &xs, cfg.grid_size))
                    .collect::<Result<Vec<_>>>()?;
                for p in profiles {
                    rows.push(Row {
                        n,
                        k,
                        sigma_or_m: fmt6(p.sigma),
                        value: fmt6(p.grid_max / p.endpoint_value),
                        bound_kind: "profile_max/endpoint".into(),
                        verdict: claim(p.max_at_endpoint),
                        provenance: "lp-oracle".into(),
                    });
                }
            }
        }
    }
    Ok(Report { config: cfg.clone(), rows, pretty: None, custom_csv: None })
}

fn zolotarev_cmd(cfg: &RunConfig) -> Result<Report> {
    let theta = cfg.theta.ok_or_else(|| Error::InvalidArgument("zolotarev needs --theta".into()))?;
    let mut rows = Vec::new();
    let mut pretty = String::new();
    for n in cfg.n_range.clone() {
        let z = solve_zolotarev(n, theta)?;
        let provenance = if z.regime == Regime::Proper { "newton" } else { "closed-form" };
        let regime = serde_json::to_value(z.regime).expect("enum").as_str().unwrap_or("").to_string();
        let _ = writeln!(pretty, "n = {n}, theta = {}, regime = {regime}", fmt6(theta));
        let mono = z.monomial_coeffs();
        for (j, c) in mono.iter().enumerate() {
            let c = if c.abs() < 1e-12 { 0.0 } else { *c };
            let _ = writeln!(pretty, "  x^{j}: {}", fmt6(c));
            rows.push(Row {
                n,
                k: j,
                sigma_or_m: fmt6(theta),
                value: fmt6(c),
                bound_kind: "monomial_coeff".into(),
                verdict: regime.clone(),
                provenance: provenance.into(),
            });
        }
        for (i, t) in z.alternation.iter().enumerate() {
            let t = &if t.abs() < 1e-12 { 0.0 } else { *t };
            let _ = writeln!(pretty, "  tau_{}: {}", i + 1, fmt6(*t));
            rows.push(Row {
                n,
                k: i + 1,
                sigma_or_m: fmt6(theta),
                value: fmt6(*t),
                bound_kind: "alternation_point".into(),
                verdict: regime.clone(),
                provenance: provenance.into(),
            });
        }
    }
    Ok(Report { config: cfg.clone(), rows, pretty: Some(pretty), custom_csv: None })
}

fn schur_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut rows = Vec::new();
    for n in cfg.n_range.clone() {
        for k in cfg.k_range.clone().filter(|&k| k >= 1 && k < n) {
            let at1 = lp_schur(n, k, 1.0, cfg.grid_size)?.objective;
            let verdict = if k == 1 { claim(at1 < (n * n) as f64 / 2.0) } else { "value".into() };
            rows.push(Row {
                n,
                k,
                sigma_or_m: "x0=1".into(),
                value: fmt6(at1),
                bound_kind: "mu_star".into(),
                verdict,
                provenance: "lp-oracle".into(),
            });
            if k + 2 <= n {
                let (x0, v) = schur_max(n, k, cfg.grid_size)?;
                let peak = local_maxima_abs_deriv(n, k)?.last().expect("nonempty").1;
                let (_, z) = theta_for_endpoint(n, k)?;
                let expect = peak.max(z.deriv_at(k, 1.0).abs());
                rows.push(Row {
                    n,
                    k,
                    sigma_or_m: format!("x0={}", fmt6(x0)),
                    value: fmt6(v),
                    bound_kind: "mu_star_max".into(),
                    verdict: claim((v - expect).abs() <= cfg.tolerance * expect),
                    provenance: "lp-oracle".into(),
                });
            }
        }
    }
    Ok(Report { config: cfg.clone(), rows, pretty: None, custom_csv: None })
}

fn halfline_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut rows = Vec::new();
    let ns: Vec<usize> = cfg.n_range.clone().collect();
    let certs = ns
        .par_iter()
        .filter_map(|&n| cfg.m.or(default_m(n)).map(|m| (n, m)))
        .map(|(n, m)| build_witness(n, m).map(|w| verify_max_at_endpoint(&w)))
        .collect::<Result<Vec<_>>>()?;
    for c in certs {
        let verdict = match c.status {
            CertStatus::Verified => "proven",
            CertStatus::Failed => "falsified",
            CertStatus::Inconclusive => "unproven",
        };
        rows.push(Row {
            n: c.n,
            k: c.n,
            sigma_or_m: c.m.to_string(),
            value: fmt6(c.margin),
            bound_kind: "witness_margin".into(),
            verdict: verdict.into(),
            provenance: "witness-verified".into(),
        });
    }
    for n in cfg.n_range.clone() {
        for k in cfg.k_range.clone().filter(|&k| k >= 1 && k < n) {
            let g = gamma_floor(n, k)?;
            rows.push(Row {
                n,
                k,
                sigma_or_m: "floor".into(),
                value: fmt6(g),
                bound_kind: "gamma_floor".into(),
                verdict: claim(g > (2.0 / std::f64::consts::E).powi(2 * k as i32)),
                provenance: "closed-form".into(),
            });
        }
    }
    Ok(Report { config: cfg.clone(), rows, pretty: None, custom_csv: None })
}

#[derive(Debug, Serialize)]
struct OracleRow {
    n: usize,
    k: usize,
    x: String,
    objective: String,
    n_active: usize,
}

fn oracle_cmd(cfg: &RunConfig) -> Result<Report> {
    let x = cfg.x.unwrap_or(1.0);
    let mut rows = Vec::new();
    let mut plain = Vec::new();
    for n in cfg.n_range.clone() {
        let sigma = cfg.sigma.unwrap_or_else(|| sigma_n(n)).min(sigma_n(n));
        for k in cfg.k_range.clone().filter(|&k| k >= 1 && k <= n) {
            let s = lp_pointwise(n, k, x, sigma, cfg.grid_size)?;
            let z = solve_zolotarev(n, sigma)?;
            let verdict = if x == 1.0 {
                let zv = z.deriv_at(k, 1.0);
                claim((s.objective - zv).abs() <= cfg.tolerance * zv.abs().max(1.0))
            } else {
                format!("active={}", s.active.len())
            };
            plain.push(OracleRow { n, k, x: fmt6(x), objective: fmt6(s.objective), n_active: s.active.len() });
            rows.push(Row {
                n,
                k,
                sigma_or_m: fmt6(sigma),
                value: fmt6(s.objective),
                bound_kind: format!("m_k(x={})", fmt6(x)),
                verdict,
                provenance: "lp-oracle".into(),
            });
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &plain {
        w.serialize(r).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?)
        .expect("csv is utf-8");
    Ok(Report { config: cfg.clone(), rows, pretty: None, custom_csv: Some(csv) })
}

fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        b = b.num_threads(n.max(1));
    }
    b.build().expect("thread pool")
}

/// Runs one configured command and returns its report.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    thread_pool().install(|| match cfg.command {
        CommandKind::TablesGamma => tables_gamma(cfg),
        CommandKind::TablesAlpha => tables_alpha(cfg),
        CommandKind::VerifyKarlin => verify_karlin(cfg),
        CommandKind::Zolotarev => zolotarev_cmd(cfg),
        CommandKind::Schur => schur_cmd(cfg),
        CommandKind::Halfline => halfline_cmd(cfg),
        CommandKind::Oracle => oracle_cmd(cfg),
    })
}

/// Parses `args` (including the program name), runs, writes the report and
/// returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(Error::InvalidArgument(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return EXIT_USAGE;
        }
        Err(e) => {
            let _ = writeln!(stderr, "numerical failure: {e}");
            return EXIT_NUMERIC;
        }
    };
    let text = match report.render() {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "numerical failure: {e}");
            return EXIT_NUMERIC;
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write report: {e}");
        return EXIT_NUMERIC;
    }
    report.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("extremal-poly").chain(args.iter().copied());
        let code = main_with_args(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4..15").unwrap(), 4..=15);
        assert_eq!(parse_range("4..=15").unwrap(), 4..=15);
        assert_eq!(parse_range(" 6 ").unwrap(), 6..=6);
        assert!(parse_range("a..3").is_err());
    }

    #[test]
    fn six_digits() {
        assert_eq!(fmt6(0.878680123), "0.878680");
        assert_eq!(fmt6(12.5), "12.5000");
        assert_eq!(fmt6(192.0), "192.000");
        assert_eq!(fmt6(1.5e13), "1.50000e13");
        assert_eq!(fmt6(0.0), "0");
    }

    #[test]
    fn bad_flag_is_usage_error() {
        let (code, _, err) = run_args(&["tables-gamma", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
        let (code, _, _) = run_args(&["tables-gamma", "--grid-size", "5"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_args(&["tables-gamma", "--tolerance", "0"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("CONFIG FILE"));
    }

    #[test]
    fn zolotarev_theta_zero_is_t4() {
        let (code, out, _) = run_args(&["zolotarev", "--n", "5", "--theta", "0"]);
        assert_eq!(code, EXIT_OK);
        let coeffs: Vec<String> = out
            .lines()
            .filter(|l| l.contains("monomial_coeff"))
            .map(|l| l.split(',').nth(3).unwrap().to_string())
            .collect();
        assert_eq!(coeffs, ["1.00000", "0", "-8.00000", "0", "8.00000", "0"]);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join(format!("xp-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "# sweep\nn = 4..6\nformat = json\ntolerance = 1e-3\n").unwrap();
        let cli = Cli::try_parse_from(["x", "tables-alpha", "--config", path.to_str().unwrap(), "--n", "5"]).unwrap();
        let cfg = build_config(cli).unwrap();
        assert_eq!(cfg.n_range, 5..=5);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.tolerance, 1e-3);
        assert_eq!(cfg.grid_size, 1001);
        std::fs::write(&path, "colour = blue\n").unwrap();
        let cli = Cli::try_parse_from(["x", "tables-alpha", "--config", path.to_str().unwrap()]).unwrap();
        assert!(build_config(cli).is_err());
    }

    #[test]
    fn output_is_deterministic() {
        let a = run_args(&["tables-alpha", "--n", "4..8"]);
        let b = run_args(&["tables-alpha", "--n", "4..8"]);
        assert_eq!(a, b);
        assert!(a.1.starts_with("n,k,sigma_or_m,value,bound_kind,verdict,provenance\n"));
    }
}
