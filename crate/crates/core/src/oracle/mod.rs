//! Brute-force LP oracle over polynomials of degree `n` in the Chebyshev basis.
//!
//! `m_k(x, sigma)` is the largest `p^{(k)}(x)` over `|p| <= 1` on `[-1, 1]`
//! with `|p^{(n)}| <= sigma`; the Schur variant drops the `sigma` bound and
//! requires `p^{(k+1)}(x0) = 0`. The sup-norm constraint is imposed on a grid
//! of Chebyshev extreme points which is refined until the optimum settles.

mod simplex;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::chebyshev::sigma_n;
use crate::error::{invalid, Error, Result};
use crate::series::{chebyshev_grid, ChebSeries};
use crate::zolotarev::{solve_zolotarev, Regime};

use simplex::Rows;

/// Largest constraint grid used by the refinement.
pub const MAX_GRID: usize = 16_001;
/// Relative change of the optimum that ends grid refinement.
pub const REFINE_TOL: f64 = 1e-7;
/// Refinement also continues while the optimal polynomial exceeds 1 by more
/// than this between grid points.
pub const SUP_TOL: f64 = 1e-6;
/// Largest degree accepted by the oracle.
pub const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalLPSolution {
    pub n: usize,
    pub k: usize,
    pub x: f64,
    /// `None` when the `n`-th derivative is unconstrained.
    pub sigma: Option<f64>,
    /// Whether `p^{(k+1)}(x) = 0` was imposed.
    pub stationary: bool,
    /// Final number of Chebyshev extreme points `cos(j pi / (G - 1))`.
    pub grid_size: usize,
    /// Optimal polynomial, Chebyshev basis.
    pub coeffs: Vec<f64>,
    /// Optimal `p^{(k)}(x)` on the final grid.
    pub objective: f64,
    /// Grid indices where `|p| = 1` to within `1e-9`.
    pub active: Vec<usize>,
    /// `max |p|` over `[-1, 1]`.
    pub sup_norm: f64,
    pub iterations: usize,
}

impl ExtremalLPSolution {
    pub fn grid(&self) -> Vec<f64> {
        chebyshev_grid(self.grid_size)
    }

    pub fn poly(&self) -> ChebSeries {
        ChebSeries::new(self.coeffs.clone())
    }

    /// `objective / max(1, sup_norm)`: attained by a truly feasible polynomial.
    pub fn certified_lower(&self) -> f64 {
        self.objective / self.sup_norm.max(1.0)
    }
}

struct Problem {
    n: usize,
    grid: Vec<f64>,
    /// `T_j(t_i)`, row-major `G x (n+1)`.
    basis: DMatrix<f64>,
    /// Bound on the top Chebyshev coefficient, `sigma / sigma_n`.
    top_bound: Option<f64>,
    /// `y = N z` when an equality constraint is eliminated.
    null: Option<DMatrix<f64>>,
}

impl Problem {
    fn new(n: usize, g: usize, top_bound: Option<f64>, null: Option<DMatrix<f64>>) -> Self {
        let grid = chebyshev_grid(g);
        let mut basis = DMatrix::zeros(g, n + 1);
        for (i, &t) in grid.iter().enumerate() {
            let (mut prev, mut cur) = (1.0, t);
            basis[(i, 0)] = 1.0;
            if n >= 1 {
                basis[(i, 1)] = t;
            }
            for j in 2..=n {
                let next = 2.0 * t * cur - prev;
                prev = cur;
                cur = next;
                basis[(i, j)] = cur;
            }
        }
        Problem { n, grid, basis, top_bound, null }
    }

    fn g(&self) -> usize {
        self.grid.len()
    }

    fn full_row(&self, i: usize) -> DVector<f64> {
        let g = self.g();
        if i < 2 * g {
            let s = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
            self.basis.row(i / 2).transpose() * s
        } else {
            let mut v = DVector::zeros(self.n + 1);
            v[self.n] = if i == 2 * g { 1.0 } else { -1.0 };
            v
        }
    }

    fn full(&self, z: &DVector<f64>) -> DVector<f64> {
        match &self.null {
            Some(nm) => nm * z,
            None => z.clone(),
        }
    }
}

impl Rows for Problem {
    fn dim(&self) -> usize {
        match &self.null {
            Some(nm) => nm.ncols(),
            None => self.n + 1,
        }
    }

    fn count(&self) -> usize {
        2 * self.g() + if self.top_bound.is_some() { 2 } else { 0 }
    }

    fn row(&self, i: usize) -> DVector<f64> {
        let r = self.full_row(i);
        match &self.null {
            Some(nm) => nm.transpose() * r,
            None => r,
        }
    }

    fn rhs(&self, i: usize) -> f64 {
        if i < 2 * self.g() {
            1.0
        } else {
            self.top_bound.unwrap_or(0.0)
        }
    }

    fn slacks(&self, z: &DVector<f64>) -> Vec<f64> {
        let y = self.full(z);
        let p = &self.basis * &y;
        let mut out = Vec::with_capacity(self.count());
        for v in p.iter() {
            out.push(1.0 - v);
            out.push(1.0 + v);
        }
        if let Some(b) = self.top_bound {
            out.push(b - y[self.n]);
            out.push(b + y[self.n]);
        }
        out
    }
}

/// `T_j^{(k)}(x)` for `j = 0..=n`.
fn functional(n: usize, k: usize, x: f64) -> DVector<f64> {
    DVector::from_iterator(n + 1, (0..=n).map(|j| ChebSeries::chebyshev(j).deriv_at(k, x)))
}

/// Null-space basis of `e.y = 0`, eliminating the component with the largest `|e_r|`.
fn null_space(e: &DVector<f64>) -> DMatrix<f64> {
    let d = e.len();
    let r = e.iamax();
    let mut nm = DMatrix::zeros(d, d - 1);
    let mut col = 0;
    for j in 0..d {
        if j == r {
            continue;
        }
        nm[(j, col)] = 1.0;
        nm[(r, col)] = -e[j] / e[r];
        col += 1;
    }
    nm
}

/// Value rows at evenly spread grid points, signs chosen so the dual
/// multipliers are nonnegative.
fn initial_basis(p: &Problem, c: &DVector<f64>) -> Result<Vec<usize>> {
    let d = p.dim();
    let g = p.g();
    for shift in 0..16 {
        // Shifts grow with the index so the points stop being symmetric.
        let idx: Vec<usize> = if d == 1 {
            vec![g - 1 - shift]
        } else {
            (0..d)
                .map(|i| ((i * (g - 1)) / (d - 1) + shift * (i * i + 1)) % g)
                .collect()
        };
        let mut basis: Vec<usize> = idx.iter().map(|&j| 2 * j).collect();
        if let Some(u) = simplex::multipliers(p, &basis, c) {
            if u.iter().all(|v| v.is_finite()) {
                for (r, &ur) in u.iter().enumerate() {
                    if ur < 0.0 {
                        basis[r] += 1;
                    }
                }
                return Ok(basis);
            }
        }
    }
    Err(Error::Lp("no nonsingular starting basis".into()))
}

fn refine_basis(basis: &[usize], old_g: usize, new_g: usize) -> Vec<usize> {
    basis
        .iter()
        .map(|&i| {
            if i < 2 * old_g {
                4 * (i / 2) + i % 2
            } else {
                2 * new_g + (i - 2 * old_g)
            }
        })
        .collect()
}

fn sup_norm(p: &ChebSeries) -> f64 {
    let d = p.derivative();
    let samples = 40 * (p.len_degree() + 1);
    d.roots_in(-1.0, 1.0, samples)
        .into_iter()
        .chain([-1.0, 1.0])
        .map(|x| p.eval(x).abs())
        .fold(0.0, f64::max)
}

fn check_common(n: usize, k: usize, x: f64, g: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(invalid(format!("oracle degree n = {n} outside 1..={MAX_DEGREE}")));
    }
    if k > n {
        return Err(invalid(format!("k = {k} exceeds n = {n}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(invalid(format!("x = {x} outside [-1, 1]")));
    }
    if g < 101 {
        return Err(invalid(format!("grid size {g} below 101")));
    }
    Ok(())
}

fn solve_refined(
    n: usize,
    k: usize,
    x: f64,
    sigma: Option<f64>,
    stationary: bool,
    g0: usize,
) -> Result<ExtremalLPSolution> {
    let c_full = functional(n, k, x);
    let null = stationary.then(|| null_space(&functional(n, k + 1, x)));
    let c = match &null {
        Some(nm) => nm.transpose() * &c_full,
        None => c_full.clone(),
    };
    let top_bound = sigma.map(|s| s / sigma_n(n));

    let mut g = g0;
    let mut basis: Option<Vec<usize>> = None;
    let mut prev: Option<f64> = None;
    let mut iterations = 0;
    loop {
        let problem = Problem::new(n, g, top_bound, null.clone());
        let start = match basis.take() {
            Some(b) => b,
            None => initial_basis(&problem, &c)?,
        };
        let sol = simplex::solve(&problem, &c, start)?;
        iterations += sol.iterations;
        let objective = c.dot(&sol.z);
        let y = problem.full(&sol.z);
        let coeffs: Vec<f64> = y.iter().copied().collect();
        let sup = sup_norm(&ChebSeries::new(coeffs.clone()));
        let settled = prev.is_some_and(|p| (objective - p).abs() <= REFINE_TOL * objective.abs().max(1.0));
        let done = settled && sup - 1.0 <= SUP_TOL;
        let next_g = 2 * g - 1;
        if done || next_g > MAX_GRID {
            let active = (0..g)
                .filter(|&j| sol.slacks[2 * j].min(sol.slacks[2 * j + 1]) <= 1e-9)
                .collect();
            return Ok(ExtremalLPSolution {
                n,
                k,
                x,
                sigma,
                stationary,
                grid_size: g,
                sup_norm: sup,
                coeffs,
                objective,
                active,
                iterations,
            });
        }
        prev = Some(objective);
        basis = Some(refine_basis(&sol.basis, g, next_g));
        g = next_g;
    }
}

/// `m_k(x, sigma)` over polynomials of degree `n`.
pub fn lp_pointwise(n: usize, k: usize, x: f64, sigma: f64, g: usize) -> Result<ExtremalLPSolution> {
    check_common(n, k, x, g)?;
    let sn = sigma_n(n);
    if !(0.0..=sn * (1.0 + 1e-12)).contains(&sigma) {
        return Err(invalid(format!("sigma = {sigma} outside [0, {sn}]")));
    }
    solve_refined(n, k, x, Some(sigma.min(sn)), false, g)
}

/// `mu_k^*(x0)`: largest `p^{(k)}(x0)` over `||p|| <= 1` with `p^{(k+1)}(x0) = 0`.
pub fn lp_schur(n: usize, k: usize, x0: f64, g: usize) -> Result<ExtremalLPSolution> {
    check_common(n, k, x0, g)?;
    if k + 1 > n {
        return Err(invalid(format!("stationarity of order {} is void for n = {n}", k + 1)));
    }
    solve_refined(n, k, x0, None, true, g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KarlinProfile {
    pub n: usize,
    pub k: usize,
    pub sigma: f64,
    pub points: Vec<(f64, f64)>,
    pub endpoint_value: f64,
    pub grid_max: f64,
    pub argmax: f64,
    pub max_at_endpoint: bool,
}

/// Relative slack when deciding that the profile peaks at `x = 1`.
pub const PROFILE_SLACK: f64 = 1e-7;

/// `m_k(x, sigma)` along `xs`, plus whether the largest value sits at `x = 1`.
pub fn karlin_profile(n: usize, k: usize, sigma: f64, xs: &[f64], g: usize) -> Result<KarlinProfile> {
    if xs.is_empty() {
        return Err(invalid("empty x grid"));
    }
    let mut all: Vec<f64> = xs.to_vec();
    if !all.contains(&1.0) {
        all.push(1.0);
    }
    let points = all
        .par_iter()
        .map(|&x| lp_pointwise(n, k, x, sigma, g).map(|s| (x, s.objective)))
        .collect::<Result<Vec<_>>>()?;
    let endpoint_value = points.iter().find(|p| p.0 == 1.0).expect("1 included").1;
    let (argmax, grid_max) = points
        .iter()
        .copied()
        .fold((1.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let max_at_endpoint = grid_max <= endpoint_value + PROFILE_SLACK * endpoint_value.abs().max(1.0);
    Ok(KarlinProfile { n, k, sigma, points, endpoint_value, grid_max, argmax, max_at_endpoint })
}

/// `count` equally spaced points of `[0, 1]`.
pub fn unit_grid(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| if i + 1 == count { 1.0 } else { i as f64 / (count - 1) as f64 })
        .collect()
}

/// Whether `sigma -> m_k(x, sigma)` has second differences `<= 1e-7`
/// (relative) on an equally spaced `sigma_grid`.
pub fn concavity_in_sigma(n: usize, k: usize, x: f64, sigma_grid: &[f64], g: usize) -> Result<bool> {
    if sigma_grid.len() < 5 {
        return Err(invalid("concavity check needs at least 5 sigma values"));
    }
    let vals = sigma_grid
        .par_iter()
        .map(|&s| lp_pointwise(n, k, x, s, g).map(|r| r.objective))
        .collect::<Result<Vec<_>>>()?;
    let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    Ok(vals
        .windows(3)
        .all(|w| w[0] - 2.0 * w[1] + w[2] <= 1e-7 * scale))
}

/// Largest `lp_schur(n, k, x0)` over `x0` in `[0, 1]`: a 101-point scan, then
/// golden-section refinement around the best interior scan point.
pub fn schur_max(n: usize, k: usize, g: usize) -> Result<(f64, f64)> {
    let xs = unit_grid(101);
    let vals = xs
        .par_iter()
        .map(|&x| lp_schur(n, k, x, g).map(|s| s.objective))
        .collect::<Result<Vec<_>>>()?;
    let best = (0..xs.len()).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).expect("nonempty");
    if best == 0 || best + 1 == xs.len() {
        return Ok((xs[best], vals[best]));
    }
    let f = |x: f64| lp_schur(n, k, x, g).map(|s| s.objective);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (xs[best - 1], xs[best + 1]);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-7 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let (x, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok(if v >= vals[best] { (x, v) } else { (xs[best], vals[best]) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LastDerivativeReport {
    pub n: usize,
    pub sigma: f64,
    pub regime: Regime,
    pub alternation: Vec<f64>,
    /// `Z_n^{(n-1)}(1, sigma)`.
    pub z_value: f64,
    /// `Z_n^{(n-1)}(1) - (sigma/n!) omega^{(n-1)}(1)` with `omega = prod (x - tau_i)`.
    pub d_value: f64,
    /// `|omega^{(n-1)}(1)| / n!`.
    pub omega_value: f64,
    /// `(1/n) sum |1 - tau_i|`.
    pub omega_star: f64,
    /// `(1/n) sum |tau_i|`.
    pub c1: f64,
    /// `1 - (1/n) sum tau_i`.
    pub c2: f64,
    /// Largest coefficient gap between the degree `n-1` interpolant of `Z`
    /// at the alternation points and `Z - (sigma/n!) omega`.
    pub interpolation_error: f64,
    /// LP value `m_{n-1}(1, sigma)`.
    pub oracle_value: f64,
}

impl LastDerivativeReport {
    pub fn c1_le_c2(&self) -> bool {
        self.c1 <= self.c2 + 1e-12
    }

    pub fn oracle_rel_error(&self) -> f64 {
        (self.oracle_value - self.z_value).abs() / self.z_value.abs().max(1e-300)
    }
}

/// `t` with `Z_n(x, sigma) = T_n(1 + (x - 1)/(1 + t))`, when `sigma` is in
/// the stretched range.
pub fn stretched_t(n: usize, sigma: f64) -> Option<f64> {
    let sn = sigma_n(n);
    if sigma < crate::zolotarev::stretched_threshold(n) || sigma > sn {
        return None;
    }
    let a = (sigma / sn).powf(1.0 / n as f64);
    Some(1.0 / a - 1.0)
}

/// The `k = n - 1` quantities at `sigma`, cross-checked against the oracle.
pub fn last_derivative_case(n: usize, sigma: f64, g: usize) -> Result<LastDerivativeReport> {
    if !(2..=MAX_DEGREE).contains(&n) {
        return Err(invalid(format!("n = {n} outside 2..={MAX_DEGREE}")));
    }
    let sn = sigma_n(n);
    if !(0.0..=sn * (1.0 + 1e-12)).contains(&sigma) {
        return Err(invalid(format!("sigma = {sigma} outside [0, {sn}]")));
    }
    let sigma = sigma.min(sn);
    let z = solve_zolotarev(n, sigma)?;
    let tau = &z.alternation;
    let nf = n as f64;
    let nfact: f64 = (1..=n).map(|i| i as f64).product();
    let omega = ChebSeries::from_roots(tau);
    let omega_d = omega.deriv_at(n - 1, 1.0);
    let z_value = z.deriv_at(n - 1, 1.0);
    let d_value = z_value - sigma / nfact * omega_d;

    let q = z.coeffs.sub(&omega.scale(sigma / nfact));
    let mut v = DMatrix::zeros(n, n);
    for (i, &t) in tau.iter().enumerate() {
        for j in 0..n {
            v[(i, j)] = ChebSeries::chebyshev(j).eval(t);
        }
    }
    let rhs = DVector::from_iterator(n, tau.iter().map(|&t| z.eval(t)));
    let interp = v
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NoRoot("alternation points coincide".into()))?;
    let interpolation_error = (0..=n)
        .map(|j| {
            let a = if j < n { interp[j] } else { 0.0 };
            (a - q.coeffs().get(j).copied().unwrap_or(0.0)).abs()
        })
        .fold(0.0, f64::max);

    let oracle_value = lp_pointwise(n, n - 1, 1.0, sigma, g)?.objective;

    Ok(LastDerivativeReport {
        n,
        sigma,
        regime: z.regime,
        alternation: tau.clone(),
        z_value,
        d_value,
        omega_value: omega_d.abs() / nfact,
        omega_star: tau.iter().map(|t| (1.0 - t).abs()).sum::<f64>() / nf,
        c1: tau.iter().map(|t| t.abs()).sum::<f64>() / nf,
        c2: 1.0 - tau.iter().sum::<f64>() / nf,
        interpolation_error,
        oracle_value,
    })
}
