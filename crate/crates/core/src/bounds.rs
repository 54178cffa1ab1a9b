//! Closed-form bound constants and the comparisons that decide the
//! endpoint conjecture on a parameter grid.
//!
//! With `t = sigma / sigma_n`:
//! * `B` is the endpoint lower bound, affine in `t`;
//! * `A*` bounds the extremal value near the endpoint;
//! * `A` bounds it on the interior, left of the largest zero of `T_{n-1}'`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::chebyshev::{deriv_zero_gap, endpoint_deriv_f64, local_maxima_abs_deriv, sigma_n};
use crate::error::{invalid, Result};
use crate::exact::{factorial, ln_biguint, ln_factorial};
use crate::halfline::{default_m, gamma_gT};

/// Relative slack on verdict boundaries.
pub const VERDICT_SLACK: f64 = 1e-12;

fn check_sigma(n: usize, sigma: f64) -> Result<f64> {
    let sn = sigma_n(n);
    if !(0.0..=sn * (1.0 + 1e-14)).contains(&sigma) {
        return Err(invalid(format!("sigma = {sigma} outside [0, {sn}]")));
    }
    Ok((sigma / sn).min(1.0))
}

fn check_k(n: usize, k: usize, max_k: usize) -> Result<()> {
    if k == 0 || k > max_k {
        return Err(invalid(format!("k = {k} outside 1..={max_k} for n = {n}")));
    }
    Ok(())
}

/// `lambda_k = (n-1) / ((k+1)(n-1+k))`.
pub fn lambda_k(n: usize, k: usize) -> f64 {
    (n - 1) as f64 / ((k + 1) as f64 * (n - 1 + k) as f64)
}

/// `eta_k = (n-k-1) / (2(2n-k-1))`.
pub fn eta_k(n: usize, k: usize) -> f64 {
    (n - k - 1) as f64 / (2.0 * (2 * n - k - 1) as f64)
}

/// `(1 - t) T_{n-1}^{(k)}(1) + t T_n^{(k)}(1)`.
pub fn lower_b(n: usize, k: usize, sigma: f64) -> Result<f64> {
    check_k(n, k, n - 1)?;
    let t = check_sigma(n, sigma)?;
    Ok((1.0 - t) * endpoint_deriv_f64(n - 1, k) + t * endpoint_deriv_f64(n, k))
}

/// `T_{n-1}^{(k)}(1)` for `t <= eta_k`, else `lambda_k T_n^{(k)}(1) (t/eta_k)^{k/n}`.
pub fn upper_astar(n: usize, k: usize, sigma: f64) -> Result<f64> {
    if k + 1 == n {
        return Err(invalid("the near-endpoint bound does not cover k = n - 1"));
    }
    check_k(n, k, n.saturating_sub(2))?;
    let t = check_sigma(n, sigma)?;
    let eta = eta_k(n, k);
    if t <= eta {
        Ok(endpoint_deriv_f64(n - 1, k))
    } else {
        Ok(astar_curve(n, k, t))
    }
}

fn astar_curve(n: usize, k: usize, t: f64) -> f64 {
    lambda_k(n, k) * endpoint_deriv_f64(n, k) * (t / eta_k(n, k)).powf(k as f64 / n as f64)
}

/// `3/(2k+1) T_{n-1}^{(k)}(1) + 2/(2k+1) * 2(k+1)/(n+k) * T_n^{(k)}(1) * t`.
pub fn upper_a(n: usize, k: usize, sigma: f64) -> Result<f64> {
    check_k(n, k, n - 1)?;
    let t = check_sigma(n, sigma)?;
    let q = (2 * k + 1) as f64;
    Ok(3.0 / q * endpoint_deriv_f64(n - 1, k)
        + 2.0 / q * (2 * (k + 1)) as f64 / (n + k) as f64 * endpoint_deriv_f64(n, k) * t)
}

/// `(1/(1 - delta_k/2))^k |T_n^{(k)}(omega_k)|`, with `delta_k` the largest
/// gap between zeros of `T_n^{(k+1)}`.
pub fn upper_aa(n: usize, k: usize) -> Result<f64> {
    check_k(n, k, n.saturating_sub(2))?;
    let half_gap = deriv_zero_gap(n, k)? / 2.0;
    let peak = local_maxima_abs_deriv(n, k)?.last().expect("nonempty").1;
    Ok((1.0 / (1.0 - half_gap)).powi(k as i32) * peak)
}

/// Looser closed form of [`upper_aa`]: the gap bounded by
/// `2 sin(pi (k+1) / 2n)` and the peak by `T_n^{(k)}(1)/(2k+1)`.
pub fn upper_aa_closed_form(n: usize, k: usize) -> Result<f64> {
    check_k(n, k, n.saturating_sub(2))?;
    let s = (PI * (k + 1) as f64 / (2.0 * n as f64)).sin();
    if s >= 1.0 {
        return Err(invalid(format!("closed form undefined at n = {n}, k = {k}")));
    }
    Ok((1.0 / (1.0 - s)).powi(k as i32) * endpoint_deriv_f64(n, k) / (2 * k + 1) as f64)
}

/// `alpha_{n,k} = lambda_k (1/eta_k)^{k/n}`, the tabulated near-endpoint
/// constant at `sigma = sigma_n` relative to `T_n^{(k)}(1)`.
pub fn alpha_table(n: usize, k: usize) -> Result<f64> {
    if n < 3 || k == 0 || k + 2 > n {
        return Err(invalid(format!("alpha needs 1 <= k <= n - 2 (n = {n}, k = {k})")));
    }
    Ok(lambda_k(n, k) * (1.0 / eta_k(n, k)).powf(k as f64 / n as f64))
}

/// Constants for `k = 1, 2` at `sigma = sigma_n`, built from the endpoint
/// Schur bounds `1/3` and `0.23`.
pub fn alpha_schur(n: usize, k: usize) -> Result<f64> {
    let c = match k {
        1 => 1.0 / 3.0,
        2 => 0.23,
        _ => return Err(invalid("only k = 1, 2 have Schur endpoint constants")),
    };
    if k + 2 > n {
        return Err(invalid(format!("need n >= k + 2 (n = {n}, k = {k})")));
    }
    Ok(c * (1.0 / eta_k(n, k)).powf(k as f64 / n as f64))
}

/// Interior constant for `k = 2` relative to `T_n''(1)`:
/// `(8/55) / (1 - sin(3 pi / 2n))^2` for `n >= 16`, `3/5` below.
pub fn beta_2(n: usize) -> f64 {
    if n >= 16 {
        let s = (3.0 * PI / (2.0 * n as f64)).sin();
        (1.0 / 5.0) * (8.0 / 11.0) / (1.0 - s).powi(2)
    } else {
        3.0 / 5.0
    }
}

/// `max` of the two classical lower bounds for the half-line constant:
/// `k!/(2k)! ((2n)!/n!)^{k/n}` and `((2n)!)^{1-k/n} / (n-k)!`.
pub fn stechkin_lower_c(n: usize, k: usize) -> Result<f64> {
    check_k(n, k, n - 1)?;
    let (nf, kf) = (n as f64, k as f64);
    let first = ln_factorial(k) - ln_factorial(2 * k) + kf / nf * (ln_factorial(2 * n) - ln_factorial(n));
    let second = (1.0 - kf / nf) * ln_factorial(2 * n) - ln_factorial(n - k);
    Ok(first.max(second).exp())
}

/// `2^{-k/n} ((2n)!)^{k/n} / prod_{j<k} (n^2 - j^2)`, the first Stechkin
/// form scaled by `sigma_n^{k/n} / T_n^{(k)}(1)`.
pub fn gamma_floor(n: usize, k: usize) -> Result<f64> {
    check_k(n, k, n - 1)?;
    let (nf, kf) = (n as f64, k as f64);
    let den: f64 = (0..k).map(|j| ((n * n - j * j) as f64).ln()).sum();
    Ok((-kf / nf * 2f64.ln() + kf / nf * ln_biguint(&factorial(2 * n)) - den).exp())
}

/// Endpoint Schur constant from the explicit polynomial built on
/// `xi = cos(pi/n)`, relative to `T_n^{(k)}(1)`.
pub fn schur_p3_ratio(n: usize, k: usize) -> Result<f64> {
    if n < 3 || k == 0 || k + 2 > n {
        return Err(invalid(format!("need 1 <= k <= n - 2 (n = {n}, k = {k})")));
    }
    let xi = (PI / n as f64).cos();
    let v = crate::chebyshev::cheb_deriv_vector(n, xi)?;
    let (a0, a1, a2) = (v.get(k), v.get(k + 1), v.get(k + 2));
    let kf = k as f64;
    let r = a0 - ((1.0 + xi) * a1 + kf * a0) / ((1.0 + xi) * a2 + (kf + 1.0) * a1) * a1;
    Ok((((1.0 + xi) / 2.0).powi(k as i32) * r / endpoint_deriv_f64(n, k)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Proven,
    Falsified,
    Unproven,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    /// `None` in the spline case, normalized at `sigma = sigma_n`.
    pub sigma: Option<f64>,
    /// Interior bound.
    pub a: f64,
    /// Near-endpoint bound.
    pub a_star: f64,
    /// Endpoint lower bound.
    pub b: f64,
    /// Whether the comparison is expected to succeed at this `(n, k)`.
    pub in_proven_range: bool,
}

impl BoundReport {
    pub fn verdict(&self) -> bool {
        self.a.max(self.a_star) <= self.b * (1.0 + VERDICT_SLACK)
    }

    pub fn status(&self) -> Status {
        match (self.verdict(), self.in_proven_range) {
            (true, _) => Status::Proven,
            (false, true) => Status::Falsified,
            (false, false) => Status::Unproven,
        }
    }
}

/// Interior bound used by the comparison: `upper_a`, except for `k = 1`
/// where `T_n'(1)/2` is used (valid for `n >= 4`).
pub fn interior_bound(n: usize, k: usize, sigma: f64) -> Result<f64> {
    if k == 1 {
        check_sigma(n, sigma)?;
        Ok(endpoint_deriv_f64(n, 1) / 2.0)
    } else {
        upper_a(n, k, sigma)
    }
}

/// Polynomial case `sigma <= sigma_n`: one report per grid point.
pub fn karlin_polynomial_check(n: usize, k: usize, sigma_grid: &[f64]) -> Result<Vec<BoundReport>> {
    if n < 3 {
        return Err(invalid(format!("need n >= 3 (n = {n})")));
    }
    check_k(n, k, n - 2)?;
    sigma_grid
        .iter()
        .map(|&s| {
            Ok(BoundReport {
                n,
                k,
                sigma: Some(s),
                a: interior_bound(n, k, s)?,
                a_star: upper_astar(n, k, s)?,
                b: lower_b(n, k, s)?,
                in_proven_range: n >= 4,
            })
        })
        .collect()
}

/// `count` equally spaced values of `sigma` on `[0, sigma_n]`.
pub fn sigma_grid(n: usize, count: usize) -> Vec<f64> {
    let sn = sigma_n(n);
    if count <= 1 {
        return vec![sn];
    }
    (0..count)
        .map(|i| if i + 1 == count { sn } else { sn * i as f64 / (count - 1) as f64 })
        .collect()
}

/// Tangent of `f(t) = lambda_k (t/eta_k)^{k/n} T_n^{(k)}(1)` at `t = 2 eta_k`,
/// compared against `B` at `t = eta_k` and `t = 1`.
pub fn tangent_line_check(n: usize, k: usize) -> Result<bool> {
    check_k(n, k, n.saturating_sub(2))?;
    let eta = eta_k(n, k);
    let p = k as f64 / n as f64;
    let t0 = 2.0 * eta;
    let f0 = astar_curve(n, k, t0);
    let slope = p * f0 / t0;
    let line = |t: f64| f0 + slope * (t - t0);
    let sn = sigma_n(n);
    let ok_left = line(eta) <= lower_b(n, k, eta * sn)? * (1.0 + VERDICT_SLACK);
    let ok_right = line(1.0) <= lower_b(n, k, sn)? * (1.0 + VERDICT_SLACK);
    Ok(ok_left && ok_right)
}

/// Ranges where `alpha_{n,k} <= gamma_{n,k}` is claimed from the tables:
/// `n = 5, 6` with `k <= n-2`, `n = 7, 8, 9` with `k <= n-3`, `n = 10, 11`
/// with `k <= 6`, and `k = 1, 2` for every `n >= 4`.
pub fn in_claimed_range(n: usize, k: usize) -> bool {
    if n >= 4 && (k == 1 || k == 2) && k + 2 <= n {
        return true;
    }
    match n {
        5 | 6 => k + 2 <= n,
        7..=9 => k + 3 <= n,
        10 | 11 => k <= 6,
        _ => false,
    }
}

/// Spline case: bounds at `sigma = sigma_n` relative to `T_n^{(k)}(1)`.
///
/// For `n <= 15` the near-endpoint constant is `alpha_table` and the endpoint
/// constant `gamma_gT`; beyond the table `k = 1, 2` use the Schur-based
/// constants and `gamma_floor`.
pub fn karlin_spline_check(n: usize, k: usize) -> Result<BoundReport> {
    if n < 4 {
        return Err(invalid(format!("spline check needs n >= 4 (n = {n})")));
    }
    check_k(n, k, n - 2)?;
    let in_range = in_claimed_range(n, k);
    let report = |a: f64, a_star: f64, b: f64| BoundReport {
        n,
        k,
        sigma: None,
        a,
        a_star,
        b,
        in_proven_range: in_range,
    };
    if let Some(m) = default_m(n) {
        let a = interior_bound(n, k, sigma_n(n))? / endpoint_deriv_f64(n, k);
        return Ok(report(a, alpha_table(n, k)?, gamma_gT(n, k, m)?));
    }
    let b = gamma_floor(n, k)?;
    match k {
        1 => Ok(report(0.5, alpha_schur(n, 1)?, b)),
        2 => Ok(report(beta_2(n), alpha_schur(n, 2)?, b)),
        _ => {
            let a = interior_bound(n, k, sigma_n(n))? / endpoint_deriv_f64(n, k);
            Ok(report(a, alpha_table(n, k)?, b))
        }
    }
}
