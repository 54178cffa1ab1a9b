//! Zolotarev polynomials `Z_n(., theta)`: degree `n`, `n` equioscillations on
//! `[-1, 1]`, parametrized by the value `theta` of the `n`-th derivative.
//!
//! `theta = -sigma_n` gives `-T_n`, `theta = 0` gives `T_{n-1}` and
//! `theta = sigma_n` gives `T_n`. Negative `theta` is solved directly; positive
//! `theta` is obtained by the reflection `Z(x, theta) = (-1)^{n+1} Z(-x, -theta)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::chebyshev::sigma_n;
use crate::error::{invalid, Error, Result};
use crate::series::{basis_with_derivs, ChebSeries};

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-13;
const NEWTON_ACCEPT: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `theta = +-sigma_n`: the polynomial is `+-T_n`.
    Chebyshev,
    /// `+-T_n(a x + b)`, one alternation point at an endpoint.
    Stretched,
    /// Both endpoints in the alternation set, exterior stationary point `beta`.
    Proper,
    /// `theta = 0`: the polynomial is `T_{n-1}`.
    ChebLower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZolotarevPoly {
    pub n: usize,
    pub theta: f64,
    /// Coefficients in the Chebyshev basis.
    pub coeffs: ChebSeries,
    /// `tau_1 < ... < tau_n` with `(-1)^{n-i} Z(tau_i) = 1`.
    pub alternation: Vec<f64>,
    pub regime: Regime,
    pub beta: Option<f64>,
}

impl ZolotarevPoly {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.eval(x)
    }

    pub fn deriv_at(&self, k: usize, x: f64) -> f64 {
        self.coeffs.deriv_at(k, x)
    }

    pub fn monomial_coeffs(&self) -> Vec<f64> {
        self.coeffs.to_monomial()
    }

    /// `max_i |(-1)^{n-i} Z(tau_i) - 1|`.
    pub fn equioscillation_residual(&self) -> f64 {
        let n = self.n;
        self.alternation
            .iter()
            .enumerate()
            .map(|(i, &t)| (sign(n - (i + 1)) * self.eval(t) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max |Z|` on `count` equispaced points of `[-1, 1]`.
    pub fn max_abs_on_grid(&self, count: usize) -> f64 {
        (0..count)
            .map(|i| -1.0 + 2.0 * i as f64 / (count - 1) as f64)
            .map(|x| self.eval(x).abs())
            .fold(0.0, f64::max)
    }

    /// The reflected polynomial `(-1)^{n+1} Z(-x, -theta)`.
    fn reflect(&self) -> Self {
        let n = self.n;
        let coeffs = ChebSeries::new(
            self.coeffs
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, &c)| sign(n + 1 + j) * c)
                .collect(),
        );
        ZolotarevPoly {
            n,
            theta: -self.theta,
            coeffs,
            alternation: self.alternation.iter().rev().map(|t| -t).collect(),
            regime: self.regime,
            beta: self.beta.map(|b| -b),
        }
    }
}

fn sign(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `sigma_n cos^{2n}(pi / 2n)`: for `|theta|` at or above this value the
/// polynomial is a stretched `T_n`.
pub fn stretched_threshold(n: usize) -> f64 {
    let s = (PI / (2.0 * n as f64)).cos().powi(2);
    sigma_n(n) * s.powi(n as i32)
}

pub fn solve_zolotarev(n: usize, theta: f64) -> Result<ZolotarevPoly> {
    solve_zolotarev_near(n, theta, None)
}

/// As [`solve_zolotarev`], continuing from `seed` when it is a proper-regime
/// solution of the same degree and sign of `theta`.
pub fn solve_zolotarev_near(n: usize, theta: f64, seed: Option<&ZolotarevPoly>) -> Result<ZolotarevPoly> {
    if n < 2 {
        return Err(invalid("Zolotarev polynomials need n >= 2"));
    }
    let sn = sigma_n(n);
    if !theta.is_finite() || theta.abs() > sn * (1.0 + 1e-12) {
        return Err(Error::ThetaOutOfRange { theta, sigma_n: sn });
    }
    let theta = theta.clamp(-sn, sn);
    if theta > 0.0 {
        let seed = seed.filter(|s| s.theta > 0.0).map(ZolotarevPoly::reflect);
        return Ok(solve_nonpositive(n, -theta, seed.as_ref())?.reflect());
    }
    let seed = seed.filter(|s| s.theta < 0.0);
    solve_nonpositive(n, theta, seed)
}

fn solve_nonpositive(n: usize, theta: f64, seed: Option<&ZolotarevPoly>) -> Result<ZolotarevPoly> {
    if theta == 0.0 {
        return Ok(cheb_lower(n));
    }
    let boundary = stretched_threshold(n);
    if -theta >= boundary {
        return Ok(stretched_negative(n, theta));
    }
    let seed = match seed {
        Some(s) if s.n == n && s.regime == Regime::Proper => s.clone(),
        _ if -theta < 0.5 * boundary => cheb_lower(n),
        _ => stretched_negative(n, -boundary),
    };
    continuation(n, theta, seed)
}

fn cheb_lower(n: usize) -> ZolotarevPoly {
    let m = (n - 1) as f64;
    let mut c = vec![0.0; n + 1];
    c[n - 1] = 1.0;
    ZolotarevPoly {
        n,
        theta: 0.0,
        coeffs: ChebSeries::new(c),
        alternation: (1..=n).map(|i| (PI * (n - i) as f64 / m).cos()).collect(),
        regime: Regime::ChebLower,
        beta: None,
    }
}

/// `-T_n(a x + a - 1)` with `a = (|theta| / sigma_n)^{1/n}`, anchored at `-1`.
fn stretched_negative(n: usize, theta: f64) -> ZolotarevPoly {
    let sn = sigma_n(n);
    let a = (-theta / sn).powf(1.0 / n as f64).min(1.0);
    let alternation = (1..=n)
        .map(|i| {
            let y = (PI * (n + 1 - i) as f64 / n as f64).cos();
            ((y + 1.0) / a - 1.0).clamp(-1.0, 1.0)
        })
        .collect();
    let (coeffs, regime) = if a == 1.0 {
        (ChebSeries::chebyshev(n).scale(-1.0), Regime::Chebyshev)
    } else {
        let s = ChebSeries::interpolate(n, |x| -crate::chebyshev::cheb_eval(n, a * x + a - 1.0));
        // Pin the leading coefficient to its exact value.
        let mut c = s.coeffs().to_vec();
        c[n] = -a.powi(n as i32);
        (ChebSeries::new(c), Regime::Stretched)
    };
    ZolotarevPoly { n, theta, coeffs, alternation, regime, beta: None }
}

/// Walks `theta` from the seed to the target, halving the step on failure
/// and doubling it on success.
fn continuation(n: usize, target: f64, seed: ZolotarevPoly) -> Result<ZolotarevPoly> {
    let mut cur = seed;
    let mut step = target - cur.theta;
    let min_step = 1e-12 * sigma_n(n);
    while cur.theta != target {
        let remaining = target - cur.theta;
        if step.abs() > remaining.abs() {
            step = remaining;
        }
        let next_theta = if step == remaining { target } else { cur.theta + step };
        match newton(n, next_theta, &cur) {
            Ok(z) => {
                cur = z;
                step *= 2.0;
            }
            Err(e) => {
                step *= 0.5;
                if step.abs() < min_step {
                    return Err(e);
                }
            }
        }
    }
    Ok(cur)
}

/// Damped Newton on the square proper-regime system. Unknowns are the
/// Chebyshev coefficients `c_0..c_{n-1}` and the interior nodes
/// `tau_2..tau_{n-1}`; `c_n = theta / sigma_n` is fixed.
fn newton(n: usize, theta: f64, seed: &ZolotarevPoly) -> Result<ZolotarevPoly> {
    let cn = theta / sigma_n(n);
    let m = 2 * n - 2;
    let mut c: Vec<f64> = (0..n).map(|j| seed.coeffs.coeffs().get(j).copied().unwrap_or(0.0)).collect();
    let mut tau: Vec<f64> = seed.alternation.clone();
    tau[0] = -1.0;
    tau[n - 1] = 1.0;

    let residual = |c: &[f64], tau: &[f64]| -> Vec<f64> {
        let mut r = Vec::with_capacity(m);
        let mut d = Vec::with_capacity(n);
        for (i, &t) in tau.iter().enumerate() {
            let b = basis_with_derivs(t, n);
            let mut v = cn * b[n][0];
            let mut dv = cn * b[n][1];
            for j in 0..n {
                v += c[j] * b[j][0];
                dv += c[j] * b[j][1];
            }
            r.push(v - sign(n - (i + 1)));
            if i > 0 && i < n - 1 {
                d.push(dv);
            }
        }
        r.extend(d);
        r
    };
    let norm = |r: &[f64]| r.iter().map(|v| v.abs()).fold(0.0, f64::max);

    let mut r = residual(&c, &tau);
    let mut rn = norm(&r);
    let mut iterations = 0;
    while rn > NEWTON_TOL && iterations < NEWTON_MAX_ITER {
        iterations += 1;
        let mut jac = DMatrix::<f64>::zeros(m, m);
        for (i, &t) in tau.iter().enumerate() {
            let b = basis_with_derivs(t, n);
            let interior = i > 0 && i < n - 1;
            let (mut dz, mut d2z) = (cn * b[n][1], cn * b[n][2]);
            for j in 0..n {
                jac[(i, j)] = b[j][0];
                dz += c[j] * b[j][1];
                d2z += c[j] * b[j][2];
            }
            if interior {
                let row = n + i - 1;
                for j in 0..n {
                    jac[(row, j)] = b[j][1];
                }
                let col = n + i - 1;
                jac[(i, col)] = dz;
                jac[(row, col)] = d2z;
            }
        }
        let Some(delta) = jac.lu().solve(&DVector::from_vec(r.clone())) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let c_new: Vec<f64> = (0..n).map(|j| c[j] - lambda * delta[j]).collect();
            let mut tau_new = tau.clone();
            for i in 1..n - 1 {
                tau_new[i] -= lambda * delta[n + i - 1];
            }
            let ordered = tau_new.windows(2).all(|w| w[0] < w[1]);
            if ordered {
                let r_new = residual(&c_new, &tau_new);
                let rn_new = norm(&r_new);
                if rn_new < rn {
                    c = c_new;
                    tau = tau_new;
                    r = r_new;
                    rn = rn_new;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let fail = |rn: f64| Error::NewtonFailed { n, theta, residual: rn, iterations };
    if rn > NEWTON_ACCEPT || !rn.is_finite() {
        return Err(fail(rn));
    }
    let mut full = c;
    full.push(cn);
    let coeffs = ChebSeries::new(full);
    let beta = exterior_stationary_point(&coeffs, &tau[1..n - 1]);
    if beta.abs() < 1.0 - 1e-9 {
        return Err(fail(rn));
    }
    Ok(ZolotarevPoly { n, theta, coeffs, alternation: tau, regime: Regime::Proper, beta: Some(beta) })
}

/// The zero of `Z'` other than the interior alternation points, from the sum
/// of the roots of `Z'` read off its two top Chebyshev coefficients.
fn exterior_stationary_point(z: &ChebSeries, interior: &[f64]) -> f64 {
    let d = z.derivative();
    let dc = d.coeffs();
    let m = dc.len() - 1;
    let root_sum = if m == 1 {
        -dc[0] / dc[1]
    } else {
        -dc[m - 1] / (2.0 * dc[m])
    };
    root_sum - interior.iter().sum::<f64>()
}

/// `k`-th derivative of the stored coefficients at `x`.
pub fn zolotarev_deriv_at(z: &ZolotarevPoly, k: usize, x: f64) -> f64 {
    z.deriv_at(k, x)
}

/// Bisection in `theta` on `(lo, hi)` for `f(Z(., theta)) = 0`, with `f(lo) < 0 < f(hi)`.
/// Each solve continues from the nearer bracket end.
fn bisect_theta(
    n: usize,
    lo: ZolotarevPoly,
    hi: ZolotarevPoly,
    f: impl Fn(&ZolotarevPoly) -> f64,
) -> Result<ZolotarevPoly> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(&lo), f(&hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::NotBracketed(format!(
            "n = {n}: f({}) = {flo:e}, f({}) = {fhi:e}",
            lo.theta, hi.theta
        )));
    }
    let tol = 1e-15 * sigma_n(n);
    for _ in 0..200 {
        if hi.theta - lo.theta <= tol {
            break;
        }
        let mid = 0.5 * (lo.theta + hi.theta);
        if mid <= lo.theta || mid >= hi.theta {
            break;
        }
        let seed = if mid - lo.theta < hi.theta - mid { &lo } else { &hi };
        let z = solve_zolotarev_near(n, mid, Some(seed))?;
        let fm = f(&z);
        if fm == 0.0 {
            return Ok(z);
        }
        if fm < 0.0 {
            lo = z;
        } else {
            hi = z;
        }
    }
    Ok(if f(&lo).abs() < f(&hi).abs() { lo } else { hi })
}

/// `theta_k` with `Z_n^{(k+1)}(1, theta_k) = 0`, in `(-sigma_n, 0)`.
pub fn theta_for_endpoint(n: usize, k: usize) -> Result<(f64, ZolotarevPoly)> {
    if k == 0 || k + 2 > n {
        return Err(invalid(format!("theta_k needs 1 <= k <= n - 2 (n = {n}, k = {k})")));
    }
    let lo = solve_zolotarev(n, -stretched_threshold(n))?;
    let hi = solve_zolotarev(n, 0.0)?;
    let z = bisect_theta(n, lo, hi, |z| z.deriv_at(k + 1, 1.0))?;
    let scale = crate::chebyshev::endpoint_deriv_f64(n, k + 1);
    if z.deriv_at(k + 1, 1.0).abs() > 1e-8 * scale.max(1.0) {
        return Err(Error::NoRoot(format!("theta_k residual too large for n = {n}, k = {k}")));
    }
    Ok((z.theta, z))
}

/// `theta_{x0}` with `Z_n^{(k+1)}(x0, theta) = 0`, in `(-sigma_n, theta_k)`.
pub fn theta_for_interior(n: usize, k: usize, x0: f64) -> Result<(f64, ZolotarevPoly)> {
    let w = crate::chebyshev::omega(n, k)?;
    if !(x0 > w && x0 < 1.0) {
        return Err(invalid(format!("x0 = {x0} outside (omega_k, 1) = ({w}, 1)")));
    }
    let (_, zk) = theta_for_endpoint(n, k)?;
    let lo = solve_zolotarev(n, -sigma_n(n))?;
    let z = bisect_theta(n, lo, zk, |z| z.deriv_at(k + 1, x0))?;
    Ok((z.theta, z))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    /// Zeros of `Z_n^{(m)}(., theta)`.
    pub z_zeros: Vec<f64>,
    /// Zeros of `T_{n-1}^{(m)}`.
    pub t_zeros: Vec<f64>,
    /// `theta = 0`: both zero sets coincide.
    pub degenerate: bool,
    pub interlaced: bool,
}

/// Checks `tau_1 < alpha_1 < tau_2 < ... < alpha_{M-1} < tau_M` for the zeros
/// `tau` of `Z_n^{(m)}` and `alpha` of `T_{n-1}^{(m)}`.
pub fn verify_interlacing(n: usize, m: usize, theta: f64) -> Result<InterlacingReport> {
    if m == 0 || m + 1 > n {
        return Err(invalid(format!("interlacing needs 1 <= m <= n - 1 (n = {n}, m = {m})")));
    }
    let z = solve_zolotarev(n, theta)?;
    let t_zeros = ChebSeries::chebyshev(n - 1).nth_derivative(m).real_roots();
    if z.regime == Regime::ChebLower {
        return Ok(InterlacingReport {
            n,
            m,
            theta,
            z_zeros: t_zeros.clone(),
            t_zeros,
            degenerate: true,
            interlaced: false,
        });
    }
    let z_zeros = z.coeffs.nth_derivative(m).real_roots();
    let interlaced = z_zeros.len() == t_zeros.len() + 1
        && t_zeros
            .iter()
            .enumerate()
            .all(|(i, &a)| z_zeros[i] < a && a < z_zeros[i + 1]);
    Ok(InterlacingReport { n, m, theta, z_zeros, t_zeros, degenerate: false, interlaced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{endpoint_deriv_f64, omega};

    fn check_invariants(z: &ZolotarevPoly) {
        assert!(z.equioscillation_residual() < 1e-10, "n = {}, theta = {}", z.n, z.theta);
        assert!(z.max_abs_on_grid(4001) <= 1.0 + 1e-9, "n = {}, theta = {}", z.n, z.theta);
        let d = z.deriv_at(z.n, 0.3);
        let scale = sigma_n(z.n);
        assert!((d - z.theta).abs() <= 1e-10 * scale, "theta = {} vs {}", z.theta, d);
        assert!(z.alternation.windows(2).all(|w| w[0] < w[1]));
        if z.regime == Regime::Proper {
            assert_eq!(z.alternation[0], -1.0);
            assert_eq!(z.alternation[z.n - 1], 1.0);
            assert!(z.beta.unwrap().abs() >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn endpoints_of_the_family() {
        for n in 2..10 {
            let sn = sigma_n(n);
            let plus = solve_zolotarev(n, sn).unwrap();
            let minus = solve_zolotarev(n, -sn).unwrap();
            let zero = solve_zolotarev(n, 0.0).unwrap();
            for j in 0..=n {
                let t = if j == n { 1.0 } else { 0.0 };
                assert!((plus.coeffs.coeffs()[j] - t).abs() < 1e-10);
                assert!((minus.coeffs.coeffs()[j] + t).abs() < 1e-10);
                let l = if j + 1 == n { 1.0 } else { 0.0 };
                assert!((zero.coeffs.coeffs().get(j).copied().unwrap_or(0.0) - l).abs() < 1e-10);
            }
            assert_eq!(plus.regime, Regime::Chebyshev);
            assert_eq!(zero.regime, Regime::ChebLower);
            check_invariants(&plus);
            check_invariants(&minus);
            check_invariants(&zero);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(matches!(solve_zolotarev(4, 200.0), Err(Error::ThetaOutOfRange { .. })));
        assert!(solve_zolotarev(1, 0.0).is_err());
    }

    #[test]
    fn boundary_is_stretched_and_anchored() {
        let b = stretched_threshold(4);
        let s = (PI / 8.0).cos().powi(8) * 192.0;
        assert!((b - s).abs() < 1e-12 * s);
        let z = solve_zolotarev(4, -b).unwrap();
        assert_eq!(z.regime, Regime::Stretched);
        assert_eq!(z.alternation[0], -1.0);
        assert!((z.alternation[3] - 1.0).abs() < 1e-12);
        check_invariants(&z);
        let zp = solve_zolotarev(4, b).unwrap();
        assert!((zp.alternation[3] - 1.0).abs() < 1e-15);
        check_invariants(&zp);
    }

    #[test]
    fn newton_meets_stretched_at_boundary() {
        for n in 3..9 {
            let b = stretched_threshold(n);
            let inside = solve_zolotarev(n, -b * (1.0 - 1e-9)).unwrap();
            let edge = solve_zolotarev(n, -b).unwrap();
            assert_eq!(inside.regime, Regime::Proper);
            for (a, e) in inside.coeffs.coeffs().iter().zip(edge.coeffs.coeffs()) {
                assert!((a - e).abs() < 1e-6, "n = {n}");
            }
        }
    }

    #[test]
    fn grid_of_thetas() {
        for n in 2..9 {
            let sn = sigma_n(n);
            for i in 0..=40 {
                let theta = -sn + 2.0 * sn * i as f64 / 40.0;
                let z = solve_zolotarev(n, theta).unwrap();
                check_invariants(&z);
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        let n = 5;
        let theta = -0.3 * sigma_n(n);
        let a = solve_zolotarev(n, theta).unwrap();
        let b = solve_zolotarev(n, -theta).unwrap();
        for x in [-0.9, -0.2, 0.4, 0.8] {
            assert!((a.eval(x) - b.eval(-x)).abs() < 1e-12);
        }
    }

    #[test]
    fn n2_proper_closed_form() {
        // Z = (theta/2)(x^2 - 1) + x for |theta| <= 1.
        let theta = -0.6;
        let z = solve_zolotarev(2, theta).unwrap();
        for x in [-1.0, -0.3, 0.5, 1.0] {
            assert!((z.eval(x) - (theta / 2.0 * (x * x - 1.0) + x)).abs() < 1e-12);
        }
        assert!((stretched_threshold(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_k_properties() {
        for n in 3..9 {
            for k in 1..=n - 2 {
                let (t, z) = theta_for_endpoint(n, k).unwrap();
                let sn = sigma_n(n);
                let eta = (n - k - 1) as f64 / (2.0 * (2 * n - k - 1) as f64);
                assert!(t < 0.0 && t.abs() < sn);
                assert!(t.abs() >= eta * sn, "n = {n}, k = {k}");
                let zk1 = z.deriv_at(k, 1.0).abs();
                assert!(zk1 <= endpoint_deriv_f64(n - 1, k) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn theta_interior_monotone() {
        let (n, k) = (6, 2);
        let w = omega(n, k).unwrap();
        let (tk, _) = theta_for_endpoint(n, k).unwrap();
        let mut prev = -sigma_n(n);
        for i in 1..50 {
            let x0 = w + (1.0 - w) * i as f64 / 50.0;
            let (t, z) = theta_for_interior(n, k, x0).unwrap();
            assert!(t > prev && t < tk);
            assert!(z.deriv_at(k + 1, x0).abs() < 1e-6 * sigma_n(n));
            prev = t;
        }
        assert!(theta_for_interior(n, k, w - 0.01).is_err());
    }

    #[test]
    fn interlacing_examples() {
        let (_, z) = theta_for_endpoint(6, 1).unwrap();
        assert!(verify_interlacing(6, 1, z.theta).unwrap().interlaced);
        assert!(verify_interlacing(6, 2, -sigma_n(6) / 4.0).unwrap().interlaced);
        assert!(verify_interlacing(6, 2, 0.0).unwrap().degenerate);
    }
}
