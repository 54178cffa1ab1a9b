//! Chebyshev polynomials `T_n`, their derivatives, derivative zeros, and
//! exact endpoint values.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{factorial, ln_biguint};
use crate::series::ChebSeries;

/// `sigma_n = ||T_n^{(n)}|| = 2^{n-1} n!`, exactly.
pub fn sigma_n_exact(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::from(1u32);
    }
    factorial(n) << (n - 1)
}

pub fn sigma_n(n: usize) -> f64 {
    big_to_f64(&sigma_n_exact(n))
}

pub(crate) fn big_to_f64(x: &BigUint) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v,
        _ => ln_biguint(x).exp(),
    }
}

/// `T_n(x)` by the three-term recurrence; plain polynomial extension off `[-1, 1]`.
pub fn cheb_eval(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All derivative values `a_m = T_n^{(m)}(x)`, `m = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebDerivVector {
    pub n: usize,
    pub x: f64,
    pub values: Vec<f64>,
}

impl ChebDerivVector {
    /// `a_m`, zero for `m > n`.
    pub fn get(&self, m: usize) -> f64 {
        self.values.get(m).copied().unwrap_or(0.0)
    }

    /// Largest relative residual of
    /// `(x^2 - 1) a_{m+2} + (2m + 1) x a_{m+1} - (n^2 - m^2) a_m` over `m <= n - 2`.
    pub fn recurrence_residual(&self) -> f64 {
        let n = self.n as f64;
        let x = self.x;
        let mut worst: f64 = 0.0;
        for m in 0..self.n.saturating_sub(1) {
            let mf = m as f64;
            let terms = [
                (x * x - 1.0) * self.get(m + 2),
                (2.0 * mf + 1.0) * x * self.get(m + 1),
                -(n * n - mf * mf) * self.get(m),
            ];
            let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
            if scale == 0.0 {
                continue;
            }
            worst = worst.max(terms.iter().sum::<f64>().abs() / scale);
        }
        worst
    }
}

/// Derivatives of `T_n` at `x`, by repeated differentiation of the
/// Chebyshev coefficient vector. Stable at `x = +-1`, where the
/// differential recurrence would divide by `x^2 - 1`.
pub fn cheb_deriv_vector(n: usize, x: f64) -> Result<ChebDerivVector> {
    if n == 0 {
        return Err(invalid("cheb_deriv_vector needs n >= 1"));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(invalid(format!("x = {x} outside [-1, 1]")));
    }
    let mut s = ChebSeries::chebyshev(n);
    let mut values = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        values.push(s.eval(x));
        s = s.derivative();
    }
    Ok(ChebDerivVector { n, x, values })
}

/// Exact endpoint derivative `T_n^{(k)}(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointDerivative {
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "serialize_big")]
    pub value: BigUint,
}

fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl EndpointDerivative {
    pub fn to_f64(&self) -> f64 {
        big_to_f64(&self.value)
    }
}

/// `T_n^{(k)}(1) = prod_{j<k} (n^2 - j^2) / (2j + 1)`; every partial product
/// is an integer, so the division is exact at each step.
pub fn endpoint_deriv(n: usize, k: usize) -> EndpointDerivative {
    let mut value = BigUint::from(1u32);
    if k > n {
        value = BigUint::zero();
    } else {
        for j in 0..k {
            value *= BigUint::from(n * n - j * j);
            value /= BigUint::from(2 * j + 1);
        }
    }
    EndpointDerivative { n, k, value }
}

pub fn endpoint_deriv_f64(n: usize, k: usize) -> f64 {
    endpoint_deriv(n, k).to_f64()
}

/// `T_{n-1}^{(k)}(1) / T_n^{(k)}(1) = (n-1)/n * (n-k)/(n-1+k)`.
pub fn endpoint_ratio_beta(n: usize, k: usize) -> Result<f64> {
    if n < 2 || k == 0 || k > n {
        return Err(invalid(format!("endpoint ratio needs 1 <= k <= n, n >= 2 (n = {n}, k = {k})")));
    }
    let (n, k) = (n as f64, k as f64);
    Ok((n - 1.0) / n * (n - k) / (n - 1.0 + k))
}

/// Zeros of `T_n^{(k+1)}` in increasing order (there are `n - k - 1`).
pub fn deriv_zeros(n: usize, k: usize) -> Result<Vec<f64>> {
    if k + 1 > n {
        return Err(invalid(format!("T_{n}^({}) is identically zero", k + 1)));
    }
    let d = ChebSeries::chebyshev(n).nth_derivative(k + 1);
    let roots = d.roots_in(-1.0, 1.0, 8 * n);
    if roots.len() != n - k - 1 {
        return Err(Error::NoRoot(format!(
            "found {} zeros of T_{n}^({}), expected {}",
            roots.len(),
            k + 1,
            n - k - 1
        )));
    }
    Ok(roots)
}

/// Rightmost zero `omega_k` of `T_n^{(k+1)}`.
pub fn omega(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k + 2 > n {
        return Err(Error::NoRoot(format!(
            "omega needs 1 <= k <= n - 2 (n = {n}, k = {k})"
        )));
    }
    Ok(*deriv_zeros(n, k)?.last().expect("n - k - 1 >= 1 zeros"))
}

/// Largest gap `delta_k` between consecutive zeros of `T_n^{(k+1)}`.
pub fn deriv_zero_gap(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k + 2 > n {
        return Err(invalid(format!("gap needs 1 <= k <= n - 2 (n = {n}, k = {k})")));
    }
    let z = deriv_zeros(n, k)?;
    if z.len() < 2 {
        return Err(Error::NoRoot(format!(
            "T_{n}^({}) has {} zero(s); a gap needs two",
            k + 1,
            z.len()
        )));
    }
    Ok(z.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max))
}

/// Zeros `xi_i` of `T_n^{(k+1)}` with `|T_n^{(k)}(xi_i)|`, sorted by `xi_i`.
pub fn local_maxima_abs_deriv(n: usize, k: usize) -> Result<Vec<(f64, f64)>> {
    if k == 0 || k + 2 > n {
        return Err(invalid(format!("local maxima need 1 <= k <= n - 2 (n = {n}, k = {k})")));
    }
    let dk = ChebSeries::chebyshev(n).nth_derivative(k);
    Ok(deriv_zeros(n, k)?
        .into_iter()
        .map(|xi| (xi, dk.eval(xi).abs()))
        .collect())
}
