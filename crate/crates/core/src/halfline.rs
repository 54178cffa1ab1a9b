//! Half-line lower bounds: the witness `g_{n,m} = phi T_{n+m}` with
//! `phi(x) = c_n int_{-1}^x (1 - t^2)^n dt`, a certificate that `|g^{(n)}|`
//! peaks at `x = 1`, and the resulting constants `gamma_{n,k}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::chebyshev::{endpoint_deriv, sigma_n_exact};
use crate::error::{invalid, Error, Result};
use crate::exact::{binomial, factorial, ln_biguint, ratio_to_f64, RationalPoly};
use crate::series::ChebSeries;

pub const CERT_GRID: usize = 20_001;
const GOLDEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct HalfLineWitness {
    pub n: usize,
    pub m: usize,
    /// `phi(1) = 1` normalization, `(2n+1)! / (2^{2n+1} (n!)^2)`.
    pub c_n: f64,
    /// `g^{(k)}(1)`, `k = 0..=n`.
    pub g_deriv_at_1: Vec<f64>,
    /// Largest `|g^{(n)}|` found on `[-1, 1]`.
    pub sup_gn: f64,
    pub argmax: f64,
    #[serde(skip)]
    g: RationalPoly,
    #[serde(skip)]
    gn: ChebSeries,
}

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// Exact `phi`, monomial basis: `c_n sum_j C(n,j) (-1)^j (x^{2j+1} + 1)/(2j+1)`.
pub fn phi_exact(n: usize) -> (BigRational, RationalPoly) {
    let num = BigInt::from(factorial(2 * n + 1));
    let den = BigInt::from(factorial(n)).pow(2) << (2 * n + 1);
    let c = rat(num, den);
    let mut coeffs = vec![BigRational::zero(); 2 * n + 2];
    for j in 0..=n {
        let mut b = rat(BigInt::from(binomial(n, j)), BigInt::from(2 * j + 1)) * &c;
        if j % 2 == 1 {
            b = -b;
        }
        coeffs[2 * j + 1] += &b;
        coeffs[0] += b;
    }
    (c, RationalPoly::new(coeffs))
}

pub fn build_witness(n: usize, m: usize) -> Result<HalfLineWitness> {
    if n < 2 || m < 1 {
        return Err(invalid(format!("witness needs n >= 2, m >= 1 (n = {n}, m = {m})")));
    }
    let (c, phi) = phi_exact(n);
    let g = phi.mul(&RationalPoly::chebyshev(n + m));
    let mut d = g.clone();
    let mut g_deriv_at_1 = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        g_deriv_at_1.push(ratio_to_f64(&d.at_one()));
        d = d.derivative();
    }
    let gn = ChebSeries::new(
        g.nth_derivative(n)
            .to_chebyshev()
            .iter()
            .map(ratio_to_f64)
            .collect(),
    );
    let mut w = HalfLineWitness {
        n,
        m,
        c_n: ratio_to_f64(&c),
        g_deriv_at_1,
        sup_gn: 0.0,
        argmax: 1.0,
        g,
        gn,
    };
    let (x, v) = refined_maxima(&w.gn)
        .into_iter()
        .chain(std::iter::once((1.0, w.gn.eval(1.0).abs())))
        .fold((1.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    w.sup_gn = v;
    w.argmax = x;
    Ok(w)
}

impl HalfLineWitness {
    /// `g^{(n)}` in the Chebyshev basis.
    pub fn gn(&self) -> &ChebSeries {
        &self.gn
    }

    pub fn g_eval(&self, x: f64) -> f64 {
        ratio_to_f64(&self.g.eval(&float_to_rational(x)))
    }

    /// Whether `g^{(j)}(-1) = 0` exactly for `j = 0..=n`.
    pub fn vanishes_at_minus_one(&self) -> bool {
        let mut d = self.g.clone();
        for _ in 0..=self.n {
            if !d.at_minus_one().is_zero() {
                return false;
            }
            d = d.derivative();
        }
        true
    }

    /// Exact `g^{(k)}(1)`.
    pub fn g_deriv_at_1_exact(&self, k: usize) -> BigRational {
        self.g.nth_derivative(k).at_one()
    }
}

fn float_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Interior discrete local maxima of `|p|` on the certificate grid, each
/// refined by golden-section search.
fn refined_maxima(p: &ChebSeries) -> Vec<(f64, f64)> {
    let xs = grid();
    let vals: Vec<f64> = xs.iter().map(|&x| p.eval(x).abs()).collect();
    let mut out = Vec::new();
    for i in 1..xs.len() - 1 {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            out.push(golden_max(|x| p.eval(x).abs(), xs[i - 1], xs[i + 1]));
        }
    }
    out
}

fn grid() -> Vec<f64> {
    (0..CERT_GRID)
        .map(|i| -1.0 + 2.0 * i as f64 / (CERT_GRID - 1) as f64)
        .collect()
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Verified,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointCertificate {
    pub n: usize,
    pub m: usize,
    pub status: CertStatus,
    /// `|g^{(n)}(1)|`.
    pub endpoint_value: f64,
    /// Best refined interior local maximum `(x, |g^{(n)}(x)|)`.
    pub best_interior: (f64, f64),
    /// `|g^{(n)}|` is certified monotone on `[monotone_from, 1]`.
    pub monotone_from: f64,
    /// Rigorous upper bound of `|g^{(n)}|` on `[-1, monotone_from]`.
    pub interior_bound: f64,
    /// Bound used for `|g^{(n+2)}|` on `[-1, 1]`.
    pub second_derivative_bound: f64,
    /// Grid interpolation error `second_derivative_bound * h^2 / 8`.
    pub certificate_error: f64,
    /// `1 - best_interior / endpoint_value`.
    pub margin: f64,
}

impl EndpointCertificate {
    pub fn verified(&self) -> bool {
        self.status == CertStatus::Verified
    }
}

/// Certifies that `|g^{(n)}|` attains its maximum over `[-1, 1]` at `x = 1`.
///
/// Near `1` the function is shown monotone from a bound on the next two
/// derivatives; elsewhere the grid maximum plus the linear-interpolation
/// error bounds the function from above.
pub fn verify_max_at_endpoint(w: &HalfLineWitness) -> EndpointCertificate {
    let h = &w.gn;
    let h1 = h.derivative();
    let h2 = h1.derivative();
    let d = h.degree() as f64;
    let markov = d * d * (d * d - 1.0) / 3.0 * h.abs_coeff_sum();
    let m2 = markov.min(h2.abs_coeff_sum());
    let step = 2.0 / (CERT_GRID - 1) as f64;
    let err = m2 * step * step / 8.0;

    let end = h.eval(1.0);
    let end_abs = end.abs();
    let slope = h1.eval(1.0);
    // |h| increases towards 1 where h' keeps the sign of h(1).
    let monotone_from = if end != 0.0 && slope.signum() == end.signum() && m2 > 0.0 {
        (1.0 - slope.abs() / m2).max(-1.0)
    } else {
        1.0
    };

    let xs = grid();
    let interior_grid = xs
        .iter()
        .take_while(|&&x| x <= monotone_from + step)
        .map(|&x| h.eval(x).abs())
        .fold(0.0, f64::max);
    let interior_bound = interior_grid + err;

    let best_interior = refined_maxima(h)
        .into_iter()
        .filter(|&(x, _)| x < 1.0 - 1e-9)
        .fold((f64::NAN, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let status = if best_interior.1 > end_abs {
        CertStatus::Failed
    } else if interior_bound < end_abs {
        CertStatus::Verified
    } else {
        CertStatus::Inconclusive
    };
    EndpointCertificate {
        n: w.n,
        m: w.m,
        status,
        endpoint_value: end_abs,
        best_interior,
        monotone_from,
        interior_bound,
        second_derivative_bound: m2,
        certificate_error: err,
        margin: 1.0 - best_interior.1 / end_abs,
    }
}

/// Degree excess used for each `n` in the tables: 1 for `n <= 6`, 2 for
/// `7 <= n <= 10`, 3 for `11 <= n <= 15`.
pub fn default_m(n: usize) -> Option<usize> {
    match n {
        2..=6 => Some(1),
        7..=10 => Some(2),
        11..=15 => Some(3),
        _ => None,
    }
}

/// `T_{n+m}^{(k)}(1)/T_n^{(k)}(1) * (sigma_n / T_{n+m}^{(n)}(1))^{k/n}`,
/// from exact endpoint derivatives, without the witness certificate.
pub fn gamma_formula(n: usize, k: usize, m: usize) -> Result<f64> {
    if k == 0 || k > n {
        return Err(invalid(format!("gamma needs 1 <= k <= n (n = {n}, k = {k})")));
    }
    let ln = |v: &num_bigint::BigUint| ln_biguint(v);
    let ratio = ln(&endpoint_deriv(n + m, k).value) - ln(&endpoint_deriv(n, k).value);
    let scale = ln(&sigma_n_exact(n)) - ln(&endpoint_deriv(n + m, n).value);
    Ok((ratio + k as f64 / n as f64 * scale).exp())
}

/// `gamma_{n,k}` from the witness `g_{n,m}`; fails unless the witness is certified.
#[allow(non_snake_case)]
pub fn gamma_gT(n: usize, k: usize, m: usize) -> Result<f64> {
    let w = build_witness(n, m)?;
    let cert = verify_max_at_endpoint(&w);
    if !cert.verified() {
        return Err(Error::WitnessNotCertified {
            n,
            m,
            detail: format!(
                "{:?}: endpoint {:.6e}, interior max {:.6e} at {:.6}, bound {:.6e}",
                cert.status, cert.endpoint_value, cert.best_interior.1, cert.best_interior.0, cert.interior_bound
            ),
        });
    }
    gamma_formula(n, k, m)
}

/// `gamma_gT` for every `k` in `1..=n-1` sharing one certified witness.
pub fn gamma_row(n: usize, m: usize) -> Result<(EndpointCertificate, Vec<f64>)> {
    let w = build_witness(n, m)?;
    let cert = verify_max_at_endpoint(&w);
    if !cert.verified() {
        return Err(Error::WitnessNotCertified { n, m, detail: format!("{:?}", cert.status) });
    }
    let row = (1..n).map(|k| gamma_formula(n, k, m)).collect::<Result<Vec<_>>>()?;
    Ok((cert, row))
}
