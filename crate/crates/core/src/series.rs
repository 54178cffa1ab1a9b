//! Polynomials stored in the Chebyshev basis.
//!
//! Every floating-point polynomial in the crate goes through [`ChebSeries`]:
//! values and derivatives on `[-1, 1]` are well conditioned in this basis even
//! when the monomial coefficients of the same polynomial are of size `2^n`.

use std::f64::consts::PI;

/// A real polynomial `sum_j c_j T_j(x)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0])
    }

    /// The Chebyshev polynomial `T_n` itself.
    pub fn chebyshev(n: usize) -> Self {
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        Self::new(c)
    }

    /// Interpolates `f` at the `degree + 1` Chebyshev points of the first kind.
    /// Exact (up to rounding) when `f` is a polynomial of at most that degree.
    pub fn interpolate(degree: usize, f: impl Fn(f64) -> f64) -> Self {
        let m = degree + 1;
        let nodes: Vec<f64> = (0..m)
            .map(|i| (PI * (i as f64 + 0.5) / m as f64).cos())
            .collect();
        let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let mut coeffs = vec![0.0; m];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let s: f64 = (0..m)
                .map(|i| values[i] * (PI * j as f64 * (i as f64 + 0.5) / m as f64).cos())
                .sum();
            *c = 2.0 * s / m as f64;
        }
        coeffs[0] *= 0.5;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Length of the coefficient vector minus one; trailing zeros are kept.
    pub fn len_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree ignoring exactly-zero trailing coefficients.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Clenshaw evaluation; valid for every real `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }

    pub fn derivative(&self) -> Self {
        let d = self.coeffs.len() - 1;
        if d == 0 {
            return Self::zero();
        }
        let mut out = vec![0.0; d];
        // c'_{j-1} = c'_{j+1} + 2 j c_j, running downwards from j = d.
        let mut next = 0.0; // c'_{j+1}
        let mut cur = 0.0; // c'_j
        for j in (1..=d).rev() {
            let val = next + 2.0 * j as f64 * self.coeffs[j];
            out[j - 1] = val;
            next = cur;
            cur = val;
        }
        out[0] *= 0.5;
        Self::new(out)
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        let mut s = self.clone();
        for _ in 0..k {
            s = s.derivative();
        }
        s
    }

    /// `k`-th derivative evaluated at `x`.
    pub fn deriv_at(&self, k: usize, x: f64) -> f64 {
        if k == 0 {
            self.eval(x)
        } else {
            self.nth_derivative(k).eval(x)
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let m = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Self::new(
            (0..m)
                .map(|i| get(&self.coeffs, i) - get(&other.coeffs, i))
                .collect(),
        )
    }

    /// Product with the linear factor `(x - a)`.
    pub fn mul_linear(&self, a: f64) -> Self {
        let d = self.coeffs.len();
        let mut out = vec![0.0; d + 1];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[j] -= a * c;
            if j == 0 {
                out[1] += c;
            } else {
                out[j + 1] += 0.5 * c;
                out[j - 1] += 0.5 * c;
            }
        }
        Self::new(out)
    }

    /// Monic product `prod_i (x - r_i)` in the Chebyshev basis.
    pub fn from_roots(roots: &[f64]) -> Self {
        roots
            .iter()
            .fold(Self::new(vec![1.0]), |acc, &r| acc.mul_linear(r))
    }

    /// Sum of absolute coefficients, an upper bound for `max |p|` on `[-1, 1]`.
    pub fn abs_coeff_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Monomial coefficients, lowest order first.
    pub fn to_monomial(&self) -> Vec<f64> {
        let d = self.coeffs.len();
        let mut out = vec![0.0; d];
        // Monomial expansions of T_{j-1} and T_j.
        let mut t_prev = vec![0.0; d + 1];
        let mut t_cur = vec![0.0; d + 1];
        t_cur[0] = 1.0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            for i in 0..d {
                out[i] += c * t_cur[i];
            }
            let mut t_next = vec![0.0; d + 1];
            let factor = if j == 0 { 1.0 } else { 2.0 };
            for i in 0..d {
                t_next[i + 1] += factor * t_cur[i];
                if j > 0 {
                    t_next[i] -= t_prev[i];
                }
            }
            t_prev = std::mem::replace(&mut t_cur, t_next);
        }
        out
    }

    /// Zeros inside `[a, b]` located by sign changes on `samples` Chebyshev-spaced
    /// points, bisection to `1e-13`, and one Newton polish.
    pub fn roots_in(&self, a: f64, b: f64, samples: usize) -> Vec<f64> {
        let samples = samples.max(2);
        let pts: Vec<f64> = (0..samples)
            .map(|i| {
                let u = (PI * (samples - 1 - i) as f64 / (samples - 1) as f64).cos();
                a + (b - a) * (u + 1.0) / 2.0
            })
            .collect();
        let deriv = self.derivative();
        self.roots_on_partition(&pts, Some(&deriv))
    }

    /// All real zeros, assuming the polynomial is real-rooted with simple
    /// zeros (true for every derivative of a Zolotarev or Chebyshev
    /// polynomial). Critical points of successive derivatives partition the
    /// line into monotone pieces, each holding at most one zero.
    pub fn real_roots(&self) -> Vec<f64> {
        let d = self.degree();
        if d == 0 {
            return Vec::new();
        }
        let trimmed = Self::new(self.coeffs[..=d].to_vec());
        let mono = trimmed.to_monomial();
        let lead = mono[d];
        let cauchy = 1.0
            + mono[..d]
                .iter()
                .map(|c| (c / lead).abs())
                .fold(0.0, f64::max);
        let bound = 2.0 * cauchy.max(1.0);
        let chain: Vec<Self> = (0..d).map(|k| trimmed.nth_derivative(k)).collect();
        // Root of the linear derivative.
        let lin = &chain[d - 1];
        let c = lin.coeffs();
        let mut crit = vec![-c[0] / c[1]];
        for k in (0..d - 1).rev() {
            let mut pts = vec![-bound];
            pts.extend(crit.iter().copied().filter(|x| x.abs() < bound));
            pts.push(bound);
            let deriv = &chain[k + 1];
            crit = chain[k].roots_on_partition(&pts, Some(deriv));
        }
        crit
    }

    fn roots_on_partition(&self, pts: &[f64], deriv: Option<&Self>) -> Vec<f64> {
        let mut roots = Vec::new();
        let vals: Vec<f64> = pts.iter().map(|&x| self.eval(x)).collect();
        for i in 0..pts.len() - 1 {
            let (x0, x1) = (pts[i], pts[i + 1]);
            let (f0, f1) = (vals[i], vals[i + 1]);
            if f0 == 0.0 {
                if roots.last().is_none_or(|&r: &f64| (r - x0).abs() > 0.0) {
                    roots.push(x0);
                }
                continue;
            }
            if f0 * f1 < 0.0 {
                let r = bisect(|x| self.eval(x), x0, x1, f0);
                roots.push(polish(self, deriv, r, x0, x1));
            }
        }
        if let (Some(&xl), Some(&fl)) = (pts.last(), vals.last()) {
            if fl == 0.0 {
                roots.push(xl);
            }
        }
        roots
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, flo: f64) -> f64 {
    let mut flo = flo;
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-13 * mid.abs().max(1.0) || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn polish(p: &ChebSeries, deriv: Option<&ChebSeries>, r: f64, lo: f64, hi: f64) -> f64 {
    let Some(d) = deriv else { return r };
    let slope = d.eval(r);
    if slope == 0.0 || !slope.is_finite() {
        return r;
    }
    let next = r - p.eval(r) / slope;
    if next >= lo && next <= hi && p.eval(next).abs() <= p.eval(r).abs() {
        next
    } else {
        r
    }
}

/// Values `T_j(x), T_j'(x), T_j''(x)` for `j = 0..=n`.
pub(crate) fn basis_with_derivs(x: f64, n: usize) -> Vec<[f64; 3]> {
    let mut out = vec![[0.0; 3]; n + 1];
    out[0] = [1.0, 0.0, 0.0];
    if n >= 1 {
        out[1] = [x, 1.0, 0.0];
    }
    for j in 1..n {
        let [t, d1, d2] = out[j];
        let [tp, d1p, d2p] = out[j - 1];
        out[j + 1] = [
            2.0 * x * t - tp,
            2.0 * t + 2.0 * x * d1 - d1p,
            4.0 * d1 + 2.0 * x * d2 - d2p,
        ];
    }
    out
}

/// `count` Chebyshev extreme points `cos(j pi / (count - 1))` in increasing order.
pub fn chebyshev_grid(count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    let m = (count - 1) as f64;
    (0..count)
        .map(|j| {
            let x = -(PI * j as f64 / m).cos();
            // Clean the symmetric rounding at the ends and the midpoint.
            if j == 0 {
                -1.0
            } else if j == count - 1 {
                1.0
            } else if 2 * j == count - 1 {
                0.0
            } else {
                x
            }
        })
        .collect()
}
