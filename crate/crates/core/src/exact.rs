//! Exact integer and rational helpers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Natural logarithm of a positive big integer, safe beyond the `f64` range.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_factorial(n: usize) -> f64 {
    ln_biguint(&factorial(n))
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (num, den) = (r.numer(), r.denom());
    let sign = if num.is_negative() { -1.0 } else { 1.0 };
    let ln = ln_biguint(&num.abs().to_biguint().unwrap()) - ln_biguint(&den.to_biguint().unwrap());
    sign * ln.exp()
}

/// Polynomial with exact rational monomial coefficients, lowest order first.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// `T_n` with integer coefficients.
    pub fn chebyshev(n: usize) -> Self {
        let mut prev = vec![BigRational::one()];
        if n == 0 {
            return Self::new(prev);
        }
        let mut cur = vec![BigRational::zero(), BigRational::one()];
        for _ in 1..n {
            let mut next = vec![BigRational::zero(); cur.len() + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] += c * BigInt::from(2);
            }
            for (i, c) in prev.iter().enumerate() {
                next[i] -= c;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Self::new(cur)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::new(vec![BigRational::zero()]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Exact value at `x = 1`.
    pub fn at_one(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// Exact value at `x = -1`.
    pub fn at_minus_one(&self) -> BigRational {
        self.eval(&-BigRational::one())
    }

    /// Exact Chebyshev-basis coefficients, via Horner's scheme with the
    /// multiplication rule `x T_j = (T_{j+1} + T_{j-1}) / 2`.
    pub fn to_chebyshev(&self) -> Vec<BigRational> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut acc: Vec<BigRational> = vec![BigRational::zero()];
        for c in self.coeffs.iter().rev() {
            let mut next = vec![BigRational::zero(); acc.len() + 1];
            for (j, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if j == 0 {
                    next[1] += a;
                } else {
                    let h = a * &half;
                    next[j + 1] += &h;
                    next[j - 1] += h;
                }
            }
            next[0] += c;
            acc = next;
        }
        let d = self.degree();
        acc.truncate(d + 1);
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorials_and_binomials() {
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert!((ln_factorial(20) - (2432902008176640000f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_of_huge_integer() {
        // 300! has ~2041 bits.
        let direct: f64 = (1..=300).map(|i| (i as f64).ln()).sum();
        assert!((ln_factorial(300) - direct).abs() < 1e-9);
    }

    #[test]
    fn chebyshev_round_trip() {
        let t6 = RationalPoly::chebyshev(6);
        let c = t6.to_chebyshev();
        assert_eq!(c.len(), 7);
        for (j, v) in c.iter().enumerate() {
            let expect = if j == 6 { BigRational::one() } else { BigRational::zero() };
            assert_eq!(*v, expect);
        }
        assert_eq!(t6.at_one(), BigRational::one());
    }
}
