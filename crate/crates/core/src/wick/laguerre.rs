use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::{binomial, factorial};

/// Polynomial with exact rational coefficients in ascending powers of `x`.
/// Trailing zero coefficients are kept, so a degree-`n` Laguerre polynomial
/// always has `n + 1` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaguerrePoly {
    pub coeffs: Vec<BigRational>,
}

fn q(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl LaguerrePoly {
    pub fn from_integers(c: &[i64]) -> Self {
        LaguerrePoly {
            coeffs: c.iter().map(|&v| q(BigInt::from(v))).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn get(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `a·self + b·other`, padded to the longer of the two.
    pub fn combine(&self, a: &BigRational, other: &LaguerrePoly, b: &BigRational) -> LaguerrePoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        LaguerrePoly {
            coeffs: (0..len).map(|i| a * self.get(i) + b * other.get(i)).collect(),
        }
    }

    pub fn scale(&self, a: &BigRational) -> LaguerrePoly {
        LaguerrePoly {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Multiply by `x`.
    pub fn shift_x(&self) -> LaguerrePoly {
        let mut coeffs = vec![BigRational::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        LaguerrePoly { coeffs }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Equality of the represented polynomials, ignoring trailing zeros.
    pub fn same_polynomial(&self, other: &LaguerrePoly) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|i| self.get(i) == other.get(i))
    }
}

impl fmt::Display for LaguerrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `L_n(x) = Σ_k binom(n,k) (-1)^k x^k / k!`.
pub fn laguerre(n: usize) -> LaguerrePoly {
    LaguerrePoly {
        coeffs: (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                BigRational::new(sign * BigInt::from(binomial(n, k)), BigInt::from(factorial(k)))
            })
            .collect(),
    }
}

/// `L̃_n(x) = n! L_n(-x)`, which has integer coefficients `binom(n,k) n!/k!`.
pub fn modified_laguerre(n: usize) -> LaguerrePoly {
    let nf = q(BigInt::from(factorial(n)));
    LaguerrePoly {
        coeffs: laguerre(n)
            .coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c * &nf } else { -c * &nf })
            .collect(),
    }
}
