//! Haar measure on the unit sphere of `C^d`: sampling and exact monomial
//! moments.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, multinomial, rational_to_f64};
use crate::fock::{OneBodyVector, SpaceShape};
use crate::rng::haar_one_body;

/// Uniformly distributed unit vector of `C^d`, deterministic in
/// `(seed, index)`.
pub fn haar_sample(d: usize, seed: u64, index: u64) -> OneBodyVector {
    haar_one_body(d, seed, index)
}

/// Exponents of the monomial `∏_i u_i^{a_i} conj(u_i)^{b_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MomentIndexPair {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl MomentIndexPair {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::ShapeMismatch(format!(
                "moment exponents of lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(MomentIndexPair { a, b })
    }

    /// The balanced monomial `|u^a|²`.
    pub fn diagonal(a: Vec<u32>) -> Self {
        MomentIndexPair { b: a.clone(), a }
    }
}

/// An exact Haar moment.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarMoment {
    pub exact: BigRational,
    pub value: f64,
}

fn balanced_moment(d: usize, a: &[u32]) -> BigRational {
    let total: usize = a.iter().map(|&x| x as usize).sum();
    let num = factorial(d - 1)
        * a.iter()
            .fold(num_bigint::BigUint::one(), |acc, &x| acc * factorial(x as usize));
    let den = factorial(total + d - 1);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `∫ ∏ u_i^{a_i} conj(u_i)^{b_i} du` over the normalized Haar measure:
/// zero unless `a = b`, and `(d-1)! ∏ a_i! / (|a| + d - 1)!` otherwise.
pub fn haar_monomial_integral(d: usize, pair: &MomentIndexPair) -> Result<HaarMoment> {
    if d == 0 {
        return Err(Error::ZeroModes);
    }
    if pair.a.len() != d || pair.b.len() != d {
        return Err(Error::ShapeMismatch(format!(
            "moment exponents of length {} in dimension {d}",
            pair.a.len()
        )));
    }
    let exact = if pair.a != pair.b {
        BigRational::zero()
    } else {
        balanced_moment(d, &pair.a)
    };
    let value = rational_to_f64(&exact);
    Ok(HaarMoment { exact, value })
}

/// Memoized float values of balanced moments `∫ |u^a|² du`.
#[derive(Debug, Default)]
pub struct MomentCache {
    d: usize,
    values: HashMap<Vec<u32>, f64>,
}

impl MomentCache {
    pub fn new(d: usize) -> Self {
        MomentCache {
            d,
            values: HashMap::new(),
        }
    }

    pub fn balanced(&mut self, a: &[u32]) -> f64 {
        if let Some(&v) = self.values.get(a) {
            return v;
        }
        let v = rational_to_f64(&balanced_moment(self.d, a));
        self.values.insert(a.to_vec(), v);
        v
    }
}

/// Outcome of assembling `dim(d,N) ∫ |u^{⊗N}><u^{⊗N}| du` from exact moments.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurCheck {
    /// Max deviation from the identity in exact arithmetic.
    pub exact_deviation: BigRational,
    /// Max deviation of the same assembly carried out in floating point.
    pub float_deviation: f64,
}

/// Size guard of [`schur_identity_check`] on `dim(d,N)`.
pub const SCHUR_LIMIT: usize = 10_000;

/// Assemble `dim(d,N) ∫ |u^{⊗N}><u^{⊗N}| du` entrywise: entry `(m, n)` is
/// `dim · sqrt(N!/m! · N!/n!) ∫ conj(u)^m u^n du`. Off-diagonal moments
/// vanish exactly, so the square root only meets perfect squares.
pub fn schur_identity_check(d: usize, n: usize) -> Result<SchurCheck> {
    let shape = SpaceShape::new(d, n)?;
    if shape.dim() > SCHUR_LIMIT {
        return Err(Error::SizeGuard {
            what: "Schur identity assembly",
            size: shape.dim() as u128,
            limit: SCHUR_LIMIT as u128,
        });
    }
    let dim = BigRational::from_integer(BigInt::from(shape.dim()));
    let basis = shape.basis();
    let mut exact_dev = BigRational::zero();
    let mut float_dev = 0.0f64;
    for (i, m) in basis.iter().enumerate() {
        let mult_m = multinomial(m);
        for (j, nn) in basis.iter().enumerate() {
            let pair = MomentIndexPair::new(nn.to_vec(), m.to_vec())?;
            let moment = haar_monomial_integral(d, &pair)?;
            let target = if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            let entry = if moment.exact.is_zero() {
                BigRational::zero()
            } else {
                // m == nn here, so sqrt(mult_m * mult_n) = mult_m
                &dim * BigRational::from_integer(BigInt::from(mult_m.clone())) * &moment.exact
            };
            let dev = (entry - &target).abs();
            if dev > exact_dev {
                exact_dev = dev;
            }
            let fentry = shape.dim() as f64
                * (crate::exact::multinomial_f64(m) * crate::exact::multinomial_f64(nn)).sqrt()
                * moment.value;
            float_dev = float_dev.max((fentry - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(SchurCheck {
        exact_deviation: exact_dev,
        float_deviation: float_dev,
    })
}
