//! Exact integer and rational helpers shared by the symbolic and moment code.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, j| acc * j)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= (n - j) as u64;
        acc /= (j + 1) as u64;
    }
    acc
}

/// Binomial coefficient in `u128`, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.checked_mul((n - j) as u128)? / (j as u128 + 1);
    }
    Some(acc)
}

pub fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

const FACT_TABLE_LEN: usize = 171;

fn fact_table() -> &'static [f64; FACT_TABLE_LEN] {
    static TABLE: OnceLock<[f64; FACT_TABLE_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; FACT_TABLE_LEN];
        for j in 1..FACT_TABLE_LEN {
            t[j] = t[j - 1] * j as f64;
        }
        t
    })
}

/// `n!` as a float; infinite beyond 170.
pub fn factorial_f64(n: usize) -> f64 {
    fact_table().get(n).copied().unwrap_or(f64::INFINITY)
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Multinomial coefficient `(sum occ)! / prod occ_i!` as a float, built as a
/// product of binomials so it never overflows before the result does.
pub fn multinomial_f64(occ: &[u32]) -> f64 {
    let mut total = 0usize;
    let mut acc = 1.0;
    for &c in occ {
        total += c as usize;
        acc *= binomial_f64(total, c as usize);
    }
    acc
}

pub fn multinomial(occ: &[u32]) -> BigUint {
    let mut total = 0usize;
    let mut acc = BigUint::one();
    for &c in occ {
        total += c as usize;
        acc *= binomial(total, c as usize);
    }
    acc
}

/// `prod occ_i!`
pub fn occupation_factorial(occ: &[u32]) -> BigUint {
    occ.iter().fold(BigUint::one(), |acc, &c| acc * factorial(c as usize))
}
