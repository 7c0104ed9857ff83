//! Quantitative bounds on `Tr|γ^(k) - γ̃^(k)|`, each available in exact
//! rational form so that inequality sweeps are free of rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{factorial, ratio, rational_to_f64};
use crate::fock::sym_dimension;

/// An exact rational together with its nearest float.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactValue {
    pub exact: BigRational,
    pub value: f64,
}

impl From<BigRational> for ExactValue {
    fn from(exact: BigRational) -> Self {
        let value = rational_to_f64(&exact);
        ExactValue { exact, value }
    }
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn check_order(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::OrderTooLarge { k, particles: n });
    }
    Ok(())
}

fn check_positive(d: usize, k: usize, n: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::ZeroModes);
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "bound needs k >= 1 and N >= 1 (k={k}, N={n})"
        )));
    }
    Ok(())
}

/// `2` if `N <= 2kd`, else `2kd / (N - kd)`.
pub fn trace_bound_exact(d: usize, k: usize, n: usize) -> Result<BigRational> {
    check_positive(d, k, n)?;
    check_order(k, n)?;
    let kd = k * d;
    if n <= 2 * kd {
        Ok(int(2))
    } else {
        Ok(frac(2 * kd, n - kd))
    }
}

pub fn trace_bound(d: usize, k: usize, n: usize) -> Result<f64> {
    trace_bound_exact(d, k, n).map(|r| rational_to_f64(&r))
}

/// `4kd / N`
pub fn linear_bound_exact(d: usize, k: usize, n: usize) -> Result<BigRational> {
    check_positive(d, k, n)?;
    Ok(frac(4 * k * d, n))
}

pub fn linear_bound(d: usize, k: usize, n: usize) -> Result<f64> {
    linear_bound_exact(d, k, n).map(|r| rational_to_f64(&r))
}

/// `C(d,k,N) = ∏_{j<k} (N - j)/(N + j + d)`.
pub fn c_constant(d: usize, k: usize, n: usize) -> Result<ExactValue> {
    if d == 0 {
        return Err(Error::ZeroModes);
    }
    check_order(k, n)?;
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= frac(n - j, n + j + d);
    }
    Ok(acc.into())
}

/// `C(d,k,N) = (N+d-1)!/(N+k+d-1)! · N!/(N-k)!`, the factorial-ratio form.
pub fn c_constant_factorial_form(d: usize, k: usize, n: usize) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::ZeroModes);
    }
    check_order(k, n)?;
    Ok(ratio(
        factorial(n + d - 1) * factorial(n),
        factorial(n + k + d - 1) * factorial(n - k),
    ))
}

/// `2 (1 - C(d,k,N))`
pub fn one_minus_c_bound_exact(d: usize, k: usize, n: usize) -> Result<BigRational> {
    let c = c_constant(d, k, n)?.exact;
    Ok(int(2) * (BigRational::one() - c))
}

pub fn one_minus_c_bound(d: usize, k: usize, n: usize) -> Result<f64> {
    one_minus_c_bound_exact(d, k, n).map(|r| rational_to_f64(&r))
}

/// `2k (2k + d - 2) / (N + d + k - 1)`, the step between `2(1 - C)` and
/// [`explicit_formula_bound`].
pub fn intermediate_product_bound(d: usize, k: usize, n: usize) -> Result<BigRational> {
    check_positive(d, k, n)?;
    Ok(frac(2 * k * (2 * k + d - 2), n + d + k - 1))
}

/// `2k (d + 2k) / N`
pub fn explicit_formula_bound_exact(d: usize, k: usize, n: usize) -> Result<BigRational> {
    check_positive(d, k, n)?;
    Ok(frac(2 * k * (d + 2 * k), n))
}

pub fn explicit_formula_bound(d: usize, k: usize, n: usize) -> Result<f64> {
    explicit_formula_bound_exact(d, k, n).map(|r| rational_to_f64(&r))
}

/// Dimension ratio `dim(d, N-k) / dim(d, N)` and the bound it yields.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionRatio {
    pub ratio: BigRational,
    /// `ratio >= 1 - dk/N`
    pub bernoulli_ok: bool,
    /// `2 (dim(d,N)/dim(d,N-k) - 1)`
    pub bound: ExactValue,
}

pub fn dimension_ratio_bounds(d: usize, k: usize, n: usize) -> Result<DimensionRatio> {
    check_order(k, n)?;
    let small = sym_dimension(d, n - k)?;
    let big = sym_dimension(d, n)?;
    let r = BigRational::new(BigInt::from(small), BigInt::from(big));
    let bernoulli_ok = if n == 0 {
        true
    } else {
        r >= BigRational::one() - frac(d * k, n)
    };
    let bound = int(2) * (r.recip() - BigRational::one());
    Ok(DimensionRatio {
        ratio: r,
        bernoulli_ok,
        bound: bound.into(),
    })
}

/// Which bounds a measured distance respects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundChecks {
    pub trace_bound: bool,
    pub linear_bound: bool,
    pub one_minus_c: bool,
    pub explicit_formula: bool,
    pub dimension_ratio: bool,
    /// Informational only: `distance <= 2kd/N`.
    pub within_2kd_over_n: bool,
}

impl BoundChecks {
    /// All proven bounds hold (the informational `2kd/N` check is excluded).
    pub fn all(&self) -> bool {
        self.trace_bound && self.linear_bound && self.one_minus_c && self.explicit_formula && self.dimension_ratio
    }
}

/// Measured distance for one `(d, N, k)` against every bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub trace_distance: f64,
    pub trace_bound: f64,
    pub linear_bound: f64,
    pub one_minus_c_bound: f64,
    pub explicit_formula_bound: f64,
    pub c_dkn: f64,
    pub dimension_bound: f64,
    pub satisfied: BoundChecks,
}

impl BoundReport {
    pub fn new(d: usize, k: usize, n: usize, trace_distance: f64, tol: f64) -> Result<Self> {
        if trace_distance.is_nan() || trace_distance < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "trace distance must be non-negative, got {trace_distance}"
            )));
        }
        let trace_b = trace_bound(d, k, n)?;
        let linear_b = linear_bound(d, k, n)?;
        let c = c_constant(d, k, n)?;
        let omc = one_minus_c_bound(d, k, n)?;
        let explicit = explicit_formula_bound(d, k, n)?;
        let dim = dimension_ratio_bounds(d, k, n)?.bound.value;
        let improved = (2 * k * d) as f64 / n as f64;
        let ok = |b: f64| trace_distance <= b + tol;
        Ok(BoundReport {
            d,
            n,
            k,
            trace_distance,
            trace_bound: trace_b,
            linear_bound: linear_b,
            one_minus_c_bound: omc,
            explicit_formula_bound: explicit,
            c_dkn: c.value,
            dimension_bound: dim,
            satisfied: BoundChecks {
                trace_bound: ok(trace_b),
                linear_bound: ok(linear_b),
                one_minus_c: ok(omc),
                explicit_formula: ok(explicit),
                dimension_ratio: ok(dim),
                within_2kd_over_n: ok(improved),
            },
        })
    }
}
