use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::haar::{haar_monomial_integral, MomentCache, MomentIndexPair};
use crate::error::{Error, Result};
use crate::exact::{multinomial, multinomial_f64};
use crate::fock::{SpaceShape, SymOperator};
use crate::metrics::ExactValue;
use crate::states::MixedState;
use crate::C64;

/// Size guard of [`definetti_rdm_oracle`] on `dim(d,N)² · dim(d,k)²`.
pub const ORACLE_LIMIT: u128 = 100_000_000;
/// Size guard of [`projector_integral_check`] on `d^N`.
pub const PROJECTOR_LIMIT: u128 = 100_000;

/// `γ̃^(k) = dim(d,N) ∫ <u^{⊗N}, Γ u^{⊗N}> |u^{⊗k}><u^{⊗k}| du`, integrated
/// monomial by monomial.
///
/// In the occupation basis the integrand of entry `(x, y)` is
/// `Σ_{m,n} Γ_{mn} sqrt(M_m M_n M_x M_y) conj(u)^{m+y} u^{n+x}` with `M` the
/// multinomial coefficients, and only the balanced terms `n = m + y - x`
/// survive.
pub fn definetti_rdm_oracle(state: &MixedState, k: usize) -> Result<MixedState> {
    let shape = state.shape();
    let (d, n) = (shape.modes(), shape.particles());
    if k > n {
        return Err(Error::OrderTooLarge { k, particles: n });
    }
    let low = shape.with_particles(k)?;
    let size = (shape.dim() as u128).pow(2) * (low.dim() as u128).pow(2);
    if size > ORACLE_LIMIT {
        return Err(Error::SizeGuard {
            what: "moment oracle",
            size,
            limit: ORACLE_LIMIT,
        });
    }
    let (big, small) = (shape.basis(), low.basis());
    let mult_big: Vec<f64> = big.iter().map(multinomial_f64).collect();
    let mult_small: Vec<f64> = small.iter().map(multinomial_f64).collect();
    let gamma = state.matrix();
    let mut cache = MomentCache::new(d);
    let mut out = DMatrix::<C64>::zeros(low.dim(), low.dim());
    let mut nn = vec![0i64; d];
    let mut total = vec![0u32; d];
    for (xi, x) in small.iter().enumerate() {
        for (yi, y) in small.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (mi, m) in big.iter().enumerate() {
                let mut ok = true;
                for i in 0..d {
                    nn[i] = m[i] as i64 + y[i] as i64 - x[i] as i64;
                    ok &= nn[i] >= 0;
                }
                if !ok {
                    continue;
                }
                let n_occ: Vec<u32> = nn.iter().map(|&v| v as u32).collect();
                let ni = big.index_of(&n_occ).expect("balanced partner");
                for i in 0..d {
                    total[i] = n_occ[i] + x[i];
                }
                let coef =
                    (mult_big[mi] * mult_big[ni] * mult_small[xi] * mult_small[yi]).sqrt() * cache.balanced(&total);
                acc += gamma[(mi, ni)] * coef;
            }
            out[(xi, yi)] = acc * shape.dim() as f64;
        }
    }
    Ok(MixedState::from_constructed(SymOperator {
        shape: low,
        matrix: out,
    }))
}

/// Compress `∫ (1_k - P_u^{⊗k}) ⊗ P_u^{⊗(N-k)} du` from the full tensor
/// space onto the symmetric subspace of `(d, N)` and return its max
/// deviation from `(1/dim(d,N-k) - 1/dim(d,N)) · 1`.
///
/// The full-space entry at words `(i, j)` is
/// `δ(i_{≤k}, j_{≤k}) ∫ u^{i_{>k}} conj(u)^{j_{>k}} - ∫ u^i conj(u)^j`, which
/// depends on the words only through their occupations; the compression
/// therefore sums moments weighted by word counts, with prefixes grouped
/// by occupation.
pub fn projector_integral_check(d: usize, n: usize, k: usize) -> Result<ExactValue> {
    if k > n {
        return Err(Error::OrderTooLarge { k, particles: n });
    }
    let shape = SpaceShape::new(d, n)?;
    let full = crate::fock::full::full_dimension(d, n).unwrap_or(u128::MAX);
    if full > PROJECTOR_LIMIT {
        return Err(Error::SizeGuard {
            what: "projector integral",
            size: full,
            limit: PROJECTOR_LIMIT,
        });
    }
    let rest = shape.with_particles(n - k)?;
    let basis = shape.basis();
    let prefixes = shape.with_particles(k)?.basis();
    let int = |v: usize| BigRational::from_integer(BigInt::from(v));
    let big = |v: num_bigint::BigUint| BigRational::from_integer(BigInt::from(v));
    let target = BigRational::new(1.into(), int(rest.dim()).to_integer())
        - BigRational::new(1.into(), int(shape.dim()).to_integer());
    let moment = |a: &[u32], b: &[u32]| -> Result<BigRational> {
        Ok(haar_monomial_integral(d, &MomentIndexPair::new(a.to_vec(), b.to_vec())?)?.exact)
    };
    let mut worst = BigRational::zero();
    let mut ra = vec![0u32; d];
    let mut rb = vec![0u32; d];
    for (ai, a) in basis.iter().enumerate() {
        let ma = multinomial(a);
        for (bi, b) in basis.iter().enumerate() {
            let mb = multinomial(b);
            // Σ_{i∈W_a, j∈W_b} over the first term, grouped by prefix occupation
            let mut first = BigRational::zero();
            for p in prefixes.iter() {
                if (0..d).any(|i| p[i] > a[i] || p[i] > b[i]) {
                    continue;
                }
                for i in 0..d {
                    ra[i] = a[i] - p[i];
                    rb[i] = b[i] - p[i];
                }
                let m = moment(&ra, &rb)?;
                if !m.is_zero() {
                    first += big(multinomial(p)) * big(multinomial(&ra)) * big(multinomial(&rb)) * m;
                }
            }
            let second = big(ma.clone()) * big(mb.clone()) * moment(a, b)?;
            // embedding coefficients are 1/sqrt(M_a), 1/sqrt(M_b); entries
            // with a != b vanish before the square root is needed
            let entry = if first.is_zero() && second.is_zero() {
                BigRational::zero()
            } else if ai == bi {
                (first - second) / big(ma.clone())
            } else {
                return Err(Error::InvalidArgument(format!(
                    "unbalanced nonzero entry at ({ai}, {bi})"
                )));
            };
            let want = if ai == bi { target.clone() } else { BigRational::zero() };
            let dev = (entry - want).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    Ok(worst.into())
}
