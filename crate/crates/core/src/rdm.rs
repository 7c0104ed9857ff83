//! Reduced `k`-body density matrices, normalized to unit trace.
//!
//! For occupations `x, y` of `(d, k)` and spectator occupations `c` of
//! `(d, N - k)`,
//!
//! ```text
//! <x|γ^(k)|y> = binom(N,k)^{-1} Σ_c Γ[c+x, c+y] · w(c,x) w(c,y),
//! w(c,x) = sqrt(∏_i binom(c_i + x_i, x_i)),
//! ```
//!
//! which is `(N-k)!/N! · Tr[Γ a*^y a^x]` rewritten in the occupation basis.
//! [`reduce_oracle`] computes the same matrix by a literal partial trace in
//! the full tensor space.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exact::binomial_f64;
use crate::fock::{full, hartree_vector, OneBodyVector, ShiftTable, SymOperator};
use crate::states::MixedState;
use crate::C64;

/// Full-space size limit of [`reduce_oracle`].
pub const ORACLE_LIMIT: u128 = 100_000;

/// `γ^(k) = Tr_{k+1..N} Γ` with `Tr γ^(k) = 1`. `k = 0` gives the 1×1
/// matrix `[1]`.
pub fn reduce(state: &MixedState, k: usize) -> Result<MixedState> {
    reduce_operator(state.operator(), k).map(MixedState::from_constructed)
}

/// [`reduce`] for an arbitrary operator (linear, trace-preserving).
pub fn reduce_operator(op: &SymOperator, k: usize) -> Result<SymOperator> {
    let shape = op.shape;
    let n = shape.particles();
    if k > n {
        return Err(Error::OrderTooLarge { k, particles: n });
    }
    let low = shape.with_particles(k)?;
    let rest = shape.with_particles(n - k)?;
    let table = ShiftTable::new(low, rest)?;
    let norm = binomial_f64(n, k).recip();
    let mut m = DMatrix::<C64>::zeros(low.dim(), low.dim());
    for c in 0..rest.dim() {
        for x in 0..low.dim() {
            let (tx, wx) = (table.target(c, x), table.weight(c, x));
            for y in 0..low.dim() {
                m[(x, y)] += op.matrix[(tx, table.target(c, y))] * (wx * table.weight(c, y));
            }
        }
    }
    m.scale_mut(norm);
    Ok(SymOperator { shape: low, matrix: m })
}

/// Brute-force reduction: lift to `(C^d)^{⊗N}`, trace out the last `N - k`
/// factors, compress back to `(d, k)`.
pub fn reduce_oracle(state: &MixedState, k: usize) -> Result<MixedState> {
    let shape = state.shape();
    full::guard("reduce oracle", shape.modes(), shape.particles(), ORACLE_LIMIT)?;
    full::partial_trace_oracle(state.operator(), k).map(MixedState::from_constructed)
}

/// `<u^{⊗k}, γ u^{⊗k}>` for `γ` on `(d, k)`.
pub fn hartree_expectation(gamma: &SymOperator, u: &OneBodyVector) -> Result<f64> {
    if u.dim() != gamma.shape.modes() {
        return Err(Error::ShapeMismatch(format!(
            "one-body vector of dimension {} against {}",
            u.dim(),
            gamma.shape
        )));
    }
    let v = hartree_vector(u, gamma.shape.particles())?;
    Ok(gamma.expectation(&v)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_annihilation, SpaceShape, SymVector};
    use crate::rng::haar_one_body;
    use crate::states::{haar_random_pure, hartree_state, maximally_mixed, pure_state, random_mixed};

    const TOL: f64 = 1e-12;

    #[test]
    fn hartree_reduces_to_hartree() {
        for n in 0..=6 {
            let u = haar_one_body(3, 4, n as u64);
            let s = hartree_state(&u, n).unwrap();
            for k in 0..=n {
                let g = reduce(&s, k).unwrap();
                let want = hartree_state(&u, k).unwrap();
                assert!(g.operator().max_abs_diff(want.operator()) < TOL);
            }
        }
    }

    #[test]
    fn two_mode_pair_reduces_to_half_identity() {
        let shape = SpaceShape::new(2, 2).unwrap();
        let s = pure_state(&SymVector::basis_vector(shape, &[1, 1]).unwrap()).unwrap();
        let g = reduce(&s, 1).unwrap();
        let want = maximally_mixed(SpaceShape::new(2, 1).unwrap());
        assert!(g.operator().max_abs_diff(want.operator()) < TOL);
    }

    #[test]
    fn random_mixed_matches_oracle() {
        let s = random_mixed(SpaceShape::new(2, 4).unwrap(), 3, 7).unwrap();
        let fast = reduce(&s, 2).unwrap();
        let slow = reduce_oracle(&s, 2).unwrap();
        assert!(fast.operator().max_abs_diff(slow.operator()) < TOL);
    }

    #[test]
    fn order_zero_and_full_order() {
        let s = random_mixed(SpaceShape::new(3, 3).unwrap(), 2, 1).unwrap();
        let g0 = reduce(&s, 0).unwrap();
        assert_eq!(g0.shape().dim(), 1);
        assert!((g0.matrix()[(0, 0)] - C64::new(1.0, 0.0)).norm() < TOL);
        let g3 = reduce(&s, 3).unwrap();
        assert!(g3.operator().max_abs_diff(s.operator()) < TOL);
        let o3 = reduce_oracle(&s, 3).unwrap();
        assert!(o3.operator().max_abs_diff(s.operator()) < TOL);
        assert!(matches!(reduce(&s, 4), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn hartree_expectation_examples() {
        let u = haar_one_body(3, 8, 0);
        let p = hartree_state(&u, 2).unwrap();
        assert!((hartree_expectation(p.operator(), &u).unwrap() - 1.0).abs() < TOL);
        let m = maximally_mixed(SpaceShape::new(3, 2).unwrap());
        assert!((hartree_expectation(m.operator(), &u).unwrap() - 1.0 / 6.0).abs() < TOL);
        let bad = haar_one_body(2, 8, 0);
        assert!(hartree_expectation(m.operator(), &bad).is_err());
    }

    #[test]
    fn second_quantized_cross_check() {
        // <u^k, γ^(k) u^k> = (N-k)!/N! <Ψ, a*(u)^k a(u)^k Ψ> = (N-k)!/N! ||a(u)^k Ψ||²
        let shape = SpaceShape::new(2, 4).unwrap();
        for seed in 0..5 {
            let s = haar_random_pure(shape, seed);
            let eig = crate::metrics::hermitian_eig(s.operator()).unwrap();
            let psi = SymVector::new(shape, eig.vector(shape.dim() - 1)).unwrap();
            let u = haar_one_body(2, seed, 77);
            let k = 2;
            let mut w = psi.clone();
            for _ in 0..k {
                w = apply_annihilation(&u, &w).unwrap();
            }
            let second_quantized = w.norm().powi(2) * 2.0 / 24.0;
            let g = reduce(&s, k).unwrap();
            let direct = hartree_expectation(g.operator(), &u).unwrap();
            assert!((direct - second_quantized).abs() < TOL);
        }
    }
}
