use crate::error::{Error, Result};
use crate::exact::binomial_f64;
use crate::fock::{hartree_vector, sym_tensor_op, OneBodyVector, SymOperator};
use crate::rdm::reduce;
use crate::states::{MixedState, NORM_TOL};

/// `dim(d,N) <u^{⊗N}, Γ u^{⊗N}>`, the density of the de Finetti measure of
/// `Γ` with respect to the normalized Haar measure.
pub fn lower_symbol_density(state: &MixedState, u: &OneBodyVector) -> Result<f64> {
    let shape = state.shape();
    if u.dim() != shape.modes() {
        return Err(Error::ShapeMismatch(format!(
            "one-body vector of dimension {} against {shape}",
            u.dim()
        )));
    }
    u.require_unit(NORM_TOL)?;
    let v = hartree_vector(u, shape.particles())?;
    Ok(shape.dim() as f64 * state.operator().expectation(&v)?.re)
}

/// `binom(N,ℓ) / binom(N+k+d-1, k)` for `ℓ = 0..=k`.
pub fn formula_weights(d: usize, n: usize, k: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::ZeroModes);
    }
    if k > n {
        return Err(Error::OrderTooLarge { k, particles: n });
    }
    let norm = binomial_f64(n + k + d - 1, k);
    Ok((0..=k).map(|l| binomial_f64(n, l) / norm).collect())
}

/// `Σ_ℓ w_ℓ γ^(ℓ) ⊗_s 1_{k-ℓ}` for arbitrary weights `w_0..w_k`.
pub fn definetti_rdm_weighted(state: &MixedState, k: usize, weights: &[f64]) -> Result<SymOperator> {
    let shape = state.shape();
    if k > shape.particles() {
        return Err(Error::OrderTooLarge {
            k,
            particles: shape.particles(),
        });
    }
    if weights.len() != k + 1 {
        return Err(Error::ShapeMismatch(format!("{} weights for order {k}", weights.len())));
    }
    let mut out = SymOperator::zeros(shape.with_particles(k)?);
    for (l, &w) in weights.iter().enumerate() {
        let term = sym_tensor_op(reduce(state, l)?.operator(), k)?;
        out.matrix += term.matrix.scale(w);
    }
    Ok(out)
}

/// `γ̃^(k) = binom(N+k+d-1, k)^{-1} Σ_{ℓ=0}^k binom(N,ℓ) γ^(ℓ) ⊗_s 1_{k-ℓ}`.
pub fn definetti_rdm_formula(state: &MixedState, k: usize) -> Result<MixedState> {
    let shape = state.shape();
    let weights = formula_weights(shape.modes(), shape.particles(), k)?;
    definetti_rdm_weighted(state, k, &weights).map(MixedState::from_constructed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ckmr::haar_sample;
    use crate::fock::SpaceShape;
    use crate::metrics::{c_constant, hermitian_eig, trace_distance};
    use crate::states::{haar_random_pure, hartree_state, maximally_mixed, random_mixed};
    use crate::C64;

    #[test]
    fn single_particle_example() {
        let e1 = OneBodyVector::basis(2, 0);
        let s = hartree_state(&e1, 1).unwrap();
        let g = definetti_rdm_formula(&s, 1).unwrap();
        let m = g.matrix();
        assert!((m[(0, 0)].re - 2.0 / 3.0).abs() < 1e-12);
        assert!((m[(1, 1)].re - 1.0 / 3.0).abs() < 1e-12);
        assert!(m[(0, 1)].norm() < 1e-15);
        let dist = trace_distance(crate::rdm::reduce(&s, 1).unwrap().operator(), g.operator()).unwrap();
        assert!((dist - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn maximally_mixed_is_fixed() {
        for (d, n) in [(2, 4), (3, 3), (4, 2)] {
            let s = maximally_mixed(SpaceShape::new(d, n).unwrap());
            for k in 0..=n {
                let g = definetti_rdm_formula(&s, k).unwrap();
                let want = maximally_mixed(SpaceShape::new(d, k).unwrap());
                assert!(g.operator().max_abs_diff(want.operator()) < 1e-12);
            }
        }
    }

    #[test]
    fn trace_positivity_and_decomposition() {
        for (d, n, seed) in [(2, 5, 1), (3, 4, 2), (2, 8, 3)] {
            let shape = SpaceShape::new(d, n).unwrap();
            for s in [random_mixed(shape, 3, seed).unwrap(), haar_random_pure(shape, seed)] {
                for k in 1..=3.min(n) {
                    let g = definetti_rdm_formula(&s, k).unwrap();
                    assert!((g.operator().trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
                    assert!(hermitian_eig(g.operator()).unwrap().values[0] >= -1e-10);
                    let c = c_constant(d, k, n).unwrap().value;
                    let b = SymOperator {
                        shape: g.shape(),
                        matrix: g.matrix() - reduce(&s, k).unwrap().matrix().scale(c),
                    };
                    assert!(hermitian_eig(&b).unwrap().values[0] >= -1e-10);
                    assert!((b.trace().re - (1.0 - c)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        let shape = SpaceShape::new(3, 4).unwrap();
        let m = maximally_mixed(shape);
        for i in 0..5 {
            let u = haar_sample(3, 9, i);
            assert!((lower_symbol_density(&m, &u).unwrap() - 1.0).abs() < 1e-12);
        }
        let v = haar_sample(3, 10, 0);
        let h = hartree_state(&v, 4).unwrap();
        for i in 0..5 {
            let u = haar_sample(3, 11, i);
            let want = 15.0 * u.inner(&v).norm().powi(8);
            assert!((lower_symbol_density(&h, &u).unwrap() - want).abs() < 1e-12);
        }
        assert!((lower_symbol_density(&h, &v).unwrap() - 15.0).abs() < 1e-12);
        let bad = OneBodyVector::from_real(&[1.0, 1.0, 0.0]);
        assert!(lower_symbol_density(&h, &bad).is_err());
    }

    #[test]
    fn hartree_concentration_is_monotone() {
        let v = OneBodyVector::basis(3, 0);
        let w = OneBodyVector::from_real(&[0.0, 0.6, 0.8]);
        for n in [2, 5, 9] {
            let h = hartree_state(&v, n).unwrap();
            let mut last = f64::INFINITY;
            for step in 0..=32 {
                let t = std::f64::consts::FRAC_PI_2 * step as f64 / 32.0;
                let u = OneBodyVector(v.0.scale(t.cos()) + w.0.scale(t.sin()));
                let rho = lower_symbol_density(&h, &u).unwrap();
                assert!(rho <= last + 1e-12);
                last = rho;
            }
            assert!(last.abs() < 1e-12);
        }
    }

    #[test]
    fn weights_and_errors() {
        let w = formula_weights(2, 1, 1).unwrap();
        assert!((w[0] - 1.0 / 3.0).abs() < 1e-15 && (w[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!(formula_weights(2, 2, 3).is_err());
        let s = maximally_mixed(SpaceShape::new(2, 2).unwrap());
        assert!(matches!(definetti_rdm_formula(&s, 3), Err(Error::OrderTooLarge { .. })));
        assert!(definetti_rdm_weighted(&s, 1, &[1.0]).is_err());
    }
}
