use nalgebra::{DMatrix, DVector};

use super::{OneBodyVector, SpaceShape, SymOperator, SymVector};
use crate::error::{Error, Result};
use crate::exact::multinomial_f64;
use crate::C64;

/// Coefficients of `u^{⊗N}` in the occupation basis:
/// `c_α = sqrt(N!/α!) ∏ u_i^{α_i}`.
pub fn hartree_vector(u: &OneBodyVector, particles: usize) -> Result<SymVector> {
    let shape = SpaceShape::new(u.dim(), particles)?;
    let basis = shape.basis();
    let mut amps = DVector::zeros(shape.dim());
    // powers[i][p] = u_i^p
    let powers: Vec<Vec<C64>> =
        u.0.iter()
            .map(|&ui| {
                let mut row = Vec::with_capacity(particles + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=particles {
                    row.push(acc);
                    acc *= ui;
                }
                row
            })
            .collect();
    for (idx, occ) in basis.iter().enumerate() {
        let mono = occ
            .iter()
            .enumerate()
            .fold(C64::new(1.0, 0.0), |acc, (i, &c)| acc * powers[i][c as usize]);
        amps[idx] = mono * multinomial_f64(occ).sqrt();
    }
    Ok(SymVector {
        shape,
        amplitudes: amps,
    })
}

fn check_modes(f: &OneBodyVector, shape: SpaceShape) -> Result<()> {
    if f.dim() != shape.modes() {
        return Err(Error::ShapeMismatch(format!(
            "one-body vector of dimension {} on space {}",
            f.dim(),
            shape
        )));
    }
    Ok(())
}

/// `a*(f) = Σ_i f_i a*_i` with `a*_i |α> = sqrt(α_i + 1) |α + e_i>`.
pub fn apply_creation(f: &OneBodyVector, v: &SymVector) -> Result<SymVector> {
    check_modes(f, v.shape)?;
    let target = v.shape.with_particles(v.shape.particles() + 1)?;
    let src = v.shape.basis();
    let dst = target.basis();
    let mut out = DVector::zeros(target.dim());
    let mut scratch = vec![0u32; v.shape.modes()];
    for (idx, occ) in src.iter().enumerate() {
        let c = v.amplitudes[idx];
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        scratch.copy_from_slice(occ);
        for (i, &fi) in f.0.iter().enumerate() {
            if fi == C64::new(0.0, 0.0) {
                continue;
            }
            scratch[i] += 1;
            let j = dst.index_of(&scratch).expect("raised occupation lies in target");
            out[j] += fi * c * (scratch[i] as f64).sqrt();
            scratch[i] -= 1;
        }
    }
    Ok(SymVector {
        shape: target,
        amplitudes: out,
    })
}

/// `a(f) = Σ_i conj(f_i) a_i` with `a_i |α> = sqrt(α_i) |α - e_i>`, the
/// adjoint of [`apply_creation`]. The vacuum sector is rejected.
pub fn apply_annihilation(f: &OneBodyVector, v: &SymVector) -> Result<SymVector> {
    check_modes(f, v.shape)?;
    if v.shape.particles() == 0 {
        return Err(Error::VacuumAnnihilation);
    }
    let target = v.shape.with_particles(v.shape.particles() - 1)?;
    let src = v.shape.basis();
    let dst = target.basis();
    let mut out = DVector::zeros(target.dim());
    let mut scratch = vec![0u32; v.shape.modes()];
    for (idx, occ) in src.iter().enumerate() {
        let c = v.amplitudes[idx];
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        scratch.copy_from_slice(occ);
        for (i, &fi) in f.0.iter().enumerate() {
            if occ[i] == 0 || fi == C64::new(0.0, 0.0) {
                continue;
            }
            scratch[i] -= 1;
            let j = dst.index_of(&scratch).expect("lowered occupation lies in target");
            out[j] += fi.conj() * c * (occ[i] as f64).sqrt();
            scratch[i] += 1;
        }
    }
    Ok(SymVector {
        shape: target,
        amplitudes: out,
    })
}

/// Dense matrix of `Σ_i a*_i a_i` on `shape`, assembled column by column
/// from the sparse mode actions.
pub fn number_operator(shape: SpaceShape) -> Result<SymOperator> {
    let dim = shape.dim();
    let mut m = DMatrix::zeros(dim, dim);
    if shape.particles() == 0 {
        return Ok(SymOperator { shape, matrix: m });
    }
    let basis = shape.basis();
    for col in 0..dim {
        let v = SymVector::basis_vector(shape, basis.occupation(col))?;
        let mut acc = DVector::zeros(dim);
        for i in 0..shape.modes() {
            let e = OneBodyVector::basis(shape.modes(), i);
            let lowered = apply_annihilation(&e, &v)?;
            acc += apply_creation(&e, &lowered)?.amplitudes;
        }
        m.set_column(col, &acc);
    }
    Ok(SymOperator { shape, matrix: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::haar_one_body;

    const TOL: f64 = 1e-12;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_sym(shape: SpaceShape, seed: u64) -> SymVector {
        let n = shape.dim();
        let raw = haar_one_body(n, seed, 0);
        SymVector::new(shape, raw.0).unwrap()
    }

    #[test]
    fn hartree_examples() {
        let e1 = OneBodyVector::basis(2, 0);
        let v = hartree_vector(&e1, 3).unwrap();
        assert_eq!(v.amplitudes[0], c(1.0));
        assert!(v.amplitudes.iter().skip(1).all(|z| z.norm() == 0.0));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = OneBodyVector::from_real(&[s, s]);
        let v = hartree_vector(&u, 2).unwrap();
        let want = [0.5, s, 0.5];
        for (a, w) in v.amplitudes.iter().zip(want) {
            assert!((a - c(w)).norm() < TOL);
        }
    }

    #[test]
    fn hartree_norm_preserved() {
        for n in 0..=30 {
            for seed in 0..3 {
                let u = haar_one_body(3, seed, n as u64);
                let v = hartree_vector(&u, n).unwrap();
                assert!((v.norm() - 1.0).abs() < TOL, "N={n}: {}", v.norm());
            }
        }
    }

    #[test]
    fn creation_examples() {
        let vac = SymVector::basis_vector(SpaceShape::new(2, 0).unwrap(), &[0, 0]).unwrap();
        let e1 = OneBodyVector::basis(2, 0);
        let out = apply_creation(&e1, &vac).unwrap();
        assert_eq!(out.amplitudes.as_slice(), &[c(1.0), c(0.0)]);

        let one = SymVector::basis_vector(SpaceShape::new(2, 1).unwrap(), &[1, 0]).unwrap();
        let out = apply_creation(&e1, &one).unwrap();
        assert!((out.amplitudes[0] - c(2f64.sqrt())).norm() < TOL);
        assert!(out.amplitudes.iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn annihilation_examples() {
        let e1 = OneBodyVector::basis(2, 0);
        let e2 = OneBodyVector::basis(2, 1);
        let one = SymVector::basis_vector(SpaceShape::new(2, 1).unwrap(), &[1, 0]).unwrap();
        let out = apply_annihilation(&e1, &one).unwrap();
        assert_eq!(out.amplitudes.as_slice(), &[c(1.0)]);

        let two = SymVector::basis_vector(SpaceShape::new(2, 2).unwrap(), &[2, 0]).unwrap();
        let out = apply_annihilation(&e2, &two).unwrap();
        assert!(out.amplitudes.iter().all(|z| z.norm() == 0.0));

        let vac = SymVector::zeros(SpaceShape::new(2, 0).unwrap());
        assert_eq!(apply_annihilation(&e1, &vac), Err(Error::VacuumAnnihilation));
        let bad = OneBodyVector::basis(3, 0);
        assert!(matches!(apply_creation(&bad, &one), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn adjointness() {
        for seed in 0..10 {
            let shape = SpaceShape::new(3, 3).unwrap();
            let lower = SpaceShape::new(3, 2).unwrap();
            let f = haar_one_body(3, seed, 100);
            let psi = random_sym(shape, seed);
            let phi = random_sym(lower, seed + 1000);
            // <a*(f) phi, psi> = <phi, a(f) psi>
            let lhs = apply_creation(&f, &phi).unwrap().inner(&psi);
            let rhs = phi.inner(&apply_annihilation(&f, &psi).unwrap());
            assert!((lhs - rhs).norm() < TOL);
            // ||a*(f) psi||^2 = <psi, a(f) a*(f) psi>
            let up = apply_creation(&f, &psi).unwrap();
            let back = apply_annihilation(&f, &up).unwrap();
            assert!((c(up.norm().powi(2)) - psi.inner(&back)).norm() < TOL);
        }
    }

    #[test]
    fn canonical_commutation_relations() {
        for d in 1..=3 {
            for n in 0..=6 {
                let shape = SpaceShape::new(d, n).unwrap();
                let basis = shape.basis();
                for seed in 0..3 {
                    let f = haar_one_body(d, seed, 1);
                    let g = haar_one_body(d, seed, 2);
                    let fg = f.inner(&g);
                    for occ in basis.iter() {
                        let v = SymVector::basis_vector(shape, occ).unwrap();
                        let ag = apply_annihilation(&f, &apply_creation(&g, &v).unwrap()).unwrap();
                        let commuted = if n == 0 {
                            DVector::zeros(shape.dim())
                        } else {
                            apply_creation(&g, &apply_annihilation(&f, &v).unwrap())
                                .unwrap()
                                .amplitudes
                        };
                        let lhs = ag.amplitudes - commuted;
                        let rhs = v.amplitudes.map(|z| z * fg);
                        assert!(crate::max_abs_diff(lhs.iter(), rhs.iter()) < TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn number_operator_is_particle_count() {
        for d in 1..=3 {
            for n in 0..=5 {
                let shape = SpaceShape::new(d, n).unwrap();
                let num = number_operator(shape).unwrap();
                let want = SymOperator::identity(shape).matrix.map(|z| z * n as f64);
                assert!(crate::max_abs_diff(num.matrix.iter(), want.iter()) < TOL);
            }
        }
    }
}
