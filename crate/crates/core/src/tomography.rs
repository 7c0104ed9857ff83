//! Reconstruction of a Hermitian operator on `(d, k)` from its Hartree
//! expectations `Q(u) = <u^{⊗k}, γ u^{⊗k}>`.
//!
//! `Q(z) = Σ_{α,β} γ_{αβ} sqrt(M_α M_β) conj(z)^α z^β` is a polynomial, so
//! every matrix element is a coefficient of it. [`reconstruct`] evaluates
//! `Q` at `z = (1, r_2 ω^{m_2}, ..., r_d ω^{m_d})`: a discrete Fourier
//! transform over the phases isolates `β - α`, and a Vandermonde solve in
//! `s_i = r_i²` isolates `α`. Fixing `z_1 = 1` loses nothing because every
//! monomial has degree `k` in both `z` and `conj(z)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exact::multinomial_f64;
use crate::fock::{hartree_vector, OneBodyVector, SpaceShape, SymOperator};
use crate::rng::{complex_gaussian, stream, Domain};
use crate::C64;

/// Relative residual above which an evaluator is rejected.
pub const CONSISTENCY_TOL: f64 = 1e-8;
/// Maximum number of evaluator calls made by [`reconstruct`].
pub const GRID_LIMIT: usize = 1_000_000;
/// Random points used to validate a reconstruction.
const VALIDATION_POINTS: u64 = 16;

fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite)
    }
}

fn roots(order: usize) -> Vec<C64> {
    (0..order)
        .map(|l| C64::from_polar(1.0, std::f64::consts::TAU * l as f64 / order as f64))
        .collect()
}

/// `<u^{⊗k}, γ v^{⊗k}>`, recovered from `Q` alone.
///
/// `t ↦ Q(u + t v)` is a polynomial in `t` and `conj(t)` of bidegree at
/// most `(k, k)`, and its `t^k` coefficient is the value sought. Sampling
/// `t` on `2k + 2` points of the unit circle extracts it exactly by a
/// discrete Fourier transform.
pub fn polarize<Q>(q: Q, u: &OneBodyVector, v: &OneBodyVector, k: usize) -> Result<C64>
where
    Q: Fn(&OneBodyVector) -> f64,
{
    if u.dim() != v.dim() {
        return Err(Error::ShapeMismatch(format!(
            "vectors of dimension {} and {}",
            u.dim(),
            v.dim()
        )));
    }
    if k == 0 {
        return Ok(C64::new(finite(q(u))?, 0.0));
    }
    let order = 2 * k + 2;
    let omega = roots(order);
    let mut acc = C64::new(0.0, 0.0);
    for (l, &w) in omega.iter().enumerate() {
        let point = OneBodyVector(&u.0 + v.0.map(|x| x * w));
        let value = finite(q(&point))?;
        // ω^{-kl}
        acc += omega[(order - (k * l) % order) % order] * value;
    }
    Ok(acc / order as f64)
}

fn vandermonde_inverse(nodes: &[f64]) -> Result<DMatrix<f64>> {
    let n = nodes.len();
    let v = DMatrix::from_fn(n, n, |r, c| nodes[r].powi(c as i32));
    v.try_inverse()
        .ok_or_else(|| Error::InvalidArgument("singular radial Vandermonde system".into()))
}

/// Mixed-radix digits of `index`, most significant first.
fn digits(mut index: usize, radix: usize, len: usize, out: &mut [usize]) {
    for pos in (0..len).rev() {
        out[pos] = index % radix;
        index /= radix;
    }
}

fn hartree_form(gamma: &SymOperator, u: &OneBodyVector) -> Result<f64> {
    let h = hartree_vector(u, gamma.shape.particles())?;
    Ok(gamma.expectation(&h)?.re)
}

fn validate<Q>(q: &Q, gamma: &SymOperator, seed: u64) -> Result<()>
where
    Q: Fn(&OneBodyVector) -> f64,
{
    let d = gamma.shape.modes();
    for i in 0..VALIDATION_POINTS {
        let mut rng = stream(seed, Domain::Tomography, i);
        let u = OneBodyVector(complex_gaussian(&mut rng, d)).normalized();
        let want = finite(q(&u))?;
        let got = hartree_form(gamma, &u)?;
        let residual = (want - got).abs() / want.abs().max(1.0);
        if residual > CONSISTENCY_TOL {
            return Err(Error::InconsistentEvaluator(residual));
        }
    }
    Ok(())
}

/// Recover `γ` on `(d, k)` from `Q(u) = <u^{⊗k}, γ u^{⊗k}>`.
///
/// Uses `(2k+2)^{d-1} (k+1)^{d-1}` evaluations of `Q`. The result is
/// Hermitian by construction; the evaluator is rejected if the unused
/// Fourier-Vandermonde coefficients or the residual at random points are
/// not negligible.
pub fn reconstruct<Q>(q: Q, d: usize, k: usize) -> Result<SymOperator>
where
    Q: Fn(&OneBodyVector) -> f64,
{
    let shape = SpaceShape::new(d, k)?;
    let free = d - 1;
    let order = 2 * k + 2;
    let radial = k + 1;
    let phase_points = order.checked_pow(free as u32).unwrap_or(usize::MAX);
    let radial_points = radial.checked_pow(free as u32).unwrap_or(usize::MAX);
    let calls = phase_points.saturating_mul(radial_points);
    if calls > GRID_LIMIT {
        return Err(Error::SizeGuard {
            what: "tomography grid",
            size: calls as u128,
            limit: GRID_LIMIT as u128,
        });
    }
    let omega = roots(order);
    let nodes: Vec<f64> = (1..=radial).map(|j| j as f64 / radial as f64).collect();
    let vinv = vandermonde_inverse(&nodes)?;
    let kron = (0..free).fold(DMatrix::<f64>::identity(1, 1), |acc, _| acc.kronecker(&vinv));

    // samples[j][m] = Q at radial point j and phase point m
    let mut samples = vec![vec![0.0f64; phase_points]; radial_points];
    let (mut jd, mut md) = (vec![0usize; free], vec![0usize; free]);
    for (j, row) in samples.iter_mut().enumerate() {
        digits(j, radial, free, &mut jd);
        for (m, slot) in row.iter_mut().enumerate() {
            digits(m, order, free, &mut md);
            let mut z = vec![C64::new(1.0, 0.0); d];
            for i in 0..free {
                z[i + 1] = omega[md[i]] * nodes[jd[i]].sqrt();
            }
            *slot = finite(q(&OneBodyVector::new(z)))?;
        }
    }

    // coefficient of conj(z)^α z^β for every shift δ' = β' - α' in
    // [-k, k]^{d-1} and every α' in [0, k]^{d-1}
    let span = 2 * k + 1;
    let shifts = span.pow(free as u32);
    let mut coeffs = vec![DVector::<C64>::zeros(radial_points); shifts];
    let mut sd = vec![0usize; free];
    for (s, out) in coeffs.iter_mut().enumerate() {
        digits(s, span, free, &mut sd);
        let delta: Vec<i64> = sd.iter().map(|&x| x as i64 - k as i64).collect();
        let mut rhs = DVector::<C64>::zeros(radial_points);
        for (j, row) in samples.iter().enumerate() {
            digits(j, radial, free, &mut jd);
            let mut acc = C64::new(0.0, 0.0);
            for (m, &value) in row.iter().enumerate() {
                digits(m, order, free, &mut md);
                let phase: i64 = (0..free).map(|i| md[i] as i64 * delta[i]).sum();
                acc += omega[(-phase).rem_euclid(order as i64) as usize] * value;
            }
            let scale: f64 = (0..free).map(|i| nodes[jd[i]].sqrt().powi(-delta[i] as i32)).product();
            rhs[j] = acc * (scale / phase_points as f64);
        }
        *out = kron.map(|x| C64::new(x, 0.0)) * rhs;
    }

    let basis = shape.basis();
    let mut used = vec![vec![false; radial_points]; shifts];
    let mut gamma = DMatrix::<C64>::zeros(shape.dim(), shape.dim());
    for (ai, a) in basis.iter().enumerate() {
        for (bi, b) in basis.iter().enumerate() {
            let (mut s, mut j) = (0usize, 0usize);
            for i in 1..d {
                s = s * span + (b[i] as i64 - a[i] as i64 + k as i64) as usize;
                j = j * radial + a[i] as usize;
            }
            used[s][j] = true;
            gamma[(ai, bi)] = coeffs[s][j] / (multinomial_f64(a) * multinomial_f64(b)).sqrt();
        }
    }
    let scale = gamma.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let leftover = coeffs
        .iter()
        .zip(&used)
        .flat_map(|(c, u)| c.iter().zip(u).filter(|(_, &used)| !used).map(|(z, _)| z.norm()))
        .fold(0.0, f64::max);
    if leftover > CONSISTENCY_TOL * scale {
        return Err(Error::InconsistentEvaluator(leftover / scale));
    }
    let herm = (&gamma + gamma.adjoint()).scale(0.5);
    let defect = crate::max_abs_diff(herm.iter(), gamma.iter());
    if defect > CONSISTENCY_TOL * scale {
        return Err(Error::InconsistentEvaluator(defect / scale));
    }
    let out = SymOperator { shape, matrix: herm };
    validate(&q, &out, 0x7265_636f)?;
    Ok(out)
}

/// Least-squares reconstruction from `samples` Hartree evaluations at
/// random points. The `dim²` real unknowns are the diagonal of `γ` and the
/// real and imaginary parts of its upper triangle.
pub fn reconstruct_least_squares<Q>(q: Q, d: usize, k: usize, samples: usize, seed: u64) -> Result<SymOperator>
where
    Q: Fn(&OneBodyVector) -> f64,
{
    let shape = SpaceShape::new(d, k)?;
    let dim = shape.dim();
    let unknowns = dim * dim;
    if samples < 2 * unknowns {
        return Err(Error::InvalidArgument(format!(
            "{samples} samples for {unknowns} unknowns, need at least {}",
            2 * unknowns
        )));
    }
    if samples.saturating_mul(unknowns) > GRID_LIMIT * 10 {
        return Err(Error::SizeGuard {
            what: "least-squares design matrix",
            size: (samples * unknowns) as u128,
            limit: (GRID_LIMIT * 10) as u128,
        });
    }
    let mut a = DMatrix::<f64>::zeros(samples, unknowns);
    let mut rhs = DVector::<f64>::zeros(samples);
    for row in 0..samples {
        let mut rng = stream(seed, Domain::Tomography, row as u64);
        let u = OneBodyVector(complex_gaussian(&mut rng, d)).normalized();
        rhs[row] = finite(q(&u))?;
        let h = hartree_vector(&u, k)?.amplitudes;
        let mut col = 0;
        for x in 0..dim {
            a[(row, col)] = h[x].norm_sqr();
            col += 1;
            for y in x + 1..dim {
                let w = h[x].conj() * h[y];
                a[(row, col)] = 2.0 * w.re;
                a[(row, col + 1)] = -2.0 * w.im;
                col += 2;
            }
        }
    }
    let svd = a.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let residual = (&a * &sol - &rhs).amax() / rhs.amax().max(1.0);
    if residual > CONSISTENCY_TOL {
        return Err(Error::InconsistentEvaluator(residual));
    }
    let mut gamma = DMatrix::<C64>::zeros(dim, dim);
    let mut col = 0;
    for x in 0..dim {
        gamma[(x, x)] = C64::new(sol[col], 0.0);
        col += 1;
        for y in x + 1..dim {
            let z = C64::new(sol[col], sol[col + 1]);
            gamma[(x, y)] = z;
            gamma[(y, x)] = z.conj();
            col += 2;
        }
    }
    Ok(SymOperator { shape, matrix: gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::trace_norm;
    use crate::rdm::{hartree_expectation, reduce};
    use crate::states::{haar_random_pure, hartree_state, maximally_mixed, random_mixed};

    fn random_hermitian(shape: SpaceShape, seed: u64) -> SymOperator {
        let mut rng = stream(seed, Domain::Test, 3);
        let n = shape.dim();
        let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng, 1)[0]);
        SymOperator::new(shape, (&g + g.adjoint()).scale(0.5)).unwrap()
    }

    fn evaluator(g: &SymOperator) -> impl Fn(&OneBodyVector) -> f64 + '_ {
        move |u| hartree_expectation(g, u).unwrap()
    }

    fn distance(a: &SymOperator, b: &SymOperator) -> f64 {
        trace_norm(&SymOperator {
            shape: a.shape,
            matrix: &a.matrix - &b.matrix,
        })
        .unwrap()
    }

    #[test]
    fn zero_evaluator() {
        let z = OneBodyVector::basis(2, 0);
        assert_eq!(polarize(|_| 0.0, &z, &z, 2).unwrap(), C64::new(0.0, 0.0));
        let g = reconstruct(|_| 0.0, 3, 2).unwrap();
        assert!(g.matrix.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn polarization_matches_inner_products() {
        for (d, k) in [(2, 1), (2, 2), (3, 3)] {
            let g = random_hermitian(SpaceShape::new(d, k).unwrap(), (d * 10 + k) as u64);
            for i in 0..4 {
                let mut rng = stream(i, Domain::Test, 9);
                let u = OneBodyVector(complex_gaussian(&mut rng, d));
                let v = OneBodyVector(complex_gaussian(&mut rng, d));
                let got = polarize(evaluator(&g), &u, &v, k).unwrap();
                let hu = hartree_vector(&u, k).unwrap().amplitudes;
                let hv = hartree_vector(&v, k).unwrap().amplitudes;
                let want = hu.dotc(&(&g.matrix * hv));
                assert!((got - want).norm() < 1e-10 * want.norm().max(1.0));
                let diag = polarize(evaluator(&g), &v, &v, k).unwrap();
                assert!((diag.re - hartree_expectation(&g, &v).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn projector_round_trip() {
        for k in 1..=3 {
            let e1 = OneBodyVector::basis(3, 0);
            let p = hartree_state(&e1, k).unwrap();
            let g = reconstruct(evaluator(p.operator()), 3, k).unwrap();
            assert!(g.max_abs_diff(p.operator()) < 1e-10);
        }
    }

    #[test]
    fn random_hermitian_round_trip() {
        for (d, k) in [(1, 3), (2, 1), (2, 4), (3, 2), (3, 3), (4, 2)] {
            let g = random_hermitian(SpaceShape::new(d, k).unwrap(), 5);
            let h = reconstruct(evaluator(&g), d, k).unwrap();
            assert!(distance(&g, &h) <= 1e-8, "d={d} k={k}");
            assert_eq!(h.hermiticity_defect(), 0.0);
            let ls = reconstruct_least_squares(evaluator(&g), d, k, 2 * g.shape.dim().pow(2) + 10, 3).unwrap();
            assert!(distance(&g, &ls) <= 1e-8, "d={d} k={k}");
        }
    }

    #[test]
    fn factory_states_round_trip() {
        let shape = SpaceShape::new(3, 4).unwrap();
        for s in [
            random_mixed(shape, 3, 2).unwrap(),
            haar_random_pure(shape, 3),
            maximally_mixed(shape),
        ] {
            for k in 1..=3 {
                let gk = reduce(&s, k).unwrap();
                let h = reconstruct(evaluator(gk.operator()), 3, k).unwrap();
                assert!(distance(gk.operator(), &h) <= 1e-8);
            }
        }
    }

    #[test]
    fn injectivity() {
        for (d, k) in [(2, 2), (3, 2), (3, 3)] {
            let shape = SpaceShape::new(d, k).unwrap();
            let a = random_hermitian(shape, 1);
            let b = random_hermitian(shape, 2);
            let diff = SymOperator {
                shape,
                matrix: &a.matrix - &b.matrix,
            };
            let norm = trace_norm(&diff).unwrap();
            let diff = SymOperator {
                shape,
                matrix: diff.matrix.unscale(norm),
            };
            let mut best = 0.0f64;
            for i in 0..200 {
                let u = crate::rng::haar_one_body(d, 44, i);
                best = best.max(hartree_expectation(&diff, &u).unwrap().abs());
            }
            assert!(best > 1e-12);
        }
    }

    #[test]
    fn rejects_bad_evaluators() {
        assert!(matches!(
            reconstruct(|u: &OneBodyVector| u.0[0].norm(), 2, 2),
            Err(Error::InconsistentEvaluator(_))
        ));
        assert!(matches!(reconstruct(|_| f64::NAN, 2, 1), Err(Error::NonFinite)));
        let z = OneBodyVector::basis(2, 0);
        assert!(matches!(polarize(|_| f64::INFINITY, &z, &z, 1), Err(Error::NonFinite)));
        assert!(reconstruct_least_squares(|_| 0.0, 2, 2, 5, 0).is_err());
        assert!(matches!(reconstruct(|_| 0.0, 12, 6), Err(Error::SizeGuard { .. })));
    }
}
