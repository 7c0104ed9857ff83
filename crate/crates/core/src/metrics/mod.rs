//! Hermitian spectral tools, the trace-norm distance and the explicit
//! error bounds relating `γ^(k)` to its de Finetti approximation.

mod bounds;

pub use bounds::{
    c_constant, c_constant_factorial_form, dimension_ratio_bounds, explicit_formula_bound,
    explicit_formula_bound_exact, intermediate_product_bound, linear_bound, linear_bound_exact, one_minus_c_bound,
    one_minus_c_bound_exact, trace_bound, trace_bound_exact, BoundChecks, BoundReport, DimensionRatio, ExactValue,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fock::SymOperator;
use crate::C64;

/// Hermiticity tolerance accepted by the spectral routines.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: DMatrix<C64>,
}

impl Eigen {
    pub fn vector(&self, i: usize) -> DVector<C64> {
        self.vectors.column(i).into_owned()
    }
}

fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig_matrix(m: &DMatrix<C64>) -> Result<Eigen> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix", m.nrows(), m.ncols())));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Eigensolver(format!("no convergence on a {n}x{n} matrix")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

pub fn hermitian_eig(m: &SymOperator) -> Result<Eigen> {
    hermitian_eig_matrix(&m.matrix)
}

/// Undivided trace norm `Tr|X - Y|` of two Hermitian operators.
pub fn trace_distance(x: &SymOperator, y: &SymOperator) -> Result<f64> {
    if x.shape != y.shape {
        return Err(Error::ShapeMismatch(format!("{} vs {}", x.shape, y.shape)));
    }
    let eig = hermitian_eig_matrix(&(&x.matrix - &y.matrix))?;
    Ok(eig.values.iter().map(|v| v.abs()).sum())
}

/// Trace norm of a single Hermitian operator.
pub fn trace_norm(x: &SymOperator) -> Result<f64> {
    Ok(hermitian_eig(x)?.values.iter().map(|v| v.abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::SpaceShape;
    use crate::rng::{complex_gaussian, stream, Domain};

    fn diag(shape: SpaceShape, vals: &[f64]) -> SymOperator {
        let mut m = SymOperator::zeros(shape);
        for (i, &v) in vals.iter().enumerate() {
            m.matrix[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<C64> {
        let mut rng = stream(seed, Domain::Test, 1);
        let g = DMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng, 1)[0]);
        (&g + g.adjoint()).scale(0.5)
    }

    #[test]
    fn diagonal_and_identity() {
        let shape = SpaceShape::new(3, 1).unwrap();
        let e = hermitian_eig(&diag(shape, &[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        let e = hermitian_eig(&SymOperator::identity(shape)).unwrap();
        assert!(e.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn spectral_round_trip_and_residuals() {
        for (n, seed) in [(1, 1), (5, 2), (20, 3), (60, 4)] {
            let m = random_hermitian(n, seed);
            let e = hermitian_eig_matrix(&m).unwrap();
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let scale = m.norm();
            for (i, &lam) in e.values.iter().enumerate() {
                let v = e.vector(i);
                let r = &m * &v - v.map(|z| z * lam);
                assert!(r.norm() <= 1e-10 * scale);
            }
            let lam = DMatrix::from_diagonal(&DVector::from_iterator(n, e.values.iter().map(|&v| C64::new(v, 0.0))));
            let back = &e.vectors * lam * e.vectors.adjoint();
            assert!(crate::max_abs_diff(back.iter(), m.iter()) < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(hermitian_eig_matrix(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn trace_distance_examples() {
        let shape = SpaceShape::new(2, 1).unwrap();
        let x = diag(shape, &[1.0, 0.0]);
        let y = diag(shape, &[2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(trace_distance(&x, &x).unwrap(), 0.0);
        assert!((trace_distance(&x, &y).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let other = SymOperator::zeros(SpaceShape::new(2, 2).unwrap());
        assert!(matches!(trace_distance(&x, &other), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn metric_axioms() {
        let shape = SpaceShape::new(3, 2).unwrap();
        for seed in 0..10 {
            let ops: Vec<SymOperator> = (0..3)
                .map(|j| SymOperator::new(shape, random_hermitian(6, seed * 3 + j)).unwrap())
                .collect();
            let dxy = trace_distance(&ops[0], &ops[1]).unwrap();
            let dyx = trace_distance(&ops[1], &ops[0]).unwrap();
            let dyz = trace_distance(&ops[1], &ops[2]).unwrap();
            let dxz = trace_distance(&ops[0], &ops[2]).unwrap();
            assert!((dxy - dyx).abs() < 1e-12);
            assert!(dxz <= dxy + dyz + 1e-12);
            assert!(dxy >= 0.0);
        }
    }
}
