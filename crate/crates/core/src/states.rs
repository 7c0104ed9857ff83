//! Test states on the symmetric space.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::fock::{hartree_vector, OneBodyVector, SpaceShape, SymOperator, SymVector};
use crate::metrics::hermitian_eig_matrix;
use crate::rng::{complex_gaussian, stream, Domain};
use crate::C64;

/// Hermiticity tolerance of a [`MixedState`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated in a [`MixedState`].
pub const PSD_TOL: f64 = 1e-10;
/// Trace tolerance of a [`MixedState`].
pub const TRACE_TOL: f64 = 1e-12;
/// Norm tolerance for vectors handed to the factories.
pub const NORM_TOL: f64 = 1e-10;

/// A density matrix: Hermitian, positive semi-definite, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    op: SymOperator,
}

impl MixedState {
    /// Validate `op` against the density-matrix invariants.
    pub fn new(op: SymOperator) -> Result<Self> {
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let eig = hermitian_eig_matrix(&op.matrix)?;
        if let Some(&min) = eig.values.first() {
            if min < -PSD_TOL {
                return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(MixedState { op })
    }

    /// Wrap an operator that is a density matrix by construction; only the
    /// Hermitian part is kept.
    pub(crate) fn from_constructed(op: SymOperator) -> Self {
        MixedState {
            op: op.hermitian_part(),
        }
    }

    pub fn shape(&self) -> SpaceShape {
        self.op.shape
    }

    pub fn operator(&self) -> &SymOperator {
        &self.op
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.op.matrix
    }

    pub fn into_operator(self) -> SymOperator {
        self.op
    }

    /// Convex combination `λ self + (1 - λ) other`.
    pub fn mix(&self, other: &MixedState, lambda: f64) -> Result<MixedState> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!("{} vs {}", self.shape(), other.shape())));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("mixing weight {lambda}")));
        }
        Ok(MixedState::from_constructed(SymOperator {
            shape: self.shape(),
            matrix: self.matrix().scale(lambda) + other.matrix().scale(1.0 - lambda),
        }))
    }
}

/// `|v><v|` for a unit vector `v`.
pub fn pure_state(v: &SymVector) -> Result<MixedState> {
    let n = v.norm();
    if (n - 1.0).abs() > NORM_TOL || !n.is_finite() {
        return Err(Error::NotNormalized(n));
    }
    Ok(MixedState::from_constructed(SymOperator::projector(v)))
}

/// The Hartree state `|u^{⊗N}><u^{⊗N}|`.
pub fn hartree_state(u: &OneBodyVector, particles: usize) -> Result<MixedState> {
    u.require_unit(NORM_TOL)?;
    pure_state(&hartree_vector(u, particles)?)
}

/// Pure state of `(u^{⊗N} + v^{⊗N}) / norm`, with
/// `norm² = 2 (1 + Re <u,v>^N)`.
pub fn hartree_superposition(u: &OneBodyVector, v: &OneBodyVector, particles: usize) -> Result<MixedState> {
    u.require_unit(NORM_TOL)?;
    v.require_unit(NORM_TOL)?;
    if u.dim() != v.dim() {
        return Err(Error::ShapeMismatch(format!("{} vs {} modes", u.dim(), v.dim())));
    }
    if (u.inner(v).norm() - 1.0).abs() < 1e-12 {
        return Err(Error::Colinear);
    }
    let overlap = u.inner(v).powu(particles as u32);
    let norm2 = 2.0 * (1.0 + overlap.re);
    let sum = hartree_vector(u, particles)?.amplitudes + hartree_vector(v, particles)?.amplitudes;
    let shape = SpaceShape::new(u.dim(), particles)?;
    pure_state(&SymVector {
        shape,
        amplitudes: sum.unscale(norm2.sqrt()),
    })
}

fn gaussian_unit_vector(shape: SpaceShape, seed: u64, index: u64) -> SymVector {
    let mut rng = stream(seed, Domain::PureState, index);
    loop {
        let g = complex_gaussian(&mut rng, shape.dim());
        let n = g.norm();
        if n > 0.0 {
            return SymVector {
                shape,
                amplitudes: g.unscale(n),
            };
        }
    }
}

/// Unitarily invariant random pure state, deterministic in `seed`.
pub fn haar_random_pure(shape: SpaceShape, seed: u64) -> MixedState {
    MixedState::from_constructed(SymOperator::projector(&gaussian_unit_vector(shape, seed, 0)))
}

/// Dirichlet(1,…,1)-weighted mixture of `rank` independent random pure
/// states, deterministic in `seed`.
pub fn random_mixed(shape: SpaceShape, rank: usize, seed: u64) -> Result<MixedState> {
    if rank == 0 || rank > shape.dim() {
        return Err(Error::RankOutOfRange { rank, dim: shape.dim() });
    }
    let mut wrng = stream(seed, Domain::MixedWeights, 0);
    let raw: Vec<f64> = (0..rank).map(|_| wrng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let mut m = DMatrix::<C64>::zeros(shape.dim(), shape.dim());
    for (j, w) in raw.iter().enumerate() {
        let v = gaussian_unit_vector(shape, seed, j as u64 + 1);
        m += (&v.amplitudes * v.amplitudes.adjoint()).scale(w / total);
    }
    Ok(MixedState::from_constructed(SymOperator { shape, matrix: m }))
}

/// `1 / dim` on the whole space.
pub fn maximally_mixed(shape: SpaceShape) -> MixedState {
    let mut op = SymOperator::identity(shape);
    op.matrix.unscale_mut(shape.dim() as f64);
    MixedState { op }
}

/// Two-mode Hamiltonian `-J (a*_1 a_2 + a*_2 a_1) + (U/2) Σ_i n_i (n_i - 1)`
/// on `(2, N)`, as a dense real-symmetric matrix.
pub fn bose_hubbard_hamiltonian(particles: usize, hopping: f64, interaction: f64) -> Result<DMatrix<f64>> {
    let shape = SpaceShape::new(2, particles)?;
    let basis = shape.basis();
    let dim = shape.dim();
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (i, occ) in basis.iter().enumerate() {
        let (n1, n2) = (occ[0] as f64, occ[1] as f64);
        h[(i, i)] = 0.5 * interaction * (n1 * (n1 - 1.0) + n2 * (n2 - 1.0));
        // a*_1 a_2 |n1, n2> = sqrt((n1+1) n2) |n1+1, n2-1>
        if occ[1] > 0 {
            let j = basis.index_of(&[occ[0] + 1, occ[1] - 1]).expect("hop target");
            let amp = -hopping * ((n1 + 1.0) * n2).sqrt();
            h[(j, i)] += amp;
            h[(i, j)] += amp;
        }
    }
    Ok(h)
}

/// Ground state of the two-mode toy Hamiltonian.
#[derive(Clone, Debug)]
pub struct GroundState {
    pub state: MixedState,
    pub energy: f64,
    /// The lowest eigenvalue is (numerically) degenerate; `state` is then
    /// the first eigenvector in solver order and carries no meaning beyond
    /// lying in the ground space.
    pub degenerate: bool,
    pub gap: f64,
}

/// Relative spectral gap below which the ground state is flagged degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

pub fn bose_hubbard_ground_state(particles: usize, hopping: f64, interaction: f64) -> Result<GroundState> {
    if hopping == 0.0 && interaction == 0.0 {
        return Err(Error::InvalidArgument("J and U cannot both vanish".into()));
    }
    if !hopping.is_finite() || !interaction.is_finite() || hopping < 0.0 {
        return Err(Error::InvalidArgument(format!("J={hopping}, U={interaction}")));
    }
    let h = bose_hubbard_hamiltonian(particles, hopping, interaction)?;
    let hc = h.map(|x| C64::new(x, 0.0));
    let eig = hermitian_eig_matrix(&hc)?;
    let energy = eig.values[0];
    let gap = eig.values.get(1).map_or(f64::INFINITY, |&e1| e1 - energy);
    let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let degenerate = gap < DEGENERACY_TOL * scale;
    let v: DVector<C64> = eig.vector(0);
    let shape = SpaceShape::new(2, particles)?;
    let state = pure_state(&SymVector {
        shape,
        amplitudes: v.unscale(v.norm()),
    })?;
    Ok(GroundState {
        state,
        energy,
        degenerate,
        gap,
    })
}
