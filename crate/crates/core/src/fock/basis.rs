//! Occupation-number labelling of the symmetric space and its index maps.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exact::binomial_u128;

/// Dimension of the bosonic space of `particles` bosons in `modes` modes,
/// `binom(N + d - 1, d - 1)`.
pub fn sym_dimension(modes: usize, particles: usize) -> Result<u64> {
    if modes == 0 {
        return Err(Error::ZeroModes);
    }
    let n = (particles + modes - 1) as u64;
    binomial_u128(n, (modes - 1) as u64)
        .and_then(|v| u64::try_from(v).ok())
        .ok_or(Error::DimensionOverflow { modes, particles })
}

/// Mode count `d` and particle number `N` of a symmetric space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceShape {
    modes: usize,
    particles: usize,
    dim: usize,
}

impl SpaceShape {
    pub fn new(modes: usize, particles: usize) -> Result<Self> {
        let dim = sym_dimension(modes, particles)?;
        let dim = usize::try_from(dim).map_err(|_| Error::DimensionOverflow { modes, particles })?;
        Ok(SpaceShape { modes, particles, dim })
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    pub fn particles(&self) -> usize {
        self.particles
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Same mode count, different particle number.
    pub fn with_particles(&self, particles: usize) -> Result<SpaceShape> {
        SpaceShape::new(self.modes, particles)
    }

    /// The cached basis of this shape.
    pub fn basis(&self) -> Arc<Basis> {
        cached_basis(*self)
    }
}

impl fmt::Display for SpaceShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, N={})", self.modes, self.particles)
    }
}

/// Mode occupations of one basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector(pub Vec<u32>);

impl OccupationVector {
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }
}

impl From<&[u32]> for OccupationVector {
    fn from(c: &[u32]) -> Self {
        OccupationVector(c.to_vec())
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Occupation basis of a [`SpaceShape`] in reverse-lexicographic order,
/// with O(d) ranking.
#[derive(Debug)]
pub struct Basis {
    shape: SpaceShape,
    occ: Vec<u32>,
    // tail_dims[i][r] = number of ways to put r bosons into modes i..d
    tail_dims: Vec<Vec<usize>>,
}

impl Basis {
    fn build(shape: SpaceShape) -> Basis {
        let d = shape.modes;
        let n = shape.particles;
        let mut tail_dims = vec![vec![0usize; n + 1]; d + 1];
        for (i, row) in tail_dims.iter_mut().enumerate().take(d) {
            for (r, slot) in row.iter_mut().enumerate() {
                // all tail shapes are no larger than `shape`, so this cannot overflow
                *slot = sym_dimension(d - i, r).expect("tail dimension") as usize;
            }
        }
        tail_dims[d][0] = 1;

        let mut occ = Vec::with_capacity(shape.dim * d);
        let mut scratch = vec![0u32; d];
        fill(&mut scratch, 0, n, &mut occ);
        debug_assert_eq!(occ.len(), shape.dim * d);
        Basis { shape, occ, tail_dims }
    }

    pub fn shape(&self) -> SpaceShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn occupation(&self, index: usize) -> &[u32] {
        let d = self.shape.modes;
        &self.occ[index * d..(index + 1) * d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.occ.chunks_exact(self.shape.modes)
    }

    /// Position of `counts` in this basis, `None` if it does not belong to it.
    pub fn index_of(&self, counts: &[u32]) -> Option<usize> {
        let d = self.shape.modes;
        if counts.len() != d {
            return None;
        }
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        if total != self.shape.particles {
            return None;
        }
        let mut rank = 0usize;
        let mut rem = total;
        for (i, &c) in counts.iter().enumerate().take(d - 1) {
            let c = c as usize;
            // vectors with a larger count in slot i come first
            if rem > c {
                rank += self.tail_dims[i][rem - c - 1];
            }
            rem -= c;
        }
        Some(rank)
    }
}

fn fill(scratch: &mut [u32], pos: usize, rem: usize, out: &mut Vec<u32>) {
    let d = scratch.len();
    if pos == d - 1 {
        scratch[pos] = rem as u32;
        out.extend_from_slice(scratch);
        return;
    }
    for c in (0..=rem).rev() {
        scratch[pos] = c as u32;
        fill(scratch, pos + 1, rem - c, out);
    }
}

fn cached_basis(shape: SpaceShape) -> Arc<Basis> {
    type Cache = Mutex<HashMap<SpaceShape, Arc<OnceLock<Arc<Basis>>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cell = {
        let mut map = CACHE
            .get_or_init(Default::default)
            .lock()
            .unwrap_or_else(|e| e.into_inner());
        map.entry(shape).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(Basis::build(shape))).clone()
}

/// All occupation vectors of `shape`, in basis order.
pub fn enumerate_basis(shape: SpaceShape) -> Vec<OccupationVector> {
    shape.basis().iter().map(OccupationVector::from).collect()
}
