use nalgebra::DMatrix;
use rayon::prelude::*;

use super::haar::haar_sample;
use crate::error::{Error, Result};
use crate::fock::{hartree_vector, SymOperator};
use crate::states::MixedState;
use crate::C64;

/// Samples per reduction block. Blocks are the unit of parallel work and
/// are always summed in block order, so the result does not depend on the
/// number of threads.
pub const MC_BLOCK: usize = 1024;

/// Monte Carlo estimate of `γ̃^(k)`.
#[derive(Clone, Debug)]
pub struct McEstimate {
    pub mean: SymOperator,
    /// Entrywise standard error of `mean`, from the variance of the complex
    /// samples.
    pub stderr: DMatrix<f64>,
    pub samples: usize,
}

impl McEstimate {
    pub fn max_stderr(&self) -> f64 {
        self.stderr.iter().copied().fold(0.0, f64::max)
    }
}

struct Partial {
    sum: DMatrix<C64>,
    sum_sq: DMatrix<f64>,
}

/// Sample mean of `dim(d,N) <u^{⊗N}, Γ u^{⊗N}> |u^{⊗k}><u^{⊗k}|` over Haar
/// draws `u = haar_sample(d, seed, i)`, `i < samples`.
pub fn definetti_rdm_mc(state: &MixedState, k: usize, samples: usize, seed: u64) -> Result<McEstimate> {
    let shape = state.shape();
    let (d, n) = (shape.modes(), shape.particles());
    if k > n {
        return Err(Error::OrderTooLarge { k, particles: n });
    }
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "{samples} Monte Carlo samples, need at least 2"
        )));
    }
    let low = shape.with_particles(k)?;
    let dim_n = shape.dim() as f64;
    let gamma = state.operator();
    let blocks = samples.div_ceil(MC_BLOCK);
    let partials: Vec<Result<Partial>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut p = Partial {
                sum: DMatrix::zeros(low.dim(), low.dim()),
                sum_sq: DMatrix::zeros(low.dim(), low.dim()),
            };
            for i in b * MC_BLOCK..((b + 1) * MC_BLOCK).min(samples) {
                let u = haar_sample(d, seed, i as u64);
                let big = hartree_vector(&u, n)?;
                let weight = dim_n * gamma.expectation(&big)?.re;
                let small = hartree_vector(&u, k)?.amplitudes;
                for c in 0..low.dim() {
                    let yc = small[c].conj() * weight;
                    for r in 0..low.dim() {
                        let z = small[r] * yc;
                        p.sum[(r, c)] += z;
                        p.sum_sq[(r, c)] += z.norm_sqr();
                    }
                }
            }
            Ok(p)
        })
        .collect();
    let mut sum = DMatrix::<C64>::zeros(low.dim(), low.dim());
    let mut sum_sq = DMatrix::<f64>::zeros(low.dim(), low.dim());
    for p in partials {
        let p = p?;
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    let count = samples as f64;
    let mean = sum.unscale(count);
    let stderr = DMatrix::from_fn(low.dim(), low.dim(), |r, c| {
        let var = (sum_sq[(r, c)] - count * mean[(r, c)].norm_sqr()) / (count - 1.0);
        (var.max(0.0) / count).sqrt()
    });
    Ok(McEstimate {
        mean: SymOperator {
            shape: low,
            matrix: mean,
        },
        stderr,
        samples,
    })
}
