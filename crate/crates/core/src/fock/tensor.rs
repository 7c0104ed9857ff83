use nalgebra::DMatrix;

use super::{SpaceShape, SymOperator};
use crate::error::{Error, Result};
use crate::exact::binomial_f64;
use crate::C64;

/// Index and weight table for gluing an occupation `x` of `(d, low)` to a
/// spectator occupation `c` of `(d, rest)`.
///
/// `target(c, x)` is the index of `c + x` in `(d, low + rest)` and
/// `weight(c, x) = sqrt(∏_i binom(c_i + x_i, x_i))`. Both the partial trace
/// and the symmetric tensor product with the identity are sums over this
/// table; they are adjoint to each other up to `binom(low + rest, low)`.
#[derive(Debug, Clone)]
pub struct ShiftTable {
    pub low: SpaceShape,
    pub rest: SpaceShape,
    pub joined: SpaceShape,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl ShiftTable {
    pub fn new(low: SpaceShape, rest: SpaceShape) -> Result<Self> {
        if low.modes() != rest.modes() {
            return Err(Error::ShapeMismatch(format!("{low} vs {rest}")));
        }
        let joined = low.with_particles(low.particles() + rest.particles())?;
        let (lb, rb, jb) = (low.basis(), rest.basis(), joined.basis());
        let mut targets = Vec::with_capacity(low.dim() * rest.dim());
        let mut weights = Vec::with_capacity(low.dim() * rest.dim());
        let mut scratch = vec![0u32; low.modes()];
        for c in rb.iter() {
            for x in lb.iter() {
                let mut w = 1.0;
                for i in 0..scratch.len() {
                    scratch[i] = c[i] + x[i];
                    w *= binomial_f64(scratch[i] as usize, x[i] as usize);
                }
                targets.push(jb.index_of(&scratch).expect("joined occupation"));
                weights.push(w.sqrt());
            }
        }
        Ok(ShiftTable {
            low,
            rest,
            joined,
            targets,
            weights,
        })
    }

    #[inline]
    pub fn target(&self, c: usize, x: usize) -> usize {
        self.targets[c * self.low.dim() + x]
    }

    #[inline]
    pub fn weight(&self, c: usize, x: usize) -> f64 {
        self.weights[c * self.low.dim() + x]
    }
}

/// `A ⊗_s 1_{k-ℓ}` on `(d, k)` for `A` on `(d, ℓ)`: the symmetrization
/// `1/(ℓ!(k-ℓ)!) Σ_{σ∈S_k} A_{σ(1..ℓ)} ⊗ 1_{σ(ℓ+1..k)}`, i.e. the sum of `A`
/// over all `ℓ`-subsets of the `k` particles.
///
/// In second quantization this is `Σ_{x,y} A_{xy} a*^x a^y / sqrt(x! y!)`,
/// which is what gets evaluated here; [`super::full::sym_tensor_op_oracle`]
/// computes the same operator by literally summing over permutations.
pub fn sym_tensor_op(a: &SymOperator, k: usize) -> Result<SymOperator> {
    let low = a.shape;
    if low.particles() > k {
        return Err(Error::OrderTooLarge {
            k: low.particles(),
            particles: k,
        });
    }
    let rest = low.with_particles(k - low.particles())?;
    let table = ShiftTable::new(low, rest)?;
    let out_shape = table.joined;
    let mut m = DMatrix::<C64>::zeros(out_shape.dim(), out_shape.dim());
    for c in 0..rest.dim() {
        for x in 0..low.dim() {
            let (tx, wx) = (table.target(c, x), table.weight(c, x));
            for y in 0..low.dim() {
                let axy = a.matrix[(x, y)];
                if axy == C64::new(0.0, 0.0) {
                    continue;
                }
                m[(tx, table.target(c, y))] += axy * (wx * table.weight(c, y));
            }
        }
    }
    Ok(SymOperator {
        shape: out_shape,
        matrix: m,
    })
}
