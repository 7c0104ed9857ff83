//! Brute-force oracles in the full tensor space `(C^d)^{⊗N}`.
//!
//! A word `I = (i_1, ..., i_N)` is encoded base `d` with `i_1` most
//! significant. The symmetric basis vector `|α>` embeds as
//! `sqrt(α!/N!) Σ_{occ(I)=α} e_I`.

use nalgebra::{DMatrix, DVector};

use super::{OneBodyVector, SpaceShape, SymOperator, SymVector};
use crate::error::{Error, Result};
use crate::exact::{factorial_f64, multinomial_f64};
use crate::C64;

/// Largest full-space dimension [`embed_full`] accepts.
pub const EMBED_LIMIT: u128 = 1_000_000;

pub fn full_dimension(modes: usize, particles: usize) -> Option<u128> {
    (modes as u128).checked_pow(particles as u32)
}

pub fn guard(what: &'static str, modes: usize, particles: usize, limit: u128) -> Result<usize> {
    let size = full_dimension(modes, particles).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SizeGuard { what, size, limit });
    }
    Ok(size as usize)
}

/// For every word of length `shape.particles()`, the basis index of its
/// occupation and the embedding coefficient `sqrt(α!/N!)`.
pub fn word_table(shape: SpaceShape) -> Result<Vec<(usize, f64)>> {
    let size = guard("word table", shape.modes(), shape.particles(), EMBED_LIMIT)?;
    let d = shape.modes();
    let n = shape.particles();
    let basis = shape.basis();
    let mut digits = vec![0usize; n];
    let mut occ = vec![0u32; d];
    if n > 0 {
        occ[0] = n as u32;
    }
    let mut out = Vec::with_capacity(size);
    for word in 0..size {
        if word > 0 {
            // odometer increment from the least significant digit
            let mut pos = n;
            loop {
                pos -= 1;
                occ[digits[pos]] -= 1;
                digits[pos] += 1;
                if digits[pos] == d {
                    digits[pos] = 0;
                    occ[0] += 1;
                } else {
                    occ[digits[pos]] += 1;
                    break;
                }
            }
        }
        let idx = basis.index_of(&occ).expect("word occupation");
        out.push((idx, multinomial_f64(&occ).recip().sqrt()));
    }
    Ok(out)
}

/// Isometric embedding of the symmetric space into the full tensor space.
pub fn embed_full(v: &SymVector) -> Result<DVector<C64>> {
    let table = word_table(v.shape)?;
    Ok(DVector::from_iterator(
        table.len(),
        table.iter().map(|&(idx, w)| v.amplitudes[idx] * w),
    ))
}

/// Adjoint of [`embed_full`]: orthogonal projection onto the symmetric
/// subspace, expressed in the occupation basis.
pub fn compress_full(x: &DVector<C64>, shape: SpaceShape) -> Result<SymVector> {
    let table = word_table(shape)?;
    if x.len() != table.len() {
        return Err(Error::ShapeMismatch(format!(
            "full vector of length {} for {}",
            x.len(),
            shape
        )));
    }
    let mut amps = DVector::zeros(shape.dim());
    for (&(idx, w), &xi) in table.iter().zip(x.iter()) {
        amps[idx] += xi * w;
    }
    Ok(SymVector {
        shape,
        amplitudes: amps,
    })
}

/// `u ⊗ u ⊗ ... ⊗ u` (`n` factors) as a Kronecker product.
pub fn kron_power(u: &OneBodyVector, n: usize) -> DVector<C64> {
    let mut acc = DVector::from_element(1, C64::new(1.0, 0.0));
    for _ in 0..n {
        acc = acc.kronecker(&u.0);
    }
    acc
}

/// Dense full-space matrix of an operator on the symmetric space,
/// `V A V^†`.
pub fn lift_operator(a: &SymOperator) -> Result<DMatrix<C64>> {
    let table = word_table(a.shape)?;
    let n = table.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let (ii, wi) = table[i];
        let (jj, wj) = table[j];
        a.matrix[(ii, jj)] * (wi * wj)
    }))
}

/// Apply `B` (acting on `slots.len()` tensor factors, dense in the full
/// space of those factors) to the factors listed in `slots`, identity on
/// the rest. `slots[j]` is the position of the `j`-th factor of `B`.
fn apply_on_slots(b: &DMatrix<C64>, d: usize, k: usize, slots: &[usize], x: &DVector<C64>) -> DVector<C64> {
    let size = x.len();
    let l = slots.len();
    let pow: Vec<usize> = (0..k).map(|p| d.pow((k - 1 - p) as u32)).collect();
    let mut out = DVector::zeros(size);
    let sub = d.pow(l as u32);
    for word in 0..size {
        // digits of `word` at the slots, and the word with those digits zeroed
        let mut row = 0usize;
        let mut base = word;
        for &s in slots {
            let digit = (word / pow[s]) % d;
            row = row * d + digit;
            base -= digit * pow[s];
        }
        let mut acc = C64::new(0.0, 0.0);
        for col in 0..sub {
            let bij = b[(row, col)];
            if bij == C64::new(0.0, 0.0) {
                continue;
            }
            let mut j = base;
            let mut rem = col;
            for &s in slots.iter().rev() {
                j += (rem % d) * pow[s];
                rem /= d;
            }
            acc += bij * x[j];
        }
        out[word] = acc;
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Permutation-sum oracle for [`super::sym_tensor_op`]:
/// `1/(ℓ!(k-ℓ)!) Σ_{σ∈S_k} A_{σ(1..ℓ)} ⊗ 1`, applied to every embedded
/// basis vector of `(d, k)` and compressed back.
pub fn sym_tensor_op_oracle(a: &SymOperator, k: usize) -> Result<SymOperator> {
    let l = a.shape.particles();
    let d = a.shape.modes();
    if l > k {
        return Err(Error::OrderTooLarge { k: l, particles: k });
    }
    if k > 6 {
        return Err(Error::SizeGuard {
            what: "permutation oracle order",
            size: k as u128,
            limit: 6,
        });
    }
    guard("permutation oracle", d, k, 100_000)?;
    let out_shape = a.shape.with_particles(k)?;
    let lifted = lift_operator(a)?;
    let perms = permutations(k);
    let prefactor = 1.0 / (factorial_f64(l) * factorial_f64(k - l));
    let basis = out_shape.basis();
    let mut m = DMatrix::zeros(out_shape.dim(), out_shape.dim());
    for col in 0..out_shape.dim() {
        let x = embed_full(&SymVector::basis_vector(out_shape, basis.occupation(col))?)?;
        let mut y = DVector::zeros(x.len());
        for sigma in &perms {
            y += apply_on_slots(&lifted, d, k, &sigma[..l], &x);
        }
        y *= C64::new(prefactor, 0.0);
        m.set_column(col, &compress_full(&y, out_shape)?.amplitudes);
    }
    Ok(SymOperator {
        shape: out_shape,
        matrix: m,
    })
}

/// Symmetric tensor product of vectors,
/// `Ψ_ℓ ⊗_s Φ_{k-ℓ} = (ℓ!(k-ℓ)!k!)^{-1/2} Σ_{σ∈S_k} Ψ_ℓ(x_{σ(1..ℓ)}) Φ(x_{σ(ℓ+1..k)})`,
/// evaluated literally in the full space.
pub fn sym_tensor_vectors(psi: &SymVector, phi: &SymVector) -> Result<SymVector> {
    let d = psi.shape.modes();
    if phi.shape.modes() != d {
        return Err(Error::ShapeMismatch(format!("{} vs {}", psi.shape, phi.shape)));
    }
    let l = psi.shape.particles();
    let k = l + phi.shape.particles();
    if k > 6 {
        return Err(Error::SizeGuard {
            what: "permutation oracle order",
            size: k as u128,
            limit: 6,
        });
    }
    let size = guard("symmetric tensor product", d, k, 100_000)?;
    let a = embed_full(psi)?;
    let b = embed_full(phi)?;
    let prod = a.kronecker(&b);
    let pow: Vec<usize> = (0..k).map(|p| d.pow((k - 1 - p) as u32)).collect();
    let mut out = DVector::zeros(size);
    for sigma in permutations(k) {
        // factor slot p of `prod` lands on output position sigma[p]
        for (word, &val) in prod.iter().enumerate() {
            let mut target = 0usize;
            for (p, &s) in sigma.iter().enumerate() {
                target += ((word / pow[p]) % d) * pow[s];
            }
            out[target] += val;
        }
    }
    let scale = (factorial_f64(l) * factorial_f64(k - l) * factorial_f64(k))
        .sqrt()
        .recip();
    out *= C64::new(scale, 0.0);
    compress_full(&out, psi.shape.with_particles(k)?)
}

/// Literal partial trace over the last `n - k` factors of the full-space
/// lift of `rho`, compressed back to `(d, k)`.
///
/// For every traced word `t` the kept words `i` are summed into their
/// occupation `x`, so no full-space matrix is formed:
/// `m[x, y] += c_t(x) c_t(y) rho[occ(i t), occ(j t)]` with
/// `c_t(x) = Σ_{occ(i) = x} w(i) w(i t)`.
pub fn partial_trace_oracle(rho: &SymOperator, k: usize) -> Result<SymOperator> {
    let shape = rho.shape;
    let n = shape.particles();
    if k > n {
        return Err(Error::OrderTooLarge { k, particles: n });
    }
    guard("partial trace oracle", shape.modes(), n, 100_000)?;
    let d = shape.modes();
    let table = word_table(shape)?;
    let out_shape = shape.with_particles(k)?;
    let small = word_table(out_shape)?;
    let traced = d.pow((n - k) as u32);
    let dk = out_shape.dim();
    let mut m = DMatrix::<C64>::zeros(dk, dk);
    let mut coef = vec![0.0f64; dk];
    let mut target = vec![0usize; dk];
    for t in 0..traced {
        coef.iter_mut().for_each(|c| *c = 0.0);
        for (i, &(x, wi)) in small.iter().enumerate() {
            let (xx, wn) = table[i * traced + t];
            coef[x] += wi * wn;
            target[x] = xx;
        }
        for x in 0..dk {
            for y in 0..dk {
                m[(x, y)] += rho.matrix[(target[x], target[y])] * (coef[x] * coef[y]);
            }
        }
    }
    Ok(SymOperator {
        shape: out_shape,
        matrix: m,
    })
}
