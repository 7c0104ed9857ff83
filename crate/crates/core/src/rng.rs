//! Counter-based random streams.
//!
//! Every random object is drawn from a ChaCha stream keyed by
//! `(seed, domain)` and selected by a stream index, so the value of sample
//! `i` never depends on how many other samples were drawn before it or on
//! which thread drew it.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fock::OneBodyVector;
use crate::C64;

/// Separates the key space of independent consumers of the same seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Haar = 0x6861_6172,
    PureState = 0x7075_7265,
    MixedWeights = 0x6d69_7877,
    Tomography = 0x746f_6d6f,
    Test = 0x7465_7374,
    Rewrite = 0x7772_6974,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(domain as u64)));
    rng.set_stream(index);
    rng
}

/// `n` independent standard complex Gaussians (unit variance on each of the
/// real and imaginary parts).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<C64> {
    DVector::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed unit vector of `C^d`, deterministic in `(seed, index)`.
pub fn haar_one_body(d: usize, seed: u64, index: u64) -> OneBodyVector {
    let mut rng = stream(seed, Domain::Haar, index);
    loop {
        let g = complex_gaussian(&mut rng, d);
        let n = g.norm();
        if n > 0.0 {
            return OneBodyVector(g.unscale(n));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a = haar_one_body(4, 7, 3);
        assert_eq!(a, haar_one_body(4, 7, 3));
        assert_ne!(a, haar_one_body(4, 7, 4));
        assert_ne!(a, haar_one_body(4, 8, 3));
        assert!((a.norm() - 1.0).abs() < 1e-12);
    }
}
