use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::word::{Letter, Word};
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial};
use crate::rng::{stream, Domain};

/// Exact polynomial `Σ c_{p,q} a*^p a^q` in normal order. Zero coefficients
/// are never stored, so equality of values is equality of structs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl NormalPoly {
    pub fn zero() -> Self {
        NormalPoly::default()
    }

    pub fn one() -> Self {
        NormalPoly::monomial(0, 0, BigInt::one())
    }

    /// `c a*^p a^q`.
    pub fn monomial(p: u32, q: u32, c: BigInt) -> Self {
        let mut out = NormalPoly::zero();
        out.add_term(p, q, c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.terms.iter().map(|(&(p, q), c)| (p, q, c))
    }

    pub fn coeff(&self, p: u32, q: u32) -> BigInt {
        self.terms.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((p, q)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    pub fn add(&self, other: &NormalPoly) -> NormalPoly {
        let mut out = self.clone();
        for (p, q, c) in other.terms() {
            out.add_term(p, q, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NormalPoly) -> NormalPoly {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, s: &BigInt) -> NormalPoly {
        let mut out = NormalPoly::zero();
        for (p, q, c) in self.terms() {
            out.add_term(p, q, c * s);
        }
        out
    }

    /// Product, brought back to normal order with
    /// `a^q a*^r = Σ_j binom(q,j) binom(r,j) j! a*^{r-j} a^{q-j}`.
    pub fn mul(&self, other: &NormalPoly) -> NormalPoly {
        let mut out = NormalPoly::zero();
        for (p, q, c) in self.terms() {
            for (r, s, e) in other.terms() {
                let ce = c * e;
                for j in 0..=q.min(r) {
                    let (ju, qu, ru) = (j as usize, q as usize, r as usize);
                    let w = binomial(qu, ju) * binomial(ru, ju) * factorial(ju);
                    out.add_term(p + r - j, q + s - j, &ce * BigInt::from(w));
                }
            }
        }
        out
    }

    /// Coefficients `c_0..c_n` of `Σ c_k a*^k a^k` if only diagonal terms
    /// occur.
    pub fn diagonal(&self) -> Option<Vec<BigInt>> {
        let mut out = Vec::new();
        for (p, q, c) in self.terms() {
            if p != q {
                return None;
            }
            if out.len() <= p as usize {
                out.resize(p as usize + 1, BigInt::zero());
            }
            out[p as usize] = c.clone();
        }
        Some(out)
    }
}

impl fmt::Display for NormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (p, q, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mag = c.abs();
            let mono = match (p, q) {
                (0, 0) => String::new(),
                _ => {
                    let part = |name: &str, e: u32| match e {
                        0 => String::new(),
                        1 => name.to_string(),
                        _ => format!("{name}^{e}"),
                    };
                    [part("a*", p), part("a", q)]
                        .into_iter()
                        .filter(|s| !s.is_empty())
                        .collect::<Vec<_>>()
                        .join(" ")
                }
            };
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{mag} {mono}")?,
            }
        }
        Ok(())
    }
}

fn letter_poly(l: Letter) -> NormalPoly {
    match l {
        Letter::A => NormalPoly::monomial(0, 1, BigInt::one()),
        Letter::AStar => NormalPoly::monomial(1, 0, BigInt::one()),
    }
}

/// Normal-ordered form of a word, i.e. the result of applying
/// `a a* -> a* a + 1` until no `a` stands left of an `a*`. Computed by
/// multiplying the letters in the canonical algebra.
pub fn normal_order(word: &Word) -> NormalPoly {
    word.0
        .iter()
        .fold(NormalPoly::one(), |acc, &l| acc.mul(&letter_poly(l)))
}

/// `a^n a*^n` in normal order, without the word-length guard.
pub fn anti_normal_power(n: u32) -> NormalPoly {
    let a = NormalPoly::monomial(0, n, BigInt::one());
    let s = NormalPoly::monomial(n, 0, BigInt::one());
    a.mul(&s)
}

/// Which redex the literal rewrite engine contracts next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    Leftmost,
    Rightmost,
    /// Uniformly random redex, deterministic in the seed.
    Random(u64),
}

/// Longest word accepted by [`normal_order_rewrite`].
pub const REWRITE_LIMIT: usize = 20;

/// Normal ordering by literal string rewriting: pick a redex `a a*`
/// according to `strategy`, replace the word by the two words obtained
/// from `a* a` and from deleting the pair, and repeat on every word that is
/// not yet normal.
pub fn normal_order_rewrite(word: &Word, strategy: RewriteStrategy) -> Result<NormalPoly> {
    if word.len() > REWRITE_LIMIT {
        return Err(Error::SizeGuard {
            what: "literal rewriting",
            size: word.len() as u128,
            limit: REWRITE_LIMIT as u128,
        });
    }
    let mut rng = match strategy {
        RewriteStrategy::Random(seed) => Some(stream(seed, Domain::Rewrite, 0)),
        _ => None,
    };
    let mut pending: BTreeMap<Word, BigUint> = BTreeMap::new();
    pending.insert(word.clone(), BigUint::one());
    let mut out = NormalPoly::zero();
    while let Some((w, c)) = pending.pop_first() {
        let redexes = w.redexes();
        if redexes.is_empty() {
            let (p, q) = w.normal_degrees().expect("word without redex is normal");
            out.add_term(p, q, BigInt::from(c));
            continue;
        }
        let i = match strategy {
            RewriteStrategy::Leftmost => redexes[0],
            RewriteStrategy::Rightmost => redexes[redexes.len() - 1],
            RewriteStrategy::Random(_) => {
                let rng = rng.as_mut().expect("random strategy has a stream");
                redexes[rng.random_range(0..redexes.len())]
            }
        };
        let mut swapped = w.0.clone();
        swapped.swap(i, i + 1);
        let mut contracted = w.0.clone();
        contracted.drain(i..i + 2);
        *pending.entry(Word(swapped)).or_default() += &c;
        *pending.entry(Word(contracted)).or_default() += &c;
    }
    Ok(out)
}

/// Diagonal normal form `Σ_k c_k a*^k a^k` with non-negative integer
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub coeffs: Vec<BigUint>,
}

impl NormalForm {
    pub fn to_poly(&self) -> NormalPoly {
        let mut out = NormalPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            out.add_term(k as u32, k as u32, BigInt::from(c.clone()));
        }
        out
    }
}

/// `c_{n,k} = binom(n,k) n!/k!`, the coefficients of `a^n a*^n` in normal
/// order.
pub fn wick_coefficients(n: usize) -> NormalForm {
    let nf = factorial(n);
    NormalForm {
        coeffs: (0..=n).map(|k| binomial(n, k) * (&nf / factorial(k))).collect(),
    }
}
