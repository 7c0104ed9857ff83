use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::laguerre::{laguerre, modified_laguerre, LaguerrePoly};
use super::normal::{anti_normal_power, wick_coefficients, NormalPoly};
use crate::error::{Error, Result};

/// Outcome of the exact checks at one order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceRow {
    pub n: usize,
    /// `(n+1) L_{n+1} = (2n+1) L_n - x L_n - n L_{n-1}`.
    pub classic: bool,
    /// `L̃_{n+1} = (2n+1) L̃_n + x L̃_n - n² L̃_{n-1}`.
    pub modified: bool,
    /// `a^n a*^n = Σ_k c_{n,k} a*^k a^k` with `c_{n,k}` the coefficients of
    /// `L̃_n`.
    pub wick_identity: bool,
    /// `a^{n+1} a*^{n+1} = a* a^n a*^n a + (2n+1) a^n a*^n - n² a^{n-1} a*^{n-1}`.
    pub operator: bool,
    /// `a a*^n = a*^n a + n a*^{n-1}` and `a^n a* = a* a^n + n a^{n-1}`.
    pub ladder: bool,
}

impl RecurrenceRow {
    pub fn pass(&self) -> bool {
        self.classic && self.modified && self.wick_identity && self.operator && self.ladder
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub rows: Vec<RecurrenceRow>,
}

impl RecurrenceReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(RecurrenceRow::pass)
    }
}

impl fmt::Display for RecurrenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        writeln!(
            f,
            "{:>3}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}",
            "n", "classic", "modified", "wick", "operator", "ladder"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3}  {:>8}  {:>8}  {:>8}  {:>8}  {:>8}",
                r.n,
                mark(r.classic),
                mark(r.modified),
                mark(r.wick_identity),
                mark(r.operator),
                mark(r.ladder)
            )?;
        }
        Ok(())
    }
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn mono(p: u32, q: u32) -> NormalPoly {
    NormalPoly::monomial(p, q, BigInt::one())
}

fn diagonal_poly(l: &LaguerrePoly) -> Option<NormalPoly> {
    let mut out = NormalPoly::zero();
    for (k, c) in l.coeffs.iter().enumerate() {
        if !c.is_integer() {
            return None;
        }
        out.add_term(k as u32, k as u32, c.to_integer());
    }
    Some(out)
}

/// Check the Laguerre recurrences, the normal-ordering identity and the
/// operator recursions exactly for `1 <= n <= n_max`.
pub fn verify_recurrences(n_max: usize) -> Result<RecurrenceReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max = {n_max}, need at least 2")));
    }
    let lag: Vec<LaguerrePoly> = (0..=n_max + 1).map(laguerre).collect();
    let modl: Vec<LaguerrePoly> = (0..=n_max + 1).map(modified_laguerre).collect();
    let powers: Vec<NormalPoly> = (0..=n_max as u32 + 1).map(anti_normal_power).collect();
    let rows = (1..=n_max)
        .map(|n| {
            let nn = n as u32;
            let lhs = lag[n + 1].scale(&int(n + 1));
            let rhs = lag[n]
                .combine(&int(2 * n + 1), &lag[n].shift_x(), &-BigRational::one())
                .combine(&BigRational::one(), &lag[n - 1], &-int(n));
            let classic = lhs.same_polynomial(&rhs);

            let rhs = modl[n]
                .combine(&int(2 * n + 1), &modl[n].shift_x(), &BigRational::one())
                .combine(&BigRational::one(), &modl[n - 1], &-int(n * n));
            let modified = modl[n + 1].same_polynomial(&rhs) && modl[n + 1].coeffs.len() == n + 2;

            let wick = wick_coefficients(n).to_poly();
            let wick_identity = powers[n] == wick && diagonal_poly(&modl[n]).as_ref() == Some(&wick);

            let rhs = mono(1, 0)
                .mul(&powers[n])
                .mul(&mono(0, 1))
                .add(&powers[n].scale(&BigInt::from(2 * n + 1)))
                .sub(&powers[n - 1].scale(&BigInt::from(n * n)));
            let operator = powers[n + 1] == rhs;

            let k = BigInt::from(n);
            let ladder = mono(0, 1).mul(&mono(nn, 0)) == mono(nn, 1).add(&mono(nn - 1, 0).scale(&k))
                && mono(0, nn).mul(&mono(1, 0)) == mono(1, nn).add(&mono(0, nn - 1).scale(&k));

            RecurrenceRow {
                n,
                classic,
                modified,
                wick_identity,
                operator,
                ladder,
            }
        })
        .collect();
    Ok(RecurrenceReport { rows })
}

/// Largest truncation level accepted by [`truncated_fock_check`].
pub const MAX_CUTOFF: usize = 200;

fn ladder_matrices(cutoff: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let size = cutoff + 1;
    let a = DMatrix::from_fn(size, size, |r, c| if c == r + 1 { (c as f64).sqrt() } else { 0.0 });
    let adag = a.transpose();
    (a, adag)
}

/// Compare `a^n a*^n` with `Σ_k c_{n,k} a*^k a^k` as `(M+1)×(M+1)` matrices
/// on the levels `0..=M-n`, which truncation cannot reach. Returns the
/// largest entrywise deviation relative to `max(1, |rhs|)`.
pub fn truncated_fock_check(n: usize, cutoff: usize) -> Result<f64> {
    if n >= cutoff {
        return Err(Error::InvalidArgument(format!(
            "order {n} must be below the cutoff {cutoff}"
        )));
    }
    if cutoff > MAX_CUTOFF {
        return Err(Error::SizeGuard {
            what: "truncated Fock cutoff",
            size: cutoff as u128,
            limit: MAX_CUTOFF as u128,
        });
    }
    let (a, adag) = ladder_matrices(cutoff);
    let size = cutoff + 1;
    let power = |m: &DMatrix<f64>, e: usize| (0..e).fold(DMatrix::identity(size, size), |acc, _| acc * m);
    let lhs = power(&a, n) * power(&adag, n);
    let mut rhs = DMatrix::<f64>::zeros(size, size);
    for (k, c) in wick_coefficients(n).coeffs.iter().enumerate() {
        let c = c.to_f64().unwrap_or(f64::INFINITY);
        rhs += (power(&adag, k) * power(&a, k)).scale(c);
    }
    let valid = cutoff - n;
    let mut worst = 0.0f64;
    for r in 0..=valid {
        for c in 0..=valid {
            let dev = (lhs[(r, c)] - rhs[(r, c)]).abs() / rhs[(r, c)].abs().max(1.0);
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrences_hold_to_twelve() {
        let report = verify_recurrences(12).unwrap();
        assert_eq!(report.rows.len(), 12);
        assert!(report.all_pass(), "{report}");
        assert!(verify_recurrences(1).is_err());
    }

    #[test]
    fn modified_relation_at_one() {
        let l = modified_laguerre(1);
        let got = l.combine(&int(3), &l.shift_x(), &BigRational::one()).combine(
            &BigRational::one(),
            &modified_laguerre(0),
            &-BigRational::one(),
        );
        assert!(got.same_polynomial(&LaguerrePoly::from_integers(&[2, 4, 1])));
    }

    #[test]
    fn truncated_examples() {
        assert!(truncated_fock_check(1, 10).unwrap() < 1e-12);
        assert!(truncated_fock_check(2, 30).unwrap() <= 1e-9);
        assert!(truncated_fock_check(6, 60).unwrap() <= 1e-9);
        assert!(truncated_fock_check(3, 3).is_err());
        assert!(truncated_fock_check(3, 201).is_err());
    }

    #[test]
    fn truncation_edge_is_excluded() {
        // at level M the product a a* sees the missing level M+1
        let (a, adag) = ladder_matrices(10);
        let prod = &a * &adag;
        assert_eq!(prod[(10, 10)], 0.0);
        assert!((prod[(9, 9)] - 10.0).abs() < 1e-12);
    }
}
