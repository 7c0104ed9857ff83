//! Exact single-mode CCR algebra: normal ordering, the coefficients of
//! `a^n a*^n` in normal order, Laguerre polynomials and truncated-Fock
//! matrix checks.

mod checks;
mod laguerre;
mod normal;
mod word;

pub use checks::{truncated_fock_check, verify_recurrences, RecurrenceReport, RecurrenceRow, MAX_CUTOFF};
pub use laguerre::{laguerre, modified_laguerre, LaguerrePoly};
pub use normal::{
    anti_normal_power, normal_order, normal_order_rewrite, wick_coefficients, NormalForm, NormalPoly, RewriteStrategy,
    REWRITE_LIMIT,
};
pub use word::{Letter, Word, MAX_WORD_LEN};

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn wick_coefficients_match_modified_laguerre() {
        for n in 0..=20 {
            let c = wick_coefficients(n);
            let l = modified_laguerre(n);
            assert_eq!(c.coeffs.len(), l.coeffs.len());
            for (a, b) in c.coeffs.iter().zip(&l.coeffs) {
                assert!(b.is_integer());
                assert_eq!(BigInt::from(a.clone()), b.to_integer());
            }
        }
    }
}
