//! The de Finetti construction.
//!
//! A state `Γ` on `(d, N)` defines the probability density
//! `dim(d,N) <u^{⊗N}, Γ u^{⊗N}>` on the unit sphere of `C^d`. Averaging
//! `|u^{⊗k}><u^{⊗k}|` against it gives `γ̃^(k)`, which is computed here by
//! three independent routes: the closed formula in terms of the reduced
//! matrices of `Γ` ([`definetti_rdm_formula`]), exact integration of Haar
//! moments ([`definetti_rdm_oracle`]) and Monte Carlo ([`definetti_rdm_mc`]).

mod formula;
mod haar;
mod mc;
mod oracle;

pub use formula::{definetti_rdm_formula, definetti_rdm_weighted, formula_weights, lower_symbol_density};
pub use haar::{
    haar_monomial_integral, haar_sample, schur_identity_check, HaarMoment, MomentCache, MomentIndexPair, SchurCheck,
    SCHUR_LIMIT,
};
pub use mc::{definetti_rdm_mc, McEstimate, MC_BLOCK};
pub use oracle::{definetti_rdm_oracle, projector_integral_check, ORACLE_LIMIT, PROJECTOR_LIMIT};
