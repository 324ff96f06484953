//! Truncated power series and deformed Artin–Hasse exponentials.
//!
//! The universal series `E_p(U, Λ; X)` is computed once per prime over the
//! Laurent ring `Q[U, Λ^±]`, checked to lie in `Z_(p)[U, Λ]`, and then
//! evaluated in any `Z_(p)`-algebra. Identities that divide by `Λ` or `p^k`
//! are checked over Laurent polynomial rings with rational coefficients.

mod deformed;
mod identities;
mod series;

pub use deformed::{
    artin_hasse, cocycle_coboundary_sides, cocycle_conditions, ep_exponent, ep_product, ep_product_stretched,
    ep_scalar, ep_two_param, ep_witt, fp_cocycle, group_law, padded, substitute_one, top_index, CocycleReport,
    TwoParam,
};
pub use identities::{
    ep_tilde, gp_series, twisted_family, verify_cocycle_quotient, verify_twisted_exponential, verify_correction_quotient,
    verify_factorization, verify_factorization_inverse, verify_fp_cocycle, IdentityReport, SymbolicSetup,
};
pub use series::{Exps, Series, SeriesRing};

use crate::exactring::RingError;
use crate::wittcore::WittError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("unsupported constant term {0}")]
    BadConstantTerm(String),
    #[error("coefficients must contain the rationals: {0}")]
    NonRationalCoefficients(String),
    #[error("coefficient of degree {degree} is not p-integral: {coefficient}")]
    IntegralityViolation { degree: usize, coefficient: String },
    #[error("product and exponent forms differ at degree {degree} ({monomial})")]
    FormMismatch { degree: usize, monomial: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Witt(#[from] WittError),
}
