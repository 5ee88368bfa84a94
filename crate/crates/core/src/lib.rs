//! Complete cd-index of Bruhat intervals in the symmetric group, the path
//! sets `T_M`, lexicographic flips and the flip conditions.
//!
//! ```
//! use cdindex_core::{complete_cd_index, BruhatInterval};
//!
//! let iv = BruhatInterval::build("2134".parse()?, "4321".parse()?)?;
//! let psi = complete_cd_index(&iv)?;
//! assert_eq!(psi.degree(2).to_string(), "2c^2+d");
//! assert_eq!(psi.degree(4).to_string(), "c^4+c^2d+2cdc+dc^2+d^2");
//! # Ok::<(), cdindex_core::Error>(())
//! ```

pub mod bruhat;
pub mod cdindex;
pub mod coxeter;
pub mod flips;
pub mod ncpoly;
pub mod sweep;

pub use bruhat::{
    ad_word, enumerate_paths, export_dot, lex_compare, restrict_first_reflection, BruhatInterval,
    BruhatPath, IntervalError, PathRecord,
};
pub use cdindex::{
    complete_cd_index, complete_cd_index_under, complete_phi, flag_cd_index_oracle,
    order_independent_cd_index, phi_leq_t, shelling_decomposition, CdIndexError, CdIndexReport,
    CompleteCdIndex, ShellingDecomposition,
};
pub use coxeter::{CoxeterError, OrderSpec, Permutation, Reflection, ReflectionOrder};
pub use flips::{FlipError, FlipVerdict, FlipWitness, Orientation, TSetTable, WitnessRecord};
pub use ncpoly::{AdMonomial, AdPolynomial, CdMonomial, CdPolynomial, PolyError};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    CdIndex(#[from] CdIndexError),
    #[error(transparent)]
    Flip(#[from] FlipError),
}
