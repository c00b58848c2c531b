//! Exact computations with Ulrich ideals in hypersurface local rings `R = S/(f)`,
//! where `S` is the localization of a polynomial ring over `ℚ` or `𝔽_p` at the
//! ideal of the variables.
//!
//! The crate is organized bottom-up:
//!
//! * [`field`], [`poly`], [`matrix`]: exact scalars, sparse polynomials, polynomial matrices.
//! * [`engine`]: colength, membership and generator counts of 𝔪-primary ideals,
//!   computed by echelon forms in truncations `S/𝔪^N`.
//! * [`ulrich`]: certificate verification, the direct Ulrich test, necessary
//!   conditions and decomposable pairs.
//! * [`resolution`]: Koszul matrices, the block-built minimal free resolution of
//!   `R/I` and its matrix factorization.
//! * [`catalog`]: the classified families for `f = Y^k` and `f = X^kY`, the
//!   decomposable enumerator and a brute-force search oracle.
//! * [`wire`]: the JSON formats shared by the CLI and the C bindings.

pub mod catalog;
pub mod engine;
pub mod error;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod resolution;
pub mod ulrich;
pub mod wire;

mod parse;

pub use parse::parse_poly_list;

pub use engine::{Engine, LocalIdeal, SopStatus, Truncation};
pub use error::{Error, Result};
pub use field::{Field, FieldElem};
pub use matrix::PolyMatrix;
pub use poly::{Monomial, Poly, Ring};
