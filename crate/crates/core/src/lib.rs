//! Exact computations with Hilbert functions, `Tor` lengths and the
//! invariant `e^T` for modules over graded quotient rings.
//!
//! All arithmetic happens over an exact [`Field`]; the aliases [`F32003`],
//! [`F3`] and [`Rational`] cover the usual choices.

pub mod catalog;
pub mod error;
pub mod ext;
pub mod field;
pub mod filtration;
pub mod fit;
pub mod graded;
pub mod homology;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod newton;
pub mod poly;
pub mod ring;
pub mod sequence;
pub mod truncate;

pub use error::{Error, Result};
pub use ext::ExtGroup;
pub use field::{DynFp, Field, Fp, Rational};
pub use filtration::{Filtration, FiltrationKind};
pub use fit::PolyFit;
pub use homology::{etor, tor_length, tor_table, EtorMethod};
pub use matrix::PolyMatrix;
pub use module::Module;
pub use poly::Polynomial;
pub use ring::Ring;
pub use sequence::ShortExactSequence;

/// The prime field with 32003 elements.
pub type F32003 = Fp<32003>;
/// The prime field with 3 elements.
pub type F3 = Fp<3>;
