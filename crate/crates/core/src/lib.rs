//! Exact bracketing of nonnegative matrix rank.
//!
//! The nonnegative rank of a matrix over a field is the smallest number of
//! nonnegative rank-one summands (with entries in that field) adding up to
//! it. Deciding it exactly is hard, so this crate brackets it instead:
//!
//! * exact lower bounds from the conventional rank and from the rectangle
//!   covering number of the support pattern ([`bounds`]);
//! * exact upper bounds from rank-one factorization certificates, verified
//!   entrywise with no tolerance ([`certificates`]);
//! * a floating-point multiplicative-update probe for empirical evidence at
//!   ranks where no certificate is known ([`nmf`]).
//!
//! All exact computation runs over `Q` or a quadratic extension
//! `Q(sqrt D)` with exact sign determination ([`field`]). The
//! [`constructions`] module ships a family of matrices whose nonnegative
//! rank over `Q(sqrt 2)` is witnessed by built-in certificates — including a
//! 21x21 integer matrix `A` with a 19-factor certificate whose entries are
//! irrational.

pub mod bounds;
pub mod certificates;
pub mod constructions;
pub mod field;
pub mod matrix;
pub mod nmf;

pub use bounds::{nnr_bracket, BoundReport, Bracket, SupportPattern};
pub use certificates::{verify, Certificate, RankOneFactor, VerificationReport};
pub use field::{FieldDescriptor, QuadraticNumber, Rational, Scalar, Sign};
pub use matrix::{ExactMatrix, IndexSet};
