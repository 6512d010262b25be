//! Typed tensor composition of word meanings.
//!
//! Words carry pregroup types and tensor meanings. A planar reduction of a
//! word sequence's types compiles to a tensor contraction that yields the
//! sequence's meaning in the space of the target type. The same meaning can
//! be factored into a single weight matrix applied to a tensor product of
//! atomic fillers (`W·f`), from which fillers are recovered or substituted
//! through the Moore–Penrose pseudoinverse.
//!
//! Modules:
//! - [`pregroup`]: types, adjoints, reduction diagrams and the parser
//! - [`tensor`]: dense tensors, ε/η, Frobenius μ/ι, contraction, pseudoinverse
//! - [`semantics`]: lexicons, contraction plans, sentence and relative-clause evaluation
//! - [`ics`]: filler/role binding, tree encodings, `W·f` factoring, circular convolution
//! - [`unbinding`]: pseudoinverse unbinding and substitution operators
//! - [`io`], [`cli`]: lexicon files, result records and the command line

pub mod cli;
pub mod error;
pub mod ics;
pub mod io;
pub mod pregroup;
pub mod semantics;
pub mod tensor;
pub mod unbinding;

pub use error::{Error, Result};
