//! Generalised dichromatic invariants of closed oriented 4-manifolds.
//!
//! A manifold is given by a Kirby diagram in dotted-circle notation
//! ([`kirby::KirbyDiagram`]). An invariant is specified by a pivotal functor
//! `F: C -> D` into a premodular category `D` ([`category::PivotalFunctorData`]),
//! or by a finite group for the Dijkgraaf-Witten counting path. Three backends
//! are provided:
//!
//! * [`group`]: `Rep(G)` with trivial braiding, evaluated by counting flat connections;
//! * [`pointed`]: abelian anyons given by a quadratic form on a finite abelian group;
//! * [`templieb`]: Temperley-Lieb categories at `q = exp(iπ/r)`, evaluated by
//!   Jones-Wenzl cabling and a memoized Kauffman bracket.
//!
//! [`engine`] assembles them into the invariant and its derived quantities.

pub mod category;
pub mod documents;
pub mod engine;
mod error;
pub mod group;
pub mod kirby;
pub mod library;
pub mod linalg;
pub mod movesuite;
pub mod pointed;
pub mod scalar;
pub mod templieb;

pub use error::{Error, ErrorKind, Result};
pub use scalar::C64;
