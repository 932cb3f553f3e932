//! Probabilistic argumentation structures and the algebras of set and
//! probability potentials on families of compatible frames.
//!
//! The crate provides:
//!
//! - frames as partitions of a finite universe, with refinement, join,
//!   meet, transport of subsets and conditional independence ([`frame`],
//!   [`multivariate`]);
//! - set potentials with Dempster-style combination and probability
//!   potentials with combination, transport and normalization
//!   ([`setpot`], [`probpot`]);
//! - probabilistic argumentation structures and their induced basic
//!   probability assignments ([`pas`]);
//! - division structure on probability potentials: support indicators,
//!   inverses, conditionals and factorization tests ([`conditioning`]);
//! - Markov trees with the Shenoy-Shafer, Lauritzen-Spiegelhalter and
//!   HUGIN local-computation architectures ([`markov`]);
//! - most-probable-configuration search in the max/product algebra
//!   ([`maxprod`]);
//! - a brute-force global oracle every local result can be checked
//!   against ([`oracle`]).
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything can be shared freely across threads.

pub mod approx;
pub mod conditioning;
pub mod error;
pub mod frame;
pub mod markov;
pub mod maxprod;
pub mod multivariate;
pub mod oracle;
pub mod pas;
pub mod probpot;
pub mod setpot;
pub mod universe;

pub use error::{FcfError, Result};
pub use frame::{Frame, FrameRegistry};
pub use multivariate::MultivariateModel;
pub use probpot::ProbPotential;
pub use setpot::{Bpa, SetPotential};
pub use universe::Universe;
