//! Exact and numerical tools for decomposing the Weil representation of a
//! finite abelian `p`-group `A` (odd `p`) into irreducible pieces.
//!
//! The combinatorial side lives on the poset `P_λ` attached to the type `λ`
//! of `A`: order ideals label symplectic orbits in `K = A × Â`, small ideals
//! with sign data label irreducible invariant subspaces, and their
//! dimensions are polynomials in `p`. The numerical side builds Weyl
//! operators as dense matrices and checks the operator identities that the
//! combinatorics predicts.

pub mod alpha;
pub mod arith;
pub mod error;
pub mod exec;
pub mod group;
pub mod numerics;
pub mod decomposition;
pub mod orbit;
pub mod poset;

pub use error::{Error, Result};
pub use exec::Execution;
