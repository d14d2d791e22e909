//! The poset `P_λ`, its order ideals, and the order-theoretic operations on
//! them: the perp involution, small ideals, weighted sizes, connected
//! components of differences, and the half-poset `P_λ⁺`.

pub mod finite;
pub mod partition;
pub mod plambda;

pub use finite::{FinitePoset, PointSet, DEFAULT_IDEAL_CAP};
pub use partition::Partition;
pub use plambda::{Component, ComponentSplit, OrderIdeal, PLambdaPoset, PosetPoint};
