//! Dynamics of increasing tableaux under K-promotion, rowmotion on order
//! ideals of finite posets, and the transport between the two on box posets.
//!
//! The core objects are `IncreasingTableau` (strictly increasing rows and
//! columns, entries capped by a ceiling) and `OrderIdeal` over a
//! `FinitePoset`. The orbit engine decomposes entire state spaces under
//! promotion, and the verify module turns structural claims about those
//! orbits into exhaustive machine-checked reports.

pub mod correspondence;
pub mod error;
pub mod grid;
pub mod orbits;
pub mod poset;
pub mod promotion;
pub mod verify;

pub use correspondence::{check_equivariance, macmahon_count, pp_to_tableau, tableau_to_pp};
pub use error::{Error, Result};
pub use grid::{frame_of, minimal_tableau, Cell, IncreasingTableau, Shape};
pub use orbits::{decompose, enumerate_tableaux, orbit_of, EngineOptions, DEFAULT_STATE_BUDGET};
pub use poset::{box_poset, FinitePoset, OrderIdeal, PlanePartition};
pub use promotion::{demote, promote, promote_power, promote_with_trace, PromotionTrace};
