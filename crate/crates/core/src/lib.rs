//! Bound quivers, exact path-algebra bases, representations, Auslander-Reiten
//! translations, relation-extension / cluster-repetitive constructions, local
//! slice reflections, transjective-component knitting, slice distances and
//! fibre-quotient enumeration, plus an experimental coray-insertion builder
//! for tubes.

pub mod algebra;
pub mod export;
pub mod extension;
pub mod fixtures;
pub mod matrix;
pub mod quiver;
pub mod rep;
pub mod scalar;
pub mod slices;
pub mod strip;
pub mod translate;
pub mod tube;

pub use algebra::{default_length_cap, path_algebra, Algebra, AlgebraError, Elem};
pub use quiver::{parse_bound_quiver, BoundQuiver, QuiverError};
pub use scalar::K;
