//! Exact Khovanov homology and cobordism-induced chain maps.

pub mod braid;
pub mod cobordism;
pub mod complex;
pub mod diagram;
pub mod error;
pub mod int;
pub mod oracle;
pub mod search;

pub use complex::{Bidegree, Chain, Gen};
pub use diagram::{ArcId, Crossing, Diagram, Sign};
pub use error::{Error, Result};
pub use int::Int;
