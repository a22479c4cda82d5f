//! Caps in PG(r,4), the quaternary codes they generate, collineation
//! equivalence, and an exhaustive search for quantum caps of sizes 37 and 39
//! in PG(4,4).

pub mod capfile;
pub mod caps;
pub mod codes;
pub mod equivalence;
pub mod error;
pub mod geometry;
pub mod gf4;
pub mod linalg;
pub mod mask;
pub mod search;

pub use caps::{Cap, ExtensionState};
pub use error::{Error, Result};
pub use geometry::{GeometryTables, PointIndex};
pub use gf4::{Gf4, Gf4Vector};
pub use mask::Mask;
