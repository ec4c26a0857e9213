//! Surface-area measures of caps cut from convex bodies by planes parallel to
//! a support plane, and the tools to study their limits as the cut shrinks.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod body;
pub mod bounds;
pub mod cli;
pub mod cone;
pub mod error;
pub mod hull;
pub mod instances;
pub mod io;
pub mod limits;
pub mod linalg;
pub mod measure;
pub mod newton;
pub mod oracle;
pub mod parallel;
pub mod predicates;
pub mod transport;
pub mod verify;

pub use error::{Error, Result};
