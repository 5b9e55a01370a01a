// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod contact;
pub mod convergence;
pub mod error;
pub mod fvm;
pub mod io;
pub mod mesh;
pub mod newton;
pub mod oracle;
pub mod post;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
