pub mod analysis;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod operators;
pub mod postprocess;
pub mod problems;
pub mod timestep;

pub use error::{Error, Result};
pub use grid::{BlockGrid, GridFunction, Scalar};
pub use operators::{SchemeId, StencilOperator};
pub use postprocess::FilterSpec;
pub use problems::Problem;
pub use timestep::{IntegratorSpec, Method};
