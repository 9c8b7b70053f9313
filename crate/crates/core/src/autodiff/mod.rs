//! Reverse-mode differentiation, parameter storage, and optimization.

pub mod gradcheck;
pub mod optim;
pub mod params;
pub mod tape;

pub use gradcheck::{finite_diff_check, GradCheckReport};
pub use optim::OptimizerState;
pub use params::{ParamId, ParamStore, Tensor};
pub use tape::{Op, Tape, Var};
