//! Time stepping: the Schur-complement velocity system, the explicit stress
//! update, boundary treatment and energy bookkeeping.

mod discretization;
mod operator;
mod state;
mod stepper;

pub use discretization::{BoundaryCondition, Discretization, Mode};
pub use operator::SchurOperator;
pub use state::{Energy, State};
pub use stepper::{Simulation, StepReport};
