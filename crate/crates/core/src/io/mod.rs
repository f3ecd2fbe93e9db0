//! Run configuration, output writers and the command drivers.

mod config;
mod driver;
mod records;
mod vtk;

pub use config::{ConvergenceSettings, OutputSettings, RunConfig, SolverSettings};
pub use driver::{
    convergence, discretize, mesh_argument, mesh_size, observed_order, run, simulation, slivers, ConvergenceReport,
    ConvergenceRow, Options, RunSummary, SliverReport, SliverRow, CONVERGENCE_HEADER, SLIVER_HEADER,
    SLIVER_HISTORY_HEADER,
};
pub use records::{EnergyLog, Probe, Seismograms, StatsLog, ENERGY_HEADER, SEISMOGRAM_HEADER, STATS_HEADER};
pub use vtk::{sample_fields, subdivision, write_fields};
