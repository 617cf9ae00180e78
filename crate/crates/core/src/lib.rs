//! Trace-driven, cycle-accurate simulator of a repeated on-chip bus whose
//! receivers use double-sampling flops, with closed-loop supply scaling.

pub mod cli;
pub mod config;
pub mod controller;
pub mod error;
pub mod flop;
pub mod grid;
pub mod interconnect;
pub mod pvt;
pub mod sim;
pub mod table;
pub mod trace;

pub use config::ExperimentConfig;
pub use controller::{ControllerConfig, DvsController};
pub use error::{Error, Result};
pub use flop::{CycleOutcome, CycleStatus, Deadlines};
pub use interconnect::{BusGeometry, BusModel, SegmentRc};
pub use pvt::{Process, PvtCorner};
pub use sim::{BankParams, RunReport};
pub use table::DelayEnergyTable;
pub use trace::{Trace, TraceSpec};
