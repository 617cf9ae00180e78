use std::path::PathBuf;

use thiserror::Error;

use crate::sim::FatalDiagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("supply {v_eff:.4} V is at or below the device threshold {vt:.4} V")]
    NonOperationalVoltage { v_eff: f64, vt: f64 },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("repeater calibration failed: {0}")]
    CalibrationFailed(String),

    #[error("{volts} V is not on the {step_mv} mV table grid")]
    OffGrid { volts: f64, step_mv: u32 },

    #[error("{volts} V is outside the table range [{floor} V, {ceiling} V]")]
    OutOfTableRange {
        volts: f64,
        floor: f64,
        ceiling: f64,
    },

    #[error("corner {0} is not present in the table")]
    MissingCorner(String),

    #[error("table hash mismatch: file has {found}, configuration expects {expected}")]
    TableMismatch { expected: String, found: String },

    #[error("unsupported table version {found} (expected {expected})")]
    TableVersion { expected: u32, found: u32 },

    #[error(
        "table file {path} not found; run `razorbus tables` with the same configuration first"
    )]
    MissingTable { path: PathBuf },

    #[error("line {line}: {msg}")]
    TraceParse { line: usize, msg: String },

    #[error("line {line}: word {word:#x} does not fit a {n_wires}-bit bus")]
    WordTooWide {
        line: usize,
        word: u64,
        n_wires: usize,
    },

    #[error("empty trace")]
    EmptyTrace,

    #[error("unknown trace generator `{0}`")]
    UnknownGenerator(String),

    #[error("bad trace spec `{spec}`: {msg}")]
    TraceSpec { spec: String, msg: String },

    #[error("configuration rejected:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("bad corner `{0}` (expected process,temp,ir such as typical,100,no-ir)")]
    CornerSyntax(String),

    #[error("fatal timing miss: {0}")]
    Fatal(Box<FatalDiagnostic>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
