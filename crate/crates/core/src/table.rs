//! Precomputed delay/energy lookup tables, one row per (corner, supply) with
//! a cell per coupling class.
//!
//! Under the Elmore model a wire's delay depends only on its coupling class,
//! so five classes stand in for every possible pair of bus words. Tables are
//! pure memoization of [`BusModel::path_delay`]: no interpolation anywhere.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::VoltageGrid;
use crate::interconnect::{BusModel, N_CLASSES};
use crate::pvt::PvtCorner;

pub const TABLE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCell {
    pub delay: f64,
    pub switched_cap: f64,
    pub leakage_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayEnergyTable {
    pub version: u32,
    pub geometry_hash: String,
    pub repeater_size: f64,
    pub grid: VoltageGrid,
    pub corners: Vec<PvtCorner>,
    pub flop_input_cap: f64,
    pub model: BusModel,
    /// Per-wire switched capacitance by coupling class, all stages plus the receiving flop.
    pub switched_cap: [f64; N_CLASSES],
    /// `[corner][vdd index][k]` full-path delay (s).
    pub path_delay: Vec<Vec<[f64; N_CLASSES]>>,
    /// `[corner][vdd index]` whole-bus repeater leakage energy per clock cycle (J).
    pub leakage_energy: Vec<Vec<f64>>,
}

/// Fingerprint of everything that determines table contents.
pub fn table_hash(
    model: &BusModel,
    corners: &[PvtCorner],
    flop_input_cap: f64,
    min_floor_mv: u32,
) -> String {
    #[derive(Serialize)]
    struct Key<'a> {
        version: u32,
        model: &'a BusModel,
        corners: &'a [PvtCorner],
        flop_input_cap: f64,
        min_floor_mv: u32,
    }
    let key = Key {
        version: TABLE_VERSION,
        model,
        corners,
        flop_input_cap,
        min_floor_mv,
    };
    let bytes = serde_json::to_vec(&key).expect("table key serializes");
    let digest = Sha256::digest(&bytes);
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableSpec {
    pub ceiling_mv: u32,
    /// Lowest grid voltage the table may extend to, if still operational.
    pub min_floor_mv: u32,
    pub step_mv: u32,
    pub flop_input_cap: f64,
}

impl Default for TableSpec {
    fn default() -> Self {
        TableSpec {
            ceiling_mv: 1200,
            min_floor_mv: 600,
            step_mv: 20,
            flop_input_cap: 10e-15,
        }
    }
}

fn row(model: &BusModel, corner: PvtCorner, vdd: f64) -> Result<[f64; N_CLASSES]> {
    let mut out = [0.0; N_CLASSES];
    for (k, cell) in out.iter_mut().enumerate() {
        *cell = model.path_delay(k as u8, vdd, corner)?;
    }
    Ok(out)
}

/// Fills every (corner, vdd, k) cell. The grid stops at the requested floor or
/// at the lowest voltage where every corner is still operational, whichever
/// is higher.
pub fn build_tables(
    model: &BusModel,
    corners: &[PvtCorner],
    spec: TableSpec,
) -> Result<DelayEnergyTable> {
    if corners.is_empty() {
        return Err(Error::InvalidParameter(
            "table needs at least one corner".to_string(),
        ));
    }
    let probe = VoltageGrid::new(spec.ceiling_mv, spec.min_floor_mv, spec.step_mv)?;
    let mut floor_mv = None;
    for mv in probe.iter_mv() {
        let vdd = mv as f64 / 1000.0;
        let ok = corners.iter().all(|&c| match row(model, c, vdd) {
            Ok(r) => r.iter().all(|d| d.is_finite() && *d > 0.0),
            Err(_) => false,
        });
        if !ok {
            break;
        }
        floor_mv = Some(mv);
    }
    let floor_mv = floor_mv.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no operational supply at or below {} mV",
            spec.ceiling_mv
        ))
    })?;
    let grid = VoltageGrid::new(spec.ceiling_mv, floor_mv, spec.step_mv)?;

    let stages = model.geometry.stages() as f64;
    let n_repeaters = (model.geometry.n_wires * model.geometry.stages()) as f64;
    let t_clk = model.geometry.t_clk();
    let mut switched_cap = [0.0; N_CLASSES];
    for (k, c) in switched_cap.iter_mut().enumerate() {
        *c = stages * model.rc.load(k as u8) + spec.flop_input_cap;
    }

    let rows: Vec<(Vec<[f64; N_CLASSES]>, Vec<f64>)> = corners
        .par_iter()
        .map(|&corner| -> Result<_> {
            let mut delays = Vec::with_capacity(grid.len());
            let mut leak = Vec::with_capacity(grid.len());
            for idx in 0..grid.len() {
                let vdd = grid.volts(idx);
                delays.push(row(model, corner, vdd)?);
                let current = model
                    .device
                    .leakage_current(model.repeater_size, vdd, corner);
                leak.push(n_repeaters * current * vdd * t_clk);
            }
            Ok((delays, leak))
        })
        .collect::<Result<_>>()?;
    let (path_delay, leakage_energy) = rows.into_iter().unzip();

    Ok(DelayEnergyTable {
        version: TABLE_VERSION,
        geometry_hash: table_hash(model, corners, spec.flop_input_cap, spec.min_floor_mv),
        repeater_size: model.repeater_size,
        grid,
        corners: corners.to_vec(),
        flop_input_cap: spec.flop_input_cap,
        model: model.clone(),
        switched_cap,
        path_delay,
        leakage_energy,
    })
}

impl DelayEnergyTable {
    pub fn corner_index(&self, corner: PvtCorner) -> Result<usize> {
        self.corners
            .iter()
            .position(|c| *c == corner)
            .ok_or_else(|| Error::MissingCorner(corner.to_string()))
    }

    /// Exact retrieval; `vdd` must sit on the grid.
    pub fn lookup(&self, corner: PvtCorner, vdd: f64, k: u8) -> Result<TableCell> {
        let ci = self.corner_index(corner)?;
        let vi = self.grid.index_of(vdd)?;
        Ok(self.cell(ci, vi, k))
    }

    pub fn cell(&self, corner_idx: usize, vdd_idx: usize, k: u8) -> TableCell {
        TableCell {
            delay: self.path_delay[corner_idx][vdd_idx][k as usize],
            switched_cap: self.switched_cap[k as usize],
            leakage_energy: self.leakage_energy[corner_idx][vdd_idx],
        }
    }

    pub fn floor_volts(&self) -> f64 {
        self.grid.volts(self.grid.len() - 1)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    /// Reads a table and, when `expected_hash` is given, refuses one built
    /// from a different configuration.
    pub fn load(path: &Path, expected_hash: Option<&str>) -> Result<Self> {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::MissingTable {
                    path: path.to_path_buf(),
                })
            }
            Err(e) => return Err(e.into()),
        };
        let table: DelayEnergyTable = serde_json::from_slice(&bytes)?;
        if table.version != TABLE_VERSION {
            return Err(Error::TableVersion {
                expected: TABLE_VERSION,
                found: table.version,
            });
        }
        if let Some(expected) = expected_hash {
            if table.geometry_hash != expected {
                return Err(Error::TableMismatch {
                    expected: expected.to_string(),
                    found: table.geometry_hash,
                });
            }
        }
        Ok(table)
    }
}
