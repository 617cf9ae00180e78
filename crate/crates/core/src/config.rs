//! Experiment configuration: one JSON document, every field optional.
//! Keys the program does not know are rejected, all of them at once.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::controller::ControllerConfig;
use crate::error::{Error, Result};
use crate::flop::{min_safe_voltage_mv, Deadlines};
use crate::interconnect::{
    calibrate_repeaters, extract_rc, BusGeometry, BusModel, Calibration, WireTech,
};
use crate::pvt::{DeviceParams, Process, PvtCorner};
use crate::sim::BankParams;
use crate::table::{build_tables, table_hash, DelayEnergyTable, TableSpec};
use crate::trace::{pseudo_benchmarks, TraceSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlopConfig {
    pub main_deadline_ps: f64,
    pub shadow_skew_ps: f64,
    pub hold_margin_ps: f64,
    /// Clock capacitance per flop, re-clocked on every recovery (fF).
    pub clock_cap_ff: f64,
    /// Receiver input load added to each wire's switched capacitance (fF).
    pub input_cap_ff: f64,
    /// Defaults to one flop per wire.
    pub n_flops: Option<usize>,
}

impl Default for FlopConfig {
    fn default() -> Self {
        FlopConfig {
            main_deadline_ps: 600.0,
            shadow_skew_ps: 220.0,
            hold_margin_ps: 20.0,
            clock_cap_ff: 15.0,
            input_cap_ff: 10.0,
            n_flops: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TableConfig {
    /// Worst-corner delay target for repeater sizing (ps).
    pub delay_budget_ps: f64,
    pub ceiling_mv: u32,
    pub min_floor_mv: u32,
    pub step_mv: u32,
    pub path: PathBuf,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            delay_budget_ps: 600.0,
            ceiling_mv: 1200,
            min_floor_mv: 600,
            step_mv: 20,
            path: PathBuf::from("tables.json"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    /// Error-rate targets for static sweeps.
    pub sweep_targets: Vec<f64>,
    /// Error-rate targets for the offline per-window profile.
    pub oracle_targets: Vec<f64>,
    /// Coupling-ratio multiplier for the geometry study.
    pub ratio_mult: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            sweep_targets: vec![0.0, 0.02, 0.05],
            oracle_targets: vec![0.0, 0.02],
            ratio_mult: 1.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub geometry: BusGeometry,
    pub wire: WireTech,
    pub device: DeviceParams,
    pub flop: FlopConfig,
    pub table: TableConfig,
    pub controller: ControllerConfig,
    /// Corner list as `process,temp,ir`; empty means all twelve.
    pub corners: Vec<String>,
    /// Trace specs; empty means the ten pseudo-benchmarks.
    pub traces: Vec<String>,
    /// Length of generated traces that do not set their own.
    pub trace_len: usize,
    pub study: StudyConfig,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            geometry: BusGeometry::default(),
            wire: WireTech::default(),
            device: DeviceParams::default(),
            flop: FlopConfig::default(),
            table: TableConfig::default(),
            controller: ControllerConfig::default(),
            corners: Vec::new(),
            traces: Vec::new(),
            trace_len: 1_000_000,
            study: StudyConfig::default(),
            out_dir: PathBuf::from("out"),
        }
    }
}

fn unknown_keys(user: &Value, known: &Value, path: &str, out: &mut Vec<String>) {
    let (Value::Object(u), Value::Object(k)) = (user, known) else {
        return;
    };
    for (key, val) in u {
        let here = if path.is_empty() {
            key.clone()
        } else {
            format!("{path}.{key}")
        };
        match k.get(key) {
            None => out.push(format!("unknown key `{here}`")),
            Some(kv) => unknown_keys(val, kv, &here, out),
        }
    }
}

impl ExperimentConfig {
    /// `default` (or an empty string) yields the built-in configuration.
    pub fn load(path: &str) -> Result<Self> {
        if path.is_empty() || path == "default" {
            return Ok(Self::default());
        }
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let user: Value = serde_json::from_str(text)?;
        let known = serde_json::to_value(Self::default())?;
        let mut bad = Vec::new();
        unknown_keys(&user, &known, "", &mut bad);
        if !bad.is_empty() {
            return Err(Error::Config(bad));
        }
        let cfg: Self =
            serde_json::from_value(user).map_err(|e| Error::Config(vec![e.to_string()]))?;
        let bad = cfg.validate();
        if bad.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(bad))
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut bad = self.geometry.validate();
        bad.extend(self.wire.validate());
        bad.extend(self.device.validate());
        bad.extend(self.controller.validate());
        if self.geometry.t_clk().is_finite() {
            bad.extend(self.deadlines_unchecked().validate());
        }
        if !(self.flop.clock_cap_ff >= 0.0) {
            bad.push("flop.clock_cap_ff must be >= 0".to_string());
        }
        if !(self.flop.input_cap_ff >= 0.0) {
            bad.push("flop.input_cap_ff must be >= 0".to_string());
        }
        if !(self.table.delay_budget_ps > 0.0) {
            bad.push("table.delay_budget_ps must be > 0".to_string());
        }
        if self.table.step_mv == 0 || self.table.min_floor_mv >= self.table.ceiling_mv {
            bad.push("table grid needs step_mv > 0 and min_floor_mv < ceiling_mv".to_string());
        } else if (self.table.ceiling_mv - self.table.min_floor_mv) % self.table.step_mv != 0 {
            bad.push(
                "table.ceiling_mv - table.min_floor_mv must be a multiple of table.step_mv"
                    .to_string(),
            );
        }
        if self.controller.step_mv != self.table.step_mv {
            bad.push("controller.step_mv must equal table.step_mv".to_string());
        }
        if self.controller.ceiling_mv != self.table.ceiling_mv {
            bad.push("controller.ceiling_mv must equal table.ceiling_mv".to_string());
        }
        for c in &self.corners {
            if let Err(e) = c.parse::<PvtCorner>() {
                bad.push(format!("corners: {e}"));
            }
        }
        for t in &self.traces {
            if let Err(e) = TraceSpec::parse(t) {
                bad.push(format!("traces: {e}"));
            }
        }
        if self.trace_len == 0 {
            bad.push("trace_len must be > 0".to_string());
        }
        for &t in self
            .study
            .sweep_targets
            .iter()
            .chain(&self.study.oracle_targets)
        {
            if !(0.0..=1.0).contains(&t) {
                bad.push(format!(
                    "study targets must be fractions in [0, 1] (got {t})"
                ));
            }
        }
        if !(self.study.ratio_mult > 0.0 && self.study.ratio_mult.is_finite()) {
            bad.push("study.ratio_mult must be positive".to_string());
        }
        bad
    }

    fn deadlines_unchecked(&self) -> Deadlines {
        Deadlines {
            t_clk: self.geometry.t_clk(),
            main_deadline: self.flop.main_deadline_ps * 1e-12,
            shadow_skew: self.flop.shadow_skew_ps * 1e-12,
            hold_margin: self.flop.hold_margin_ps * 1e-12,
        }
    }

    pub fn deadlines(&self) -> Result<Deadlines> {
        let d = self.deadlines_unchecked();
        Deadlines::new(d.t_clk, d.main_deadline, d.shadow_skew, d.hold_margin)
    }

    pub fn bank(&self) -> Result<BankParams> {
        Ok(BankParams {
            deadlines: self.deadlines()?,
            n_flops: self.flop.n_flops.unwrap_or(self.geometry.n_wires),
            c_flop_clk: self.flop.clock_cap_ff * 1e-15,
        })
    }

    pub fn table_spec(&self) -> TableSpec {
        TableSpec {
            ceiling_mv: self.table.ceiling_mv,
            min_floor_mv: self.table.min_floor_mv,
            step_mv: self.table.step_mv,
            flop_input_cap: self.flop.input_cap_ff * 1e-15,
        }
    }

    pub fn corner_list(&self) -> Result<Vec<PvtCorner>> {
        if self.corners.is_empty() {
            return Ok(PvtCorner::all());
        }
        self.corners.iter().map(|c| c.parse()).collect()
    }

    /// Configured traces, or the pseudo-benchmark suite.
    pub fn trace_specs(&self) -> Result<Vec<TraceSpec>> {
        if self.traces.is_empty() {
            return Ok(pseudo_benchmarks()
                .into_iter()
                .map(|(name, _)| TraceSpec::Bench {
                    name: name.to_string(),
                    n: None,
                })
                .collect());
        }
        self.traces.iter().map(|t| TraceSpec::parse(t)).collect()
    }

    /// Extracts parasitics and sizes repeaters (unless the size is pinned).
    pub fn build_model(&self) -> Result<(BusModel, Calibration)> {
        let rc = extract_rc(&self.geometry, &self.wire)?;
        let budget = self.table.delay_budget_ps * 1e-12;
        let cal = match self.geometry.repeater_size {
            Some(size) => {
                let model = BusModel {
                    geometry: self.geometry.clone(),
                    tech: self.wire.clone(),
                    device: self.device.clone(),
                    rc,
                    repeater_size: size,
                };
                Calibration {
                    repeater_size: size,
                    worst_delay: model.worst_case_delay()?,
                }
            }
            None => calibrate_repeaters(&self.geometry, &self.wire, &self.device, rc, budget)?,
        };
        let model = BusModel {
            geometry: self.geometry.clone(),
            tech: self.wire.clone(),
            device: self.device.clone(),
            rc,
            repeater_size: cal.repeater_size,
        };
        Ok((model, cal))
    }

    pub fn build_table(&self, model: &BusModel) -> Result<DelayEnergyTable> {
        build_tables(model, &self.corner_list()?, self.table_spec())
    }

    pub fn expected_hash(&self, model: &BusModel) -> Result<String> {
        Ok(table_hash(
            model,
            &self.corner_list()?,
            self.flop.input_cap_ff * 1e-15,
            self.table.min_floor_mv,
        ))
    }

    /// Loads the serialized table, refusing one built from another configuration.
    pub fn load_table(&self, path: &Path) -> Result<DelayEnergyTable> {
        let (model, _) = self.build_model()?;
        DelayEnergyTable::load(path, Some(&self.expected_hash(&model)?))
    }

    /// Controller floor for a process: the shadow-safe minimum plus the
    /// configured offset, clamped to the table grid.
    pub fn controller_floor_mv(&self, process: Process, table: &DelayEnergyTable) -> Result<u32> {
        let safe = min_safe_voltage_mv(process, table, &self.deadlines()?)?;
        let shifted = i64::from(safe) + i64::from(self.controller.floor_offset_mv);
        let lo = i64::from(table.grid.floor_mv);
        let hi = i64::from(table.grid.ceiling_mv);
        Ok(shifted.clamp(lo, hi) as u32)
    }
}
