//! Process/voltage/temperature corners and the device-level stand-ins for
//! driver strength and repeater leakage.
//!
//! Driver resistance follows an alpha-power law normalized to the typical
//! 25 C nominal-supply point; leakage is an exponential fit in supply and
//! temperature. Only the qualitative voltage dependence matters to the
//! simulator, so every constant is exposed through [`DeviceParams`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Slow,
    Typical,
    Fast,
}

impl Process {
    pub const ALL: [Process; 3] = [Process::Slow, Process::Typical, Process::Fast];

    pub fn name(self) -> &'static str {
        match self {
            Process::Slow => "slow",
            Process::Typical => "typical",
            Process::Fast => "fast",
        }
    }
}

impl FromStr for Process {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "slow" | "ss" | "s" => Ok(Process::Slow),
            "typical" | "typ" | "tt" | "t" => Ok(Process::Typical),
            "fast" | "ff" | "f" => Ok(Process::Fast),
            _ => Err(Error::CornerSyntax(s.to_string())),
        }
    }
}

pub const TEMPERATURES_C: [f64; 2] = [25.0, 100.0];
pub const IR_DROPS: [f64; 2] = [0.0, 0.10];

/// One operating point: process corner, junction temperature and supply droop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvtCorner {
    pub process: Process,
    pub temperature_c: f64,
    pub ir_drop_frac: f64,
}

impl PvtCorner {
    pub fn new(process: Process, temperature_c: f64, ir_drop_frac: f64) -> Result<Self> {
        let corner = PvtCorner {
            process,
            temperature_c,
            ir_drop_frac,
        };
        corner.validate()?;
        Ok(corner)
    }

    pub fn validate(&self) -> Result<()> {
        if !TEMPERATURES_C.contains(&self.temperature_c) {
            return Err(Error::InvalidParameter(format!(
                "temperature {} C is not one of 25 or 100",
                self.temperature_c
            )));
        }
        if !IR_DROPS.contains(&self.ir_drop_frac) {
            return Err(Error::InvalidParameter(format!(
                "IR drop {} is not one of 0.0 or 0.10",
                self.ir_drop_frac
            )));
        }
        Ok(())
    }

    /// The worst-case sizing corner: slow process, 100 C, 10% droop.
    pub fn worst() -> Self {
        PvtCorner {
            process: Process::Slow,
            temperature_c: 100.0,
            ir_drop_frac: 0.10,
        }
    }

    /// Slowest corner for a given process; used to pick conservative floors.
    pub fn worst_for(process: Process) -> Self {
        PvtCorner {
            process,
            ..Self::worst()
        }
    }

    /// All twelve corners in a fixed order (process, then temperature, then IR).
    pub fn all() -> Vec<PvtCorner> {
        let mut out = Vec::with_capacity(12);
        for process in Process::ALL {
            for temperature_c in TEMPERATURES_C {
                for ir_drop_frac in IR_DROPS {
                    out.push(PvtCorner {
                        process,
                        temperature_c,
                        ir_drop_frac,
                    });
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for PvtCorner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ir = if self.ir_drop_frac == 0.0 {
            "no-ir"
        } else {
            "ir10"
        };
        write!(
            f,
            "{},{},{}",
            self.process.name(),
            self.temperature_c as i64,
            ir
        )
    }
}

impl FromStr for PvtCorner {
    type Err = Error;

    /// Parses `process,temp,ir`, e.g. `typical,100,no-ir` or `slow,100,ir10`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::CornerSyntax(s.to_string()));
        }
        let process: Process = parts[0]
            .parse()
            .map_err(|_| Error::CornerSyntax(s.to_string()))?;
        let temperature_c: f64 = parts[1]
            .trim_end_matches(['c', 'C'])
            .parse()
            .map_err(|_| Error::CornerSyntax(s.to_string()))?;
        let ir_drop_frac = match parts[2].to_ascii_lowercase().as_str() {
            "no-ir" | "noir" | "none" | "0" | "0.0" | "0%" => 0.0,
            "ir" | "ir10" | "10%" | "0.1" | "0.10" => 0.10,
            _ => return Err(Error::CornerSyntax(s.to_string())),
        };
        PvtCorner::new(process, temperature_c, ir_drop_frac)
            .map_err(|_| Error::CornerSyntax(s.to_string()))
    }
}

/// Per-process multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessScales {
    pub slow: f64,
    pub typical: f64,
    pub fast: f64,
}

impl ProcessScales {
    pub fn get(&self, process: Process) -> f64 {
        match process {
            Process::Slow => self.slow,
            Process::Typical => self.typical,
            Process::Fast => self.fast,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceParams {
    /// Threshold voltage (V).
    pub vt: f64,
    /// Velocity-saturation exponent.
    pub alpha: f64,
    /// Unit-size driver resistance at typical process, 25 C, `v_ref` (ohm).
    pub r0: f64,
    /// Supply at which `r0` and `leak0` are specified (V).
    pub v_ref: f64,
    pub process_r_scale: ProcessScales,
    /// Linear temperature coefficient of driver resistance (1/C).
    pub r_temp_coeff: f64,
    /// Unit-size leakage at typical process, 25 C, `v_ref` (A).
    pub leak0: f64,
    /// Exponential supply coefficient of leakage (1/V).
    pub leak_v_coeff: f64,
    /// Exponential temperature coefficient of leakage (1/C).
    pub leak_t_coeff: f64,
    pub process_leak_scale: ProcessScales,
}

impl Default for DeviceParams {
    fn default() -> Self {
        DeviceParams {
            vt: 0.35,
            alpha: 1.3,
            r0: 10_000.0,
            v_ref: 1.2,
            process_r_scale: ProcessScales {
                slow: 1.15,
                typical: 1.00,
                fast: 0.87,
            },
            r_temp_coeff: 0.002,
            leak0: 10e-9,
            leak_v_coeff: 3.0,
            leak_t_coeff: 0.03,
            process_leak_scale: ProcessScales {
                slow: 0.5,
                typical: 1.0,
                fast: 2.5,
            },
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if !(self.vt > 0.0) {
            bad.push(format!("device.vt must be > 0 (got {})", self.vt));
        }
        if !(1.0..=2.0).contains(&self.alpha) {
            bad.push(format!(
                "device.alpha must lie in [1, 2] (got {})",
                self.alpha
            ));
        }
        if !(self.v_ref > self.vt) {
            bad.push(format!("device.v_ref must exceed vt (got {})", self.v_ref));
        }
        for (name, v) in [
            ("device.r0", self.r0),
            ("device.leak0", self.leak0),
            ("device.process_r_scale.slow", self.process_r_scale.slow),
            (
                "device.process_r_scale.typical",
                self.process_r_scale.typical,
            ),
            ("device.process_r_scale.fast", self.process_r_scale.fast),
            (
                "device.process_leak_scale.slow",
                self.process_leak_scale.slow,
            ),
            (
                "device.process_leak_scale.typical",
                self.process_leak_scale.typical,
            ),
            (
                "device.process_leak_scale.fast",
                self.process_leak_scale.fast,
            ),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                bad.push(format!("{name} must be a positive finite number (got {v})"));
            }
        }
        if !(self.leak_v_coeff > 0.0) {
            bad.push("device.leak_v_coeff must be > 0".to_string());
        }
        if !(self.leak_t_coeff > 0.0) {
            bad.push("device.leak_t_coeff must be > 0".to_string());
        }
        if !(self.r_temp_coeff >= 0.0) {
            bad.push("device.r_temp_coeff must be >= 0".to_string());
        }
        bad
    }

    fn drive_shape(&self, v_eff: f64) -> f64 {
        v_eff / (v_eff - self.vt).powf(self.alpha)
    }

    /// Resistance of a driver of relative `size` seeing `v_eff` at the rails.
    pub fn driver_resistance(&self, size: f64, v_eff: f64, corner: PvtCorner) -> Result<f64> {
        if v_eff <= self.vt {
            return Err(Error::NonOperationalVoltage { v_eff, vt: self.vt });
        }
        debug_assert!(size > 0.0);
        let temp = 1.0 + self.r_temp_coeff * (corner.temperature_c - 25.0);
        let shape = self.drive_shape(v_eff) / self.drive_shape(self.v_ref);
        Ok(self.r0 / size * self.process_r_scale.get(corner.process) * temp * shape)
    }

    /// Subthreshold leakage of a repeater of relative `size` at the rail voltage.
    pub fn leakage_current(&self, size: f64, v_supply: f64, corner: PvtCorner) -> f64 {
        self.leak0
            * size
            * (self.leak_v_coeff * (v_supply - self.v_ref)).exp()
            * (self.leak_t_coeff * (corner.temperature_c - 25.0)).exp()
            * self.process_leak_scale.get(corner.process)
    }
}

/// Supply seen by the drivers after the corner's resistive droop.
pub fn effective_vdd(v_supply: f64, corner: PvtCorner) -> f64 {
    v_supply * (1.0 - corner.ir_drop_frac)
}
