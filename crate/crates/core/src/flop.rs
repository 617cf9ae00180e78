//! Double-sampling receiver bank: a main flop sampling at the clock edge and
//! a shadow latch on a delayed clock. A main-edge miss that the shadow latch
//! still catches is a recoverable error costing one stall cycle; a miss past
//! the shadow edge is fatal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interconnect::{CouplingClass, MAX_K};
use crate::pvt::{Process, PvtCorner};
use crate::table::DelayEnergyTable;

/// Largest shadow-clock delay as a fraction of the cycle the flop design allows.
pub const MAX_SHADOW_FRACTION: f64 = 0.33;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deadlines {
    pub t_clk: f64,
    pub main_deadline: f64,
    pub shadow_skew: f64,
    pub hold_margin: f64,
}

impl Deadlines {
    pub fn new(t_clk: f64, main_deadline: f64, shadow_skew: f64, hold_margin: f64) -> Result<Self> {
        let d = Deadlines {
            t_clk,
            main_deadline,
            shadow_skew,
            hold_margin,
        };
        let bad = d.validate();
        if bad.is_empty() {
            Ok(d)
        } else {
            Err(Error::Config(bad))
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if !(self.main_deadline > 0.0 && self.main_deadline < self.t_clk) {
            bad.push(format!(
                "flop.main_deadline_ps must be positive and below the {:.1} ps clock period",
                self.t_clk * 1e12
            ));
        }
        // Small slack: 0.33 of a 1.5 GHz period is exactly 220 ps.
        if !(self.shadow_skew > 0.0
            && self.shadow_skew <= MAX_SHADOW_FRACTION * self.t_clk * (1.0 + 1e-9))
        {
            bad.push(format!(
                "flop.shadow_skew_ps must be in (0, {:.1}] ps (33% of the clock period)",
                MAX_SHADOW_FRACTION * self.t_clk * 1e12
            ));
        }
        if !(self.hold_margin >= 0.0) {
            bad.push("flop.hold_margin_ps must be >= 0".to_string());
        }
        bad
    }

    pub fn shadow_deadline(&self) -> f64 {
        self.main_deadline + self.shadow_skew
    }

    pub fn classify(&self, worst_wire_delay: f64) -> CycleOutcome {
        let status = if worst_wire_delay <= self.main_deadline {
            CycleStatus::Clean
        } else if worst_wire_delay <= self.shadow_deadline() {
            CycleStatus::Error
        } else {
            CycleStatus::Fatal
        };
        CycleOutcome {
            status,
            worst_wire_delay,
            stall_cycles_added: u32::from(status == CycleStatus::Error),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleStatus {
    Clean,
    Error,
    Fatal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleOutcome {
    pub status: CycleStatus,
    pub worst_wire_delay: f64,
    pub stall_cycles_added: u32,
}

impl CycleOutcome {
    pub const QUIET: CycleOutcome = CycleOutcome {
        status: CycleStatus::Clean,
        worst_wire_delay: 0.0,
        stall_cycles_added: 0,
    };
}

/// One bank sample. The bank ORs the per-flop error flags, so any number of
/// late wires in a cycle is a single error.
pub fn sample_cycle(
    classes: &[CouplingClass],
    table: &DelayEnergyTable,
    corner: PvtCorner,
    vdd: f64,
    deadlines: &Deadlines,
) -> Result<CycleOutcome> {
    let ci = table.corner_index(corner)?;
    let vi = table.grid.index_of(vdd)?;
    let worst = classes
        .iter()
        .filter(|c| c.toggled)
        .map(|c| table.path_delay[ci][vi][c.k as usize])
        .fold(0.0, f64::max);
    Ok(deadlines.classify(worst))
}

/// Regulator floor for a process: the lowest grid supply at which the worst
/// pattern still reaches the shadow latch at 100 C with 10% droop. Returned
/// in millivolts.
pub fn min_safe_voltage_mv(
    process: Process,
    table: &DelayEnergyTable,
    deadlines: &Deadlines,
) -> Result<u32> {
    let ci = table.corner_index(PvtCorner::worst_for(process))?;
    let mut best = None;
    for idx in 0..table.grid.len() {
        if table.path_delay[ci][idx][MAX_K as usize] <= deadlines.shadow_deadline() {
            best = Some(table.grid.mv(idx));
        } else {
            break;
        }
    }
    best.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{} process misses the shadow deadline even at {} mV",
            process.name(),
            table.grid.ceiling_mv
        ))
    })
}

pub fn min_safe_voltage(
    process: Process,
    table: &DelayEnergyTable,
    deadlines: &Deadlines,
) -> Result<f64> {
    min_safe_voltage_mv(process, table, deadlines).map(|mv| mv as f64 / 1000.0)
}

/// Extra clocking of the whole bank for one recovery cycle.
pub fn recovery_overhead_energy(n_flops: usize, c_flop_clk: f64, vdd: f64) -> f64 {
    n_flops as f64 * c_flop_clk * vdd * vdd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interconnect::classify_transition;
    use crate::table::tests::default_table;

    fn deadlines() -> Deadlines {
        Deadlines::new(1e-9 / 1.5, 600e-12, 220e-12, 20e-12).unwrap()
    }

    #[test]
    fn default_deadlines_valid() {
        let d = deadlines();
        assert!((d.shadow_deadline() - 820e-12).abs() < 1e-18);
        assert!(Deadlines::new(1e-9 / 1.5, 600e-12, 230e-12, 20e-12).is_err());
        assert!(Deadlines::new(1e-9 / 1.5, 700e-12, 220e-12, 20e-12).is_err());
    }

    #[test]
    fn outcome_classes() {
        let d = deadlines();
        assert_eq!(d.classify(0.0), CycleOutcome::QUIET);
        let e = d.classify(700e-12);
        assert_eq!(e.status, CycleStatus::Error);
        assert_eq!(e.stall_cycles_added, 1);
        assert_eq!(d.classify(850e-12).status, CycleStatus::Fatal);
        assert_eq!(d.classify(600e-12).status, CycleStatus::Clean);
        assert_eq!(d.classify(820e-12).status, CycleStatus::Error);
    }

    #[test]
    fn quiet_cycle_is_clean() {
        let t = default_table();
        let g = &t.model.geometry;
        let classes = classify_transition(0x1234, 0x1234, g);
        let o = sample_cycle(&classes, &t, PvtCorner::worst(), 0.8, &deadlines()).unwrap();
        assert_eq!(o, CycleOutcome::QUIET);
    }

    #[test]
    fn bank_or_gives_single_error() {
        let t = default_table();
        let g = t.model.geometry.clone();
        let classes = classify_transition(0x5555_5555, 0xAAAA_AAAA, &g);
        // Just below nominal the worst corner misses the main edge on many wires.
        let o = sample_cycle(&classes, &t, PvtCorner::worst(), 1.18, &deadlines()).unwrap();
        assert_eq!(o.status, CycleStatus::Error);
        assert_eq!(o.stall_cycles_added, 1);
        let o = sample_cycle(&classes, &t, PvtCorner::worst(), 1.2, &deadlines()).unwrap();
        assert_eq!(o.status, CycleStatus::Clean);
    }

    #[test]
    fn floors_ordered_by_process() {
        let t = default_table();
        let d = deadlines();
        let slow = min_safe_voltage(Process::Slow, &t, &d).unwrap();
        let typ = min_safe_voltage(Process::Typical, &t, &d).unwrap();
        let fast = min_safe_voltage(Process::Fast, &t, &d).unwrap();
        assert!(slow <= 1.2);
        assert!(typ <= slow && fast <= typ);
    }

    #[test]
    fn floor_matches_grid_scan() {
        let t = default_table();
        let d = deadlines();
        for p in Process::ALL {
            let corner = PvtCorner::worst_for(p);
            let scan = t
                .grid
                .iter_mv()
                .filter(|&mv| t.lookup(corner, mv as f64 / 1000.0, 4).unwrap().delay <= 820e-12)
                .min()
                .unwrap();
            assert_eq!(min_safe_voltage_mv(p, &t, &d).unwrap(), scan);
        }
    }

    #[test]
    fn recovery_energy_scaling() {
        assert_eq!(recovery_overhead_energy(32, 15e-15, 0.0), 0.0);
        let a = recovery_overhead_energy(32, 15e-15, 1.0);
        let b = recovery_overhead_energy(64, 15e-15, 1.0);
        assert!((b - 2.0 * a).abs() < 1e-30);
    }
}
