//! Windowed error-rate regulator. Counts bank errors over a fixed window of
//! clock cycles, then steps the supply one grid step down (rate below the
//! low target), up (rate above the high target) or holds. Each command takes
//! effect a fixed number of cycles after it is issued.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flop::{CycleOutcome, CycleStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerConfig {
    pub window_len: u64,
    pub lo_target: f64,
    pub hi_target: f64,
    pub step_mv: u32,
    pub latency_cycles: u64,
    pub ceiling_mv: u32,
    pub initial_mv: u32,
    /// Shift applied to the process-derived floor. Negative values defeat the
    /// shadow-latch guarantee and exist only to demonstrate fatal misses.
    pub floor_offset_mv: i32,
}

impl Default for ControllerConfig {
    fn default() -> Self {
        ControllerConfig {
            window_len: 10_000,
            lo_target: 0.01,
            hi_target: 0.02,
            step_mv: 20,
            latency_cycles: 3_000,
            ceiling_mv: 1200,
            initial_mv: 1200,
            floor_offset_mv: 0,
        }
    }
}

impl ControllerConfig {
    pub fn validate(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if self.window_len == 0 {
            bad.push("controller.window_len must be > 0".to_string());
        }
        if self.latency_cycles == 0 || self.latency_cycles >= self.window_len {
            bad.push(format!(
                "controller.latency_cycles must be in 1..window_len (got {})",
                self.latency_cycles
            ));
        }
        if !(0.0..=1.0).contains(&self.lo_target) || !(0.0..=1.0).contains(&self.hi_target) {
            bad.push("controller targets must be fractions in [0, 1]".to_string());
        }
        if self.lo_target > self.hi_target {
            bad.push("controller.lo_target must not exceed hi_target".to_string());
        }
        if self.step_mv == 0 {
            bad.push("controller.step_mv must be > 0".to_string());
        }
        if self.initial_mv > self.ceiling_mv {
            bad.push("controller.initial_mv must not exceed ceiling_mv".to_string());
        }
        bad
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoltageCommand {
    Down,
    Hold,
    Up,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendingChange {
    pub target_mv: u32,
    pub issued_at: u64,
    pub apply_at: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoltageChange {
    pub issued_at: u64,
    /// First clock cycle run at the new supply.
    pub applied_at: u64,
    pub from_mv: u32,
    pub to_mv: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    /// Clock cycle index one past the window's last cycle.
    pub end_cycle: u64,
    pub errors: u64,
    pub error_rate: f64,
    /// Supply in force during the window's final cycle.
    pub v_applied_mv: u32,
    pub command: VoltageCommand,
}

#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct ObserveEvents {
    pub window: Option<WindowRecord>,
    pub applied: Option<VoltageChange>,
}

#[derive(Debug, Clone)]
pub struct DvsController {
    cfg: ControllerConfig,
    floor_mv: u32,
    err_count: u64,
    in_window: u64,
    v_commanded_mv: u32,
    v_applied_mv: u32,
    pending: Option<PendingChange>,
}

impl DvsController {
    pub fn new(cfg: ControllerConfig, floor_mv: u32) -> Result<Self> {
        let mut bad = cfg.validate();
        if floor_mv > cfg.initial_mv {
            bad.push(format!(
                "controller floor {floor_mv} mV lies above the initial supply {} mV",
                cfg.initial_mv
            ));
        }
        if (cfg.ceiling_mv - cfg.initial_mv) % cfg.step_mv.max(1) != 0 {
            bad.push(
                "controller.initial_mv must sit on the step grid below the ceiling".to_string(),
            );
        }
        if !bad.is_empty() {
            return Err(Error::Config(bad));
        }
        Ok(DvsController {
            v_commanded_mv: cfg.initial_mv,
            v_applied_mv: cfg.initial_mv,
            cfg,
            floor_mv,
            err_count: 0,
            in_window: 0,
            pending: None,
        })
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.cfg
    }

    pub fn floor_mv(&self) -> u32 {
        self.floor_mv
    }

    pub fn v_applied_mv(&self) -> u32 {
        self.v_applied_mv
    }

    pub fn v_commanded_mv(&self) -> u32 {
        self.v_commanded_mv
    }

    pub fn err_count(&self) -> u64 {
        self.err_count
    }

    pub fn pending(&self) -> Option<PendingChange> {
        self.pending
    }

    /// Bang-bang decision on a window's error rate. Updates the commanded
    /// supply immediately; the caller schedules application.
    pub fn decide(&mut self, err_rate: f64) -> VoltageCommand {
        debug_assert!((0.0..=1.0).contains(&err_rate));
        let step = self.cfg.step_mv;
        if err_rate < self.cfg.lo_target && self.v_commanded_mv >= self.floor_mv + step {
            self.v_commanded_mv -= step;
            VoltageCommand::Down
        } else if err_rate > self.cfg.hi_target && self.v_commanded_mv + step <= self.cfg.ceiling_mv
        {
            self.v_commanded_mv += step;
            VoltageCommand::Up
        } else {
            VoltageCommand::Hold
        }
    }

    /// Accounts for clock cycle `cycle` (cycles must arrive in order). At a
    /// window boundary the rate is judged and the counter reset; any command
    /// due at `cycle + 1` is applied so that [`Self::v_applied_mv`] is the
    /// supply for the next cycle. Fatal outcomes leave the state untouched.
    pub fn observe(&mut self, outcome: &CycleOutcome, cycle: u64) -> ObserveEvents {
        let mut events = ObserveEvents::default();
        if outcome.status == CycleStatus::Fatal {
            return events;
        }
        if outcome.status == CycleStatus::Error {
            self.err_count += 1;
        }
        self.in_window += 1;
        debug_assert!(self.err_count <= self.in_window);
        let next = cycle + 1;
        if self.in_window == self.cfg.window_len {
            // latency < window_len, so the previous command has always landed.
            assert!(
                self.pending.is_none(),
                "command still pending at a window boundary"
            );
            let rate = self.err_count as f64 / self.cfg.window_len as f64;
            let command = self.decide(rate);
            if command != VoltageCommand::Hold {
                self.pending = Some(PendingChange {
                    target_mv: self.v_commanded_mv,
                    issued_at: next,
                    apply_at: next + self.cfg.latency_cycles,
                });
            }
            events.window = Some(WindowRecord {
                end_cycle: next,
                errors: self.err_count,
                error_rate: rate,
                v_applied_mv: self.v_applied_mv,
                command,
            });
            self.err_count = 0;
            self.in_window = 0;
        }
        if let Some(p) = self.pending {
            if p.apply_at == next {
                events.applied = Some(VoltageChange {
                    issued_at: p.issued_at,
                    applied_at: p.apply_at,
                    from_mv: self.v_applied_mv,
                    to_mv: p.target_mv,
                });
                self.v_applied_mv = p.target_mv;
                self.pending = None;
            }
        }
        events
    }
}
