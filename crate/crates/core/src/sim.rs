//! Cycle loop, energy accounting and the experiment drivers: fixed-supply
//! runs and sweeps, closed-loop regulated runs, and the offline per-window
//! optimal supply profile.
//!
//! Energy is never summed cycle by cycle. Every run fills integer activity
//! counters per grid voltage (toggles per coupling class, clock cycles,
//! errors) and energy is evaluated from those counters at the end, so two
//! routes to the same counts give bit-identical energies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::controller::{ControllerConfig, DvsController, VoltageChange, WindowRecord};
use crate::error::{Error, Result};
use crate::flop::{recovery_overhead_energy, CycleOutcome, CycleStatus, Deadlines};
use crate::grid::mv_to_volts;
use crate::interconnect::{BusLayout, TransitionActivity, MAX_K, N_CLASSES};
use crate::pvt::{Process, PvtCorner};
use crate::table::DelayEnergyTable;
use crate::trace::Trace;

/// Receiver-bank constants needed for energy and timing decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BankParams {
    pub deadlines: Deadlines,
    pub n_flops: usize,
    /// Clock load per flop charged again on every recovery cycle (F).
    pub c_flop_clk: f64,
}

impl BankParams {
    pub fn recovery_energy(&self, vdd: f64) -> f64 {
        recovery_overhead_energy(self.n_flops, self.c_flop_clk, vdd)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityLedger {
    pub toggles: [u64; N_CLASSES],
    /// Clock cycles, including recovery stalls.
    pub cycles: u64,
    pub errors: u64,
}

impl ActivityLedger {
    fn add_toggles(&mut self, act: &TransitionActivity) {
        for (t, &c) in self.toggles.iter_mut().zip(act.counts.iter()) {
            *t += u64::from(c);
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub dynamic: f64,
    pub leakage: f64,
    pub recovery: f64,
    pub total: f64,
}

fn energy_at(
    ledger: &ActivityLedger,
    table: &DelayEnergyTable,
    ci: usize,
    vi: usize,
    bank: &BankParams,
) -> EnergyBreakdown {
    let vdd = table.grid.volts(vi);
    let cap: f64 = ledger
        .toggles
        .iter()
        .zip(table.switched_cap.iter())
        .map(|(&n, &c)| n as f64 * c)
        .sum();
    let dynamic = cap * vdd * vdd;
    let leakage = ledger.cycles as f64 * table.leakage_energy[ci][vi];
    let recovery = ledger.errors as f64 * bank.recovery_energy(vdd);
    EnergyBreakdown {
        dynamic,
        leakage,
        recovery,
        total: dynamic + leakage + recovery,
    }
}

/// Sums per-voltage ledgers (index = grid index) into one breakdown.
pub fn ledger_energy(
    ledgers: &[ActivityLedger],
    table: &DelayEnergyTable,
    corner_idx: usize,
    bank: &BankParams,
) -> EnergyBreakdown {
    let mut out = EnergyBreakdown::default();
    for (vi, l) in ledgers.iter().enumerate() {
        if l.cycles == 0 {
            continue;
        }
        let e = energy_at(l, table, corner_idx, vi, bank);
        out.dynamic += e.dynamic;
        out.leakage += e.leakage;
        out.recovery += e.recovery;
    }
    out.total = out.dynamic + out.leakage + out.recovery;
    out
}

/// Energy of one bus cycle at `vdd`: switching of every toggling wire, one
/// cycle of repeater leakage, and the bank re-clock when the cycle errs.
pub fn cycle_energy(
    activity: &TransitionActivity,
    table: &DelayEnergyTable,
    corner: PvtCorner,
    vdd: f64,
    outcome: &CycleOutcome,
    bank: &BankParams,
) -> Result<f64> {
    let ci = table.corner_index(corner)?;
    let vi = table.grid.index_of(vdd)?;
    let mut ledger = ActivityLedger {
        cycles: 1,
        errors: u64::from(outcome.status == CycleStatus::Error),
        ..ActivityLedger::default()
    };
    ledger.add_toggles(activity);
    Ok(energy_at(&ledger, table, ci, vi, bank).total)
}

/// Errors per clock cycle, stalls included in the denominator.
pub fn error_rate(errors: u64, cycles: u64) -> f64 {
    if cycles == 0 {
        0.0
    } else {
        errors as f64 / cycles as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticResult {
    pub corner: PvtCorner,
    pub vdd_mv: u32,
    pub words: u64,
    pub cycles: u64,
    /// Recoverable errors (each costs a stall cycle).
    pub errors: u64,
    /// Cycles missing the main edge, fatal ones included, per clock cycle.
    pub error_rate: f64,
    pub fatal_cycles: u64,
    pub energy: EnergyBreakdown,
}

impl StaticResult {
    /// A run with any fatal miss is not a valid operating point.
    pub fn valid(&self) -> bool {
        self.fatal_cycles == 0
    }
}

fn finish_static(
    ledger: ActivityLedger,
    words: u64,
    fatal_cycles: u64,
    table: &DelayEnergyTable,
    corner: PvtCorner,
    ci: usize,
    vi: usize,
    bank: &BankParams,
) -> StaticResult {
    StaticResult {
        corner,
        vdd_mv: table.grid.mv(vi),
        words,
        cycles: ledger.cycles,
        errors: ledger.errors,
        error_rate: error_rate(ledger.errors + fatal_cycles, ledger.cycles),
        fatal_cycles,
        energy: energy_at(&ledger, table, ci, vi, bank),
    }
}

/// Plays the whole trace at a fixed supply. Fatal cycles are counted and
/// flag the run invalid; the run continues for diagnostics.
pub fn run_static(
    trace: &Trace,
    corner: PvtCorner,
    vdd: f64,
    table: &DelayEnergyTable,
    bank: &BankParams,
) -> Result<StaticResult> {
    let ci = table.corner_index(corner)?;
    let vi = table.grid.index_of(vdd)?;
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let layout = BusLayout::new(&table.model.geometry);
    let delays = &table.path_delay[ci][vi];
    let mut ledger = ActivityLedger::default();
    let mut fatal = 0u64;
    let mut prev = trace.words[0];
    for (i, &word) in trace.words.iter().enumerate() {
        let act = if i == 0 {
            TransitionActivity::default()
        } else {
            layout.activity(prev, word)
        };
        prev = word;
        let delay = act.max_k.map_or(0.0, |k| delays[k as usize]);
        let outcome = bank.deadlines.classify(delay);
        ledger.cycles += 1;
        ledger.add_toggles(&act);
        match outcome.status {
            CycleStatus::Clean => {}
            CycleStatus::Error => {
                ledger.errors += 1;
                ledger.cycles += 1; // stall: same word held, nothing switches
            }
            CycleStatus::Fatal => fatal += 1,
        }
    }
    Ok(finish_static(
        ledger,
        trace.len() as u64,
        fatal,
        table,
        corner,
        ci,
        vi,
        bank,
    ))
}

/// Voltage-independent summary of a trace: how many cycles had each worst
/// coupling class, and total toggles per class. Enough to replay any
/// fixed-supply run exactly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceProfile {
    pub words: u64,
    /// Index 0 counts quiet cycles, index `k + 1` cycles whose worst class is `k`.
    pub worst_class_cycles: [u64; N_CLASSES + 1],
    pub toggles: [u64; N_CLASSES],
}

impl TraceProfile {
    pub fn of_words(words: &[u32], layout: &BusLayout) -> Self {
        let mut p = TraceProfile {
            words: words.len() as u64,
            ..TraceProfile::default()
        };
        if words.is_empty() {
            return p;
        }
        p.worst_class_cycles[0] += 1;
        for pair in words.windows(2) {
            let act = layout.activity(pair[0], pair[1]);
            p.add(&act);
        }
        p
    }

    pub fn of(trace: &Trace, table: &DelayEnergyTable) -> Self {
        Self::of_words(&trace.words, &BusLayout::new(&table.model.geometry))
    }

    fn add(&mut self, act: &TransitionActivity) {
        let slot = act.max_k.map_or(0, |k| k as usize + 1);
        self.worst_class_cycles[slot] += 1;
        for (t, &c) in self.toggles.iter_mut().zip(act.counts.iter()) {
            *t += u64::from(c);
        }
    }

    pub fn merge(&mut self, other: &TraceProfile) {
        self.words += other.words;
        for (a, b) in self
            .worst_class_cycles
            .iter_mut()
            .zip(other.worst_class_cycles.iter())
        {
            *a += b;
        }
        for (a, b) in self.toggles.iter_mut().zip(other.toggles.iter()) {
            *a += b;
        }
    }

    /// Same result as [`run_static`] on the profiled trace.
    pub fn run_static(
        &self,
        corner: PvtCorner,
        vdd_idx: usize,
        table: &DelayEnergyTable,
        bank: &BankParams,
    ) -> Result<StaticResult> {
        let ci = table.corner_index(corner)?;
        let delays = &table.path_delay[ci][vdd_idx];
        let mut errors = 0u64;
        let mut fatal = 0u64;
        for k in 0..N_CLASSES {
            let n = self.worst_class_cycles[k + 1];
            match bank.deadlines.classify(delays[k]).status {
                CycleStatus::Clean => {}
                CycleStatus::Error => errors += n,
                CycleStatus::Fatal => fatal += n,
            }
        }
        let ledger = ActivityLedger {
            toggles: self.toggles,
            cycles: self.words + errors,
            errors,
        };
        Ok(finish_static(
            ledger, self.words, fatal, table, corner, ci, vdd_idx, bank,
        ))
    }
}

/// Lowest grid supply with zero errors for the worst pattern at the given
/// process assuming 100 C and full droop: what a margin-based scheme that
/// cannot recover from errors may use.
pub fn fixed_vs_voltage_mv(
    process: Process,
    table: &DelayEnergyTable,
    bank: &BankParams,
) -> Result<u32> {
    let ci = table.corner_index(PvtCorner::worst_for(process))?;
    let mut best = None;
    for vi in 0..table.grid.len() {
        if table.path_delay[ci][vi][MAX_K as usize] <= bank.deadlines.main_deadline {
            best = Some(table.grid.mv(vi));
        } else {
            break;
        }
    }
    best.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{} process misses the main deadline at every supply",
            process.name()
        ))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainPoint {
    pub corner: PvtCorner,
    /// Worst-pattern path delay at the nominal supply (s): the corner's speed.
    pub nominal_worst_delay: f64,
    pub target: f64,
    pub vdd_mv: u32,
    pub error_rate: f64,
    pub energy: f64,
    pub energy_baseline: f64,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Every (corner, grid voltage) fixed-supply run, corners in input order.
    pub curves: Vec<Vec<StaticResult>>,
    /// One point per (corner, target).
    pub gains: Vec<GainPoint>,
}

/// For each corner and error-rate target, the lowest grid supply whose
/// fixed-supply run stays at or below the target (and free of fatal misses),
/// with its energy gain over the nominal-supply run.
pub fn sweep_static(
    profile: &TraceProfile,
    corners: &[PvtCorner],
    table: &DelayEnergyTable,
    targets: &[f64],
    bank: &BankParams,
) -> Result<SweepResult> {
    let curves: Vec<Vec<StaticResult>> = corners
        .par_iter()
        .map(|&c| {
            (0..table.grid.len())
                .map(|vi| profile.run_static(c, vi, table, bank))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut gains = Vec::with_capacity(corners.len() * targets.len());
    for (curve, &corner) in curves.iter().zip(corners) {
        let baseline = &curve[0];
        let ci = table.corner_index(corner)?;
        let nominal_worst_delay = table.path_delay[ci][0][MAX_K as usize];
        for &target in targets {
            // Error rate is nonincreasing in supply: stop at the first miss.
            let mut chosen = baseline;
            for r in curve.iter() {
                if r.valid() && r.error_rate <= target {
                    chosen = r;
                } else {
                    break;
                }
            }
            gains.push(GainPoint {
                corner,
                nominal_worst_delay,
                target,
                vdd_mv: chosen.vdd_mv,
                error_rate: chosen.error_rate,
                energy: chosen.energy.total,
                energy_baseline: baseline.energy.total,
                gain: 1.0 - chosen.energy.total / baseline.energy.total,
            });
        }
    }
    Ok(SweepResult { curves, gains })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FatalDiagnostic {
    pub corner: PvtCorner,
    pub clock_cycle: u64,
    pub word_index: usize,
    pub vdd_mv: u32,
    pub worst_class: u8,
    pub delay: f64,
    pub shadow_deadline: f64,
    pub prev_word: u32,
    pub next_word: u32,
}

impl std::fmt::Display for FatalDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "corner {} cycle {} (word {}) at {} mV: class-{} delay {:.1} ps exceeds shadow deadline {:.1} ps ({:08X} -> {:08X})",
            self.corner,
            self.clock_cycle,
            self.word_index,
            self.vdd_mv,
            self.worst_class,
            self.delay * 1e12,
            self.shadow_deadline * 1e12,
            self.prev_word,
            self.next_word
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub trace: String,
    pub corner: PvtCorner,
    pub floor_mv: u32,
    pub words: u64,
    /// Clock cycles, including recovery stalls.
    pub cycles: u64,
    pub errors: u64,
    pub stall_cycles: u64,
    pub avg_error_rate: f64,
    pub energy: EnergyBreakdown,
    pub energy_baseline: f64,
    pub energy_gain: f64,
    pub min_applied_mv: u32,
    pub max_applied_mv: u32,
    /// One record per complete controller window.
    pub timeline: Vec<WindowRecord>,
    pub voltage_changes: Vec<VoltageChange>,
    /// Clock cycles spent at each grid voltage (index = grid index).
    pub ledgers: Vec<ActivityLedger>,
}

impl RunReport {
    /// Fraction of clock cycles spent at each supply that was visited.
    pub fn time_at_voltage(&self, table: &DelayEnergyTable) -> Vec<(u32, f64)> {
        self.ledgers
            .iter()
            .enumerate()
            .filter(|(_, l)| l.cycles > 0)
            .map(|(vi, l)| (table.grid.mv(vi), l.cycles as f64 / self.cycles as f64))
            .collect()
    }
}

/// Closed-loop run from the controller's initial supply. The controller
/// floor must already include any process tuning. A fatal miss aborts with
/// a diagnostic.
pub fn run_dynamic(
    trace: &Trace,
    corner: PvtCorner,
    controller: &ControllerConfig,
    floor_mv: u32,
    table: &DelayEnergyTable,
    bank: &BankParams,
) -> Result<RunReport> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let ci = table.corner_index(corner)?;
    let grid = table.grid;
    for mv in [floor_mv, controller.initial_mv, controller.ceiling_mv] {
        grid.index_of_mv(mv)?;
    }
    let mut ctrl = DvsController::new(controller.clone(), floor_mv)?;
    let layout = BusLayout::new(&table.model.geometry);
    let delays = &table.path_delay[ci];
    let mut ledgers = vec![ActivityLedger::default(); grid.len()];
    let mut timeline = Vec::new();
    let mut changes = Vec::new();
    let mut vi = grid.index_of_mv(ctrl.v_applied_mv())?;
    let (mut min_mv, mut max_mv) = (ctrl.v_applied_mv(), ctrl.v_applied_mv());
    let mut cycle = 0u64;
    let mut prev = trace.words[0];

    let mut after_observe = |ctrl: &DvsController,
                             ev: crate::controller::ObserveEvents,
                             vi: &mut usize,
                             timeline: &mut Vec<WindowRecord>,
                             changes: &mut Vec<VoltageChange>|
     -> Result<()> {
        if let Some(w) = ev.window {
            timeline.push(w);
        }
        if let Some(ch) = ev.applied {
            changes.push(ch);
            *vi = grid.index_of_mv(ctrl.v_applied_mv())?;
            min_mv = min_mv.min(ch.to_mv);
            max_mv = max_mv.max(ch.to_mv);
        }
        Ok(())
    };

    for (i, &word) in trace.words.iter().enumerate() {
        let act = if i == 0 {
            TransitionActivity::default()
        } else {
            layout.activity(prev, word)
        };
        let delay = act.max_k.map_or(0.0, |k| delays[vi][k as usize]);
        let outcome = bank.deadlines.classify(delay);
        if outcome.status == CycleStatus::Fatal {
            return Err(Error::Fatal(Box::new(FatalDiagnostic {
                corner,
                clock_cycle: cycle,
                word_index: i,
                vdd_mv: grid.mv(vi),
                worst_class: act.max_k.unwrap_or(0),
                delay,
                shadow_deadline: bank.deadlines.shadow_deadline(),
                prev_word: prev,
                next_word: word,
            })));
        }
        prev = word;
        let ledger = &mut ledgers[vi];
        ledger.cycles += 1;
        ledger.add_toggles(&act);
        let erred = outcome.status == CycleStatus::Error;
        if erred {
            ledger.errors += 1;
        }
        let ev = ctrl.observe(&outcome, cycle);
        after_observe(&ctrl, ev, &mut vi, &mut timeline, &mut changes)?;
        cycle += 1;
        if erred {
            // Recovery cycle: the shadow value is restored, the bus holds its word.
            ledgers[vi].cycles += 1;
            let ev = ctrl.observe(&CycleOutcome::QUIET, cycle);
            after_observe(&ctrl, ev, &mut vi, &mut timeline, &mut changes)?;
            cycle += 1;
        }
    }

    let errors: u64 = ledgers.iter().map(|l| l.errors).sum();
    let energy = ledger_energy(&ledgers, table, ci, bank);
    let baseline = run_static(
        trace,
        corner,
        mv_to_volts(controller.ceiling_mv),
        table,
        bank,
    )?;
    Ok(RunReport {
        trace: trace.name.clone(),
        corner,
        floor_mv,
        words: trace.len() as u64,
        cycles: cycle,
        errors,
        stall_cycles: errors,
        avg_error_rate: error_rate(errors, cycle),
        energy,
        energy_baseline: baseline.energy.total,
        energy_gain: 1.0 - energy.total / baseline.energy.total,
        min_applied_mv: min_mv,
        max_applied_mv: max_mv,
        timeline,
        voltage_changes: changes,
        ledgers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleProfile {
    pub corner: PvtCorner,
    pub target: f64,
    pub window_len: usize,
    /// Optimal supply for each window of trace words.
    pub window_mv: Vec<u32>,
    /// Share of windows at each visited supply, highest supply first.
    pub histogram: Vec<(u32, f64)>,
}

/// Offline, per window of `window_len` trace words: the lowest grid supply
/// whose in-window error rate stays within `target` with no fatal miss.
pub fn oracle_voltage_profile(
    trace: &Trace,
    corner: PvtCorner,
    table: &DelayEnergyTable,
    target: f64,
    window_len: usize,
    bank: &BankParams,
) -> Result<OracleProfile> {
    if window_len == 0 {
        return Err(Error::InvalidParameter(
            "oracle window length must be > 0".to_string(),
        ));
    }
    let ci = table.corner_index(corner)?;
    let layout = BusLayout::new(&table.model.geometry);
    let grid = table.grid;
    let mut window_mv = Vec::new();
    let mut start = 0usize;
    while start < trace.len() {
        let end = (start + window_len).min(trace.len());
        let mut hist = [0u64; N_CLASSES + 1];
        for i in start..end {
            let slot = if i == 0 {
                0
            } else {
                layout
                    .activity(trace.words[i - 1], trace.words[i])
                    .max_k
                    .map_or(0, |k| k as usize + 1)
            };
            hist[slot] += 1;
        }
        let words = (end - start) as u64;
        let mut best = grid.ceiling_mv;
        for vi in 0..grid.len() {
            let mut errors = 0u64;
            let mut fatal = false;
            for k in 0..N_CLASSES {
                if hist[k + 1] == 0 {
                    continue;
                }
                match bank.deadlines.classify(table.path_delay[ci][vi][k]).status {
                    CycleStatus::Clean => {}
                    CycleStatus::Error => errors += hist[k + 1],
                    CycleStatus::Fatal => fatal = true,
                }
            }
            if fatal || error_rate(errors, words + errors) > target {
                break;
            }
            best = grid.mv(vi);
        }
        window_mv.push(best);
        start = end;
    }
    let mut histogram: Vec<(u32, f64)> = Vec::new();
    for mv in grid.iter_mv() {
        let n = window_mv.iter().filter(|&&v| v == mv).count();
        if n > 0 {
            histogram.push((mv, n as f64 / window_mv.len() as f64));
        }
    }
    Ok(OracleProfile {
        corner,
        target,
        window_len,
        window_mv,
        histogram,
    })
}
