//! Command-line front end. Every subcommand reads one configuration, writes
//! plot-ready CSV plus a JSON summary under the output directory, and maps
//! failures onto fixed exit codes.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::interconnect::{check_hold, transform_geometry, BusModel, MAX_K};
use crate::pvt::PvtCorner;
use crate::sim::{
    fixed_vs_voltage_mv, oracle_voltage_profile, run_dynamic, run_static, sweep_static, RunReport,
    SweepResult, TraceProfile,
};
use crate::table::DelayEnergyTable;
use crate::trace::{Trace, TraceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FATAL: i32 = 2;
pub const EXIT_CALIBRATION: i32 = 3;

/// Version tag written as the first line of every CSV.
pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "razorbus",
    version,
    about = "Double-sampling bus simulator with closed-loop supply scaling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON configuration file, or `default`.
    #[arg(long, default_value = "default")]
    pub config: String,
    /// Overrides the configured base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (overrides `out_dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Selection {
    /// Table file (overrides `table.path`).
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Corner as `process,temp,ir`; repeatable. Defaults to the configured corners.
    #[arg(long = "corner")]
    pub corners: Vec<String>,
    /// Trace spec (`gen:...`, `bench:...`, `file:...` or a path); repeatable.
    #[arg(long = "trace")]
    pub traces: Vec<String>,
    /// Length of generated traces.
    #[arg(long)]
    pub cycles: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size the repeaters and print the worst-corner delay.
    Calibrate(#[command(flatten)] Common),
    /// Build and save the delay/energy tables.
    Tables {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Fixed-supply sweeps across corners and error targets.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sel: Selection,
    },
    /// Closed-loop runs, one per (trace, corner).
    Run {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sel: Selection,
    },
    /// Offline per-window optimal supply histograms.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sel: Selection,
    },
    /// Re-run sweeps and closed-loop runs with a scaled coupling ratio.
    Geometry {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sel: Selection,
        /// Coupling-to-ground ratio multiplier (overrides `study.ratio_mult`).
        #[arg(long)]
        ratio_mult: Option<f64>,
    },
    /// Shadow-latch hold-constraint report.
    Check(#[command(flatten)] Common),
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Fatal(_) => EXIT_FATAL,
        Error::CalibrationFailed(_) => EXIT_CALIBRATION,
        _ => EXIT_USAGE,
    }
}

struct Ctx {
    cfg: ExperimentConfig,
    out: PathBuf,
}

impl Ctx {
    fn new(common: &Common) -> Result<Self> {
        let mut cfg = ExperimentConfig::load(&common.config)?;
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        let out = common.out.clone().unwrap_or_else(|| cfg.out_dir.clone());
        fs::create_dir_all(&out)?;
        Ok(Ctx { cfg, out })
    }

    fn table_path(&self, explicit: &Option<PathBuf>) -> PathBuf {
        explicit
            .clone()
            .unwrap_or_else(|| self.cfg.table.path.clone())
    }

    fn corners(&self, sel: &Selection, table: &DelayEnergyTable) -> Result<Vec<PvtCorner>> {
        if sel.corners.is_empty() {
            return Ok(table.corners.clone());
        }
        sel.corners.iter().map(|c| c.parse()).collect()
    }

    fn traces(&self, sel: &Selection) -> Result<Vec<Trace>> {
        let specs: Vec<TraceSpec> = if sel.traces.is_empty() {
            self.cfg.trace_specs()?
        } else {
            sel.traces
                .iter()
                .map(|t| TraceSpec::parse(t))
                .collect::<Result<_>>()?
        };
        let n = sel.cycles.unwrap_or(self.cfg.trace_len);
        let n_wires = self.cfg.geometry.n_wires;
        specs
            .par_iter()
            .enumerate()
            .map(|(i, s)| s.resolve(n, self.cfg.seed, i as u64, n_wires))
            .collect()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Calibrate(common) => calibrate(&Ctx::new(&common)?),
        Command::Tables { common, table } => tables(&Ctx::new(&common)?, &table),
        Command::Sweep { common, sel } => sweep(&Ctx::new(&common)?, &sel),
        Command::Run { common, sel } => run(&Ctx::new(&common)?, &sel),
        Command::Oracle { common, sel } => oracle(&Ctx::new(&common)?, &sel),
        Command::Geometry {
            common,
            sel,
            ratio_mult,
        } => geometry(&Ctx::new(&common)?, &sel, ratio_mult),
        Command::Check(common) => check(&Ctx::new(&common)?),
    }
}

/// CSV writer whose file starts with a `# razorbus <kind> v<N>` line.
pub fn csv_writer(path: &Path, kind: &str) -> Result<csv::Writer<BufWriter<File>>> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "# razorbus {kind} v{CSV_SCHEMA_VERSION}")?;
    Ok(csv::Writer::from_writer(f))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    fs::write(path, bytes)?;
    Ok(())
}

fn ps(s: f64) -> String {
    format!("{:.4}", s * 1e12)
}

fn calibrate(ctx: &Ctx) -> Result<()> {
    let (model, cal) = ctx.cfg.build_model()?;
    println!("repeater size      {:.6}", cal.repeater_size);
    println!(
        "worst-corner delay {} ps ({})",
        ps(cal.worst_delay),
        PvtCorner::worst()
    );
    println!(
        "segment rc         r_wire {:.3} ohm, c_g {:.3} fF, c_c {:.3} fF (ratio {:.4})",
        model.rc.r_wire,
        model.rc.c_g * 1e15,
        model.rc.c_c * 1e15,
        model.rc.coupling_ratio()
    );
    #[derive(Serialize)]
    struct Out<'a> {
        repeater_size: f64,
        worst_delay_ps: f64,
        model: &'a BusModel,
    }
    write_json(
        &ctx.path("calibration.json"),
        &Out {
            repeater_size: cal.repeater_size,
            worst_delay_ps: cal.worst_delay * 1e12,
            model: &model,
        },
    )
}

fn tables(ctx: &Ctx, explicit: &Option<PathBuf>) -> Result<()> {
    let (model, cal) = ctx.cfg.build_model()?;
    let table = ctx.cfg.build_table(&model)?;
    let path = ctx.table_path(explicit);
    table.save(&path)?;
    let mut w = csv_writer(&ctx.path("tables.csv"), "tables")?;
    w.write_record([
        "corner",
        "vdd_mv",
        "k",
        "delay_ps",
        "switched_cap_ff",
        "leakage_energy_fj",
    ])?;
    for (ci, corner) in table.corners.iter().enumerate() {
        for vi in 0..table.grid.len() {
            for k in 0..=MAX_K {
                let cell = table.cell(ci, vi, k);
                w.write_record([
                    corner.to_string(),
                    table.grid.mv(vi).to_string(),
                    k.to_string(),
                    ps(cell.delay),
                    format!("{:.6}", cell.switched_cap * 1e15),
                    format!("{:.6}", cell.leakage_energy * 1e15),
                ])?;
            }
        }
    }
    w.flush()?;
    println!(
        "wrote {} ({} corners, {}..{} mV, repeater size {:.4}, hash {})",
        path.display(),
        table.corners.len(),
        table.grid.floor_mv,
        table.grid.ceiling_mv,
        cal.repeater_size,
        table.geometry_hash
    );
    Ok(())
}

fn combined_profile(traces: &[Trace], table: &DelayEnergyTable) -> TraceProfile {
    let parts: Vec<TraceProfile> = traces
        .par_iter()
        .map(|t| TraceProfile::of(t, table))
        .collect();
    let mut p = TraceProfile::default();
    for part in &parts {
        p.merge(part);
    }
    p
}

fn write_sweep(ctx: &Ctx, prefix: &str, s: &SweepResult) -> Result<()> {
    let mut w = csv_writer(&ctx.path(&format!("{prefix}_curves.csv")), "sweep-curves")?;
    w.write_record([
        "corner",
        "vdd_mv",
        "cycles",
        "errors",
        "error_rate",
        "fatal_cycles",
        "energy_j",
        "dynamic_j",
        "leakage_j",
        "recovery_j",
    ])?;
    for curve in &s.curves {
        for r in curve {
            w.write_record([
                r.corner.to_string(),
                r.vdd_mv.to_string(),
                r.cycles.to_string(),
                r.errors.to_string(),
                format!("{:.6e}", r.error_rate),
                r.fatal_cycles.to_string(),
                format!("{:.9e}", r.energy.total),
                format!("{:.9e}", r.energy.dynamic),
                format!("{:.9e}", r.energy.leakage),
                format!("{:.9e}", r.energy.recovery),
            ])?;
        }
    }
    w.flush()?;
    let mut w = csv_writer(&ctx.path(&format!("{prefix}_gains.csv")), "sweep-gains")?;
    w.write_record([
        "corner",
        "nominal_worst_delay_ps",
        "target",
        "vdd_mv",
        "error_rate",
        "energy_j",
        "baseline_j",
        "gain",
    ])?;
    for g in &s.gains {
        w.write_record([
            g.corner.to_string(),
            ps(g.nominal_worst_delay),
            g.target.to_string(),
            g.vdd_mv.to_string(),
            format!("{:.6e}", g.error_rate),
            format!("{:.9e}", g.energy),
            format!("{:.9e}", g.energy_baseline),
            format!("{:.6}", g.gain),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn sweep(ctx: &Ctx, sel: &Selection) -> Result<()> {
    let table = ctx.cfg.load_table(&ctx.table_path(&sel.table))?;
    let corners = ctx.corners(sel, &table)?;
    let traces = ctx.traces(sel)?;
    let profile = combined_profile(&traces, &table);
    let s = sweep_static(
        &profile,
        &corners,
        &table,
        &ctx.cfg.study.sweep_targets,
        &ctx.cfg.bank()?,
    )?;
    write_sweep(ctx, "sweep", &s)?;
    let best = s
        .gains
        .iter()
        .filter(|g| g.target == 0.0)
        .map(|g| g.gain)
        .fold(f64::NAN, f64::max);
    println!(
        "{} traces, {} words; max zero-error gain {:.1}%",
        traces.len(),
        profile.words,
        best * 100.0
    );
    for g in &s.gains {
        println!(
            "{:<22} target {:>5.3} -> {:>4} mV, rate {:.4}, gain {:>5.1}%",
            g.corner.to_string(),
            g.target,
            g.vdd_mv,
            g.error_rate,
            g.gain * 100.0
        );
    }
    Ok(())
}

/// Closed-loop result plus the fixed-margin comparison point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub trace: String,
    pub corner: String,
    pub floor_mv: u32,
    pub fixed_vs_mv: u32,
    pub fixed_vs_gain: f64,
    pub dvs_gain: f64,
    pub avg_error_rate: f64,
    pub cycles: u64,
    pub errors: u64,
    pub min_applied_mv: u32,
    pub energy_j: f64,
    pub dynamic_j: f64,
    pub leakage_j: f64,
    pub recovery_j: f64,
    pub baseline_j: f64,
}

fn run_one(
    cfg: &ExperimentConfig,
    trace: &Trace,
    corner: PvtCorner,
    table: &DelayEnergyTable,
) -> Result<(RunSummary, RunReport)> {
    let bank = cfg.bank()?;
    let floor = cfg.controller_floor_mv(corner.process, table)?;
    let report = run_dynamic(trace, corner, &cfg.controller, floor, table, &bank)?;
    let fixed_mv = fixed_vs_voltage_mv(corner.process, table, &bank)?;
    let fixed = run_static(trace, corner, fixed_mv as f64 / 1000.0, table, &bank)?;
    let summary = RunSummary {
        trace: trace.name.clone(),
        corner: corner.to_string(),
        floor_mv: floor,
        fixed_vs_mv: fixed_mv,
        fixed_vs_gain: 1.0 - fixed.energy.total / report.energy_baseline,
        dvs_gain: report.energy_gain,
        avg_error_rate: report.avg_error_rate,
        cycles: report.cycles,
        errors: report.errors,
        min_applied_mv: report.min_applied_mv,
        energy_j: report.energy.total,
        dynamic_j: report.energy.dynamic,
        leakage_j: report.energy.leakage,
        recovery_j: report.energy.recovery,
        baseline_j: report.energy_baseline,
    };
    Ok((summary, report))
}

/// Runs every (trace, corner) pair in parallel; results keep input order.
pub fn run_matrix(
    cfg: &ExperimentConfig,
    traces: &[Trace],
    corners: &[PvtCorner],
    table: &DelayEnergyTable,
) -> Result<Vec<(RunSummary, RunReport)>> {
    let jobs: Vec<(usize, PvtCorner)> = (0..traces.len())
        .flat_map(|t| corners.iter().map(move |&c| (t, c)))
        .collect();
    jobs.par_iter()
        .map(|&(t, c)| run_one(cfg, &traces[t], c, table))
        .collect()
}

fn safe_name(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write_run_summaries(path: &Path, rows: &[RunSummary]) -> Result<()> {
    let file = File::create(path)?;
    let mut f = BufWriter::new(file);
    writeln!(f, "# razorbus run-summary v{CSV_SCHEMA_VERSION}")?;
    let mut w = csv::Writer::from_writer(f);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn write_timeline(path: &Path, report: &RunReport) -> Result<()> {
    let mut w = csv_writer(path, "timeline")?;
    w.write_record([
        "window",
        "end_cycle",
        "v_applied_mv",
        "errors",
        "window_error_rate",
        "command",
    ])?;
    for (i, rec) in report.timeline.iter().enumerate() {
        w.write_record([
            i.to_string(),
            rec.end_cycle.to_string(),
            rec.v_applied_mv.to_string(),
            rec.errors.to_string(),
            format!("{:.6}", rec.error_rate),
            format!("{:?}", rec.command).to_lowercase(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run(ctx: &Ctx, sel: &Selection) -> Result<()> {
    let table = ctx.cfg.load_table(&ctx.table_path(&sel.table))?;
    let corners = ctx.corners(sel, &table)?;
    let traces = ctx.traces(sel)?;
    let results = run_matrix(&ctx.cfg, &traces, &corners, &table)?;
    let timeline_dir = ctx.path("timelines");
    fs::create_dir_all(&timeline_dir)?;
    for (s, r) in &results {
        write_timeline(
            &timeline_dir.join(format!(
                "{}__{}.csv",
                safe_name(&s.trace),
                safe_name(&s.corner)
            )),
            r,
        )?;
    }
    let summaries: Vec<RunSummary> = results.iter().map(|(s, _)| s.clone()).collect();
    write_run_summaries(&ctx.path("run_summary.csv"), &summaries)?;
    write_json(&ctx.path("run_summary.json"), &summaries)?;
    println!(
        "{:<18} {:<20} {:>7} {:>9} {:>9} {:>8}",
        "trace", "corner", "floor", "fixed-vs", "dvs", "err%"
    );
    for s in &summaries {
        println!(
            "{:<18} {:<20} {:>5}mV {:>8.1}% {:>8.1}% {:>7.3}%",
            s.trace,
            s.corner,
            s.floor_mv,
            s.fixed_vs_gain * 100.0,
            s.dvs_gain * 100.0,
            s.avg_error_rate * 100.0
        );
    }
    Ok(())
}

fn oracle(ctx: &Ctx, sel: &Selection) -> Result<()> {
    let table = ctx.cfg.load_table(&ctx.table_path(&sel.table))?;
    let corners = ctx.corners(sel, &table)?;
    let traces = ctx.traces(sel)?;
    let bank = ctx.cfg.bank()?;
    let window = ctx.cfg.controller.window_len as usize;
    let mut jobs = Vec::new();
    for t in 0..traces.len() {
        for &c in &corners {
            for &target in &ctx.cfg.study.oracle_targets {
                jobs.push((t, c, target));
            }
        }
    }
    let profiles = jobs
        .par_iter()
        .map(|&(t, c, target)| oracle_voltage_profile(&traces[t], c, &table, target, window, &bank))
        .collect::<Result<Vec<_>>>()?;
    let mut w = csv_writer(&ctx.path("oracle_histogram.csv"), "oracle-histogram")?;
    w.write_record(["trace", "corner", "target", "vdd_mv", "share"])?;
    for (&(t, _, _), p) in jobs.iter().zip(&profiles) {
        for &(mv, share) in &p.histogram {
            w.write_record([
                traces[t].name.clone(),
                p.corner.to_string(),
                p.target.to_string(),
                mv.to_string(),
                format!("{share:.6}"),
            ])?;
        }
    }
    w.flush()?;
    for (&(t, _, _), p) in jobs.iter().zip(&profiles) {
        let modes: Vec<String> = p
            .histogram
            .iter()
            .map(|(mv, s)| format!("{mv}:{:.0}%", s * 100.0))
            .collect();
        println!(
            "{:<18} {:<20} {:.3}  {}",
            traces[t].name,
            p.corner.to_string(),
            p.target,
            modes.join(" ")
        );
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryComparison {
    pub ratio_mult: f64,
    pub ratio_before: f64,
    pub ratio_after: f64,
    pub c_worst_rel_err: f64,
    pub k4_delays_identical: bool,
    pub sweep: Vec<GeometrySweepRow>,
    pub runs: Vec<GeometryRunRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometrySweepRow {
    pub corner: String,
    pub target: f64,
    pub vdd_before_mv: u32,
    pub vdd_after_mv: u32,
    pub gain_before: f64,
    pub gain_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryRunRow {
    pub trace: String,
    pub corner: String,
    pub gain_before: f64,
    pub gain_after: f64,
    pub avg_error_rate_before: f64,
    pub avg_error_rate_after: f64,
}

/// Builds tables for the configured bus and for the same bus with its
/// coupling ratio scaled, then compares static sweeps and closed-loop runs.
pub fn geometry_study(
    cfg: &ExperimentConfig,
    traces: &[Trace],
    corners: &[PvtCorner],
    ratio_mult: f64,
) -> Result<(GeometryComparison, DelayEnergyTable, DelayEnergyTable)> {
    let (model, _) = cfg.build_model()?;
    let before = cfg.build_table(&model)?;
    let mut scaled = model.clone();
    scaled.rc = transform_geometry(model.rc, ratio_mult)?;
    let after = cfg.build_table(&scaled)?;
    let c_worst_rel_err =
        ((scaled.rc.c_g + 4.0 * scaled.rc.c_c) - (model.rc.c_g + 4.0 * model.rc.c_c)).abs()
            / (model.rc.c_g + 4.0 * model.rc.c_c);
    let k4_delays_identical = before.grid == after.grid
        && before
            .path_delay
            .iter()
            .zip(&after.path_delay)
            .all(|(a, b)| {
                a.iter()
                    .zip(b)
                    .all(|(x, y)| x[MAX_K as usize] == y[MAX_K as usize])
            });

    let bank = cfg.bank()?;
    let targets = &cfg.study.sweep_targets;
    let profile = combined_profile(traces, &before);
    let sb = sweep_static(&profile, corners, &before, targets, &bank)?;
    let sa = sweep_static(&profile, corners, &after, targets, &bank)?;
    let sweep = sb
        .gains
        .iter()
        .zip(&sa.gains)
        .map(|(b, a)| GeometrySweepRow {
            corner: b.corner.to_string(),
            target: b.target,
            vdd_before_mv: b.vdd_mv,
            vdd_after_mv: a.vdd_mv,
            gain_before: b.gain,
            gain_after: a.gain,
        })
        .collect();
    let rb = run_matrix(cfg, traces, corners, &before)?;
    let ra = run_matrix(cfg, traces, corners, &after)?;
    let runs = rb
        .iter()
        .zip(&ra)
        .map(|((b, _), (a, _))| GeometryRunRow {
            trace: b.trace.clone(),
            corner: b.corner.clone(),
            gain_before: b.dvs_gain,
            gain_after: a.dvs_gain,
            avg_error_rate_before: b.avg_error_rate,
            avg_error_rate_after: a.avg_error_rate,
        })
        .collect();
    Ok((
        GeometryComparison {
            ratio_mult,
            ratio_before: model.rc.coupling_ratio(),
            ratio_after: scaled.rc.coupling_ratio(),
            c_worst_rel_err,
            k4_delays_identical,
            sweep,
            runs,
        },
        before,
        after,
    ))
}

fn geometry(ctx: &Ctx, sel: &Selection, ratio_mult: Option<f64>) -> Result<()> {
    let mult = ratio_mult.unwrap_or(ctx.cfg.study.ratio_mult);
    let traces = ctx.traces(sel)?;
    let corners: Vec<PvtCorner> = if sel.corners.is_empty() {
        ctx.cfg.corner_list()?
    } else {
        sel.corners
            .iter()
            .map(|c| c.parse())
            .collect::<Result<_>>()?
    };
    let (cmp, _, _) = geometry_study(&ctx.cfg, &traces, &corners, mult)?;
    let mut w = csv_writer(&ctx.path("geometry_sweep.csv"), "geometry-sweep")?;
    for r in &cmp.sweep {
        w.serialize(r)?;
    }
    w.flush()?;
    let mut w = csv_writer(&ctx.path("geometry_runs.csv"), "geometry-runs")?;
    for r in &cmp.runs {
        w.serialize(r)?;
    }
    w.flush()?;
    write_json(&ctx.path("geometry.json"), &cmp)?;
    println!(
        "coupling ratio {:.4} -> {:.4}; worst load rel. err {:.2e}; k=4 delays unchanged: {}",
        cmp.ratio_before, cmp.ratio_after, cmp.c_worst_rel_err, cmp.k4_delays_identical
    );
    for r in cmp.sweep.iter().filter(|r| r.target == 0.02) {
        println!(
            "{:<20} 2% target: {} -> {} mV, gain {:.1}% -> {:.1}%",
            r.corner,
            r.vdd_before_mv,
            r.vdd_after_mv,
            r.gain_before * 100.0,
            r.gain_after * 100.0
        );
    }
    for r in &cmp.runs {
        println!(
            "{:<18} {:<20} dvs gain {:.1}% -> {:.1}%",
            r.trace,
            r.corner,
            r.gain_before * 100.0,
            r.gain_after * 100.0
        );
    }
    Ok(())
}

fn check(ctx: &Ctx) -> Result<()> {
    let (model, _) = ctx.cfg.build_model()?;
    let table = ctx.cfg.build_table(&model)?;
    let d = ctx.cfg.deadlines()?;
    let report = check_hold(
        &model,
        &table.corners,
        &table.grid,
        d.shadow_skew,
        d.hold_margin,
    )?;
    write_json(&ctx.path("hold_check.json"), &report)?;
    println!(
        "hold check {}: fastest path {} ps, required {} ps (shadow skew + hold margin), {} violating points",
        if report.passed { "PASS" } else { "FAIL" },
        ps(report.min_delay),
        ps(report.required),
        report.violations.len()
    );
    if let Some((corner, vdd)) = report.min_at {
        println!("fastest at {corner}, {:.0} mV", vdd * 1000.0);
    }
    Ok(())
}
