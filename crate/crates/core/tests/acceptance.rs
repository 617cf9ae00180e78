//! Exit-gate suite: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use razorbus::cli::{geometry_study, EXIT_FATAL};
use razorbus::controller::VoltageCommand;
use razorbus::flop::min_safe_voltage_mv;
use razorbus::interconnect::{transform_geometry, BusModel, SegmentRc, MAX_K};
use razorbus::pvt::{Process, PvtCorner};
use razorbus::sim::{run_dynamic, run_static, sweep_static, TraceProfile};
use razorbus::trace::{generate, GeneratorKind, Trace};
use razorbus::{BankParams, DelayEnergyTable, ExperimentConfig};

struct Setup {
    cfg: ExperimentConfig,
    model: BusModel,
    table: DelayEnergyTable,
    bank: BankParams,
}

fn setup() -> Setup {
    let cfg = ExperimentConfig::default();
    let (model, _) = cfg.build_model().expect("calibration");
    let table = cfg.build_table(&model).expect("tables");
    let bank = cfg.bank().expect("bank");
    Setup {
        cfg,
        model,
        table,
        bank,
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_razorbus")
}

fn typ_hot() -> PvtCorner {
    PvtCorner::new(Process::Typical, 100.0, 0.0).unwrap()
}

fn suite_traces(cfg: &ExperimentConfig) -> Vec<Trace> {
    use rayon::prelude::*;
    let specs = cfg.trace_specs().unwrap();
    specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            s.resolve(cfg.trace_len, cfg.seed, i as u64, cfg.geometry.n_wires)
                .unwrap()
        })
        .collect()
}

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<Duration, String> {
    let took = started.elapsed();
    ensure(took < limit, || {
        format!("{what} took {took:.2?} (limit {limit:?})")
    })?;
    Ok(took)
}

fn criterion_1(s: &Setup) -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let corners = PvtCorner::all();
    let mut worst_abs = 0.0f64;
    let mut worst_diff = 0.0f64;
    for _ in 0..1000 {
        let c_g = rng.gen_range(5e-15..300e-15);
        let rc = SegmentRc::new(
            rng.gen_range(5.0..500.0),
            c_g,
            c_g * rng.gen_range(0.05..5.0),
        )
        .unwrap();
        let model = BusModel {
            rc,
            repeater_size: rng.gen_range(1.0..200.0),
            ..s.model.clone()
        };
        let v = rng.gen_range(0.6..1.3);
        let corner = corners[rng.gen_range(0..corners.len())];
        let r = model.total_resistance(v, corner).unwrap();
        let d4 = model.stage_delay(4, v, corner).unwrap();
        let want = r * (rc.c_g + 4.0 * rc.c_c);
        worst_abs = worst_abs.max(((d4 - want) / want).abs());
        for k in 1..=MAX_K {
            let diff = model.stage_delay(k, v, corner).unwrap()
                - model.stage_delay(k - 1, v, corner).unwrap();
            let want = r * rc.c_c;
            worst_diff = worst_diff.max(((diff - want) / want).abs());
        }
    }
    ensure(worst_abs <= 1e-12, || {
        format!("k=4 identity rel. error {worst_abs:.3e}")
    })?;
    ensure(worst_diff <= 1e-12, || {
        format!("class-step identity rel. error {worst_diff:.3e}")
    })?;
    let took = within(Duration::from_secs(1), start, "1000 samples")?;
    Ok(format!(
        "max rel. error {worst_abs:.1e} (k=4), {worst_diff:.1e} (step); {took:.2?}"
    ))
}

fn criterion_2(s: &Setup) -> Verdict {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["calibrate", "--out"])
        .arg(std::env::temp_dir().join("razorbus-acc-cal"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("calibrate exited {:?}", out.status.code())
    })?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let printed: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("worst-corner delay"))
        .and_then(|l| l.split_whitespace().next())
        .and_then(|v| v.parse().ok())
        .ok_or("calibrate did not print the worst-corner delay")?;
    let delay_ps = s
        .model
        .path_delay(MAX_K, 1.2, PvtCorner::worst())
        .map_err(|e| e.to_string())?
        * 1e12;
    ensure((599.4..=600.0).contains(&delay_ps), || {
        format!("worst delay {delay_ps:.4} ps")
    })?;
    ensure((599.4..=600.0).contains(&printed), || {
        format!("printed worst delay {printed} ps")
    })?;
    let trace = generate(&GeneratorKind::Adversarial, 1_000_000, 0, 32).unwrap();
    let r = run_static(&trace, PvtCorner::worst(), 1.2, &s.table, &s.bank)
        .map_err(|e| e.to_string())?;
    ensure(r.errors == 0 && r.fatal_cycles == 0, || {
        format!("{} errors, {} fatal at 1.2 V", r.errors, r.fatal_cycles)
    })?;
    let took = within(Duration::from_secs(30), start, "calibration check")?;
    Ok(format!(
        "worst delay {delay_ps:.4} ps; 1e6 adversarial cycles, 0 errors; {took:.2?}"
    ))
}

fn criterion_3(s: &Setup) -> Verdict {
    let start = Instant::now();
    let t = &s.table;
    for (ci, corner) in t.corners.iter().enumerate() {
        for vi in 0..t.grid.len() {
            for k in 0..=MAX_K as usize {
                let d = t.path_delay[ci][vi][k];
                if vi > 0 {
                    ensure(d >= t.path_delay[ci][vi - 1][k], || {
                        format!("{corner}: delay falls with supply at {} mV", t.grid.mv(vi))
                    })?;
                }
                if k > 0 {
                    ensure(d >= t.path_delay[ci][vi][k - 1], || {
                        format!("{corner}: delay falls with k at {} mV", t.grid.mv(vi))
                    })?;
                }
            }
        }
    }
    let kinds = [
        GeneratorKind::UniformRandom,
        GeneratorKind::PerBitToggle { p: 0.1 },
        GeneratorKind::PerBitToggle { p: 0.25 },
        GeneratorKind::Markov {
            p_low: 0.05,
            p_high: 0.4,
            p_switch: 1e-4,
        },
        GeneratorKind::Adversarial,
    ];
    let mut worst_dev = 0.0f64;
    for (seed, kind) in kinds.iter().enumerate() {
        let trace = generate(kind, 50_000, seed as u64 + 1, 32).unwrap();
        for &corner in &t.corners {
            let runs: Vec<_> = (0..t.grid.len())
                .map(|vi| run_static(&trace, corner, t.grid.volts(vi), t, &s.bank).unwrap())
                .collect();
            for vi in 1..runs.len() {
                ensure(runs[vi].error_rate >= runs[vi - 1].error_rate, || {
                    format!(
                        "{corner}: error rate rises with supply at {} mV",
                        runs[vi - 1].vdd_mv
                    )
                })?;
            }
            for a in &runs {
                for b in &runs {
                    let va = a.vdd_mv as f64 / 1000.0;
                    let vb = b.vdd_mv as f64 / 1000.0;
                    let dev = (a.energy.dynamic / b.energy.dynamic) / (va * va / (vb * vb)) - 1.0;
                    worst_dev = worst_dev.max(dev.abs());
                }
            }
        }
    }
    ensure(worst_dev <= 1e-3, || {
        format!("dynamic energy deviates {worst_dev:.3e} from V^2")
    })?;
    let took = within(Duration::from_secs(60), start, "monotonicity suite")?;
    Ok(format!("tables monotone; 5 traces x 12 corners monotone; V^2 deviation {worst_dev:.1e}; {took:.2?}"))
}

fn criterion_4(s: &Setup, suite: &[Trace]) -> Verdict {
    let mut profile = TraceProfile::default();
    for t in suite {
        profile.merge(&TraceProfile::of(t, &s.table));
    }
    let sweep = sweep_static(&profile, &s.table.corners, &s.table, &[0.02, 0.05], &s.bank)
        .map_err(|e| e.to_string())?;
    let mut at2: Vec<_> = sweep.gains.iter().filter(|g| g.target == 0.02).collect();
    let at5: Vec<_> = sweep.gains.iter().filter(|g| g.target == 0.05).collect();
    for (a, b) in at2.iter().zip(&at5) {
        ensure(b.gain >= a.gain, || {
            format!(
                "{}: 5% gain {:.4} below 2% gain {:.4}",
                a.corner, b.gain, a.gain
            )
        })?;
    }
    // Slowest corner first; gains must not fall as corners speed up.
    at2.sort_by(|a, b| b.nominal_worst_delay.total_cmp(&a.nominal_worst_delay));
    let inversions: Vec<String> = at2
        .windows(2)
        .filter(|w| w[1].gain < w[0].gain)
        .map(|w| {
            format!(
                "{} ({:.1} ps, {} mV, {:.2}%) > {} ({:.1} ps, {} mV, {:.2}%)",
                w[0].corner,
                w[0].nominal_worst_delay * 1e12,
                w[0].vdd_mv,
                w[0].gain * 100.0,
                w[1].corner,
                w[1].nominal_worst_delay * 1e12,
                w[1].vdd_mv,
                w[1].gain * 100.0
            )
        })
        .collect();
    ensure(inversions.is_empty(), || {
        format!(
            "2% gain not monotone in corner speed: {}",
            inversions.join("; ")
        )
    })?;
    Ok(format!(
        "2% gains {:.1}%..{:.1}% monotone over 12 corners; 5% >= 2%",
        at2.first().unwrap().gain * 100.0,
        at2.last().unwrap().gain * 100.0
    ))
}

fn criterion_5(s: &Setup) -> Verdict {
    let start = Instant::now();
    let trace = generate(&GeneratorKind::PerBitToggle { p: 0.3 }, 10_000_000, 5, 32).unwrap();
    let floor = min_safe_voltage_mv(Process::Typical, &s.table, &s.bank.deadlines).unwrap();
    let cfg = &s.cfg.controller;
    let r =
        run_dynamic(&trace, typ_hot(), cfg, floor, &s.table, &s.bank).map_err(|e| e.to_string())?;
    let took = start.elapsed();

    let tail = &r.timeline[r.timeline.len() / 2..];
    let lo = tail.iter().map(|w| w.v_applied_mv).min().unwrap();
    let hi = tail.iter().map(|w| w.v_applied_mv).max().unwrap();
    ensure(hi - lo <= 40, || {
        format!("steady band {lo}..{hi} mV wider than 40 mV")
    })?;
    ensure(r.avg_error_rate <= 0.023, || {
        format!("average error rate {:.4}", r.avg_error_rate)
    })?;
    let first_up = r
        .timeline
        .iter()
        .position(|w| w.command == VoltageCommand::Up)
        .ok_or("controller never stepped up")?;
    let peak = r.timeline[..=first_up]
        .iter()
        .map(|w| w.error_rate)
        .fold(0.0, f64::max);
    ensure(peak > 0.02, || {
        format!("initial descent peaks at {peak:.4}")
    })?;
    ensure(r.min_applied_mv >= floor, || {
        format!("applied {} mV below floor {floor} mV", r.min_applied_mv)
    })?;

    // Every non-hold decision lands exactly once, one grid step away, after the latency.
    let mut changes = r.voltage_changes.iter();
    for w in &r.timeline {
        if w.command == VoltageCommand::Hold {
            continue;
        }
        let Some(c) = changes.next() else {
            // A decision in the last window may still be in flight at trace end.
            ensure(w.end_cycle + cfg.latency_cycles >= r.cycles, || {
                format!("decision at {} never applied", w.end_cycle)
            })?;
            continue;
        };
        ensure(c.issued_at == w.end_cycle, || {
            format!(
                "change issued at {} for decision at {}",
                c.issued_at, w.end_cycle
            )
        })?;
        ensure(c.applied_at - c.issued_at == 3000, || {
            format!("latency {} at {}", c.applied_at - c.issued_at, c.issued_at)
        })?;
        ensure(c.from_mv.abs_diff(c.to_mv) == 20, || {
            format!("step {} -> {} mV", c.from_mv, c.to_mv)
        })?;
        let expect_up = w.command == VoltageCommand::Up;
        ensure((c.to_mv > c.from_mv) == expect_up, || {
            format!("change direction at {}", c.issued_at)
        })?;
        ensure(c.to_mv >= floor, || {
            format!("commanded {} mV below floor", c.to_mv)
        })?;
    }
    ensure(changes.next().is_none(), || {
        "voltage change without a decision".to_string()
    })?;
    Ok(format!(
        "band {lo}..{hi} mV, avg rate {:.3}%, descent peak {:.2}%, {} voltage changes checked, floor {floor} mV; {took:.2?}",
        r.avg_error_rate * 100.0,
        peak * 100.0,
        r.voltage_changes.len()
    ))
}

fn campaign_kind(rng: &mut ChaCha8Rng) -> GeneratorKind {
    match rng.gen_range(0..5) {
        0 => GeneratorKind::UniformRandom,
        1 => GeneratorKind::PerBitToggle {
            p: rng.gen_range(0.02..0.6),
        },
        2 => GeneratorKind::Adversarial,
        3 => GeneratorKind::TwoPhase {
            first: Box::new(GeneratorKind::Quiet { word: rng.gen() }),
            second: Box::new(GeneratorKind::Adversarial),
            phase_len: rng.gen_range(50_000..250_000),
        },
        _ => GeneratorKind::Markov {
            p_low: rng.gen_range(0.0..0.2),
            p_high: rng.gen_range(0.2..0.6),
            p_switch: rng.gen_range(1e-5..1e-3),
        },
    }
}

fn criterion_6(s: &Setup) -> Verdict {
    use rayon::prelude::*;
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let corners = PvtCorner::all();
    let jobs: Vec<(GeneratorKind, PvtCorner, u64)> = (0..100)
        .map(|_| {
            (
                campaign_kind(&mut rng),
                corners[rng.gen_range(0..corners.len())],
                rng.gen(),
            )
        })
        .collect();
    let fatal: Vec<String> = jobs
        .par_iter()
        .filter_map(|(kind, corner, seed)| {
            let trace = generate(kind, 300_000, *seed, 32).unwrap();
            let floor = s.cfg.controller_floor_mv(corner.process, &s.table).unwrap();
            match run_dynamic(&trace, *corner, &s.cfg.controller, floor, &s.table, &s.bank) {
                Ok(_) => None,
                Err(e) => Some(format!("{corner}: {e}")),
            }
        })
        .collect();
    ensure(fatal.is_empty(), || {
        format!("{} campaign runs failed: {}", fatal.len(), fatal.join("; "))
    })?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg_path = dir.path().join("lowered.json");
    std::fs::write(&cfg_path, r#"{"controller": {"floor_offset_mv": -40}}"#)
        .map_err(|e| e.to_string())?;
    let table = dir.path().join("t.json");
    let common = |cmd: &str| {
        let mut c = Command::new(bin());
        c.arg(cmd)
            .arg("--config")
            .arg(&cfg_path)
            .arg("--out")
            .arg(dir.path())
            .arg("--table")
            .arg(&table);
        c
    };
    let st = common("tables").output().map_err(|e| e.to_string())?;
    ensure(st.status.success(), || {
        String::from_utf8_lossy(&st.stderr).into_owned()
    })?;
    let out = common("run")
        .args([
            "--corner",
            "slow,100,ir10",
            "--trace",
            "gen:two-phase:first=quiet,second=adversarial,phase=300000,n=600000,seed=1",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(EXIT_FATAL), || {
        format!("lowered floor exited {:?}: {stderr}", out.status.code())
    })?;
    ensure(stderr.contains("fatal"), || {
        format!("no fatal diagnostic: {stderr}")
    })?;
    Ok(format!(
        "100 floored runs, 0 fatal; floor-40 mV run exits {EXIT_FATAL}: {}",
        stderr.lines().next().unwrap_or("").trim()
    ))
}

fn criterion_7(s: &Setup, suite: &[Trace]) -> Verdict {
    let rc = s.model.rc;
    let t = transform_geometry(rc, 1.95).map_err(|e| e.to_string())?;
    let before = rc.c_g + 4.0 * rc.c_c;
    let after = t.c_g + 4.0 * t.c_c;
    let rel = ((after - before) / before).abs();
    ensure(rel <= 1e-12, || format!("worst load moved by {rel:.3e}"))?;

    let corners = vec![typ_hot(), PvtCorner::worst()];
    let (cmp, tb, ta) = geometry_study(&s.cfg, suite, &corners, 1.95).map_err(|e| e.to_string())?;
    ensure(cmp.k4_delays_identical, || {
        "k=4 table delays changed".to_string()
    })?;
    for (rb, ra) in tb.path_delay.iter().zip(&ta.path_delay) {
        for (b, a) in rb.iter().zip(ra) {
            ensure(
                b[MAX_K as usize].to_bits() == a[MAX_K as usize].to_bits(),
                || "k=4 delay bits differ".to_string(),
            )?;
        }
    }

    // (b) over all twelve corners
    let mut profile = TraceProfile::default();
    for tr in suite {
        profile.merge(&TraceProfile::of(tr, &tb));
    }
    let sb =
        sweep_static(&profile, &tb.corners, &tb, &[0.02], &s.bank).map_err(|e| e.to_string())?;
    let sa =
        sweep_static(&profile, &ta.corners, &ta, &[0.02], &s.bank).map_err(|e| e.to_string())?;
    let mut lowered = 0;
    for (b, a) in sb.gains.iter().zip(&sa.gains) {
        ensure(a.vdd_mv <= b.vdd_mv, || {
            format!(
                "{}: 2% supply rose {} -> {} mV",
                b.corner, b.vdd_mv, a.vdd_mv
            )
        })?;
        if a.vdd_mv + 20 <= b.vdd_mv {
            lowered += 1;
        }
    }
    ensure(lowered >= 1, || {
        "no corner reaches the 2% target at a lower supply".to_string()
    })?;

    // (c) closed-loop gains at the reference corner
    let reference = typ_hot().to_string();
    let worse: Vec<String> = cmp
        .runs
        .iter()
        .filter(|r| r.corner == reference && r.gain_after < r.gain_before)
        .map(|r| format!("{}: {:.4} -> {:.4}", r.trace, r.gain_before, r.gain_after))
        .collect();
    ensure(worse.is_empty(), || {
        format!("closed-loop gain fell: {}", worse.join("; "))
    })?;
    let n_ref = cmp.runs.iter().filter(|r| r.corner == reference).count();
    ensure(n_ref == 10, || {
        format!("{n_ref} benchmark runs at the reference corner")
    })?;

    let worst = PvtCorner::worst().to_string();
    let (wb, wa, wn) = cmp
        .runs
        .iter()
        .filter(|r| r.corner == worst)
        .fold((0.0, 0.0, 0.0), |(b, a, n), r| {
            (b + r.gain_before, a + r.gain_after, n + 1.0)
        });
    let worst_down = cmp
        .runs
        .iter()
        .filter(|r| r.corner == worst && r.gain_after < r.gain_before)
        .count();
    println!(
        "  info: {worst} mean closed-loop gain {:.2}% -> {:.2}% ({worst_down} of 10 benchmarks slightly lower)",
        wb / wn * 100.0,
        wa / wn * 100.0
    );
    Ok(format!(
        "load rel. error {rel:.1e}; k=4 bit-identical; {lowered}/12 corners lower at 2%; 10/10 gains >= at {reference}"
    ))
}

fn dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    std::fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

fn criterion_8(s: &Setup) -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let table = dir.path().join("t.json");
    let run = |out: &Path, cmd: &str, extra: &[&str]| -> Result<(), String> {
        let o = Command::new(bin())
            .arg(cmd)
            .args(["--seed", "77", "--table"])
            .arg(&table)
            .arg("--out")
            .arg(out)
            .args(extra)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.success(), || {
            String::from_utf8_lossy(&o.stderr).into_owned()
        })
    };
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        run(out, "tables", &[])?;
        let sel = [
            "--cycles",
            "200000",
            "--corner",
            "typical,100,no-ir",
            "--corner",
            "fast,25,ir10",
        ];
        run(out, "run", &sel)?;
        run(out, "sweep", &sel)?;
        run(out, "oracle", &sel)?;
    }
    let fa = dir_files(&a);
    let fb = dir_files(&b);
    ensure(!fa.is_empty() && fa == fb, || {
        "output directories differ".to_string()
    })?;

    let start = Instant::now();
    let trace = generate(&GeneratorKind::PerBitToggle { p: 0.2 }, 10_000_000, 8, 32).unwrap();
    let floor = min_safe_voltage_mv(Process::Typical, &s.table, &s.bank.deadlines).unwrap();
    let r1 = run_dynamic(
        &trace,
        typ_hot(),
        &s.cfg.controller,
        floor,
        &s.table,
        &s.bank,
    )
    .map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(60), start, "10M-cycle generation + run")?;
    let r2 = run_dynamic(
        &trace,
        typ_hot(),
        &s.cfg.controller,
        floor,
        &s.table,
        &s.bank,
    )
    .map_err(|e| e.to_string())?;
    ensure(r1 == r2, || "repeated run differs".to_string())?;
    let ja = serde_json::to_vec(&r1).unwrap();
    let jb = serde_json::to_vec(&r2).unwrap();
    ensure(ja == jb, || "serialized reports differ".to_string())?;
    Ok(format!(
        "{} output files byte-identical; 10M cycles in {took:.2?}",
        fa.len()
    ))
}

fn main() {
    let s = setup();
    let suite = suite_traces(&s.cfg);
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("stage-delay identities", Box::new(|| criterion_1(&s))),
        ("calibration contract", Box::new(|| criterion_2(&s))),
        ("monotonicity suite", Box::new(|| criterion_3(&s))),
        ("corner-gain ordering", Box::new(|| criterion_4(&s, &suite))),
        ("controller behavior", Box::new(|| criterion_5(&s))),
        ("shadow-latch safety", Box::new(|| criterion_6(&s))),
        ("geometry study", Box::new(|| criterion_7(&s, &suite))),
        ("determinism and throughput", Box::new(|| criterion_8(&s))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".to_string()))
        });
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {name} — {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} — {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
