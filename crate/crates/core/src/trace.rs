//! Bus word traces: a hex-lines file format and seeded synthetic generators.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alternating complement pair: every wire toggles against both neighbors.
pub const CHECKER_A: u32 = 0x5555_5555;
pub const CHECKER_B: u32 = 0xAAAA_AAAA;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    UniformRandom,
    /// Each wire flips independently with probability `p` every cycle.
    PerBitToggle {
        p: f64,
    },
    Adversarial,
    Quiet {
        word: u32,
    },
    /// Alternates `phase_len`-word stretches from two generators, starting with `first`.
    TwoPhase {
        first: Box<GeneratorKind>,
        second: Box<GeneratorKind>,
        phase_len: usize,
    },
    /// Activity level follows a two-state Markov chain switching with
    /// probability `p_switch` per cycle; each state toggles bits at its own rate.
    Markov {
        p_low: f64,
        p_high: f64,
        p_switch: f64,
    },
}

impl GeneratorKind {
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be a probability (got {p})"
                )))
            }
        };
        match self {
            GeneratorKind::PerBitToggle { p } => prob("p", *p),
            GeneratorKind::TwoPhase {
                first,
                second,
                phase_len,
            } => {
                if *phase_len == 0 {
                    return Err(Error::InvalidParameter(
                        "phase_len must be >= 1".to_string(),
                    ));
                }
                first.validate()?;
                second.validate()
            }
            GeneratorKind::Markov {
                p_low,
                p_high,
                p_switch,
            } => {
                prob("p_low", *p_low)?;
                prob("p_high", *p_high)?;
                prob("p_switch", *p_switch)
            }
            _ => Ok(()),
        }
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> u32 {
        match self {
            GeneratorKind::Adversarial => CHECKER_A,
            GeneratorKind::Quiet { word } => *word,
            GeneratorKind::TwoPhase { first, .. } => first.initial(rng),
            _ => rng.gen(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceSource {
    File(PathBuf),
    Generator { kind: GeneratorKind, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub name: String,
    pub words: Vec<u32>,
    pub source: TraceSource,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn toggle_mask(rng: &mut ChaCha8Rng, p: f64) -> u32 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return u32::MAX;
    }
    let mut mask = 0u32;
    for bit in 0..32 {
        if rng.gen_bool(p) {
            mask |= 1 << bit;
        }
    }
    mask
}

/// Stateful word source built from a [`GeneratorKind`].
enum Source {
    Uniform,
    Toggle(f64),
    Adversarial,
    Quiet,
    Phased {
        a: Box<Source>,
        b: Box<Source>,
        phase_len: usize,
        pos: usize,
        in_b: bool,
    },
    Markov {
        p_low: f64,
        p_high: f64,
        p_switch: f64,
        high: bool,
    },
}

impl Source {
    fn new(kind: &GeneratorKind) -> Self {
        match kind {
            GeneratorKind::UniformRandom => Source::Uniform,
            GeneratorKind::PerBitToggle { p } => Source::Toggle(*p),
            GeneratorKind::Adversarial => Source::Adversarial,
            GeneratorKind::Quiet { .. } => Source::Quiet,
            GeneratorKind::TwoPhase {
                first,
                second,
                phase_len,
            } => Source::Phased {
                a: Box::new(Source::new(first)),
                b: Box::new(Source::new(second)),
                phase_len: *phase_len,
                pos: 0,
                in_b: false,
            },
            GeneratorKind::Markov {
                p_low,
                p_high,
                p_switch,
            } => Source::Markov {
                p_low: *p_low,
                p_high: *p_high,
                p_switch: *p_switch,
                high: false,
            },
        }
    }

    fn next(&mut self, prev: u32, rng: &mut ChaCha8Rng) -> u32 {
        match self {
            Source::Uniform => rng.gen(),
            Source::Toggle(p) => prev ^ toggle_mask(rng, *p),
            Source::Adversarial => {
                if prev == CHECKER_A {
                    CHECKER_B
                } else {
                    CHECKER_A
                }
            }
            Source::Quiet => prev,
            Source::Phased {
                a,
                b,
                phase_len,
                pos,
                in_b,
            } => {
                if *pos == *phase_len {
                    *pos = 0;
                    *in_b = !*in_b;
                }
                *pos += 1;
                if *in_b {
                    b.next(prev, rng)
                } else {
                    a.next(prev, rng)
                }
            }
            Source::Markov {
                p_low,
                p_high,
                p_switch,
                high,
            } => {
                if rng.gen_bool(*p_switch) {
                    *high = !*high;
                }
                let p = if *high { *p_high } else { *p_low };
                prev ^ toggle_mask(rng, p)
            }
        }
    }
}

/// Pure function of `(kind, n, seed, n_wires)`.
pub fn generate(kind: &GeneratorKind, n: usize, seed: u64, n_wires: usize) -> Result<Trace> {
    if n == 0 {
        return Err(Error::EmptyTrace);
    }
    kind.validate()?;
    let mask = wire_mask(n_wires);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words = Vec::with_capacity(n);
    let mut word = kind.initial(&mut rng) & mask;
    words.push(word);
    let mut source = Source::new(kind);
    // For a phased trace the opening word belongs to the first phase.
    if let Source::Phased { pos, .. } = &mut source {
        *pos = 1;
    }
    for _ in 1..n {
        word = source.next(word, &mut rng) & mask;
        words.push(word);
    }
    Ok(Trace {
        name: kind_name(kind).to_string(),
        words,
        source: TraceSource::Generator {
            kind: kind.clone(),
            seed,
        },
    })
}

fn wire_mask(n_wires: usize) -> u32 {
    if n_wires >= 32 {
        u32::MAX
    } else {
        (1u32 << n_wires) - 1
    }
}

pub fn kind_name(kind: &GeneratorKind) -> &'static str {
    match kind {
        GeneratorKind::UniformRandom => "uniform",
        GeneratorKind::PerBitToggle { .. } => "per-bit-toggle",
        GeneratorKind::Adversarial => "adversarial",
        GeneratorKind::Quiet { .. } => "quiet",
        GeneratorKind::TwoPhase { .. } => "two-phase",
        GeneratorKind::Markov { .. } => "markov",
    }
}

/// Reads one hexadecimal word per line (`0x` optional). Blank lines and
/// `#` comments are skipped.
pub fn load_trace(path: &Path, n_wires: usize) -> Result<Trace> {
    let file = File::open(path)?;
    // Nine bytes per "XXXXXXXX\n" line; avoids doubling reallocations on big files.
    let hint = file.metadata().map(|m| m.len() / 9).unwrap_or(0) as usize;
    let mut reader = BufReader::new(file);
    let mask = u64::from(wire_mask(n_wires));
    let mut words = Vec::with_capacity(hint);
    let mut line = String::new();
    let mut line_no = 0usize;
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        line_no += 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let hex = body
            .strip_prefix("0x")
            .or_else(|| body.strip_prefix("0X"))
            .unwrap_or(body);
        let word = u64::from_str_radix(hex, 16).map_err(|e| Error::TraceParse {
            line: line_no,
            msg: format!("`{body}` is not a hexadecimal word ({e})"),
        })?;
        if word & !mask != 0 {
            return Err(Error::WordTooWide {
                line: line_no,
                word,
                n_wires,
            });
        }
        words.push(word as u32);
    }
    if words.is_empty() {
        return Err(Error::EmptyTrace);
    }
    words.shrink_to_fit();
    Ok(Trace {
        name: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "trace".to_string()),
        words,
        source: TraceSource::File(path.to_path_buf()),
    })
}

pub fn save_trace(trace: &Trace, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# {}", trace.name)?;
    for word in &trace.words {
        writeln!(w, "{word:08X}")?;
    }
    w.flush()?;
    Ok(())
}

/// The ten-program evaluation suite: distinct activity levels and phase
/// behavior, standing in for recorded program traces.
pub fn pseudo_benchmarks() -> Vec<(&'static str, GeneratorKind)> {
    use GeneratorKind::*;
    let toggle = |p: f64| Box::new(PerBitToggle { p });
    vec![
        ("pb01-sparse", PerBitToggle { p: 0.06 }),
        ("pb02-steady", PerBitToggle { p: 0.16 }),
        ("pb03-dense", PerBitToggle { p: 0.21 }),
        ("pb04-streaming", PerBitToggle { p: 0.18 }),
        (
            "pb05-bursty",
            Markov {
                p_low: 0.04,
                p_high: 0.24,
                p_switch: 2e-5,
            },
        ),
        (
            "pb06-idle-heavy",
            TwoPhase {
                first: Box::new(Quiet { word: 0 }),
                second: toggle(0.20),
                phase_len: 150_000,
            },
        ),
        (
            "pb07-mixed",
            Markov {
                p_low: 0.10,
                p_high: 0.20,
                p_switch: 1e-5,
            },
        ),
        (
            "pb08-phased",
            TwoPhase {
                first: toggle(0.08),
                second: toggle(0.24),
                phase_len: 400_000,
            },
        ),
        ("pb09-light", PerBitToggle { p: 0.11 }),
        (
            "pb10-churn",
            Markov {
                p_low: 0.12,
                p_high: 0.26,
                p_switch: 5e-5,
            },
        ),
    ]
}

/// Where a trace comes from, as written on the command line or in config:
/// `gen:<kind>[:k=v,...]`, `bench:<name>`, `file:<path>` or a bare path.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceSpec {
    File(PathBuf),
    Gen {
        kind: GeneratorKind,
        n: Option<usize>,
        seed: Option<u64>,
    },
    Bench {
        name: String,
        n: Option<usize>,
    },
}

fn parse_sub_kind(spec: &str, s: &str) -> Result<GeneratorKind> {
    let bad = |msg: String| Error::TraceSpec {
        spec: spec.to_string(),
        msg,
    };
    let (name, arg) = match s.split_once('@') {
        Some((n, a)) => (n, Some(a)),
        None => (s, None),
    };
    let num = |a: Option<&str>| -> Result<f64> {
        a.ok_or_else(|| bad(format!("`{name}` needs a value, e.g. {name}@0.2")))?
            .parse()
            .map_err(|_| bad(format!("bad number in `{s}`")))
    };
    Ok(match name {
        "uniform" => GeneratorKind::UniformRandom,
        "adversarial" => GeneratorKind::Adversarial,
        "quiet" => GeneratorKind::Quiet {
            word: match arg {
                Some(a) => parse_hex_u32(a).ok_or_else(|| bad(format!("bad word in `{s}`")))?,
                None => 0,
            },
        },
        "toggle" | "per-bit-toggle" => GeneratorKind::PerBitToggle { p: num(arg)? },
        other => return Err(Error::UnknownGenerator(other.to_string())),
    })
}

fn parse_hex_u32(s: &str) -> Option<u32> {
    let s = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u32::from_str_radix(s, 16).ok()
}

impl TraceSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |msg: String| Error::TraceSpec {
            spec: spec.to_string(),
            msg,
        };
        if let Some(path) = spec.strip_prefix("file:") {
            return Ok(TraceSpec::File(PathBuf::from(path)));
        }
        if let Some(rest) = spec.strip_prefix("bench:") {
            let (name, params) = rest.split_once(':').unwrap_or((rest, ""));
            let mut n = None;
            for (k, v) in split_params(params) {
                match k {
                    "n" => n = Some(v.parse().map_err(|_| bad(format!("bad n `{v}`")))?),
                    _ => return Err(bad(format!("unknown parameter `{k}`"))),
                }
            }
            return Ok(TraceSpec::Bench {
                name: name.to_string(),
                n,
            });
        }
        let Some(rest) = spec.strip_prefix("gen:") else {
            return Ok(TraceSpec::File(PathBuf::from(spec)));
        };
        let (kind, params) = rest.split_once(':').unwrap_or((rest, ""));
        let mut n = None;
        let mut seed = None;
        let mut p = None;
        let mut word = None;
        let mut first = None;
        let mut second = None;
        let mut phase = None;
        let mut p_low = None;
        let mut p_high = None;
        let mut p_switch = None;
        for (k, v) in split_params(params) {
            let f = || -> Result<f64> {
                v.parse()
                    .map_err(|_| bad(format!("bad number `{v}` for `{k}`")))
            };
            let u = || -> Result<usize> {
                v.parse()
                    .map_err(|_| bad(format!("bad count `{v}` for `{k}`")))
            };
            match k {
                "n" => n = Some(u()?),
                "seed" => seed = Some(v.parse().map_err(|_| bad(format!("bad seed `{v}`")))?),
                "p" => p = Some(f()?),
                "word" => {
                    word = Some(parse_hex_u32(v).ok_or_else(|| bad(format!("bad word `{v}`")))?)
                }
                "first" => first = Some(parse_sub_kind(spec, v)?),
                "second" => second = Some(parse_sub_kind(spec, v)?),
                "phase" => phase = Some(u()?),
                "p_low" => p_low = Some(f()?),
                "p_high" => p_high = Some(f()?),
                "p_switch" => p_switch = Some(f()?),
                _ => return Err(bad(format!("unknown parameter `{k}`"))),
            }
        }
        let need = |name: &str, v: Option<f64>| v.ok_or_else(|| bad(format!("missing `{name}`")));
        let kind = match kind {
            "uniform" | "uniform-random" => GeneratorKind::UniformRandom,
            "per-bit-toggle" | "toggle" => GeneratorKind::PerBitToggle { p: need("p", p)? },
            "adversarial" => GeneratorKind::Adversarial,
            "quiet" => GeneratorKind::Quiet {
                word: word.unwrap_or(0),
            },
            "two-phase" => GeneratorKind::TwoPhase {
                first: Box::new(first.unwrap_or(GeneratorKind::Quiet { word: 0 })),
                second: Box::new(second.unwrap_or(GeneratorKind::Adversarial)),
                phase_len: phase.unwrap_or(100_000),
            },
            "markov" => GeneratorKind::Markov {
                p_low: need("p_low", p_low)?,
                p_high: need("p_high", p_high)?,
                p_switch: need("p_switch", p_switch)?,
            },
            other => return Err(Error::UnknownGenerator(other.to_string())),
        };
        kind.validate().map_err(|e| bad(e.to_string()))?;
        Ok(TraceSpec::Gen { kind, n, seed })
    }

    /// Materializes the trace. `base_seed` feeds generators that carry no
    /// explicit seed; `salt` separates traces sharing one base seed.
    pub fn resolve(
        &self,
        default_n: usize,
        base_seed: u64,
        salt: u64,
        n_wires: usize,
    ) -> Result<Trace> {
        match self {
            TraceSpec::File(path) => load_trace(path, n_wires),
            TraceSpec::Gen { kind, n, seed } => {
                let seed = seed.unwrap_or_else(|| mix_seed(base_seed, salt));
                generate(kind, n.unwrap_or(default_n), seed, n_wires)
            }
            TraceSpec::Bench { name, n } => {
                let suite = pseudo_benchmarks();
                let (idx, (full, kind)) = suite
                    .iter()
                    .enumerate()
                    .find(|(_, (b, _))| *b == name || b.split('-').next() == Some(name.as_str()))
                    .ok_or_else(|| Error::UnknownGenerator(format!("bench:{name}")))?;
                let mut t = generate(
                    kind,
                    n.unwrap_or(default_n),
                    mix_seed(base_seed, idx as u64),
                    n_wires,
                )?;
                t.name = full.to_string();
                Ok(t)
            }
        }
    }
}

fn split_params(params: &str) -> impl Iterator<Item = (&str, &str)> {
    params
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| kv.split_once('=').unwrap_or((kv, "")))
}

/// SplitMix64 step; keeps derived seeds well separated.
pub fn mix_seed(base: u64, salt: u64) -> u64 {
    let mut z = base ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
