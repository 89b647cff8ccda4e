//! Command-line front-end for the gripper friction model.
//!
//! Every library capability is a subcommand that emits a CSV or JSON table
//! (`--format`), written to stdout or a file (`--output`). Pressures on the
//! command line are in kPa, masses in grams or kilograms by suffix
//! (`200g`, `0.2kg`, bare numbers are kilograms); everything is converted to
//! base SI units at the edge and all output is in base SI units.
//!
//! Subcommands that answer a feasibility question never abort on an
//! infeasible result: they print an `infeasible` sentinel row and exit 0,
//! unless `--strict` asks for exit code 1. Usage, config, and input-parsing
//! errors exit 2.

use std::io::{Read, Write as _};
use std::path::PathBuf;

use anyhow::{anyhow, bail, ensure, Context};
use clap::{Parser, Subcommand, ValueEnum};
use softgrip::{
    check_grasp, friction_from_trace, load_config, min_normal_force, min_pressure,
    monte_carlo_trials, resolve_bulge, resolve_contact, roundness_ratio, success_table,
    sweep_grid, BulgeMode, GraspOutcome, GraspVerdict, LoadedConfig, SlideTrace, TraceSample,
    TraceWindow, TrialRecord,
};

const PA_PER_KPA: f64 = 1.0e3;

#[derive(Parser)]
#[command(name = "softgrip", version, about = "Pressure-tunable friction model for a membrane-rim gripper finger")]
struct Cli {
    /// Membrane / plant / grasp configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output to PATH ("-" = stdout).
    #[arg(long, global = true, value_name = "PATH|-", default_value = "-")]
    output: String,

    /// Exit 1 when a feasibility subcommand finds no feasible result.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Clamped linear bulge approximation.
    Linear,
    /// Exact inversion of the inflation relation.
    Exact,
}

#[derive(Subcommand)]
enum Cmd {
    /// Membrane bulge state at one inflation pressure.
    Bulge {
        /// Inflation pressure, kPa.
        #[arg(long)]
        pressure: f64,
        /// Bulge model to use.
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
    /// Contact solution and friction capacity at one (force, pressure) point.
    Friction {
        /// Normal force per finger, N.
        #[arg(long)]
        normal: f64,
        /// Inflation pressure, kPa.
        #[arg(long)]
        pressure: f64,
    },
    /// Friction coefficient vs pressure at fixed normal force.
    Curve {
        /// Normal force per finger, N.
        #[arg(long)]
        normal: f64,
        /// Sweep start, kPa.
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        /// Sweep end, kPa.
        #[arg(long)]
        p_max: f64,
        /// Number of evenly spaced samples (>= 2).
        #[arg(long, default_value_t = 6)]
        steps: u32,
    },
    /// Feasibility verdict for holding a payload at one set-point.
    Grasp {
        /// Payload mass ("200g", "0.2kg", bare = kg); defaults to the config.
        #[arg(long)]
        mass: Option<String>,
        /// Normal force per finger, N.
        #[arg(long)]
        normal: f64,
        /// Inflation pressure, kPa.
        #[arg(long)]
        pressure: f64,
    },
    /// Smallest inflation pressure that makes the grasp feasible.
    MinPressure {
        /// Payload mass ("200g", "0.2kg", bare = kg); defaults to the config.
        #[arg(long)]
        mass: Option<String>,
        /// Normal force per finger, N.
        #[arg(long)]
        normal: f64,
    },
    /// Smallest per-finger normal force that makes the grasp feasible.
    MinForce {
        /// Payload mass ("200g", "0.2kg", bare = kg); defaults to the config.
        #[arg(long)]
        mass: Option<String>,
        /// Inflation pressure, kPa.
        #[arg(long)]
        pressure: f64,
    },
    /// Feasibility over a (force, pressure) grid.
    Sweep {
        /// Payload mass ("200g", "0.2kg", bare = kg); defaults to the config.
        #[arg(long)]
        mass: Option<String>,
        /// Comma-separated normal forces, N; defaults to the config sweep.
        #[arg(long, value_name = "LIST")]
        n_grid: Option<String>,
        /// Comma-separated pressures, kPa; defaults to the config sweep.
        #[arg(long, value_name = "LIST")]
        p_grid: Option<String>,
    },
    /// Monte Carlo grasp trials through the full pick-and-place protocol.
    Simulate {
        /// Payload mass ("200g", "0.2kg", bare = kg); defaults to the config.
        #[arg(long)]
        mass: Option<String>,
        /// Normal force set-point per finger, N.
        #[arg(long)]
        normal: f64,
        /// Inflation pressure set-point, kPa.
        #[arg(long)]
        pressure: f64,
        /// Number of independent trials.
        #[arg(long, default_value_t = 10)]
        trials: u32,
        /// Override the RNG seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Dump one transcript file per trial into DIR.
        #[arg(long, value_name = "DIR")]
        transcripts: Option<PathBuf>,
    },
    /// Aggregate trial records into per-cell success rates.
    Rates {
        /// Trial-record CSV (n_newton,p_pascal,outcome); "-" = stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Sliding friction coefficient from a force trace.
    AnalyzeTrace {
        /// Trace CSV (t,fy,fz); "-" = stdin.
        #[arg(long, default_value = "-")]
        input: String,
        /// Window start time, s (with --end; defaults to automatic).
        #[arg(long)]
        start: Option<f64>,
        /// Window end time, s (with --start; defaults to automatic).
        #[arg(long)]
        end: Option<f64>,
    },
    /// Roundness ratio of a deformed object from its extreme diameters.
    Roundness {
        /// Smallest diameter (same unit as --max).
        #[arg(long)]
        min: f64,
        /// Largest diameter (same unit as --min).
        #[arg(long)]
        max: f64,
    },
}

/// One table cell; knows how to print itself in both output formats.
enum Cell {
    F(f64),
    U(u64),
    S(String),
    B(bool),
    /// Marker for a question with no feasible answer.
    Sentinel,
    /// A value that does not exist at this row (e.g. cap radius of a flat
    /// membrane).
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => format!("{v}"),
            Cell::U(v) => format!("{v}"),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Sentinel => "infeasible".into(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::F(v) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .expect("table cells hold finite numbers"),
            Cell::U(v) => Value::from(*v),
            Cell::S(s) => Value::String(s.clone()),
            Cell::B(b) => Value::Bool(*b),
            Cell::Sentinel => Value::String("infeasible".into()),
            Cell::Null => Value::Null,
        }
    }
}

struct Table {
    headers: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.headers.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (h, c) in self.headers.iter().zip(row) {
                            obj.insert((*h).to_string(), c.json());
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut text = serde_json::to_string_pretty(&rows)
                    .expect("tables serialize without error");
                text.push('\n');
                text
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let mut exit = 0;
    let table = match &cli.cmd {
        Cmd::Bulge { pressure, mode } => {
            let cfg = require_config(&cli)?;
            let mode = match mode {
                ModeArg::Linear => BulgeMode::Linear,
                ModeArg::Exact => BulgeMode::Exact,
            };
            let b = resolve_bulge(pressure * PA_PER_KPA, &cfg.membrane, mode)?;
            Table {
                headers: &["p_pascal", "height_m", "cap_radius_m", "protrusion_m"],
                rows: vec![vec![
                    Cell::F(b.pressure),
                    Cell::F(b.height),
                    b.cap_radius.map_or(Cell::Null, Cell::F),
                    Cell::F(b.protrusion),
                ]],
            }
        }
        Cmd::Friction { normal, pressure } => {
            let cfg = require_config(&cli)?;
            let sol = resolve_contact(
                *normal,
                pressure * PA_PER_KPA,
                &cfg.membrane,
                cfg.grasp.bulges,
            )?;
            Table {
                headers: &[
                    "n_newton",
                    "p_pascal",
                    "regime",
                    "e_star_pa",
                    "indentation_m",
                    "membrane_n",
                    "rim_n",
                    "area_m2",
                    "friction_n",
                    "mu_eff",
                ],
                rows: vec![vec![
                    Cell::F(*normal),
                    Cell::F(pressure * PA_PER_KPA),
                    Cell::S(sol.regime.tag().into()),
                    Cell::F(sol.effective_modulus),
                    Cell::F(sol.indentation),
                    Cell::F(sol.membrane_load),
                    Cell::F(sol.rim_load),
                    Cell::F(sol.contact_area),
                    Cell::F(sol.friction_force),
                    Cell::F(sol.mu_eff),
                ]],
            }
        }
        Cmd::Curve {
            normal,
            p_min,
            p_max,
            steps,
        } => {
            let cfg = require_config(&cli)?;
            ensure!(*steps >= 2, "--steps must be at least 2, got {steps}");
            ensure!(
                p_min <= p_max,
                "--p-min ({p_min}) must not exceed --p-max ({p_max})"
            );
            let lo = p_min * PA_PER_KPA;
            let hi = p_max * PA_PER_KPA;
            let mut rows = Vec::with_capacity(*steps as usize);
            for i in 0..*steps {
                // Endpoints land exactly on the requested bounds.
                let p = if i == steps - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (steps - 1) as f64
                };
                let sol = resolve_contact(*normal, p, &cfg.membrane, cfg.grasp.bulges)?;
                rows.push(vec![
                    Cell::F(p),
                    Cell::S(sol.regime.tag().into()),
                    Cell::F(sol.mu_eff),
                    Cell::F(sol.friction_force),
                ]);
            }
            Table {
                headers: &["p_pascal", "regime", "mu_eff", "friction_n"],
                rows,
            }
        }
        Cmd::Grasp {
            mass,
            normal,
            pressure,
        } => {
            let cfg = require_config(&cli)?;
            let mass = resolve_mass(mass, cfg.grasp.mass)?;
            let q = cfg.grasp.problem(mass).query(*normal, pressure * PA_PER_KPA);
            let v = check_grasp(&q, &cfg.membrane)?;
            if cli.strict && !v.feasible {
                exit = 1;
            }
            Table {
                headers: SWEEP_HEADERS,
                rows: vec![verdict_row(*normal, pressure * PA_PER_KPA, &v)],
            }
        }
        Cmd::MinPressure { mass, normal } => {
            let cfg = require_config(&cli)?;
            let mass = resolve_mass(mass, cfg.grasp.mass)?;
            let prob = cfg.grasp.problem(mass);
            let answer = min_pressure(&prob, *normal, &cfg.membrane)?;
            if cli.strict && answer.is_none() {
                exit = 1;
            }
            Table {
                headers: &["n_newton", "min_p_pascal", "feasible"],
                rows: vec![vec![
                    Cell::F(*normal),
                    answer.map_or(Cell::Sentinel, Cell::F),
                    Cell::B(answer.is_some()),
                ]],
            }
        }
        Cmd::MinForce { mass, pressure } => {
            let cfg = require_config(&cli)?;
            let mass = resolve_mass(mass, cfg.grasp.mass)?;
            let prob = cfg.grasp.problem(mass);
            let p = pressure * PA_PER_KPA;
            let answer = min_normal_force(&prob, p, &cfg.membrane)?;
            if cli.strict && answer.is_none() {
                exit = 1;
            }
            Table {
                headers: &["p_pascal", "min_n_newton", "feasible"],
                rows: vec![vec![
                    Cell::F(p),
                    answer.map_or(Cell::Sentinel, Cell::F),
                    Cell::B(answer.is_some()),
                ]],
            }
        }
        Cmd::Sweep {
            mass,
            n_grid,
            p_grid,
        } => {
            let cfg = require_config(&cli)?;
            let sweep_mass = cfg.sweep.as_ref().and_then(|s| s.mass).or(cfg.grasp.mass);
            let mass = resolve_mass(mass, sweep_mass)?;
            let n_values = match n_grid {
                Some(list) => parse_grid(list, 1.0).context("--n-grid")?,
                None => cfg
                    .sweep
                    .as_ref()
                    .map(|s| s.n_grid.clone())
                    .ok_or_else(|| anyhow!("no force grid: pass --n-grid or add a [sweep] section"))?,
            };
            let p_values = match p_grid {
                Some(list) => parse_grid(list, PA_PER_KPA).context("--p-grid")?,
                None => cfg
                    .sweep
                    .as_ref()
                    .map(|s| s.p_grid.clone())
                    .ok_or_else(|| anyhow!("no pressure grid: pass --p-grid or add a [sweep] section"))?,
            };
            let prob = cfg.grasp.problem(mass);
            let cells = sweep_grid(&prob, &n_values, &p_values, &cfg.membrane)?;
            if cli.strict && !cells.iter().any(|c| c.verdict.feasible) {
                exit = 1;
            }
            Table {
                headers: SWEEP_HEADERS,
                rows: cells
                    .iter()
                    .map(|c| verdict_row(c.normal_force, c.pressure, &c.verdict))
                    .collect(),
            }
        }
        Cmd::Simulate {
            mass,
            normal,
            pressure,
            trials,
            seed,
            transcripts,
        } => {
            let mut cfg = require_config(&cli)?;
            if let Some(seed) = seed {
                cfg.plant.seed = *seed;
            }
            let mass = resolve_mass(mass, cfg.grasp.mass)?;
            let p = pressure * PA_PER_KPA;
            let q = cfg.grasp.problem(mass).query(*normal, p);
            let runs = monte_carlo_trials(&q, &cfg.membrane, &cfg.plant, *trials)?;
            if let Some(dir) = transcripts {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                for (k, t) in runs.iter().enumerate() {
                    let path = dir.join(format!("trial_{k:04}.txt"));
                    std::fs::write(&path, t.render())
                        .with_context(|| format!("writing {}", path.display()))?;
                }
            }
            let successes = runs
                .iter()
                .filter(|t| t.outcome == GraspOutcome::Success)
                .count();
            let rate = successes as f64 / runs.len() as f64;
            Table {
                headers: &["n_newton", "p_pascal", "trials", "success_rate"],
                rows: vec![vec![
                    Cell::F(*normal),
                    Cell::F(p),
                    Cell::U(*trials as u64),
                    Cell::F(rate),
                ]],
            }
        }
        Cmd::Rates { input } => {
            let text = read_input(input)?;
            let records = parse_records(&text)?;
            let cells = success_table(&records);
            Table {
                headers: &["n_newton", "p_pascal", "trials", "success_rate"],
                rows: cells
                    .iter()
                    .map(|c| {
                        vec![
                            Cell::F(c.normal_force),
                            Cell::F(c.pressure),
                            Cell::U(c.trials),
                            Cell::F(c.success_rate),
                        ]
                    })
                    .collect(),
            }
        }
        Cmd::AnalyzeTrace { input, start, end } => {
            let text = read_input(input)?;
            let trace = parse_trace(&text)?;
            let window = match (start, end) {
                (Some(s), Some(e)) => TraceWindow::Explicit { start: *s, end: *e },
                (None, None) => TraceWindow::Auto,
                _ => bail!("--start and --end must be given together"),
            };
            let mu = friction_from_trace(&trace, window)?;
            Table {
                headers: &["mu"],
                rows: vec![vec![Cell::F(mu)]],
            }
        }
        Cmd::Roundness { min, max } => {
            // The ratio is unit-free; divide the magnitudes as given rather
            // than converting units first, so exact decimal inputs stay
            // exact.
            let r = roundness_ratio(*min, *max)?;
            Table {
                headers: &["roundness"],
                rows: vec![vec![Cell::F(r)]],
            }
        }
    };

    let rendered = table.render(cli.format);
    if cli.output == "-" {
        std::io::stdout()
            .write_all(rendered.as_bytes())
            .context("writing to stdout")?;
    } else {
        std::fs::write(&cli.output, rendered)
            .with_context(|| format!("writing {}", cli.output))?;
    }
    Ok(exit)
}

const SWEEP_HEADERS: &[&str] = &[
    "n_newton",
    "p_pascal",
    "regime",
    "capacity_n",
    "demand_n",
    "margin_n",
    "feasible",
];

fn verdict_row(normal: f64, pressure: f64, v: &GraspVerdict) -> Vec<Cell> {
    vec![
        Cell::F(normal),
        Cell::F(pressure),
        Cell::S(v.regime.tag().into()),
        Cell::F(v.capacity),
        Cell::F(v.demand),
        Cell::F(v.margin),
        Cell::B(v.feasible),
    ]
}

fn require_config(cli: &Cli) -> anyhow::Result<LoadedConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| anyhow!("--config is required for this subcommand"))?;
    load_config(path).with_context(|| format!("loading {}", path.display()))
}

/// Mass with a unit suffix: `200g`, `0.2kg`, or a bare number in kilograms.
fn parse_mass(text: &str) -> anyhow::Result<f64> {
    let t = text.trim();
    let (digits, scale) = if let Some(d) = t.strip_suffix("kg") {
        (d, 1.0)
    } else if let Some(d) = t.strip_suffix('g') {
        (d, 1.0e-3)
    } else {
        (t, 1.0)
    };
    let v: f64 = digits
        .trim()
        .parse()
        .with_context(|| format!("invalid mass {text:?}"))?;
    ensure!(
        v.is_finite() && v >= 0.0,
        "mass must be non-negative, got {text:?}"
    );
    Ok(v * scale)
}

fn resolve_mass(flag: &Option<String>, fallback: Option<f64>) -> anyhow::Result<f64> {
    match flag {
        Some(text) => parse_mass(text),
        None => fallback
            .ok_or_else(|| anyhow!("payload mass required: pass --mass or set one in the config")),
    }
}

fn parse_grid(list: &str, scale: f64) -> anyhow::Result<Vec<f64>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map(|v| v * scale)
                .with_context(|| format!("invalid grid value {s:?}"))
        })
        .collect()
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

/// Parse a trial-record CSV: header `n_newton,p_pascal,outcome`, outcomes
/// `success` | `slip` | `failure`.
fn parse_records(text: &str) -> anyhow::Result<Vec<TrialRecord>> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim())
        .ok_or_else(|| anyhow!("empty record file"))?;
    ensure!(
        header == "n_newton,p_pascal,outcome",
        "expected header n_newton,p_pascal,outcome, got {header:?}"
    );
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        ensure!(
            fields.len() == 3,
            "line {}: expected 3 fields, got {}",
            idx + 1,
            fields.len()
        );
        let normal_force: f64 = fields[0]
            .trim()
            .parse()
            .with_context(|| format!("line {}: bad normal force", idx + 1))?;
        let pressure: f64 = fields[1]
            .trim()
            .parse()
            .with_context(|| format!("line {}: bad pressure", idx + 1))?;
        let outcome = GraspOutcome::from_tag(fields[2].trim())
            .ok_or_else(|| anyhow!("line {}: unknown outcome {:?}", idx + 1, fields[2].trim()))?;
        records.push(TrialRecord {
            normal_force,
            pressure,
            outcome,
        });
    }
    Ok(records)
}

/// Parse a force-trace CSV: header `t,fy,fz`.
fn parse_trace(text: &str) -> anyhow::Result<SlideTrace> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .map(|(_, l)| l.trim())
        .ok_or_else(|| anyhow!("empty trace file"))?;
    ensure!(
        header == "t,fy,fz",
        "expected header t,fy,fz, got {header:?}"
    );
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        ensure!(
            fields.len() == 3,
            "line {}: expected 3 fields, got {}",
            idx + 1,
            fields.len()
        );
        let parse = |i: usize, what: &str| -> anyhow::Result<f64> {
            fields[i]
                .trim()
                .parse()
                .with_context(|| format!("line {}: bad {what}", idx + 1))
        };
        samples.push(TraceSample {
            t: parse(0, "time")?,
            f_y: parse(1, "tangential force")?,
            f_z: parse(2, "normal force")?,
        });
    }
    Ok(SlideTrace::new(samples)?)
}
