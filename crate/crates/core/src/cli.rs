//! Command-line front end: `simulate` scores one gain vector, `tune` runs the
//! direct search from Ziegler-Nichols or random gains and writes the trace.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lti::{PidGains, SimConfig, StepResponse, TransferFunction};
use crate::objective::{closed_loop_response, score_response, ObjectiveValue, SettlingBand};
use crate::render::{self, FrameStyle, TraceFormat};
use crate::search::{optimize, SearchConfig, SearchTrace};
use crate::tuning::{ultimate_point, zn_pid_gains, RandomStartConfig, RandomStarts};

/// Bound on random draws when `--ensure-unstable` is set.
pub const MAX_RESAMPLE_ATTEMPTS: usize = 1000;
pub const DEFAULT_PLANT: &str = "benchmark3";
pub const DEFAULT_OUT_DIR: &str = "pidtune-out";

/// Named plants accepted by `--plant`.
pub fn preset(name: &str) -> Option<TransferFunction> {
    match name {
        "benchmark3" => TransferFunction::new(vec![1.0], vec![1.0, 3.0, 3.0, 1.0]).ok(),
        _ => None,
    }
}

/// Resolves a preset name or the `num: .. / den: ..` text form.
pub fn parse_plant(text: &str) -> Result<TransferFunction> {
    match preset(text.trim()) {
        Some(tf) => Ok(tf),
        None => text.parse(),
    }
}

/// Six significant digits for console output.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        format!("{v:.prec$}", prec = (5 - exp) as usize)
    } else {
        format!("{v:.5e}")
    }
}

#[derive(Debug, Parser)]
#[command(name = "pidtune", version, about = "PID tuning by direct search on closed-loop step responses")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate and score one set of gains
    Simulate(SimulateArgs),
    /// Optimize the gains from a Ziegler-Nichols or random start
    Tune(TuneArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Preset name or "num: c_n .. c_0 / den: d_m .. d_0"
    #[arg(long, default_value = DEFAULT_PLANT)]
    pub plant: String,
    /// Integration step [s]
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Simulation horizon [s]
    #[arg(long, default_value_t = 100.0)]
    pub tmax: f64,
}

impl SimArgs {
    fn sim_config(&self) -> Result<SimConfig> {
        SimConfig::new(self.tmax, self.dt, SimConfig::default().blow_up_limit)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub kp: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub ki: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub kd: f64,
    /// Write the sampled response as t,z CSV
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartKind {
    Zn,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, value_enum, default_value = "zn")]
    pub start: StartKind,
    /// Seed for --start random; drawn from the OS when omitted and echoed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Redraw random starts until the initial response diverges
    #[arg(long)]
    pub ensure_unstable: bool,
    #[arg(long, default_value = DEFAULT_OUT_DIR)]
    pub out: PathBuf,
    /// Also render one SVG frame per evaluation under <out>/frames
    #[arg(long)]
    pub frames: bool,
    #[arg(long, default_value_t = SearchConfig::default().max_evals)]
    pub max_evals: usize,
    /// Initial (and largest) search step
    #[arg(long, default_value_t = SearchConfig::default().initial_step)]
    pub step: f64,
    #[arg(long, default_value_t = SearchConfig::default().min_step)]
    pub min_step: f64,
}

impl TuneArgs {
    fn search_config(&self) -> Result<SearchConfig> {
        let cfg = SearchConfig {
            initial_step: self.step,
            min_step: self.min_step,
            max_evals: self.max_evals,
            ..SearchConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args, out),
        Command::Tune(args) => cmd_tune(args, out).map(|_| ()),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::OutputUnwritable {
        path: path.to_path_buf(),
        source,
    }
}

fn console(out: &mut dyn Write, line: String) -> Result<()> {
    writeln!(out, "{line}").map_err(io_err(Path::new("<stdout>")))
}

fn describe(label: &str, gains: PidGains, value: &ObjectiveValue) -> String {
    format!(
        "{label}: kp={} ki={} kd={} f={} rise_time={} deviation={}",
        sig6(gains.kp),
        sig6(gains.ki),
        sig6(gains.kd),
        sig6(value.total),
        sig6(value.rise_time),
        sig6(value.deviation),
    )
}

fn samples_csv(resp: &StepResponse) -> String {
    let mut s = String::from("t,z\n");
    for (k, z) in resp.values.iter().enumerate() {
        s.push_str(&format!("{},{}\n", render::fmt_f64(resp.time(k)), render::fmt_f64(*z)));
    }
    s
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let plant = parse_plant(&args.sim.plant)?;
    let cfg = args.sim.sim_config()?;
    let band = SettlingBand::default();
    let gains = PidGains::new(args.kp, args.ki, args.kd)?;
    let resp = closed_loop_response(gains, &plant, &cfg)?;
    let v = score_response(&resp, &band);
    console(
        out,
        format!(
            "f={} rise_time={} deviation={} rose={}",
            sig6(v.total),
            sig6(v.rise_time),
            sig6(v.deviation),
            v.rose
        ),
    )?;
    if let Some(path) = &args.samples {
        fs::write(path, samples_csv(&resp)).map_err(io_err(path))?;
    }
    Ok(())
}

/// Initial gains plus a note describing how they were obtained.
fn starting_gains(
    args: &TuneArgs,
    plant: &TransferFunction,
    cfg: &SimConfig,
    out: &mut dyn Write,
) -> Result<PidGains> {
    match args.start {
        StartKind::Zn => {
            let up = ultimate_point(plant)?;
            console(out, format!("start: zn ku={} tu={}", sig6(up.ku), sig6(up.tu)))?;
            Ok(zn_pid_gains(up))
        }
        StartKind::Random => {
            let seed = args.seed.unwrap_or_else(rand::random);
            let mut draws = RandomStarts::new(RandomStartConfig::new(seed))?;
            if !args.ensure_unstable {
                console(out, format!("start: random seed={seed}"))?;
                return Ok(draws.next().expect("infinite stream"));
            }
            for attempt in 1..=MAX_RESAMPLE_ATTEMPTS {
                let g = draws.next().expect("infinite stream");
                if closed_loop_response(g, plant, cfg)?.diverged {
                    console(
                        out,
                        format!("start: random seed={seed} ensure_unstable=true draw={attempt}"),
                    )?;
                    return Ok(g);
                }
            }
            Err(Error::ResampleExhausted(MAX_RESAMPLE_ATTEMPTS))
        }
    }
}

/// Outcome of a tuning run, for callers that want more than the files.
#[derive(Debug, Clone)]
pub struct TuneOutcome {
    pub plant: TransferFunction,
    pub start: PidGains,
    pub trace: SearchTrace,
    pub initial_response: StepResponse,
    pub final_response: StepResponse,
    pub frames: Option<usize>,
}

pub fn cmd_tune(args: &TuneArgs, out: &mut dyn Write) -> Result<TuneOutcome> {
    let plant = parse_plant(&args.sim.plant)?;
    let cfg = args.sim.sim_config()?;
    let search = args.search_config()?;
    let band = SettlingBand::default();

    console(out, format!("plant: {plant}"))?;
    console(
        out,
        format!("sim: tmax={} dt={} blow_up_limit={}", cfg.t_max, cfg.dt, cfg.blow_up_limit),
    )?;
    console(
        out,
        format!(
            "band: upper={} lower={} rise_level={}",
            band.upper, band.lower, band.rise_level
        ),
    )?;
    console(
        out,
        format!(
            "search: step={} shrink={} expand={} min_step={} max_evals={}",
            search.initial_step, search.shrink, search.expand, search.min_step, search.max_evals
        ),
    )?;

    let start = starting_gains(args, &plant, &cfg, out)?;
    if plant.relative_degree() < 2 {
        return Err(Error::ImproperLoop {
            num_degree: plant.num_degree() + 2,
            den_degree: plant.den_degree() + 1,
        });
    }

    let score = |g: PidGains| {
        let resp = closed_loop_response(g, &plant, &cfg)
            .expect("ideal PID loop is proper on a plant of relative degree >= 2");
        score_response(&resp, &band)
    };
    let trace = optimize(start, score, &search)?;
    let first = &trace.records[0];
    console(out, describe("initial", first.gains, &first.objective))?;
    console(out, describe("final", trace.incumbent, &trace.incumbent_value))?;
    console(
        out,
        format!("evaluations: {} termination: {}", trace.len(), trace.termination.as_str()),
    )?;

    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    for (name, format) in [("trace.csv", TraceFormat::Csv), ("trace.json", TraceFormat::Json)] {
        let path = args.out.join(name);
        fs::write(&path, render::export_trace(&trace, format)).map_err(io_err(&path))?;
    }

    let response_of = |g: PidGains| {
        closed_loop_response(g, &plant, &cfg).expect("loop was already evaluated")
    };
    let frames = if args.frames {
        let responses: Vec<StepResponse> =
            trace.records.par_iter().map(|r| response_of(r.gains)).collect();
        let dir = args.out.join("frames");
        let n = render::render_animation(
            &trace,
            &responses,
            &band,
            &FrameStyle::default(),
            &dir,
            &plant.to_string(),
        )?;
        console(out, format!("frames: {n} written to {}", dir.display()))?;
        Some(n)
    } else {
        None
    };
    console(out, format!("trace written to {}", args.out.display()))?;

    Ok(TuneOutcome {
        initial_response: response_of(start),
        final_response: response_of(trace.incumbent),
        plant,
        start,
        trace,
        frames,
    })
}
