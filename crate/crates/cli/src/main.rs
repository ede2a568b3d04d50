//! `cantorsat`: build, extend, verify and explore towers of saturated graphs.
//!
//! Exit codes: 0 success, 1 invariant or verification failure, 2 malformed
//! input, 3 build exhaustion, 4 usage error, 5 constraint threads not
//! separated (or no level realizes the type yet).

mod payload;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use cantorsat::io::{
    export_dot, read_tower, read_tower_unchecked, write_tower, DecodeError, FormatError,
};
use cantorsat::stats::{decimal, sample_success_rates};
use cantorsat::{
    build_tower, extend_realizer_to, realize_type, realize_type_extending, verify_provenance,
    verify_realization, verify_tower, BuildError, BuildMode, Tower, TowerError,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use payload::TypePayload;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "cantorsat",
    version,
    about = "Towers of n-saturated finite graphs and their inverse limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tower from K_n up to the given depth.
    Build(BuildArgs),
    /// Add levels to an existing tower.
    Extend(ExtendArgs),
    /// Re-verify every invariant of a stored tower.
    Verify(VerifyArgs),
    /// Realize a type over limit threads and print the realizer prefix.
    Realize(RealizeArgs),
    /// Monte Carlo success rates against the analytic failure bounds (CSV).
    Stats(StatsArgs),
    /// Export one level as graph description text.
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Certified,
    Empirical,
}

impl From<Mode> for BuildMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Certified => BuildMode::Certified,
            Mode::Empirical => BuildMode::Empirical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "certified")]
    mode: Mode,
    /// Copies parameter for every level (required in empirical mode).
    #[arg(long)]
    m: Option<usize>,
    /// Output file (standard output if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Target depth (default: one more level).
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum, default_value = "certified")]
    mode: Mode,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Skip replaying the seeded construction of each level.
    #[arg(long)]
    no_replay: bool,
}

#[derive(Args)]
struct RealizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// JSON type payload.
    #[arg(long = "type")]
    type_path: PathBuf,
    /// Depth of the printed prefix; the tower is truncated or grown (certified) to match.
    #[arg(long)]
    depth: Option<usize>,
    /// Grow the tower while no level realizes the type.
    #[arg(long)]
    auto_extend: bool,
    /// Re-verify the realization level by level.
    #[arg(long)]
    check: bool,
    /// Write the (possibly grown) tower here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    n: usize,
    /// Base graph is K_k (default k = n).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m_from: usize,
    #[arg(long)]
    m_to: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    level: usize,
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors carrying an explicit exit code.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn fail(code: u8, msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Exit(code, msg.into()))
}

fn tower_error_code(e: &TowerError) -> u8 {
    match e {
        TowerError::Build(BuildError::AttemptsExhausted { .. }) => 3,
        TowerError::Build(BuildError::BaseNotWeaklySaturated { .. }) => 1,
        TowerError::Build(_) => 4,
        TowerError::InvalidN | TowerError::DepthOutOfRange { .. } => 4,
        TowerError::Malformed(_)
        | TowerError::Map(_)
        | TowerError::InvalidPrefix(_)
        | TowerError::TooManyConstraints { .. } => 2,
        TowerError::NotSeparated { .. } | TowerError::NoRealizingLevel => 5,
        TowerError::LiftFailed { .. } => 1,
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(Exit(code, _)) = cause.downcast_ref::<Exit>() {
            return *code;
        }
        if let Some(e) = cause.downcast_ref::<TowerError>() {
            return tower_error_code(e);
        }
        if let Some(e) = cause.downcast_ref::<DecodeError>() {
            return match e {
                DecodeError::Malformed(_) => 2,
                DecodeError::Invalid(_) => 1,
            };
        }
        if cause.downcast_ref::<FormatError>().is_some()
            || cause.downcast_ref::<serde_json::Error>().is_some()
        {
            return 2;
        }
    }
    1
}

/// The error chain, skipping causes already spelled out by their wrapper.
fn message(err: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if !msg.contains(&text) {
            if !msg.is_empty() {
                msg.push_str(": ");
            }
            msg.push_str(&text);
        }
    }
    msg
}

fn open_input(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &Path) -> Result<Tower> {
    Ok(read_tower(open_input(path)?)?)
}

fn save(tower: &Tower, path: Option<&Path>) -> Result<()> {
    write_tower(output(path)?, tower)?;
    Ok(())
}

fn summarize(t: &Tower) {
    let sizes: Vec<String> = t.levels().iter().map(|g| g.order().to_string()).collect();
    eprintln!(
        "n={} depth={} m={:?} vertices per level: {}",
        t.n(),
        t.depth(),
        t.per_level_m(),
        sizes.join(" ")
    );
}

fn grow(mut t: Tower, depth: usize, mode: BuildMode, m: Option<usize>) -> Result<Tower> {
    while t.depth() < depth {
        t = t.extend(mode, m)?;
    }
    Ok(t)
}

fn cmd_build(a: BuildArgs) -> Result<()> {
    let t = build_tower(a.n, a.depth, a.seed, a.mode.into(), a.m)?;
    summarize(&t);
    save(&t, a.out.as_deref())
}

fn cmd_extend(a: ExtendArgs) -> Result<()> {
    let t = load(&a.input)?;
    let target = a.depth.unwrap_or(t.depth() + 1);
    if target < t.depth() {
        return Err(fail(
            4,
            format!(
                "target depth {target} is below the tower depth {}",
                t.depth()
            ),
        ));
    }
    let t = grow(t, target, a.mode.into(), a.m)?;
    summarize(&t);
    save(&t, a.out.as_deref())
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let t = read_tower_unchecked(open_input(&a.input)?)?;
    verify_tower(&t).map_err(|v| fail(1, format!("violation: {v}")))?;
    if !a.no_replay {
        verify_provenance(&t).map_err(|v| fail(1, format!("violation: {v}")))?;
    }
    println!(
        "ok: n={} depth={} levels={:?}",
        t.n(),
        t.depth(),
        t.levels().iter().map(|g| g.order()).collect::<Vec<_>>()
    );
    Ok(())
}

fn cmd_realize(a: RealizeArgs) -> Result<()> {
    let mut text = String::new();
    open_input(&a.type_path)?.read_to_string(&mut text)?;
    let payload =
        TypePayload::parse(&text).map_err(|e| fail(2, format!("bad type payload: {e}")))?;

    let t = read_tower_unchecked(open_input(&a.input)?)?;
    let max = t.n() - 1;
    if payload.constraints.len() > max {
        return Err(TowerError::TooManyConstraints {
            given: payload.constraints.len(),
            max,
        }
        .into());
    }
    verify_tower(&t).map_err(|v| fail(1, format!("violation: {v}")))?;

    let t = match a.depth {
        Some(d) if d < t.depth() => t.truncated(d)?,
        Some(d) => grow(t, d, BuildMode::Certified, None)?,
        None => t,
    };
    let constraints = payload.resolve(&t)?;
    let (t, h) = if a.auto_extend {
        realize_type_extending(&t, &constraints)?
    } else {
        let h = realize_type(&t, &constraints)?;
        (t, h)
    };
    // auto-extension may have grown the tower past the requested depth
    let h = extend_realizer_to(&t, &h, t.depth())?;

    let mut out = io::stdout().lock();
    serde_json::to_writer(
        &mut out,
        &RealizeOutput {
            separation_level: h.separation_level,
            entries: h.prefix.entries(),
        },
    )?;
    writeln!(out)?;
    if a.check {
        verify_realization(&t, &h)
            .map_err(|e| fail(1, format!("realization check failed: {e}")))?;
        eprintln!("check: ok ({} levels)", h.depth() + 1);
    }
    if let Some(p) = a.out.as_deref() {
        save(&t, Some(p))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct RealizeOutput<'a> {
    separation_level: usize,
    entries: &'a [usize],
}

fn cmd_stats(a: StatsArgs) -> Result<()> {
    let k = a.k.unwrap_or(a.n);
    if a.n == 0 || k == 0 || a.trials == 0 || a.m_from > a.m_to {
        return Err(fail(
            4,
            "need n >= 1, k >= 1, trials >= 1 and m-from <= m-to",
        ));
    }
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record([
        "n",
        "k",
        "m",
        "trials",
        "saturated",
        "joint",
        "saturated_rate",
        "joint_rate",
        "bound_a",
        "bound_a_decimal",
        "bound_b",
        "bound_b_decimal",
        "combined_bound",
        "combined_bound_decimal",
    ])?;
    for m in a.m_from..=a.m_to {
        let r = sample_success_rates(a.n, k, m, a.trials, a.seed);
        let combined = r.combined_bound();
        w.write_record([
            a.n.to_string(),
            k.to_string(),
            m.to_string(),
            r.trials.to_string(),
            r.saturated.to_string(),
            r.joint.to_string(),
            format!("{:.6}", r.saturated_rate()),
            format!("{:.6}", r.joint_rate()),
            r.bound_a.to_string(),
            decimal(&r.bound_a),
            r.bound_b.to_string(),
            decimal(&r.bound_b),
            combined.to_string(),
            decimal(&combined),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_export(a: ExportArgs) -> Result<()> {
    let t = load(&a.input)?;
    let text = match a.format {
        Format::Dot => export_dot(&t, a.level)?,
    };
    let mut out = output(a.out.as_deref())?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Extend(a) => cmd_extend(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Realize(a) => cmd_realize(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", message(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
