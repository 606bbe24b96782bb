//! `ibnaming`: build meaning spaces and priors, trace IB frontiers, and
//! score naming systems against them.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use ibnaming::analysis;
use ibnaming::ingest::{self, Gamma, NeedSpec};
use ibnaming::io;
use ibnaming::solver::{self, AnnealDirection, DEFAULT_MASS_THRESHOLD};
use ibnaming::{Distribution, MeaningSpace, NamingSystem, SolverConfig};
use ndarray::Array1;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Parser, Debug)]
#[command(name = "ibnaming", version, about = "Information bottleneck efficiency analysis of naming systems")]
#[command(args_override_self = true)]
struct Cli {
    /// Flat `key = value` file; keys are long flag names of the subcommand.
    /// Flags on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Meaning representations from a similarity matrix or a feature table.
    MakeSpace(MakeSpaceArgs),
    /// Least-informative need distribution from naming counts.
    MakePrior(MakePriorArgs),
    /// Trace the IB frontier over a β grid.
    Frontier(FrontierArgs),
    /// Inefficiency and gNID of a naming system against a frontier.
    Eval(EvalArgs),
    /// Permutation baseline for a naming system.
    Baseline(BaselineArgs),
    /// gNID between two naming systems.
    Gnid(GnidArgs),
    /// Complexity of the mixture of two naming systems.
    Mixture(MixtureArgs),
    /// Category profiles of the most informative frontier point for each k.
    Hierarchy(HierarchyArgs),
}

#[derive(Args, Debug, Serialize)]
struct MakeSpaceArgs {
    /// Square, symmetric similarity CSV.
    #[arg(long, conflicts_with_all = ["features", "familiarity"], required_unless_present = "features")]
    similarity: Option<PathBuf>,
    /// Fixed softmax gain; by default 1 / SD of the similarity entries.
    #[arg(long, requires = "similarity")]
    gamma: Option<f64>,
    /// Leave the diagonal out of the SD used for γ.
    #[arg(long, requires = "similarity", conflicts_with = "gamma")]
    exclude_diagonal: bool,
    /// Feature probability CSV (class × feature).
    #[arg(long, requires = "familiarity")]
    features: Option<PathBuf>,
    /// Familiarity CSV (class_label, score).
    #[arg(long, requires = "features")]
    familiarity: Option<PathBuf>,
    /// Where to write the familiarity-derived need (feature input only).
    #[arg(long, requires = "features")]
    need_out: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct MakePriorArgs {
    /// Naming counts, one file per language.
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    counts: Vec<PathBuf>,
    /// Use only rows with this condition (e.g. the monolingual group).
    #[arg(long)]
    condition: Option<String>,
    /// Space whose meaning order the prior follows.
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long, default_value_t = 0.001)]
    epsilon: f64,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GridKind {
    Log,
    Linear,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Direction {
    HighToLow,
    LowToHigh,
}

#[derive(Args, Debug, Serialize)]
struct SpaceInput {
    /// Representation CSV from `make-space`.
    #[arg(long)]
    space: PathBuf,
    /// Need distribution CSV; uniform when omitted.
    #[arg(long)]
    prior: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct FrontierArgs {
    #[command(flatten)]
    input: SpaceInput,
    #[arg(long, default_value_t = 1024.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 1500)]
    num_betas: usize,
    #[arg(long, value_enum, default_value_t = GridKind::Log)]
    grid: GridKind,
    /// Smallest positive β of a log grid.
    #[arg(long, default_value_t = 0.1)]
    beta_min: f64,
    #[arg(long, value_enum, default_value_t = Direction::HighToLow)]
    direction: Direction,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 30_000)]
    max_iter: usize,
    /// Words with less marginal mass than this are pruned.
    #[arg(long, default_value_t = DEFAULT_MASS_THRESHOLD)]
    prune: f64,
    #[arg(long)]
    max_clusters: Option<usize>,
    /// Perturbed restarts per β; requires --seed.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct SystemInput {
    /// Naming counts or encoder matrix.
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    condition: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    #[command(flatten)]
    input: SpaceInput,
    #[arg(long)]
    frontier: PathBuf,
    #[command(flatten)]
    system: SystemInput,
    /// Tidy CSV of the frontier curve and the evaluated system.
    #[arg(long)]
    plot_csv: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct BaselineArgs {
    #[command(flatten)]
    input: SpaceInput,
    #[arg(long)]
    frontier: PathBuf,
    #[command(flatten)]
    system: SystemInput,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    /// Make sample 0 the unpermuted system.
    #[arg(long)]
    include_identity: bool,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct GnidArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    condition_a: Option<String>,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    condition_b: Option<String>,
    /// Need distribution CSV; uniform when omitted.
    #[arg(long)]
    prior: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct MixtureArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    condition_a: Option<String>,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    condition_b: Option<String>,
    /// Second pair to compare against.
    #[arg(long, requires = "ref_b")]
    ref_a: Option<PathBuf>,
    #[arg(long)]
    ref_condition_a: Option<String>,
    #[arg(long, requires = "ref_a")]
    ref_b: Option<PathBuf>,
    #[arg(long)]
    ref_condition_b: Option<String>,
    #[arg(long)]
    prior: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    weight: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct HierarchyArgs {
    #[command(flatten)]
    input: SpaceInput,
    #[arg(long)]
    frontier: PathBuf,
    #[arg(long, required = true, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    top_n: usize,
    #[arg(long, default_value_t = DEFAULT_MASS_THRESHOLD)]
    threshold: f64,
    /// Text rendering; printed to stdout when omitted.
    #[arg(long)]
    text: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Serialize)]
struct InputHash {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a Command,
    inputs: Vec<InputHash>,
    outputs: Vec<String>,
    load_notes: Vec<String>,
    tool_version: &'static str,
    started_unix_seconds: u64,
    duration_seconds: f64,
}

/// Bookkeeping for one run: hashed inputs, written outputs, load notes.
#[derive(Default)]
struct Run {
    inputs: Vec<InputHash>,
    outputs: Vec<PathBuf>,
    notes: Vec<String>,
}

impl Run {
    fn input(&mut self, path: &Path) -> anyhow::Result<()> {
        if path.is_dir() {
            return Ok(());
        }
        let bytes = fs::read(path).with_context(|| format!("{}: cannot read", path.display()))?;
        self.inputs.push(InputHash { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) });
        Ok(())
    }

    fn write(&mut self, path: &Path, contents: &str) -> anyhow::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("{}: cannot create directory", dir.display()))?;
        }
        fs::write(path, contents).with_context(|| format!("{}: cannot write", path.display()))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, path: &Path, value: &T) -> anyhow::Result<()> {
        self.write(path, &(serde_json::to_string_pretty(value)? + "\n"))
    }

    fn space(&mut self, input: &SpaceInput) -> anyhow::Result<MeaningSpace> {
        self.input(&input.space)?;
        let (repr, rescaled) = io::read_representations(&input.space)?;
        if rescaled > 0 {
            self.notes.push(format!("{}: renormalized {rescaled} rows", input.space.display()));
        }
        let need = match &input.prior {
            Some(p) => NeedSpec::Given(self.prior(p, repr.meaning_labels())?),
            None => NeedSpec::Uniform,
        };
        Ok(ingest::attach_need(repr, need)?)
    }

    fn prior(&mut self, path: &Path, order: &[String]) -> anyhow::Result<Distribution> {
        self.input(path)?;
        let (d, renormalized) = io::read_prior(path)?;
        if renormalized {
            self.notes.push(format!("{}: renormalized", path.display()));
        }
        align(&d, order).with_context(|| format!("{}: does not match the meanings", path.display()))
    }

    fn system(&mut self, path: &Path, condition: Option<&str>) -> anyhow::Result<NamingSystem> {
        self.input(path)?;
        Ok(io::read_naming_system(path, condition)?)
    }

    fn frontier(&mut self, path: &Path) -> anyhow::Result<ibnaming::Frontier> {
        self.input(path)?;
        self.input(&io::metadata_path(path))?;
        Ok(io::read_frontier(path)?)
    }
}

/// `d` with its entries put in the order of `labels`.
fn align(d: &Distribution, labels: &[String]) -> anyhow::Result<Distribution> {
    if d.labels() == labels {
        return Ok(d.clone());
    }
    if d.len() != labels.len() {
        bail!("{} entries for {} meanings", d.len(), labels.len());
    }
    let mass = labels
        .iter()
        .map(|l| match d.labels().iter().position(|x| x == l) {
            Some(i) => Ok(d.mass()[i]),
            None => bail!("no entry for meaning {l:?}"),
        })
        .collect::<anyhow::Result<Vec<f64>>>()?;
    Ok(Distribution::new(labels.to_vec(), Array1::from(mass))?)
}

fn need_for(run: &mut Run, prior: Option<&Path>, labels: &[String]) -> anyhow::Result<Distribution> {
    match prior {
        Some(p) => run.prior(p, labels),
        None => Ok(Distribution::uniform(labels.to_vec())),
    }
}

fn make_space(args: &MakeSpaceArgs, run: &mut Run) -> anyhow::Result<()> {
    if let Some(sim_path) = &args.similarity {
        run.input(sim_path)?;
        let sim = io::read_similarity(sim_path)?;
        let gamma = match args.gamma {
            Some(g) => Gamma::Explicit(g),
            None => Gamma::InverseSd { include_diagonal: !args.exclude_diagonal },
        };
        let repr = ingest::meaning_space_from_similarity(&sim, gamma)?;
        io::write_representations(&args.out, &repr)?;
        run.outputs.push(args.out.clone());
    } else {
        let (f, fam) = (args.features.as_ref().unwrap(), args.familiarity.as_ref().unwrap());
        run.input(f)?;
        run.input(fam)?;
        let space = ingest::meaning_space_from_features(&io::read_features(f, fam)?)?;
        io::write_representations(&args.out, space.representations())?;
        run.outputs.push(args.out.clone());
        if let Some(p) = &args.need_out {
            io::write_prior(p, space.need())?;
            run.outputs.push(p.clone());
        }
    }
    Ok(())
}

fn make_prior(args: &MakePriorArgs, run: &mut Run) -> anyhow::Result<()> {
    let mut systems = Vec::new();
    for p in &args.counts {
        systems.push(run.system(p, args.condition.as_deref())?);
    }
    let order = match &args.space {
        Some(s) => {
            run.input(s)?;
            io::read_representations(s)?.0.meaning_labels().to_vec()
        }
        None => systems[0].meaning_labels().to_vec(),
    };
    let systems = systems
        .iter()
        .zip(&args.counts)
        .map(|(s, p)| s.reorder_meanings(&order).with_context(|| format!("{}: meanings differ", p.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let prior = ingest::li_prior(&systems, args.epsilon)?;
    io::write_prior(&args.out, &prior)?;
    run.outputs.push(args.out.clone());
    Ok(())
}

fn frontier(args: &FrontierArgs, run: &mut Run) -> anyhow::Result<()> {
    let space = run.space(&args.input)?;
    let grid = match args.grid {
        GridKind::Log => solver::log_beta_grid(args.beta_max, args.num_betas, args.beta_min),
        GridKind::Linear => solver::linear_beta_grid(args.beta_max, args.num_betas),
    };
    let mut config = SolverConfig::new(grid);
    config.max_clusters = args.max_clusters;
    config.convergence_tol = args.tol;
    config.max_iterations = args.max_iter;
    config.mass_prune_threshold = args.prune;
    config.restarts = args.restarts;
    config.seed = args.seed.unwrap_or(0);
    config.anneal_direction = match args.direction {
        Direction::HighToLow => AnnealDirection::HighToLow,
        Direction::LowToHigh => AnnealDirection::LowToHigh,
    };
    let f = solver::anneal_frontier(&space, &config)?;
    let unconverged = f.points.iter().filter(|p| !p.converged).count();
    if unconverged > 0 {
        eprintln!("warning: {unconverged} of {} points hit the iteration limit", f.points.len());
    }
    run.outputs.extend(io::write_frontier(&args.out, &f, true)?);
    eprintln!("wrote {} points to {}", f.points.len(), args.out.display());
    Ok(())
}

#[derive(Serialize)]
struct PlotRow<'a> {
    series: &'a str,
    label: &'a str,
    beta: Option<f64>,
    complexity_bits: f64,
    accuracy_bits: f64,
}

fn eval(args: &EvalArgs, run: &mut Run) -> anyhow::Result<()> {
    let space = run.space(&args.input)?;
    let f = run.frontier(&args.frontier)?;
    let sys = run
        .system(&args.system.system, args.system.condition.as_deref())?
        .reorder_meanings(space.meaning_labels())?;
    let report = analysis::fit_beta(&sys, &space, &f)?;
    run.json(&args.out, &report)?;
    if let Some(plot) = &args.plot_csv {
        let label = args.system.condition.clone().unwrap_or_else(|| {
            args.system.system.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
        });
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &f.points {
            w.serialize(PlotRow {
                series: "frontier",
                label: "",
                beta: Some(p.beta),
                complexity_bits: p.complexity_bits,
                accuracy_bits: p.accuracy_bits,
            })?;
        }
        w.serialize(PlotRow {
            series: "system",
            label: &label,
            beta: Some(report.fitted_beta),
            complexity_bits: report.complexity_bits,
            accuracy_bits: report.accuracy_bits,
        })?;
        run.write(plot, &String::from_utf8(w.into_inner()?)?)?;
    }
    Ok(())
}

fn baseline(args: &BaselineArgs, run: &mut Run) -> anyhow::Result<()> {
    let space = run.space(&args.input)?;
    let f = run.frontier(&args.frontier)?;
    let sys = run
        .system(&args.system.system, args.system.condition.as_deref())?
        .reorder_meanings(space.meaning_labels())?;
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let reports = analysis::permutation_samples(&sys, &space, &f, args.samples, args.seed, args.include_identity)?;
    run.json(&args.out, &analysis::summarize(&reports, args.seed, args.include_identity))
}

#[derive(Serialize)]
struct GnidOutput {
    gnid: f64,
}

fn gnid(args: &GnidArgs, run: &mut Run) -> anyhow::Result<()> {
    let a = run.system(&args.a, args.condition_a.as_deref())?;
    let b = run.system(&args.b, args.condition_b.as_deref())?.reorder_meanings(a.meaning_labels())?;
    let need = need_for(run, args.prior.as_deref(), a.meaning_labels())?;
    let g = analysis::gnid(&a, &b, &need)?;
    println!("{g}");
    if let Some(out) = &args.out {
        run.json(out, &GnidOutput { gnid: g })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MixtureOutput {
    weight: f64,
    complexity_bits: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_complexity_bits: Option<f64>,
    /// 100 · (complexity − reference) / reference.
    #[serde(skip_serializing_if = "Option::is_none")]
    percent_change: Option<f64>,
}

fn mixture(args: &MixtureArgs, run: &mut Run) -> anyhow::Result<()> {
    let a = run.system(&args.a, args.condition_a.as_deref())?;
    let order = a.meaning_labels().to_vec();
    let b = run.system(&args.b, args.condition_b.as_deref())?.reorder_meanings(&order)?;
    let need = need_for(run, args.prior.as_deref(), &order)?;
    let c = analysis::mixture_complexity(&a, &b, &need, args.weight)?;
    let mut out = MixtureOutput { weight: args.weight, complexity_bits: c, reference_complexity_bits: None, percent_change: None };
    if let (Some(ra), Some(rb)) = (&args.ref_a, &args.ref_b) {
        let ra = run.system(ra, args.ref_condition_a.as_deref())?.reorder_meanings(&order)?;
        let rb = run.system(rb, args.ref_condition_b.as_deref())?.reorder_meanings(&order)?;
        let r = analysis::mixture_complexity(&ra, &rb, &need, args.weight)?;
        out.reference_complexity_bits = Some(r);
        out.percent_change = Some(100.0 * (c - r) / r);
    }
    let text = serde_json::to_string_pretty(&out)? + "\n";
    print!("{text}");
    if let Some(path) = &args.out {
        run.write(path, &text)?;
    }
    Ok(())
}

fn hierarchy(args: &HierarchyArgs, run: &mut Run) -> anyhow::Result<()> {
    let space = run.space(&args.input)?;
    let f = run.frontier(&args.frontier)?;
    let report = analysis::hierarchy_report(&f, &args.k, &space, args.top_n, args.threshold)?;
    run.json(&args.out, &report)?;
    let text = report.render_text();
    match &args.text {
        Some(p) => run.write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Primary output whose name the manifest takes.
fn primary_output(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::MakeSpace(a) => Some(&a.out),
        Command::MakePrior(a) => Some(&a.out),
        Command::Frontier(a) => Some(&a.out),
        Command::Eval(a) => Some(&a.out),
        Command::Baseline(a) => Some(&a.out),
        Command::Gnid(a) => a.out.as_deref(),
        Command::Mixture(a) => a.out.as_deref(),
        Command::Hierarchy(a) => Some(&a.out),
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn execute(cli: &Cli) -> anyhow::Result<()> {
    let started = SystemTime::now();
    let clock = Instant::now();
    let mut run = Run::default();
    if let Some(c) = &cli.config {
        run.input(c)?;
    }
    match &cli.command {
        Command::MakeSpace(a) => make_space(a, &mut run)?,
        Command::MakePrior(a) => make_prior(a, &mut run)?,
        Command::Frontier(a) => frontier(a, &mut run)?,
        Command::Eval(a) => eval(a, &mut run)?,
        Command::Baseline(a) => baseline(a, &mut run)?,
        Command::Gnid(a) => gnid(a, &mut run)?,
        Command::Mixture(a) => mixture(a, &mut run)?,
        Command::Hierarchy(a) => hierarchy(a, &mut run)?,
    }
    for note in &run.notes {
        eprintln!("note: {note}");
    }
    if let Some(out) = primary_output(&cli.command) {
        let manifest = Manifest {
            command: &cli.command,
            inputs: run.inputs,
            outputs: run.outputs.iter().map(|p| p.display().to_string()).collect(),
            load_notes: run.notes,
            tool_version: ibnaming::TOOL_VERSION,
            started_unix_seconds: started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            duration_seconds: clock.elapsed().as_secs_f64(),
        };
        let path = manifest_path(out);
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
            .with_context(|| format!("{}: cannot write", path.display()))?;
    }
    Ok(())
}

/// Splices `key = value` lines from a `--config` file in right after the
/// subcommand name, so later command-line flags override them.
fn expand_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or("--config requires a file")?);
            rest.push(a);
            rest.push(path.clone().unwrap());
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_owned());
            rest.push(a);
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let mut injected = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key = value", n + 1))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        match v {
            "true" => injected.push(format!("--{k}")),
            "false" => {}
            _ => {
                injected.push(format!("--{k}"));
                injected.push(v.to_owned());
            }
        }
    }
    // the subcommand is the first token that is not an option or the
    // value of --config
    let mut pos = 1;
    while pos < rest.len() && rest[pos].starts_with('-') {
        pos += if rest[pos] == "--config" { 2 } else { 1 };
    }
    if pos >= rest.len() {
        return Err("no subcommand given".into());
    }
    rest.splice(pos + 1..pos + 1, injected);
    Ok(rest)
}

fn main() -> ExitCode {
    let argv = match expand_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => Cli::command().error(clap::error::ErrorKind::Io, e).exit(),
    };
    let cli = Cli::parse_from(argv);
    if let Command::Frontier(a) = &cli.command {
        if a.restarts > 0 && a.seed.is_none() {
            Cli::command()
                .error(clap::error::ErrorKind::MissingRequiredArgument, "--restarts > 0 requires --seed")
                .exit();
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
