//! Subcommands behind the `nmfa` binary.
//!
//! Parameter precedence for solver settings is: built-in defaults, then the
//! `--config` file, then explicit flags. Standard output carries only
//! deterministic results; progress and wall-clock figures go to standard
//! error unless `--timing` asks for them in the output files.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use nmfa::config::RunConfig;
use nmfa::generate::{self, GenSpec, ProblemClass};
use nmfa::gset::{self, ResultsMeta};
use nmfa::metrics::{self, GroundSource, GroundTruth, InstanceStats, Summary};
use nmfa::solver::{self, Annealer, GaussianNoise, NmfaParams};
use nmfa::{IsingProblem, Schedule};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_RUNTIME: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse { .. } => EXIT_PARSE,
            CliError::Io { .. } | CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "nmfa", version, about = "Noisy mean-field annealing experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated instance in G-set format.
    Generate(GenerateArgs),
    /// Run a batch of annealing runs on an instance file.
    Solve(SolveArgs),
    /// Success probability and time to solution across generated instances.
    Bench(BenchArgs),
    /// Exact ground state by exhaustive enumeration (at most 26 spins).
    Exact(ExactArgs),
    /// Tabulate the temperature schedule.
    ScheduleDump(ScheduleDumpArgs),
}

/// Solver settings shared by `solve`, `bench` and `schedule-dump`.
#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    /// Run-configuration file; explicit flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Iterations per run.
    #[arg(long)]
    pub tf: Option<usize>,
    /// Breakpoints as "f:T,f:T,...".
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for batch runs (0 = all cores). Never changes output.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

impl SolverArgs {
    /// Resolves parameters and the config file (if any).
    pub fn resolve(&self) -> Result<(NmfaParams, RunConfig), CliError> {
        let cfg = match &self.config {
            Some(path) => {
                let text = read_text(path)?;
                text.parse::<RunConfig>().map_err(|e| CliError::Parse {
                    path: path.clone(),
                    message: e.to_string(),
                })?
            }
            None => RunConfig::default(),
        };
        let mut params = NmfaParams::default();
        cfg.apply(&mut params);
        if let Some(v) = self.alpha {
            params.alpha = v;
        }
        if let Some(v) = self.sigma {
            params.sigma = v;
        }
        if let Some(v) = self.tf {
            params.iterations = v;
        }
        if let Some(v) = self.seed {
            params.seed = v;
        }
        if let Some(s) = &self.schedule {
            params.schedule = s.parse::<Schedule>().map_err(usage)?;
        }
        params.validate().map_err(usage)?;
        Ok((params, cfg))
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(runtime)
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// sk, dense, cubic or moebius.
    #[arg(long)]
    pub class: ProblemClass,
    #[arg(long)]
    pub n: usize,
    /// Edge probability for the dense class.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// G-set instance file.
    pub instance: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Number of runs; run k uses seed + k.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Per-run results CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Trajectory CSV of the first run.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Known optimal energy; reports the success probability against it.
    #[arg(long, allow_negative_numbers = true)]
    pub reference_energy: Option<f64>,
    /// Include measured wall-clock times in the CSV.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub class: ProblemClass,
    /// Comma-separated problem sizes.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub sizes: Vec<usize>,
    /// Instances per size.
    #[arg(long, default_value_t = 10)]
    pub instances: usize,
    /// Edge probability for the dense class.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Runs per instance.
    #[arg(long)]
    pub runs: Option<usize>,
    /// CSV with columns n,instance,energy giving reference energies for
    /// sizes beyond exact enumeration.
    #[arg(long)]
    pub reference_energy: Option<PathBuf>,
    /// Per-size summary CSV; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-instance CSV.
    #[arg(long)]
    pub per_instance_out: Option<PathBuf>,
    /// Measure wall-clock time and report time to solution in microseconds.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct ScheduleDumpArgs {
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => cmd_generate(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::Bench(a) => cmd_bench(&a),
        Command::Exact(a) => cmd_exact(&a),
        Command::ScheduleDump(a) => cmd_schedule_dump(&a),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, contents),
        None => {
            std::io::stdout().write_all(contents.as_bytes()).map_err(runtime)?;
            Ok(())
        }
    }
}

pub fn load_instance(path: &Path) -> Result<IsingProblem, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    gset::parse_bytes(&bytes).map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<(), CliError> {
    let spec = GenSpec { class: a.class, n: a.n, p: a.p, seed: a.seed };
    let problem = spec.generate().map_err(usage)?;
    let text = gset::write(&problem).map_err(runtime)?;
    let summary = format!(
        "class={} n={} edges={} connected={}",
        a.class,
        problem.n(),
        problem.couplers().len(),
        generate::is_connected(&problem)
    );
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn cmd_solve(a: &SolveArgs) -> Result<(), CliError> {
    let (params, cfg) = a.solver.resolve()?;
    let runs = a.runs.or(cfg.n_runs).unwrap_or(100);
    if runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let trajectory_path = match (&a.trajectory, cfg.trajectory, &a.out) {
        (Some(p), _, _) => Some(p.clone()),
        (None, Some(true), Some(out)) => Some(out.with_extension("trajectory.csv")),
        (None, Some(true), None) => {
            return Err(usage("trajectory = on needs --trajectory or --out"));
        }
        _ => None,
    };
    let problem = load_instance(&a.instance)?;
    eprintln!("solving {} (n={}, {} runs, t_f={})", a.instance.display(), problem.n(), runs, params.iterations);

    let batch = a
        .solver
        .pool()?
        .install(|| solver::batch_timed(&problem, &params, runs))
        .map_err(usage)?;

    let instance_id = a
        .instance
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if let Some(out) = &a.out {
        let meta = ResultsMeta {
            instance_id: &instance_id,
            run_times: a.timing.then_some(batch.run_times.as_slice()),
        };
        write_file(out, &gset::write_results_csv(&problem, &batch.results, &meta))?;
    }
    if let Some(path) = &trajectory_path {
        let first = Annealer::new(&problem)
            .run(&params, GaussianNoise::new(params.seed), true)
            .map_err(usage)?;
        write_file(path, &trajectory_csv(&first, &params))?;
    }

    let energies: Vec<f64> = batch.results.iter().map(|r| r.final_energy.0).collect();
    let mean = energies.iter().sum::<f64>() / energies.len() as f64;
    let best = energies.iter().copied().fold(f64::INFINITY, f64::min);
    println!("instance={instance_id} n={} runs={runs}", problem.n());
    println!("energy mean={mean} best={best}");
    if !problem.has_fields() {
        let cuts: Vec<f64> = batch
            .results
            .iter()
            .map(|r| problem.cut_value(&r.final_config).expect("no fields"))
            .collect();
        let mean_cut = cuts.iter().sum::<f64>() / cuts.len() as f64;
        let best_cut = cuts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("cut mean={mean_cut} best={best_cut}");
    }
    if let Some(reference) = a.reference_energy {
        let p = metrics::success_probability(&batch.results, &GroundTruth::best_known(reference)).map_err(runtime)?;
        println!("p_success={p}");
    }
    eprintln!(
        "wall-clock per run: {:.3} us (batch {:.3} s)",
        batch.time_per_run().as_secs_f64() * 1e6,
        batch.elapsed.as_secs_f64()
    );
    Ok(())
}

fn trajectory_csv(result: &solver::RunResult, params: &NmfaParams) -> String {
    let traj = result.trajectory.as_ref().expect("recorded");
    let n = result.final_config.len();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string(), "temperature".to_string(), "energy".to_string()];
    header.extend((0..n).map(|i| format!("s{i}")));
    w.write_record(&header).unwrap();
    for (k, snap) in traj.iter().enumerate() {
        let t = k + 1;
        let mut row = vec![
            t.to_string(),
            params.schedule.temperature(t, params.iterations).unwrap().to_string(),
            snap.energy.to_string(),
        ];
        row.extend(snap.spins.iter().map(|v| v.to_string()));
        w.write_record(&row).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seeds for instance `k` of size `n`: one for the generator, one for the
/// solver batch.
pub fn bench_seeds(seed: u64, n: usize, k: usize) -> (u64, u64) {
    let base = splitmix(splitmix(seed ^ splitmix(n as u64)) ^ k as u64);
    (base, splitmix(base))
}

fn read_references(path: &Path) -> Result<HashMap<(usize, usize), f64>, CliError> {
    let text = read_text(path)?;
    let parse_err = |message: String| CliError::Parse { path: path.to_path_buf(), message };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut refs = HashMap::new();
    for (k, record) in reader.deserialize::<(usize, usize, f64)>().enumerate() {
        let (n, instance, energy) = record.map_err(|e| parse_err(format!("row {}: {e}", k + 1)))?;
        refs.insert((n, instance), energy);
    }
    Ok(refs)
}

pub const BENCH_HEADER: [&str; 15] = [
    "class",
    "n",
    "instances",
    "runs",
    "p_success_median",
    "p_success_q25",
    "p_success_q75",
    "tts_runs_median",
    "tts_runs_q25",
    "tts_runs_q75",
    "tts_us_median",
    "tts_us_q25",
    "tts_us_q75",
    "mean_energy",
    "best_energy",
];

pub const INSTANCE_HEADER: [&str; 11] = [
    "class",
    "n",
    "instance",
    "instance_seed",
    "ground_energy",
    "ground_source",
    "p_success",
    "tts_runs",
    "tts_us",
    "mean_energy",
    "best_energy",
];

fn summary_fields(s: &Summary, scale: f64) -> [String; 3] {
    [s.median * scale, s.q25 * scale, s.q75 * scale].map(|v| v.to_string())
}

pub fn cmd_bench(a: &BenchArgs) -> Result<(), CliError> {
    if a.sizes.is_empty() {
        return Err(usage("--sizes needs at least one size"));
    }
    if a.instances == 0 {
        return Err(usage("--instances must be at least 1"));
    }
    let (params, cfg) = a.solver.resolve()?;
    let runs = a.runs.or(cfg.n_runs).unwrap_or(1000);
    if runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let refs = match &a.reference_energy {
        Some(path) => read_references(path)?,
        None => HashMap::new(),
    };
    for &n in &a.sizes {
        GenSpec { class: a.class, n, p: a.p, seed: 0 }.generate().map_err(usage)?;
        if n > metrics::MAX_EXACT_SPINS {
            if let Some(k) = (0..a.instances).find(|&k| !refs.contains_key(&(n, k))) {
                return Err(usage(format!(
                    "size {n} exceeds exact enumeration ({} spins) and has no reference energy for instance {k}",
                    metrics::MAX_EXACT_SPINS
                )));
            }
        }
    }

    let base_seed = params.seed;
    let pool = a.solver.pool()?;
    let mut summary = csv::Writer::from_writer(Vec::new());
    summary.write_record(BENCH_HEADER).unwrap();
    let mut per_instance = csv::Writer::from_writer(Vec::new());
    per_instance.write_record(INSTANCE_HEADER).unwrap();

    for &n in &a.sizes {
        let mut stats = Vec::with_capacity(a.instances);
        for k in 0..a.instances {
            let (gen_seed, run_seed) = bench_seeds(base_seed, n, k);
            let problem = GenSpec { class: a.class, n, p: a.p, seed: gen_seed }
                .generate()
                .map_err(usage)?;
            let ground = match refs.get(&(n, k)) {
                Some(&e) => GroundTruth::best_known(e),
                None => pool.install(|| metrics::brute_force_ground(&problem)).map_err(runtime)?,
            };
            let batch = pool
                .install(|| solver::batch_timed(&problem, &params.with_seed(run_seed), runs))
                .map_err(usage)?;
            let tau = a.timing.then(|| batch.time_per_run().as_secs_f64());
            let s = InstanceStats::from_results(&batch.results, &ground, tau).map_err(runtime)?;
            eprintln!("{} n={n} instance={k} p_success={}", a.class, s.p_success);
            per_instance
                .write_record([
                    a.class.to_string(),
                    n.to_string(),
                    k.to_string(),
                    gen_seed.to_string(),
                    ground.energy.to_string(),
                    match ground.source {
                        GroundSource::Exact => "exact".to_string(),
                        GroundSource::BestKnown => "reference".to_string(),
                    },
                    s.p_success.to_string(),
                    s.tts_runs.to_string(),
                    s.tts_seconds.map(|t| (t * 1e6).to_string()).unwrap_or_default(),
                    s.mean_energy.to_string(),
                    s.best_energy.to_string(),
                ])
                .unwrap();
            stats.push(s);
        }
        let agg = metrics::aggregate(&stats).map_err(runtime)?;
        let mut row = vec![a.class.to_string(), n.to_string(), agg.instances.to_string(), runs.to_string()];
        row.extend(summary_fields(&agg.p_success, 1.0));
        row.extend(summary_fields(&agg.tts_runs, 1.0));
        match &agg.tts_seconds {
            Some(s) => row.extend(summary_fields(s, 1e6)),
            None => row.extend([String::new(), String::new(), String::new()]),
        }
        row.push(agg.mean_energy.to_string());
        row.push(agg.best_energy.to_string());
        summary.write_record(&row).unwrap();
    }

    let summary = String::from_utf8(summary.into_inner().unwrap()).unwrap();
    emit(a.out.as_deref(), &summary)?;
    if let Some(path) = &a.per_instance_out {
        write_file(path, &String::from_utf8(per_instance.into_inner().unwrap()).unwrap())?;
    }
    Ok(())
}

pub fn cmd_exact(a: &ExactArgs) -> Result<(), CliError> {
    let problem = load_instance(&a.instance)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.threads)
        .build()
        .map_err(runtime)?;
    let ground = pool.install(|| metrics::brute_force_ground(&problem)).map_err(runtime)?;
    println!("n={} edges={}", problem.n(), problem.couplers().len());
    println!("ground_energy={}", ground.energy);
    println!("degeneracy={}", ground.degeneracy);
    if !problem.has_fields() {
        println!("max_cut={}", (problem.total_weight() - ground.energy.0) / 2.0);
    }
    Ok(())
}

pub fn cmd_schedule_dump(a: &ScheduleDumpArgs) -> Result<(), CliError> {
    let (params, _) = a.solver.resolve()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "fraction", "temperature"]).unwrap();
    let t_f = params.iterations;
    for (k, temp) in params.schedule.temperatures(t_f).into_iter().enumerate() {
        let t = k + 1;
        let f = if t_f == 1 { 0.0 } else { k as f64 / (t_f - 1) as f64 };
        w.write_record([t.to_string(), f.to_string(), temp.to_string()]).unwrap();
    }
    emit(a.out.as_deref(), &String::from_utf8(w.into_inner().unwrap()).unwrap())
}
