use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rayon::prelude::*;

use rasternest::io::instance::{parse_instance, Instance, InstanceError};
use rasternest::io::pbm::nfp_to_pbm;
use rasternest::io::result::{ResultError, ResultFile};
use rasternest::io::svg::{render_svg, RenderError};
use rasternest::isp::{gcdh, ConfigError, PieceExceedsWidth, RunOutcome, SolverConfig};
use rasternest::nfp::build_nfp_from_scanlines;
use rasternest::omp::SearchRng;
use rasternest::oracle::run_oracle;
use rasternest::problem::{Problem, ProblemError};

#[derive(Parser)]
#[command(name = "rasternest", version, about = "Strip packing of rasterized shapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack an instance and write the best layout.
    Solve(SolveArgs),
    /// Dump the no-fit raster of two shapes as a PBM image.
    Nfp(NfpArgs),
    /// Compare the engine against brute force on random shapes.
    Oracle(OracleArgs),
    /// Draw a result file as SVG.
    Render(RenderArgs),
    /// Run every instance of a directory over several seeds; writes CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reduction {
    On,
    Off,
    Both,
}

#[derive(Args, Clone)]
struct SearchArgs {
    #[arg(long, default_value_t = 128)]
    width_px: i32,
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.02)]
    rdec: f64,
    #[arg(long, default_value_t = 0.005)]
    rinc: f64,
    #[arg(long, default_value_t = 200)]
    kmax: u32,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    runs: u32,
    /// Stop each run after this many CDH calls.
    #[arg(long)]
    max_cdh: Option<u64>,
    /// Run the seeds concurrently.
    #[arg(long)]
    parallel: bool,
}

impl SearchArgs {
    fn config(&self, corner_reduction: bool) -> Result<SolverConfig, ConfigError> {
        let config = SolverConfig {
            width_px: self.width_px,
            r_dec: self.rdec,
            r_inc: self.rinc,
            k_max: self.kmax,
            time_limit: self.time_limit,
            seed: self.seed,
            corner_reduction,
            max_cdh_calls: self.max_cdh,
        };
        config.validate()?;
        Ok(config)
    }

    fn seeds(&self) -> Vec<u64> {
        (0..self.runs.max(1) as u64)
            .map(|r| self.seed.wrapping_add(r))
            .collect()
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value = "on")]
    corner_reduction: OnOff,
    /// Result file; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct NfpArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 128)]
    width_px: i32,
    /// Fixed shape, as ID or ID:DEGREES.
    #[arg(long)]
    a: String,
    /// Moving shape, as ID or ID:DEGREES.
    #[arg(long)]
    b: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    /// Largest shape side in cells.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(i32).range(1..=32))]
    max_side: i32,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    result: PathBuf,
    #[arg(long)]
    svg: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files (*.json).
    #[arg(long)]
    dir: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value = "on")]
    corner_reduction: Reduction,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Result(#[from] ResultError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Width(#[from] PieceExceedsWidth),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("cannot write {0}: {1}")]
    Write(PathBuf, std::io::Error),
    #[error("{0} oracle mismatches")]
    Mismatch(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Instance(_) | CliError::Config(_) | CliError::Result(_) | CliError::Usage(_) => 2,
            CliError::Problem(_) | CliError::Width(_) => 3,
            CliError::Mismatch(_) => 1,
            CliError::Render(_) | CliError::Write(..) => 4,
        }
    }
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|e| CliError::Write(path.to_path_buf(), e))
}

fn solve_runs(
    problem: &Problem,
    config: &SolverConfig,
    search: &SearchArgs,
) -> Result<Vec<(u64, RunOutcome)>, CliError> {
    let run = |seed: u64| {
        let config = SolverConfig { seed, ..config.clone() };
        gcdh(problem, &config).map(|out| {
            log::info!(
                "seed {seed}: L = {} ({:.2}%), {} CDH calls",
                out.record.best_length,
                out.record.density,
                out.record.cdh_calls
            );
            (seed, out)
        })
    };
    let seeds = search.seeds();
    let runs: Result<Vec<_>, _> = if search.parallel {
        seeds.into_par_iter().map(run).collect()
    } else {
        seeds.into_iter().map(run).collect()
    };
    Ok(runs?)
}

fn solve(args: SolveArgs) -> Result<(), CliError> {
    let config = args.search.config(args.corner_reduction == OnOff::On)?;
    let instance = parse_instance(&args.instance)?;
    let problem = Problem::new(&instance, config.width_px)?;
    log::info!(
        "{}: {} pieces, {} shape classes, {} NFPs in {:.3} s",
        instance.name,
        problem.piece_count(),
        problem.classes().len(),
        problem.nfp_table().len(),
        problem.preprocessing_time().as_secs_f64()
    );
    let runs = solve_runs(&problem, &config, &args.search)?;
    let result = ResultFile::from_runs(&problem, &config, &runs);
    match &args.out {
        Some(path) => result.write(path)?,
        None => print!("{}", result.to_json()),
    }
    if let Some(path) = &args.svg {
        let svg = render_svg(&problem, &result.layout(&problem)?)?;
        write_file(path, svg.as_bytes())?;
    }
    eprintln!(
        "{}: L = {} px, density {:.2}%, {} CDH calls",
        result.instance, result.best_length, result.density, result.stats.cdh_calls
    );
    Ok(())
}

fn find_class(problem: &Problem, spec: &str) -> Result<usize, CliError> {
    let (id, degrees) = match spec.rsplit_once(':') {
        Some((id, d)) => {
            let d: i32 = d
                .parse()
                .map_err(|_| CliError::Usage(format!("bad orientation in '{spec}'")))?;
            (id, d.rem_euclid(360))
        }
        None => (spec, 0),
    };
    let piece = (0..problem.piece_count())
        .find(|&i| problem.shape_id(i) == id)
        .ok_or_else(|| CliError::Usage(format!("no shape '{id}'")))?;
    let o = problem
        .piece(piece)
        .variants
        .iter()
        .position(|&(d, _)| d == degrees)
        .ok_or_else(|| CliError::Usage(format!("shape '{id}' has no orientation {degrees}")))?;
    Ok(problem.class_of(piece, o))
}

fn nfp(args: NfpArgs) -> Result<(), CliError> {
    if args.width_px < 1 {
        return Err(ConfigError::Width(args.width_px).into());
    }
    let instance = parse_instance(&args.instance)?;
    let problem = Problem::new(&instance, args.width_px)?;
    let a = find_class(&problem, &args.a)?;
    let b = find_class(&problem, &args.b)?;
    let nfp = build_nfp_from_scanlines(&problem.class(a).scanline, &problem.class(b).scanline);
    write_file(&args.out, &nfp_to_pbm(&nfp))?;
    let bb = nfp.bbox();
    eprintln!(
        "bbox x {}..{} y {}..{}, {} strips, {} corners",
        bb.x_min,
        bb.x_max,
        bb.y_min,
        bb.y_max,
        nfp.strip_count(),
        nfp.corners().len()
    );
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let mut rng = SearchRng::seed_from_u64(args.seed);
    let report = run_oracle(&mut rng, args.pairs, args.max_side, args.inject_fault);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.passed() {
        eprintln!("oracle: all checks passed");
        Ok(())
    } else {
        Err(CliError::Mismatch(
            report.nfp_mismatches + report.depth_mismatches + report.layout_mismatches,
        ))
    }
}

fn render(args: RenderArgs) -> Result<(), CliError> {
    let instance = parse_instance(&args.instance)?;
    let result = ResultFile::read(&args.result)?;
    let problem = Problem::new(&instance, result.width_px)?;
    let layout = result.layout(&problem)?;
    let svg = render_svg(&problem, &layout)?;
    write_file(&args.svg, svg.as_bytes())
}

fn bench_instances(dir: &Path) -> Result<Vec<(String, Instance)>, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|source| InstanceError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let stem = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok((stem, parse_instance(&p)?))
        })
        .collect()
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let modes: &[bool] = match args.corner_reduction {
        Reduction::On => &[true],
        Reduction::Off => &[false],
        Reduction::Both => &[true, false],
    };
    let base = args.search.config(true)?;
    let mut csv = String::from(if modes.len() == 2 {
        "instance,seed,width_px,best_length_on,density_on,cdh_calls_on,best_length_off,density_off,cdh_calls_off,cdh_ratio\n"
    } else {
        "instance,seed,width_px,corner_reduction,best_length,density,cdh_calls,search_secs\n"
    });
    for (name, instance) in bench_instances(&args.dir)? {
        let problem = Problem::new(&instance, base.width_px)?;
        let per_mode = modes
            .iter()
            .map(|&cr| {
                solve_runs(
                    &problem,
                    &SolverConfig {
                        corner_reduction: cr,
                        ..base.clone()
                    },
                    &args.search,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let densities: Vec<f64> = per_mode[0].iter().map(|(_, r)| r.record.density).collect();
        eprintln!(
            "{name}: best {:.2}%, avg {:.2}% over {} runs",
            densities.iter().cloned().fold(0.0, f64::max),
            densities.iter().sum::<f64>() / densities.len() as f64,
            densities.len()
        );
        for (k, (seed, on)) in per_mode[0].iter().enumerate() {
            let r = &on.record;
            if let Some(off) = per_mode.get(1) {
                let o = &off[k].1.record;
                let ratio = r.cdh_calls as f64 / o.cdh_calls.max(1) as f64;
                csv += &format!(
                    "{name},{seed},{},{},{:.4},{},{},{:.4},{},{:.4}\n",
                    base.width_px, r.best_length, r.density, r.cdh_calls, o.best_length, o.density, o.cdh_calls, ratio
                );
            } else {
                csv += &format!(
                    "{name},{seed},{},{},{},{:.4},{},{:.3}\n",
                    base.width_px,
                    if modes[0] { "on" } else { "off" },
                    r.best_length,
                    r.density,
                    r.cdh_calls,
                    r.timing.search_secs
                );
            }
        }
    }
    match &args.out {
        Some(path) => write_file(path, csv.as_bytes()),
        None => std::io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Write("<stdout>".into(), e)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Nfp(a) => nfp(a),
        Command::Oracle(a) => oracle(a),
        Command::Render(a) => render(a),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
