use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lrcorr::bounds::BoundConstants;
use lrcorr::scenario::{arrival_times, run_scenario, write_outputs, RunMode, ScenarioConfig, DEFAULT_THRESHOLD};
use lrcorr::{Error, LatticeSpec};

const EXIT_VALIDATION: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_IO: u8 = 3;

/// Lieb-Robinson correlation bounds against exact XX-chain dynamics.
#[derive(Parser, Debug)]
#[command(name = "lrcorr", version)]
struct Cli {
    /// Output directory, overriding `outputs.directory`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bound grids (and the closed form, if configured).
    Bound { config: PathBuf },
    /// Exact correlation grids.
    Simulate { config: PathBuf },
    /// Bound and exact grids plus a dominance report; exits 2 on violations.
    Verify { config: PathBuf },
    /// Table of ‖F‖, C and ‖Φ‖ against chain length.
    Constants { config: PathBuf },
    /// Threshold arrival times of the exact grid.
    Arrivals {
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { EXIT_IO } else { EXIT_VALIDATION })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "threads",
                reason: "must be positive".into(),
            });
        }
        // only fails if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out_dir = |cfg: &ScenarioConfig| cli.out.clone().unwrap_or_else(|| cfg.outputs.directory.clone());

    match &cli.command {
        Command::Bound { config } | Command::Simulate { config } | Command::Verify { config } => {
            let cfg = ScenarioConfig::load(config)?;
            let mode = match cli.command {
                Command::Bound { .. } => RunMode::Bound,
                Command::Simulate { .. } => RunMode::Simulate,
                _ => RunMode::Verify,
            };
            let out = run_scenario(&cfg, mode)?;
            let written = write_outputs(&cfg, &out, &out_dir(&cfg))?;
            for path in &written {
                println!("wrote {}", path.display());
            }
            if let Some(report) = &out.report {
                println!(
                    "{}: {} cells, {} violations, worst margin {:e}",
                    report.scenario, report.num_cells, report.num_violations, report.worst_margin
                );
                if !report.passed() {
                    return Ok(ExitCode::from(EXIT_VIOLATION));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Constants { config } => {
            let cfg = ScenarioConfig::load(config)?;
            print!("{}", constants_table(&cfg)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Arrivals { config, threshold } => {
            let cfg = ScenarioConfig::load(config)?;
            let out = run_scenario(&cfg, RunMode::Simulate)?;
            let exact = out.grid(lrcorr::scenario::run::EXACT_LABEL).expect("simulate yields an exact grid");
            let arrivals = arrival_times(exact, *threshold)?;
            let mut csv = String::from("delta,t_arrival\n");
            for (delta, t) in &arrivals {
                let t = t.map(|t| format!("{t:?}")).unwrap_or_default();
                let _ = writeln!(csv, "{delta},{t}");
            }
            print!("{csv}");
            write_file(&out_dir(&cfg), &format!("{}__arrivals.csv", cfg.name), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
    let io = |path: &Path, source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| io(&path, e))
}

/// Constants on a ladder of chain lengths up to the configured one.
fn constants_table(cfg: &ScenarioConfig) -> Result<String, Error> {
    let target = cfg.lattice.num_sites;
    let mut sizes: Vec<usize> = [2, 3, 5, 10, 20, 50, 100, 200, 400, 800]
        .into_iter()
        .filter(|&n| n < target)
        .collect();
    sizes.push(target);
    let decay = cfg.decay_function()?;
    let interaction = cfg.pair_interaction()?;
    let mut out = format!("{:>8} {:>22} {:>22} {:>22}\n", "N", "norm_F", "const_C", "norm_phi");
    for n in sizes {
        let bc = BoundConstants::compute(decay, LatticeSpec::new(n)?, &interaction)?;
        let _ = writeln!(out, "{n:>8} {:>22.15e} {:>22.15e} {:>22.15e}", bc.norm_f, bc.const_c, bc.norm_phi);
    }
    Ok(out)
}
