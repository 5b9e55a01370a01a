use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use porofrac::io::Table;
use porofrac::oracle::verify_suite;
use porofrac::scenario::{load_scenario_file, preset, run_convergence_study, run_scenario, Scenario, ScenarioConfig, PRESETS};
use porofrac::{Error, Result};

#[derive(Parser)]
#[command(name = "porofrac", version, about = "Poroelastic fracture contact simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write VTK, CSV and report files.
    Run {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        overrides: Overrides,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a preset on several refinement levels and compare with the finest.
    Convergence {
        #[arg(long)]
        preset: String,
        /// Refinement levels; the last one is the reference.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3")]
        levels: Vec<usize>,
        #[command(flatten)]
        overrides: Overrides,
        /// Write the error table to `<out>/convergence.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle suite and print a pass/fail report.
    Verify {
        /// Random states per contact set in the Jacobian audit.
        #[arg(long, default_value_t = 20)]
        states: usize,
        /// Write `verify.txt` and `verify.csv` here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print mesh statistics of a scenario.
    MeshInfo {
        #[command(flatten)]
        source: Source,
    },
    /// Print the configuration document of a preset.
    Config {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Which {
    /// Built-in scenario.
    #[arg(long)]
    preset: Option<String>,
    /// Scenario configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    #[command(flatten)]
    which: Which,
    /// Preset refinement level.
    #[arg(long, default_value_t = 0, requires = "preset")]
    level: usize,
}

#[derive(Args)]
struct Overrides {
    /// Newton tolerance on the relative displacement update.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Time step, in s.
    #[arg(long)]
    dt: Option<f64>,
    /// Contact parameter, in Pa/m.
    #[arg(long)]
    c: Option<f64>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(t) = self.tolerance {
            cfg.solver.tolerance = t;
        }
        if let Some(dt) = self.dt {
            cfg.time.dt = dt;
        }
        if let Some(c) = self.c {
            cfg.solver.c = c;
        }
    }
}

fn load(source: &Source, overrides: Option<&Overrides>) -> Result<Scenario> {
    let (mut cfg, base) = match (&source.which.preset, &source.which.config) {
        (Some(name), _) => (preset(name, source.level)?, PathBuf::from(".")),
        (None, Some(path)) => {
            let s = load_scenario_file(path)?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (s.config, base)
        }
        (None, None) => return Err(Error::Validation("give --preset or --config".into())),
    };
    if let Some(o) = overrides {
        o.apply(&mut cfg);
    }
    Scenario::from_config(cfg, &base)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn create(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn print_table(t: &Table) {
    println!("{}", t.header.join("\t"));
    for r in &t.rows {
        println!("{}", r.join("\t"));
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { source, overrides, out } => {
            let scenario = load(&source, Some(&overrides))?;
            let report = run_scenario(&scenario, Some(&out))?;
            print!("{}", report.to_text());
            println!("results written to {}", out.display());
        }
        Command::Convergence {
            preset: name,
            levels,
            overrides,
            out,
        } => {
            if levels.len() < 2 {
                return Err(Error::Validation("need at least two levels".into()));
            }
            let scenarios = levels
                .iter()
                .map(|&l| {
                    let mut cfg = preset(&name, l)?;
                    overrides.apply(&mut cfg);
                    Scenario::from_config(cfg, Path::new("."))
                })
                .collect::<Result<Vec<_>>>()?;
            let study = run_convergence_study(&scenarios)?;
            let table = study.table();
            print_table(&table);
            for (key, order) in study.fitted_orders() {
                println!("fitted order {key}: {order:.3}");
            }
            if let Some(dir) = out {
                create(&dir)?;
                table.write(&dir.join("convergence.csv"))?;
            }
        }
        Command::Verify { states, out } => {
            let report = verify_suite(states)?;
            let text = report.to_text();
            print!("{text}");
            if let Some(dir) = out {
                create(&dir)?;
                write(&dir.join("verify.txt"), &text)?;
                report.table().write(&dir.join("verify.csv"))?;
            }
            return Ok(report.passed());
        }
        Command::MeshInfo { source } => {
            let scenario = load(&source, None)?;
            print!("{}", scenario.mesh.summary());
        }
        Command::Config { preset: name, level } => {
            if !PRESETS.contains(&name.as_str()) {
                return Err(Error::Validation(format!("unknown preset '{name}'")));
            }
            print!("{}", preset(&name, level)?.to_toml()?);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are validation errors; 2 is reserved for non-convergence.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
