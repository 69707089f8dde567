use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tasep_lab::sim::{write_samples, Format, Model};
use tasep_lab::suites::{run_suite, ExperimentConfig, Suite};
use tasep_lab::Error;

#[derive(Parser)]
#[command(name = "tasep-lab", version, about = "Verification suites and samplers for colored TASEP, OSP and LPP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report PASS/FAIL per decision.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
    /// Write raw samples of a model.
    Sim {
        #[arg(value_enum)]
        model: ModelArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Main trial count, overriding the configuration.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Output file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    ShiftDe,
    ShiftSa,
    OspLpp,
    Geodesic,
    Sixvertex,
    Fg,
    Coupling,
    Asymptotics,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::ShiftDe => Suite::ShiftDe,
            SuiteArg::ShiftSa => Suite::ShiftSa,
            SuiteArg::OspLpp => Suite::OspLpp,
            SuiteArg::Geodesic => Suite::Geodesic,
            SuiteArg::Sixvertex => Suite::Sixvertex,
            SuiteArg::Fg => Suite::Fg,
            SuiteArg::Coupling => Suite::Coupling,
            SuiteArg::Asymptotics => Suite::Asymptotics,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Tasep,
    Osp,
    Lpp,
    Sixvertex,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Tasep => Model::Tasep,
            ModelArg::Osp => Model::Osp,
            ModelArg::Lpp => Model::Lpp,
            ModelArg::Sixvertex => Model::Sixvertex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.threads {
            if t == 0 {
                return Err(Error::Config("--threads must be positive".into()));
            }
            tasep_lab::par::set_threads(t);
        }
        Ok(cfg)
    }

    fn writer(&self) -> Result<Box<dyn Write>, Error> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout())),
        })
    }
}

/// Exit status 0 when every decision passes, 1 otherwise.
fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { suite, common } => {
            let suite = Suite::from(suite);
            let mut cfg = common.load()?;
            if let Some(t) = common.trials {
                cfg.set_trials(suite, t);
            }
            cfg.validate()?;
            let report = run_suite(suite, &cfg)?;
            let mut out = common.writer()?;
            match common.format {
                FormatArg::Json => {
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
                FormatArg::Csv => report.write_csv(&mut out)?,
            }
            out.flush()?;
            for line in report.lines() {
                eprintln!("{line}");
            }
            eprintln!("{}: {}", suite.name(), if report.pass { "PASS" } else { "FAIL" });
            Ok(report.pass)
        }
        Command::Sim { model, common } => {
            let mut cfg = common.load()?;
            if let Some(t) = common.trials {
                cfg.sim.trials = t;
            }
            let format = match common.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            };
            let mut out = common.writer()?;
            write_samples(model.into(), &cfg.sim, cfg.seed, format, &mut out)?;
            out.flush()?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
