//! Command-line front end. Exit codes: 0 ok, 1 run failure, 2 config or
//! usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::artifacts::{run_experiment, write_json};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::montecarlo::{montecarlo_positivity, MonteCarloOptions};
use crate::run::{check, RunOutcome};
use crate::scenarios::scenario;
use crate::sweep::{run_sweep, SweepSpec};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "TEAMDYN_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "teamdyn",
    version,
    about = "Simulate team task-assignment and appraisal dynamics"
)]
pub struct Cli {
    /// Override the config's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output root; runs go to <out>/<name>-seed<seed>.
    #[arg(long, global = true, env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// Suppress progress messages.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a config and write its artifacts.
    Simulate {
        config: PathBuf,
        /// Also write SVG heatmaps.
        #[arg(long)]
        svg: bool,
    },
    /// Estimate how often appraisals stay positive over random A(0).
    Montecarlo {
        config: PathBuf,
        /// Number of replicates.
        #[arg(long = "n", default_value_t = 1000)]
        runs: usize,
        /// Integration horizon of each replicate.
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
        /// Success threshold as a fraction of min A(0).
        #[arg(long, default_value_t = 1e-3)]
        probe: f64,
        /// Require N to meet the Chernoff bound for accuracy EPSILON at
        /// confidence 1 - XI.
        #[arg(long, num_args = 2, value_names = ["EPSILON", "XI"])]
        certified: Option<Vec<f64>>,
    },
    /// Run a built-in scenario.
    Scenario {
        name: String,
        #[arg(long)]
        svg: bool,
    },
    /// Validate a config and its declared hypotheses without running it.
    Check { config: PathBuf },
    /// Run a config once per value of one parameter.
    Sweep {
        config: PathBuf,
        /// path=v1,v2,... e.g. model.tau_app=1,2,4
        #[arg(long)]
        param: String,
    },
    /// List the built-in scenarios.
    Scenarios,
}

struct Ctx {
    quiet: bool,
    out: Option<PathBuf>,
    seed: Option<u64>,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn out_root(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    fn run_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        match (&self.out, &cfg.output_dir) {
            (None, Some(dir)) => dir.clone(),
            _ => self
                .out_root()
                .join(format!("{}-seed{}", cfg.display_name(), cfg.seed)),
        }
    }

    fn load(&self, path: &Path) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_path(path)?;
        if cfg.name.is_none() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }

    fn report(&self, out: &RunOutcome, dir: &Path) -> Result<()> {
        let s = &out.summary;
        self.note(format!(
            "{}: status {} at t = {}, H1 = {:.3e}{}",
            s.name,
            s.status,
            s.t_final,
            s.terminal_h1,
            s.consensus_spread
                .map(|v| format!(", spread = {v:.3e}"))
                .unwrap_or_default()
        ));
        self.note(format!("artifacts in {}", dir.display()));
        if s.bounds.any_violated() {
            self.note("warning: a monitored bound was violated; see summary.json");
        }
        out.require_success()
    }
}

fn execute(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        quiet: cli.quiet,
        out: cli.out,
        seed: cli.seed,
    };
    match cli.command {
        Command::Simulate { config, svg } => {
            let mut cfg = ctx.load(&config)?;
            cfg.artifacts.svg |= svg;
            let dir = ctx.run_dir(&cfg);
            let out = run_experiment(&cfg, &dir)?;
            ctx.report(&out, &dir)
        }
        Command::Scenario { name, svg } => {
            let mut cfg = scenario(&name, ctx.seed)?;
            cfg.artifacts.svg |= svg;
            let dir = ctx.out_root().join(format!("{}-seed{}", name, cfg.seed));
            let out = run_experiment(&cfg, &dir)?;
            ctx.report(&out, &dir)
        }
        Command::Check { config } => {
            let cfg = ctx.load(&config)?;
            let (_, report) = check(&cfg)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            ctx.note(format!(
                "{}: all hypotheses as declared",
                cfg.display_name()
            ));
            Ok(())
        }
        Command::Montecarlo {
            config,
            runs,
            horizon,
            probe,
            certified,
        } => {
            let cfg = ctx.load(&config)?;
            let mut opts = MonteCarloOptions {
                runs,
                horizon,
                a_min_probe: probe,
                ..Default::default()
            };
            if let Some(v) = certified {
                opts.epsilon = v[0];
                opts.xi = v[1];
                opts.certified = true;
            }
            ctx.note(format!(
                "running {runs} replicates of {}",
                cfg.display_name()
            ));
            let report = montecarlo_positivity(&cfg, &opts)?;
            let path = ctx
                .out_root()
                .join(format!(
                    "{}-montecarlo-seed{}",
                    cfg.display_name(),
                    cfg.seed
                ))
                .join("montecarlo.json");
            write_json(&path, &report)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            ctx.note(format!(
                "p_hat = {} ({} / {}); report in {}",
                report.p_hat.map_or("undefined".into(), |p| p.to_string()),
                report.successes,
                report.n_runs,
                path.display()
            ));
            Ok(())
        }
        Command::Sweep { config, param } => {
            let cfg = ctx.load(&config)?;
            let spec = SweepSpec::parse(&param)?;
            let root =
                ctx.out_root()
                    .join(format!("{}-sweep-seed{}", cfg.display_name(), cfg.seed));
            let results = run_sweep(&cfg, &spec, |k, c| {
                let dir = root.join(format!("{}={}", spec.key(), spec.labels[k]));
                run_experiment(c, &dir)
            })?;
            let mut failed = None;
            for (label, r) in spec.labels.iter().zip(results) {
                match r {
                    Ok(out) => {
                        let s = &out.summary;
                        println!(
                            "{}={label}\t{}\tH1={:.6e}",
                            spec.key(),
                            s.status,
                            s.terminal_h1
                        );
                        if let Err(e) = out.require_success() {
                            failed.get_or_insert(e);
                        }
                    }
                    Err(e) => {
                        println!("{}={label}\terror\t{e}", spec.key());
                        failed.get_or_insert(e);
                    }
                }
            }
            ctx.note(format!("artifacts in {}", root.display()));
            failed.map_or(Ok(()), Err)
        }
        Command::Scenarios => {
            for s in crate::scenarios::SCENARIOS {
                println!("{}", s.name);
            }
            Ok(())
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["teamdyn", "frobnicate"]), 2);
        assert_eq!(run(["teamdyn", "scenario", "fig2", "--bogus"]), 2);
        assert_eq!(run(["teamdyn", "--quiet", "scenario", "fig9"]), 2);
        assert_eq!(run(["teamdyn", "--help"]), 0);
    }
}
