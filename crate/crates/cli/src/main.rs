//! `dsm`: run direct sampling imaging experiments from the command line.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 numerical
//! failure, 4 file or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsm_core::config::{self, ExperimentConfig, ForwardConfig, DEFAULT_MOM_PIXELS_PER_WAVELENGTH};
use dsm_core::imaging::IndicatorKind;
use dsm_core::runner;
use dsm_core::Error;

#[derive(Parser)]
#[command(name = "dsm", version, about = "Direct sampling imaging from far-field data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate, image and evaluate; writes every artifact and a manifest.
    Run(Common),
    /// Write the multi-static and mono-static far-field CSV files.
    Simulate(Common),
    /// Compute indicator maps from far-field files written by `simulate`.
    Image {
        #[command(flatten)]
        common: Common,
        /// Directory holding the far-field CSV files.
        #[arg(long)]
        data: PathBuf,
    },
    /// Score a map CSV against the true support of the configured scene.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Map CSV written by `image` or `run`.
        #[arg(long)]
        map: PathBuf,
        /// Comma-separated thresholds, strictly ascending in [0, 1].
        #[arg(long, value_delimiter = ',')]
        kappas: Option<Vec<f64>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    Asymptotic,
    Mom,
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in experiment: example1, example2 or example3.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (default: the config's output_dir, else out/<name>).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Indicator to compute; repeat for several. Replaces the configured list.
    #[arg(long = "indicator", value_parser = parse_indicator)]
    indicators: Vec<IndicatorKind>,
    /// Forward engine.
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    /// Signal-to-noise ratio in dB, or `off`.
    #[arg(long, value_parser = parse_snr)]
    snr_db: Option<Snr>,
}

#[derive(Clone, Copy)]
struct Snr(Option<f64>);

fn parse_snr(s: &str) -> Result<Snr, String> {
    if s.eq_ignore_ascii_case("off") {
        return Ok(Snr(None));
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("expected a number or `off`, got `{s}`"))?;
    if v.is_nan() {
        return Err("SNR must not be NaN".into());
    }
    Ok(Snr(if v == f64::INFINITY { None } else { Some(v) }))
}

fn parse_indicator(s: &str) -> Result<IndicatorKind, String> {
    s.parse::<IndicatorKind>().map_err(|e| e.to_string())
}

impl Common {
    fn config(&self) -> dsm_core::Result<ExperimentConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(name)) => config::preset(name)?,
            (None, None) => return Err(Error::Config("pass --config <file> or --preset <name>".into())),
        };
        if let Some(seed) = self.seed {
            cfg.noise.seed = seed;
        }
        if !self.indicators.is_empty() {
            cfg.indicators = self.indicators.clone();
        }
        match self.engine {
            Some(Engine::Asymptotic) => cfg.forward = ForwardConfig::Asymptotic,
            Some(Engine::Mom) if !matches!(cfg.forward, ForwardConfig::Mom { .. }) => {
                cfg.forward = ForwardConfig::Mom {
                    pixels_per_wavelength: DEFAULT_MOM_PIXELS_PER_WAVELENGTH,
                }
            }
            _ => {}
        }
        if let Some(Snr(snr)) = self.snr_db {
            cfg.noise.snr_db = snr;
        }
        Ok(cfg)
    }

    fn out_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        self.out
            .clone()
            .or_else(|| cfg.output_dir.clone())
            .unwrap_or_else(|| Path::new("out").join(&cfg.name))
    }
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn execute(command: Command) -> dsm_core::Result<()> {
    match command {
        Command::Run(common) => {
            let cfg = common.config()?;
            let exp = cfg.validate()?;
            for w in exp.scene.admissibility_warnings() {
                eprintln!("warning: {w}");
            }
            let out = runner::run(&exp, &common.out_dir(&cfg))?;
            report(&out.files);
        }
        Command::Simulate(common) => {
            let cfg = common.config()?;
            let exp = cfg.validate()?;
            let data = runner::simulate(&exp)?;
            report(&runner::write_data(&common.out_dir(&cfg), &data)?);
        }
        Command::Image { common, data } => {
            let cfg = common.config()?;
            let exp = cfg.validate()?;
            let data = runner::read_data(&data)?;
            let dir = common.out_dir(&cfg);
            for &kind in &exp.config.indicators {
                let map = runner::image(&exp, kind, &data)?;
                report(&runner::write_map(&dir, &map)?);
            }
        }
        Command::Evaluate { common, map, kappas } => {
            let mut cfg = common.config()?;
            if let Some(k) = kappas {
                cfg.thresholds = k;
            }
            let kind = match cfg.indicators.as_slice() {
                [k] => *k,
                _ => {
                    return Err(Error::Config(
                        "evaluate scores one map; pass exactly one --indicator".into(),
                    ))
                }
            };
            let exp = cfg.validate()?;
            let m = runner::read_map(&map, &exp, kind)?;
            let eval = runner::evaluate(&exp, &m)?;
            report(&runner::write_evaluation(&common.out_dir(&cfg), kind, &eval)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
