use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aipi::canonical;
use aipi::config::RunConfig;
use aipi::error::Error;
use aipi::linkcheck::link_check;
use aipi::parse::parse_dataset;
use aipi::release::{
    build_release, compute_release, compute_rescore, diff_releases, load_c_ref, write_release,
};
use aipi::validate::{error_count, validate_dataset, Severity};

#[derive(Parser)]
#[command(
    name = "aipi",
    version,
    about = "Deterministic scoring engine for evidence-coded indicator datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Dataset directory (indicators.json, subjects.json, artifacts.json, codes.json)
    #[arg(long)]
    dataset: PathBuf,
    /// Output directory for machine-readable reports
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Canonical-JSON run configuration; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Release version (overrides config)
    #[arg(long)]
    version: Option<String>,
    /// Evidence cutoff date, ISO-8601 (overrides config)
    #[arg(long)]
    cutoff: Option<chrono::NaiveDate>,
    /// Double-coding sample fraction (overrides config)
    #[arg(long)]
    sample_fraction: Option<f64>,
    /// Sampling seed (overrides config)
    #[arg(long)]
    sampling_seed: Option<u64>,
    /// Bootstrap seed (overrides config)
    #[arg(long)]
    bootstrap_seed: Option<u64>,
    /// Bootstrap resample count (overrides config)
    #[arg(long)]
    n_resamples: Option<usize>,
    /// Coverage dependence bin count (overrides config)
    #[arg(long)]
    n_bins: Option<usize>,
}

impl CommonArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = &self.version {
            config.version = v.clone();
        }
        if let Some(c) = self.cutoff {
            config.cutoff_date = c;
        }
        if let Some(f) = self.sample_fraction {
            config.sample_fraction = f;
        }
        if let Some(s) = self.sampling_seed {
            config.sampling_seed = s;
        }
        if let Some(s) = self.bootstrap_seed {
            config.bootstrap_seed = s;
        }
        if let Some(n) = self.n_resamples {
            config.n_resamples = n;
        }
        if let Some(n) = self.n_bins {
            config.n_bins = n;
        }
        config.check()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a dataset; write violations.json
    Validate(CommonArgs),
    /// Score a dataset; write scores.json/csv and providers.json
    Score(CommonArgs),
    /// Inter-rater reliability report; write reliability.json
    Reliability(CommonArgs),
    /// Rank-stability analyses; write sensitivity.json and coverage_dependence.csv
    Sensitivity(CommonArgs),
    /// Estimator-guidance floor verdicts; write floor_verdicts.json
    Floors(CommonArgs),
    /// Full deterministic release build into --out
    Build(CommonArgs),
    /// Diff two release directories
    Diff {
        dir_a: PathBuf,
        dir_b: PathBuf,
        /// Write release_diff.json here instead of only summarizing
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score against a frozen c_ref table from a prior release
    Rescore {
        #[command(flatten)]
        common: CommonArgs,
        /// Path to the prior release's c_ref.json
        #[arg(long)]
        c_ref: PathBuf,
    },
    /// Check evidence link accessibility; write link_status.json
    Linkcheck {
        #[command(flatten)]
        common: CommonArgs,
        /// Actually perform network requests
        #[arg(long)]
        live: bool,
        /// Skip the network (the default); conflicts with --live
        #[arg(long, conflicts_with = "live")]
        offline: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    canonical::write_canonical(&dir.join(name), value)?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Validate(args) => {
            let config = args.config()?;
            let dataset = parse_dataset(&args.dataset)?;
            let violations = validate_dataset(&dataset, config.cutoff_date);
            write_json(&args.out, "violations.json", &violations)?;
            let n_errors = error_count(&violations);
            let n_warnings = violations
                .iter()
                .filter(|v| v.severity == Severity::Warning)
                .count();
            println!("{n_errors} errors, {n_warnings} warnings");
            Ok(if n_errors > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Score(args) => {
            let config = args.config()?;
            let output = compute_release(&args.dataset, &config)?;
            write_json(&args.out, "scores.json", &output.scored.subject_scores)?;
            write_json(&args.out, "providers.json", &output.scored.provider_scores)?;
            write_json(&args.out, "c_ref.json", &output.scored.c_ref)?;
            println!(
                "scored {} subjects, {} providers",
                output.scored.subject_scores.len(),
                output.scored.provider_scores.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Reliability(args) => {
            let config = args.config()?;
            let output = compute_release(&args.dataset, &config)?;
            let report = aipi::reliability::reliability_report(
                &parse_dataset(&args.dataset)?,
                &output.scored.c_ref,
                config.sample_fraction,
                config.sampling_seed,
            )?;
            write_json(&args.out, "reliability.json", &report)?;
            match report.alpha_overall {
                Some(a) => println!(
                    "alpha = {a:.3} over {} double-coded items (threshold {})",
                    report.n_items, config.reliability_threshold
                ),
                None => println!("alpha undefined (no pairable values)"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sensitivity(args) => {
            let config = args.config()?;
            let dataset = parse_dataset(&args.dataset)?;
            let output = compute_release(&args.dataset, &config)?;
            let report = aipi::sensitivity::sensitivity_report(
                &dataset,
                &output.scored,
                config.n_resamples,
                config.bootstrap_seed,
                config.n_bins,
            )?;
            write_json(&args.out, "sensitivity.json", &report)?;
            println!(
                "{} rank flips; jackknife tau min {}",
                report.rank_flips.len(),
                report
                    .tau_indicator_jackknife
                    .min
                    .map(|v| format!("{v:.3}"))
                    .unwrap_or_else(|| "undefined".to_string())
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Floors(args) => {
            let config = args.config()?;
            let output = compute_release(&args.dataset, &config)?;
            write_json(&args.out, "floor_verdicts.json", &output.floor_verdicts)?;
            let passed = output.floor_verdicts.iter().filter(|v| v.pass).count();
            println!("{passed}/{} subjects pass the floors", output.floor_verdicts.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Build(args) => {
            let config = args.config()?;
            let manifest = build_release(&args.dataset, &args.out, &config)?;
            println!(
                "release {} built at {} (dataset {})",
                manifest.version,
                args.out.display(),
                &manifest.dataset_hash[..12]
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Diff { dir_a, dir_b, out } => {
            let diff = diff_releases(&dir_a, &dir_b)?;
            if let Some(out) = out {
                write_json(&out, "release_diff.json", &diff)?;
            }
            if diff.is_empty() {
                println!("no changes");
            } else {
                println!(
                    "{} metadata change(s), {} indicator change(s), {} score delta(s)",
                    diff.metadata_changes.len(),
                    diff.indicator_changes.len(),
                    diff.score_deltas.len()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rescore { common, c_ref } => {
            let config = common.config()?;
            let frozen = load_c_ref(&c_ref)?;
            let output = compute_rescore(&common.dataset, &config, frozen)?;
            write_release(&output, &common.out)?;
            println!(
                "rescored {} subjects against frozen references",
                output.scored.subject_scores.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Linkcheck { common, live, offline: _ } => {
            let dataset = parse_dataset(&common.dataset)?;
            let statuses = link_check(&dataset, live);
            write_json(&common.out, "link_status.json", &statuses)?;
            let attempted = statuses
                .iter()
                .filter(|s| s.status != aipi::linkcheck::LinkState::NotAttempted)
                .count();
            println!("{attempted}/{} links checked", statuses.len());
            Ok(ExitCode::SUCCESS)
        }
    }
}
