use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use attrition::pipeline::{self, ConfigOverrides, PipelineConfig};
use attrition::Result;

#[derive(Parser)]
#[command(name = "attrition", version, about = "Employee attrition classification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class-split distributions, histograms and correlations
    Eda(Flags),
    /// Preprocess and fit the final model
    Train(Flags),
    /// Full run: EDA summary, training, cross-validation and metrics
    Cv(Flags),
    /// Cross-validate every model on the same folds
    Compare(Flags),
}

#[derive(Args)]
struct Flags {
    /// TOML file of defaults; flags given here take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    /// Schema TOML; the bundled HR schema when omitted
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Treat undeclared categorical values as missing
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    lenient: Option<bool>,
    /// forest, tree, logreg or majority
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n_trees: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    /// sqrt, all, or a count
    #[arg(long)]
    max_features: Option<String>,
    #[arg(long)]
    bootstrap: Option<bool>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    /// loocv or kfold:K
    #[arg(long)]
    cv: Option<String>,
    #[arg(long)]
    loocv_cap: Option<usize>,
    /// Balance classes by redrawing minority rows (default true)
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    oversample: Option<bool>,
    /// Fraction of rows held out for a final score
    #[arg(long)]
    holdout: Option<f64>,
    #[arg(long)]
    bins: Option<usize>,
    /// alphabetical or schema_order
    #[arg(long)]
    encoding_policy: Option<String>,
    #[arg(long)]
    onehot_threshold: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Flags {
    fn resolve(self) -> Result<PipelineConfig> {
        let mut config = PipelineConfig::default();
        if let Some(path) = &self.config {
            config = config.apply(&ConfigOverrides::load(path)?)?;
        }
        let flags = ConfigOverrides {
            data: self.data,
            schema: self.schema,
            lenient: self.lenient,
            model: self.model,
            n_trees: self.n_trees,
            max_depth: self.max_depth,
            max_features: self.max_features,
            bootstrap: self.bootstrap,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            cv: self.cv,
            loocv_cap: self.loocv_cap,
            oversample: self.oversample,
            holdout: self.holdout,
            bins: self.bins,
            encoding_policy: self.encoding_policy,
            onehot_threshold: self.onehot_threshold,
            seed: self.seed,
            out: self.out,
        };
        let config = config.apply(&flags)?;
        config.validate()?;
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eda(f) => {
            let o = pipeline::run_eda(&f.resolve()?)?;
            println!("rows: {}", o.report.n_rows);
            for (col, n) in o.report.missing.iter().filter(|(_, &n)| n > 0) {
                println!("missing {col}: {n}");
            }
            for (col, r) in o.report.target_correlations() {
                match r {
                    Some(r) => println!("corr({col}, {}): {r:.4}", o.report.target),
                    None => println!("corr({col}, {}): undefined", o.report.target),
                }
            }
            println!("wrote {} files", o.written.len());
        }
        Command::Train(f) => {
            let o = pipeline::train(&f.resolve()?)?;
            print!("{}", o.metrics_text());
            println!("wrote {} files", o.written.len());
        }
        Command::Cv(f) => {
            let o = pipeline::run_pipeline(&f.resolve()?)?;
            print!("{}", o.metrics_text());
            if let Some(cv) = &o.cross_validation {
                println!("mean cv accuracy: {:.4}", cv.result.mean_accuracy);
            }
            println!("wrote {} files", o.written.len());
        }
        Command::Compare(f) => {
            let o = pipeline::compare(&f.resolve()?)?;
            print!("{}", o.table.to_csv_string());
            println!("wrote {} files", o.written.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
