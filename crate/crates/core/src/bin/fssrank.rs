use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fssrank::config::{period_from_parts, RunConfig, DEFAULT_MIN_STAFF};
use fssrank::stats::{dispersion, fisher_variance_test, ols, Covariance, OlsOptions};
use fssrank::{fixture, pipeline, report, CountingScheme, Error, Result, Theta};

#[derive(Parser)]
#[command(name = "fssrank", version, about = "FSS productivity scoring and university rank-shift analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a corpus over two observation periods.
    Score(ScoreArgs),
    /// Compare unit scores of two periods.
    Compare(CompareArgs),
    /// Recompute the published university-level tables and check them.
    Replicate {
        /// Also write the report and fixture-derived inputs here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Standalone statistics on CSV columns, printed as JSON.
    #[command(subcommand)]
    Stats(StatsCommand),
}

#[derive(Args)]
struct RunArgs {
    /// Key = value run configuration; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// YYYY-YYYY
    #[arg(long)]
    period_before: Option<String>,
    /// YYYY-YYYY
    #[arg(long)]
    period_after: Option<String>,
    /// ISO date of the citation census for the first period.
    #[arg(long)]
    census_before: Option<String>,
    #[arg(long)]
    census_after: Option<String>,
    #[arg(long)]
    theta: Option<Theta>,
    #[arg(long)]
    min_staff: Option<usize>,
    /// Worker threads for scoring; 0 picks automatically.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fail on dangling references instead of dropping them.
    #[arg(long)]
    strict: bool,
    /// Take missing field baselines from the corpus' baselines.csv.
    #[arg(long)]
    allow_external_baselines: bool,
    /// Counting-scheme override, `SDS=alphabetical|positional`; repeatable.
    #[arg(long = "scheme", value_name = "SDS=SCHEME")]
    schemes: Vec<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let base = self.config.as_deref().map(RunConfig::load).transpose()?;
        let period = |range: &Option<String>, census: &Option<String>, fallback: Option<fssrank::ObservationPeriod>, name: &str| {
            match (range, fallback) {
                (Some(r), _) => period_from_parts(r, census.as_deref()),
                (None, Some(p)) => match census {
                    Some(c) => period_from_parts(&p.label(), Some(c)),
                    None => Ok(p),
                },
                (None, None) => Err(Error::Config(format!("--{name} is required"))),
            }
        };
        let before = period(&self.period_before, &self.census_before, base.as_ref().map(|c| c.period_before), "period-before")?;
        let after = period(&self.period_after, &self.census_after, base.as_ref().map(|c| c.period_after), "period-after")?;
        let corpus = self
            .corpus
            .clone()
            .or_else(|| base.as_ref().map(|c| c.corpus.clone()))
            .ok_or_else(|| Error::Config("--corpus is required".into()))?;
        let mut config = RunConfig::new(corpus, before, after)?;
        if let Some(b) = &base {
            config.theta = b.theta;
            config.min_staff = b.min_staff;
            config.jobs = b.jobs;
            config.out = b.out.clone();
            config.strict = b.strict;
            config.allow_external_baselines = b.allow_external_baselines;
            config.scheme_overrides = b.scheme_overrides.clone();
        }
        if let Some(t) = self.theta {
            config.theta = t;
        }
        if let Some(m) = self.min_staff {
            config.min_staff = m;
        }
        if let Some(j) = self.jobs {
            config.jobs = j;
        }
        if let Some(o) = &self.out {
            config.out = o.clone();
        }
        config.strict |= self.strict;
        config.allow_external_baselines |= self.allow_external_baselines;
        for s in &self.schemes {
            let (sds, scheme) = s
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--scheme expects SDS=SCHEME, got {s:?}")))?;
            config.scheme_overrides.insert(sds.trim().to_string(), scheme.parse::<CountingScheme>()?);
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// unit_scores.csv of the first period; defaults to <out>/<period-before>/unit_scores.csv.
    #[arg(long)]
    before: Option<PathBuf>,
    #[arg(long)]
    after: Option<PathBuf>,
    /// universities.csv giving macro regions; defaults to the second period's corpus.
    #[arg(long)]
    universities: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum StatsCommand {
    /// Dispersion summary of one column.
    Describe {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        column: String,
    },
    /// Variance-ratio test between two columns.
    Fisher {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Least squares with an intercept.
    Ols {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        y: String,
        #[arg(long, required = true)]
        x: Vec<String>,
        /// Heteroskedasticity-robust (HC1) standard errors.
        #[arg(long)]
        robust: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// CSV file holding the columns.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Use the embedded university table: fss_before, fss_after, delta_fss, south.
    #[arg(long)]
    fixture: bool,
}

impl Source {
    fn column(&self, name: &str) -> Result<Vec<f64>> {
        if let Some(path) = &self.input {
            return pipeline::read_column(path, name);
        }
        let rows = fixture::UNIVERSITIES.iter();
        Ok(match name {
            "fss_before" => rows.map(|r| r.fss_before).collect(),
            "fss_after" => rows.map(|r| r.fss_after).collect(),
            "delta_fss" => rows.map(|r| r.delta_fss).collect(),
            "south" => rows
                .map(|r| f64::from(u8::from(r.region == fssrank::MacroRegion::South)))
                .collect(),
            other => return Err(Error::InvalidArgument(format!("fixture has no column {other:?}"))),
        })
    }
}

enum Outcome {
    Ok,
    ToleranceFailure,
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn unit_scores_path(explicit: &Option<PathBuf>, config: &RunConfig, period: &fssrank::ObservationPeriod) -> PathBuf {
    explicit
        .clone()
        .unwrap_or_else(|| config.out.join(period.label()).join("unit_scores.csv"))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Score(args) => {
            let config = args.run.resolve()?;
            let run = pipeline::run_score(&config)?;
            for p in &run.periods {
                println!(
                    "{}: {} professors scored, {} units, unproductive share {}",
                    p.period,
                    p.professors.len(),
                    p.units.len(),
                    report::pct(p.unproductive_share)
                );
            }
            println!("outputs in {}", config.out.display());
        }
        Command::Compare(args) => {
            let config = if args.before.is_some() && args.after.is_some() && args.run.period_before.is_none() && args.run.config.is_none() {
                None
            } else {
                Some(args.run.resolve()?)
            };
            let (before, after, universities, min_staff, out) = match &config {
                Some(c) => (
                    unit_scores_path(&args.before, c, &c.period_before),
                    unit_scores_path(&args.after, c, &c.period_after),
                    args.universities
                        .clone()
                        .unwrap_or_else(|| pipeline::period_corpus_dir(&c.corpus, &c.period_after).join("universities.csv")),
                    c.min_staff,
                    c.out.join("compare"),
                ),
                None => (
                    args.before.clone().expect("checked"),
                    args.after.clone().expect("checked"),
                    args.universities
                        .clone()
                        .ok_or_else(|| Error::Config("--universities is required".into()))?,
                    args.run.min_staff.unwrap_or(DEFAULT_MIN_STAFF),
                    args.run.out.clone().unwrap_or_else(|| PathBuf::from("out/compare")),
                ),
            };
            let before = report::read_unit_scores(&before)?;
            let after = report::read_unit_scores(&after)?;
            let regions = pipeline::load_regions(&universities)?;
            let cmp = pipeline::run_compare(&before, &after, &regions, min_staff, &out)?;
            print!("{}", report::render_region_table(&cmp.regions));
            println!("{} universities compared; outputs in {}", cmp.shifts.len(), out.display());
        }
        Command::Replicate { out } => {
            let report = pipeline::run_replicate(out.as_deref())?;
            println!("{report}");
            if !report.passed() {
                return Ok(Outcome::ToleranceFailure);
            }
        }
        Command::Stats(cmd) => match cmd {
            StatsCommand::Describe { source, column } => print_json(&dispersion(&source.column(&column)?)?)?,
            StatsCommand::Fisher { source, a, b } => {
                print_json(&fisher_variance_test(&source.column(&a)?, &source.column(&b)?)?)?
            }
            StatsCommand::Ols { source, y, x, robust } => {
                let yv = source.column(&y)?;
                let columns: Vec<(String, Vec<f64>)> = x
                    .iter()
                    .map(|name| Ok((name.clone(), source.column(name)?)))
                    .collect::<Result<_>>()?;
                let regressors: Vec<(&str, &[f64])> = columns.iter().map(|(n, v)| (n.as_str(), v.as_slice())).collect();
                let options = OlsOptions {
                    covariance: if robust { Covariance::Hc1 } else { Covariance::Classical },
                    ..OlsOptions::default()
                };
                let fit = ols(&yv, &regressors, options)?;
                let mut json = serde_json::to_value(&fit)?;
                if let Some(obj) = json.as_object_mut() {
                    obj.remove("residuals");
                    obj.remove("fitted");
                }
                print_json(&json)?;
            }
        },
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ToleranceFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
