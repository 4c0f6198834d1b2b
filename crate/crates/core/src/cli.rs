//! Command-line driver.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
//! stderr; data goes to files (or stdout when `--out -`).

use std::error::Error;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::counts::{read_counts_csv, write_counts_csv, DailyCountTable};
use crate::lexicon::{default_lexicon, load_lexicon, HashtagLexicon, LexiconSource};
use crate::mobility::{parse_mobility_csv, RegionSelector};
use crate::report::{emit_matrix_report, emit_trend_report, read_matrix_json, write_matrix_json, ReportFormats};
use crate::series::{per_tag_series, total_series};
use crate::stats::correlation_matrix;
use crate::synth::{write_synthetic, SynthSpec};
use crate::tweets::{count_reader, CountOptions, IngestStats};
use crate::window::DateRange;

type DataResult = Result<(), Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(name = "distancing", version, about = "Hashtag-frequency social distancing proxy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count lexicon hashtags per day in NDJSON tweet corpora.
    Count(CountArgs),
    /// Correlate daily counts with a mobility report.
    Correlate(CorrelateArgs),
    /// Render trend and correlation reports.
    Report(ReportArgs),
    /// Generate a deterministic synthetic corpus and mobility report.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long, num_args = 1.., required = true)]
    corpus: Vec<PathBuf>,
    /// Lexicon file; defaults to the built-in 18 tags.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, default_value_t = DateRange::collection_window())]
    window: DateRange,
    #[arg(long)]
    dedupe_per_tweet: bool,
    /// Output counts CSV, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    #[arg(long)]
    counts: PathBuf,
    #[arg(long)]
    mobility: PathBuf,
    #[arg(long, default_value_t = DateRange::collection_window())]
    window: DateRange,
    /// Also correlate every per-tag series.
    #[arg(long)]
    per_tag: bool,
    /// Output matrix JSON, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long)]
    counts: PathBuf,
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value = "csv,json,svg")]
    formats: ReportFormats,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 147)]
    days: usize,
    /// Total corpus lines.
    #[arg(long, default_value_t = 10_000)]
    tweets: usize,
    /// Peak day index; defaults to 2020-03-15 or mid-range for short runs.
    #[arg(long)]
    peak_day: Option<usize>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    coupling: f64,
    #[arg(long, default_value_t = 3.0)]
    noise: f64,
    #[arg(long)]
    out_dir: PathBuf,
}

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(a) => count(a),
        Command::Correlate(a) => correlate(a),
        Command::Report(a) => report(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn open_out(path: &Path) -> io::Result<Box<dyn Write>> {
    if path == Path::new("-") {
        Ok(Box::new(io::stdout().lock()))
    } else {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        Ok(Box::new(io::BufWriter::new(File::create(path)?)))
    }
}

fn with_path<E: Error + 'static>(path: &Path) -> impl FnOnce(E) -> Box<dyn Error> + '_ {
    move |e| format!("{}: {e}", path.display()).into()
}

fn report_stats(path: &Path, stats: &IngestStats) {
    eprintln!(
        "{}: lines_read={} records_ok={} records_skipped={}",
        path.display(),
        stats.lines_read,
        stats.records_ok,
        stats.records_skipped
    );
    for (line, reason) in &stats.first_skip_reasons {
        eprintln!("  line {line}: {reason}");
    }
}

fn count(a: CountArgs) -> DataResult {
    let lexicon: HashtagLexicon = match &a.lexicon {
        Some(p) => {
            let f = File::open(p).map_err(with_path(p))?;
            load_lexicon(BufReader::new(f), LexiconSource::File(p.clone())).map_err(with_path(p))?
        }
        None => default_lexicon(),
    };
    let lexicon = Arc::new(lexicon);
    let options = CountOptions {
        dedupe_per_tweet: a.dedupe_per_tweet,
    };
    let mut table = DailyCountTable::new(Arc::clone(&lexicon), a.window);
    for path in &a.corpus {
        let f = File::open(path).map_err(with_path(path))?;
        let (t, stats) = count_reader(BufReader::new(f), Arc::clone(&lexicon), a.window, options).map_err(with_path(path))?;
        report_stats(path, &stats);
        table = table.merge(&t)?;
    }
    let mut out = open_out(&a.out).map_err(with_path(&a.out))?;
    write_counts_csv(&table, &mut out)?;
    out.flush()?;
    Ok(())
}

fn correlate(a: CorrelateArgs) -> DataResult {
    let table = read_counts_csv(File::open(&a.counts).map_err(with_path(&a.counts))?).map_err(with_path(&a.counts))?;
    let f = File::open(&a.mobility).map_err(with_path(&a.mobility))?;
    let mobility = parse_mobility_csv(BufReader::new(f), &RegionSelector::default()).map_err(with_path(&a.mobility))?;
    let mut series = vec![total_series(&table)];
    if a.per_tag {
        for tag in table.lexicon().tags() {
            series.push(per_tag_series(&table, tag)?);
        }
    }
    let results = correlation_matrix(&series, &mobility, a.window);
    for c in &results {
        if let Err(e) = &c.outcome {
            eprintln!("{} vs {}: {e}", c.series, c.category);
        }
    }
    let mut out = open_out(&a.out).map_err(with_path(&a.out))?;
    write_matrix_json(&results, &mut out)?;
    out.flush()?;
    Ok(())
}

fn report(a: ReportArgs) -> DataResult {
    let table = read_counts_csv(File::open(&a.counts).map_err(with_path(&a.counts))?).map_err(with_path(&a.counts))?;
    let mut written = emit_trend_report(&table, &a.out_dir, a.formats)?;
    if let Some(m) = &a.matrix {
        let results = read_matrix_json(BufReader::new(File::open(m).map_err(with_path(m))?)).map_err(with_path(m))?;
        written.extend(emit_matrix_report(&results, &a.out_dir, a.formats)?);
    }
    for p in written {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn synth(a: SynthArgs) -> DataResult {
    let defaults = SynthSpec::default();
    let spec = SynthSpec {
        seed: a.seed,
        days: a.days,
        tweets: a.tweets,
        peak_day: a
            .peak_day
            .unwrap_or(if a.days > defaults.peak_day { defaults.peak_day } else { a.days / 2 }),
        coupling: a.coupling,
        noise: a.noise,
        ..defaults
    };
    let (_, paths) = write_synthetic(&spec, &a.out_dir)?;
    for p in [paths.corpus, paths.mobility, paths.manifest] {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}
