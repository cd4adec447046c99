use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use anyhow::{bail, Context, Result};
use capture::{router, AppState};
use capture_core::analyze::{coverage_csv, coverage_curve, mine_with, recommend_menu_size, Thresholds};
use capture_core::config::defaults;
use capture_core::corpus::{script_records, synthetic_address_book};
use capture_core::record::Record;
use capture_core::report::{speedup_vs_null, MedianTable, RunSummary};
use capture_core::sim::{
    calibrate, parse_conditions, run_experiment, CalibrationTargets, ExperimentSetup, RecognitionMode, RunResult,
};
use capture_core::store::record_to_jsonl;
use capture_core::{default_rules, default_schema, CaptureEngine, CorpusFormat, RecordStore};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "capture", version, about = "Adaptive form capture: service, analyzer and simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

impl From<Format> for CorpusFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Jsonl => CorpusFormat::Jsonl,
            Format::Csv => CorpusFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preload {
    /// The five-record entry script.
    Script,
    /// The seeded 200-record synthetic address book.
    Synthetic,
}

#[derive(clap::Args)]
struct CorpusArgs {
    /// Corpus file; defaults to the built-in synthetic address book.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Corpus format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// JSON-lines store; loaded at start, appended on finalize.
        #[arg(long)]
        store: Option<PathBuf>,
        /// Records to load when the store is new or absent.
        #[arg(long, value_enum)]
        preload: Option<Preload>,
    },
    /// Validate a corpus and optionally append it to a store.
    Import {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Coverage curve and menu size for one field.
    Analyze {
        #[arg(long)]
        field: String,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        max_entries: Option<usize>,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Recommend fillin rules and menu sizes from a corpus.
    Mine {
        #[arg(long)]
        min_density: Option<f64>,
        #[arg(long)]
        min_functionality: Option<f64>,
        #[arg(long)]
        min_support: Option<usize>,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Run the entry experiment.
    Simulate {
        /// Comma-separated condition names, or `all`.
        #[arg(long, default_value = "all")]
        conditions: String,
        #[arg(long, default_value_t = 2)]
        repeats: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw recognition outcomes from the per-field rates.
        #[arg(long)]
        stochastic: bool,
        /// Records to enter; defaults to the five-record script.
        #[arg(long)]
        records: Option<PathBuf>,
        /// Write one RunResult per line here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Summarize published medians or simulated results.
    Report {
        /// JSON object: condition -> {"worst": minutes, "best": minutes}.
        #[arg(long, conflicts_with = "results", required_unless_present = "results")]
        medians: Option<PathBuf>,
        /// JSON lines written by `simulate --out`.
        #[arg(long)]
        results: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Refit the calibrated action costs to the configured medians.
    Calibrate,
}

fn guess_format(path: &Path, explicit: Option<Format>) -> CorpusFormat {
    match explicit {
        Some(f) => f.into(),
        None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => CorpusFormat::Csv,
        None => CorpusFormat::Jsonl,
    }
}

fn load_records(path: &Path, format: CorpusFormat) -> Result<Vec<Record>> {
    let mut store = RecordStore::new(default_schema());
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    store.import_corpus(file, format).with_context(|| format!("reading {}", path.display()))?;
    Ok(store.records().to_vec())
}

fn corpus(args: &CorpusArgs) -> Result<Vec<Record>> {
    match &args.corpus {
        Some(p) => load_records(p, guess_format(p, args.format)),
        None => {
            let c = &defaults().calibration;
            Ok(synthetic_address_book(c.preload_records, c.preload_seed))
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Serve { port, host, store, preload } => serve(&host, port, store, preload),
        Command::Import { file, format, store } => {
            let format = guess_format(&file, format);
            let records = load_records(&file, format)?;
            if let Some(path) = store {
                let mut existing = RecordStore::new(default_schema());
                if path.exists() {
                    existing.import_corpus(File::open(&path)?, CorpusFormat::Jsonl)?;
                }
                for r in &records {
                    existing.finalize_record(r.clone())?;
                }
                let mut out = OpenOptions::new().create(true).append(true).open(&path)?;
                for r in &records {
                    writeln!(out, "{}", record_to_jsonl(r)?)?;
                }
                println!("imported {} records into {}", records.len(), path.display());
            } else {
                println!("{} records", records.len());
            }
            Ok(())
        }
        Command::Analyze { field, target, max_entries, corpus: args, output } => {
            let records = corpus(&args)?;
            default_schema().require(&field)?;
            let analyzer = &defaults().analyzer;
            let target = target.unwrap_or(analyzer.coverage_target);
            let max = max_entries.unwrap_or(analyzer.max_menu_entries);
            let curve = coverage_curve(&records, &field, max.max(1))?;
            let size = recommend_menu_size(&curve, target, max);
            match output {
                Output::Json => print_json(&serde_json::json!({ "curve": curve, "target": target, "recommended": size }))?,
                Output::Csv => print!("{}", coverage_csv(&[curve])),
                Output::Text => {
                    println!("{field}: {} values, {} distinct", curve.total, curve.distinct);
                    for (k, c) in curve.coverage.iter().enumerate() {
                        println!("{:>3}  {:.3}", k + 1, c);
                    }
                    match size {
                        Some(k) => println!("menu size for {:.0}% coverage: {k}", target * 100.0),
                        None => println!("no menu: {:.0}% coverage needs more than {max} entries", target * 100.0),
                    }
                }
            }
            Ok(())
        }
        Command::Mine { min_density, min_functionality, min_support, corpus: args, output } => {
            let records = corpus(&args)?;
            let d = Thresholds::default();
            let t = Thresholds {
                min_density: min_density.unwrap_or(d.min_density),
                min_functionality: min_functionality.unwrap_or(d.min_functionality),
                min_support: min_support.unwrap_or(d.min_support),
            };
            t.validate()?;
            let analyzer = &defaults().analyzer;
            let report = mine_with(&records, &default_schema(), &t, analyzer.coverage_target, analyzer.max_menu_entries);
            match output {
                Output::Json => println!("{}", report.to_json()?),
                Output::Csv => {
                    let curves: Vec<_> = default_schema()
                        .fields()
                        .iter()
                        .filter_map(|f| coverage_curve(&records, f.id.as_str(), analyzer.max_menu_entries).ok())
                        .collect();
                    print!("{}", coverage_csv(&curves));
                }
                Output::Text => print!("{}", report.to_text()),
            }
            Ok(())
        }
        Command::Simulate { conditions, repeats, seed, stochastic, records, out, output } => {
            let conditions = parse_conditions(&conditions)?;
            let records = match records {
                Some(p) => load_records(&p, guess_format(&p, None))?,
                None => script_records(),
            };
            let mut setup = ExperimentSetup { repeats, seed, ..ExperimentSetup::default() };
            if stochastic {
                setup.recognition = setup.recognition.with_mode(RecognitionMode::Stochastic);
            }
            let results = run_experiment(&records, &conditions, &setup)?;
            if let Some(path) = out {
                let mut f = File::create(&path)?;
                for r in &results {
                    writeln!(f, "{}", serde_json::to_string(r)?)?;
                }
            }
            emit_summary(&RunSummary::from_results(&results)?, output)
        }
        Command::Report { medians, results, output } => {
            if let Some(path) = medians {
                let table: MedianTable = serde_json::from_str(&fs::read_to_string(&path)?)
                    .with_context(|| format!("reading {}", path.display()))?;
                let speedups = speedup_vs_null(&table)?;
                match output {
                    Output::Json => print_json(&serde_json::json!({ "medians": table, "speedups": speedups }))?,
                    Output::Csv => {
                        print!("{}", table.to_csv());
                        println!("\ncondition,speedup_percent");
                        for c in table.conditions() {
                            println!("{c},{}", speedups[c]);
                        }
                    }
                    Output::Text => {
                        print!("{}", table.to_text());
                        println!();
                        for c in table.conditions() {
                            println!("{c:<6} {:>7.1}%", speedups[c]);
                        }
                    }
                }
                return Ok(());
            }
            let Some(path) = results else { bail!("one of --medians or --results is required") };
            let reader = BufReader::new(File::open(&path)?);
            let mut runs = Vec::new();
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let r: RunResult =
                    serde_json::from_str(&line).with_context(|| format!("{}: line {}", path.display(), i + 1))?;
                runs.push(r);
            }
            emit_summary(&RunSummary::from_results(&runs)?, output)
        }
        Command::Calibrate => {
            let cal = calibrate(&script_records(), &ExperimentSetup::default(), &CalibrationTargets::default())?;
            println!("type_char = {}", cal.type_char);
            println!("write_word = {}", cal.write_word);
            println!("# Typed best median {:.4} min, D best median {:.4} min", cal.typed_best_minutes, cal.d_best_minutes);
            Ok(())
        }
    }
}

fn emit_summary(summary: &RunSummary, output: Output) -> Result<()> {
    match output {
        Output::Json => print_json(summary),
        Output::Csv => {
            print!("{}", summary.medians.to_csv());
            println!();
            print!("{}", capture_core::report::breakdown_csv(&summary.breakdown));
            Ok(())
        }
        Output::Text => {
            print!("{}", summary.to_text());
            Ok(())
        }
    }
}

fn serve(host: &str, port: u16, store: Option<PathBuf>, preload: Option<Preload>) -> Result<()> {
    let mut records = RecordStore::new(default_schema());
    let fresh = store.as_ref().is_none_or(|p| !p.exists());
    if fresh {
        let seed: Vec<Record> = match preload {
            Some(Preload::Script) => script_records(),
            Some(Preload::Synthetic) => {
                let c = &defaults().calibration;
                synthetic_address_book(c.preload_records, c.preload_seed)
            }
            None => Vec::new(),
        };
        if let Some(path) = &store {
            let mut f = File::create(path)?;
            for r in &seed {
                writeln!(f, "{}", record_to_jsonl(r)?)?;
            }
        } else {
            for r in seed {
                records.finalize_record(r)?;
            }
        }
    }
    let engine = CaptureEngine::new(records, default_rules())?;
    let state = match &store {
        Some(path) => AppState::open(engine, path)?,
        None => AppState::in_memory(engine),
    };
    let app = router(Arc::new(RwLock::new(state)));
    let addr: SocketAddr = format!("{host}:{port}").parse().context("bad host or port")?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, app).await?;
        Ok(())
    })
}
