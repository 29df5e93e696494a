//! `metrum`: analyze poems, filter and summarize JSONL corpora, evaluate against
//! stress-annotated fragments.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 on a data error.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Seek, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metrum::corpus::{CorpusRecord, CorpusStats, RecordAnalysis};
use metrum::eval::{evaluate, parse_rifma_str};
use metrum::lexicon::LoadReport;
use metrum::{analyze, Config, Lexicon, LexiconConfig};
use rayon::prelude::*;
use serde_json::{json, Value};

const CHUNK: usize = 4096;

#[derive(Parser)]
#[command(
    name = "metrum",
    version,
    about = "Scansion, meter and rhyme analysis for Russian verse"
)]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// Accent dictionary TSV to use instead of the bundled one.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    /// TOML file with [scan] and [rhyme] options.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Fail on the first malformed record instead of skipping it.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Mark stresses and report meter, scores and rhyme scheme. Poems are separated by blank lines.
    Analyze {
        /// Input file; standard input when omitted or "-".
        input: Option<PathBuf>,
    },
    /// Keep corpus records whose every line scores at least the threshold.
    Filter {
        /// JSONL corpus with "id" and "text" fields; standard input when omitted or "-".
        input: Option<PathBuf>,
        /// Smallest line score a retained record may have, in [0, 1].
        #[arg(long, value_parser = unit_interval)]
        min_technicality: f64,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Meter histogram, line score histogram and threshold counts over a corpus.
    Stats {
        /// JSONL corpus with "id" and "text" fields; standard input when omitted or "-".
        input: Option<PathBuf>,
        /// Comma-separated line score thresholds to count records against.
        #[arg(long, value_delimiter = ',', value_parser = unit_interval, default_value = "0.7,0.8,0.9")]
        thresholds: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        /// Output format of the report.
        format: Format,
        /// Also write the line histogram as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare stress marks and rhyme schemes with an annotated fragment file.
    Eval {
        /// JSONL fragments: {"text": [stress-marked lines], "scheme": "ABAB"}.
        input: PathBuf,
        /// Include every line's gold and predicted marks.
        #[arg(long, short)]
        verbose: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

/// A data error: exit status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(message)) => {
            eprintln!("metrum: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let shared = &cli.shared;
    let config = match &shared.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let lex = load_lexicon(shared)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(shared.jobs)
        .build_global()
        .map_err(|e| Failure(format!("cannot start workers: {e}")))?;

    match cli.command {
        Command::Analyze { input } => cmd_analyze(input.as_deref(), &lex, &config),
        Command::Filter {
            input,
            min_technicality,
            output,
        } => cmd_filter(
            input.as_deref(),
            min_technicality,
            output.as_deref(),
            &lex,
            &config,
            shared.strict,
        ),
        Command::Stats {
            input,
            thresholds,
            format,
            csv,
        } => cmd_stats(
            input.as_deref(),
            &thresholds,
            format,
            csv.as_deref(),
            &lex,
            &config,
            shared.strict,
        ),
        Command::Eval { input, verbose } => cmd_eval(&input, verbose, &lex, &config, shared.strict),
    }
}

fn load_lexicon(shared: &Shared) -> Result<Lexicon, Failure> {
    let Some(path) = &shared.lexicon else {
        return Ok(Lexicon::bundled());
    };
    let config = LexiconConfig {
        strict: shared.strict,
        ..LexiconConfig::default()
    };
    let (lex, LoadReport { errors, .. }) = Lexicon::load(path, &config)?;
    for e in errors.iter().take(10) {
        eprintln!("metrum: skipped lexicon record: {e}");
    }
    if errors.len() > 10 {
        eprintln!(
            "metrum: ... {} more malformed lexicon records",
            errors.len() - 10
        );
    }
    Ok(lex)
}

fn is_stdin(input: Option<&Path>) -> bool {
    input.is_none_or(|p| p == Path::new("-"))
}

fn read_all(input: Option<&Path>) -> Result<Vec<u8>, Failure> {
    let mut bytes = Vec::new();
    if is_stdin(input) {
        io::stdin().read_to_end(&mut bytes)?;
    } else {
        let path = input.expect("not stdin");
        File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(bytes)
}

fn write_json(out: &mut impl Write, value: &Value) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_analyze(input: Option<&Path>, lex: &Lexicon, config: &Config) -> Outcome {
    let bytes = read_all(input)?;
    let text =
        String::from_utf8(bytes).map_err(|e| Failure(format!("input is not valid UTF-8: {e}")))?;
    let poems = split_poems(&text);
    let results: Vec<Value> = poems
        .par_iter()
        .map(|poem| match analyze(poem, lex, config) {
            Ok(p) => p.to_json(),
            Err(e) => json!({ "error": e.to_string(), "text": poem }),
        })
        .collect();
    if results.is_empty() {
        eprintln!("metrum: no poems in input");
    }
    write_json(&mut io::stdout().lock(), &json!({ "poems": results }))
}

/// Poems are runs of non-blank lines.
fn split_poems(text: &str) -> Vec<String> {
    let mut poems = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                poems.push(current.join("\n"));
                current.clear();
            }
        } else {
            current.push(line);
        }
    }
    if !current.is_empty() {
        poems.push(current.join("\n"));
    }
    poems
}

/// Corpus input as a seekable file: standard input is spooled to a temporary file so
/// duplicate ids can be resolved in a first pass.
fn open_corpus(input: Option<&Path>) -> Result<File, Failure> {
    if is_stdin(input) {
        let mut spool = tempfile::tempfile()?;
        io::copy(&mut io::stdin().lock(), &mut spool)?;
        spool.rewind()?;
        Ok(spool)
    } else {
        let path = input.expect("not stdin");
        File::open(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
    }
}

#[derive(Default)]
struct Tally {
    total: usize,
    malformed: usize,
    duplicates: usize,
    unscannable: usize,
}

enum Item {
    Record(CorpusRecord, Result<RecordAnalysis, String>),
    Malformed(String),
    Superseded,
}

/// Streams the corpus in order-preserving parallel chunks. For each id only its last
/// occurrence is analyzed.
fn for_each_record(
    input: Option<&Path>,
    lex: &Lexicon,
    config: &Config,
    strict: bool,
    tally: &mut Tally,
    mut sink: impl FnMut(&CorpusRecord, &RecordAnalysis) -> Outcome,
) -> Outcome {
    let mut file = open_corpus(input)?;
    let name = input.map_or("<stdin>".to_string(), |p| p.display().to_string());

    // first pass: line number of the last occurrence of each id
    let mut last: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for (n, line) in BufReader::new(&mut file).split(b'\n').enumerate() {
        let line = line?;
        if let Ok(Ok(r)) = std::str::from_utf8(&line).map(CorpusRecord::parse) {
            if last.insert(r.id, n).is_some() {
                tally.duplicates += 1;
            }
        }
    }
    if tally.duplicates > 0 {
        eprintln!(
            "metrum: {} duplicate ids, keeping the last occurrence of each",
            tally.duplicates
        );
    }
    file.rewind()?;

    let mut lines = BufReader::new(file).split(b'\n').enumerate().peekable();
    while lines.peek().is_some() {
        let mut chunk = Vec::with_capacity(CHUNK);
        for (n, line) in lines.by_ref().take(CHUNK) {
            chunk.push((n, line?));
        }
        let items: Vec<(usize, Item)> = chunk
            .par_iter()
            .filter(|(_, bytes)| !bytes.iter().all(u8::is_ascii_whitespace))
            .map(|(n, bytes)| {
                let parsed = std::str::from_utf8(bytes)
                    .map_err(|e| format!("not valid UTF-8: {e}"))
                    .and_then(CorpusRecord::parse);
                let item = match parsed {
                    Err(m) => Item::Malformed(m),
                    Ok(r) if last.get(&r.id) != Some(n) => Item::Superseded,
                    Ok(r) => {
                        let a = RecordAnalysis::of(&r.text, lex, &config.scan)
                            .map_err(|e| e.to_string());
                        Item::Record(r, a)
                    }
                };
                (*n, item)
            })
            .collect();
        for (n, item) in items {
            match item {
                Item::Malformed(m) => {
                    let m = format!("{name}:{}: {m}", n + 1);
                    if strict {
                        return Err(Failure(m));
                    }
                    eprintln!("metrum: skipped {m}");
                    tally.malformed += 1;
                }
                Item::Superseded => {}
                Item::Record(r, Err(m)) => {
                    tally.total += 1;
                    tally.unscannable += 1;
                    if strict {
                        return Err(Failure(format!("{name}:{}: record {}: {m}", n + 1, r.id)));
                    }
                }
                Item::Record(r, Ok(a)) => {
                    tally.total += 1;
                    sink(&r, &a)?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_filter(
    input: Option<&Path>,
    threshold: f64,
    output: Option<&Path>,
    lex: &Lexicon,
    config: &Config,
    strict: bool,
) -> Outcome {
    let mut out: Box<dyn Write> = match output {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).map_err(|e| {
                Failure(format!("cannot write {}: {e}", path.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut tally = Tally::default();
    let mut retained = 0;
    for_each_record(input, lex, config, strict, &mut tally, |r, a| {
        if a.all_lines_at_least(threshold) {
            retained += 1;
            serde_json::to_writer(&mut out, &a.annotate(r))?;
            writeln!(out)?;
        }
        Ok(())
    })?;
    out.flush()?;
    let summary = json!({
        "records": tally.total,
        "retained": retained,
        "malformed": tally.malformed,
        "unscannable": tally.unscannable,
        "duplicate_ids": tally.duplicates,
        "min_technicality": threshold,
    });
    eprintln!("{summary}");
    Ok(())
}

fn cmd_stats(
    input: Option<&Path>,
    thresholds: &[f64],
    format: Format,
    csv: Option<&Path>,
    lex: &Lexicon,
    config: &Config,
    strict: bool,
) -> Outcome {
    let mut stats = CorpusStats::new(thresholds);
    let mut tally = Tally::default();
    for_each_record(input, lex, config, strict, &mut tally, |_, a| {
        stats.add(a);
        Ok(())
    })?;
    if let Some(path) = csv {
        std::fs::write(path, stats.histogram_csv())
            .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            let mut doc = stats.to_json();
            doc["malformed"] = json!(tally.malformed);
            doc["unscannable"] = json!(tally.unscannable);
            write_json(&mut out, &doc)
        }
        Format::Tsv => {
            out.write_all(stats.to_tsv().as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_eval(input: &Path, verbose: bool, lex: &Lexicon, config: &Config, strict: bool) -> Outcome {
    let text = String::from_utf8(read_all(Some(input))?)
        .map_err(|e| Failure(format!("{} is not valid UTF-8: {e}", input.display())))?;
    let (fragments, errors) = parse_rifma_str(&text, &input.display().to_string(), strict)?;
    for e in &errors {
        eprintln!("metrum: skipped {e}");
    }
    if fragments.is_empty() {
        return Err(Failure(format!("{}: no valid fragments", input.display())));
    }
    let report = evaluate(&fragments, lex, config)?;
    let mut doc = json!({
        "fragments": report.n_fragments,
        "lines": report.n_lines,
        "line_stress_exact": report.line_stress_exact,
        "syllable_stress_accuracy": report.syllable_stress_accuracy,
        "scheme_exact": report.scheme_exact,
        "skipped": errors.len(),
    });
    if verbose {
        doc["details"] = serde_json::to_value(&report.fragments)?;
    }
    write_json(&mut io::stdout().lock(), &doc)
}
