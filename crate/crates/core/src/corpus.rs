//! Corpus records (one JSON object per line with `id` and `text`) and the statistics
//! gathered over them.

use serde_json::{Map, Value};

use crate::config::ScanOptions;
use crate::error::Result;
use crate::lexicon::Lexicon;
use crate::scansion::{scan_poem, Meter};

pub const HISTOGRAM_BINS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRecord {
    pub id: String,
    pub text: String,
    /// Every field of the original object, `id` and `text` included, in input order.
    pub fields: Map<String, Value>,
}

impl CorpusRecord {
    pub fn parse(line: &str) -> std::result::Result<CorpusRecord, String> {
        let value: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let Value::Object(fields) = value else {
            return Err("record is not a JSON object".into());
        };
        let id = match fields.get("id") {
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err("missing or empty \"id\"".into()),
        };
        let text = match fields.get("text") {
            Some(Value::String(s)) => s.clone(),
            _ => return Err("missing string \"text\"".into()),
        };
        Ok(CorpusRecord { id, text, fields })
    }
}

/// What filtering and statistics need from one poem.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordAnalysis {
    pub meter: Meter,
    pub technicality: f64,
    pub line_scores: Vec<f64>,
}

impl RecordAnalysis {
    pub fn of(text: &str, lex: &Lexicon, options: &ScanOptions) -> Result<RecordAnalysis> {
        let poem = scan_poem(text, lex, options)?;
        Ok(RecordAnalysis {
            meter: poem.meter,
            technicality: poem.technicality,
            line_scores: poem.lines.iter().map(|l| l.technicality).collect(),
        })
    }

    /// Every line scores at least `threshold`.
    pub fn all_lines_at_least(&self, threshold: f64) -> bool {
        self.line_scores.iter().all(|&s| s >= threshold)
    }

    /// The record's fields with `meter` and `technicality` appended.
    pub fn annotate(&self, record: &CorpusRecord) -> Map<String, Value> {
        let mut out = record.fields.clone();
        out.insert("meter".into(), Value::from(self.meter.name()));
        out.insert("technicality".into(), Value::from(self.technicality));
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub thresholds: Vec<f64>,
    pub n_poems: usize,
    pub n_lines: usize,
    /// Poems per meter, in [`Meter::ALL`] order.
    pub meter_histogram: [usize; 6],
    /// Lines per score bin: bin `k` holds `[k/50, (k+1)/50)`, the last bin also holds 1.0.
    pub line_histogram: [usize; HISTOGRAM_BINS],
    /// Per threshold: lines scoring at least it.
    pub lines_above: Vec<usize>,
    /// Per threshold: poems whose every line scores at least it.
    pub poems_all_lines_above: Vec<usize>,
}

impl CorpusStats {
    pub fn new(thresholds: &[f64]) -> CorpusStats {
        CorpusStats {
            thresholds: thresholds.to_vec(),
            n_poems: 0,
            n_lines: 0,
            meter_histogram: [0; 6],
            line_histogram: [0; HISTOGRAM_BINS],
            lines_above: vec![0; thresholds.len()],
            poems_all_lines_above: vec![0; thresholds.len()],
        }
    }

    pub fn bin(score: f64) -> usize {
        ((score * HISTOGRAM_BINS as f64).floor() as usize).min(HISTOGRAM_BINS - 1)
    }

    pub fn add(&mut self, a: &RecordAnalysis) {
        self.n_poems += 1;
        self.n_lines += a.line_scores.len();
        let m = Meter::ALL
            .iter()
            .position(|&m| m == a.meter)
            .expect("known meter");
        self.meter_histogram[m] += 1;
        for &s in &a.line_scores {
            self.line_histogram[Self::bin(s)] += 1;
        }
        for (k, &t) in self.thresholds.iter().enumerate() {
            self.lines_above[k] += a.line_scores.iter().filter(|&&s| s >= t).count();
            self.poems_all_lines_above[k] += a.all_lines_at_least(t) as usize;
        }
    }

    pub fn to_json(&self) -> Value {
        let meters: Map<String, Value> = Meter::ALL
            .iter()
            .zip(self.meter_histogram)
            .map(|(m, n)| (m.name().to_string(), Value::from(n)))
            .collect();
        let thresholds: Vec<Value> = self
            .thresholds
            .iter()
            .enumerate()
            .map(|(k, &t)| {
                serde_json::json!({
                    "threshold": t,
                    "lines_above": self.lines_above[k],
                    "poems_all_lines_above": self.poems_all_lines_above[k],
                })
            })
            .collect();
        serde_json::json!({
            "poems": self.n_poems,
            "lines": self.n_lines,
            "meters": meters,
            "thresholds": thresholds,
            "line_histogram": self.histogram_rows().iter().map(|(lo, hi, n)| serde_json::json!({
                "from": lo, "to": hi, "lines": n,
            })).collect::<Vec<_>>(),
        })
    }

    fn histogram_rows(&self) -> Vec<(f64, f64, usize)> {
        let w = 1.0 / HISTOGRAM_BINS as f64;
        (0..HISTOGRAM_BINS)
            .map(|k| (k as f64 * w, (k + 1) as f64 * w, self.line_histogram[k]))
            .collect()
    }

    /// Tab-separated tables: meters, thresholds, then the line histogram.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("meter\tpoems\n");
        for (m, n) in Meter::ALL.iter().zip(self.meter_histogram) {
            out.push_str(&format!("{m}\t{n}\n"));
        }
        out.push_str("\nthreshold\tlines_above\tpoems_all_lines_above\n");
        for (k, t) in self.thresholds.iter().enumerate() {
            out.push_str(&format!(
                "{t}\t{}\t{}\n",
                self.lines_above[k], self.poems_all_lines_above[k]
            ));
        }
        out.push_str("\nfrom\tto\tlines\n");
        for (lo, hi, n) in self.histogram_rows() {
            out.push_str(&format!("{lo:.2}\t{hi:.2}\t{n}\n"));
        }
        out
    }

    /// The line histogram as CSV, for plotting.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("from,to,lines\n");
        for (lo, hi, n) in self.histogram_rows() {
            out.push_str(&format!("{lo:.2},{hi:.2},{n}\n"));
        }
        out
    }
}
