//! Accuracy against stress-annotated fragments, and the agreement statistics used to
//! compare the score with human judgements.
//!
//! A line's stresses match when the predicted and gold sets of stressed syllables are
//! equal. Monosyllabic function words the annotator left unmarked are ignored on both
//! sides, since annotators rarely mark them. ё counts as marked.

mod rifma;
mod stats;

use serde::Serialize;

pub use rifma::{parse_rifma, parse_rifma_str, serialize, AnnotatedFragment};
pub use stats::{cohen_kappa, pearson_r};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::scansion::line_tokens;
use crate::text::{is_vowel, is_yo, strip_marks, STRESS_MARK};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineResult {
    pub gold: String,
    pub predicted: String,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FragmentResult {
    pub gold_scheme: String,
    pub predicted_scheme: String,
    pub lines: Vec<LineResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub n_fragments: usize,
    pub n_lines: usize,
    pub line_stress_exact: f64,
    pub syllable_stress_accuracy: f64,
    pub scheme_exact: f64,
    pub fragments: Vec<FragmentResult>,
}

/// Stressed syllables of a marked line, 0-based over the whole line.
fn marked_syllables(marked: &str) -> Vec<bool> {
    let mut out: Vec<bool> = Vec::new();
    for c in marked.chars() {
        if c == STRESS_MARK {
            if let Some(last) = out.last_mut() {
                *last = true;
            }
        } else if is_vowel(c) {
            out.push(is_yo(c));
        }
    }
    out
}

/// Syllables to leave out: monosyllabic function words without a gold stress.
fn ignored_syllables(line: &str, gold: &[bool], lex: &Lexicon) -> Vec<bool> {
    let mut ignore = vec![false; gold.len()];
    let mut at = 0;
    for t in line_tokens(line, lex) {
        let n = t.syllables();
        if t.is_word() && n == 1 && lex.is_function_word(&t.text) && !gold[at] {
            ignore[at] = true;
        }
        at += n;
    }
    ignore
}

/// Runs the analyzer over every fragment and compares it with the annotation.
pub fn evaluate(
    fragments: &[AnnotatedFragment],
    lex: &Lexicon,
    config: &Config,
) -> Result<EvalReport> {
    if fragments.is_empty() {
        return Err(Error::InvalidArgument("no fragments to evaluate".into()));
    }
    let (mut lines_total, mut lines_exact) = (0usize, 0usize);
    let (mut syl_total, mut syl_match) = (0usize, 0usize);
    let mut schemes_exact = 0;
    let mut results = Vec::with_capacity(fragments.len());

    for frag in fragments {
        let plain: Vec<String> = frag.lines.iter().map(|l| strip_marks(l)).collect();
        let poem = crate::analyze(&plain.join("\n"), lex, config)?;
        let predicted_scheme = poem
            .rhyme_scheme
            .as_ref()
            .map(|s| s.to_string())
            .unwrap_or_default();
        let gold_scheme = frag.scheme.canonical().to_string();
        schemes_exact += (predicted_scheme == gold_scheme) as usize;

        let mut line_results = Vec::new();
        for scanned in &poem.lines {
            let gold_line = &frag.lines[scanned.source_line];
            let gold = marked_syllables(gold_line);
            let ignore = ignored_syllables(&scanned.text, &gold, lex);
            let pred = &scanned.assignment.stressed;
            debug_assert_eq!(pred.len(), gold.len());
            let mut exact = true;
            for i in 0..gold.len().min(pred.len()) {
                if ignore[i] {
                    continue;
                }
                syl_total += 1;
                if gold[i] == pred[i] {
                    syl_match += 1;
                } else {
                    exact = false;
                }
            }
            lines_total += 1;
            lines_exact += exact as usize;
            line_results.push(LineResult {
                gold: gold_line.clone(),
                predicted: scanned.marked_text.clone(),
                exact,
            });
        }
        results.push(FragmentResult {
            gold_scheme,
            predicted_scheme,
            lines: line_results,
        });
    }

    let frac = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Ok(EvalReport {
        n_fragments: fragments.len(),
        n_lines: lines_total,
        line_stress_exact: frac(lines_exact, lines_total),
        syllable_stress_accuracy: frac(syl_match, syl_total),
        scheme_exact: frac(schemes_exact, fragments.len()),
        fragments: results,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    First,
    Second,
    Tie,
}

/// For each pair, which poem has the higher poem technicality.
pub fn technicality_choice(
    pairs: &[(&str, &str)],
    lex: &Lexicon,
    config: &Config,
) -> Result<Vec<Choice>> {
    pairs
        .iter()
        .map(|(a, b)| {
            let ta = crate::scansion::scan_poem(a, lex, &config.scan)?.technicality;
            let tb = crate::scansion::scan_poem(b, lex, &config.scan)?.technicality;
            Ok(if ta > tb {
                Choice::First
            } else if tb > ta {
                Choice::Second
            } else {
                Choice::Tie
            })
        })
        .collect()
}

/// Kappa between two choice lists, leaving out every item either side called a tie.
pub fn choice_kappa(a: &[Choice], b: &[Choice]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidArgument("length mismatch".into()));
    }
    let (x, y): (Vec<Choice>, Vec<Choice>) = a
        .iter()
        .zip(b)
        .filter(|(p, q)| **p != Choice::Tie && **q != Choice::Tie)
        .map(|(p, q)| (*p, *q))
        .unzip();
    cohen_kappa(&x, &y)
}
