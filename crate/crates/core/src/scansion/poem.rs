use crate::config::ScanOptions;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::text::{mark_stresses, Token};

use super::lattice::Lattice;
use super::{LineScansion, Meter, MeterTemplate, PoemScansion, StressAssignment};

/// Inserts U+0301 after every stressed vowel; everything else is copied as is.
pub fn emit_markup(line: &str, tokens: &[Token], assignment: &StressAssignment) -> String {
    mark_stresses(line, tokens, &assignment.token_stresses())
}

struct Scanned {
    source_line: usize,
    text: String,
    lattice: Lattice,
    /// Best assignment and score per template, in template order.
    per_template: Vec<(StressAssignment, f64)>,
}

fn scan_one(
    source_line: usize,
    text: &str,
    lattice: Lattice,
    options: &ScanOptions,
) -> Result<Scanned> {
    let per_template = MeterTemplate::ALL
        .iter()
        .map(|t| lattice.beam(t, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(Scanned {
        source_line,
        text: text.to_string(),
        lattice,
        per_template,
    })
}

fn finish(scanned: Vec<Scanned>, options: &ScanOptions) -> Result<PoemScansion> {
    if scanned.is_empty() {
        return Err(Error::EmptyPoem);
    }
    let n = scanned.len() as f64;
    let mut means = [0.0; 5];
    for (k, mean) in means.iter_mut().enumerate() {
        *mean = scanned.iter().map(|s| s.per_template[k].1).sum::<f64>() / n;
    }
    let mut best = 0;
    for k in 1..5 {
        if means[k] > means[best] {
            best = k;
        }
    }
    let poem_meter = if means[best] >= options.meter_floor {
        MeterTemplate::ALL[best].meter
    } else {
        Meter::Other
    };

    let lines: Vec<LineScansion> = scanned
        .into_iter()
        .map(|s| {
            let k = if poem_meter == Meter::Other {
                own_best(&s.per_template)
            } else {
                best
            };
            let template = MeterTemplate::ALL[k];
            let (assignment, technicality) =
                s.per_template.into_iter().nth(k).expect("five templates");
            let meter = if poem_meter != Meter::Other || technicality >= options.meter_floor {
                template.meter
            } else {
                Meter::Other
            };
            let marked_text = emit_markup(&s.text, &s.lattice.tokens, &assignment);
            LineScansion {
                low_confidence: s.lattice.total_syllables() < options.min_syllables_confident,
                text: s.text,
                source_line: s.source_line,
                tokens: s.lattice.tokens,
                assignment,
                template,
                meter,
                technicality,
                marked_text,
            }
        })
        .collect();
    let technicality = lines.iter().map(|l| l.technicality).sum::<f64>() / n;
    Ok(PoemScansion {
        lines,
        meter: poem_meter,
        technicality,
        template_means: means,
        rhyme_scheme: None,
    })
}

fn own_best(per_template: &[(StressAssignment, f64)]) -> usize {
    let mut best = 0;
    for k in 1..per_template.len() {
        if per_template[k].1 > per_template[best].1 {
            best = k;
        }
    }
    best
}

/// Scans every line under all five templates and picks the poem's meter.
/// Lines without syllables are skipped.
pub fn detect_meter(
    lines: &[&str],
    lex: &Lexicon,
    options: &ScanOptions,
) -> Result<(Meter, Vec<LineScansion>)> {
    let poem = scan_lines(lines.iter().copied().enumerate(), lex, options)?;
    Ok((poem.meter, poem.lines))
}

fn scan_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
    lex: &Lexicon,
    options: &ScanOptions,
) -> Result<PoemScansion> {
    let mut scanned = Vec::new();
    for (i, line) in lines {
        let lattice = Lattice::build(line, lex, options)?;
        if lattice.total_syllables() == 0 {
            continue;
        }
        scanned.push(scan_one(i, line, lattice, options)?);
    }
    finish(scanned, options)
}

/// Scans a whole poem, one line per text line. The rhyme scheme is left empty.
pub fn scan_poem(text: &str, lex: &Lexicon, options: &ScanOptions) -> Result<PoemScansion> {
    scan_lines(text.lines().enumerate(), lex, options)
}
