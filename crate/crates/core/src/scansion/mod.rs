//! Stress placement and meter detection.
//!
//! Each line becomes a lattice of stress variants per word. Every meter template
//! searches that lattice for the assignment with the fewest metrical defects, and the
//! poem takes the template with the best mean line score.

mod lattice;
mod poem;
mod score;
mod search;

use std::fmt;

use serde::Serialize;

pub use crate::text::strip_marks;
pub use lattice::{line_tokens, word_variants, Lattice, Segment};
pub use poem::{detect_meter, emit_markup, scan_poem};
pub use score::{defects, line_score, Defects};
pub use search::{beam_scan_line, brute_scan_line};

use crate::phonetics::SyllableMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Meter {
    Trochee,
    Iamb,
    Dactyl,
    Amphibrach,
    Anapest,
    /// Dolnik, free verse and anything else without a regular foot.
    Other,
}

impl Meter {
    pub const ALL: [Meter; 6] = [
        Meter::Trochee,
        Meter::Iamb,
        Meter::Dactyl,
        Meter::Amphibrach,
        Meter::Anapest,
        Meter::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Meter::Trochee => "trochee",
            Meter::Iamb => "iamb",
            Meter::Dactyl => "dactyl",
            Meter::Amphibrach => "amphibrach",
            Meter::Anapest => "anapest",
            Meter::Other => "other",
        }
    }

    pub fn from_name(name: &str) -> Option<Meter> {
        Meter::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn template(self) -> Option<MeterTemplate> {
        MeterTemplate::ALL.into_iter().find(|t| t.meter == self)
    }
}

impl fmt::Display for Meter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A periodic ictus pattern: syllable `i` (0-based) is strong iff `i % period == ictus_offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeterTemplate {
    pub meter: Meter,
    pub period: usize,
    pub ictus_offset: usize,
}

impl MeterTemplate {
    pub const TROCHEE: MeterTemplate = MeterTemplate::new(Meter::Trochee, 2, 0);
    pub const IAMB: MeterTemplate = MeterTemplate::new(Meter::Iamb, 2, 1);
    pub const DACTYL: MeterTemplate = MeterTemplate::new(Meter::Dactyl, 3, 0);
    pub const AMPHIBRACH: MeterTemplate = MeterTemplate::new(Meter::Amphibrach, 3, 1);
    pub const ANAPEST: MeterTemplate = MeterTemplate::new(Meter::Anapest, 3, 2);

    /// In tie-breaking order.
    pub const ALL: [MeterTemplate; 5] = [
        MeterTemplate::TROCHEE,
        MeterTemplate::IAMB,
        MeterTemplate::DACTYL,
        MeterTemplate::AMPHIBRACH,
        MeterTemplate::ANAPEST,
    ];

    const fn new(meter: Meter, period: usize, ictus_offset: usize) -> Self {
        MeterTemplate {
            meter,
            period,
            ictus_offset,
        }
    }

    pub fn is_ictus(&self, syllable: usize) -> bool {
        syllable % self.period == self.ictus_offset
    }

    /// Number of strong positions in a line of `syllables` syllables.
    pub fn ictus_count(&self, syllables: usize) -> usize {
        if syllables > self.ictus_offset {
            (syllables - self.ictus_offset - 1) / self.period + 1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Lexical,
    FunctionUnstressed,
    Collocation,
    OovRule,
    OovMeterFit,
}

/// One way of realizing a word.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordVariant {
    /// Index into the line's token list.
    pub token: usize,
    /// 1-based syllable within the word, `None` for an unstressed realization.
    pub stress: Option<usize>,
    pub origin: Origin,
    pub base_penalty: f64,
    pub function_word: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressAssignment {
    pub syllable_map: SyllableMap,
    /// One flag per syllable of the line.
    pub stressed: Vec<bool>,
    /// The chosen variant of every syllabic token, in line order.
    pub chosen: Vec<WordVariant>,
    /// For each entry of `chosen`, every stress position the lattice offered that word.
    pub admissible: Vec<Vec<usize>>,
}

impl StressAssignment {
    pub fn total_syllables(&self) -> usize {
        self.syllable_map.total_syllables
    }

    pub fn stressed_positions(&self) -> Vec<usize> {
        (0..self.stressed.len())
            .filter(|&i| self.stressed[i])
            .collect()
    }

    /// Per-token stress in the token coordinates of the syllable map.
    pub fn token_stresses(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.syllable_map.tokens.len()];
        for v in &self.chosen {
            out[v.token] = v.stress;
        }
        out
    }

    pub fn stressed_function_words(&self) -> usize {
        self.chosen
            .iter()
            .filter(|v| v.function_word && v.stress.is_some())
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineScansion {
    /// The line as given, without any stress marks added.
    pub text: String,
    /// Index of the line within the poem text, counting blank lines.
    pub source_line: usize,
    pub tokens: Vec<crate::text::Token>,
    pub assignment: StressAssignment,
    pub template: MeterTemplate,
    /// The template's meter, or `Other` when the line is unmetrical inside an "other" poem.
    pub meter: Meter,
    pub technicality: f64,
    pub marked_text: String,
    /// Too short for its meter to be trusted.
    pub low_confidence: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoemScansion {
    pub lines: Vec<LineScansion>,
    pub meter: Meter,
    pub technicality: f64,
    /// Mean line score under each template, in template order.
    pub template_means: [f64; 5],
    pub rhyme_scheme: Option<crate::rhyme::RhymeScheme>,
}

impl PoemScansion {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "meter": self.meter.name(),
            "technicality": self.technicality,
            "rhyme_scheme": self.rhyme_scheme.as_ref().map(|s| s.to_string()),
            "lines": self.lines.iter().map(|l| serde_json::json!({
                "text": l.text,
                "marked": l.marked_text,
                "meter": l.meter.name(),
                "technicality": l.technicality,
                "low_confidence": l.low_confidence,
            })).collect::<Vec<_>>(),
        })
    }
}
