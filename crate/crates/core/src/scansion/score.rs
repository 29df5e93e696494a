//! The line score ("technicality").
//!
//! With `N` strong positions in the line,
//!
//! ```text
//! cost  = α·off + γ·off_mono + β·miss + Σ variant penalties
//! score = clamp(1 − cost / max(N, 1), 0, 1)
//! ```
//!
//! * `off`: stressed weak syllables of polysyllabic words;
//! * `off_mono`: stressed weak monosyllables;
//! * `miss`: strong positions inside a polysyllabic word that could have been stressed
//!   there but is stressed on a weak position or left unstressed. A word stressed on one
//!   strong position is never charged for another, since it carries a single stress.
//!   Unavoidable misses (pyrrhics) are free.
//!
//! A line that stresses fewer than a quarter of its strong positions is scaled down by
//! `stressed strong / max(1, N/4)`, so an all-unstressed line cannot score 1.
//!
//! Costs are summed in integer millionths so that the same assignment scores
//! identically however its cost was accumulated.

use crate::config::Weights;

use super::{MeterTemplate, StressAssignment, WordVariant};

pub(crate) const UNIT: f64 = 1e6;

pub(crate) fn units(x: f64) -> i64 {
    (x * UNIT).round() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Defects {
    pub off_ictus: usize,
    pub off_ictus_mono: usize,
    pub avoidable_miss: usize,
    /// Sum of variant penalties, in millionths.
    pub penalty_units: i64,
    pub stressed_ictus: usize,
    pub n_ictus: usize,
}

impl Defects {
    pub fn cost_units(&self, w: &Weights) -> i64 {
        self.off_ictus as i64 * units(w.off_ictus)
            + self.off_ictus_mono as i64 * units(w.off_ictus_mono)
            + self.avoidable_miss as i64 * units(w.avoidable_miss)
            + self.penalty_units
    }

    pub fn is_clean(&self) -> bool {
        self.off_ictus == 0
            && self.off_ictus_mono == 0
            && self.avoidable_miss == 0
            && self.penalty_units == 0
    }

    pub fn score(&self, w: &Weights) -> f64 {
        score_from(self.cost_units(w), self.stressed_ictus, self.n_ictus)
    }

    pub(crate) fn add(&mut self, other: &Defects) {
        self.off_ictus += other.off_ictus;
        self.off_ictus_mono += other.off_ictus_mono;
        self.avoidable_miss += other.avoidable_miss;
        self.penalty_units += other.penalty_units;
        self.stressed_ictus += other.stressed_ictus;
    }
}

pub(crate) fn score_from(cost_units: i64, stressed_ictus: usize, n_ictus: usize) -> f64 {
    let raw = 1.0 - cost_units as f64 / (UNIT * n_ictus.max(1) as f64);
    let mut score = raw.clamp(0.0, 1.0);
    if 4 * stressed_ictus < n_ictus {
        score *= stressed_ictus as f64 / f64::max(1.0, 0.25 * n_ictus as f64);
    }
    score
}

/// Defects contributed by one chosen word. `start` is its first global syllable.
pub(crate) fn word_defects(
    v: &WordVariant,
    start: usize,
    syllables: usize,
    admissible: &[usize],
    template: &MeterTemplate,
) -> Defects {
    let mut d = Defects {
        penalty_units: units(v.base_penalty),
        ..Defects::default()
    };
    if let Some(s) = v.stress {
        if template.is_ictus(start + s - 1) {
            d.stressed_ictus = 1;
            return d;
        }
        if syllables == 1 {
            d.off_ictus_mono = 1;
        } else {
            d.off_ictus = 1;
        }
    }
    if syllables > 1 {
        d.avoidable_miss = admissible
            .iter()
            .filter(|&&p| v.stress != Some(p) && template.is_ictus(start + p - 1))
            .count();
    }
    d
}

pub fn defects(assignment: &StressAssignment, template: &MeterTemplate) -> Defects {
    let map = &assignment.syllable_map;
    let mut total = Defects {
        n_ictus: template.ictus_count(map.total_syllables),
        ..Defects::default()
    };
    for (v, adm) in assignment.chosen.iter().zip(&assignment.admissible) {
        let span = &map.spans[v.token];
        total.add(&word_defects(v, span.start, span.len(), adm, template));
    }
    total
}

/// Technicality of an assignment under a template, in `[0, 1]`.
pub fn line_score(
    assignment: &StressAssignment,
    template: &MeterTemplate,
    weights: &Weights,
) -> f64 {
    defects(assignment, template).score(weights)
}
