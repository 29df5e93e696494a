//! Beam search over the lattice, and the exhaustive scanner used to check it.
//!
//! Defects are local to each word, so a partial assignment's cost is exact, and the
//! final score depends only on the total cost and on how many strong positions are
//! stressed (through the coverage floor). Beam states are therefore merged by
//! `min(stressed strong positions, ⌈N/4⌉)`, keeping the cheapest state per key. When
//! the beam is at least as wide as the number of keys, the search is exact.
//!
//! Ties on score go to fewer stressed function words, then to the pattern whose first
//! differing syllable is stressed.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::config::ScanOptions;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

use super::lattice::Lattice;
use super::score::{line_score, word_defects, Defects};
use super::{MeterTemplate, StressAssignment};

#[derive(Debug, Clone)]
struct State {
    choice: Vec<usize>,
    defects: Defects,
    cost: i64,
    function_stressed: usize,
    pattern: Vec<bool>,
}

/// Earlier stress wins: `true` sorts before `false` at the first difference.
fn pattern_order(a: &[bool], b: &[bool]) -> Ordering {
    b.cmp(a)
}

/// Score descending, then fewer stressed function words, then leftmost stress.
fn better(a: (f64, &StressAssignment), b: (f64, &StressAssignment)) -> bool {
    let ord =
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(
                a.1.stressed_function_words()
                    .cmp(&b.1.stressed_function_words()),
            )
            .then_with(|| pattern_order(&a.1.stressed, &b.1.stressed));
    ord == Ordering::Less
}

fn check_line(lattice: &Lattice) -> Result<()> {
    if lattice.total_syllables() == 0 {
        return Err(Error::EmptyLine);
    }
    Ok(())
}

impl Lattice {
    pub fn beam(
        &self,
        template: &MeterTemplate,
        options: &ScanOptions,
    ) -> Result<(StressAssignment, f64)> {
        check_line(self)?;
        if options.beam_width == 0 {
            return Err(Error::InvalidArgument(
                "beam width must be at least 1".into(),
            ));
        }
        let w = &options.weights;
        let n_ictus = template.ictus_count(self.total_syllables());
        let cap = n_ictus.div_ceil(4);
        let mut beam = vec![State {
            choice: Vec::new(),
            defects: Defects {
                n_ictus,
                ..Defects::default()
            },
            cost: 0,
            function_stressed: 0,
            pattern: Vec::new(),
        }];

        for seg in &self.segments {
            let first = self.syllable_map.spans[seg.tokens[0]].start;
            let last = self.syllable_map.spans[*seg.tokens.last().unwrap()].end;
            // per-alternative contribution: defects, function stresses, stress bits
            let steps: Vec<(Defects, usize, Vec<bool>)> = seg
                .alternatives
                .iter()
                .map(|alt| {
                    let mut d = Defects::default();
                    let mut fs = 0;
                    let mut bits = vec![false; last - first];
                    for v in alt {
                        let span = &self.syllable_map.spans[v.token];
                        d.add(&word_defects(
                            v,
                            span.start,
                            span.len(),
                            &self.admissible[v.token],
                            template,
                        ));
                        if let Some(s) = v.stress {
                            bits[span.start + s - 1 - first] = true;
                            fs += v.function_word as usize;
                        }
                    }
                    (d, fs, bits)
                })
                .collect();

            let mut best: HashMap<usize, State> = HashMap::new();
            for state in &beam {
                for (k, (d, fs, bits)) in steps.iter().enumerate() {
                    let mut next = state.clone();
                    next.choice.push(k);
                    next.defects.add(d);
                    next.cost = next.defects.cost_units(w);
                    next.function_stressed += fs;
                    // syllables between segments belong to vowelless or punctuation tokens: none
                    next.pattern.resize(first, false);
                    next.pattern.extend_from_slice(bits);
                    let key = next.defects.stressed_ictus.min(cap);
                    match best.get(&key) {
                        Some(cur) if !state_before(&next, cur) => {}
                        _ => {
                            best.insert(key, next);
                        }
                    }
                }
            }
            let mut states: Vec<(usize, State)> = best.into_iter().collect();
            states.sort_by(|(ka, a), (kb, b)| {
                a.cost
                    .cmp(&b.cost)
                    .then(kb.cmp(ka))
                    .then_with(|| rank(a, b))
            });
            states.truncate(options.beam_width);
            beam = states.into_iter().map(|(_, s)| s).collect();
        }

        let mut winner: Option<(StressAssignment, f64)> = None;
        for state in &beam {
            let a = self.assignment(&state.choice);
            let score = line_score(&a, template, w);
            if winner
                .as_ref()
                .is_none_or(|(wa, ws)| better((score, &a), (*ws, wa)))
            {
                winner = Some((a, score));
            }
        }
        Ok(winner.expect("beam is never empty"))
    }

    pub fn brute(
        &self,
        template: &MeterTemplate,
        options: &ScanOptions,
    ) -> Result<(StressAssignment, f64)> {
        check_line(self)?;
        let product = self.variant_product();
        if product > options.brute_force_cap as u128 {
            return Err(Error::CapExceeded {
                product,
                cap: options.brute_force_cap,
            });
        }
        let sizes: Vec<usize> = self.segments.iter().map(|s| s.alternatives.len()).collect();
        let mut choice = vec![0; sizes.len()];
        let mut winner: Option<(StressAssignment, f64)> = None;
        loop {
            let a = self.assignment(&choice);
            let score = line_score(&a, template, &options.weights);
            if winner
                .as_ref()
                .is_none_or(|(wa, ws)| better((score, &a), (*ws, wa)))
            {
                winner = Some((a, score));
            }
            // odometer, last segment fastest
            let mut k = sizes.len();
            loop {
                if k == 0 {
                    return Ok(winner.expect("at least one assignment"));
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < sizes[k] {
                    break;
                }
                choice[k] = 0;
            }
        }
    }
}

/// Within one key: cheaper, then fewer stressed function words, then leftmost stress.
fn rank(a: &State, b: &State) -> Ordering {
    a.cost
        .cmp(&b.cost)
        .then(a.function_stressed.cmp(&b.function_stressed))
        .then_with(|| pattern_order(&a.pattern, &b.pattern))
}

fn state_before(a: &State, b: &State) -> bool {
    rank(a, b) == Ordering::Less
}

/// Best assignment of `line` under `template` by beam search.
pub fn beam_scan_line(
    line: &str,
    lex: &Lexicon,
    template: &MeterTemplate,
    options: &ScanOptions,
) -> Result<(StressAssignment, f64)> {
    Lattice::build(line, lex, options)?.beam(template, options)
}

/// Best assignment of `line` under `template` by trying every combination.
pub fn brute_scan_line(
    line: &str,
    lex: &Lexicon,
    template: &MeterTemplate,
    options: &ScanOptions,
) -> Result<(StressAssignment, f64)> {
    Lattice::build(line, lex, options)?.brute(template, options)
}
