use crate::config::ScanOptions;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::phonetics::{build_syllable_map, SyllableMap};
use crate::text::{count_vowels, split_compound, tokenize, Token};

use super::{Origin, StressAssignment, WordVariant};

/// Words that must be chosen together: a single word, or a whole collocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    /// Token indices covered, in order.
    pub tokens: Vec<usize>,
    /// Each alternative lists one variant per covered token.
    pub alternatives: Vec<Vec<WordVariant>>,
}

/// All stress variants of one line, independent of the meter.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub tokens: Vec<Token>,
    pub syllable_map: SyllableMap,
    pub segments: Vec<Segment>,
    /// Stress positions offered for each token (empty for non-syllabic tokens).
    pub admissible: Vec<Vec<usize>>,
}

/// Stress variants of a single word out of context.
pub fn word_variants(
    token: &str,
    lex: &Lexicon,
    options: &ScanOptions,
) -> Result<Vec<WordVariant>> {
    if count_vowels(token) == 0 {
        return Err(Error::NoVowel(token.to_string()));
    }
    variants(0, token, lex, options, false)
}

fn variants(
    index: usize,
    word: &str,
    lex: &Lexicon,
    options: &ScanOptions,
    line_final: bool,
) -> Result<Vec<WordVariant>> {
    let make = |stress, origin, base_penalty, function_word| WordVariant {
        token: index,
        stress,
        origin,
        base_penalty,
        function_word,
    };
    let entry = lex.lookup(word);
    let mut out = Vec::new();
    if lex.is_function_word(word) {
        let positions: Vec<usize> = match entry {
            Some(e) => e.stress_positions.iter().copied().collect(),
            None => lex.predict_oov_stress(word)?.into_iter().take(1).collect(),
        };
        // at the end of a line a function word usually carries the rhyme stress
        let (unstressed, stressed) = if line_final {
            (options.unstress_preference, 0.0)
        } else {
            (0.0, options.unstress_preference)
        };
        out.push(make(None, Origin::FunctionUnstressed, unstressed, true));
        for p in positions {
            out.push(make(Some(p), Origin::Lexical, stressed, true));
        }
    } else if let Some(e) = entry {
        for &p in &e.stress_positions {
            out.push(make(Some(p), Origin::Lexical, 0.0, false));
        }
    } else {
        let candidates = lex.predict_oov_stress(word)?;
        for (i, &p) in candidates.iter().enumerate() {
            let penalty = if i == 0 { 0.0 } else { options.oov_alt_penalty };
            out.push(make(Some(p), Origin::OovRule, penalty, false));
        }
        if options.oov_fit_meter {
            for p in 1..=count_vowels(word) {
                if !candidates.contains(&p) {
                    out.push(make(
                        Some(p),
                        Origin::OovMeterFit,
                        options.oov_fit_penalty,
                        false,
                    ));
                }
            }
        }
    }
    if let Some(cutoff) = options.max_variant_penalty {
        let best = out
            .iter()
            .map(|v| v.base_penalty)
            .fold(f64::INFINITY, f64::min);
        out.retain(|v| v.base_penalty <= cutoff.max(best));
    }
    Ok(out)
}

/// Tokenizes a line, splitting hyphenated words the lexicon does not know as a whole.
pub fn line_tokens(line: &str, lex: &Lexicon) -> Vec<Token> {
    let mut out = Vec::new();
    for t in tokenize(line) {
        if t.is_word() && t.text.contains('-') && lex.lookup(&t.text).is_none() {
            out.extend(split_compound(&t));
        } else {
            out.push(t);
        }
    }
    out
}

impl Lattice {
    pub fn build(line: &str, lex: &Lexicon, options: &ScanOptions) -> Result<Lattice> {
        Lattice::from_tokens(line_tokens(line, lex), lex, options)
    }

    pub fn from_tokens(
        tokens: Vec<Token>,
        lex: &Lexicon,
        options: &ScanOptions,
    ) -> Result<Lattice> {
        let syllable_map =
            build_syllable_map(&tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>());
        let words: Vec<usize> = (0..tokens.len())
            .filter(|&i| tokens[i].is_word() && !syllable_map.spans[i].is_empty())
            .collect();
        let texts: Vec<&str> = words.iter().map(|&i| tokens[i].text.as_str()).collect();

        let mut segments = Vec::new();
        let mut k = 0;
        while k < words.len() {
            if let Some(seg) = collocation_segment(lex, &texts, &words, &syllable_map, k) {
                k += seg.tokens.len();
                segments.push(seg);
                continue;
            }
            let idx = words[k];
            let line_final = k + 1 == words.len();
            let alternatives = variants(idx, texts[k], lex, options, line_final)?
                .into_iter()
                .map(|v| vec![v])
                .collect();
            segments.push(Segment {
                tokens: vec![idx],
                alternatives,
            });
            k += 1;
        }

        let mut admissible = vec![Vec::new(); tokens.len()];
        for seg in &segments {
            for (j, &t) in seg.tokens.iter().enumerate() {
                let mut ps: Vec<usize> = seg
                    .alternatives
                    .iter()
                    .filter_map(|a| a[j].stress)
                    .collect();
                ps.sort_unstable();
                ps.dedup();
                admissible[t] = ps;
            }
        }
        Ok(Lattice {
            tokens,
            syllable_map,
            segments,
            admissible,
        })
    }

    pub fn total_syllables(&self) -> usize {
        self.syllable_map.total_syllables
    }

    /// Number of complete assignments, saturating.
    pub fn variant_product(&self) -> u128 {
        self.segments.iter().fold(1u128, |acc, s| {
            acc.saturating_mul(s.alternatives.len() as u128)
        })
    }

    /// Builds the assignment that takes alternative `choice[k]` of segment `k`.
    pub fn assignment(&self, choice: &[usize]) -> StressAssignment {
        let mut stressed = vec![false; self.total_syllables()];
        let mut chosen = Vec::new();
        let mut admissible = Vec::new();
        for (seg, &c) in self.segments.iter().zip(choice) {
            for v in &seg.alternatives[c] {
                if let Some(s) = v.stress {
                    stressed[self.syllable_map.spans[v.token].start + s - 1] = true;
                }
                admissible.push(self.admissible[v.token].clone());
                chosen.push(v.clone());
            }
        }
        StressAssignment {
            syllable_map: self.syllable_map.clone(),
            stressed,
            chosen,
            admissible,
        }
    }
}

fn collocation_segment(
    lex: &Lexicon,
    texts: &[&str],
    words: &[usize],
    map: &SyllableMap,
    k: usize,
) -> Option<Segment> {
    let (rule, len) = lex.match_collocation(texts, k)?;
    let stressed_token = words[k + rule.stressed_index - 1];
    if rule.stress_position > map.token_syllables(stressed_token) {
        return None;
    }
    let alternative = (0..len)
        .map(|j| {
            let token = words[k + j];
            let stress = (token == stressed_token).then_some(rule.stress_position);
            WordVariant {
                token,
                stress,
                origin: Origin::Collocation,
                base_penalty: 0.0,
                function_word: lex.is_function_word(texts[k + j]),
            }
        })
        .collect();
    Some(Segment {
        tokens: words[k..k + len].to_vec(),
        alternatives: vec![alternative],
    })
}
