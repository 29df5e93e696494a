//! Rhyme strength between clausulae and rhyme-scheme induction.
//!
//! Two clausulae are compared by a weighted edit distance aligned at the stressed
//! vowel. Near substitutions cost 0.25: consonants differing only in voicing or only in
//! softness, and vowels that merge when unstressed (/i/~/ɨ/~reduced /i/, /a/~/o/~reduced
//! /a/, /e/~reduced /i/, and the reduced vowels with each other). Other substitutions and
//! insertions/deletions cost 1. The score is `1 − distance / longer length`, and is 0
//! outright when the stressed vowels differ.

use std::fmt;
use std::str::FromStr;

use crate::config::RhymeOptions;
use crate::error::{Error, Result};
use crate::phonetics::{clausula, Phone, PhoneSeq, Vowel};
use crate::scansion::PoemScansion;

const NEAR: f64 = 0.25;

/// One label per line: `A`, `B`, ... in order of first appearance, `-` for unrhymed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RhymeScheme {
    pub labels: Vec<char>,
}

impl RhymeScheme {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Relabels classes in order of first appearance and turns one-line classes into `-`.
    pub fn canonical(&self) -> RhymeScheme {
        let groups: Vec<Option<char>> = self
            .labels
            .iter()
            .map(|&c| (c != '-').then_some(c))
            .collect();
        from_groups(&groups)
    }

    /// Whether the labels already satisfy the first-appearance and no-singleton rules.
    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }
}

impl fmt::Display for RhymeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.labels.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

impl FromStr for RhymeScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(c) = s.chars().find(|&c| !(c.is_ascii_uppercase() || c == '-')) {
            return Err(Error::Validation(format!(
                "invalid rhyme label {c:?} in {s:?}"
            )));
        }
        Ok(RhymeScheme {
            labels: s.chars().collect(),
        })
    }
}

/// Letters by first appearance over arbitrary class ids; `None` and singletons get `-`.
/// Classes beyond the 26th also get `-`.
fn from_groups<T: PartialEq + Copy>(groups: &[Option<T>]) -> RhymeScheme {
    let mut seen: Vec<T> = Vec::new();
    let labels = groups
        .iter()
        .map(|g| {
            let Some(g) = *g else { return '-' };
            if groups.iter().filter(|h| **h == Some(g)).count() < 2 {
                return '-';
            }
            let k = seen.iter().position(|&s| s == g).unwrap_or_else(|| {
                seen.push(g);
                seen.len() - 1
            });
            if k < 26 {
                (b'A' + k as u8) as char
            } else {
                '-'
            }
        })
        .collect();
    RhymeScheme { labels }
}

/// Scheme whose classes are the connected components of the given rhyming pairs.
pub fn scheme_from_pairs(n_lines: usize, pairs: &[(usize, usize)]) -> RhymeScheme {
    let mut parent: Vec<usize> = (0..n_lines).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in pairs {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let groups: Vec<Option<usize>> = (0..n_lines).map(|i| Some(root(&mut parent, i))).collect();
    from_groups(&groups)
}

fn near_vowels(a: Vowel, b: Vowel) -> bool {
    use Vowel::*;
    let pair = |x, y| (a == x && b == y) || (a == y && b == x);
    pair(I, Y)
        || pair(I, ReducedI)
        || pair(Y, ReducedI)
        || pair(A, ReducedA)
        || pair(O, ReducedA)
        || pair(E, ReducedI)
        || pair(ReducedA, ReducedI)
        || pair(ReducedA, Y)
}

fn substitution(a: Phone, b: Phone) -> f64 {
    if a == b {
        return 0.0;
    }
    match (a, b) {
        (Phone::Vowel(x), Phone::Vowel(y)) if near_vowels(x, y) => NEAR,
        (Phone::Cons { base: x, soft: sx }, Phone::Cons { base: y, soft: sy }) => {
            let one_feature = (x == y && sx != sy) || (x.voicing_partner() == Some(y) && sx == sy);
            if one_feature {
                NEAR
            } else {
                1.0
            }
        }
        _ => 1.0,
    }
}

fn distance(a: &[Phone], b: &[Phone]) -> f64 {
    let mut prev: Vec<f64> = (0..=b.len()).map(|j| j as f64).collect();
    let mut cur = vec![0.0; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i as f64;
        for j in 1..=b.len() {
            cur[j] = (prev[j - 1] + substitution(a[i - 1], b[j - 1]))
                .min(prev[j] + 1.0)
                .min(cur[j - 1] + 1.0);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn head_quality(s: &PhoneSeq) -> Option<char> {
    let i = s.stress_index.unwrap_or(0);
    match s.phones.get(i) {
        Some(Phone::Vowel(v)) => Some(v.quality()),
        _ => None,
    }
}

/// Rhyme strength of two clausulae in `[0, 1]`.
pub fn rhyme_score(a: &PhoneSeq, b: &PhoneSeq) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("empty clausula".into()));
    }
    if a.phones == b.phones {
        return Ok(1.0);
    }
    if head_quality(a) != head_quality(b) {
        return Ok(0.0);
    }
    let d = distance(&a.phones, &b.phones);
    Ok((1.0 - d / a.len().max(b.len()) as f64).clamp(0.0, 1.0))
}

/// Groups lines whose clausulae rhyme within `options.max_distance` lines of each other.
pub fn detect_scheme(poem: &PoemScansion, options: &RhymeOptions) -> Result<RhymeScheme> {
    let tails = poem
        .lines
        .iter()
        .map(|l| clausula(&l.tokens, &l.assignment))
        .collect::<Result<Vec<_>>>()?;
    Ok(scheme_from_clausulae(&tails, options))
}

pub fn scheme_from_clausulae(tails: &[PhoneSeq], options: &RhymeOptions) -> RhymeScheme {
    let mut pairs = Vec::new();
    for i in 0..tails.len() {
        for j in i + 1..tails.len().min(i + options.max_distance + 1) {
            if rhyme_score(&tails[i], &tails[j]).unwrap_or(0.0) >= options.threshold {
                pairs.push((i, j));
            }
        }
    }
    scheme_from_pairs(tails.len(), &pairs)
}
