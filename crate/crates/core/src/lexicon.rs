//! Accent dictionary, closed-class word list, collocation exceptions and the
//! out-of-vocabulary stress predictor.
//!
//! File formats (UTF-8, `#` starts a comment line):
//!
//! * lexicon: `surface<TAB>syllables<TAB>pos1[,pos2...]<TAB>flags`, where flags is `-`
//!   or a comma list of `func` and `pos:<TAG>`;
//! * function words: one surface per line;
//! * collocations: `word1 word2 [word3]<TAB>stressed word index<TAB>stress syllable`;
//! * prefix rules: `prefix<TAB>stem` or `prefix<TAB>prefix:N`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::text::{count_vowels, fold_yo, is_vowel, is_yo, normalize};

const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.tsv");
const BUNDLED_FUNCTION_WORDS: &str = include_str!("../data/function_words.txt");
const BUNDLED_COLLOCATIONS: &str = include_str!("../data/collocations.tsv");
const BUNDLED_PREFIX_RULES: &str = include_str!("../data/prefix_rules.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccentEntry {
    pub surface: String,
    pub n_syllables: usize,
    /// 1-based syllable indices, never empty.
    pub stress_positions: BTreeSet<usize>,
    pub is_function_word: bool,
    pub pos_hint: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollocationRule {
    pub pattern: Vec<String>,
    /// 1-based index of the word that carries the phrase's only stress.
    pub stressed_index: usize,
    /// 1-based syllable within that word.
    pub stress_position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixAction {
    /// Stress the given (1-based) syllable of the prefix itself.
    StressPrefix(usize),
    /// Keep the stress of the remainder, which must be a known word.
    KeepStem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixRule {
    pub prefix: String,
    pub action: PrefixAction,
}

/// Where the auxiliary tables come from. `None` means the bundled table.
#[derive(Debug, Clone, Default)]
pub struct LexiconConfig {
    pub function_words: Option<PathBuf>,
    pub collocations: Option<PathBuf>,
    pub prefix_rules: Option<PathBuf>,
    /// Abort on the first malformed record instead of collecting it.
    pub strict: bool,
}

/// Record-level problems found while loading. Loading continues past them unless strict.
#[derive(Debug, Default)]
pub struct LoadReport {
    pub records: usize,
    pub errors: Vec<Error>,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, AccentEntry>,
    /// ё-folded spelling -> surface, for entries whose surface contains ё.
    folded: HashMap<String, String>,
    collocations: HashMap<String, Vec<CollocationRule>>,
    function_words: HashSet<String>,
    prefix_rules: Vec<PrefixRule>,
}

impl Lexicon {
    /// The starter lexicon and tables shipped with the crate.
    pub fn bundled() -> Lexicon {
        let mut report = LoadReport::default();
        let mut lex = Lexicon::default();
        lex.add_entries(BUNDLED_LEXICON, "lexicon.tsv", true, &mut report)
            .and_then(|_| lex.add_function_words(BUNDLED_FUNCTION_WORDS))
            .and_then(|_| {
                lex.add_collocations(BUNDLED_COLLOCATIONS, "collocations.tsv", true, &mut report)
            })
            .and_then(|_| {
                lex.add_prefix_rules(BUNDLED_PREFIX_RULES, "prefix_rules.tsv", true, &mut report)
            })
            .expect("bundled lexicon data is valid");
        lex.finish();
        lex
    }

    /// Loads a lexicon TSV plus the auxiliary tables named in `config`.
    pub fn load(path: &Path, config: &LexiconConfig) -> Result<(Lexicon, LoadReport)> {
        let mut report = LoadReport::default();
        let mut lex = Lexicon::default();
        let name = path.display().to_string();
        lex.add_entries(&read(path)?, &name, config.strict, &mut report)?;

        let words = match &config.function_words {
            Some(p) => read(p)?,
            None => BUNDLED_FUNCTION_WORDS.to_string(),
        };
        lex.add_function_words(&words)?;

        let (colloc, colloc_name) = match &config.collocations {
            Some(p) => (read(p)?, p.display().to_string()),
            None => (BUNDLED_COLLOCATIONS.to_string(), "collocations.tsv".into()),
        };
        lex.add_collocations(&colloc, &colloc_name, config.strict, &mut report)?;

        let (rules, rules_name) = match &config.prefix_rules {
            Some(p) => (read(p)?, p.display().to_string()),
            None => (BUNDLED_PREFIX_RULES.to_string(), "prefix_rules.tsv".into()),
        };
        lex.add_prefix_rules(&rules, &rules_name, config.strict, &mut report)?;

        lex.finish();
        Ok((lex, report))
    }

    /// Parses lexicon TSV text directly; tables other than the entries are left empty.
    pub fn from_tsv(text: &str, strict: bool) -> Result<(Lexicon, LoadReport)> {
        let mut report = LoadReport::default();
        let mut lex = Lexicon::default();
        lex.add_entries(text, "<memory>", strict, &mut report)?;
        lex.finish();
        Ok((lex, report))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &AccentEntry> {
        self.entries.values()
    }

    pub fn function_words(&self) -> impl Iterator<Item = &str> {
        self.function_words.iter().map(String::as_str)
    }

    pub fn collocations(&self) -> impl Iterator<Item = &CollocationRule> {
        self.collocations.values().flatten()
    }

    pub fn prefix_rules(&self) -> &[PrefixRule] {
        &self.prefix_rules
    }

    /// Case-insensitive lookup. Text written with е in place of ё still finds the entry.
    pub fn lookup(&self, word: &str) -> Option<&AccentEntry> {
        let key = normalize(word);
        if let Some(e) = self.entries.get(&key) {
            return Some(e);
        }
        self.folded.get(&key).and_then(|s| self.entries.get(s))
    }

    pub fn is_function_word(&self, word: &str) -> bool {
        self.function_words.contains(&normalize(word))
    }

    /// Longest collocation rule whose pattern equals `tokens[start..start + len]`.
    pub fn match_collocation(
        &self,
        tokens: &[&str],
        start: usize,
    ) -> Option<(&CollocationRule, usize)> {
        let first = normalize(tokens.get(start)?);
        self.collocations
            .get(&first)?
            .iter()
            .filter(|rule| {
                let n = rule.pattern.len();
                start + n <= tokens.len()
                    && rule
                        .pattern
                        .iter()
                        .zip(&tokens[start..start + n])
                        .all(|(p, t)| *p == normalize(t))
            })
            .max_by_key(|rule| rule.pattern.len())
            .map(|rule| (rule, rule.pattern.len()))
    }

    /// Candidate stress positions for a word missing from the dictionary, most likely
    /// first. ё decides alone; otherwise prefix rules are tried, then a penultimate-first
    /// fallback that lists every syllable by distance from the penult.
    pub fn predict_oov_stress(&self, word: &str) -> Result<Vec<usize>> {
        let word = normalize(word);
        let n = count_vowels(&word);
        if n == 0 {
            return Err(Error::NoVowel(word));
        }
        if let Some(yo) = yo_syllable(&word) {
            return Ok(vec![yo]);
        }
        if n == 1 {
            return Ok(vec![1]);
        }
        for rule in &self.prefix_rules {
            let Some(rest) = word.strip_prefix(rule.prefix.as_str()) else {
                continue;
            };
            if count_vowels(rest) == 0 {
                continue;
            }
            let shift = count_vowels(&rule.prefix);
            match rule.action {
                PrefixAction::StressPrefix(k) if k >= 1 && k <= shift => return Ok(vec![k]),
                PrefixAction::StressPrefix(_) => {}
                PrefixAction::KeepStem => {
                    if let Some(stem) = self.lookup(rest) {
                        return Ok(stem.stress_positions.iter().map(|p| p + shift).collect());
                    }
                }
            }
        }
        let penult = n - 1;
        let mut positions: Vec<usize> = (1..=n).collect();
        positions.sort_by_key(|&p| (p.abs_diff(penult), p));
        Ok(positions)
    }

    fn add_entries(
        &mut self,
        text: &str,
        file: &str,
        strict: bool,
        report: &mut LoadReport,
    ) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            if is_blank_or_comment(line) {
                continue;
            }
            match parse_entry(line) {
                Ok(entry) => {
                    report.records += 1;
                    self.insert(entry);
                }
                Err(message) => {
                    let err = Error::Record {
                        file: file.to_string(),
                        line: i + 1,
                        message,
                    };
                    if strict {
                        return Err(err);
                    }
                    report.errors.push(err);
                }
            }
        }
        Ok(())
    }

    fn insert(&mut self, entry: AccentEntry) {
        match self.entries.get_mut(&entry.surface) {
            Some(existing) => {
                existing.stress_positions.extend(entry.stress_positions);
                existing.is_function_word |= entry.is_function_word;
                if existing.pos_hint.is_none() {
                    existing.pos_hint = entry.pos_hint;
                }
            }
            None => {
                self.entries.insert(entry.surface.clone(), entry);
            }
        }
    }

    fn add_function_words(&mut self, text: &str) -> Result<()> {
        for line in text.lines() {
            if is_blank_or_comment(line) {
                continue;
            }
            self.function_words.insert(normalize(line.trim()));
        }
        Ok(())
    }

    fn add_collocations(
        &mut self,
        text: &str,
        file: &str,
        strict: bool,
        report: &mut LoadReport,
    ) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            if is_blank_or_comment(line) {
                continue;
            }
            match parse_collocation(line) {
                Ok(rule) => self
                    .collocations
                    .entry(rule.pattern[0].clone())
                    .or_default()
                    .push(rule),
                Err(message) => {
                    let err = Error::Record {
                        file: file.to_string(),
                        line: i + 1,
                        message,
                    };
                    if strict {
                        return Err(err);
                    }
                    report.errors.push(err);
                }
            }
        }
        Ok(())
    }

    fn add_prefix_rules(
        &mut self,
        text: &str,
        file: &str,
        strict: bool,
        report: &mut LoadReport,
    ) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            if is_blank_or_comment(line) {
                continue;
            }
            match parse_prefix_rule(line) {
                Ok(rule) => self.prefix_rules.push(rule),
                Err(message) => {
                    let err = Error::Record {
                        file: file.to_string(),
                        line: i + 1,
                        message,
                    };
                    if strict {
                        return Err(err);
                    }
                    report.errors.push(err);
                }
            }
        }
        Ok(())
    }

    fn finish(&mut self) {
        for word in &self.function_words {
            if let Some(e) = self.entries.get_mut(word) {
                e.is_function_word = true;
            }
        }
        self.folded = self
            .entries
            .keys()
            .filter(|s| s.contains('ё'))
            .map(|s| (fold_yo(s), s.clone()))
            .filter(|(f, _)| !self.entries.contains_key(f))
            .collect();
        // longer prefixes first; stable, so file order breaks ties
        self.prefix_rules
            .sort_by_key(|r| std::cmp::Reverse(r.prefix.chars().count()));
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn is_blank_or_comment(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

/// 1-based syllable holding ё, if any.
pub(crate) fn yo_syllable(word: &str) -> Option<usize> {
    let mut n = 0;
    for c in word.chars() {
        if is_vowel(c) {
            n += 1;
            if is_yo(c) {
                return Some(n);
            }
        }
    }
    None
}

fn parse_entry(line: &str) -> std::result::Result<AccentEntry, String> {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if !(3..=4).contains(&fields.len()) {
        return Err(format!(
            "expected 3 or 4 tab-separated fields, found {}",
            fields.len()
        ));
    }
    let surface = normalize(fields[0]);
    if surface.is_empty() {
        return Err("empty surface".into());
    }
    let n_syllables: usize = fields[1]
        .parse()
        .map_err(|_| format!("bad syllable count {:?}", fields[1]))?;
    let vowels = count_vowels(&surface);
    if n_syllables != vowels {
        return Err(format!(
            "{surface:?} has {vowels} vowels but {n_syllables} syllables declared"
        ));
    }
    let mut stress_positions = BTreeSet::new();
    for p in fields[2].split(',') {
        let p: usize = p
            .trim()
            .parse()
            .map_err(|_| format!("bad stress position {p:?}"))?;
        if p == 0 || p > n_syllables {
            return Err(format!(
                "stress position {p} outside 1..={n_syllables} for {surface:?}"
            ));
        }
        stress_positions.insert(p);
    }
    if let Some(yo) = yo_syllable(&surface) {
        if !stress_positions.contains(&yo) {
            return Err(format!(
                "{surface:?}: the ё syllable {yo} must be stressable"
            ));
        }
    }
    let mut is_function_word = false;
    let mut pos_hint = None;
    if let Some(flags) = fields.get(3) {
        for flag in flags.split(',').map(str::trim) {
            match flag {
                "" | "-" => {}
                "func" => is_function_word = true,
                f if f.starts_with("pos:") => pos_hint = Some(f[4..].to_string()),
                f => return Err(format!("unknown flag {f:?}")),
            }
        }
    }
    Ok(AccentEntry {
        surface,
        n_syllables,
        stress_positions,
        is_function_word,
        pos_hint,
    })
}

fn parse_collocation(line: &str) -> std::result::Result<CollocationRule, String> {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if fields.len() != 3 {
        return Err(format!(
            "expected 3 tab-separated fields, found {}",
            fields.len()
        ));
    }
    let pattern: Vec<String> = fields[0].split_whitespace().map(normalize).collect();
    if !(2..=3).contains(&pattern.len()) {
        return Err(format!(
            "pattern must have 2 or 3 words, found {}",
            pattern.len()
        ));
    }
    let stressed_index: usize = fields[1]
        .parse()
        .map_err(|_| format!("bad word index {:?}", fields[1]))?;
    if stressed_index == 0 || stressed_index > pattern.len() {
        return Err(format!("word index {stressed_index} outside the pattern"));
    }
    let stress_position: usize = fields[2]
        .parse()
        .map_err(|_| format!("bad stress position {:?}", fields[2]))?;
    let syllables = count_vowels(&pattern[stressed_index - 1]);
    if stress_position == 0 || stress_position > syllables {
        return Err(format!(
            "stress position {stress_position} outside 1..={syllables}"
        ));
    }
    Ok(CollocationRule {
        pattern,
        stressed_index,
        stress_position,
    })
}

fn parse_prefix_rule(line: &str) -> std::result::Result<PrefixRule, String> {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    if fields.len() != 2 || fields[0].is_empty() {
        return Err("expected `prefix<TAB>rule`".into());
    }
    let action = match fields[1] {
        "stem" => PrefixAction::KeepStem,
        r => match r.strip_prefix("prefix:").map(str::parse::<usize>) {
            Some(Ok(k)) if k >= 1 => PrefixAction::StressPrefix(k),
            _ => return Err(format!("unknown prefix rule {r:?}")),
        },
    };
    Ok(PrefixRule {
        prefix: normalize(fields[0]),
        action,
    })
}
