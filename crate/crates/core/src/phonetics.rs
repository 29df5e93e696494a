//! Syllable bookkeeping and a small rule-based phonetizer for rhyme comparison.
//!
//! The phonetizer is not a full transcription. It applies, in order:
//!
//! | step | rule |
//! |------|------|
//! | 1 | ё is always /o/ and carries the stress |
//! | 2 | iotated vowels (е ё ю я, и after ь) give /j/ + vowel at word start, after a vowel or after ь/ъ, and soften a preceding consonant otherwise |
//! | 3 | unstressed о, а → reduced /a/; unstressed е, я, и, э → reduced /i/ (ikanye) |
//! | 4 | и after ж ш ц is /ɨ/ |
//! | 5 | г in the endings -ого/-его is /v/ (except a few adverbs such as "много") |
//! | 6 | a word-final voiced obstruent is devoiced |
//! | 7 | regressive voicing assimilation inside obstruent clusters (в never voices its neighbour) |
//! | 8 | doubled consonants collapse to one |
//! | 9 | ь folds into the palatalization of the preceding consonant |

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::lexicon::yo_syllable;
use crate::scansion::StressAssignment;
use crate::text::{count_vowels, is_vowel, normalize, Token};

pub fn count_syllables(word: &str) -> usize {
    count_vowels(word)
}

/// Global syllable coordinates of the tokens of one line.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SyllableMap {
    pub tokens: Vec<String>,
    pub spans: Vec<Range<usize>>,
    pub total_syllables: usize,
}

impl SyllableMap {
    pub fn token_syllables(&self, token: usize) -> usize {
        self.spans[token].len()
    }

    /// Token owning global syllable `syllable`.
    pub fn token_at(&self, syllable: usize) -> Option<usize> {
        self.spans.iter().position(|s| s.contains(&syllable))
    }
}

pub fn build_syllable_map<S: AsRef<str>>(tokens: &[S]) -> SyllableMap {
    let mut spans = Vec::with_capacity(tokens.len());
    let mut at = 0;
    for t in tokens {
        let n = count_syllables(t.as_ref());
        spans.push(at..at + n);
        at += n;
    }
    SyllableMap {
        tokens: tokens.iter().map(|t| t.as_ref().to_string()).collect(),
        spans,
        total_syllables: at,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vowel {
    A,
    O,
    U,
    I,
    /// ɨ
    Y,
    E,
    /// Unstressed а/о.
    ReducedA,
    /// Unstressed е/я/и/э.
    ReducedI,
}

impl Vowel {
    /// Quality used when comparing stressed vowels: ɨ counts as a variant of /i/.
    pub fn quality(self) -> char {
        match self {
            Vowel::A | Vowel::ReducedA => 'a',
            Vowel::O => 'o',
            Vowel::U => 'u',
            Vowel::I | Vowel::Y | Vowel::ReducedI => 'i',
            Vowel::E => 'e',
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Vowel::A | Vowel::ReducedA => "a",
            Vowel::O => "o",
            Vowel::U => "u",
            Vowel::I | Vowel::ReducedI => "i",
            Vowel::Y => "ɨ",
            Vowel::E => "e",
        }
    }

    fn stressed_symbol(self) -> &'static str {
        match self {
            Vowel::A | Vowel::ReducedA => "á",
            Vowel::O => "ó",
            Vowel::U => "ú",
            Vowel::I | Vowel::ReducedI => "í",
            Vowel::Y => "ɨ́",
            Vowel::E => "é",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    P,
    B,
    T,
    D,
    K,
    G,
    F,
    V,
    S,
    Z,
    Sh,
    Zh,
    X,
    Ts,
    Ch,
    Shch,
    M,
    N,
    L,
    R,
}

impl Base {
    fn from_letter(c: char) -> Option<Base> {
        Some(match c {
            'п' => Base::P,
            'б' => Base::B,
            'т' => Base::T,
            'д' => Base::D,
            'к' => Base::K,
            'г' => Base::G,
            'ф' => Base::F,
            'в' => Base::V,
            'с' => Base::S,
            'з' => Base::Z,
            'ш' => Base::Sh,
            'ж' => Base::Zh,
            'х' => Base::X,
            'ц' => Base::Ts,
            'ч' => Base::Ch,
            'щ' => Base::Shch,
            'м' => Base::M,
            'н' => Base::N,
            'л' => Base::L,
            'р' => Base::R,
            _ => return None,
        })
    }

    pub fn is_obstruent(self) -> bool {
        !matches!(self, Base::M | Base::N | Base::L | Base::R)
    }

    pub fn is_voiced(self) -> bool {
        matches!(
            self,
            Base::B | Base::D | Base::G | Base::V | Base::Z | Base::Zh
        )
    }

    /// Voiced/voiceless partner, if the inventory has one.
    pub fn voicing_partner(self) -> Option<Base> {
        Some(match self {
            Base::P => Base::B,
            Base::B => Base::P,
            Base::T => Base::D,
            Base::D => Base::T,
            Base::K => Base::G,
            Base::G => Base::K,
            Base::F => Base::V,
            Base::V => Base::F,
            Base::S => Base::Z,
            Base::Z => Base::S,
            Base::Sh => Base::Zh,
            Base::Zh => Base::Sh,
            _ => return None,
        })
    }

    fn devoiced(self) -> Base {
        if self.is_voiced() {
            self.voicing_partner().unwrap_or(self)
        } else {
            self
        }
    }

    fn voiced(self) -> Base {
        if !self.is_voiced() {
            self.voicing_partner().unwrap_or(self)
        } else {
            self
        }
    }

    /// ж ш ц never palatalize.
    fn always_hard(self) -> bool {
        matches!(self, Base::Sh | Base::Zh | Base::Ts)
    }

    fn always_soft(self) -> bool {
        matches!(self, Base::Ch | Base::Shch)
    }

    fn symbol(self) -> &'static str {
        match self {
            Base::P => "p",
            Base::B => "b",
            Base::T => "t",
            Base::D => "d",
            Base::K => "k",
            Base::G => "g",
            Base::F => "f",
            Base::V => "v",
            Base::S => "s",
            Base::Z => "z",
            Base::Sh => "š",
            Base::Zh => "ž",
            Base::X => "x",
            Base::Ts => "c",
            Base::Ch => "č",
            Base::Shch => "šč",
            Base::M => "m",
            Base::N => "n",
            Base::L => "l",
            Base::R => "r",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phone {
    Vowel(Vowel),
    Cons { base: Base, soft: bool },
    J,
}

impl Phone {
    pub fn is_vowel(self) -> bool {
        matches!(self, Phone::Vowel(_))
    }
}

impl fmt::Display for Phone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Phone::Vowel(v) => f.write_str(v.symbol()),
            Phone::Cons { base, soft } => {
                f.write_str(base.symbol())?;
                if soft && !base.always_soft() {
                    f.write_str("'")?;
                }
                Ok(())
            }
            Phone::J => f.write_str("j"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PhoneSeq {
    pub phones: Vec<Phone>,
    /// Index into `phones` of the stressed vowel.
    pub stress_index: Option<usize>,
}

impl PhoneSeq {
    pub fn len(&self) -> usize {
        self.phones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phones.is_empty()
    }

    pub fn vowel_count(&self) -> usize {
        self.phones.iter().filter(|p| p.is_vowel()).count()
    }

    pub fn stressed_vowel(&self) -> Option<Vowel> {
        match self.phones.get(self.stress_index?) {
            Some(Phone::Vowel(v)) => Some(*v),
            _ => None,
        }
    }

    /// The tail starting at phone `from`, with the stress index rebased.
    pub fn suffix(&self, from: usize) -> PhoneSeq {
        PhoneSeq {
            phones: self.phones[from..].to_vec(),
            stress_index: self.stress_index.and_then(|s| s.checked_sub(from)),
        }
    }

    pub fn append(&mut self, other: &PhoneSeq) {
        self.phones.extend_from_slice(&other.phones);
    }
}

impl fmt::Display for PhoneSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.phones.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match p {
                Phone::Vowel(v) if Some(i) == self.stress_index => {
                    f.write_str(v.stressed_symbol())?
                }
                p => write!(f, "{p}")?,
            }
        }
        Ok(())
    }
}

const GENITIVE_EXCEPTIONS: &[&str] = &[
    "много",
    "немного",
    "строго",
    "убого",
    "дорого",
    "недорого",
    "полого",
    "отлого",
    "ого",
];

/// Phonetizes one word. `stress` is a 1-based syllable index, or `None` for an
/// unstressed realization (a word with ё is stressed on ё either way).
pub fn phonetize(word: &str, stress: Option<usize>) -> Result<PhoneSeq> {
    let word = normalize(word);
    let n = count_syllables(&word);
    if let Some(s) = stress {
        if s == 0 || s > n {
            return Err(Error::StressOutOfRange {
                word,
                position: s,
                syllables: n,
            });
        }
    }
    let stress = stress.or_else(|| yo_syllable(&word));

    let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
    let mut phones: Vec<Phone> = Vec::with_capacity(letters.len() + 2);
    let mut stress_index = None;
    let mut syllable = 0;
    // what the previous letter was, for iotation and softening
    let mut after_vowel_or_start = true;
    let mut after_sign = false;
    for &c in &letters {
        if let Some(base) = Base::from_letter(c) {
            phones.push(Phone::Cons {
                base,
                soft: base.always_soft(),
            });
            after_vowel_or_start = false;
            after_sign = false;
            continue;
        }
        match c {
            'й' => {
                phones.push(Phone::J);
                after_vowel_or_start = false;
                after_sign = false;
            }
            'ь' => {
                soften_last(&mut phones);
                after_sign = true;
            }
            'ъ' => after_sign = true,
            c if is_vowel(c) => {
                syllable += 1;
                let stressed = Some(syllable) == stress;
                let iotated = matches!(c, 'е' | 'ё' | 'ю' | 'я');
                let prev_hard_hissing = matches!(
                    phones.last(),
                    Some(Phone::Cons { base, .. }) if base.always_hard()
                ) && !after_sign;
                if iotated || c == 'и' {
                    if after_vowel_or_start || after_sign {
                        if iotated || after_sign {
                            phones.push(Phone::J);
                        }
                    } else {
                        soften_last(&mut phones);
                    }
                }
                let full = match c {
                    'а' | 'я' => Vowel::A,
                    'о' | 'ё' => Vowel::O,
                    'у' | 'ю' => Vowel::U,
                    'ы' => Vowel::Y,
                    'и' if prev_hard_hissing => Vowel::Y,
                    'и' => Vowel::I,
                    _ => Vowel::E,
                };
                let vowel = if stressed || c == 'ё' {
                    full
                } else {
                    match c {
                        'о' | 'а' => Vowel::ReducedA,
                        'е' | 'я' | 'э' => Vowel::ReducedI,
                        'и' if prev_hard_hissing => Vowel::Y,
                        'и' => Vowel::ReducedI,
                        _ => full,
                    }
                };
                if stressed {
                    stress_index = Some(phones.len());
                }
                phones.push(Phone::Vowel(vowel));
                after_vowel_or_start = true;
                after_sign = false;
            }
            _ => {}
        }
    }

    genitive_v(&word, &mut phones);
    devoice_final(&mut phones);
    assimilate_voicing(&mut phones);
    collapse_doubles(&mut phones, &mut stress_index);
    Ok(PhoneSeq {
        phones,
        stress_index,
    })
}

/// The rhyming tail of a line: from the last stressed vowel to the end, each word
/// phonetized on its own and concatenated. A line without stress falls back to its
/// final syllable.
pub fn clausula(tokens: &[Token], assignment: &StressAssignment) -> Result<PhoneSeq> {
    let stresses = assignment.token_stresses();
    let words: Vec<usize> = (0..tokens.len()).filter(|&i| tokens[i].is_word()).collect();
    let Some(&last_syllabic) = words.iter().rev().find(|&&i| tokens[i].syllables() > 0) else {
        return Err(Error::EmptyLine);
    };
    let (anchor, mut seq) = match words
        .iter()
        .rev()
        .find(|&&i| stresses.get(i).copied().flatten().is_some())
    {
        Some(&i) => {
            let p = phonetize(&tokens[i].text, stresses[i])?;
            let from = p.stress_index.expect("stressed word has a stressed vowel");
            (i, p.suffix(from))
        }
        None => {
            let p = phonetize(&tokens[last_syllabic].text, None)?;
            let from = p
                .phones
                .iter()
                .rposition(|ph| ph.is_vowel())
                .expect("syllabic word");
            (last_syllabic, p.suffix(from))
        }
    };
    for &i in words.iter().filter(|&&i| i > anchor) {
        seq.append(&phonetize(&tokens[i].text, None)?);
    }
    Ok(seq)
}

fn soften_last(phones: &mut [Phone]) {
    if let Some(Phone::Cons { base, soft }) = phones.last_mut() {
        if !base.always_hard() {
            *soft = true;
        }
    }
}

fn genitive_v(word: &str, phones: &mut [Phone]) {
    let ending = word.ends_with("ого") || word.ends_with("его");
    if !ending || GENITIVE_EXCEPTIONS.contains(&word) || word.chars().count() < 3 {
        return;
    }
    // the consonant right before the final vowel
    let n = phones.len();
    if n >= 2 {
        if let Phone::Cons {
            base: b @ Base::G, ..
        } = &mut phones[n - 2]
        {
            *b = Base::V;
        }
    }
}

fn devoice_final(phones: &mut [Phone]) {
    if let Some(Phone::Cons { base, .. }) = phones.last_mut() {
        *base = base.devoiced();
    }
}

fn assimilate_voicing(phones: &mut [Phone]) {
    for i in (0..phones.len().saturating_sub(1)).rev() {
        let Phone::Cons { base: next, .. } = phones[i + 1] else {
            continue;
        };
        if !next.is_obstruent() {
            continue;
        }
        if let Phone::Cons { base, .. } = &mut phones[i] {
            if !base.is_obstruent() {
                continue;
            }
            if !next.is_voiced() {
                *base = base.devoiced();
            } else if next != Base::V {
                *base = base.voiced();
            }
        }
    }
}

fn collapse_doubles(phones: &mut Vec<Phone>, stress_index: &mut Option<usize>) {
    let mut i = 1;
    while i < phones.len() {
        match (phones[i - 1], phones[i]) {
            (Phone::Cons { base: a, .. }, Phone::Cons { base: b, .. }) if a == b => {
                phones.remove(i - 1);
                if let Some(s) = stress_index.as_mut() {
                    if *s >= i {
                        *s -= 1;
                    }
                }
            }
            _ => i += 1,
        }
    }
}
