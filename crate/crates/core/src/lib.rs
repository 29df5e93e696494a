//! Scansion of Russian syllabo-tonic verse.
//!
//! The crate places stress marks adjusted to the poem's meter, scores each line's
//! metrical compliance ("technicality") in `[0, 1]`, detects the meter and the rhyme
//! scheme (including slant rhymes), and evaluates all of that against stress-annotated
//! fragments.
//!
//! The usual entry point is [`analyze`], which runs scansion and rhyme detection over a
//! poem with the bundled lexicon:
//!
//! ```
//! use metrum::{analyze, Config, Lexicon};
//!
//! let lex = Lexicon::bundled();
//! let poem = analyze("Мороз и солнце; день чудесный!", &lex, &Config::default()).unwrap();
//! assert_eq!(poem.lines[0].marked_text, "Моро\u{301}з и со\u{301}лнце; де\u{301}нь чуде\u{301}сный!");
//! ```

pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod phonetics;
pub mod rhyme;
pub mod scansion;
pub mod text;

pub use config::{Config, RhymeOptions, ScanOptions};
pub use error::{Error, Result};
pub use lexicon::{AccentEntry, CollocationRule, Lexicon, LexiconConfig};
pub use phonetics::{PhoneSeq, SyllableMap};
pub use rhyme::RhymeScheme;
pub use scansion::{LineScansion, Meter, MeterTemplate, PoemScansion, StressAssignment};

/// Scans a poem and fills in its rhyme scheme.
pub fn analyze(text: &str, lex: &Lexicon, config: &Config) -> Result<PoemScansion> {
    let mut poem = scansion::scan_poem(text, lex, &config.scan)?;
    poem.rhyme_scheme = Some(rhyme::detect_scheme(&poem, &config.rhyme)?);
    Ok(poem)
}
