//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns a JSON string,
//! `{"error": ...}` on bad input. The same functions run natively for testing.

use std::sync::OnceLock;

use metrum::config::Weights;
use metrum::phonetics::clausula;
use metrum::rhyme::rhyme_score;
use metrum::scansion::{defects, emit_markup, Lattice};
use metrum::{analyze, Config, Lexicon, Meter, MeterTemplate};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

fn lexicon() -> &'static Lexicon {
    static LEX: OnceLock<Lexicon> = OnceLock::new();
    LEX.get_or_init(Lexicon::bundled)
}

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

/// Stress marks, meter, per-line scores and rhyme scheme of a poem.
pub fn analyze_poem(text: &str) -> Result<Value, String> {
    let poem = analyze(text, lexicon(), &Config::default()).map_err(|e| e.to_string())?;
    let mut doc = poem.to_json();
    doc["template_means"] = json!(Meter::ALL[..5]
        .iter()
        .zip(poem.template_means)
        .map(|(m, v)| (m.name().to_string(), json!(v)))
        .collect::<serde_json::Map<_, _>>());
    Ok(doc)
}

/// Rhyme strength between the endings of two lines, each scanned on its own.
pub fn rhyme_lines(a: &str, b: &str) -> Result<Value, String> {
    let config = Config::default();
    let tail = |line: &str| {
        let poem = analyze(line, lexicon(), &config).map_err(|e| e.to_string())?;
        let l = poem.lines.first().ok_or("line has no syllables")?;
        clausula(&l.tokens, &l.assignment).map_err(|e| e.to_string())
    };
    let (ta, tb) = (tail(a)?, tail(b)?);
    let score = rhyme_score(&ta, &tb).map_err(|e| e.to_string())?;
    Ok(json!({
        "a": ta.to_string(),
        "b": tb.to_string(),
        "score": score,
        "rhymes": score >= config.rhyme.threshold,
    }))
}

/// Best scansion of one line under a chosen meter and defect weights.
pub fn score_line(
    line: &str,
    meter: &str,
    off_ictus: f64,
    off_ictus_mono: f64,
    avoidable_miss: f64,
) -> Result<Value, String> {
    let template = Meter::from_name(meter)
        .and_then(Meter::template)
        .ok_or_else(|| format!("unknown meter {meter:?}"))?;
    let mut config = Config::default();
    config.scan.weights = Weights {
        off_ictus,
        off_ictus_mono,
        avoidable_miss,
    };
    config.validate().map_err(|e| e.to_string())?;
    let lattice = Lattice::build(line, lexicon(), &config.scan).map_err(|e| e.to_string())?;
    let (assignment, score) = lattice
        .beam(&template, &config.scan)
        .map_err(|e| e.to_string())?;
    let d = defects(&assignment, &template);
    let pattern: String = (0..assignment.stressed.len())
        .map(|i| match (assignment.stressed[i], template.is_ictus(i)) {
            (true, true) => '/',
            (true, false) => '!',
            (false, true) => '_',
            (false, false) => '.',
        })
        .collect();
    Ok(json!({
        "marked": emit_markup(line, &lattice.tokens, &assignment),
        "score": score,
        "pattern": pattern,
        "off_ictus": d.off_ictus,
        "off_ictus_mono": d.off_ictus_mono,
        "avoidable_miss": d.avoidable_miss,
        "strong_positions": d.n_ictus,
    }))
}

/// Meter names accepted by [`score_line`], in template order.
pub fn meters() -> Vec<&'static str> {
    MeterTemplate::ALL.iter().map(|t| t.meter.name()).collect()
}

#[wasm_bindgen(js_name = analyzePoem)]
pub fn analyze_poem_js(text: &str) -> String {
    respond(analyze_poem(text))
}

#[wasm_bindgen(js_name = rhymeLines)]
pub fn rhyme_lines_js(a: &str, b: &str) -> String {
    respond(rhyme_lines(a, b))
}

#[wasm_bindgen(js_name = scoreLine)]
pub fn score_line_js(
    line: &str,
    meter: &str,
    off_ictus: f64,
    off_ictus_mono: f64,
    avoidable_miss: f64,
) -> String {
    respond(score_line(
        line,
        meter,
        off_ictus,
        off_ictus_mono,
        avoidable_miss,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poem() {
        let doc = analyze_poem("Мороз и солнце; день чудесный!\nЕще ты дремлешь, друг прелестный")
            .unwrap();
        assert_eq!(doc["meter"], "iamb");
        assert_eq!(doc["rhyme_scheme"], "AA");
        assert_eq!(doc["template_means"]["iamb"], 1.0);
        assert!(analyze_poem("").is_err());
    }

    #[test]
    fn rhyme() {
        let doc = rhyme_lines("Белеет парус одинокой", "Что ищет он в стране далёкой?").unwrap();
        assert_eq!(doc["score"], 1.0);
        assert_eq!(doc["rhymes"], true);
        let doc = rhyme_lines("мороз", "солнце").unwrap();
        assert_eq!(doc["rhymes"], false);
    }

    #[test]
    fn line() {
        let doc = score_line("Мороз и солнце; день чудесный", "iamb", 1.0, 0.5, 1.0).unwrap();
        assert_eq!(doc["score"], 1.0);
        assert_eq!(doc["pattern"], "././././.");
        let doc = score_line("Мороз и солнце; день чудесный", "trochee", 1.0, 0.5, 1.0).unwrap();
        assert_eq!(doc["off_ictus"], 3);
        assert!(score_line("мороз", "spondee", 1.0, 0.5, 1.0).is_err());
        assert!(score_line("мороз", "iamb", -1.0, 0.5, 1.0).is_err());
        assert!(respond(score_line("", "iamb", 1.0, 0.5, 1.0)).contains("error"));
        assert_eq!(
            meters(),
            ["trochee", "iamb", "dactyl", "amphibrach", "anapest"]
        );
    }
}
