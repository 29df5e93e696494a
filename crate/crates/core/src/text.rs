//! Character classes, tokenization and stress-mark handling.

/// U+0301 COMBINING ACUTE ACCENT, placed right after a stressed vowel letter.
pub const STRESS_MARK: char = '\u{301}';

const VOWELS: &str = "аеёиоуыэюяАЕЁИОУЫЭЮЯ";

pub fn is_vowel(c: char) -> bool {
    VOWELS.contains(c)
}

pub fn is_yo(c: char) -> bool {
    c == 'ё' || c == 'Ё'
}

pub fn count_vowels(s: &str) -> usize {
    s.chars().filter(|&c| is_vowel(c)).count()
}

/// Lowercases and drops stress marks, the form used for every lexicon lookup.
pub fn normalize(word: &str) -> String {
    word.chars()
        .filter(|&c| c != STRESS_MARK)
        .flat_map(char::to_lowercase)
        .collect()
}

/// Replaces ё with е, for matching text written without ё.
pub fn fold_yo(word: &str) -> String {
    word.replace('ё', "е")
}

/// Removes every U+0301 code point and nothing else.
pub fn strip_marks(text: &str) -> String {
    text.chars().filter(|&c| c != STRESS_MARK).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Punct,
}

/// A slice of a line. `start..end` are byte offsets into the line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub kind: TokenKind,
}

impl Token {
    fn new(line: &str, start: usize, end: usize, kind: TokenKind) -> Self {
        Token {
            text: line[start..end].to_string(),
            start,
            end,
            kind,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    pub fn syllables(&self) -> usize {
        count_vowels(&self.text)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == STRESS_MARK
}

/// Splits on whitespace, then peels leading and trailing punctuation off each chunk
/// into separate tokens. Hyphenated compounds stay whole.
pub fn tokenize(line: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chunk_start = None;
    for (i, c) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (c.is_whitespace(), chunk_start) {
            (true, Some(s)) => {
                split_chunk(line, s, i, &mut tokens);
                chunk_start = None;
            }
            (false, None) => chunk_start = Some(i),
            _ => {}
        }
    }
    tokens
}

fn split_chunk(line: &str, start: usize, end: usize, out: &mut Vec<Token>) {
    let chunk = &line[start..end];
    let first = chunk.char_indices().find(|&(_, c)| c.is_alphanumeric());
    let Some((first, _)) = first else {
        out.push(Token::new(line, start, end, TokenKind::Punct));
        return;
    };
    let (last, last_c) = chunk
        .char_indices()
        .rev()
        .find(|&(_, c)| is_word_char(c))
        .expect("chunk has an alphanumeric char");
    let word_end = start + last + last_c.len_utf8();
    if first > 0 {
        out.push(Token::new(line, start, start + first, TokenKind::Punct));
    }
    out.push(Token::new(line, start + first, word_end, TokenKind::Word));
    if word_end < end {
        out.push(Token::new(line, word_end, end, TokenKind::Punct));
    }
}

/// Breaks a hyphenated word token into its parts, keeping the hyphens as punctuation.
pub fn split_compound(token: &Token) -> Vec<Token> {
    let mut parts = Vec::new();
    let mut part_start = token.start;
    for (i, c) in token.text.char_indices() {
        if c == '-' {
            let at = token.start + i;
            if at > part_start {
                parts.push(part(token, part_start, at, TokenKind::Word));
            }
            parts.push(part(token, at, at + 1, TokenKind::Punct));
            part_start = at + 1;
        }
    }
    if token.end > part_start {
        parts.push(part(token, part_start, token.end, TokenKind::Word));
    }
    parts
}

fn part(token: &Token, start: usize, end: usize, kind: TokenKind) -> Token {
    Token {
        text: token.text[start - token.start..end - token.start].to_string(),
        start,
        end,
        kind,
    }
}

/// Rebuilds `line` with a stress mark after the `n`-th vowel (1-based) of every token
/// that has `Some(n)` in `stresses`. ё is left unmarked, being stressed by itself.
/// Everything else is copied verbatim.
pub fn mark_stresses(line: &str, tokens: &[Token], stresses: &[Option<usize>]) -> String {
    let mut out = String::with_capacity(line.len() + 2 * tokens.len());
    let mut copied = 0;
    for (token, stress) in tokens.iter().zip(stresses) {
        let Some(target) = *stress else { continue };
        let mut seen = 0;
        for (i, c) in line[token.start..token.end].char_indices() {
            if is_vowel(c) {
                seen += 1;
                if seen == target {
                    if is_yo(c) {
                        break;
                    }
                    let cut = token.start + i + c.len_utf8();
                    out.push_str(&line[copied..cut]);
                    out.push(STRESS_MARK);
                    copied = cut;
                    break;
                }
            }
        }
    }
    out.push_str(&line[copied..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn tokenize_peels_punctuation() {
        let toks = tokenize("«Мороз и солнце; день чудесный!»");
        assert_eq!(
            texts(&toks),
            ["«", "Мороз", "и", "солнце", ";", "день", "чудесный", "!»"]
        );
        assert!(toks[1].is_word() && !toks[0].is_word());
    }

    #[test]
    fn tokenize_keeps_dash_and_compounds() {
        let toks = tokenize("  Стоит — один,  утёса-великана ");
        assert_eq!(texts(&toks), ["Стоит", "—", "один", ",", "утёса-великана"]);
        assert_eq!(toks[1].kind, TokenKind::Punct);
    }

    #[test]
    fn spans_point_into_the_line() {
        let line = "Вдруг, соломой зашумит";
        for t in tokenize(line) {
            assert_eq!(&line[t.start..t.end], t.text);
        }
    }

    #[test]
    fn compound_split() {
        let line = "утёса-великана";
        let tok = &tokenize(line)[0];
        let parts = split_compound(tok);
        assert_eq!(texts(&parts), ["утёса", "-", "великана"]);
        assert_eq!(parts[2].start, "утёса-".len());
    }

    #[test]
    fn strip_and_mark() {
        assert_eq!(strip_marks("моро\u{301}з"), "мороз");
        assert_eq!(strip_marks("мороз"), "мороз");
        let line = "Мороз и солнце";
        let toks = tokenize(line);
        let marked = mark_stresses(line, &toks, &[Some(2), None, Some(1)]);
        assert_eq!(marked, "Моро\u{301}з и со\u{301}лнце");
        assert_eq!(strip_marks(&marked), line);
        let line = "Шёпот";
        assert_eq!(mark_stresses(line, &tokenize(line), &[Some(1)]), line);
    }

    #[test]
    fn normalize_lowercases() {
        assert_eq!(normalize("МоРо\u{301}З"), "мороз");
        assert_eq!(fold_yo("ещё"), "еще");
    }
}
