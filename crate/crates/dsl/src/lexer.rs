use stieltjes::numerics::parse_rational;
use stieltjes::Rational;

use crate::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `INT`, `INT/INT` (no spaces) or a decimal, already exact.
    Num { value: Rational, integer: bool },
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num { value, .. } => format!("number {value}"),
            Tok::Sym(c) => format!("\"{c}\""),
            Tok::Eof => "end of input".into(),
        }
    }
}

const SYMBOLS: &str = "=;+-*^()[]{},:";

/// Splits `src` into tokens. `#` starts a comment running to the end of
/// the line. Columns count characters from 1.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let j = scan(&chars, i, |c| c.is_ascii_alphanumeric() || c == '_');
            out.push(Token { tok: Tok::Ident(chars[i..j].iter().collect()), line, column: start });
            col += j - i;
            i = j;
        } else if c.is_ascii_digit() {
            let mut j = scan(&chars, i, |c| c.is_ascii_digit());
            let mut integer = true;
            if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                j = scan(&chars, j + 1, |c| c.is_ascii_digit());
                integer = false;
            } else if j + 1 < chars.len() && chars[j] == '/' && chars[j + 1].is_ascii_digit() {
                j = scan(&chars, j + 1, |c| c.is_ascii_digit());
                integer = false;
            }
            let text: String = chars[i..j].iter().collect();
            let value = parse_rational(&text).map_err(|e| Diagnostic::new(line, start, format!("bad number `{text}`: {e}")))?;
            out.push(Token { tok: Tok::Num { value, integer }, line, column: start });
            col += j - i;
            i = j;
        } else if SYMBOLS.contains(c) {
            out.push(Token { tok: Tok::Sym(c), line, column: start });
            i += 1;
            col += 1;
        } else {
            return Err(Diagnostic::new(line, start, format!("unexpected character {c:?}")));
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

fn scan(chars: &[char], mut i: usize, ok: impl Fn(char) -> bool) -> usize {
    while i < chars.len() && ok(chars[i]) {
        i += 1;
    }
    i
}
