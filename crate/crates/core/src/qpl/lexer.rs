//! Tokenizer. Newlines are significant statement separators except inside
//! parentheses or brackets; `#` starts a comment running to end of line.

use crate::error::{QwpError, Result};
use crate::qpl::ast::Pos;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Keyword(&'static str),
    Int(u64),
    Float(f64),
    Sym(&'static str),
    Newline,
    Eof,
}

pub const KEYWORDS: [&str; 12] = [
    "input", "new", "bit", "qbit", "measure", "else", "merge", "discard", "repeat", "while",
    "rec", "call",
];

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Keyword(k) => format!("`{k}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Float(x) => format!("number `{x}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

fn syntax(pos: Pos, message: String) -> QwpError {
    QwpError::Syntax {
        line: pos.line,
        col: pos.col,
        message,
        expected: Vec::new(),
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            if depth == 0 {
                out.push(Token { tok: Tok::Newline, pos });
            }
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
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(word),
            };
            out.push(Token { tok, pos });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let mut float = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                float = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    float = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let tok = if float {
                Tok::Float(text.parse().map_err(|_| syntax(pos, format!("bad number `{text}`")))?)
            } else {
                Tok::Int(text.parse().map_err(|_| syntax(pos, format!("number `{text}` is too large")))?)
            };
            out.push(Token { tok, pos });
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let sym = match two.as_str() {
                ":=" => Some(":="),
                "*=" => Some("*="),
                _ => None,
            };
            if let Some(s) = sym {
                i += 2;
                out.push(Token { tok: Tok::Sym(s), pos });
            } else {
                let s = match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    '[' => "[",
                    ']' => "]",
                    ',' => ",",
                    ';' => ";",
                    '-' => "-",
                    '+' => "+",
                    _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
                };
                match s {
                    "(" | "[" => depth += 1,
                    ")" | "]" => depth = depth.saturating_sub(1),
                    _ => {}
                }
                i += 1;
                out.push(Token { tok: Tok::Sym(s), pos });
            }
        }
        col += i - start;
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("new qbit q := 0 # fresh\nq *= H"),
            vec![
                Tok::Keyword("new"),
                Tok::Keyword("qbit"),
                Tok::Ident("q".into()),
                Tok::Sym(":="),
                Tok::Int(0),
                Tok::Newline,
                Tok::Ident("q".into()),
                Tok::Sym("*="),
                Tok::Ident("H".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn numbers_and_brackets() {
        assert_eq!(
            toks("[[0.5, (1e-3, -2)],\n [3, .25]]")
                .into_iter()
                .filter(|t| matches!(t, Tok::Float(_) | Tok::Int(_) | Tok::Newline))
                .collect::<Vec<_>>(),
            vec![Tok::Float(0.5), Tok::Float(1e-3), Tok::Int(2), Tok::Int(3), Tok::Float(0.25)]
        );
    }

    #[test]
    fn positions_and_errors() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!(t[2].pos, Pos { line: 2, col: 3 });
        match tokenize("q @ H") {
            Err(QwpError::Syntax { line: 1, col: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
