use super::diagnostic::{Diagnostic, DiagnosticCode, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    /// `@name`
    Handle(String),
    /// `->`
    Arrow,
    /// Single-character punctuation: `; { } ( ) : ? = , .`
    Punct(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Handle(h) => format!("handle @{h}"),
            Tok::Arrow => "`->`".into(),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, mut pred: impl FnMut(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `source` into tokens. Lexical errors are reported and the
/// offending characters skipped, so one pass surfaces all of them. The
/// token list always ends with [`Tok::Eof`].
pub fn tokenize(source: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        pos: Pos::START,
    };
    let mut tokens = Vec::new();
    let mut diagnostics = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.pos;
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '/' {
            cur.bump();
            if cur.peek() == Some('/') {
                cur.eat_while(|c| c != '\n');
            } else {
                diagnostics.push(Diagnostic::error(
                    start,
                    DiagnosticCode::InvalidCharacter,
                    "unexpected character `/`",
                ));
            }
            continue;
        }
        let tok = if is_ident_start(c) {
            Tok::Ident(cur.eat_while(is_ident_char))
        } else if c.is_ascii_digit() || c == '-' {
            cur.bump();
            if c == '-' && cur.peek() == Some('>') {
                cur.bump();
                Tok::Arrow
            } else {
                let mut digits = String::from(c);
                digits.push_str(&cur.eat_while(|c| c.is_ascii_digit()));
                match digits.parse::<i64>() {
                    Ok(value) => Tok::Int(value),
                    Err(_) => {
                        diagnostics.push(Diagnostic::error(
                            start,
                            DiagnosticCode::InvalidInteger,
                            format!("invalid integer literal `{digits}`"),
                        ));
                        continue;
                    }
                }
            }
        } else if c == '@' {
            cur.bump();
            let name = cur.eat_while(is_ident_char);
            if name.is_empty() || !name.starts_with(is_ident_start) {
                diagnostics.push(Diagnostic::error(
                    start,
                    DiagnosticCode::InvalidCharacter,
                    "`@` must be followed by a handle name",
                ));
                continue;
            }
            Tok::Handle(name)
        } else if c == '"' {
            cur.bump();
            match lex_string(&mut cur, start, &mut diagnostics) {
                Some(s) => Tok::Str(s),
                None => continue,
            }
        } else if ";{}():?=,.".contains(c) {
            cur.bump();
            Tok::Punct(c)
        } else {
            cur.bump();
            diagnostics.push(Diagnostic::error(
                start,
                DiagnosticCode::InvalidCharacter,
                format!("unexpected character {c:?}"),
            ));
            continue;
        };
        tokens.push(Token { tok, pos: start });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        pos: cur.pos,
    });
    (tokens, diagnostics)
}

/// Body of a double-quoted literal, opening quote already consumed.
fn lex_string(
    cur: &mut Cursor<'_>,
    start: Pos,
    diagnostics: &mut Vec<Diagnostic>,
) -> Option<String> {
    let mut out = String::new();
    let mut ok = true;
    loop {
        let esc_pos = cur.pos;
        match cur.bump() {
            None | Some('\n') => {
                diagnostics.push(Diagnostic::error(
                    start,
                    DiagnosticCode::UnterminatedString,
                    "unterminated string literal",
                ));
                return None;
            }
            Some('"') => break,
            Some('\\') => match cur.bump() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some(other) => {
                    ok = false;
                    diagnostics.push(Diagnostic::error(
                        esc_pos,
                        DiagnosticCode::InvalidEscape,
                        format!("unknown escape `\\{other}`"),
                    ));
                    if other == '\n' {
                        return None;
                    }
                }
                None => {
                    diagnostics.push(Diagnostic::error(
                        start,
                        DiagnosticCode::UnterminatedString,
                        "unterminated string literal",
                    ));
                    return None;
                }
            },
            Some(c) => out.push(c),
        }
    }
    ok.then_some(out)
}

/// Quotes `s` as a literal that [`tokenize`] reads back unchanged.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
