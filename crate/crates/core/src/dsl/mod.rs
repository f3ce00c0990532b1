//! Text formats: schema files (`.fd`) and mutation scripts (`.fdm`).
//!
//! Schema grammar:
//!
//! ```text
//! schema <Id> ;
//! set <Id> { [name] <Id> : (text|integer) [?] ;  |  <Id> -> <SetId> [?] ; ... }
//! constraint <Id> (commutative|anticommutative) on <SetId> {
//!     left  = <chain or identity> ;
//!     right = <chain or identity> ;
//!     [ message = <string> ; ]
//! }
//! ```
//!
//! Chains are written outermost-first with `.` as composition:
//! `Continent . Range . Subrange . Group . Mountain`.
//!
//! Script grammar:
//!
//! ```text
//! insert <SetId> ( <fn>=<lit|@handle|null> , ... ) [as <handle>] [expect accept|reject] ;
//! update @<handle> set <fn> = <lit|@handle|null> [, ...] [expect ...] ;
//! delete @<handle> [expect ...] ;
//! ```
//!
//! `?` marks nullable functions and `//` starts a comment. Parsing is
//! all-or-nothing: any error yields every diagnostic and no model.

mod diagnostic;
mod lexer;
mod print;
mod schema;
mod script;

pub use diagnostic::{render, Diagnostic, DiagnosticCode, Pos, Severity};
pub use lexer::{quote, tokenize, Tok, Token};
pub use print::{print_mutation, print_schema, print_script};
pub use schema::{parse_raw_schema, parse_schema, SourceMap};
pub use script::{
    parse_script, parse_script_spanned, Action, Binding, BindingValue, Expectation, Mutation,
};

/// Token stream with one-token lookahead and diagnostic collection.
struct Parser {
    tokens: Vec<Token>,
    index: usize,
    diagnostics: Vec<Diagnostic>,
}

/// Marker for a syntax error that has already been reported.
struct Reported;

type PResult<T> = Result<T, Reported>;

impl Parser {
    fn new(source: &str) -> Self {
        let (tokens, diagnostics) = tokenize(source);
        Self {
            tokens,
            index: 0,
            diagnostics,
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.index]
    }

    fn peek_nth(&self, n: usize) -> &Tok {
        let i = (self.index + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.peek().pos
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.index].clone();
        if token.tok != Tok::Eof {
            self.index += 1;
        }
        token
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == keyword)
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn error_here(&mut self, expected: &str) -> Reported {
        let token = self.peek().clone();
        let code = if token.tok == Tok::Eof {
            DiagnosticCode::UnexpectedEnd
        } else {
            DiagnosticCode::UnexpectedToken
        };
        self.diagnostics.push(Diagnostic::error(
            token.pos,
            code,
            format!("expected {expected}, found {}", token.tok.describe()),
        ));
        Reported
    }

    fn keyword(&mut self, keyword: &str) -> PResult<Pos> {
        if self.at_keyword(keyword) {
            Ok(self.advance().pos)
        } else {
            Err(self.error_here(&format!("`{keyword}`")))
        }
    }

    fn punct(&mut self, c: char) -> PResult<Pos> {
        if self.at_punct(c) {
            Ok(self.advance().pos)
        } else {
            Err(self.error_here(&format!("`{c}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.advance().pos))
            }
            _ => Err(self.error_here(what)),
        }
    }

    /// Skips past the next `;` (or up to a `}` / end of input).
    fn recover_statement(&mut self) {
        loop {
            match self.peek().tok {
                Tok::Eof | Tok::Punct('}') => return,
                Tok::Punct(';') => {
                    self.advance();
                    return;
                }
                _ => {
                    self.advance();
                }
            }
        }
    }
}
