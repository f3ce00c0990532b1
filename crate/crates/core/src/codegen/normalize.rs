/// Words compared case-insensitively.
const KEYWORDS: &[&str] = &[
    "AND", "AS", "BEGIN", "BY", "DIM", "ELSE", "END", "FROM", "GROUP", "IF", "IN", "INNER", "IS",
    "JOIN", "LEFT", "NOT", "NULL", "ON", "OR", "ORDER", "RIGHT", "SELECT", "SUB", "THEN", "WHERE",
];

const OPERATORS: &[&str] = &["<>", "<=", ">=", "!=", "||"];

/// Canonical token stream of generated text: line continuations removed,
/// whitespace collapsed, `[`/`]` identifier quoting dropped, keywords
/// uppercased. Double-quoted strings are kept verbatim. Idempotent.
pub fn normalize_text(body: &str) -> String {
    tokens(body).join(" ")
}

fn tokens(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '[' || c == ']' {
            i += 1;
        } else if c == '"' {
            // VBA strings escape `"` by doubling it.
            let start = i;
            i += 1;
            while i < chars.len() {
                if chars[i] == '"' {
                    if chars.get(i + 1) == Some(&'"') {
                        i += 2;
                        continue;
                    }
                    i += 1;
                    break;
                }
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            // A lone `_` is a line continuation.
            if word == "_" {
                continue;
            }
            let upper = word.to_uppercase();
            out.push(if KEYWORDS.contains(&upper.as_str()) {
                upper
            } else {
                word
            });
        } else {
            let pair: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            if OPERATORS.contains(&pair.as_str()) {
                out.push(pair);
                i += 2;
            } else {
                out.push(c.to_string());
                i += 1;
            }
        }
    }
    out
}
