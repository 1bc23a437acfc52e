use super::{DiagnosticKind, ParseDiagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Int(u64),
    LBrace,
    RBrace,
    Semi,
    Colon,
    Arrow,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Int(i) => format!("integer {i}"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Splits `text` into tokens. Bad characters are reported and skipped, so
/// the parser always receives a stream terminated by [`Tok::Eof`].
pub(crate) fn tokenize(text: &str) -> (Vec<Token>, Vec<ParseDiagnostic>) {
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let mut last = Span { line: 1, column: 1 };

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let start = Span { line, column: col };
        if c == '\n' || c.is_whitespace() {
            bump!();
            continue;
        }
        last = start;
        match c {
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '{' | '}' | ';' | ':' => {
                bump!();
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    ';' => Tok::Semi,
                    _ => Tok::Colon,
                };
                tokens.push(Token { tok, span: start });
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    tokens.push(Token { tok: Tok::Arrow, span: start });
                } else {
                    diags.push(ParseDiagnostic::error(DiagnosticKind::Lexical, start, "expected `->`"));
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                let mut closed = false;
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                    match c {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match chars.peek() {
                            Some(&e @ ('"' | '\\')) => {
                                bump!();
                                s.push(e);
                            }
                            _ => diags.push(ParseDiagnostic::error(
                                DiagnosticKind::Lexical,
                                Span { line, column: col - 1 },
                                "invalid escape in string",
                            )),
                        },
                        c => s.push(c),
                    }
                }
                if closed {
                    tokens.push(Token { tok: Tok::Str(s), span: start });
                } else {
                    diags.push(ParseDiagnostic::error(DiagnosticKind::Lexical, start, "unterminated string"));
                }
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_alphanumeric() && d != '_' {
                        break;
                    }
                    digits.push(d);
                    bump!();
                }
                match digits.parse::<u64>() {
                    Ok(v) => tokens.push(Token { tok: Tok::Int(v), span: start }),
                    Err(_) if digits.chars().all(|d| d.is_ascii_digit()) => {
                        diags.push(ParseDiagnostic::error(DiagnosticKind::Lexical, start, "integer out of range"))
                    }
                    Err(_) => diags.push(ParseDiagnostic::error(
                        DiagnosticKind::Lexical,
                        start,
                        format!("malformed integer `{digits}`"),
                    )),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_alphanumeric() && d != '_' {
                        break;
                    }
                    ident.push(d);
                    bump!();
                }
                tokens.push(Token { tok: Tok::Ident(ident), span: start });
            }
            other => {
                bump!();
                diags.push(ParseDiagnostic::error(
                    DiagnosticKind::Lexical,
                    start,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, span: last });
    (tokens, diags)
}
