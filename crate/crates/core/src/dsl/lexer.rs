//! Tokenizer for the potential expression language.

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl std::fmt::Display for Token {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Token::Number(x) => write!(f, "number `{x}`"),
            Token::Ident(s) => write!(f, "identifier `{s}`"),
            Token::Plus => write!(f, "`+`"),
            Token::Minus => write!(f, "`-`"),
            Token::Star => write!(f, "`*`"),
            Token::Slash => write!(f, "`/`"),
            Token::Caret => write!(f, "`^`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub token: Token,
    pub pos: Position,
}

pub fn tokenize(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut tokens = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let chars: Vec<char> = source.chars().collect();
    let mut idx = 0;
    while idx < chars.len() {
        let ch = chars[idx];
        let pos = Position { line, col };
        match ch {
            '\n' => {
                line += 1;
                col = 1;
                idx += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '+' => tokens.push(Spanned { token: Token::Plus, pos }),
            '-' => tokens.push(Spanned { token: Token::Minus, pos }),
            '*' => tokens.push(Spanned { token: Token::Star, pos }),
            '/' => tokens.push(Spanned { token: Token::Slash, pos }),
            '^' => tokens.push(Spanned { token: Token::Caret, pos }),
            '(' => tokens.push(Spanned { token: Token::LParen, pos }),
            ')' => tokens.push(Spanned { token: Token::RParen, pos }),
            c if c.is_ascii_digit() || c == '.' => {
                let start = idx;
                let mut end = idx;
                let mut seen_dot = false;
                while end < chars.len()
                    && (chars[end].is_ascii_digit() || (chars[end] == '.' && !seen_dot))
                {
                    if chars[end] == '.' {
                        seen_dot = true;
                    }
                    end += 1;
                }
                // optional exponent part
                if end < chars.len() && (chars[end] == 'e' || chars[end] == 'E') {
                    let mut cursor = end + 1;
                    if cursor < chars.len() && (chars[cursor] == '+' || chars[cursor] == '-') {
                        cursor += 1;
                    }
                    if cursor < chars.len() && chars[cursor].is_ascii_digit() {
                        while cursor < chars.len() && chars[cursor].is_ascii_digit() {
                            cursor += 1;
                        }
                        end = cursor;
                    }
                }
                let text: String = chars[start..end].iter().collect();
                let value: f64 = text.parse().map_err(|_| ParseError {
                    line,
                    col,
                    message: format!("malformed number `{text}`"),
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        line,
                        col,
                        message: format!("number `{text}` overflows"),
                    });
                }
                tokens.push(Spanned {
                    token: Token::Number(value),
                    pos,
                });
                col += (end - start) as u32;
                idx = end;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = idx;
                let mut end = idx;
                while end < chars.len()
                    && (chars[end].is_ascii_alphanumeric() || chars[end] == '_')
                {
                    end += 1;
                }
                let text: String = chars[start..end].iter().collect();
                tokens.push(Spanned {
                    token: Token::Ident(text),
                    pos,
                });
                col += (end - start) as u32;
                idx = end;
                continue;
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
        col += 1;
        idx += 1;
    }
    tokens.push(Spanned {
        token: Token::Eof,
        pos: Position { line, col },
    });
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_operators_and_idents() {
        let toks = tokenize("z1*zb1 + A^(3/2)").unwrap();
        let kinds: Vec<_> = toks.iter().map(|s| s.token.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Token::Ident("z1".into()),
                Token::Star,
                Token::Ident("zb1".into()),
                Token::Plus,
                Token::Ident("A".into()),
                Token::Caret,
                Token::LParen,
                Token::Number(3.0),
                Token::Slash,
                Token::Number(2.0),
                Token::RParen,
                Token::Eof,
            ]
        );
    }

    #[test]
    fn reports_position_of_bad_character() {
        let err = tokenize("z1 $ z2").unwrap_err();
        assert_eq!((err.line, err.col), (1, 4));
    }

    #[test]
    fn scientific_notation_numbers() {
        let toks = tokenize("1.5e-3").unwrap();
        assert_eq!(toks[0].token, Token::Number(1.5e-3));
    }
}
