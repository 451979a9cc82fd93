//! The potential file format.
//!
//! ```text
//! # hkahler v1
//! param A = 1.0
//! param gamma = 1.0
//! phi = A*(z1 + zb1 + gamma*z2*zb2)^(3/2)
//! ```
//!
//! Blank lines and `#` comments are ignored. A `family = <kind>` line names
//! a built-in potential that is expanded at load time when no explicit
//! `phi =` is present (an explicit `phi =` always wins). Generalized
//! families may supply `w = <expr in x>` and `f = <expr in z2, zb2>` lines.

use thiserror::Error;

use super::ast::{ParameterTable, PotentialExpr};
use super::parser::parse;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct FileError {
    pub line: u32,
    pub message: String,
}

/// Parsed contents of a potential file, before family expansion.
#[derive(Debug, Clone)]
pub struct PotentialFile {
    pub version: Option<String>,
    pub params: ParameterTable,
    pub phi: Option<PotentialExpr>,
    pub phi_source: Option<String>,
    pub family: Option<String>,
    pub w_source: Option<String>,
    pub f_source: Option<String>,
    /// Verbatim input, echoed into reports.
    pub source: String,
}

pub fn parse_potential_file(text: &str) -> Result<PotentialFile, FileError> {
    let mut file = PotentialFile {
        version: None,
        params: ParameterTable::new(),
        phi: None,
        phi_source: None,
        family: None,
        w_source: None,
        f_source: None,
        source: text.to_string(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx as u32 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let comment = comment.trim();
            if comment.starts_with("hkahler") && file.version.is_none() {
                file.version = Some(comment.to_string());
            }
            continue;
        }
        let content = match trimmed.find('#') {
            Some(cut) => trimmed[..cut].trim_end(),
            None => trimmed,
        };
        let Some((key, value)) = content.split_once('=') else {
            return Err(FileError {
                line: line_no,
                message: format!("expected `<directive> = <value>`, found `{content}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        match key.split_whitespace().next() {
            Some("param") => {
                let name = key
                    .strip_prefix("param")
                    .map(str::trim)
                    .filter(|n| !n.is_empty())
                    .ok_or_else(|| FileError {
                        line: line_no,
                        message: "param line needs a name: `param <name> = <real>`".into(),
                    })?;
                if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    || name.chars().next().is_some_and(|c| c.is_ascii_digit())
                {
                    return Err(FileError {
                        line: line_no,
                        message: format!("`{name}` is not a valid parameter identifier"),
                    });
                }
                if matches!(name, "z1" | "z2" | "zb1" | "zb2" | "i" | "exp" | "ln" | "conj") {
                    return Err(FileError {
                        line: line_no,
                        message: format!("`{name}` is reserved and cannot name a parameter"),
                    });
                }
                let parsed: f64 = value.parse().map_err(|_| FileError {
                    line: line_no,
                    message: format!("`{value}` is not a real number"),
                })?;
                file.params.insert(name, parsed).map_err(|e| FileError {
                    line: line_no,
                    message: e.to_string(),
                })?;
            }
            Some("phi") if key == "phi" => {
                if file.phi.is_some() {
                    return Err(FileError {
                        line: line_no,
                        message: "duplicate `phi =` line".into(),
                    });
                }
                let expr = parse(value).map_err(|e| rebase(e, line_no, raw, value))?;
                file.phi = Some(expr);
                file.phi_source = Some(value.to_string());
            }
            Some("family") if key == "family" => {
                if file.family.is_some() {
                    return Err(FileError {
                        line: line_no,
                        message: "duplicate `family =` line".into(),
                    });
                }
                file.family = Some(value.to_string());
            }
            Some("w") if key == "w" => {
                parse(value).map_err(|e| rebase(e, line_no, raw, value))?;
                file.w_source = Some(value.to_string());
            }
            Some("f") if key == "f" => {
                parse(value).map_err(|e| rebase(e, line_no, raw, value))?;
                file.f_source = Some(value.to_string());
            }
            _ => {
                return Err(FileError {
                    line: line_no,
                    message: format!("unknown directive `{key}`"),
                });
            }
        }
    }
    if file.phi.is_none() && file.family.is_none() {
        return Err(FileError {
            line: text.lines().count() as u32,
            message: "file declares neither `phi =` nor `family =`".into(),
        });
    }
    if let Some(phi) = &file.phi {
        file.params.check_bound(phi).map_err(|e| FileError {
            line: 0,
            message: e.to_string(),
        })?;
    }
    Ok(file)
}

fn rebase(err: ParseError, line_no: u32, raw_line: &str, expr_text: &str) -> FileError {
    // expressions sit on a single line; shift the column by the offset of
    // the expression within the raw line
    let offset = raw_line.find(expr_text).unwrap_or(0) as u32;
    FileError {
        line: line_no,
        message: format!("column {}: {}", err.col + offset, err.message),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_params_and_phi() {
        let text = "# hkahler v1\nparam A = 1.0\nparam gamma = 1.0\nphi = A*(z1 + zb1 + gamma*z2*zb2)^(3/2)\n";
        let f = parse_potential_file(text).unwrap();
        assert_eq!(f.version.as_deref(), Some("hkahler v1"));
        assert_eq!(f.params.get("A"), Some(1.0));
        assert_eq!(f.params.get("gamma"), Some(1.0));
        assert!(f.phi.is_some());
    }

    #[test]
    fn reports_expression_error_with_file_position() {
        let err = parse_potential_file("phi = z1*(\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("column"), "{}", err.message);
    }

    #[test]
    fn family_line_without_phi_is_accepted() {
        let f = parse_potential_file("family = ricci-flat\nparam A = 2.0\n").unwrap();
        assert_eq!(f.family.as_deref(), Some("ricci-flat"));
        assert!(f.phi.is_none());
    }

    #[test]
    fn unbound_parameter_in_phi_is_rejected_at_load() {
        let err = parse_potential_file("phi = z3 + 1\n").unwrap_err();
        assert!(err.message.contains("unbound parameter `z3`"), "{}", err.message);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "\n# a comment\nparam A = 0.5 # trailing\n\nphi = A*z1*zb1\n";
        let f = parse_potential_file(text).unwrap();
        assert_eq!(f.params.get("A"), Some(0.5));
    }

    #[test]
    fn reserved_identifiers_cannot_be_parameters() {
        let err = parse_potential_file("param i = 2.0\nphi = z1*zb1\n").unwrap_err();
        assert!(err.message.contains("reserved"), "{}", err.message);
    }
}
