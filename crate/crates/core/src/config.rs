//! Line-oriented configuration files.
//!
//! ```text
//! # comment
//! [material "silver"]
//! omega_p = 1.402e16
//! gamma = 6.25e13
//!
//! [sweep]
//! geometry = otto
//! ```
//!
//! Every section header is either `[material "<name>"]` or `[sweep]`; every
//! other non-blank, non-comment line is `key = value`. Errors carry the
//! 1-based line number.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionKind {
    Material(String),
    Sweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub kind: SectionKind,
    /// Line of the section header.
    pub line: usize,
    /// `(key, value, line)` in file order.
    pub entries: Vec<(String, String, usize)>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub sections: Vec<Section>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = strip_comment(raw).trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(inner) = trimmed.strip_prefix('[') {
                let inner = inner.strip_suffix(']').ok_or_else(|| Error::Config {
                    line,
                    msg: "unterminated section header".into(),
                })?;
                let kind = parse_header(inner.trim(), line)?;
                sections.push(Section {
                    kind,
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| Error::Config {
                line,
                msg: format!("expected `key = value`, found `{trimmed}`"),
            })?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Config {
                    line,
                    msg: format!("invalid key `{key}`"),
                });
            }
            let section = sections.last_mut().ok_or_else(|| Error::Config {
                line,
                msg: "key outside of any section".into(),
            })?;
            section
                .entries
                .push((key.to_string(), value.trim().to_string(), line));
        }
        Ok(Self { sections })
    }

    pub fn materials(&self) -> impl Iterator<Item = (&str, &Section)> {
        self.sections.iter().filter_map(|s| match &s.kind {
            SectionKind::Material(name) => Some((name.as_str(), s)),
            SectionKind::Sweep => None,
        })
    }

    /// The last `[sweep]` section, if any.
    pub fn sweep(&self) -> Option<&Section> {
        self.sections
            .iter()
            .rev()
            .find(|s| s.kind == SectionKind::Sweep)
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_header(inner: &str, line: usize) -> Result<SectionKind> {
    if inner == "sweep" {
        return Ok(SectionKind::Sweep);
    }
    if let Some(rest) = inner.strip_prefix("material") {
        let rest = rest.trim();
        let name = rest
            .strip_prefix('"')
            .and_then(|r| r.strip_suffix('"'))
            .ok_or_else(|| Error::Config {
                line,
                msg: "material name must be double-quoted".into(),
            })?;
        if name.is_empty() || name.contains('"') {
            return Err(Error::Config {
                line,
                msg: "invalid material name".into(),
            });
        }
        return Ok(SectionKind::Material(name.to_string()));
    }
    Err(Error::Config {
        line,
        msg: format!("unknown section `[{inner}]`"),
    })
}

/// Parses a float, reporting the line on failure.
pub fn parse_f64(value: &str, line: usize, key: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Config {
            line,
            msg: format!("`{key}` expects a finite number, found `{value}`"),
        })
}
