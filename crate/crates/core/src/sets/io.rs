//! Set files: one value per line in ascending order, `#` comments, or a
//! JSON object `{"elements": [...]}`.

use std::fmt::Write as _;

use serde::Deserialize;

use super::{IntegerSet, RealSet};
use crate::{Error, Result};

#[derive(Deserialize)]
struct JsonSet<T> {
    elements: Vec<T>,
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn parse_lines<T: std::str::FromStr>(text: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value = line.parse::<T>().map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("{line:?}: {e}"),
        })?;
        values.push(value);
    }
    Ok(values)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    serde_json::from_str::<JsonSet<T>>(text)
        .map(|s| s.elements)
        .map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
}

pub fn parse_integer_set(text: &str) -> Result<IntegerSet> {
    let elements = if is_json(text) {
        parse_json(text)?
    } else {
        parse_lines(text)?
    };
    IntegerSet::new(elements)
}

pub fn parse_real_set(text: &str) -> Result<RealSet> {
    let elements = if is_json(text) {
        parse_json(text)?
    } else {
        parse_lines(text)?
    };
    RealSet::new(elements)
}

/// Comma-separated inline list, e.g. `1,2,4`.
pub fn parse_inline<T: std::str::FromStr>(list: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>().map_err(|e| Error::Parse {
                line: 1,
                message: format!("{s:?}: {e}"),
            })
        })
        .collect()
}

/// Plain-text set file, readable by [`parse_integer_set`].
pub fn format_set(set: &IntegerSet) -> String {
    let mut out = String::new();
    for a in set.elements() {
        writeln!(out, "{a}").unwrap();
    }
    out
}
