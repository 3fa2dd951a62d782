//! Plain-text stream files.
//!
//! One trial per row, whitespace-separated `+1`/`-1` tokens, one column per
//! stream. An optional first row carries the column labels; it is treated
//! as a header when none of its tokens parses as an integer.

use std::fmt::Write as _;

use bell_core::corrcore::{BinaryStream, MatchedStreamSet, Sign};

use crate::error::{CliError, CliResult};

fn parse_outcome(token: &str, line: usize, col: usize) -> CliResult<Sign> {
    let normalised = token.replace('\u{2212}', "-");
    let v: i64 = normalised.parse().map_err(|_| {
        CliError::Data(format!(
            "line {line}, column {col}: `{token}` is not an integer"
        ))
    })?;
    Sign::from_int(v).map_err(|_| {
        CliError::Data(format!(
            "line {line}, column {col}: outcome {v} is not +1 or -1"
        ))
    })
}

fn is_integer(token: &str) -> bool {
    token.replace('\u{2212}', "-").parse::<i64>().is_ok()
}

pub fn parse(text: &str) -> CliResult<MatchedStreamSet> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let mut labels: Option<Vec<String>> = None;
    if let Some(&(_, first)) = lines.peek() {
        let first = first.trim_start_matches('#').trim();
        if !first.split_whitespace().any(is_integer) {
            labels = Some(first.split_whitespace().map(str::to_string).collect());
            lines.next();
        }
    }

    let mut columns: Vec<Vec<Sign>> = Vec::new();
    for (line, row) in lines {
        let tokens: Vec<&str> = row.split_whitespace().collect();
        if columns.is_empty() {
            columns = vec![Vec::new(); tokens.len()];
        } else if tokens.len() != columns.len() {
            return Err(CliError::Data(format!(
                "line {line}: expected {} columns, found {}",
                columns.len(),
                tokens.len()
            )));
        }
        for (col, token) in tokens.iter().enumerate() {
            columns[col].push(parse_outcome(token, line, col + 1)?);
        }
    }
    if columns.is_empty() {
        return Err(CliError::Data("stream file contains no trials".into()));
    }
    let labels = match labels {
        Some(l) if l.len() == columns.len() => l,
        Some(l) => {
            return Err(CliError::Data(format!(
                "header names {} columns but rows have {}",
                l.len(),
                columns.len()
            )))
        }
        None => (0..columns.len()).map(|k| format!("s{k}")).collect(),
    };
    let members = labels
        .into_iter()
        .zip(columns)
        .map(|(l, c)| Ok((l, BinaryStream::new(c)?)))
        .collect::<Result<Vec<_>, bell_core::BellError>>()?;
    Ok(MatchedStreamSet::new(members)?)
}

pub fn render(set: &MatchedStreamSet) -> String {
    let mut out = String::with_capacity(set.count() * set.trials() * 3 + 64);
    out.push_str(&set.labels().join(" "));
    out.push('\n');
    for i in 0..set.trials() {
        for (k, s) in set.streams().iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", s.as_slice()[i]);
        }
        out.push('\n');
    }
    out
}
