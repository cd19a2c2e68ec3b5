//! Plain-text set files.
//!
//! Integer files hold one positive decimal per line, strictly increasing,
//! without leading zeros. Lattice files start with `d=<k>` and list one point
//! per line as `k` space-separated integers.

use std::io::{BufRead, Write};

use crate::error::{Result, ZetaError};
use crate::set::{IntegerSet, LatticePointSet};

#[derive(Clone, Debug)]
pub enum ParsedSet {
    Integers(IntegerSet),
    Lattice(LatticePointSet),
}

fn parse_err(line: usize, message: impl Into<String>) -> ZetaError {
    ZetaError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_positive(tok: &str, line: usize) -> Result<u64> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("expected a decimal integer, got {tok:?}")));
    }
    if tok.len() > 1 && tok.starts_with('0') {
        return Err(parse_err(line, format!("leading zero in {tok:?}")));
    }
    let v: u64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("{tok:?} does not fit in 64 bits")))?;
    if v == 0 {
        return Err(parse_err(line, "elements must be positive"));
    }
    Ok(v)
}

fn parse_coord(tok: &str, line: usize) -> Result<i64> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("expected an integer coordinate, got {tok:?}")));
    }
    tok.parse()
        .map_err(|_| parse_err(line, format!("coordinate {tok:?} does not fit in 64 bits")))
}

/// Reads either file format, deciding by the first line.
pub fn parse_set_stream<R: BufRead>(reader: R) -> Result<ParsedSet> {
    let mut lines = reader.split(b'\n').enumerate().map(|(i, l)| (i + 1, l));
    let mut next_line = || -> Result<Option<(usize, String)>> {
        match lines.next() {
            None => Ok(None),
            Some((n, bytes)) => {
                let bytes = bytes?;
                let s = String::from_utf8(bytes).map_err(|_| parse_err(n, "invalid UTF-8"))?;
                if s.ends_with('\r') {
                    return Err(parse_err(n, "CRLF line endings are not accepted"));
                }
                Ok(Some((n, s)))
            }
        }
    };
    let Some((first_no, first)) = next_line()? else {
        return Ok(ParsedSet::Integers(IntegerSet::empty()));
    };
    if let Some(d) = first.strip_prefix("d=") {
        let dim: usize = d
            .parse()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| parse_err(first_no, format!("bad dimension header {first:?}")))?;
        let mut coords = Vec::new();
        while let Some((n, line)) = next_line()? {
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split(' ').collect();
            if toks.len() != dim {
                return Err(parse_err(n, format!("expected {dim} coordinates, got {}", toks.len())));
            }
            for t in toks {
                coords.push(parse_coord(t, n)?);
            }
        }
        return Ok(ParsedSet::Lattice(LatticePointSet::from_flat(dim, coords)?));
    }
    let mut values: Vec<u64> = Vec::new();
    let mut push = |n: usize, line: &str| -> Result<()> {
        if line.is_empty() {
            return Ok(());
        }
        let v = parse_positive(line, n)?;
        if let Some(&prev) = values.last() {
            if v <= prev {
                return Err(parse_err(n, format!("{v} does not exceed the previous element {prev}")));
            }
        }
        values.push(v);
        Ok(())
    };
    push(first_no, &first)?;
    while let Some((n, line)) = next_line()? {
        push(n, &line)?;
    }
    Ok(ParsedSet::Integers(IntegerSet::finite(values)?))
}

pub fn read_set_file(path: &std::path::Path) -> Result<ParsedSet> {
    let f = std::fs::File::open(path).map_err(|source| ZetaError::File {
        path: path.to_path_buf(),
        source,
    })?;
    parse_set_stream(std::io::BufReader::new(f))
}

pub fn write_integers<W: Write>(values: impl IntoIterator<Item = u64>, mut out: W) -> Result<()> {
    for v in values {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_lattice<W: Write>(set: &LatticePointSet, mut out: W) -> Result<()> {
    writeln!(out, "d={}", set.dim())?;
    for p in set.iter() {
        let line: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()?;
    Ok(())
}
