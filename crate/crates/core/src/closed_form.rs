//! Exact dimension formulas: code sets, digit sets, substitution fractals and
//! sublattices.

use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Result, ZetaError};
use crate::generators::{format_word, InstantaneousCodeSpec, SubstitutionRule};

/// One reason a code specification is not an instantaneous code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeViolation {
    BadBase(u64),
    EmptyLeadingSet,
    ZeroLeadingDigit,
    EmptyWordSet,
    EmptyWord,
    DigitOutOfRange { digit: u8, base: u64 },
    DuplicateWord(Vec<u8>),
    /// `prefix` is a proper prefix of `word`.
    PrefixPair { prefix: Vec<u8>, word: Vec<u8> },
}

impl fmt::Display for CodeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeViolation::BadBase(k) => write!(f, "base {k} outside 2..=36"),
            CodeViolation::EmptyLeadingSet => f.write_str("leading digit set is empty"),
            CodeViolation::ZeroLeadingDigit => f.write_str("leading digit set contains 0"),
            CodeViolation::EmptyWordSet => f.write_str("code word set is empty"),
            CodeViolation::EmptyWord => f.write_str("code word set contains the empty string"),
            CodeViolation::DigitOutOfRange { digit, base } => write!(f, "digit {digit} out of range for base {base}"),
            CodeViolation::DuplicateWord(w) => write!(f, "word {} listed twice", format_word(w)),
            CodeViolation::PrefixPair { prefix, word } => {
                write!(f, "{} is a prefix of {}", format_word(prefix), format_word(word))
            }
        }
    }
}

/// Checks that the spec describes `ΔB*` with `B` an instantaneous code.
pub fn validate_code(spec: &InstantaneousCodeSpec) -> std::result::Result<(), Vec<CodeViolation>> {
    let mut out = Vec::new();
    let k = spec.base;
    if !(2..=36).contains(&k) {
        out.push(CodeViolation::BadBase(k));
    }
    if spec.leading.is_empty() {
        out.push(CodeViolation::EmptyLeadingSet);
    }
    if spec.leading.contains(&0) {
        out.push(CodeViolation::ZeroLeadingDigit);
    }
    if spec.words.is_empty() {
        out.push(CodeViolation::EmptyWordSet);
    }
    if spec.words.iter().any(Vec::is_empty) {
        out.push(CodeViolation::EmptyWord);
    }
    let mut bad_digits: Vec<u8> = spec
        .leading
        .iter()
        .chain(spec.words.iter().flatten())
        .copied()
        .filter(|&d| d as u64 >= k)
        .collect();
    bad_digits.sort_unstable();
    bad_digits.dedup();
    out.extend(bad_digits.into_iter().map(|digit| CodeViolation::DigitOutOfRange { digit, base: k }));

    let mut sorted: Vec<&Vec<u8>> = spec.words.iter().filter(|w| !w.is_empty()).collect();
    sorted.sort();
    // in sorted order every extension of w follows w contiguously
    for (i, w) in sorted.iter().enumerate() {
        for v in sorted[i + 1..].iter().take_while(|v| v.starts_with(w)) {
            if v.len() == w.len() {
                out.push(CodeViolation::DuplicateWord((*w).clone()));
            } else {
                out.push(CodeViolation::PrefixPair {
                    prefix: (*w).clone(),
                    word: (*v).clone(),
                });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// `Σ_{w∈B} k^{-s|w|}`.
pub fn beta(spec: &InstantaneousCodeSpec, s: f64) -> f64 {
    let k = spec.base as f64;
    spec.words.iter().map(|w| k.powf(-s * w.len() as f64)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodeDimensionResult {
    pub s_star: f64,
    pub beta_at_s_star: f64,
    pub iterations: u32,
    pub bracket: (f64, f64),
}

/// Root of `β(s) = 1` by bisection.
pub fn code_dimension(spec: &InstantaneousCodeSpec) -> Result<CodeDimensionResult> {
    validate_code(spec).map_err(ZetaError::InvalidCode)?;
    if spec.words.len() == 1 {
        return Ok(CodeDimensionResult {
            s_star: 0.0,
            beta_at_s_star: beta(spec, 0.0),
            iterations: 0,
            bracket: (0.0, 0.0),
        });
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0 + (spec.words.len() as f64).ln() / (spec.base as f64).ln();
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let b = beta(spec, mid);
        if b > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if b == 1.0 {
            lo = mid;
            hi = mid;
            break;
        }
    }
    // both ends are within an ulp of the root; keep the closer one
    let s_star = if (beta(spec, lo) - 1.0).abs() <= (beta(spec, hi) - 1.0).abs() { lo } else { hi };
    Ok(CodeDimensionResult {
        s_star,
        beta_at_s_star: beta(spec, s_star),
        iterations,
        bracket: (lo, hi),
    })
}

/// `ln|Γ| / ln k` for the set of integers whose base-`k` digits lie in `Γ`.
pub fn digit_dimension(k: u64, allowed: &[u8]) -> Result<f64> {
    if !(2..=36).contains(&k) {
        return Err(ZetaError::Parameter(format!("base must be in 2..=36, got {k}")));
    }
    let mut g = allowed.to_vec();
    g.sort_unstable();
    g.dedup();
    if let Some(&d) = g.iter().find(|&&d| d as u64 >= k) {
        return Err(ZetaError::Parameter(format!("digit {d} out of range for base {k}")));
    }
    if g.iter().all(|&d| d == 0) {
        return Err(ZetaError::Parameter("digit set must contain a nonzero digit".into()));
    }
    Ok((g.len() as f64).ln() / (k as f64).ln())
}

/// `log Y / log c` where `Y` counts the surviving cells.
pub fn substitution_dimension(rule: &SubstitutionRule) -> f64 {
    (rule.surviving() as f64).ln() / (rule.c() as f64).ln()
}

/// Rank over the rationals of integer vectors, by fraction-free elimination.
pub fn lattice_subspace_dimension(vectors: &[Vec<i64>]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Err(ZetaError::Parameter("need at least one vector".into()));
    };
    let d = first.len();
    if vectors.iter().any(|v| v.len() != d) {
        return Err(ZetaError::Parameter("vectors must share one dimension".into()));
    }
    let mut m: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..d {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..d {
                let v = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}

/// One line of a closed-form versus estimate comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub family: String,
    pub params: String,
    pub closed_form: f64,
    pub estimated: f64,
}

impl ComparisonRow {
    pub fn abs_error(&self) -> f64 {
        (self.closed_form - self.estimated).abs()
    }
}

/// Writes `family,params,closed_form,estimated,abs_error`.
pub fn write_comparison_csv<W: Write>(rows: &[ComparisonRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family", "params", "closed_form", "estimated", "abs_error"])?;
    for r in rows {
        w.write_record([
            r.family.clone(),
            r.params.clone(),
            format!("{:.6}", r.closed_form),
            format!("{:.6}", r.estimated),
            format!("{:.6}", r.abs_error()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
