//! Sets of integers whose base-k expansion lies in a regular language.
//!
//! Both digit-restricted sets `{n : rep_k(n) ∈ Γ*}` and code sets
//! `{n : rep_k(n) ∈ ΔB*}` are recognised by a small deterministic automaton
//! over digits. Counting, membership and ascending enumeration all run on it.

use std::fmt;
use std::sync::Arc;

use crate::closed_form::validate_code;
use crate::error::{Result, ZetaError};
use crate::set::{IntegerSet, IntegerSource};

const NONE: u32 = u32::MAX;

/// Characters used for digits when printing or parsing words.
pub const DIGIT_CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Base-k digits of `n`, most significant first.
pub fn rep(n: u64, base: u64) -> Vec<u8> {
    let mut d = Vec::new();
    let mut x = n;
    while x > 0 {
        d.push((x % base) as u8);
        x /= base;
    }
    d.reverse();
    d
}

/// Integer value of a digit string, `None` on overflow.
pub fn num(digits: &[u8], base: u64) -> Option<u64> {
    digits
        .iter()
        .try_fold(0u64, |acc, &c| acc.checked_mul(base)?.checked_add(c as u64))
}

pub fn format_word(w: &[u8]) -> String {
    w.iter().map(|&c| DIGIT_CHARS[c as usize] as char).collect()
}

pub fn parse_word(s: &str, base: u64) -> Result<Vec<u8>> {
    s.chars()
        .map(|ch| match ch.to_digit(36) {
            Some(d) if (d as u64) < base => Ok(d as u8),
            _ => Err(ZetaError::Parameter(format!("digit {ch:?} is not valid in base {base}"))),
        })
        .collect()
}

/// Deterministic automaton over base-k digits. State 0 reads the leading digit,
/// which must be nonzero.
#[derive(Clone)]
pub struct DigitAutomaton {
    base: u64,
    trans: Vec<u32>,
    accepting: Vec<bool>,
    /// `ways[m][q]`: accepted completions of length `m` from state `q` (saturating).
    ways: Vec<Vec<u128>>,
}

impl fmt::Debug for DigitAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitAutomaton")
            .field("base", &self.base)
            .field("states", &self.accepting.len())
            .finish()
    }
}

impl DigitAutomaton {
    fn new(base: u64, trans: Vec<u32>, accepting: Vec<bool>) -> Self {
        let states = accepting.len();
        let max_len = rep(u64::MAX, base).len();
        let mut ways = vec![accepting.iter().map(|&a| a as u128).collect::<Vec<_>>()];
        for m in 1..=max_len {
            let prev = &ways[m - 1];
            let row = (0..states)
                .map(|q| {
                    (0..base as usize)
                        .filter_map(|c| match trans[q * base as usize + c] {
                            NONE => None,
                            t => Some(prev[t as usize]),
                        })
                        .fold(0u128, u128::saturating_add)
                })
                .collect();
            ways.push(row);
        }
        DigitAutomaton {
            base,
            trans,
            accepting,
            ways,
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    fn step(&self, q: u32, c: u8) -> Option<u32> {
        match self.trans[q as usize * self.base as usize + c as usize] {
            NONE => None,
            t => Some(t),
        }
    }

    fn max_len(&self) -> usize {
        self.ways.len() - 1
    }

    pub fn accepts_digits(&self, digits: &[u8]) -> bool {
        let mut q = 0;
        for &c in digits {
            match self.step(q, c) {
                Some(t) => q = t,
                None => return false,
            }
        }
        !digits.is_empty() && self.accepting[q as usize]
    }

    pub fn accepts(&self, n: u64) -> bool {
        n > 0 && self.accepts_digits(&rep(n, self.base))
    }

    /// Number of accepted strings of exactly `len` digits.
    pub fn count_of_length(&self, len: usize) -> u128 {
        self.ways.get(len).map_or(0, |r| r[0])
    }

    /// `|{n in [1, bound] : accepted}|`.
    pub fn count_le(&self, bound: u64) -> u64 {
        if bound == 0 {
            return 0;
        }
        let d = rep(bound, self.base);
        let len = d.len();
        let mut total: u128 = (1..len).map(|l| self.ways[l][0]).fold(0, u128::saturating_add);
        let mut q = 0u32;
        let mut matched = true;
        for (i, &digit) in d.iter().enumerate() {
            for c in 0..digit {
                if let Some(t) = self.step(q, c) {
                    total = total.saturating_add(self.ways[len - i - 1][t as usize]);
                }
            }
            match self.step(q, digit) {
                Some(t) => q = t,
                None => {
                    matched = false;
                    break;
                }
            }
        }
        if matched && self.accepting[q as usize] {
            total += 1;
        }
        total as u64
    }

    fn smallest_completion(&self, mut q: u32, m: usize, out: &mut Vec<u8>) {
        for rem in (0..m).rev() {
            let (c, t) = (0..self.base as u8)
                .find_map(|c| self.step(q, c).filter(|&t| self.ways[rem][t as usize] > 0).map(|t| (c, t)))
                .expect("completion exists");
            out.push(c);
            q = t;
        }
    }

    /// Smallest accepted integer `>= x`, if one fits in `u64`.
    pub fn next_at_least(&self, x: u64) -> Option<u64> {
        let x = x.max(1);
        let d = rep(x, self.base);
        let len = d.len();
        let mut states = Vec::with_capacity(len + 1);
        states.push(0u32);
        for &c in &d {
            match self.step(*states.last().unwrap(), c) {
                Some(t) => states.push(t),
                None => break,
            }
        }
        if states.len() == len + 1 && self.accepting[states[len] as usize] {
            return Some(x);
        }
        let valid = states.len() - 1;
        for i in (0..=valid.min(len - 1)).rev() {
            let q = states[i];
            for c in d[i] + 1..self.base as u8 {
                if let Some(t) = self.step(q, c) {
                    if self.ways[len - i - 1][t as usize] > 0 {
                        let mut out = d[..i].to_vec();
                        out.push(c);
                        self.smallest_completion(t, len - i - 1, &mut out);
                        return num(&out, self.base);
                    }
                }
            }
        }
        for l in len + 1..=self.max_len() {
            if self.ways[l][0] > 0 {
                let mut out = Vec::with_capacity(l);
                self.smallest_completion(0, l, &mut out);
                return num(&out, self.base);
            }
        }
        None
    }
}

#[derive(Clone, Debug)]
struct AutomatonSet(Arc<DigitAutomaton>);

impl IntegerSource for AutomatonSet {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        let a = &self.0;
        let mut next = Some(start.max(1));
        Box::new(std::iter::from_fn(move || {
            let y = a.next_at_least(next?)?;
            next = y.checked_add(1);
            Some(y)
        }))
    }

    fn membership(&self, n: u64) -> Option<bool> {
        Some(self.0.accepts(n))
    }

    fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        Some(self.0.count_le(b) - self.0.count_le(a - 1))
    }
}

fn check_base(k: u64) -> Result<()> {
    if !(2..=36).contains(&k) {
        return Err(ZetaError::Parameter(format!("base must be in 2..=36, got {k}")));
    }
    Ok(())
}

/// Automaton for `Γ*` with a nonzero leading digit.
pub fn digit_automaton(k: u64, allowed: &[u8]) -> Result<DigitAutomaton> {
    check_base(k)?;
    if let Some(&d) = allowed.iter().find(|&&d| d as u64 >= k) {
        return Err(ZetaError::Parameter(format!("digit {d} is not in base {k}")));
    }
    if allowed.iter().all(|&d| d == 0) {
        return Err(ZetaError::Parameter(
            "digit set must contain a nonzero digit (Γ ⊆ {0} has no valid expansions)".into(),
        ));
    }
    let ku = k as usize;
    let mut trans = vec![NONE; 2 * ku];
    for &d in allowed {
        if d != 0 {
            trans[d as usize] = 1;
        }
        trans[ku + d as usize] = 1;
    }
    Ok(DigitAutomaton::new(k, trans, vec![false, true]))
}

/// `{n : every base-k digit of n lies in allowed}`.
pub fn gen_digit_set(k: u64, allowed: &[u8]) -> Result<IntegerSet> {
    let a = digit_automaton(k, allowed)?;
    let mut sorted = allowed.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let label = format!("digits:k={k},allow={}", format_word(&sorted));
    Ok(IntegerSet::new(AutomatonSet(Arc::new(a)), label))
}

/// Parameters of a code set `{n : rep_k(n) ∈ ΔB*}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstantaneousCodeSpec {
    pub base: u64,
    /// Allowed leading digits Δ.
    pub leading: Vec<u8>,
    /// The code words B.
    pub words: Vec<Vec<u8>>,
}

impl InstantaneousCodeSpec {
    pub fn new(base: u64, leading: Vec<u8>, words: Vec<Vec<u8>>) -> Self {
        InstantaneousCodeSpec { base, leading, words }
    }

    /// Parses `k=3,delta=2,B=0|2`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut base = None;
        let mut delta = None;
        let mut words = None;
        for part in s.split(',') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| ZetaError::Usage(format!("expected key=value in code spec, got {part:?}")))?;
            match key.trim() {
                "k" => {
                    base = Some(
                        val.parse::<u64>()
                            .map_err(|_| ZetaError::Usage(format!("bad base {val:?}")))?,
                    )
                }
                "delta" => delta = Some(val.to_string()),
                "B" | "b" => words = Some(val.to_string()),
                other => return Err(ZetaError::Usage(format!("unknown code spec key {other:?}"))),
            }
        }
        let base = base.ok_or_else(|| ZetaError::Usage("code spec needs k=".into()))?;
        check_base(base).map_err(|e| ZetaError::Usage(e.to_string()))?;
        let leading = parse_word(&delta.ok_or_else(|| ZetaError::Usage("code spec needs delta=".into()))?, base)?;
        let words = words
            .ok_or_else(|| ZetaError::Usage("code spec needs B=".into()))?
            .split('|')
            .map(|w| parse_word(w, base))
            .collect::<Result<Vec<_>>>()?;
        Ok(InstantaneousCodeSpec { base, leading, words })
    }

    /// Greedy factorisation of a digit string as one leading digit followed by
    /// code words; unique because B is prefix-free.
    pub fn factor(&self, digits: &[u8]) -> Option<(u8, Vec<usize>)> {
        let (&first, mut rest) = digits.split_first()?;
        if !self.leading.contains(&first) {
            return None;
        }
        let mut parts = Vec::new();
        while !rest.is_empty() {
            let idx = self.words.iter().position(|w| rest.starts_with(w))?;
            parts.push(idx);
            rest = &rest[self.words[idx].len()..];
        }
        Some((first, parts))
    }
}

impl fmt::Display for InstantaneousCodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.words.iter().map(|w| format_word(w)).collect();
        write!(f, "k={},delta={},B={}", self.base, format_word(&self.leading), words.join("|"))
    }
}

/// Automaton for `ΔB*`.
pub fn code_automaton(spec: &InstantaneousCodeSpec) -> Result<DigitAutomaton> {
    validate_code(spec).map_err(ZetaError::InvalidCode)?;
    let k = spec.base as usize;
    // state 0: leading digit; state 1: trie root
    let mut trans = vec![NONE; 2 * k];
    for &a in &spec.leading {
        trans[a as usize] = 1;
    }
    let mut states = 2u32;
    for w in &spec.words {
        let mut q = 1u32;
        for (i, &c) in w.iter().enumerate() {
            let slot = q as usize * k + c as usize;
            if i + 1 == w.len() {
                trans[slot] = 1;
            } else {
                if trans[slot] == NONE {
                    trans[slot] = states;
                    states += 1;
                    trans.extend(std::iter::repeat_n(NONE, k));
                }
                q = trans[slot];
            }
        }
    }
    let mut accepting = vec![false; states as usize];
    accepting[1] = true;
    Ok(DigitAutomaton::new(spec.base, trans, accepting))
}

/// `{n : rep_k(n) ∈ ΔB*}`.
pub fn gen_code_set(spec: &InstantaneousCodeSpec) -> Result<IntegerSet> {
    let a = code_automaton(spec)?;
    Ok(IntegerSet::new(AutomatonSet(Arc::new(a)), format!("code:{spec}")))
}
