//! s-gales on binary strings: validation, the supergale that succeeds on a
//! set of integers, success testing and the Kraft-type count bound.
//!
//! A string `w` of length `L` is addressed by `(L, i)` where `i` is `w` read
//! as a binary number, so `rep₂(n)` is `(bit length of n, n)`.

use std::io::Write;

use crate::count::{block_profile, NormKind};
use crate::error::{Result, ZetaError};
use crate::estimators::upper_dim_estimate;
use crate::numeric::binary_length;
use crate::set::{Budget, IntegerSet};

/// Deepest table [`Gale`] will allocate.
pub const MAX_GALE_DEPTH: u32 = 26;

/// Values `d(w) >= 1` are recognised with this slack in the log domain.
const SUCCESS_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaleMode {
    Gale,
    Supergale,
}

/// Constants chosen by [`build_supergale`].
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    /// Dimension estimate the construction was made against.
    pub estimate: f64,
    pub epsilon: f64,
    pub n0: u32,
    pub c0: f64,
    pub c1: f64,
    /// `|A₌ₖ|` for `k = 0..=depth`.
    pub level_counts: Vec<u64>,
}

/// A function on binary strings up to a fixed length, stored as `log2` values
/// (`-inf` stands for zero).
#[derive(Clone, Debug, PartialEq)]
pub struct Gale {
    s: f64,
    depth: u32,
    log_values: Vec<Vec<f64>>,
    construction: Option<Construction>,
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_GALE_DEPTH {
        return Err(ZetaError::Parameter(format!(
            "gale depth is limited to {MAX_GALE_DEPTH}, got {depth}"
        )));
    }
    Ok(())
}

impl Gale {
    /// Tabulates `log2 f(L, i)` for every string up to `depth`.
    pub fn from_fn(s: f64, depth: u32, f: impl Fn(u32, u64) -> f64) -> Result<Self> {
        check_depth(depth)?;
        let log_values = (0..=depth)
            .map(|l| (0..1u64 << l).map(|i| f(l, i).log2()).collect())
            .collect();
        Ok(Gale {
            s,
            depth,
            log_values,
            construction: None,
        })
    }

    pub fn constant(s: f64, depth: u32, value: f64) -> Result<Self> {
        Self::from_fn(s, depth, |_, _| value)
    }

    pub fn zero(s: f64, depth: u32) -> Result<Self> {
        Self::constant(s, depth, 0.0)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn construction(&self) -> Option<&Construction> {
        self.construction.as_ref()
    }

    /// `log2 d(w)` for the string of length `len` with value `index`.
    pub fn log2_value(&self, len: u32, index: u64) -> Result<f64> {
        if len > self.depth {
            return Err(ZetaError::Depth {
                requested: len as usize,
                available: self.depth as usize,
            });
        }
        Ok(self.log_values[len as usize][index as usize])
    }

    pub fn value(&self, len: u32, index: u64) -> Result<f64> {
        Ok(self.log2_value(len, index)?.exp2())
    }

    /// Writes `w,log2_value` for every string of length at most `max_len`.
    /// The empty string is written as `λ`.
    pub fn write_csv<W: Write>(&self, max_len: u32, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["w", "log2_value"])?;
        for len in 0..=max_len.min(self.depth) {
            for (i, v) in self.log_values[len as usize].iter().enumerate() {
                let word = if len == 0 {
                    "λ".to_string()
                } else {
                    format!("{:0width$b}", i, width = len as usize)
                };
                let val = if v.is_finite() { format!("{v:.9}") } else { "-inf".to_string() };
                w.write_record([word, val])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Largest violation of `d(w) = 2^{-s}[d(w0) + d(w1)]` (or `>=` for
/// supergales) over internal nodes of length below `max_len`.
///
/// Violations are measured relative to `max(1, d(w))`.
pub fn gale_deficiency_to(g: &Gale, mode: GaleMode, max_len: u32) -> f64 {
    let mut worst = 0.0f64;
    for len in 0..max_len.min(g.depth) as usize {
        let parents = &g.log_values[len];
        let kids = &g.log_values[len + 1];
        for (i, &p) in parents.iter().enumerate() {
            let d = p.exp2();
            let rhs = (-g.s).exp2() * (kids[2 * i].exp2() + kids[2 * i + 1].exp2());
            let gap = match mode {
                GaleMode::Gale => (d - rhs).abs(),
                GaleMode::Supergale => (rhs - d).max(0.0),
            };
            worst = worst.max(gap / d.max(1.0));
        }
    }
    worst
}

pub fn gale_deficiency(g: &Gale, mode: GaleMode) -> f64 {
    gale_deficiency_to(g, mode, g.depth)
}

/// True iff `d(rep₂(n)) >= 1`.
pub fn succeeds(g: &Gale, n: u64) -> Result<bool> {
    if n == 0 {
        return Err(ZetaError::Usage("success is defined for positive integers".into()));
    }
    Ok(g.log2_value(binary_length(n), n)? >= -SUCCESS_SLACK)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KraftCheck {
    /// Strings of length `k` with `d(w) >= 1`.
    pub count: u64,
    /// `2^{sk} d(λ)`.
    pub bound: f64,
    pub ok: bool,
}

pub fn kraft_check(g: &Gale, k: u32) -> Result<KraftCheck> {
    if k > g.depth {
        return Err(ZetaError::Depth {
            requested: k as usize,
            available: g.depth as usize,
        });
    }
    let count = g.log_values[k as usize].iter().filter(|&&v| v >= -SUCCESS_SLACK).count() as u64;
    let log_bound = g.s * k as f64 + g.log_values[0][0];
    let ok = count == 0 || (count as f64).log2() <= log_bound + 1e-12;
    Ok(KraftCheck {
        count,
        bound: log_bound.exp2(),
        ok,
    })
}

/// Value at `(len, index)` of the martingale that bets evenly on the length-`k`
/// strings in `members`: `2^len · (members extending w) / |members|` for
/// `len <= k`, and constant along extensions beyond `k`.
pub fn level_martingale(members: &[u64], k: u32, len: u32, index: u64) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let m = members.len() as f64;
    if len <= k {
        let ext = members.iter().filter(|&&x| x >> (k - len) == index).count() as f64;
        (len as f64).exp2() * ext / m
    } else if members.contains(&(index >> (len - k))) {
        (k as f64).exp2() / m
    } else {
        0.0
    }
}

/// `max_{n>=1} n² / 2^{εn}`.
fn c1_constant(eps: f64) -> f64 {
    let peak = (2.0 / (eps * std::f64::consts::LN_2)).ceil() as u64 + 1;
    (1..=peak.max(1))
        .map(|n| (n as f64).powi(2) / (eps * n as f64).exp2())
        .fold(0.0, f64::max)
}

/// Builds `d(w) = C₀C₁ 2^{(s-1)|w|} Σ_k k⁻² d_k(w)` over the nonempty levels
/// `k <= depth` of `set`, where `d_k` bets evenly on `A₌ₖ`.
///
/// The margin `ε = (s - est)/2` uses the upper estimate of the binary-length
/// profile (zero for sets known to be finite).
pub fn build_supergale(set: &IntegerSet, s: f64, depth: u32, budget: Budget) -> Result<Gale> {
    check_depth(depth)?;
    if depth == 0 {
        return Err(ZetaError::Parameter("gale depth must be >= 1".into()));
    }
    let estimate = if set.is_finite() {
        0.0
    } else {
        let profile = block_profile(set, NormKind::BinaryLength, depth as usize, budget)?;
        upper_dim_estimate(&profile, (depth as usize).min(crate::estimators::DEFAULT_WINDOW))?.value
    };
    let members = set.collect_up_to((1u64 << depth) - 1, budget)?;
    build_from_members(&members, s, depth, estimate)
}

/// [`build_supergale`] for the elements below `2^depth` given explicitly,
/// against a supplied dimension estimate.
pub fn build_from_members(members: &[u64], s: f64, depth: u32, estimate: f64) -> Result<Gale> {
    check_depth(depth)?;
    if !(s > estimate) {
        return Err(ZetaError::Infeasible { s, estimate });
    }
    let eps = (s - estimate) / 2.0;
    let mut levels: Vec<Vec<u64>> = vec![Vec::new(); depth as usize + 1];
    for &x in members {
        let k = binary_length(x);
        if x == 0 || k > depth {
            return Err(ZetaError::Parameter(format!("element {x} is outside [1, 2^{depth})")));
        }
        levels[k as usize].push(x);
    }
    let counts: Vec<u64> = levels.iter().map(|l| l.len() as u64).collect();
    let rate = s - eps;
    let n0 = (1..=depth)
        .filter(|&k| counts[k as usize] as f64 >= (rate * k as f64).exp2())
        .max()
        .unwrap_or(0);
    let c0 = (1..=n0)
        .map(|k| counts[k as usize] as f64 / (rate * k as f64).exp2())
        .fold(1.0, f64::max);
    let c1 = c1_constant(eps);

    // sum[L][i] = Σ_k k⁻² d_k(w), bounded by 2^depth·π²/6, so plain f64 suffices
    let mut sum: Vec<Vec<f64>> = (0..=depth).map(|l| vec![0.0; 1usize << l]).collect();
    for k in 1..=depth {
        let m = counts[k as usize];
        if m == 0 {
            continue;
        }
        let w = 1.0 / ((k * k) as f64 * m as f64);
        for &x in &levels[k as usize] {
            for l in 0..=k {
                sum[l as usize][(x >> (k - l)) as usize] += w * (l as f64).exp2();
            }
        }
    }
    // levels shorter than L are constant along extensions
    let mut carried: Vec<f64> = vec![0.0];
    for l in 1..=depth as usize {
        let k = l - 1;
        let m = counts[k];
        let mut next = vec![0.0; 1usize << l];
        for (i, v) in next.iter_mut().enumerate() {
            *v = carried[i >> 1];
        }
        if m > 0 && k >= 1 {
            let add = (k as f64).exp2() / ((k * k) as f64 * m as f64);
            for &x in &levels[k] {
                next[2 * x as usize] += add;
                next[2 * x as usize + 1] += add;
            }
        }
        for (t, c) in sum[l].iter_mut().zip(&next) {
            *t += c;
        }
        carried = next;
    }

    let log_scale = c0.log2() + c1.log2();
    let log_values = sum
        .iter()
        .enumerate()
        .map(|(l, row)| {
            row.iter()
                .map(|&v| log_scale + (s - 1.0) * l as f64 + v.log2())
                .collect()
        })
        .collect();
    Ok(Gale {
        s,
        depth,
        log_values,
        construction: Some(Construction {
            estimate,
            epsilon: eps,
            n0,
            c0,
            c1,
            level_counts: counts,
        }),
    })
}
