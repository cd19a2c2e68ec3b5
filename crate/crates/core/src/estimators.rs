//! Finite-scale estimates of upper and lower zeta-dimension, and a numerical
//! probe of the abscissa of convergence.
//!
//! Both estimates read the exponents `uₙ = log2 |A ∩ [1, 2ⁿ]| / n` over a tail
//! window `[n_max - w + 1, n_max]`: the upper estimate is their maximum and the
//! lower estimate their minimum. Block exponents `eₙ = log2 max(cₙ, 1) / n` are
//! reported alongside but never used for the lower estimate.

use std::io::Write;

use crate::count::CountProfile;
use crate::error::{Result, ZetaError};
use crate::numeric::log2_big;
use crate::set::{Budget, IntegerSet};

pub const DEFAULT_WINDOW: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub value: f64,
    pub window: usize,
    pub n_max: usize,
    /// The profile counts nothing at any scale.
    pub empty_set: bool,
    /// `eₙ` for `n = 0..=n_max` (`e₀ = 0`).
    pub block_exponents: Vec<f64>,
    /// `uₙ` for `n = 0..=n_max` (`u₀ = 0`).
    pub cumulative_exponents: Vec<f64>,
    /// Maximum of the block exponents over the window.
    pub block_max: f64,
    /// Least-squares slope of `log2 cum(n)` against `n` over the window.
    pub slope: Option<f64>,
}

/// Upper and lower estimates over the same window.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub upper: DimensionEstimate,
    pub lower: DimensionEstimate,
}

pub fn block_exponents(profile: &CountProfile) -> Vec<f64> {
    profile
        .blocks
        .iter()
        .enumerate()
        .map(|(n, c)| if n == 0 || c.bits() == 0 { 0.0 } else { log2_big(c) / n as f64 })
        .collect()
}

pub fn cumulative_exponents(profile: &CountProfile) -> Vec<f64> {
    profile
        .cumulative
        .iter()
        .enumerate()
        .map(|(n, c)| if n == 0 || c.bits() == 0 { 0.0 } else { log2_big(c) / n as f64 })
        .collect()
}

fn window_range(profile: &CountProfile, window: usize) -> Result<std::ops::RangeInclusive<usize>> {
    if profile.blocks.is_empty() {
        return Err(ZetaError::Usage("profile has no scales".into()));
    }
    let n_max = profile.n_max();
    if window == 0 || window > n_max {
        return Err(ZetaError::Usage(format!(
            "window must satisfy 1 <= window <= n_max = {n_max}, got {window}"
        )));
    }
    Ok(n_max + 1 - window..=n_max)
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn build(profile: &CountProfile, window: usize, pick: fn(f64, f64) -> f64) -> Result<DimensionEstimate> {
    let range = window_range(profile, window)?;
    let block = block_exponents(profile);
    let cum = cumulative_exponents(profile);
    let empty_set = profile.is_empty();
    let value = if empty_set {
        0.0
    } else {
        range
            .clone()
            .map(|n| cum[n])
            .reduce(pick)
            .unwrap()
            .clamp(0.0, profile.ambient_dim as f64)
    };
    let block_max = range.clone().map(|n| block[n]).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = range
        .clone()
        .filter(|&n| profile.cumulative[n].bits() > 0)
        .map(|n| (n as f64, log2_big(&profile.cumulative[n])))
        .collect();
    Ok(DimensionEstimate {
        value,
        window,
        n_max: profile.n_max(),
        empty_set,
        block_exponents: block,
        cumulative_exponents: cum,
        block_max,
        slope: least_squares_slope(&pts),
    })
}

pub fn upper_dim_estimate(profile: &CountProfile, window: usize) -> Result<DimensionEstimate> {
    build(profile, window, f64::max)
}

pub fn lower_dim_estimate(profile: &CountProfile, window: usize) -> Result<DimensionEstimate> {
    build(profile, window, f64::min)
}

pub fn estimate(profile: &CountProfile, window: usize) -> Result<EstimateReport> {
    Ok(EstimateReport {
        upper: upper_dim_estimate(profile, window)?,
        lower: lower_dim_estimate(profile, window)?,
    })
}

impl EstimateReport {
    /// `upper=… lower=… window=… n_max=…`.
    pub fn summary_line(&self) -> String {
        format!(
            "upper={:.6} lower={:.6} window={} n_max={}{}",
            self.upper.value,
            self.lower.value,
            self.upper.window,
            self.upper.n_max,
            if self.upper.empty_set { " empty_set=true" } else { "" }
        )
    }

    /// Writes `n,block_exponent,cumulative_exponent` for `n = 1..=n_max`, then a
    /// summary row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        w.write_record(["n", "block_exponent", "cumulative_exponent"])?;
        let e = &self.upper;
        for n in 1..=e.n_max {
            w.write_record([
                n.to_string(),
                format!("{:.6}", e.block_exponents[n]),
                format!("{:.6}", e.cumulative_exponents[n]),
            ])?;
        }
        w.write_record([
            "summary".to_string(),
            format!("upper={:.6}", self.upper.value),
            format!("lower={:.6}", self.lower.value),
            format!("window={}", e.window),
        ])?;
        w.flush()?;
        Ok(())
    }
}

/// Two-column `scale,exponent` data (cumulative exponents, six decimals).
/// A profile that counts nothing yields the header alone.
pub fn write_plot_data<W: Write>(profile: &CountProfile, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scale", "exponent"])?;
    if !profile.is_empty() {
        for (n, u) in cumulative_exponents(profile).iter().enumerate().skip(1) {
            w.write_record([n.to_string(), format!("{u:.6}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Settings for [`abscissa_probe`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeConfig {
    /// A grid point counts as divergent when the per-doubling growth ratio of
    /// the dyadic increments of the partial sums is at least this.
    pub threshold: f64,
    /// How many trailing ratios must agree.
    pub tail: usize,
    /// Intervals with more elements than this are summed from exact counts
    /// over geometric sub-blocks when the set has closed-form counts.
    pub aggregate_above: u64,
    pub sub_blocks: u32,
    pub budget: Budget,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            threshold: 1.0,
            tail: 3,
            aggregate_above: 4096,
            sub_blocks: 64,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeClass {
    Divergent,
    Convergent,
    Indeterminate,
}

/// Partial sums and classification at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRow {
    pub s: f64,
    /// `Z(N)` for each `N` of the schedule.
    pub partial_sums: Vec<f64>,
    /// Per-doubling growth ratios of consecutive increments.
    pub ratios: Vec<f64>,
    pub class: ProbeClass,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbeOutcome {
    /// Midpoint between the largest divergent and smallest convergent point;
    /// undecided points may sit between them.
    Estimate(f64),
    /// Every grid point converged; carries the smallest grid point.
    ConvergedEverywhere(f64),
    /// Every grid point diverged; carries the largest grid point.
    DivergedEverywhere(f64),
    Indeterminate,
}

/// Heuristic result of [`abscissa_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult {
    pub outcome: ProbeOutcome,
    pub rows: Vec<ProbeRow>,
}

impl ProbeResult {
    pub fn value(&self) -> Option<f64> {
        match self.outcome {
            ProbeOutcome::Estimate(v) | ProbeOutcome::ConvergedEverywhere(v) | ProbeOutcome::DivergedEverywhere(v) => {
                Some(v)
            }
            ProbeOutcome::Indeterminate => None,
        }
    }
}

/// `Σ_{x∈A, lo<x<=hi} x^{-s}` for every `s` in the grid.
fn interval_sums(set: &IntegerSet, lo: u64, hi: u64, grid: &[f64], cfg: &ProbeConfig, seen: &mut u64) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; grid.len()];
    if hi <= lo {
        return Ok(acc);
    }
    if let Some(count) = set.exact_count(lo + 1, hi) {
        if count > cfg.aggregate_above {
            let (a, b) = ((lo + 1) as f64, hi as f64 + 1.0);
            let ratio = (b / a).powf(1.0 / cfg.sub_blocks as f64);
            let mut start = lo + 1;
            for i in 1..=cfg.sub_blocks {
                let end = if i == cfg.sub_blocks { hi + 1 } else { (a * ratio.powi(i as i32)).floor() as u64 };
                if end <= start {
                    continue;
                }
                let c = set.exact_count(start, end - 1).unwrap();
                if c > 0 {
                    let mid = ((start as f64) * (end as f64)).sqrt().ln();
                    for (v, &s) in acc.iter_mut().zip(grid) {
                        *v += c as f64 * (-s * mid).exp();
                    }
                }
                start = end;
            }
            return Ok(acc);
        }
    }
    for x in set.iter_from(lo + 1).take_while(|&x| x <= hi) {
        if *seen >= cfg.budget.0 {
            return Err(ZetaError::BudgetExceeded {
                budget: cfg.budget.0,
                partial: *seen,
            });
        }
        *seen += 1;
        let l = (x as f64).ln();
        for (v, &s) in acc.iter_mut().zip(grid) {
            *v += (-s * l).exp();
        }
    }
    Ok(acc)
}

fn classify(ratios: &[f64], cfg: &ProbeConfig) -> ProbeClass {
    let tail = &ratios[ratios.len().saturating_sub(cfg.tail)..];
    if tail.is_empty() {
        ProbeClass::Indeterminate
    } else if tail.iter().all(|&r| r >= cfg.threshold) {
        ProbeClass::Divergent
    } else if tail.iter().all(|&r| r < cfg.threshold) {
        ProbeClass::Convergent
    } else {
        ProbeClass::Indeterminate
    }
}

/// Classifies each grid point as convergent or divergent from the growth of
/// the truncated zeta sums along `schedule`, and brackets the abscissa.
///
/// The increment `D_i = Z(N_{i+1}) - Z(N_i)` is normalised per doubling of
/// `N`; below the abscissa successive increments grow, above it they shrink.
pub fn abscissa_probe(set: &IntegerSet, s_grid: &[f64], schedule: &[u64], cfg: &ProbeConfig) -> Result<ProbeResult> {
    if s_grid.is_empty() || schedule.is_empty() {
        return Err(ZetaError::Usage("abscissa probe needs a nonempty grid and schedule".into()));
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZetaError::Usage("grid and schedule must be strictly ascending".into()));
    }
    if schedule[0] == 0 {
        return Err(ZetaError::Usage("schedule entries must be positive".into()));
    }
    if schedule.len() < 3 {
        return Err(ZetaError::Usage("schedule needs at least three bounds".into()));
    }
    let mut seen = 0u64;
    // pieces[j][g]: contribution of (N_{j-1}, N_j] (with N_{-1} = 0)
    let mut pieces = Vec::with_capacity(schedule.len());
    let mut prev = 0;
    for &n in schedule {
        pieces.push(interval_sums(set, prev, n, s_grid, cfg, &mut seen)?);
        prev = n;
    }
    let rows: Vec<ProbeRow> = s_grid
        .iter()
        .enumerate()
        .map(|(g, &s)| {
            let partial_sums: Vec<f64> = pieces
                .iter()
                .scan(0.0, |z, p| {
                    *z += p[g];
                    Some(*z)
                })
                .collect();
            // increments per doubling, indexed by interval (N_{i-1}, N_i]
            let per_doubling: Vec<(f64, f64)> = (1..schedule.len())
                .map(|i| {
                    let (a, b) = (schedule[i - 1] as f64, schedule[i] as f64);
                    let span = (b / a).log2();
                    ((a * b).sqrt().log2(), pieces[i][g] / span)
                })
                .collect();
            let ratios = per_doubling
                .windows(2)
                .map(|w| {
                    let ((x0, d0), (x1, d1)) = (w[0], w[1]);
                    if d1 == 0.0 {
                        0.0
                    } else if d0 == 0.0 {
                        f64::INFINITY
                    } else {
                        (d1 / d0).powf(1.0 / (x1 - x0))
                    }
                })
                .collect::<Vec<_>>();
            let class = classify(&ratios, cfg);
            ProbeRow {
                s,
                partial_sums,
                ratios,
                class,
            }
        })
        .collect();

    let classes: Vec<ProbeClass> = rows.iter().map(|r| r.class).collect();
    // the grid must read divergent, then undecided, then convergent
    let last_div = classes.iter().rposition(|&c| c == ProbeClass::Divergent);
    let first_conv = classes.iter().position(|&c| c == ProbeClass::Convergent);
    let ordered = match (last_div, first_conv) {
        (Some(d), Some(c)) => d < c && classes[d + 1..c].iter().all(|&x| x == ProbeClass::Indeterminate),
        _ => true,
    } && classes[..last_div.map_or(0, |d| d + 1)].iter().all(|&x| x == ProbeClass::Divergent)
        && classes[first_conv.unwrap_or(classes.len())..].iter().all(|&x| x == ProbeClass::Convergent);
    let undecided = classes.contains(&ProbeClass::Indeterminate);
    let outcome = match (ordered, last_div, first_conv) {
        (false, _, _) => ProbeOutcome::Indeterminate,
        (true, Some(d), Some(c)) => ProbeOutcome::Estimate(0.5 * (s_grid[d] + s_grid[c])),
        (true, None, Some(_)) if !undecided => ProbeOutcome::ConvergedEverywhere(s_grid[0]),
        (true, Some(_), None) if !undecided => ProbeOutcome::DivergedEverywhere(*s_grid.last().unwrap()),
        _ => ProbeOutcome::Indeterminate,
    };
    Ok(ProbeResult { outcome, rows })
}

/// `lo, lo+step, …` up to and including `hi` (within rounding).
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

/// `2^lo, 2^{lo+1}, …, 2^hi`.
pub fn doubling_schedule(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|e| 1u64 << e).collect()
}
