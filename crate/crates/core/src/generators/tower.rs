//! Sets supported on tower bit-lengths whose sum has a prescribed dimension.
//!
//! With `T(1) = 1`, `T(k+1) = 2^T(k)`, elements only have binary lengths
//! `T(k)`. At length `t` the sparse set keeps offsets `[0, ⌈2^{αt}⌉)` above
//! `2^{t-1}`; the dense set keeps `[0, ⌈2^{βt}⌉)` together with the multiples
//! `j·⌊2^{αt}⌋`, `j < ⌈2^{(γ-α)t}⌉`. Offsets are clipped to the block.
//!
//! Only lengths up to `T(4) = 16` are materialized; counts at `T(5) = 65536`
//! come from [`TowerPair::counts`].

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::count::{CountProfile, NormKind};
use crate::error::{Result, ZetaError};
use crate::numeric::{binary_length, ceil_pow2, floor_pow2, log2_big};
use crate::set::{IntegerSet, IntegerSource};

/// `T(k)` for `k >= 1`, or `None` once it exceeds `u64`.
pub fn tower_value(k: u32) -> Option<u64> {
    match k {
        0 => None,
        1 => Some(1),
        _ => {
            let prev = tower_value(k - 1)?;
            if prev >= 64 {
                None
            } else {
                Some(1u64 << prev)
            }
        }
    }
}

fn is_tower_length(t: u64) -> bool {
    (1..).map_while(tower_value).take_while(|&v| v <= t).any(|v| v == t)
}

/// Exponents of the construction. The sparse exponent must differ from the
/// dense one; when `alpha > beta` the roles are swapped internally.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TowerPairSpec {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl TowerPairSpec {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ZetaError::Parameter(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if alpha == beta {
            return Err(ZetaError::Parameter("alpha = beta has no tower construction".into()));
        }
        let (lo, hi) = if alpha < beta { (alpha, beta) } else { (beta, alpha) };
        if !(hi <= gamma && gamma <= (lo + hi).min(1.0)) {
            return Err(ZetaError::Parameter(format!(
                "need max(alpha, beta) <= gamma <= min(1, alpha + beta), got gamma = {gamma}"
            )));
        }
        Ok(TowerPairSpec { alpha, beta, gamma })
    }

    fn sparse(&self) -> f64 {
        self.alpha.min(self.beta)
    }

    fn dense(&self) -> f64 {
        self.alpha.max(self.beta)
    }

    /// True when the set named `A` is built from the dense recipe.
    pub fn swapped(&self) -> bool {
        self.alpha > self.beta
    }
}

/// Offsets above `2^{t-1}` kept at one length: an initial run `[0, run)` plus
/// the multiples `j·step` for `j` in `[j_lo, j_hi)`, all below `2^{t-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct LevelShape {
    t: u64,
    run: BigUint,
    step: BigUint,
    j_lo: BigUint,
    j_hi: BigUint,
}

impl LevelShape {
    fn count(&self) -> BigUint {
        let extra = if self.j_hi > self.j_lo {
            &self.j_hi - &self.j_lo
        } else {
            BigUint::zero()
        };
        &self.run + extra
    }
}

fn div_ceil(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - 1u8) / b
}

fn sparse_level(exp: f64, t: u64) -> LevelShape {
    let half = BigUint::one() << (t - 1);
    let run = ceil_pow2(exp * t as f64).min(half);
    LevelShape {
        t,
        run,
        step: BigUint::one(),
        j_lo: BigUint::zero(),
        j_hi: BigUint::zero(),
    }
}

fn dense_level(spec: &TowerPairSpec, t: u64) -> LevelShape {
    let half = BigUint::one() << (t - 1);
    let tf = t as f64;
    let run = ceil_pow2(spec.dense() * tf).min(half.clone());
    let step = floor_pow2(spec.sparse() * tf);
    let j_lo = div_ceil(&run, &step);
    let j_hi = ceil_pow2((spec.gamma - spec.sparse()) * tf).min(div_ceil(&half, &step));
    LevelShape {
        t,
        run,
        step,
        j_lo,
        j_hi,
    }
}

/// Closed-form counts at one tower length `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerCounts {
    pub t: u64,
    /// `|A₌ₜ|`.
    pub a: BigUint,
    /// `|B₌ₜ|`.
    pub b: BigUint,
    /// `|(A+B)₌ₜ₊₁|`: `⌈2^{αt}⌉ + ⌊2^{αt}⌋·(⌈2^{(γ-α)t}⌉ - 1)` with `α` the sparse exponent.
    pub sum_next: BigUint,
    /// `log2` of the lower bound `2^{γt} - 2^{(γ-α)t}`.
    pub sum_lower_log2: f64,
    /// `log2` of the upper bound `2·2^{γt}`.
    pub sum_upper_log2: f64,
}

impl TowerCounts {
    /// `log2 |(A+B)₌ₜ₊₁| / (t+1)`.
    pub fn sum_entropy_ratio(&self) -> f64 {
        log2_big(&self.sum_next) / (self.t + 1) as f64
    }

    pub fn sum_within_bounds(&self) -> bool {
        let l = log2_big(&self.sum_next);
        l >= self.sum_lower_log2 && l <= self.sum_upper_log2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerPart {
    A,
    B,
}

/// Largest length that is materialized as integers.
const MAX_MATERIALIZED: u64 = 16;

#[derive(Clone, Copy, Debug)]
struct SmallLevel {
    t: u64,
    run: u64,
    step: u64,
    j_lo: u64,
    j_hi: u64,
}

impl SmallLevel {
    fn from_shape(s: &LevelShape) -> Self {
        SmallLevel {
            t: s.t,
            run: s.run.to_u64().unwrap(),
            step: s.step.to_u64().unwrap(),
            j_lo: s.j_lo.to_u64().unwrap(),
            j_hi: s.j_hi.to_u64().unwrap().max(s.j_lo.to_u64().unwrap()),
        }
    }

    fn base(&self) -> u64 {
        1 << (self.t - 1)
    }

    fn has_offset(&self, off: u64) -> bool {
        off < self.run || (off.is_multiple_of(self.step) && (self.j_lo..self.j_hi).contains(&(off / self.step)))
    }

    /// Number of kept offsets `<= off`.
    fn count_le(&self, off: u64) -> u64 {
        let run = self.run.min(off + 1);
        let j_top = (off / self.step + 1).min(self.j_hi);
        run + j_top.saturating_sub(self.j_lo)
    }

    fn offsets(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.run).chain((self.j_lo..self.j_hi).map(move |j| j * self.step))
    }
}

struct TowerSource {
    levels: Vec<SmallLevel>,
}

impl IntegerSource for TowerSource {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        Box::new(
            self.levels
                .iter()
                .flat_map(|l| l.offsets().map(move |o| l.base() + o))
                .skip_while(move |&x| x < start),
        )
    }

    fn membership(&self, n: u64) -> Option<bool> {
        if n == 0 {
            return Some(false);
        }
        let t = binary_length(n) as u64;
        Some(
            self.levels
                .iter()
                .find(|l| l.t == t)
                .is_some_and(|l| l.has_offset(n - l.base())),
        )
    }

    fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        let upto = |x: u64| -> u64 {
            self.levels
                .iter()
                .map(|l| {
                    if x < l.base() {
                        0
                    } else {
                        l.count_le((x - l.base()).min(l.base() - 1))
                    }
                })
                .sum()
        };
        Some(upto(b) - upto(a - 1))
    }
}

/// The two sets of the construction together with their closed-form counts.
#[derive(Clone, Debug)]
pub struct TowerPair {
    spec: TowerPairSpec,
    a: IntegerSet,
    b: IntegerSet,
}

impl TowerPair {
    pub fn spec(&self) -> &TowerPairSpec {
        &self.spec
    }

    /// Elements of `A` with binary length at most 16.
    pub fn a(&self) -> &IntegerSet {
        &self.a
    }

    /// Elements of `B` with binary length at most 16.
    pub fn b(&self) -> &IntegerSet {
        &self.b
    }

    fn shape(&self, part: TowerPart, t: u64) -> LevelShape {
        let sparse = matches!((part, self.spec.swapped()), (TowerPart::A, false) | (TowerPart::B, true));
        if sparse {
            sparse_level(self.spec.sparse(), t)
        } else {
            dense_level(&self.spec, t)
        }
    }

    /// Counts at length `t`; `t` need not be a tower value for the sum formula,
    /// but `a` and `b` are zero off the tower lengths.
    pub fn counts(&self, t: u64) -> TowerCounts {
        assert!(t >= 1);
        let on_tower = is_tower_length(t);
        let level_count = |part| if on_tower { self.shape(part, t).count() } else { BigUint::zero() };
        let tf = t as f64;
        let lo = self.spec.sparse();
        let g = self.spec.gamma;
        let reps = ceil_pow2((g - lo) * tf);
        let sum_next = ceil_pow2(lo * tf) + floor_pow2(lo * tf) * (reps - 1u8);
        let lower = {
            // log2(2^{γt} - 2^{(γ-α)t}) = γt + log2(1 - 2^{-αt})
            let gap = -(lo * tf);
            if gap == 0.0 {
                f64::NEG_INFINITY
            } else {
                g * tf + (-gap.exp2()).ln_1p() / std::f64::consts::LN_2
            }
        };
        TowerCounts {
            t,
            a: level_count(TowerPart::A),
            b: level_count(TowerPart::B),
            sum_next,
            sum_lower_log2: lower,
            sum_upper_log2: 1.0 + g * tf,
        }
    }

    /// Binary-length profile of one part, blocks `0..=n_max`.
    pub fn profile(&self, part: TowerPart, n_max: usize) -> CountProfile {
        let blocks: Vec<BigUint> = (0..=n_max as u64)
            .map(|k| {
                if k >= 1 && is_tower_length(k) {
                    self.shape(part, k).count()
                } else {
                    BigUint::zero()
                }
            })
            .collect();
        CountProfile::from_blocks(NormKind::BinaryLength, 1, blocks.clone(), blocks)
    }
}

pub fn gen_tower_pair(spec: TowerPairSpec) -> TowerPair {
    let mut pair = TowerPair {
        spec,
        a: IntegerSet::empty(),
        b: IntegerSet::empty(),
    };
    let source = |part| TowerSource {
        levels: (1..)
            .map_while(tower_value)
            .take_while(|&t| t <= MAX_MATERIALIZED)
            .map(|t| SmallLevel::from_shape(&pair.shape(part, t)))
            .collect(),
    };
    let (sa, sb) = (source(TowerPart::A), source(TowerPart::B));
    let label = |p: &str| format!("tower:{p},a={},b={},g={}", spec.alpha, spec.beta, spec.gamma);
    pair.a = IntegerSet::new(sa, label("A"));
    pair.b = IntegerSet::new(sb, label("B"));
    pair
}
