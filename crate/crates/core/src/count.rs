//! Range counts, dyadic count profiles and truncated zeta sums.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Result, ZetaError};
use crate::numeric::binary_length;
use crate::set::{euclidean_norm_floor, l1_norm, Budget, IntegerSet, LatticePointSet};

/// `|A ∩ [a, b]|`, using the set's closed-form count when it has one.
pub fn count_range(set: &IntegerSet, a: u64, b: u64, budget: Budget) -> Result<u64> {
    if a == 0 {
        return Err(ZetaError::Usage("count_range requires a >= 1".into()));
    }
    if a > b {
        return Err(ZetaError::Range { a, b });
    }
    if let Some(c) = set.exact_count(a, b) {
        return Ok(c);
    }
    let mut count = 0u64;
    for x in set.iter_from(a) {
        if x > b {
            break;
        }
        if count >= budget.0 {
            return Err(ZetaError::BudgetExceeded {
                budget: budget.0,
                partial: count,
            });
        }
        count += 1;
    }
    Ok(count)
}

/// Which norm indexes the dyadic blocks of a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// The integer itself (sets of positive integers).
    Value,
    /// Floor of the Euclidean norm (lattice sets).
    Euclidean,
    /// L¹ norm (lattice sets).
    L1,
    /// Length of the binary representation; block `k` holds `A₌ₖ`.
    BinaryLength,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::Value => "value",
            NormKind::Euclidean => "euclidean",
            NormKind::L1 => "l1",
            NormKind::BinaryLength => "binary-length",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormKind {
    type Err = ZetaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "value" => Ok(NormKind::Value),
            "euclidean" | "l2" => Ok(NormKind::Euclidean),
            "l1" => Ok(NormKind::L1),
            "binary-length" | "binary" => Ok(NormKind::BinaryLength),
            other => Err(ZetaError::Usage(format!("unknown norm kind {other:?}"))),
        }
    }
}

/// Per-dyadic-block counts of a set.
///
/// `blocks[n]` counts elements whose norm lies in `[2ⁿ, 2ⁿ⁺¹)` and
/// `cumulative[n]` counts norms in the closed range `[1, 2ⁿ]`, so
/// `cumulative[n] = Σ_{m<n} blocks[m] + boundary[n]` where `boundary[n]`
/// counts norms equal to `2ⁿ`. For [`NormKind::BinaryLength`] block `k` is
/// `A₌ₖ`, `boundary = blocks` and `cumulative` is the plain prefix sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountProfile {
    pub norm: NormKind,
    /// Dimension of the ambient lattice (1 for sets of positive integers).
    pub ambient_dim: usize,
    pub blocks: Vec<BigUint>,
    pub boundary: Vec<BigUint>,
    pub cumulative: Vec<BigUint>,
}

impl CountProfile {
    pub fn from_blocks(norm: NormKind, ambient_dim: usize, blocks: Vec<BigUint>, boundary: Vec<BigUint>) -> Self {
        assert_eq!(blocks.len(), boundary.len());
        let mut cumulative = Vec::with_capacity(blocks.len());
        let mut below = BigUint::zero();
        for (b, e) in blocks.iter().zip(&boundary) {
            cumulative.push(&below + e);
            below += b;
        }
        CountProfile {
            norm,
            ambient_dim,
            blocks,
            boundary,
            cumulative,
        }
    }

    fn from_u64(norm: NormKind, ambient_dim: usize, blocks: &[u64], boundary: &[u64]) -> Self {
        Self::from_blocks(
            norm,
            ambient_dim,
            blocks.iter().map(|&x| BigUint::from(x)).collect(),
            boundary.iter().map(|&x| BigUint::from(x)).collect(),
        )
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(Zero::is_zero) && self.boundary.iter().all(Zero::is_zero)
    }

    /// True when both block and cumulative counts are pointwise `<=` those of `other`.
    pub fn is_pointwise_le(&self, other: &CountProfile) -> bool {
        self.blocks.len() == other.blocks.len()
            && self.blocks.iter().zip(&other.blocks).all(|(a, b)| a <= b)
            && self.cumulative.iter().zip(&other.cumulative).all(|(a, b)| a <= b)
    }

    /// Writes `n,block_count,cumulative_count`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "block_count", "cumulative_count"])?;
        for (n, (b, c)) in self.blocks.iter().zip(&self.cumulative).enumerate() {
            w.write_record([n.to_string(), b.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Borrowed view of either kind of set.
#[derive(Clone, Copy, Debug)]
pub enum SetRef<'a> {
    Integers(&'a IntegerSet),
    Lattice(&'a LatticePointSet),
}

impl<'a> From<&'a IntegerSet> for SetRef<'a> {
    fn from(s: &'a IntegerSet) -> Self {
        SetRef::Integers(s)
    }
}

impl<'a> From<&'a LatticePointSet> for SetRef<'a> {
    fn from(s: &'a LatticePointSet) -> Self {
        SetRef::Lattice(s)
    }
}

/// Dyadic count profile of `set` for blocks `0..=n_max`.
pub fn block_profile<'a>(set: impl Into<SetRef<'a>>, norm: NormKind, n_max: usize, budget: Budget) -> Result<CountProfile> {
    match (set.into(), norm) {
        (SetRef::Integers(s), NormKind::Value) => value_profile(s, n_max, budget),
        (SetRef::Integers(s), NormKind::BinaryLength) => length_profile(s, n_max, budget),
        (SetRef::Lattice(s), NormKind::Euclidean | NormKind::L1) => Ok(lattice_profile(s, norm, n_max)),
        (SetRef::Integers(_), k) => Err(ZetaError::Usage(format!(
            "norm kind {k} applies to lattice sets; use value or binary-length for integer sets"
        ))),
        (SetRef::Lattice(_), k) => Err(ZetaError::Usage(format!(
            "norm kind {k} applies to integer sets; use euclidean or l1 for lattice sets"
        ))),
    }
}

fn value_profile(set: &IntegerSet, n_max: usize, budget: Budget) -> Result<CountProfile> {
    if n_max > 63 {
        return Err(ZetaError::Usage(format!(
            "value profiles are limited to n_max <= 63 (got {n_max})"
        )));
    }
    let mut blocks = vec![0u64; n_max + 1];
    let mut boundary = vec![0u64; n_max + 1];
    if set.has_exact_count() {
        for n in 0..=n_max {
            let lo = 1u64 << n;
            let hi = lo.wrapping_shl(1).wrapping_sub(1);
            let hi = if n == 63 { u64::MAX } else { hi };
            blocks[n] = set.exact_count(lo, hi).unwrap();
            boundary[n] = set.exact_count(lo, lo).unwrap();
        }
    } else {
        let bound = if n_max == 63 { u64::MAX } else { (1u64 << (n_max + 1)) - 1 };
        let mut seen = 0u64;
        for x in set.iter().take_while(|&x| x <= bound) {
            if seen >= budget.0 {
                return Err(ZetaError::BudgetExceeded {
                    budget: budget.0,
                    partial: seen,
                });
            }
            seen += 1;
            let n = binary_length(x) as usize - 1;
            blocks[n] += 1;
            if x.is_power_of_two() {
                boundary[n] += 1;
            }
        }
    }
    Ok(CountProfile::from_u64(NormKind::Value, 1, &blocks, &boundary))
}

fn length_profile(set: &IntegerSet, n_max: usize, budget: Budget) -> Result<CountProfile> {
    if n_max > 64 {
        return Err(ZetaError::Usage(format!(
            "binary-length profiles are limited to lengths <= 64 (got {n_max})"
        )));
    }
    let mut blocks = vec![0u64; n_max + 1];
    if set.has_exact_count() {
        for k in 1..=n_max {
            let lo = 1u64 << (k - 1);
            let hi = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
            blocks[k] = set.exact_count(lo, hi).unwrap();
        }
    } else if n_max >= 1 {
        let bound = if n_max == 64 { u64::MAX } else { (1u64 << n_max) - 1 };
        let mut seen = 0u64;
        for x in set.iter().take_while(|&x| x <= bound) {
            if seen >= budget.0 {
                return Err(ZetaError::BudgetExceeded {
                    budget: budget.0,
                    partial: seen,
                });
            }
            seen += 1;
            blocks[binary_length(x) as usize] += 1;
        }
    }
    Ok(CountProfile::from_u64(NormKind::BinaryLength, 1, &blocks, &blocks))
}

fn lattice_profile(set: &LatticePointSet, norm: NormKind, n_max: usize) -> CountProfile {
    let mut blocks = vec![0u64; n_max + 1];
    let mut boundary = vec![0u64; n_max + 1];
    for p in set.iter() {
        let v = match norm {
            NormKind::Euclidean => euclidean_norm_floor(p),
            _ => l1_norm(p),
        };
        if v == 0 {
            continue;
        }
        let n = binary_length(v) as usize - 1;
        if n <= n_max {
            blocks[n] += 1;
            if v.is_power_of_two() {
                boundary[n] += 1;
            }
        }
    }
    CountProfile::from_u64(norm, set.dim(), &blocks, &boundary)
}

/// Result of a truncated zeta sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaPartial {
    pub value: f64,
    pub terms: u64,
    /// False when the enumeration budget cut the sum short.
    pub complete: bool,
}

/// `Σ norm(x)^{-s}` over elements with `norm(x) <= bound`, in ascending norm order.
///
/// Lattice sums use the real Euclidean norm (or the L¹ norm) and skip the origin.
pub fn zeta_partial<'a>(set: impl Into<SetRef<'a>>, s: f64, bound: u64, norm: NormKind, budget: Budget) -> Result<ZetaPartial> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(ZetaError::Usage(format!("s must be a finite nonnegative real, got {s}")));
    }
    if bound == 0 {
        return Err(ZetaError::Usage("truncation bound must be >= 1".into()));
    }
    match (set.into(), norm) {
        (SetRef::Integers(a), NormKind::Value) => {
            let mut value = 0.0;
            let mut terms = 0u64;
            for x in a.iter().take_while(|&x| x <= bound) {
                if terms >= budget.0 {
                    return Ok(ZetaPartial {
                        value,
                        terms,
                        complete: false,
                    });
                }
                value += (x as f64).powf(-s);
                terms += 1;
            }
            Ok(ZetaPartial {
                value,
                terms,
                complete: true,
            })
        }
        (SetRef::Lattice(p), NormKind::Euclidean | NormKind::L1) => {
            let mut norms: Vec<f64> = p
                .iter()
                .filter(|q| q.iter().any(|&x| x != 0))
                .map(|q| match norm {
                    NormKind::Euclidean => q.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt(),
                    _ => l1_norm(q) as f64,
                })
                .filter(|&v| v <= bound as f64)
                .collect();
            norms.sort_by(f64::total_cmp);
            let complete = norms.len() as u64 <= budget.0;
            norms.truncate(budget.0.min(norms.len() as u64) as usize);
            Ok(ZetaPartial {
                value: norms.iter().map(|v| v.powf(-s)).sum(),
                terms: norms.len() as u64,
                complete,
            })
        }
        (_, k) => Err(ZetaError::Usage(format!("norm kind {k} does not match the set kind"))),
    }
}
