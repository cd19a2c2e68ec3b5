//! Set abstractions: ascending integer streams and finite lattice point sets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, ZetaError};
use crate::numeric::isqrt_u128;

/// Default per-call enumeration budget.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "ZDIM_BUDGET";

/// Maximum number of elements a single streaming operation may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Reads `ZDIM_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u64>()
                .map(Budget)
                .map_err(|_| ZetaError::Usage(format!("{BUDGET_ENV} must be a nonnegative integer, got {v:?}"))),
            Err(_) => Ok(Budget::default()),
        }
    }
}

/// Backing implementation of an [`IntegerSet`].
///
/// `stream_from` must yield the elements `>= start` in strictly increasing order.
/// The optional hooks, when they return `Some`, must agree with the stream.
pub trait IntegerSource: Send + Sync {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_>;

    fn membership(&self, _n: u64) -> Option<bool> {
        None
    }

    /// `|A ∩ [a, b]|` for `1 <= a <= b`.
    fn exact_count(&self, _a: u64, _b: u64) -> Option<u64> {
        None
    }

    fn is_finite(&self) -> bool {
        false
    }
}

/// A set of positive integers given as an ascending stream.
#[derive(Clone)]
pub struct IntegerSet {
    source: Arc<dyn IntegerSource>,
    label: String,
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerSet").field("label", &self.label).finish()
    }
}

impl IntegerSet {
    pub fn new(source: impl IntegerSource + 'static, label: impl Into<String>) -> Self {
        IntegerSet {
            source: Arc::new(source),
            label: label.into(),
        }
    }

    /// A finite set; duplicates are removed and zeros rejected.
    pub fn finite(mut elements: Vec<u64>) -> Result<Self> {
        if elements.contains(&0) {
            return Err(ZetaError::Parameter("finite sets contain positive integers only".into()));
        }
        elements.sort_unstable();
        elements.dedup();
        let label = if elements.len() <= 8 {
            format!("finite{elements:?}")
        } else {
            format!("finite[{} elements]", elements.len())
        };
        Ok(IntegerSet::new(FiniteSet(elements), label))
    }

    pub fn empty() -> Self {
        IntegerSet::new(FiniteSet(Vec::new()), "empty")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        self.source.stream_from(1)
    }

    pub fn iter_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        self.source.stream_from(start.max(1))
    }

    /// Membership predicate, when the set provides one.
    pub fn membership(&self, n: u64) -> Option<bool> {
        self.source.membership(n)
    }

    /// Membership, falling back to a stream probe when no predicate exists.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        self.source
            .membership(n)
            .unwrap_or_else(|| self.iter_from(n).next() == Some(n))
    }

    pub fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        if a > b {
            return Some(0);
        }
        self.source.exact_count(a.max(1), b)
    }

    pub fn has_exact_count(&self) -> bool {
        self.source.exact_count(1, 1).is_some()
    }

    pub fn is_finite(&self) -> bool {
        self.source.is_finite()
    }

    /// Collects all elements `<= bound`, failing past the budget.
    pub fn collect_up_to(&self, bound: u64, budget: Budget) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for x in self.iter().take_while(|&x| x <= bound) {
            if out.len() as u64 >= budget.0 {
                return Err(ZetaError::BudgetExceeded {
                    budget: budget.0,
                    partial: out.len() as u64,
                });
            }
            out.push(x);
        }
        Ok(out)
    }
}

/// Sorted, deduplicated finite set.
#[derive(Clone, Debug)]
pub struct FiniteSet(pub(crate) Vec<u64>);

impl IntegerSource for FiniteSet {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        let i = self.0.partition_point(|&x| x < start);
        Box::new(self.0[i..].iter().copied())
    }

    fn membership(&self, n: u64) -> Option<bool> {
        Some(self.0.binary_search(&n).is_ok())
    }

    fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        let lo = self.0.partition_point(|&x| x < a);
        let hi = self.0.partition_point(|&x| x <= b);
        Some((hi - lo) as u64)
    }

    fn is_finite(&self) -> bool {
        true
    }
}

/// Floor of the Euclidean norm of an integer point.
pub fn euclidean_norm_floor(p: &[i64]) -> u64 {
    let sq: u128 = p.iter().map(|&x| (x as i128 * x as i128) as u128).sum();
    isqrt_u128(sq) as u64
}

/// L¹ norm of an integer point.
pub fn l1_norm(p: &[i64]) -> u64 {
    p.iter().map(|x| x.unsigned_abs()).sum()
}

/// A finite set of points in Z^d, stored flat and sorted lexicographically.
#[derive(Clone, PartialEq, Eq)]
pub struct LatticePointSet {
    dim: usize,
    coords: Vec<i64>,
}

impl fmt::Debug for LatticePointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticePointSet")
            .field("dim", &self.dim)
            .field("len", &self.len())
            .finish()
    }
}

impl LatticePointSet {
    /// Builds a set from flat coordinates (`dim` values per point); sorts and dedups.
    pub fn from_flat(dim: usize, coords: Vec<i64>) -> Result<Self> {
        if dim == 0 {
            return Err(ZetaError::Parameter("lattice dimension must be positive".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(ZetaError::Parameter(format!(
                "{} coordinates do not form {}-tuples",
                coords.len(),
                dim
            )));
        }
        let n = coords.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by(|&i, &j| coords[i * dim..(i + 1) * dim].cmp(&coords[j * dim..(j + 1) * dim]));
        let mut sorted = Vec::with_capacity(coords.len());
        let mut last: Option<usize> = None;
        for i in order {
            let p = &coords[i * dim..(i + 1) * dim];
            if let Some(l) = last {
                if &coords[l * dim..(l + 1) * dim] == p {
                    continue;
                }
            }
            sorted.extend_from_slice(p);
            last = Some(i);
        }
        Ok(LatticePointSet { dim, coords: sorted })
    }

    pub fn from_points<P: AsRef<[i64]>>(dim: usize, points: impl IntoIterator<Item = P>) -> Result<Self> {
        let mut coords = Vec::new();
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(ZetaError::Parameter(format!(
                    "point of arity {} in a {}-dimensional set",
                    p.len(),
                    dim
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    pub fn empty(dim: usize) -> Self {
        LatticePointSet { dim, coords: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.point(mid).cmp(p) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Number of nonzero points.
    pub fn nonzero_len(&self) -> usize {
        self.iter().filter(|p| p.iter().any(|&x| x != 0)).count()
    }
}
