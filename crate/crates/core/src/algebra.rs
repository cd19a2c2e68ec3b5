//! Set operations: pointwise sums and products, Cartesian products, affine
//! images, unions and bounded-connectivity components.

use std::collections::HashMap;
use std::io::Write;

use num_bigint::BigUint;

use crate::count::{CountProfile, NormKind};
use crate::error::{Result, ZetaError};
use crate::numeric::isqrt_u128;
use crate::set::{Budget, IntegerSet, IntegerSource, LatticePointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointwiseOp {
    Sum,
    Product,
}

/// `{a∘b ≤ bound : a ∈ A, b ∈ B}`.
pub fn pointwise(a: &IntegerSet, b: &IntegerSet, op: PointwiseOp, bound: u64, budget: Budget) -> Result<IntegerSet> {
    if bound > budget.0 {
        return Err(ZetaError::BudgetExceeded {
            budget: budget.0,
            partial: 0,
        });
    }
    let xs = a.collect_up_to(bound, budget)?;
    let ys = b.collect_up_to(bound, budget)?;
    let (Some(&min_y), false) = (ys.first(), xs.is_empty()) else {
        return Ok(IntegerSet::empty());
    };
    let mut hit = vec![false; bound as usize + 1];
    let mut work = 0u64;
    for &x in &xs {
        // only x with x∘min(B) <= bound can contribute
        let fits = match op {
            PointwiseOp::Sum => x.checked_add(min_y).is_some_and(|v| v <= bound),
            PointwiseOp::Product => x.checked_mul(min_y).is_some_and(|v| v <= bound),
        };
        if !fits {
            break;
        }
        for &y in &ys {
            let v = match op {
                PointwiseOp::Sum => x + y,
                PointwiseOp::Product => match x.checked_mul(y) {
                    Some(v) => v,
                    None => break,
                },
            };
            if v > bound {
                break;
            }
            work += 1;
            if work > budget.0 {
                return Err(ZetaError::BudgetExceeded {
                    budget: budget.0,
                    partial: work,
                });
            }
            hit[v as usize] = true;
        }
    }
    let out: Vec<u64> = hit
        .iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(i, _)| i as u64)
        .collect();
    let sym = if op == PointwiseOp::Sum { "+" } else { "*" };
    Ok(IntegerSet::finite(out)?.with_label(format!("({}){sym}({})", a.label(), b.label())))
}

/// Points `(a, b)` with `a ∈ A`, `b ∈ B` and `a² + b² <= radius²`.
pub fn cartesian(a: &IntegerSet, b: &IntegerSet, radius: u64, budget: Budget) -> Result<LatticePointSet> {
    let xs = a.collect_up_to(radius, budget)?;
    let ys = b.collect_up_to(radius, budget)?;
    let r2 = radius as u128 * radius as u128;
    let mut coords = Vec::new();
    for &x in &xs {
        let room = r2 - x as u128 * x as u128;
        for &y in ys.iter().take_while(|&&y| (y as u128) * (y as u128) <= room) {
            if (coords.len() / 2) as u64 >= budget.0 {
                return Err(ZetaError::BudgetExceeded {
                    budget: budget.0,
                    partial: (coords.len() / 2) as u64,
                });
            }
            coords.push(x as i64);
            coords.push(y as i64);
        }
    }
    LatticePointSet::from_flat(2, coords)
}

/// Euclidean profile of `A × B` from closed-form counts, without building the
/// product. One factor is streamed, the other must have exact counts.
pub fn cartesian_profile(a: &IntegerSet, b: &IntegerSet, n_max: usize, budget: Budget) -> Result<CountProfile> {
    if n_max > 60 {
        return Err(ZetaError::Usage(format!("product profiles are limited to n_max <= 60, got {n_max}")));
    }
    let (stream, counted) = if b.has_exact_count() {
        (a, b)
    } else if a.has_exact_count() {
        (b, a)
    } else {
        return Err(ZetaError::Usage(
            "cartesian_profile needs closed-form counts for at least one factor".into(),
        ));
    };
    let top = 1u64 << (n_max + 1);
    let xs = stream.collect_up_to(top, budget)?;
    // pairs with a² + b² < t
    let below = |t: u128| -> u64 {
        xs.iter()
            .take_while(|&&x| (x as u128) * (x as u128) < t)
            .map(|&x| {
                let y_max = isqrt_u128(t - (x as u128) * (x as u128) - 1) as u64;
                if y_max == 0 {
                    0
                } else {
                    counted.exact_count(1, y_max).unwrap()
                }
            })
            .sum()
    };
    let pow4 = |n: usize| 1u128 << (2 * n);
    let mut blocks = Vec::with_capacity(n_max + 1);
    let mut boundary = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        // floor(norm) in [2ⁿ, 2ⁿ⁺¹) iff 4ⁿ <= a²+b² < 4ⁿ⁺¹
        blocks.push(BigUint::from(below(pow4(n + 1)) - below(pow4(n))));
        let next = ((1u128 << n) + 1) * ((1u128 << n) + 1);
        boundary.push(BigUint::from(below(next) - below(pow4(n))));
    }
    Ok(CountProfile::from_blocks(NormKind::Euclidean, 2, blocks, boundary))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineMode {
    Translate,
    Dilate,
}

struct Affine {
    inner: IntegerSet,
    k: u64,
    mode: AffineMode,
}

impl IntegerSource for Affine {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        let k = self.k;
        match self.mode {
            AffineMode::Translate => Box::new(
                self.inner
                    .iter_from(start.saturating_sub(k).max(1))
                    .map_while(move |x| x.checked_add(k)),
            ),
            AffineMode::Dilate => Box::new(
                self.inner
                    .iter_from(start.div_ceil(k).max(1))
                    .map_while(move |x| x.checked_mul(k)),
            ),
        }
    }

    fn membership(&self, n: u64) -> Option<bool> {
        match self.mode {
            AffineMode::Translate => {
                if n <= self.k {
                    Some(false)
                } else {
                    self.inner.membership(n - self.k)
                }
            }
            AffineMode::Dilate => {
                if !n.is_multiple_of(self.k) {
                    Some(false)
                } else {
                    self.inner.membership(n / self.k)
                }
            }
        }
    }

    fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        if !self.inner.has_exact_count() {
            return None;
        }
        let (lo, hi) = match self.mode {
            AffineMode::Translate => {
                if b <= self.k {
                    return Some(0);
                }
                (a.saturating_sub(self.k).max(1), b - self.k)
            }
            AffineMode::Dilate => (a.div_ceil(self.k), b / self.k),
        };
        if hi == 0 {
            return Some(0);
        }
        self.inner.exact_count(lo.max(1), hi)
    }

    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }
}

/// `k + A` or `kA`, with closed-form counts carried over.
pub fn affine(a: &IntegerSet, k: u64, mode: AffineMode) -> Result<IntegerSet> {
    if k == 0 {
        return Err(ZetaError::Parameter("affine map needs k >= 1".into()));
    }
    let label = match mode {
        AffineMode::Translate => format!("{k}+({})", a.label()),
        AffineMode::Dilate => format!("{k}*({})", a.label()),
    };
    Ok(IntegerSet::new(
        Affine {
            inner: a.clone(),
            k,
            mode,
        },
        label,
    ))
}

struct Union(IntegerSet, IntegerSet);

impl IntegerSource for Union {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        let mut a = self.0.iter_from(start).peekable();
        let mut b = self.1.iter_from(start).peekable();
        Box::new(std::iter::from_fn(move || match (a.peek().copied(), b.peek().copied()) {
            (None, None) => None,
            (Some(_), None) => a.next(),
            (None, Some(_)) => b.next(),
            (Some(x), Some(y)) => {
                if x == y {
                    b.next();
                }
                if x <= y {
                    a.next()
                } else {
                    b.next()
                }
            }
        }))
    }

    fn membership(&self, n: u64) -> Option<bool> {
        Some(self.0.membership(n)? || self.1.membership(n)?)
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite() && self.1.is_finite()
    }
}

pub fn union(a: &IntegerSet, b: &IntegerSet) -> IntegerSet {
    IntegerSet::new(Union(a.clone(), b.clone()), format!("({})|({})", a.label(), b.label()))
}

/// A maximal set of points joined by steps of Euclidean length at most `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub id: usize,
    /// Indices into the input, ascending.
    pub members: Vec<usize>,
}

struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

/// r-connected components of a finite point set, found with grid buckets of
/// side `r` so only neighbouring buckets are compared.
///
/// Components are ordered by their smallest member index.
pub fn bounded_components(points: &LatticePointSet, r: u64) -> Result<Vec<Component>> {
    if r == 0 {
        return Err(ZetaError::Parameter("r must be >= 1".into()));
    }
    let d = points.dim();
    let ri = r as i64;
    let r2 = r as i128 * r as i128;
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        buckets.entry(p.iter().map(|&x| x.div_euclid(ri)).collect()).or_default().push(i);
    }
    let mut dsu = Dsu::new(points.len());
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let o = (code % 3) as i64 - 1;
                    code /= 3;
                    o
                })
                .collect()
        })
        .collect();
    for (key, members) in &buckets {
        for off in &offsets {
            let nk: Vec<i64> = key.iter().zip(off).map(|(a, b)| a + b).collect();
            // each unordered bucket pair once
            if nk < *key {
                continue;
            }
            let Some(other) = buckets.get(&nk) else { continue };
            for &i in members {
                for &j in other {
                    if nk == *key && j <= i {
                        continue;
                    }
                    let dist2: i128 = points
                        .point(i)
                        .iter()
                        .zip(points.point(j))
                        .map(|(a, b)| (*a as i128 - *b as i128).pow(2))
                        .sum();
                    if dist2 <= r2 {
                        dsu.union(i, j);
                    }
                }
            }
        }
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Component> = Vec::new();
    for i in 0..points.len() {
        let root = dsu.find(i);
        let id = *by_root.entry(root).or_insert_with(|| {
            comps.push(Component {
                id: comps.len(),
                members: Vec::new(),
            });
            comps.len() - 1
        });
        comps[id].members.push(i);
    }
    Ok(comps)
}

/// [`bounded_components`] for a finite window of integers.
pub fn integer_components(values: &[u64], r: u64) -> Result<Vec<Component>> {
    let pts = LatticePointSet::from_points(1, values.iter().map(|&v| [v as i64]))?;
    bounded_components(&pts, r)
}

/// Writes `component_id,size,min_element,max_element`. Points are written as
/// space-separated coordinates and compared lexicographically.
pub fn write_components_csv<W: Write>(points: &LatticePointSet, comps: &[Component], out: W) -> Result<()> {
    let fmt = |i: usize| {
        points
            .point(i)
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["component_id", "size", "min_element", "max_element"])?;
    for c in comps {
        // points are stored sorted, so member indices are in lexicographic order
        let (lo, hi) = (c.members[0], *c.members.last().unwrap());
        w.write_record([c.id.to_string(), c.members.len().to_string(), fmt(lo), fmt(hi)])?;
    }
    w.flush()?;
    Ok(())
}
