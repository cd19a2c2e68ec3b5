//! c-discrete self-similar fractals built by repeated cell substitution.

use std::fmt;

use crate::error::{Result, ZetaError};
use crate::set::{Budget, LatticePointSet};

/// Planar rotation by a multiple of a quarter turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rotation {
    R0,
    R1,
    R2,
    R3,
}

impl Rotation {
    pub fn quarter_turns(self) -> u8 {
        match self {
            Rotation::R0 => 0,
            Rotation::R1 => 1,
            Rotation::R2 => 2,
            Rotation::R3 => 3,
        }
    }

    fn from_turns(t: u8) -> Self {
        match t % 4 {
            0 => Rotation::R0,
            1 => Rotation::R1,
            2 => Rotation::R2,
            _ => Rotation::R3,
        }
    }

    /// Rotates a point of `[0, side)²` counter-clockwise about the square's centre.
    pub fn apply(self, x: i64, y: i64, side: i64) -> (i64, i64) {
        let (mut x, mut y) = (x, y);
        for _ in 0..self.quarter_turns() {
            (x, y) = (side - 1 - y, x);
        }
        (x, y)
    }
}

/// Maps each cell of `{1..c}^d` to a rotation or to "no".
///
/// Cells are stored in lexicographic order of `(i_1, …, i_d)`, `i_1` most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionRule {
    c: u64,
    d: usize,
    cells: Vec<Option<Rotation>>,
}

impl SubstitutionRule {
    pub fn new(c: u64, d: usize, cells: Vec<Option<Rotation>>) -> Result<Self> {
        if c < 2 {
            return Err(ZetaError::InvalidRule(format!("contraction base must be >= 2, got {c}")));
        }
        if d == 0 {
            return Err(ZetaError::InvalidRule("lattice dimension must be >= 1".into()));
        }
        let expected = (c as usize)
            .checked_pow(d as u32)
            .ok_or_else(|| ZetaError::InvalidRule("c^d overflows".into()))?;
        if cells.len() != expected {
            return Err(ZetaError::InvalidRule(format!(
                "rule lists {} cells, expected c^d = {expected}",
                cells.len()
            )));
        }
        if cells[0] != Some(Rotation::R0) {
            return Err(ZetaError::InvalidRule("the cell (1,…,1) must map to R0".into()));
        }
        if d != 2 && cells.iter().any(|c| matches!(c, Some(r) if *r != Rotation::R0)) {
            return Err(ZetaError::InvalidRule(
                "rotations R1–R3 are only defined for d = 2".into(),
            ));
        }
        Ok(SubstitutionRule { c, d, cells })
    }

    /// Parses a cell string: `0`–`3` select a rotation, `.` or `n` mean "no".
    pub fn from_cells(c: u64, d: usize, rule: &str) -> Result<Self> {
        let cells = rule
            .chars()
            .map(|ch| match ch {
                '0'..='3' => Ok(Some(Rotation::from_turns(ch as u8 - b'0'))),
                '.' | 'n' => Ok(None),
                other => Err(ZetaError::InvalidRule(format!("unknown cell symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(c, d, cells)
    }

    /// The planar Sierpinski rule: every cell but `(2,2)` keeps an unrotated copy.
    pub fn sierpinski() -> Self {
        Self::from_cells(2, 2, "000.").unwrap()
    }

    /// Every cell keeps an unrotated copy.
    pub fn full(c: u64, d: usize) -> Result<Self> {
        let n = (c as usize).pow(d as u32);
        Self::new(c, d, vec![Some(Rotation::R0); n])
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cells(&self) -> &[Option<Rotation>] {
        &self.cells
    }

    /// Number of cells that keep a copy.
    pub fn surviving(&self) -> u64 {
        self.cells.iter().filter(|c| c.is_some()).count() as u64
    }

    /// Zero-based cell coordinates of the cell with the given index.
    pub fn cell_coords(&self, index: usize) -> Vec<u64> {
        let mut out = vec![0; self.d];
        let mut rest = index as u64;
        for slot in out.iter_mut().rev() {
            *slot = rest % self.c;
            rest /= self.c;
        }
        out
    }
}

impl fmt::Display for SubstitutionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: String = self
            .cells
            .iter()
            .map(|c| match c {
                None => '.',
                Some(r) => (b'0' + r.quarter_turns()) as char,
            })
            .collect();
        write!(f, "c={},d={},rule={}", self.c, self.d, cells)
    }
}

/// `F ∩ [1, c^depth]^d` for the fractal generated by `rule`.
pub fn gen_substitution(rule: &SubstitutionRule, depth: u32, budget: Budget) -> Result<LatticePointSet> {
    let d = rule.d;
    let volume = rule
        .c
        .checked_pow(depth * d as u32)
        .ok_or_else(|| ZetaError::Parameter("c^(d·depth) overflows".into()))?;
    if volume > budget.0 {
        return Err(ZetaError::BudgetExceeded {
            budget: budget.0,
            partial: 0,
        });
    }
    // zero-based coordinates of the current stage, within [0, side)^d
    let mut points: Vec<i64> = vec![0; d];
    let mut side: i64 = 1;
    for _ in 0..depth {
        let mut next = Vec::with_capacity(points.len() * rule.surviving() as usize);
        for (idx, cell) in rule.cells.iter().enumerate() {
            let Some(rot) = cell else { continue };
            let offset: Vec<i64> = rule.cell_coords(idx).iter().map(|&i| i as i64 * side).collect();
            for p in points.chunks_exact(d) {
                if d == 2 {
                    let (x, y) = rot.apply(p[0], p[1], side);
                    next.push(x + offset[0]);
                    next.push(y + offset[1]);
                } else {
                    next.extend(p.iter().zip(&offset).map(|(a, o)| a + o));
                }
            }
        }
        points = next;
        side *= rule.c as i64;
    }
    points.iter_mut().for_each(|x| *x += 1);
    LatticePointSet::from_flat(d, points)
}
