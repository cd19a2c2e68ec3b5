use crate::error::{Result, ZetaError};
use crate::set::{Budget, LatticePointSet};

/// Pairs `(m, n)` with `m + n <= 2^depth` and `C(m+n, m)` odd.
///
/// Uses the carry-free criterion: `C(m+n, m)` is odd iff `m & n == 0`.
pub fn gen_pascal_mod2(depth: u32, budget: Budget) -> Result<LatticePointSet> {
    if depth > 20 {
        return Err(ZetaError::Parameter(format!("pascal depth is limited to 20, got {depth}")));
    }
    let expected = 3u64.pow(depth) + 2;
    if expected > budget.0 {
        return Err(ZetaError::BudgetExceeded {
            budget: budget.0,
            partial: 0,
        });
    }
    let side = 1i64 << depth;
    let mask = side - 1;
    let mut coords = Vec::with_capacity(2 * expected as usize);
    for m in 0..side {
        // m & n == 0 with both below 2^depth forces m + n < 2^depth
        let free = mask ^ m;
        let mut n = free;
        loop {
            coords.push(m);
            coords.push(n);
            if n == 0 {
                break;
            }
            n = (n - 1) & free;
        }
    }
    // the two axis points with m + n = 2^depth
    coords.extend_from_slice(&[side, 0, 0, side]);
    LatticePointSet::from_flat(2, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{block_profile, NormKind};
    use num_bigint::BigUint;

    /// Parity of C(r, m) from Pascal's rule, row by row.
    fn parity_rows(max_row: usize) -> Vec<Vec<bool>> {
        let mut rows = vec![vec![true]];
        for r in 1..=max_row {
            let prev = &rows[r - 1];
            let row = (0..=r)
                .map(|m| {
                    let left = m > 0 && prev[m - 1];
                    let right = m < r && prev[m];
                    left ^ right
                })
                .collect();
            rows.push(row);
        }
        rows
    }

    #[test]
    fn membership_examples() {
        let a = gen_pascal_mod2(3, Budget::default()).unwrap();
        assert!(a.contains(&[1, 2]));
        assert!(!a.contains(&[1, 1]));
    }

    #[test]
    fn and_criterion_matches_binomial_parity() {
        let depth = 10;
        let side = 1usize << depth;
        let rows = parity_rows(side);
        let a = gen_pascal_mod2(depth, Budget::default()).unwrap();
        let mut odd = 0;
        for (r, row) in rows.iter().enumerate() {
            for (m, &is_odd) in row.iter().enumerate() {
                let n = (r - m) as i64;
                assert_eq!(a.contains(&[m as i64, n]), is_odd, "({m}, {n})");
                odd += is_odd as usize;
            }
        }
        assert_eq!(a.len(), odd);
    }

    #[test]
    fn l1_cumulative_near_power_of_three() {
        let depth = 12;
        let a = gen_pascal_mod2(depth, Budget::default()).unwrap();
        let p = block_profile(&a, NormKind::L1, depth as usize, Budget::default()).unwrap();
        for n in 0..=depth {
            // norms in [1, 2^n]: 3^n - 1 pairs below 2^n plus the two axis points at 2^n
            assert_eq!(p.cumulative[n as usize], BigUint::from(3u64.pow(n) + 1));
        }
    }
}
