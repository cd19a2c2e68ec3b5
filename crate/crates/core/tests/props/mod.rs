//! Randomized properties shared by the `properties` and `acceptance` targets.
//!
//! Each property takes a case count and runs on a fixed seed, so failures
//! reproduce.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestCaseResult, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zdim_core::algebra::{
    affine, bounded_components, cartesian_profile, integer_components, pointwise, union, AffineMode, PointwiseOp,
};
use zdim_core::closed_form::{beta, code_dimension, digit_dimension, substitution_dimension, validate_code};
use zdim_core::estimators::{estimate, upper_dim_estimate};
use zdim_core::family::SetSpec;
use zdim_core::gales::{build_from_members, build_supergale, gale_deficiency, kraft_check, succeeds, GaleMode};
use zdim_core::generators::{
    gen_code_set, gen_digit_set, gen_substitution, rep, InstantaneousCodeSpec, Rotation, SubstitutionRule,
};
use zdim_core::numeric::binary_length;
use zdim_core::{block_profile, count_range, zeta_partial, Budget, CountProfile, IntegerSet, LatticePointSet, NormKind};

pub const BUDGET: Budget = Budget(1 << 34);

pub type Property = fn(u32) -> Result<(), String>;

/// Every property, by name.
pub const ALL: &[(&str, Property)] = &[
    ("union_counts", union_counts),
    ("translation_counts", translation_counts),
    ("dilation_counts", dilation_counts),
    ("l1_euclidean_sandwich", l1_euclidean_sandwich),
    ("zeta_partial_monotone", zeta_partial_monotone),
    ("stream_matches_membership", stream_matches_membership),
    ("digit_counts_brute_force", digit_counts_brute_force),
    ("substitution_self_similar", substitution_self_similar),
    ("code_parses_uniquely", code_parses_uniquely),
    ("estimates_monotone", estimates_monotone),
    ("lower_below_upper", lower_below_upper),
    ("union_estimate_is_max", union_estimate_is_max),
    ("translation_estimate_stable", translation_estimate_stable),
    ("dyadic_dilation_shifts_blocks", dyadic_dilation_shifts_blocks),
    ("cartesian_estimate_adds", cartesian_estimate_adds),
    ("beta_decreasing", beta_decreasing),
    ("solver_matches_enumeration", solver_matches_enumeration),
    ("digit_dimension_is_code_dimension", digit_dimension_is_code_dimension),
    ("substitution_growth_ratio", substitution_growth_ratio),
    ("gale_on_random_sets", gale_on_random_sets),
    ("gale_two_sided", gale_two_sided),
    ("product_estimate_is_max", product_estimate_is_max),
    ("sum_estimate_bounds", sum_estimate_bounds),
    ("integer_components_gap_scan", integer_components_gap_scan),
    ("component_windows_shrink", component_windows_shrink),
    ("pointwise_commutative_monotone", pointwise_commutative_monotone),
    ("lattice_components_all_pairs", lattice_components_all_pairs),
];

fn check<S: Strategy>(cases: u32, strat: S, test: impl Fn(S::Value) -> TestCaseResult) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strat, test).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> TestCaseResult {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn fail<E: std::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

pub fn integers(spec: &str) -> IntegerSet {
    let parsed: SetSpec = spec.parse().unwrap_or_else(|e| panic!("{spec}: {e}"));
    parsed
        .build(None, BUDGET)
        .unwrap()
        .integers()
        .cloned()
        .unwrap_or_else(|| panic!("{spec} is not an integer set"))
}

/// Named families with closed-form dimension and exact counts.
pub const FAMILIES: &[(&str, f64)] = &[
    ("squares", 0.5),
    ("cubes", 1.0 / 3.0),
    ("perfect:m=5", 0.2),
    ("all", 1.0),
    ("digits:k=3,allow=02", 0.630_929_753_571_457_4),
    ("digits:k=10,allow=012345689", 0.954_242_509_439_324_9),
    ("digits:k=4,allow=013", 0.792_481_250_360_578_1),
    ("code:k=2,delta=1,B=0|10", 0.694_241_913_630_617_3),
];

/// Families sparse enough to enumerate up to `2^25`.
const SPARSE: &[(&str, f64)] = &[
    ("squares", 0.5),
    ("cubes", 1.0 / 3.0),
    ("perfect:m=5", 0.2),
    ("digits:k=3,allow=02", 0.630_929_753_571_457_4),
    ("code:k=2,delta=1,B=0|10", 0.694_241_913_630_617_3),
];

fn family_sets(list: &[(&str, f64)]) -> Vec<IntegerSet> {
    list.iter().map(|(s, _)| integers(s)).collect()
}

fn brute_count(set: &IntegerSet, a: u64, b: u64) -> u64 {
    set.iter_from(a).take_while(|&x| x <= b).count() as u64
}

fn upper(p: &CountProfile, window: usize) -> f64 {
    upper_dim_estimate(p, window).unwrap().value
}

// ---------------------------------------------------------------- set core

pub fn union_counts(cases: u32) -> Result<(), String> {
    let sets = family_sets(FAMILIES);
    let n = sets.len();
    check(cases, (0..n, 0..n, 1u32..=16), |(i, j, e)| {
        let (a, b) = (&sets[i], &sets[j]);
        let top = 1u64 << e;
        let u = union(a, b);
        let cu = count_range(&u, 1, top, BUDGET).map_err(fail)?;
        let ca = count_range(a, 1, top, BUDGET).map_err(fail)?;
        let cb = count_range(b, 1, top, BUDGET).map_err(fail)?;
        let both = a.iter_from(1).take_while(|&x| x <= top).filter(|&x| b.contains(x)).count() as u64;
        ensure(cu == ca + cb - both && cu >= ca.max(cb), || {
            format!("{} | {} at 2^{e}: {cu} vs {ca}+{cb}-{both}", a.label(), b.label())
        })
    })
}

pub fn translation_counts(cases: u32) -> Result<(), String> {
    let sets = family_sets(FAMILIES);
    check(cases, (0..sets.len(), 1u64..=1024, 1u64..=1_000_000, 0u64..=10_000), |(i, k, a, len)| {
        let set = &sets[i];
        let t = affine(set, k, AffineMode::Translate).map_err(fail)?;
        let b = a + len;
        let want = brute_count(set, a, b);
        let via_count = count_range(&t, a + k, b + k, BUDGET).map_err(fail)?;
        let via_stream = brute_count(&t, a + k, b + k);
        ensure(via_count == want && via_stream == want, || {
            format!("{k}+{} on [{a},{b}]: {via_count}/{via_stream} vs {want}", set.label())
        })
    })
}

pub fn dilation_counts(cases: u32) -> Result<(), String> {
    let sets = family_sets(FAMILIES);
    check(cases, (0..sets.len(), 1u64..=1000, 1u64..=100_000), |(i, k, n)| {
        let set = &sets[i];
        let d = affine(set, k, AffineMode::Dilate).map_err(fail)?;
        let want = brute_count(set, 1, n);
        let via_count = count_range(&d, 1, k * n, BUDGET).map_err(fail)?;
        let via_stream = brute_count(&d, 1, k * n);
        ensure(via_count == want && via_stream == want, || {
            format!("{k}*{} up to {n}: {via_count}/{via_stream} vs {want}", set.label())
        })
    })
}

fn rotation(turns: u8) -> Rotation {
    [Rotation::R0, Rotation::R1, Rotation::R2, Rotation::R3][turns as usize % 4]
}

/// A valid rule with `c ∈ {2,3}`; rotations only when `d = 2`.
fn rule_strategy(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = SubstitutionRule> {
    (2u64..=3, dims)
        .prop_filter("at most 27 cells", |(c, d)| c.pow(*d as u32) <= 27)
        .prop_flat_map(|(c, d)| {
            let n = c.pow(d as u32) as usize;
            (Just(c), Just(d), proptest::collection::vec(proptest::option::weighted(0.6, 0u8..4), n))
        })
        .prop_map(|(c, d, mut cells)| {
            cells[0] = Some(0);
            let cells = cells
                .into_iter()
                .map(|cell| cell.map(|t| if d == 2 { rotation(t) } else { Rotation::R0 }))
                .collect();
            SubstitutionRule::new(c, d, cells).expect("valid rule")
        })
}

pub fn l1_euclidean_sandwich(cases: u32) -> Result<(), String> {
    let strat = prop_oneof![
        (rule_strategy(1..=3), 1u32..=4).prop_map(|(r, k)| (Some(r), k)),
        (Just(None), 1u32..=8),
    ];
    check(cases, strat, |(rule, depth)| {
        let points = match &rule {
            Some(r) => gen_substitution(r, depth, BUDGET).map_err(fail)?,
            None => zdim_core::generators::gen_pascal_mod2(depth, BUDGET).map_err(fail)?,
        };
        let d = points.dim();
        let extent = points.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(1);
        let n_max = (binary_length(extent * d as u64) + 2) as usize;
        // ‖p‖₁ <= √d ‖p‖ < √d (⌊‖p‖⌋ + 1)
        let shift = ((d as f64).sqrt().log2().ceil() as usize) + 1;
        let e = block_profile(&points, NormKind::Euclidean, n_max, BUDGET).map_err(fail)?;
        let l1 = block_profile(&points, NormKind::L1, n_max, BUDGET).map_err(fail)?;
        for n in 0..=n_max {
            ensure(l1.cumulative[n] <= e.cumulative[n], || format!("n={n}: L1 exceeds Euclidean"))?;
            if n + shift <= n_max {
                ensure(e.cumulative[n] <= l1.cumulative[n + shift], || {
                    format!("n={n}: Euclidean exceeds L1 at n+{shift}")
                })?;
            }
        }
        Ok(())
    })
}

pub fn zeta_partial_monotone(cases: u32) -> Result<(), String> {
    let sets = family_sets(FAMILIES);
    check(
        cases,
        (0..sets.len(), 0.0f64..2.0, 0.001f64..1.0, 1u64..=50_000, 1u64..=50_000),
        |(i, s, ds, n1, dn)| {
            let set = &sets[i];
            let z = |s: f64, n: u64| zeta_partial(set, s, n, NormKind::Value, BUDGET).map(|z| z.value);
            let (a, b) = (z(s, n1).map_err(fail)?, z(s + ds, n1).map_err(fail)?);
            let c = z(s, n1 + dn).map_err(fail)?;
            ensure(a >= b && c >= a, || format!("{}: s={s} ds={ds} n={n1}+{dn}: {a} {b} {c}", set.label()))
        },
    )
}

// ---------------------------------------------------------------- generators

fn membership_probe(set: &IntegerSet, top: u64, probes: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let stream: HashSet<u64> = set.iter_from(1).take_while(|&x| x <= top).collect();
    let mut last = 0;
    for x in set.iter_from(1).take_while(|&x| x <= top) {
        if x <= last {
            return Err(format!("{}: stream not increasing at {x}", set.label()));
        }
        last = x;
    }
    for _ in 0..probes {
        let x = rng.gen_range(1..=top);
        let m = set.membership(x);
        if m.is_some_and(|m| m != stream.contains(&x)) {
            return Err(format!("{}: membership({x}) = {m:?}", set.label()));
        }
        if set.contains(x) != stream.contains(&x) {
            return Err(format!("{}: contains({x}) disagrees with the stream", set.label()));
        }
    }
    Ok(())
}

/// Stream and membership agree; `cases` scales the probes per family (`10·cases`).
pub fn stream_matches_membership(cases: u32) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let probes = 10 * cases as usize;
    let mut sets = family_sets(FAMILIES);
    sets.push(integers("primes"));
    sets.push(integers("powers:b=3"));
    sets.push(integers("finite:3,5,8,13,21,34"));
    sets.push(integers("code:k=10,delta=123456789,B=0|11|222|3333"));
    sets.push(integers("tower:a=0.3,b=0.5,g=0.7,part=A"));
    sets.push(integers("tower:a=0.3,b=0.5,g=0.7,part=B"));
    let extra = vec![
        union(&sets[0], &sets[1]),
        affine(&sets[4], 17, AffineMode::Translate).unwrap(),
        affine(&sets[0], 6, AffineMode::Dilate).unwrap(),
    ];
    for set in sets.iter().chain(&extra) {
        let top = if set.label().starts_with("all") || set.label().contains("012345689") { 1 << 18 } else { 1 << 22 };
        membership_probe(set, top, probes, &mut rng)?;
    }
    Ok(())
}

fn digits_ok(n: u64, k: u64, allowed: &[u8]) -> bool {
    rep(n, k).iter().all(|d| allowed.contains(d))
}

fn digit_set_strategy() -> impl Strategy<Value = (u64, Vec<u8>)> {
    (2u64..=10)
        .prop_flat_map(|k| (Just(k), proptest::collection::vec(any::<bool>(), k as usize)))
        .prop_map(|(k, mask)| {
            let mut allowed: Vec<u8> = (0..k as u8).filter(|&d| mask[d as usize]).collect();
            if allowed.iter().all(|&d| d == 0) {
                allowed.push(1);
            }
            (k, allowed)
        })
}

pub fn digit_counts_brute_force(cases: u32) -> Result<(), String> {
    check(cases, (digit_set_strategy(), 1u64..=1_000_000, 0u64..=10_000), |((k, allowed), a, len)| {
        let set = gen_digit_set(k, &allowed).map_err(fail)?;
        let b = a + len;
        let want = (a..=b).filter(|&n| digits_ok(n, k, &allowed)).count() as u64;
        let got = set.exact_count(a, b);
        ensure(got == Some(want) && brute_count(&set, a, b) == want, || {
            format!("k={k} allow={allowed:?} [{a},{b}]: {got:?} vs {want}")
        })
    })?;
    // whole ranges for the classic sets
    for (k, allowed, top) in [(3u64, vec![0u8, 2], 1_000_000u64), (10, vec![0, 1, 2, 3, 4, 5, 6, 8, 9], 1_000_000)] {
        let set = gen_digit_set(k, &allowed).map_err(|e| e.to_string())?;
        let mut want = 0;
        for n in 1..=top {
            if digits_ok(n, k, &allowed) {
                want += 1;
            }
            if n.is_power_of_two() || n == top {
                let got = set.exact_count(1, n);
                if got != Some(want) {
                    return Err(format!("k={k} allow={allowed:?} up to {n}: {got:?} vs {want}"));
                }
            }
        }
    }
    Ok(())
}

fn point_set(p: &LatticePointSet) -> HashSet<Vec<i64>> {
    p.iter().map(|x| x.to_vec()).collect()
}

/// Each surviving cell of stage `k+1` holds a copy of stage `k`, rotated as the
/// rule says; empty cells hold nothing.
pub fn substitution_self_similar(cases: u32) -> Result<(), String> {
    let strat = rule_strategy(1..=3).prop_flat_map(|r| {
        let cells = r.cells().len() as u32;
        let max_k = (0..=6u32).rev().find(|&k| (cells as u64).pow(k + 1) <= 1 << 17).unwrap_or(0);
        (Just(r), 0..=max_k)
    });
    check(cases, strat, |(rule, k)| {
        let small = gen_substitution(&rule, k, BUDGET).map_err(fail)?;
        let big = gen_substitution(&rule, k + 1, BUDGET).map_err(fail)?;
        let big_set = point_set(&big);
        let side = (rule.c() as i64).pow(k);
        let d = rule.d();
        let mut expected = 0usize;
        for (idx, cell) in rule.cells().iter().enumerate() {
            let offset: Vec<i64> = rule.cell_coords(idx).iter().map(|&i| i as i64 * side).collect();
            let in_cell = big
                .iter()
                .filter(|p| p.iter().zip(&offset).all(|(&x, &o)| x > o && x - 1 < o + side))
                .count();
            let Some(rot) = cell else {
                ensure(in_cell == 0, || format!("{rule}: empty cell {idx} holds {in_cell} points"))?;
                continue;
            };
            ensure(in_cell == small.len(), || format!("{rule}: cell {idx} holds {in_cell}, want {}", small.len()))?;
            for p in small.iter() {
                let mut q: Vec<i64> = p.iter().map(|x| x - 1).collect();
                if d == 2 {
                    let (x, y) = rot.apply(q[0], q[1], side);
                    q = vec![x, y];
                }
                let q: Vec<i64> = q.iter().zip(&offset).map(|(x, o)| x + o + 1).collect();
                ensure(big_set.contains(&q), || format!("{rule}: {q:?} missing from stage {}", k + 1))?;
            }
            expected += small.len();
        }
        ensure(big.len() == expected, || format!("{rule}: stage {} has extra points", k + 1))
    })
}

/// A random prefix-free code with at most 8 words of length at most 4: leaves of
/// a random digit tree.
pub fn random_code<R: Rng>(rng: &mut R, max_base: u64) -> InstantaneousCodeSpec {
    let k = rng.gen_range(2..=max_base);
    let mut leading: Vec<u8> = (1..k as u8).filter(|_| rng.gen_bool(0.5)).collect();
    if leading.is_empty() {
        leading.push(rng.gen_range(1..k as u8));
    }
    let mut leaves: Vec<Vec<u8>> = (0..k as u8).map(|d| vec![d]).collect();
    for _ in 0..rng.gen_range(0..4) {
        let i = rng.gen_range(0..leaves.len());
        if leaves[i].len() >= 4 {
            continue;
        }
        let w = leaves.swap_remove(i);
        leaves.extend((0..k as u8).map(|d| [w.as_slice(), &[d]].concat()));
    }
    leaves.shuffle(rng);
    let keep = rng.gen_range(1..=leaves.len().min(8));
    let mut words: Vec<Vec<u8>> = leaves.into_iter().take(keep).collect();
    words.sort();
    InstantaneousCodeSpec::new(k, leading, words)
}

fn code_strategy() -> impl Strategy<Value = InstantaneousCodeSpec> {
    any::<u64>().prop_map(|seed| random_code(&mut ChaCha8Rng::seed_from_u64(seed), 10))
}

/// Ways to split `digits` into code words.
fn parse_count(digits: &[u8], words: &[Vec<u8>]) -> u64 {
    let mut ways = vec![0u64; digits.len() + 1];
    ways[digits.len()] = 1;
    for i in (0..digits.len()).rev() {
        ways[i] = words
            .iter()
            .filter(|w| digits[i..].starts_with(w))
            .map(|w| ways[i + w.len()])
            .sum();
    }
    ways[0]
}

pub fn code_parses_uniquely(cases: u32) -> Result<(), String> {
    check(cases, (code_strategy(), 1u64..=1_000_000, 0u64..=2_000), |(spec, a, len)| {
        let set = gen_code_set(&spec).map_err(fail)?;
        for n in a..=a + len {
            let d = rep(n, spec.base);
            let ways = parse_count(&d[1..], &spec.words);
            let member = spec.leading.contains(&d[0]) && ways == 1;
            ensure(ways <= 1, || format!("{spec}: {n} parses {ways} ways"))?;
            ensure(set.contains(n) == member, || format!("{spec}: membership of {n}"))?;
            if let Some((lead, parts)) = spec.factor(&d) {
                let joined: Vec<u8> = std::iter::once(lead).chain(parts.iter().flat_map(|&i| spec.words[i].clone())).collect();
                ensure(member && joined == d, || format!("{spec}: factor of {n}"))?;
            } else {
                ensure(!member, || format!("{spec}: member {n} does not factor"))?;
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- estimators

fn profile_from(blocks: &[u64], boundary: &[u64]) -> CountProfile {
    CountProfile::from_blocks(
        NormKind::BinaryLength,
        1,
        blocks.iter().map(|&x| BigUint::from(x)).collect(),
        boundary.iter().map(|&x| BigUint::from(x)).collect(),
    )
}

/// Random profile pairs `p <= q`, with `n_max` in `1..=30` and a window.
fn profile_pair() -> impl Strategy<Value = (Vec<u64>, Vec<u64>, Vec<u64>, Vec<u64>, usize)> {
    (1usize..=30)
        .prop_flat_map(|n| {
            let entry = (0u64..1 << 20, 0u64..1 << 20, any::<bool>(), 0u64..1 << 10);
            (proptest::collection::vec(entry, n + 1), 1..=n)
        })
        .prop_map(|(entries, window)| {
            let mut bp = Vec::new();
            let mut ep = Vec::new();
            let mut bq = Vec::new();
            let mut eq = Vec::new();
            for (b, extra, sparse, e) in entries {
                let b = if sparse { b >> 15 } else { b };
                bp.push(b);
                ep.push(e.min(b));
                bq.push(b + extra);
                eq.push(e.min(b) + (extra & 7));
            }
            (bp, ep, bq, eq, window)
        })
}

pub fn estimates_monotone(cases: u32) -> Result<(), String> {
    check(cases, profile_pair(), |(bp, ep, bq, eq, w)| {
        let (p, q) = (profile_from(&bp, &ep), profile_from(&bq, &eq));
        ensure(p.is_pointwise_le(&q), || "pair is not ordered".into())?;
        let (rp, rq) = (estimate(&p, w).map_err(fail)?, estimate(&q, w).map_err(fail)?);
        ensure(rp.upper.value <= rq.upper.value && rp.lower.value <= rq.lower.value, || {
            format!("upper {} > {} or lower {} > {}", rp.upper.value, rq.upper.value, rp.lower.value, rq.lower.value)
        })
    })
}

pub fn lower_below_upper(cases: u32) -> Result<(), String> {
    check(cases, profile_pair(), |(bp, ep, _, _, w)| {
        let r = estimate(&profile_from(&bp, &ep), w).map_err(fail)?;
        let ok = 0.0 <= r.lower.value && r.lower.value <= r.upper.value && r.upper.value <= 1.0;
        ensure(ok, || format!("lower {} upper {}", r.lower.value, r.upper.value))
    })?;
    for (spec, _) in FAMILIES {
        let p = block_profile(&integers(spec), NormKind::Value, 24, BUDGET).map_err(|e| e.to_string())?;
        let r = estimate(&p, 8).map_err(|e| e.to_string())?;
        if r.lower.value > r.upper.value {
            return Err(format!("{spec}: lower {} > upper {}", r.lower.value, r.upper.value));
        }
    }
    Ok(())
}

/// Exact union profile by inclusion and exclusion, streaming the sparser set.
fn union_profile(a: &IntegerSet, b: &IntegerSet, sparse_first: bool, n_max: usize) -> CountProfile {
    let pa = block_profile(a, NormKind::Value, n_max, BUDGET).unwrap();
    let pb = block_profile(b, NormKind::Value, n_max, BUDGET).unwrap();
    let (s, other) = if sparse_first { (a, b) } else { (b, a) };
    let mut both_blocks = vec![0u64; n_max + 1];
    let mut both_boundary = vec![0u64; n_max + 1];
    for x in s.iter_from(1).take_while(|&x| x <= 1 << n_max) {
        if other.contains(x) {
            let k = binary_length(x) as usize - 1;
            if k <= n_max {
                both_blocks[k] += 1;
            }
            if x.is_power_of_two() {
                both_boundary[k] += 1;
            }
        }
    }
    let blocks = (0..=n_max)
        .map(|k| &pa.blocks[k] + &pb.blocks[k] - BigUint::from(both_blocks[k]))
        .collect();
    let boundary = (0..=n_max)
        .map(|k| &pa.boundary[k] + &pb.boundary[k] - BigUint::from(both_boundary[k]))
        .collect();
    CountProfile::from_blocks(NormKind::Value, 1, blocks, boundary)
}

/// Runs over every family pair; `cases` is unused.
pub fn union_estimate_is_max(_cases: u32) -> Result<(), String> {
    const N: usize = 24;
    let sets = family_sets(FAMILIES);
    for i in 0..sets.len() {
        for j in i..sets.len() {
            let (a, b) = (&sets[i], &sets[j]);
            let sparse_first = FAMILIES[i].1 <= FAMILIES[j].1;
            let pu = union_profile(a, b, sparse_first, N);
            let pa = block_profile(a, NormKind::Value, N, BUDGET).unwrap();
            if i == j && pu.cumulative != pa.cumulative {
                return Err(format!("{}: union with itself changes the counts", a.label()));
            }
            let ua = upper(&pa, 8);
            let ub = upper(&block_profile(b, NormKind::Value, N, BUDGET).unwrap(), 8);
            let uu = upper(&pu, 8);
            if (uu - ua.max(ub)).abs() > 2.0 / N as f64 {
                return Err(format!("{} | {}: {uu} vs max({ua}, {ub})", a.label(), b.label()));
            }
        }
    }
    Ok(())
}

pub fn translation_estimate_stable(cases: u32) -> Result<(), String> {
    const N: usize = 24;
    let sets = family_sets(FAMILIES);
    let base: Vec<f64> = sets
        .iter()
        .map(|s| upper(&block_profile(s, NormKind::Value, N, BUDGET).unwrap(), 8))
        .collect();
    check(cases, (0..sets.len(), 1u64..=1024), |(i, k)| {
        let t = affine(&sets[i], k, AffineMode::Translate).map_err(fail)?;
        let u = upper(&block_profile(&t, NormKind::Value, N, BUDGET).map_err(fail)?, 8);
        let tol = 2.0 * (1.0 + k as f64).log2() / N as f64;
        ensure((u - base[i]).abs() <= tol, || format!("{k}+{}: {u} vs {}", sets[i].label(), base[i]))
    })
}

pub fn dyadic_dilation_shifts_blocks(cases: u32) -> Result<(), String> {
    const N: usize = 24;
    let sets = family_sets(FAMILIES);
    check(cases, (0..sets.len(), 0u32..=10), |(i, j)| {
        let p = block_profile(&sets[i], NormKind::Value, N, BUDGET).map_err(fail)?;
        let d = affine(&sets[i], 1 << j, AffineMode::Dilate).map_err(fail)?;
        let q = block_profile(&d, NormKind::Value, N, BUDGET).map_err(fail)?;
        let j = j as usize;
        for n in 0..=N {
            let (b, e) = if n < j {
                (BigUint::from(0u32), BigUint::from(0u32))
            } else {
                (p.blocks[n - j].clone(), p.boundary[n - j].clone())
            };
            ensure(q.blocks[n] == b && q.boundary[n] == e, || {
                format!("2^{j}*{}: block {n} is {} want {b}", sets[i].label(), q.blocks[n])
            })?;
        }
        Ok(())
    })
}

/// Runs over every pair of sparse families; `cases` is unused.
pub fn cartesian_estimate_adds(_cases: u32) -> Result<(), String> {
    const N: usize = 24;
    let sets = family_sets(SPARSE);
    let ups: Vec<f64> = sets
        .iter()
        .map(|s| upper(&block_profile(s, NormKind::Value, N, BUDGET).unwrap(), 8))
        .collect();
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            let p = cartesian_profile(&sets[i], &sets[j], N, BUDGET).map_err(|e| e.to_string())?;
            let u = upper(&p, 8);
            if (u - (ups[i] + ups[j])).abs() > 4.0 / N as f64 {
                return Err(format!("{} x {}: {u} vs {} + {}", sets[i].label(), sets[j].label(), ups[i], ups[j]));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- closed forms

pub fn beta_decreasing(cases: u32) -> Result<(), String> {
    check(cases, (code_strategy(), 0.0f64..2.0, 1e-3f64..1.0), |(spec, s, ds)| {
        let (a, b) = (beta(&spec, s), beta(&spec, s + ds));
        let r = code_dimension(&spec).map_err(fail)?;
        ensure(a > b, || format!("{spec}: β({s}) = {a} <= β({}) = {b}", s + ds))?;
        ensure((r.beta_at_s_star - 1.0).abs() <= 1e-12, || format!("{spec}: β(s*) = {}", r.beta_at_s_star))
    })
}

/// Named families whose counts carry no constant or logarithmic offset.
pub const CONSISTENT_AT_24: &[&str] = &[
    "squares",
    "cubes",
    "perfect:m=5",
    "all",
    "digits:k=3,allow=02",
    "digits:k=10,allow=012345689",
    "digits:k=4,allow=013",
    "code:k=2,delta=1,B=0|10",
    "code:k=3,delta=2,B=0|2",
    "code:k=4,delta=3,B=0|1|2",
];

/// Runs over the named families; `cases` is unused.
pub fn solver_matches_enumeration(_cases: u32) -> Result<(), String> {
    for spec in CONSISTENT_AT_24 {
        let parsed: SetSpec = spec.parse().map_err(|e: zdim_core::ZetaError| e.to_string())?;
        let want = parsed.closed_form().ok_or_else(|| format!("{spec}: no closed form"))?;
        let got = upper(&block_profile(&integers(spec), NormKind::Value, 24, BUDGET).unwrap(), 8);
        if (got - want).abs() > 0.05 {
            return Err(format!("{spec}: estimate {got} vs closed form {want}"));
        }
    }
    Ok(())
}

pub fn digit_dimension_is_code_dimension(cases: u32) -> Result<(), String> {
    check(cases, digit_set_strategy(), |(k, allowed)| {
        let leading: Vec<u8> = allowed.iter().copied().filter(|&d| d != 0).collect();
        let words: Vec<Vec<u8>> = allowed.iter().map(|&d| vec![d]).collect();
        let spec = InstantaneousCodeSpec::new(k, leading, words);
        ensure(validate_code(&spec).is_ok(), || format!("{spec} is not a code"))?;
        let a = digit_dimension(k, &allowed).map_err(fail)?;
        let b = code_dimension(&spec).map_err(fail)?.s_star;
        ensure((a - b).abs() <= 1e-10, || format!("k={k} allow={allowed:?}: {a} vs {b}"))?;
        let (ds, cs) = (gen_digit_set(k, &allowed).map_err(fail)?, gen_code_set(&spec).map_err(fail)?);
        ensure(ds.exact_count(1, 1 << 30) == cs.exact_count(1, 1 << 30), || format!("{spec}: counts differ"))
    })
}

pub fn substitution_growth_ratio(cases: u32) -> Result<(), String> {
    let strat = rule_strategy(1..=3).prop_flat_map(|r| {
        let cells = r.cells().len() as u64;
        let max_k = (1..=5u32).rev().find(|&k| cells.pow(k + 1) <= 1 << 17).unwrap_or(1);
        (Just(r), 1..=max_k)
    });
    check(cases, strat, |(rule, k)| {
        let a = gen_substitution(&rule, k, BUDGET).map_err(fail)?.len() as f64;
        let b = gen_substitution(&rule, k + 1, BUDGET).map_err(fail)?.len() as f64;
        let ratio = (b / a).ln() / (rule.c() as f64).ln();
        let want = substitution_dimension(&rule);
        ensure((ratio - want).abs() <= 1e-12, || format!("{rule}: {ratio} vs {want}"))
    })
}

// ---------------------------------------------------------------- gales

pub fn gale_on_random_sets(cases: u32) -> Result<(), String> {
    let strat = (3u32..=12)
        .prop_flat_map(|depth| (Just(depth), proptest::collection::btree_set(1u64..1 << depth, 0..200), 0.05f64..1.0));
    check(cases, strat, |(depth, members, s)| {
        let members: Vec<u64> = members.into_iter().collect();
        let g = build_from_members(&members, s, depth, 0.0).map_err(fail)?;
        let def = gale_deficiency(&g, GaleMode::Gale);
        ensure(def <= 1e-9, || format!("deficiency {def}"))?;
        for &n in &members {
            ensure(succeeds(&g, n).map_err(fail)?, || format!("misses member {n}"))?;
        }
        for k in 0..=depth {
            let kc = kraft_check(&g, k).map_err(fail)?;
            ensure(kc.ok, || format!("kraft fails at {k}: {kc:?}"))?;
        }
        Ok(())
    })
}

fn level_counts(set: &IntegerSet, depth: u32) -> Vec<f64> {
    (1..=depth)
        .map(|k| count_range(set, 1 << (k - 1), (1 << k) - 1, BUDGET).unwrap() as f64)
        .collect()
}

/// Above the dimension the supergale succeeds everywhere; below it the capital
/// needed to cover the deeper levels exceeds what the shallow ones need. Runs over fixed families.
pub fn gale_two_sided(_cases: u32) -> Result<(), String> {
    const DEPTH: u32 = 20;
    for (spec, dim) in SPARSE {
        let set = integers(spec);
        let g = build_supergale(&set, dim + 0.1, DEPTH, BUDGET).map_err(|e| e.to_string())?;
        if gale_deficiency(&g, GaleMode::Gale) > 1e-9 {
            return Err(format!("{spec}: deficiency"));
        }
        for n in set.iter_from(1).take_while(|&x| x < 1 << DEPTH) {
            if !succeeds(&g, n).map_err(|e| e.to_string())? {
                return Err(format!("{spec}: misses {n} at s={}", dim + 0.1));
            }
        }
        for k in 0..=18 {
            if !kraft_check(&g, k).map_err(|e| e.to_string())?.ok {
                return Err(format!("{spec}: kraft at {k}"));
            }
        }
        // an s-gale starting from c covers at most c·2^{sk} strings of length k
        let levels = level_counts(&set, DEPTH);
        let s = dim - 0.2;
        let need = |ks: std::ops::RangeInclusive<usize>| ks.map(|k| levels[k - 1] / (s * k as f64).exp2()).fold(0.0, f64::max);
        let half = DEPTH as usize / 2;
        if need(half + 1..=DEPTH as usize) <= need(1..=half) {
            return Err(format!("{spec}: capital at s={s} stops growing"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- algebra

fn truncated(set: &IntegerSet, top: u64) -> IntegerSet {
    IntegerSet::finite(set.collect_up_to(top, BUDGET).unwrap()).unwrap()
}

/// Exact two-sided bounds on the product counts at every scale:
/// `max(|B ∩ [1, N/min A]|, |A ∩ [1, N/min B]|) <= |AB ∩ [1, N]| <= Σ_{a<=N} |B ∩ [1, N/a]|`,
/// and the estimate of `AB` never falls below the larger factor estimate.
/// Runs over every pair of product families; `cases` is unused.
pub fn product_estimate_is_max(_cases: u32) -> Result<(), String> {
    const N: usize = 20;
    let top = 1u64 << N;
    let list: &[&str] = &["squares", "cubes", "digits:k=3,allow=02", "code:k=2,delta=1,B=0|10", "all", "perfect:m=5"];
    let cum = |s: &IntegerSet, x: u64| if x == 0 { 0 } else { count_range(s, 1, x, BUDGET).unwrap() };
    for (i, a) in list.iter().enumerate() {
        for b in &list[i..] {
            let (sa, sb) = (integers(a), integers(b));
            let prod = pointwise(&sa, &sb, PointwiseOp::Product, top, BUDGET).map_err(|e| e.to_string())?;
            let xs = sa.collect_up_to(top, BUDGET).map_err(|e| e.to_string())?;
            let (a0, b0) = (xs[0], sb.iter().next().unwrap());
            for n in 0..=N {
                let big = 1u64 << n;
                let got = cum(&prod, big);
                let lo = cum(&sb, big / a0).max(cum(&sa, big / b0));
                let hi: u64 = xs.iter().take_while(|&&x| x <= big).map(|&x| cum(&sb, big / x)).sum();
                if got < lo || got > hi {
                    return Err(format!("{a} * {b} at 2^{n}: {got} outside [{lo}, {hi}]"));
                }
            }
            let up = upper(&block_profile(&prod, NormKind::Value, N, BUDGET).unwrap(), 8);
            let ua = upper(&block_profile(&truncated(&sa, top), NormKind::Value, N, BUDGET).unwrap(), 8);
            let ub = upper(&block_profile(&truncated(&sb, top), NormKind::Value, N, BUDGET).unwrap(), 8);
            if up < ua.max(ub) - 1.0 / N as f64 {
                return Err(format!("{a} * {b}: {up} below max({ua}, {ub})"));
            }
        }
    }
    Ok(())
}

/// Runs over every pair of sum families; `cases` is unused.
pub fn sum_estimate_bounds(_cases: u32) -> Result<(), String> {
    const N: usize = 20;
    let top = 1u64 << N;
    let list: &[&str] = &["squares", "cubes", "perfect:m=5", "digits:k=3,allow=02", "code:k=2,delta=1,B=0|10"];
    for (i, a) in list.iter().enumerate() {
        for b in &list[i..] {
            let (sa, sb) = (integers(a), integers(b));
            let sum = pointwise(&sa, &sb, PointwiseOp::Sum, top, BUDGET).map_err(|e| e.to_string())?;
            let us = upper(&block_profile(&sum, NormKind::Value, N, BUDGET).unwrap(), 8);
            let ua = upper(&block_profile(&sa, NormKind::Value, N, BUDGET).unwrap(), 8);
            let ub = upper(&block_profile(&sb, NormKind::Value, N, BUDGET).unwrap(), 8);
            if us < ua.max(ub) - 0.05 || us > (ua + ub).min(1.0) + 0.05 {
                return Err(format!("{a} + {b}: {us} outside [{}, {}]", ua.max(ub), (ua + ub).min(1.0)));
            }
        }
    }
    Ok(())
}

fn gap_scan(values: &[u64], r: u64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if i == 0 || v - values[i - 1] > r {
            out.push(Vec::new());
        }
        out.last_mut().unwrap().push(i);
    }
    out
}

pub fn integer_components_gap_scan(cases: u32) -> Result<(), String> {
    let strat = (proptest::collection::btree_set(1u64..5_000, 0..300), 1u64..=64);
    check(cases, strat, |(values, r)| {
        let values: Vec<u64> = values.into_iter().collect();
        let got: Vec<Vec<usize>> = integer_components(&values, r).map_err(fail)?.into_iter().map(|c| c.members).collect();
        let want = gap_scan(&values, r);
        ensure(got == want, || format!("r={r}: {} components vs {}", got.len(), want.len()))
    })
}

/// On the squares the largest r-component per dyadic window never grows once
/// the window starts past `r²`.
pub fn component_windows_shrink(cases: u32) -> Result<(), String> {
    let squares = integers("squares").collect_up_to(1 << 20, BUDGET).map_err(|e| e.to_string())?;
    check(cases, 1u64..=256, |r| {
        let start = binary_length(r * r);
        let mut per_window = Vec::new();
        for k in start..20 {
            let win: Vec<u64> = squares.iter().copied().filter(|&x| x >= 1 << k && x < 1 << (k + 1)).collect();
            if win.is_empty() {
                continue;
            }
            let max = integer_components(&win, r).map_err(fail)?.iter().map(|c| c.members.len()).max().unwrap_or(0);
            per_window.push(max);
        }
        ensure(per_window.windows(2).all(|w| w[1] <= w[0]), || format!("r={r}: {per_window:?}"))
    })
}

pub fn pointwise_commutative_monotone(cases: u32) -> Result<(), String> {
    let set = || proptest::collection::btree_set(1u64..2_000, 1..60);
    let strat = (set(), set(), set(), prop_oneof![Just(PointwiseOp::Sum), Just(PointwiseOp::Product)], 1u64..=4_000);
    check(cases, strat, |(a, b, extra, op, bound)| {
        let fa = IntegerSet::finite(a.iter().copied().collect()).unwrap();
        let fb = IntegerSet::finite(b.iter().copied().collect()).unwrap();
        let big = IntegerSet::finite(a.union(&extra).copied().collect()).unwrap();
        let list = |s: &IntegerSet| s.iter().collect::<Vec<u64>>();
        let ab = list(&pointwise(&fa, &fb, op, bound, BUDGET).map_err(fail)?);
        let ba = list(&pointwise(&fb, &fa, op, bound, BUDGET).map_err(fail)?);
        let bigger = list(&pointwise(&big, &fb, op, bound, BUDGET).map_err(fail)?);
        let mut want: Vec<u64> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| if op == PointwiseOp::Sum { x + y } else { x * y }))
            .filter(|&v| v <= bound)
            .collect();
        want.sort_unstable();
        want.dedup();
        ensure(ab == want, || format!("{op:?} differs from the double loop"))?;
        ensure(ab == ba, || format!("{op:?} is not commutative"))?;
        let bigger: HashSet<u64> = bigger.into_iter().collect();
        ensure(ab.iter().all(|v| bigger.contains(v)), || format!("{op:?} is not monotone"))
    })
}

fn all_pairs_components(points: &LatticePointSet, r: u64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let root = find(p, p[x]);
            p[x] = root;
        }
        p[x]
    }
    for i in 0..n {
        for j in i + 1..n {
            let d2: i64 = points.point(i).iter().zip(points.point(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 as u64 <= r * r {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

pub fn lattice_components_all_pairs(cases: u32) -> Result<(), String> {
    let strat = (1usize..=3).prop_flat_map(|d| {
        (
            Just(d),
            proptest::collection::btree_set(proptest::collection::vec(-30i64..=30, d), 0..80),
            1u64..=12,
        )
    });
    check(cases, strat, |(d, points, r)| {
        let set = LatticePointSet::from_points(d, points.iter()).map_err(fail)?;
        let got: Vec<Vec<usize>> = bounded_components(&set, r).map_err(fail)?.into_iter().map(|c| c.members).collect();
        let want = all_pairs_components(&set, r);
        ensure(got == want, || format!("d={d} r={r}: {} components vs {}", got.len(), want.len()))
    })
}
