//! Named set families: powers, perfect powers, primes, digit and code sets,
//! Pascal's triangle mod 2, substitution fractals and the tower construction.

mod digits;
mod pascal;
mod primes;
mod substitution;
mod tower;

pub use digits::{
    code_automaton, digit_automaton, format_word, gen_code_set, gen_digit_set, num, parse_word, rep, DigitAutomaton,
    InstantaneousCodeSpec,
};
pub use pascal::gen_pascal_mod2;
pub use primes::{is_prime, small_primes, PrimeStream};
pub use substitution::{gen_substitution, Rotation, SubstitutionRule};
pub use tower::{gen_tower_pair, tower_value, TowerCounts, TowerPair, TowerPairSpec, TowerPart};

use crate::error::{Result, ZetaError};
use crate::numeric::{checked_pow, integer_log, integer_root};
use crate::set::{IntegerSet, IntegerSource};

/// Families accepted by [`gen_basic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicKind {
    /// `{1, b, b², …}`.
    Powers(u64),
    /// `{xᵐ : x >= 1}`.
    PerfectPowers(u32),
    Primes,
    Finite(Vec<u64>),
    /// All positive integers.
    All,
}

pub fn gen_basic(kind: BasicKind) -> Result<IntegerSet> {
    match kind {
        BasicKind::Powers(b) => {
            if b < 2 {
                return Err(ZetaError::Parameter(format!("powers need base >= 2, got {b}")));
            }
            Ok(IntegerSet::new(Powers(b), format!("powers:b={b}")))
        }
        BasicKind::PerfectPowers(m) => {
            if m < 2 {
                return Err(ZetaError::Parameter(format!("perfect powers need m >= 2, got {m}")));
            }
            let label = match m {
                2 => "squares".to_string(),
                3 => "cubes".to_string(),
                _ => format!("perfect:m={m}"),
            };
            Ok(IntegerSet::new(PerfectPowers(m), label))
        }
        BasicKind::Primes => Ok(IntegerSet::new(primes::Primes, "primes")),
        BasicKind::Finite(v) => IntegerSet::finite(v),
        BasicKind::All => Ok(IntegerSet::new(All, "all")),
    }
}

#[derive(Clone, Copy, Debug)]
struct Powers(u64);

impl IntegerSource for Powers {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        let b = self.0;
        Box::new(
            std::iter::successors(Some(1u64), move |&p| p.checked_mul(b)).skip_while(move |&p| p < start),
        )
    }

    fn membership(&self, n: u64) -> Option<bool> {
        Some(n >= 1 && checked_pow(self.0, integer_log(n, self.0)) == Some(n))
    }

    fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        let upto = |n: u64| if n == 0 { 0 } else { integer_log(n, self.0) as u64 + 1 };
        Some(upto(b) - upto(a - 1))
    }
}

#[derive(Clone, Copy, Debug)]
struct PerfectPowers(u32);

impl IntegerSource for PerfectPowers {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        let m = self.0;
        let first = integer_root(start - 1, m) + 1;
        Box::new((first..).map_while(move |x| checked_pow(x, m)))
    }

    fn membership(&self, n: u64) -> Option<bool> {
        Some(n >= 1 && checked_pow(integer_root(n, self.0), self.0) == Some(n))
    }

    fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        Some(integer_root(b, self.0) - integer_root(a - 1, self.0))
    }
}

#[derive(Clone, Copy, Debug)]
struct All;

impl IntegerSource for All {
    fn stream_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + Send + '_> {
        Box::new(start..=u64::MAX)
    }

    fn membership(&self, n: u64) -> Option<bool> {
        Some(n >= 1)
    }

    fn exact_count(&self, a: u64, b: u64) -> Option<u64> {
        Some(b - a + 1)
    }
}
