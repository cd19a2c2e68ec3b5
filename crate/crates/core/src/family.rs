//! Textual set specifications.
//!
//! ```text
//! squares | cubes | primes | all
//! powers:b=<int>            perfect:m=<int>
//! finite:<int>,<int>,...    file:<path>
//! digits:k=<int>,allow=<digits>
//! code:k=<int>,delta=<digits>,B=<word>|<word>|...
//! subst:c=<int>,d=<int>,rule=<cells>[,depth=<int>]
//! pascal[:depth=<int>]
//! tower:a=<real>,b=<real>,g=<real>[,part=A|B]
//! ```
//!
//! Digits are written `0-9a-z`. Substitution cells are listed in
//! lexicographic order with `0`-`3` for a rotation and `.` for an empty cell.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::closed_form::{code_dimension, digit_dimension, substitution_dimension};
use crate::count::{block_profile, CountProfile, NormKind};
use crate::error::{Result, ZetaError};
use crate::generators::{
    gen_basic, gen_code_set, gen_digit_set, gen_pascal_mod2, gen_substitution, gen_tower_pair, parse_word,
    BasicKind, InstantaneousCodeSpec, SubstitutionRule, TowerPair, TowerPairSpec, TowerPart,
};
use crate::io::{read_set_file, ParsedSet};
use crate::set::{Budget, IntegerSet, LatticePointSet};

#[derive(Clone, Debug, PartialEq)]
pub enum SetSpec {
    Basic(BasicKind),
    File(PathBuf),
    Digits { k: u64, allow: Vec<u8> },
    Code(InstantaneousCodeSpec),
    Substitution { rule: SubstitutionRule, depth: Option<u32> },
    Pascal { depth: Option<u32> },
    Tower { spec: TowerPairSpec, part: TowerPart },
}

/// A constructed set.
#[derive(Clone, Debug)]
pub enum BuiltSet {
    Integers(IntegerSet),
    Lattice(LatticePointSet),
    Tower(TowerPair, TowerPart),
}

fn usage(msg: impl Into<String>) -> ZetaError {
    ZetaError::Usage(msg.into())
}

fn key_values(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| usage(format!("expected key=value, got {kv:?}")))
        })
        .collect()
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| usage(format!("bad value for {key}: {v:?}")))
}

fn take<'a>(kv: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    kv.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn require<'a>(kv: &[(&str, &'a str)], key: &str, family: &str) -> Result<&'a str> {
    take(kv, key).ok_or_else(|| usage(format!("{family} needs {key}=")))
}

fn only_keys(kv: &[(&str, &str)], allowed: &[&str], family: &str) -> Result<()> {
    match kv.iter().find(|(k, _)| !allowed.contains(k)) {
        Some((k, _)) => Err(usage(format!("unknown key {k:?} for {family}"))),
        None => Ok(()),
    }
}

impl FromStr for SetSpec {
    type Err = ZetaError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = match s.split_once(':') {
            Some((n, b)) => (n.trim(), Some(b)),
            None => (s.trim(), None),
        };
        let kv = |family: &str, allowed: &[&str]| -> Result<Vec<(&str, &str)>> {
            let body = body.ok_or_else(|| usage(format!("{family} needs parameters")))?;
            let kv = key_values(body)?;
            only_keys(&kv, allowed, family)?;
            Ok(kv)
        };
        let spec = match name {
            "squares" => SetSpec::Basic(BasicKind::PerfectPowers(2)),
            "cubes" => SetSpec::Basic(BasicKind::PerfectPowers(3)),
            "primes" => SetSpec::Basic(BasicKind::Primes),
            "all" => SetSpec::Basic(BasicKind::All),
            "powers" => {
                let kv = kv("powers", &["b"])?;
                SetSpec::Basic(BasicKind::Powers(num("b", require(&kv, "b", "powers")?)?))
            }
            "perfect" => {
                let kv = kv("perfect", &["m"])?;
                SetSpec::Basic(BasicKind::PerfectPowers(num("m", require(&kv, "m", "perfect")?)?))
            }
            "finite" => {
                let body = body.unwrap_or("");
                let values = body
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| num::<u64>("finite", t.trim()))
                    .collect::<Result<Vec<_>>>()?;
                SetSpec::Basic(BasicKind::Finite(values))
            }
            "file" => SetSpec::File(PathBuf::from(body.ok_or_else(|| usage("file needs a path"))?)),
            "digits" => {
                let kv = kv("digits", &["k", "allow"])?;
                let k: u64 = num("k", require(&kv, "k", "digits")?)?;
                let allow = parse_word(require(&kv, "allow", "digits")?, k).map_err(|e| usage(e.to_string()))?;
                SetSpec::Digits { k, allow }
            }
            "code" => SetSpec::Code(InstantaneousCodeSpec::parse(body.ok_or_else(|| usage("code needs parameters"))?)?),
            "subst" => {
                let kv = kv("subst", &["c", "d", "rule", "depth"])?;
                let c = num("c", require(&kv, "c", "subst")?)?;
                let d = num("d", require(&kv, "d", "subst")?)?;
                let rule = SubstitutionRule::from_cells(c, d, require(&kv, "rule", "subst")?)?;
                let depth = take(&kv, "depth").map(|v| num("depth", v)).transpose()?;
                SetSpec::Substitution { rule, depth }
            }
            "pascal" => {
                let depth = match body {
                    Some(_) => {
                        let kv = kv("pascal", &["depth"])?;
                        take(&kv, "depth").map(|v| num("depth", v)).transpose()?
                    }
                    None => None,
                };
                SetSpec::Pascal { depth }
            }
            "tower" => {
                let kv = kv("tower", &["a", "b", "g", "part"])?;
                let spec = TowerPairSpec::new(
                    num("a", require(&kv, "a", "tower")?)?,
                    num("b", require(&kv, "b", "tower")?)?,
                    num("g", require(&kv, "g", "tower")?)?,
                )?;
                let part = match take(&kv, "part").unwrap_or("A") {
                    "A" | "a" => TowerPart::A,
                    "B" | "b" => TowerPart::B,
                    other => return Err(usage(format!("tower part must be A or B, got {other:?}"))),
                };
                SetSpec::Tower { spec, part }
            }
            other => return Err(usage(format!("unknown set family {other:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Basic(BasicKind::PerfectPowers(2)) => f.write_str("squares"),
            SetSpec::Basic(BasicKind::PerfectPowers(3)) => f.write_str("cubes"),
            SetSpec::Basic(BasicKind::PerfectPowers(m)) => write!(f, "perfect:m={m}"),
            SetSpec::Basic(BasicKind::Powers(b)) => write!(f, "powers:b={b}"),
            SetSpec::Basic(BasicKind::Primes) => f.write_str("primes"),
            SetSpec::Basic(BasicKind::All) => f.write_str("all"),
            SetSpec::Basic(BasicKind::Finite(v)) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "finite:{}", parts.join(","))
            }
            SetSpec::File(p) => write!(f, "file:{}", p.display()),
            SetSpec::Digits { k, allow } => {
                write!(f, "digits:k={k},allow={}", crate::generators::format_word(allow))
            }
            SetSpec::Code(c) => write!(f, "code:{c}"),
            SetSpec::Substitution { rule, depth } => {
                write!(f, "subst:{rule}")?;
                match depth {
                    Some(d) => write!(f, ",depth={d}"),
                    None => Ok(()),
                }
            }
            SetSpec::Pascal { depth: Some(d) } => write!(f, "pascal:depth={d}"),
            SetSpec::Pascal { depth: None } => f.write_str("pascal"),
            SetSpec::Tower { spec, part } => write!(
                f,
                "tower:a={},b={},g={},part={}",
                spec.alpha,
                spec.beta,
                spec.gamma,
                if *part == TowerPart::A { "A" } else { "B" }
            ),
        }
    }
}

impl SetSpec {
    /// Builds the set. `depth` fills in a missing depth for lattice families.
    pub fn build(&self, depth: Option<u32>, budget: Budget) -> Result<BuiltSet> {
        Ok(match self {
            SetSpec::Basic(k) => BuiltSet::Integers(gen_basic(k.clone())?),
            SetSpec::File(p) => match read_set_file(p)? {
                ParsedSet::Integers(a) => BuiltSet::Integers(a),
                ParsedSet::Lattice(l) => BuiltSet::Lattice(l),
            },
            SetSpec::Digits { k, allow } => BuiltSet::Integers(gen_digit_set(*k, allow)?),
            SetSpec::Code(c) => BuiltSet::Integers(gen_code_set(c)?),
            SetSpec::Substitution { rule, depth: d } => {
                BuiltSet::Lattice(gen_substitution(rule, d.or(depth).unwrap_or(6), budget)?)
            }
            SetSpec::Pascal { depth: d } => BuiltSet::Lattice(gen_pascal_mod2(d.or(depth).unwrap_or(10), budget)?),
            SetSpec::Tower { spec, part } => BuiltSet::Tower(gen_tower_pair(*spec), *part),
        })
    }

    /// Norm a profile of this family is taken in unless overridden.
    pub fn default_norm(&self) -> NormKind {
        match self {
            SetSpec::Substitution { .. } => NormKind::Euclidean,
            SetSpec::Pascal { .. } => NormKind::L1,
            SetSpec::Tower { .. } => NormKind::BinaryLength,
            _ => NormKind::Value,
        }
    }

    /// Largest dyadic scale a profile of this family resolves by default.
    /// Lattice families stop where their construction depth runs out.
    pub fn default_n_max(&self, depth: Option<u32>) -> usize {
        match self {
            SetSpec::Substitution { rule, depth: d } => {
                let depth = d.or(depth).unwrap_or(6);
                (depth as f64 * (rule.c() as f64).log2()).floor() as usize
            }
            SetSpec::Pascal { depth: d } => d.or(depth).unwrap_or(10) as usize,
            _ => 24,
        }
    }

    /// The exact dimension where a formula is known.
    pub fn closed_form(&self) -> Option<f64> {
        match self {
            SetSpec::Basic(BasicKind::PerfectPowers(m)) => Some(1.0 / *m as f64),
            SetSpec::Basic(BasicKind::Powers(_)) | SetSpec::Basic(BasicKind::Finite(_)) => Some(0.0),
            SetSpec::Basic(BasicKind::Primes) | SetSpec::Basic(BasicKind::All) => Some(1.0),
            SetSpec::Digits { k, allow } => digit_dimension(*k, allow).ok(),
            SetSpec::Code(c) => code_dimension(c).ok().map(|r| r.s_star),
            SetSpec::Substitution { rule, .. } => Some(substitution_dimension(rule)),
            SetSpec::Pascal { .. } => Some(3f64.log2()),
            SetSpec::Tower { spec, part } => Some(if *part == TowerPart::A { spec.alpha } else { spec.beta }),
            SetSpec::File(_) => None,
        }
    }
}

impl BuiltSet {
    /// `preferred` when it applies to this kind of set, otherwise the
    /// Euclidean norm for lattice sets.
    pub fn norm_for(&self, preferred: NormKind) -> NormKind {
        match (self, preferred) {
            (BuiltSet::Lattice(_), NormKind::Value | NormKind::BinaryLength) => NormKind::Euclidean,
            _ => preferred,
        }
    }

    /// Dyadic profile of blocks `0..=n_max` in `norm`.
    pub fn profile(&self, norm: NormKind, n_max: usize, budget: Budget) -> Result<CountProfile> {
        match self {
            BuiltSet::Integers(a) => block_profile(a, norm, n_max, budget),
            BuiltSet::Lattice(l) => block_profile(l, norm, n_max, budget),
            BuiltSet::Tower(pair, part) => {
                if norm != NormKind::BinaryLength {
                    return Err(usage("tower sets are profiled by binary length"));
                }
                Ok(pair.profile(*part, n_max))
            }
        }
    }

    pub fn integers(&self) -> Option<&IntegerSet> {
        match self {
            BuiltSet::Integers(a) => Some(a),
            BuiltSet::Tower(pair, TowerPart::A) => Some(pair.a()),
            BuiltSet::Tower(pair, TowerPart::B) => Some(pair.b()),
            BuiltSet::Lattice(_) => None,
        }
    }
}
