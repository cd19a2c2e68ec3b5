//! `zdim`: generate sets, count them at dyadic scales, estimate and solve for
//! their zeta-dimension, build gales and run the verification suites.
//!
//! Exit status is 0 on success, 1 on a domain error and 2 on a usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zdim_core::algebra::{
    affine, bounded_components, cartesian, integer_components, pointwise, union, write_components_csv, AffineMode,
    PointwiseOp,
};
use zdim_core::closed_form::{
    code_dimension, lattice_subspace_dimension, substitution_dimension, write_comparison_csv, ComparisonRow,
};
use zdim_core::estimators::{
    abscissa_probe, doubling_schedule, estimate, linear_grid, write_plot_data, ProbeConfig, DEFAULT_WINDOW,
};
use zdim_core::family::{BuiltSet, SetSpec};
use zdim_core::gales::{build_supergale, gale_deficiency, kraft_check, succeeds, GaleMode};
use zdim_core::generators::{gen_substitution, InstantaneousCodeSpec, TowerPairSpec};
use zdim_core::io::{write_integers, write_lattice};
use zdim_core::verify::{run_suite, VerifyParams, SUITES};
use zdim_core::{zeta_partial, Budget, IntegerSet, LatticePointSet, NormKind, Result, ZetaError};

const SUITE_HELP: &str = "Suites:
  thm2.1  dyadic count exponents match closed-form dimensions; abscissa probe agrees
  thm3.5  squares x cubes: lower/upper chain for Cartesian products
  thm3.6  r-components of the squares against a consecutive-gap scan
  thm3.w  sublattice rank equals the estimated dimension of its points
  thm4.1  substitution fractals: |F_k| = Y^k and log Y / log c against the estimator
  thm5.1  instantaneous codes: root of the code equation against the estimator
  thm5.5  supergale for the squares: validity, success coverage, Kraft bound
  thm5.6  tower pair: sumset block counts and entropy rate (--alpha/--beta/--gamma)";

const SET_HELP: &str = "Set specs:
  squares | cubes | primes | all
  powers:b=<int>             perfect:m=<int>
  finite:<int>,<int>,...     file:<path>
  digits:k=<int>,allow=<digits>
  code:k=<int>,delta=<digits>,B=<word>|<word>|...
  subst:c=<int>,d=<int>,rule=<cells>[,depth=<int>]
  pascal[:depth=<int>]
  tower:a=<real>,b=<real>,g=<real>[,part=A|B]";

#[derive(Parser)]
#[command(name = "zdim", version, about = "Zeta-dimension of integer and lattice point sets", after_help = SET_HELP)]
struct Cli {
    /// Maximum number of elements one enumeration may visit [env: ZDIM_BUDGET]
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the elements (or lattice points) of a set
    Gen(GenArgs),
    /// Dyadic count profile as CSV `n,block_count,cumulative_count`
    Count(CountArgs),
    /// Upper and lower dimension estimates
    Estimate(EstimateArgs),
    /// Closed-form dimension of a code, a family or a sublattice
    Solve(SolveArgs),
    /// Substitution fractal or Pascal triangle: level sizes and dimension
    Fractal(FractalArgs),
    /// Supergale that succeeds on a set
    Gale(GaleArgs),
    /// Set operations and r-components
    Algebra(AlgebraArgs),
    /// Run a verification suite
    #[command(after_help = SUITE_HELP)]
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SetArgs {
    /// Set to work on (see `zdim --help`)
    #[arg(long = "set", value_name = "SPEC")]
    set: SetSpec,
    /// Construction depth for lattice families that do not fix one
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    Value,
    Euclidean,
    L1,
    Binary,
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Value => NormKind::Value,
            NormArg::Euclidean => NormKind::Euclidean,
            NormArg::L1 => NormKind::L1,
            NormArg::Binary => NormKind::BinaryLength,
        }
    }
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Largest dyadic scale (default depends on the family)
    #[arg(long)]
    nmax: Option<usize>,
    /// Norm to count by (default depends on the family)
    #[arg(long, value_enum)]
    norm: Option<NormArg>,
}

impl ProfileArgs {
    fn resolve(&self, built: &BuiltSet) -> (NormKind, usize) {
        let norm = match self.norm {
            Some(n) => n.into(),
            None => built.norm_for(self.set.set.default_norm()),
        };
        let n_max = self.nmax.unwrap_or_else(|| self.set.set.default_n_max(self.set.depth));
        (norm, n_max)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Largest integer listed (integer sets only)
    #[arg(long, default_value_t = 1000)]
    bound: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    /// Also print the zeta partial sum at this exponent, truncated at 2^nmax
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    /// Tail window of the estimator [default: min(8, nmax)]
    #[arg(long)]
    window: Option<usize>,
    /// Exponent table CSV
    #[arg(long)]
    out: Option<PathBuf>,
    /// Two-column `scale,exponent` plot data
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Also locate the abscissa of convergence from partial sums (integer sets)
    #[arg(long)]
    probe: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// Instantaneous code `k=<int>,delta=<digits>,B=<word>|...`
    #[arg(long, value_name = "CODE", conflicts_with_all = ["set", "vectors"])]
    code: Option<String>,
    /// Family with a closed form
    #[arg(long = "set", value_name = "SPEC", conflicts_with = "vectors")]
    set: Option<SetSpec>,
    /// Sublattice generators, e.g. `1,0;0,1`
    #[arg(long)]
    vectors: Option<String>,
    /// Compare with the estimate at this scale
    #[arg(long)]
    nmax: Option<usize>,
    /// Tail window of the estimator [default: min(8, nmax)]
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    depth: Option<u32>,
    /// Comparison CSV (with --set and --nmax)
    #[arg(long, requires = "nmax")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FractalArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Tail window of the estimator [default: min(8, nmax)]
    #[arg(long)]
    window: Option<usize>,
    /// Lattice point file of the deepest level
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GaleArgs {
    #[arg(long = "set", value_name = "SPEC")]
    set: SetSpec,
    #[arg(long)]
    s: f64,
    #[arg(long, default_value_t = 16)]
    depth: u32,
    /// Run the Kraft count at every length up to this
    #[arg(long)]
    kraft: Option<u32>,
    /// Report success on these integers
    #[arg(long, value_delimiter = ',')]
    check: Vec<u64>,
    /// Gale table CSV `w,log2_value`
    #[arg(long)]
    out: Option<PathBuf>,
    /// Longest string written to --out
    #[arg(long, default_value_t = 8)]
    dump: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraOp {
    Sum,
    Product,
    Union,
    Cartesian,
    Translate,
    Dilate,
    Components,
}

#[derive(Args)]
struct AlgebraArgs {
    #[arg(long, value_enum)]
    op: AlgebraOp,
    #[command(flatten)]
    set: SetArgs,
    /// Second operand for sum, product, union and cartesian
    #[arg(long = "with", value_name = "SPEC")]
    with: Option<SetSpec>,
    /// Shift or factor for translate and dilate
    #[arg(long)]
    k: Option<u64>,
    /// Path step for components
    #[arg(long)]
    r: Option<u64>,
    /// Elements up to this bound (Euclidean radius for cartesian)
    #[arg(long, default_value_t = 1 << 16)]
    bound: u64,
    /// Print an estimate of the result at this scale
    #[arg(long)]
    nmax: Option<usize>,
    /// Tail window of the estimator [default: min(8, nmax)]
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite id, or `all`
    suite: String,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, default_value_t = 0.7)]
    gamma: f64,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn window(w: Option<usize>, n_max: usize) -> usize {
    w.unwrap_or(DEFAULT_WINDOW.min(n_max.max(1)))
}

fn usage(msg: impl Into<String>) -> ZetaError {
    ZetaError::Usage(msg.into())
}

fn integers<'a>(built: &'a BuiltSet, flag: &str) -> Result<&'a IntegerSet> {
    built
        .integers()
        .ok_or_else(|| usage(format!("{flag} must name a set of integers")))
}

fn gen(args: &GenArgs, budget: Budget) -> Result<()> {
    let built = args.set.set.build(args.set.depth, budget)?;
    let out = output(&args.out)?;
    match &built {
        BuiltSet::Lattice(l) => write_lattice(l, out),
        _ => write_integers(integers(&built, "--set")?.collect_up_to(args.bound, budget)?, out),
    }
}

fn count(args: &CountArgs, budget: Budget) -> Result<()> {
    let built = args.profile.set.set.build(args.profile.set.depth, budget)?;
    let (norm, n_max) = args.profile.resolve(&built);
    let profile = built.profile(norm, n_max, budget)?;
    profile.write_csv(output(&args.out)?)?;
    if let Some(s) = args.s {
        let bound = 1u64.checked_shl(n_max as u32).filter(|_| n_max < 64).unwrap_or(u64::MAX);
        let z = match &built {
            BuiltSet::Lattice(l) => zeta_partial(l, s, bound, norm, budget)?,
            _ => zeta_partial(integers(&built, "--set")?, s, bound, norm, budget)?,
        };
        eprintln!("zeta_partial={:.9} terms={} complete={}", z.value, z.terms, z.complete);
    }
    Ok(())
}

fn estimate_cmd(args: &EstimateArgs, budget: Budget) -> Result<()> {
    let built = args.profile.set.set.build(args.profile.set.depth, budget)?;
    let (norm, n_max) = args.profile.resolve(&built);
    let profile = built.profile(norm, n_max, budget)?;
    let report = estimate(&profile, window(args.window, n_max))?;
    if let Some(path) = &args.out {
        report.write_csv(File::create(path)?)?;
    }
    if let Some(path) = &args.plot {
        write_plot_data(&profile, File::create(path)?)?;
    }
    println!("{}", report.summary_line());
    if args.probe {
        let set = integers(&built, "--set")?;
        let hi = (n_max as u32).clamp(12, 40);
        let cfg = ProbeConfig {
            budget,
            ..ProbeConfig::default()
        };
        let probe = abscissa_probe(set, &linear_grid(0.0, 1.5, 0.05), &doubling_schedule(hi - 10, hi), &cfg)?;
        match probe.value() {
            Some(v) => println!("abscissa={v:.6} outcome={:?}", probe.outcome),
            None => println!("abscissa=indeterminate"),
        }
    }
    Ok(())
}

fn parse_vectors(text: &str) -> Result<Vec<Vec<i64>>> {
    let vectors: Vec<Vec<i64>> = text
        .split(';')
        .map(|v| {
            v.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| usage(format!("--vectors: bad coordinate {x:?}"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if vectors.iter().any(|v| v.len() != vectors[0].len()) {
        return Err(usage("--vectors: all vectors need the same arity"));
    }
    Ok(vectors)
}

fn solve(args: &SolveArgs, budget: Budget) -> Result<()> {
    if let Some(code) = &args.code {
        let spec = InstantaneousCodeSpec::parse(code).map_err(|e| usage(format!("--code: {e}")))?;
        let r = code_dimension(&spec)?;
        println!("s_star={:.6}", r.s_star);
        return Ok(());
    }
    if let Some(v) = &args.vectors {
        println!("rank={}", lattice_subspace_dimension(&parse_vectors(v)?)?);
        return Ok(());
    }
    let spec = args.set.as_ref().ok_or_else(|| usage("solve needs --code, --set or --vectors"))?;
    let cf = spec
        .closed_form()
        .ok_or_else(|| ZetaError::Parameter(format!("no closed form for {spec}")))?;
    println!("closed_form={cf:.6}");
    if let Some(n_max) = args.nmax {
        let built = spec.build(args.depth, budget)?;
        let est = estimate(&built.profile(spec.default_norm(), n_max, budget)?, window(args.window, n_max))?;
        println!("estimated={:.6} abs_error={:.6}", est.upper.value, (est.upper.value - cf).abs());
        if args.out.is_some() {
            let text = spec.to_string();
            let (family, params) = text.split_once(':').unwrap_or((&text, ""));
            let row = ComparisonRow {
                family: family.to_string(),
                params: params.to_string(),
                closed_form: cf,
                estimated: est.upper.value,
            };
            write_comparison_csv(&[row], output(&args.out)?)?;
        }
    }
    Ok(())
}

fn fractal(args: &FractalArgs, budget: Budget) -> Result<()> {
    let spec = &args.set.set;
    let (norm, n_max) = (spec.default_norm(), spec.default_n_max(args.set.depth));
    let built = spec.build(args.set.depth, budget)?;
    let BuiltSet::Lattice(points) = &built else {
        return Err(usage("--set must be a subst: or pascal family"));
    };
    if let SetSpec::Substitution { rule, depth } = spec {
        let depth = depth.or(args.set.depth).unwrap_or(6);
        for k in 0..=depth {
            let level: LatticePointSet = gen_substitution(rule, k, budget)?;
            println!("k={k} count={}", level.len());
        }
        println!("Y={} c={} closed_form={:.6}", rule.surviving(), rule.c(), substitution_dimension(rule));
    } else if let Some(cf) = spec.closed_form() {
        println!("points={} closed_form={cf:.6}", points.len());
    }
    let report = estimate(&built.profile(norm, n_max, budget)?, window(args.window, n_max))?;
    println!("{}", report.summary_line());
    if args.out.is_some() {
        write_lattice(points, output(&args.out)?)?;
    }
    Ok(())
}

fn gale(args: &GaleArgs, budget: Budget) -> Result<()> {
    let built = args.set.build(None, budget)?;
    let set = integers(&built, "--set")?;
    let g = build_supergale(set, args.s, args.depth, budget)?;
    if let Some(c) = g.construction() {
        println!(
            "s={} depth={} estimate={:.6} epsilon={:.6} n0={} c0={:.6} c1={:.6}",
            args.s, args.depth, c.estimate, c.epsilon, c.n0, c.c0, c.c1
        );
    }
    println!("deficiency={:.3e}", gale_deficiency(&g, GaleMode::Gale));
    let members = set.collect_up_to((1u64 << args.depth) - 1, budget)?;
    let mut hits = 0;
    for &n in &members {
        hits += succeeds(&g, n)? as usize;
    }
    println!("success={hits}/{}", members.len());
    for &n in &args.check {
        println!("succeeds({n})={}", succeeds(&g, n)?);
    }
    if let Some(k_max) = args.kraft {
        for k in 0..=k_max {
            let kc = kraft_check(&g, k)?;
            println!("kraft k={k} count={} bound={:.6} ok={}", kc.count, kc.bound, kc.ok);
        }
    }
    if args.out.is_some() {
        g.write_csv(args.dump.min(args.depth), output(&args.out)?)?;
    }
    Ok(())
}

fn algebra(args: &AlgebraArgs, budget: Budget) -> Result<()> {
    let a_built = args.set.set.build(args.set.depth, budget)?;
    let b_built = || -> Result<BuiltSet> {
        args.with
            .as_ref()
            .ok_or_else(|| usage("--with is required for this --op"))?
            .build(args.set.depth, budget)
    };
    let k = || args.k.ok_or_else(|| usage("--k is required for this --op"));
    let result: Result<IntegerSet> = match args.op {
        AlgebraOp::Components => {
            let r = args.r.ok_or_else(|| usage("--r is required for --op components"))?;
            let points = match &a_built {
                BuiltSet::Lattice(l) => l.clone(),
                _ => {
                    let v = integers(&a_built, "--set")?.collect_up_to(args.bound, budget)?;
                    LatticePointSet::from_points(1, v.iter().map(|&x| [x as i64]))?
                }
            };
            let comps = match &a_built {
                BuiltSet::Lattice(_) => bounded_components(&points, r)?,
                _ => {
                    let v: Vec<u64> = points.iter().map(|p| p[0] as u64).collect();
                    integer_components(&v, r)?
                }
            };
            let max = comps.iter().map(|c| c.members.len()).max().unwrap_or(0);
            println!("components={} max_size={max}", comps.len());
            return write_components_csv(&points, &comps, output(&args.out)?);
        }
        AlgebraOp::Cartesian => {
            let b = b_built()?;
            let p = cartesian(integers(&a_built, "--set")?, integers(&b, "--with")?, args.bound, budget)?;
            if let Some(n) = args.nmax {
                let r = estimate(&zdim_core::block_profile(&p, NormKind::Euclidean, n, budget)?, window(args.window, n))?;
                println!("{}", r.summary_line());
            }
            return if args.out.is_some() { write_lattice(&p, output(&args.out)?) } else { Ok(()) };
        }
        AlgebraOp::Sum | AlgebraOp::Product | AlgebraOp::Union => {
            let b = b_built()?;
            let (a, b) = (integers(&a_built, "--set")?, integers(&b, "--with")?);
            match args.op {
                AlgebraOp::Sum => pointwise(a, b, PointwiseOp::Sum, args.bound, budget),
                AlgebraOp::Product => pointwise(a, b, PointwiseOp::Product, args.bound, budget),
                _ => Ok(union(a, b)),
            }
        }
        AlgebraOp::Translate => affine(integers(&a_built, "--set")?, k()?, AffineMode::Translate),
        AlgebraOp::Dilate => affine(integers(&a_built, "--set")?, k()?, AffineMode::Dilate),
    };
    let set = result?;
    if let Some(n) = args.nmax {
        let top = 1u64.checked_shl(n as u32).filter(|_| n < 64).unwrap_or(u64::MAX);
        if top > args.bound && set.is_finite() {
            return Err(usage(format!("--nmax {n} reaches past --bound {}", args.bound)));
        }
        let r = estimate(&zdim_core::block_profile(&set, NormKind::Value, n, budget)?, window(args.window, n))?;
        println!("{}", r.summary_line());
    }
    if args.out.is_some() {
        write_integers(set.collect_up_to(args.bound, budget)?, output(&args.out)?)?;
    }
    Ok(())
}

fn verify(args: &VerifyArgs, budget: Budget) -> Result<bool> {
    TowerPairSpec::new(args.alpha, args.beta, args.gamma).map_err(|e| usage(format!("--alpha/--beta/--gamma: {e}")))?;
    let params = VerifyParams {
        alpha: args.alpha,
        beta: args.beta,
        gamma: args.gamma,
        budget,
    };
    let ids: Vec<&str> = if args.suite == "all" {
        SUITES.iter().map(|(id, _)| *id).collect()
    } else {
        vec![args.suite.as_str()]
    };
    let mut all_passed = true;
    let mut stdout = io::stdout().lock();
    for id in ids {
        for check in run_suite(id, &params)? {
            all_passed &= check.passed;
            writeln!(stdout, "{} [{id}]", check.line())?;
        }
    }
    Ok(all_passed)
}

fn run(cli: Cli) -> Result<bool> {
    let budget = match cli.budget {
        Some(b) => Budget(b),
        None => Budget::from_env()?,
    };
    match &cli.command {
        Command::Gen(a) => gen(a, budget)?,
        Command::Count(a) => count(a, budget)?,
        Command::Estimate(a) => estimate_cmd(a, budget)?,
        Command::Solve(a) => solve(a, budget)?,
        Command::Fractal(a) => fractal(a, budget)?,
        Command::Gale(a) => gale(a, budget)?,
        Command::Algebra(a) => algebra(a, budget)?,
        Command::Verify(a) => return verify(a, budget),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("zdim: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
