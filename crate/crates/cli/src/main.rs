use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use superint::format::to_json;
use superint::fuzzy::check_lattice;
use superint::lab::{
    check_direct_sum, check_group, check_ideal, check_linear_map, check_proper_subgroup, check_semigroup,
    check_semiring, check_strictness, find_generating_set, find_witnesses, independent_exceeds_basis,
    independent_exceeds_basis_demo, is_independent, span, IndependenceMode, StructureReport, WitnessKind,
};
use superint::{
    audit_eta, count_proper_partitions, enumerate_partitions, extended_product, fuzzify, fuzzy_max, fuzzy_min, gram,
    major_product, outer_product, parse_matrix, render_matrix, scalar_max, scalar_min, scalar_prod, CarrierFile, Error,
    EtaMap, FuzzySuperMatrix, RenderFormat, Scalar, ScalarDomain, SuperIntervalMatrix,
};

#[derive(Parser)]
#[command(name = "superint", version, about = "Exact super interval matrices and a structure checker")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Print terminating fractions as decimals
    #[arg(long, global = true)]
    decimals: bool,
    /// Seed for sampled checks (overrides the carrier file)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a matrix file and print it in canonical form
    Show { a: PathBuf },
    /// Entrywise sum of two matrices of the same type
    Add { a: PathBuf, b: PathBuf },
    /// Entrywise product of two matrices of the same type
    Hadamard { a: PathBuf, b: PathBuf },
    /// Scale every endpoint by a scalar of the matrix's domain
    ScalarMul {
        #[arg(long)]
        by: String,
        a: PathBuf,
    },
    /// Transpose, swapping row and column cuts
    Transpose { a: PathBuf },
    /// Block product, or the flat product repartitioned with --mode extended
    Matmul {
        #[arg(long, value_enum, default_value = "major")]
        mode: ProductMode,
        a: PathBuf,
        b: PathBuf,
    },
    /// Column times row
    Outer { col: PathBuf, row: PathBuf },
    /// A transposed times A
    Gram { a: PathBuf },
    /// Count or list the ways to partition an M x N grid
    Partitions {
        #[arg(long, conflicts_with = "list", required_unless_present = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        include_trivial: bool,
        m: usize,
        n: usize,
    },
    /// Check structure axioms on a carrier
    Check {
        #[arg(value_enum)]
        what: CheckKind,
        #[command(flatten)]
        carrier: CarrierArg,
    },
    /// Search a carrier for witnesses
    Find {
        /// zero-divisors, idempotents, units or additive-inverses
        kind: WitnessKind,
        #[command(flatten)]
        carrier: CarrierArg,
        /// Witnesses to print
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Span of the carrier file's generators
    Span {
        #[command(flatten)]
        carrier: CarrierArg,
        /// Matrices to test for membership
        #[arg(long = "contains")]
        contains: Vec<PathBuf>,
        /// List up to this many elements of a finite span
        #[arg(long)]
        list: Option<u64>,
    },
    /// Generating sets and independence of the carrier file's vectors
    Basis {
        #[command(flatten)]
        carrier: CarrierArg,
        #[arg(long, value_enum, default_value = "combination")]
        independence: IndependenceArg,
        /// Compare the file's vectors with the unit basis of the carrier
        #[arg(long)]
        compare: bool,
        /// Run the comparison with the built-in five-vector family on the full nat 1x4 carrier
        #[arg(long)]
        demo: bool,
    },
    /// Map endpoints into [0, 1] with an eta map
    Fuzzify {
        #[command(flatten)]
        eta: EtaArgs,
        a: PathBuf,
    },
    /// Entrywise min of two unit-interval matrices
    FuzzyMin { a: PathBuf, b: PathBuf },
    /// Entrywise max of two unit-interval matrices
    FuzzyMax { a: PathBuf, b: PathBuf },
    /// Combine a unit scalar with every endpoint
    FuzzyScale {
        #[arg(long, value_enum)]
        op: ScaleOp,
        #[arg(long)]
        by: String,
        a: PathBuf,
    },
    /// Test eta(A+B) >= min(eta(A), eta(B)) over a carrier
    AuditEta {
        #[command(flatten)]
        carrier: CarrierArg,
        #[command(flatten)]
        eta: EtaArgs,
    },
}

#[derive(Args)]
struct CarrierArg {
    #[arg(long)]
    carrier: PathBuf,
}

#[derive(Args)]
struct EtaArgs {
    #[arg(long, value_enum)]
    eta: Option<EtaRule>,
    #[arg(long)]
    eta_zero: Option<String>,
    #[arg(long)]
    zero: Option<String>,
    #[arg(long)]
    integer: Option<String>,
    #[arg(long)]
    fraction: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductMode {
    Major,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Semigroup,
    Group,
    Semiring,
    Strict,
    Ideal,
    DirectSum,
    LinearMap,
    Lattice,
    /// A nontrivial group inside the carrier other than the carrier itself
    Subgroup,
}

#[derive(Clone, Copy, ValueEnum)]
enum IndependenceArg {
    Pairwise,
    Combination,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleOp {
    Min,
    Max,
    Prod,
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaRule {
    Reciprocal,
    Class,
}

/// Failures split by exit code: 1 for library errors, 2 for usage and I/O.
enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

struct Ctx {
    json: bool,
    decimals: bool,
    seed: Option<u64>,
}

impl Ctx {
    fn matrix(&self, m: &SuperIntervalMatrix) -> String {
        let format = if self.json { RenderFormat::Json } else { RenderFormat::Text };
        render_matrix(m, format, self.decimals)
    }

    fn value(&self, v: &Value, text: String) -> String {
        if self.json {
            let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
            s.push('\n');
            s
        } else {
            text
        }
    }

    fn report(&self, r: &StructureReport) -> String {
        self.value(&serde_json::to_value(r).expect("reports serialize"), r.render_text())
    }

    fn carrier(&self, arg: &CarrierArg) -> Result<CarrierFile, Failure> {
        let mut f = CarrierFile::parse(&read(&arg.carrier)?)?;
        if let Some(seed) = self.seed {
            f.budget.seed = seed;
        }
        Ok(f)
    }

    fn mjson(&self, m: &SuperIntervalMatrix) -> Value {
        serde_json::to_value(to_json(m, self.decimals)).expect("matrices serialize")
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<SuperIntervalMatrix, Failure> {
    parse_matrix(&read(path)?).map_err(|e| Failure::Lib(with_file(path, e)))
}

fn load_fuzzy(path: &Path) -> Result<FuzzySuperMatrix, Failure> {
    Ok(FuzzySuperMatrix::new(load(path)?)?)
}

/// Prefixes parse errors with the file they came from.
fn with_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, column, message } => {
            Error::Parse { line, column, message: format!("{}: {message}", path.display()) }
        }
        other => other,
    }
}

fn scalar_in(d: &ScalarDomain, token: &str) -> Result<Scalar, Failure> {
    d.parse_scalar(token).map_err(|reason| {
        Failure::Lib(Error::InvalidEndpoint { value: format!("{token} ({reason})"), domain: d.to_string() })
    })
}

fn unit(token: &Option<String>, default: &str) -> Result<Scalar, Failure> {
    let token = token.as_deref().unwrap_or(default);
    ScalarDomain::UnitRationals
        .parse_scalar(token)
        .map_err(|_| Failure::Lib(Error::ScalarOutOfRange(token.to_string())))
}

fn eta_map(args: &EtaArgs, from_file: Option<EtaMap>) -> Result<EtaMap, Failure> {
    Ok(match (args.eta, from_file) {
        (None, Some(e)) => e,
        (None | Some(EtaRule::Reciprocal), _) => EtaMap::reciprocal(unit(&args.eta_zero, "1")?)?,
        (Some(EtaRule::Class), _) => {
            EtaMap::by_class(unit(&args.zero, "1")?, unit(&args.integer, "1")?, unit(&args.fraction, "1")?)?
        }
    })
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { json: cli.json, decimals: cli.decimals, seed: cli.seed };
    match cli.command {
        Command::Show { a } => Ok(ctx.matrix(&load(&a)?)),
        Command::Add { a, b } => Ok(ctx.matrix(&load(&a)?.add(&load(&b)?)?)),
        Command::Hadamard { a, b } => Ok(ctx.matrix(&load(&a)?.hadamard(&load(&b)?)?)),
        Command::ScalarMul { by, a } => {
            let a = load(&a)?;
            let s = scalar_in(&a.domain(), &by)?;
            Ok(ctx.matrix(&a.scalar_mul(&s)?))
        }
        Command::Transpose { a } => Ok(ctx.matrix(&load(&a)?.transpose())),
        Command::Matmul { mode, a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            let out = match mode {
                ProductMode::Major => major_product(&a, &b)?,
                ProductMode::Extended => extended_product(&a, &b)?,
            };
            Ok(ctx.matrix(&out))
        }
        Command::Outer { col, row } => Ok(ctx.matrix(&outer_product(&load(&col)?, &load(&row)?)?)),
        Command::Gram { a } => Ok(ctx.matrix(&gram(&load(&a)?)?)),
        Command::Partitions { count, list: _, include_trivial, m, n } => partitions(&ctx, count, include_trivial, m, n),
        Command::Check { what, carrier } => check(&ctx, what, &carrier),
        Command::Find { kind, carrier, limit } => find(&ctx, kind, &carrier, limit),
        Command::Span { carrier, contains, list } => span_cmd(&ctx, &carrier, &contains, list),
        Command::Basis { carrier, independence, compare, demo } => basis(&ctx, &carrier, independence, compare, demo),
        Command::Fuzzify { eta, a } => {
            let eta = eta_map(&eta, None)?;
            Ok(ctx.matrix(fuzzify(&load(&a)?, &eta)?.matrix()))
        }
        Command::FuzzyMin { a, b } => Ok(ctx.matrix(fuzzy_min(&load_fuzzy(&a)?, &load_fuzzy(&b)?)?.matrix())),
        Command::FuzzyMax { a, b } => Ok(ctx.matrix(fuzzy_max(&load_fuzzy(&a)?, &load_fuzzy(&b)?)?.matrix())),
        Command::FuzzyScale { op, by, a } => {
            let a = load_fuzzy(&a)?;
            let s = unit(&Some(by), "")?;
            let out = match op {
                ScaleOp::Min => scalar_min(&s, &a)?,
                ScaleOp::Max => scalar_max(&s, &a)?,
                ScaleOp::Prod => scalar_prod(&s, &a)?,
            };
            Ok(ctx.matrix(out.matrix()))
        }
        Command::AuditEta { carrier, eta } => {
            let f = ctx.carrier(&carrier)?;
            let eta = eta_map(&eta, f.eta.clone())?;
            let audit = audit_eta(&eta, &f.carrier, &f.budget)?;
            let mut text = audit.report.render_text();
            for (x, y) in audit.failing_pairs.iter().take(10) {
                text.push_str(&format!("failing pair: {x}, {y}\n"));
            }
            if audit.failing_pairs.len() > 10 {
                text.push_str(&format!("({} failing pairs in all)\n", audit.failing_pairs.len()));
            }
            Ok(ctx.value(&serde_json::to_value(&audit).expect("audits serialize"), text))
        }
    }
}

fn partitions(ctx: &Ctx, count: bool, include_trivial: bool, m: usize, n: usize) -> Outcome {
    if count {
        let mut c = count_proper_partitions(m, n)?;
        if include_trivial {
            c += 1u32;
        }
        return Ok(ctx.value(&json!({ "rows": m, "cols": n, "count": c.to_string() }), format!("{c}\n")));
    }
    let all = enumerate_partitions(m, n, include_trivial)?;
    let text: String = all.iter().map(|p| format!("{p}\n")).collect();
    let v: Vec<Value> = all.iter().map(|p| json!({ "row_cuts": p.row_cuts(), "col_cuts": p.col_cuts() })).collect();
    Ok(ctx.value(&Value::Array(v), text))
}

fn check(ctx: &Ctx, what: CheckKind, arg: &CarrierArg) -> Outcome {
    let f = ctx.carrier(arg)?;
    let (c, b) = (&f.carrier, &f.budget);
    let report = match what {
        CheckKind::Semigroup => check_semigroup(c, b)?,
        CheckKind::Group => check_group(c, b)?,
        CheckKind::Semiring => check_semiring(c, b)?,
        CheckKind::Strict => check_strictness(c)?,
        CheckKind::Lattice => check_lattice(c, b)?,
        CheckKind::Subgroup => check_proper_subgroup(c)?,
        CheckKind::Ideal => {
            let gens = if f.ideal.is_empty() { &f.generators } else { &f.ideal };
            if gens.is_empty() {
                return Err(Failure::Usage("the carrier file lists no ideal generators".to_string()));
            }
            check_ideal(c, gens, &f.action, b)?
        }
        CheckKind::DirectSum => {
            if f.parts.is_empty() {
                return Err(Failure::Usage("the carrier file lists no [[parts]]".to_string()));
            }
            let r = check_direct_sum(&f.parts, c, &f.action, b)?;
            let mut text = r.report.render_text();
            text.push_str(&format!("decomposition: {:?}\n", r.decomposition).to_lowercase());
            for o in &r.overlaps {
                text.push_str(&format!("parts {} and {} share {}\n", o.i + 1, o.j + 1, o.witness));
            }
            return Ok(ctx.value(&serde_json::to_value(&r).expect("reports serialize"), text));
        }
        CheckKind::LinearMap => {
            let Some((rule, dst)) = &f.map else {
                return Err(Failure::Usage("the carrier file has no [map] section".to_string()));
            };
            check_linear_map(rule, c, dst, &f.action, b)?
        }
    };
    Ok(ctx.report(&report))
}

fn find(ctx: &Ctx, kind: WitnessKind, arg: &CarrierArg, limit: usize) -> Outcome {
    let f = ctx.carrier(arg)?;
    let set = find_witnesses(&f.carrier, kind)?;
    let count = set.count();
    let shown: Vec<Vec<SuperIntervalMatrix>> = set.iter().take(limit).collect();
    let mut text = format!("{} in {}\ncount: {count}\n", kind.name(), f.carrier.describe());
    if !set.is_complete() {
        text.push_str("note: the pool is not closed, so the search covers the pool slice only\n");
    }
    for w in &shown {
        let parts: Vec<String> = w.iter().map(ToString::to_string).collect();
        text.push_str(&format!("{}\n", parts.join(", ")));
    }
    let v = json!({
        "kind": kind,
        "carrier": f.carrier,
        "count": count.to_string(),
        "complete": set.is_complete(),
        "witnesses": shown.iter().map(|w| w.iter().map(|m| ctx.mjson(m)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(ctx.value(&v, text))
}

fn span_cmd(ctx: &Ctx, arg: &CarrierArg, contains: &[PathBuf], list: Option<u64>) -> Outcome {
    let f = ctx.carrier(arg)?;
    if f.generators.is_empty() {
        return Err(Failure::Usage("the carrier file lists no generators".to_string()));
    }
    let s = span(&f.generators, &f.action, &f.budget)?;
    let size = s.size().map_or_else(|| "infinite".to_string(), |n| n.to_string());
    let mut text = format!("span of {} generators\nsize: {size}\n", f.generators.len());
    let gens: Vec<SuperIntervalMatrix> = s.generators();
    for g in &gens {
        text.push_str(&format!("generator: {g}\n"));
    }
    let mut members = Vec::new();
    for path in contains {
        let m = load(path)?;
        let verdict = match s.contains(&m) {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        };
        text.push_str(&format!("contains {m}: {verdict}\n"));
        members.push(json!({ "matrix": ctx.mjson(&m), "member": s.contains(&m) }));
    }
    let elements = match list {
        Some(limit) => s.elements(limit)?,
        None => Vec::new(),
    };
    for e in &elements {
        text.push_str(&format!("{e}\n"));
    }
    let v = json!({
        "size": size,
        "generators": gens.iter().map(|g| ctx.mjson(g)).collect::<Vec<_>>(),
        "membership": members,
        "elements": elements.iter().map(|e| ctx.mjson(e)).collect::<Vec<_>>(),
    });
    Ok(ctx.value(&v, text))
}

fn basis(ctx: &Ctx, arg: &CarrierArg, independence: IndependenceArg, compare: bool, demo: bool) -> Outcome {
    let f = ctx.carrier(arg)?;
    let (c, b) = (&f.carrier, &f.budget);
    if demo || compare {
        let d = if demo {
            independent_exceeds_basis_demo(c, b)?
        } else {
            independent_exceeds_basis(c, &f.action, &f.vectors, b)?
        };
        let mut text = format!("unit basis: {} elements\n", d.basis.len());
        text.push_str(&format!("unit basis spans the pool slice: {}\n", d.basis_spans_slice));
        text.push_str(&format!("family: {} elements, {}\n", d.larger.len(), independence_text(&d.larger_independent)));
        match &d.outside_witness {
            Some(m) => text.push_str(&format!("least element outside the family's span: {m}\n")),
            None => text.push_str("the family spans the pool slice\n"),
        }
        text.push_str(&format!("independent family larger than the basis: {}\n", d.independent));
        return Ok(ctx.value(&serde_json::to_value(&d).expect("demos serialize"), text));
    }
    if !f.vectors.is_empty() {
        let mode = match independence {
            IndependenceArg::Pairwise => IndependenceMode::Pairwise,
            IndependenceArg::Combination => IndependenceMode::Combination,
        };
        let r = is_independent(&f.vectors, &f.action, mode, b)?;
        let text = format!("{} vectors: {}\n", f.vectors.len(), independence_text(&r));
        return Ok(ctx.value(&serde_json::to_value(&r).expect("results serialize"), text));
    }
    let g = find_generating_set(c, &f.action, b)?;
    let mut text =
        format!("generating set of {} elements spans {} of {}\n", g.generators.len(), g.span_size, g.carrier_size);
    for m in &g.generators {
        text.push_str(&format!("{m}\n"));
    }
    let v = json!({
        "generators": g.generators.iter().map(|m| ctx.mjson(m)).collect::<Vec<_>>(),
        "span_size": g.span_size.to_string(),
        "carrier_size": g.carrier_size.to_string(),
    });
    Ok(ctx.value(&v, text))
}

fn independence_text(r: &superint::lab::Independence) -> String {
    use superint::lab::{Dependence, Independence};
    match r {
        Independence::Independent { .. } => "independent".to_string(),
        Independence::Unknown { reason } => format!("unknown ({reason})"),
        Independence::Dependent { dependence: Dependence::Multiple { i, j, scalar } } => {
            format!("dependent: vector {} = {scalar} * vector {}", i + 1, j + 1)
        }
        Independence::Dependent { dependence: Dependence::Combination { index, coefficients } } => {
            let terms: Vec<String> = coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| format!("{c} * vector {}", j + 1))
                .collect();
            format!("dependent: vector {} = {}", index + 1, terms.join(" + "))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
