//! Command-line front end: solve instances against built-in or file-based
//! templates, generate reproducible random instances, benchmark the peek
//! loop, and run the meta-layer characterization checks.
//!
//! Exit codes: 0 accept/satisfiable, 1 reject/unsatisfiable, 2 error,
//! 3 unknown (search budget exhausted).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use peekac::ac::{acc_holds, Template};
use peekac::descriptor::{PointAlgebra, TemplateDescriptor};
use peekac::error::Error;
use peekac::gen;
use peekac::hom::{find_homomorphism, HomSearch};
use peekac::io;
use peekac::limits::Limits;
use peekac::meta::{characterize, InstanceBound};
use peekac::pac::{pac_decide, PacOptions, PeekReport};
use peekac::structure::Structure;
use peekac::templates::{
    cnf2_to_instance, cycle_template, default_oracle_universe, k2_template,
    point_algebra_oracle, set_constraint_oracle, set_constraint_pac, two_sat_template,
    CycleOrientation,
};

#[derive(Parser)]
#[command(name = "peekac", version, about = "Arc consistency and peek arc consistency engines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance against a template.
    Solve(SolveArgs),
    /// Generate a reproducible random instance.
    Gen(GenArgs),
    /// Time the engines over generated instances.
    Bench(BenchArgs),
    /// Run the solvability characterization checks on a finite template.
    Characterize(CharacterizeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Pac,
    Ac,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Args)]
struct LimitArgs {
    /// Cap on the base universe of power-structure constructions.
    #[arg(long, default_value_t = 12)]
    cap_universe: usize,
    /// Cap on the universe for automorphism-orbit search.
    #[arg(long, default_value_t = 8)]
    orbit_cap: usize,
    /// Node budget for brute-force homomorphism search.
    #[arg(long, default_value_t = 100_000_000)]
    hom_budget: u64,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            power_universe: self.cap_universe,
            orbit_universe: self.orbit_cap,
            hom_budget: self.hom_budget,
            ..Limits::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Template: k2 | twosat | pointalg | setcon | cycle:<FB..> | <path>.
    #[arg(long)]
    template: String,
    /// Instance file (structure format; DIMACS-like for twosat; set format
    /// for setcon).
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Pac)]
    method: Method,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Report every peek instead of short-circuiting after a pass.
    #[arg(long)]
    full_report: bool,
    /// Stop at the first all-fail variable (report marks unexplored peeks).
    #[arg(long)]
    reject_fast: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct GenArgs {
    /// graph | 2cnf | pointalg | setcon
    #[arg(long)]
    kind: String,
    /// Number of vertices / variables.
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Edge probability for graphs.
    #[arg(long, default_value_t = 0.3)]
    edge_prob: f64,
    /// Clauses per variable for 2cnf.
    #[arg(long, default_value_t = 2.0)]
    clauses_per_var: f64,
    /// leq edges per variable for pointalg.
    #[arg(long, default_value_t = 2.0)]
    leq_per_var: f64,
    /// neq edges per variable for pointalg.
    #[arg(long, default_value_t = 0.5)]
    neq_per_var: f64,
    /// Constraints per variable for setcon (split 3:1:1 sub/dis/neq).
    #[arg(long, default_value_t = 2.5)]
    cons_per_var: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Template: pointalg | k2 | twosat.
    #[arg(long, default_value = "pointalg")]
    template: String,
    /// Comma-separated instance sizes.
    #[arg(long, default_value = "100,200,400")]
    sizes: String,
    /// Comma-separated worker counts.
    #[arg(long, default_value = "1,4")]
    workers: String,
    #[arg(long, value_enum, default_value_t = Method::Pac)]
    method: Method,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timing repetitions per cell (median reported).
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct CharacterizeArgs {
    /// Template: k2 | twosat | cycle:<FB..> | <path>.
    #[arg(long)]
    template: String,
    /// Largest peek-power exponent to check.
    #[arg(long, default_value_t = 3)]
    nmax: usize,
    /// Instance bound for the extensional check.
    #[arg(long, default_value_t = 3)]
    max_vars: usize,
    #[arg(long, default_value_t = 4)]
    max_tuples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    limits: LimitArgs,
}

enum ResolvedTemplate {
    Finite(Structure),
    PointAlgebra(PointAlgebra),
    SetConstraints,
}

fn resolve_template(name: &str) -> Result<ResolvedTemplate, Error> {
    match name {
        "k2" => Ok(ResolvedTemplate::Finite(k2_template())),
        "twosat" | "2sat" => Ok(ResolvedTemplate::Finite(two_sat_template())),
        "pointalg" => Ok(ResolvedTemplate::PointAlgebra(PointAlgebra::new())),
        "setcon" => Ok(ResolvedTemplate::SetConstraints),
        other => {
            if let Some(bits) = other.strip_prefix("cycle:") {
                let c = CycleOrientation::parse(bits)?;
                return Ok(ResolvedTemplate::Finite(cycle_template(&c)));
            }
            let text = std::fs::read_to_string(other)
                .map_err(|e| Error::Invalid(format!("cannot read template `{other}`: {e}")))?;
            Ok(ResolvedTemplate::Finite(io::parse_structure(&text)?))
        }
    }
}

fn read_instance_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read instance `{}`: {e}", path.display())))
}

/// Decision plus both report renderings.
struct SolveOutcome {
    /// 0 accept, 1 reject, 3 unknown
    code: u8,
    text: String,
    lines: String,
}

fn report_outcome(
    report: &PeekReport,
    instance: &Structure,
    rep_name: &dyn Fn(usize) -> String,
) -> SolveOutcome {
    let accepted = report.accepted();
    let mut text = String::new();
    let _ = writeln!(text, "decision: {}", if accepted { "accept" } else { "reject" });
    if let Some(v) = report.rejecting_variable {
        let _ = writeln!(
            text,
            "variable {} fails for every representative",
            instance.element_name(v)
        );
    }
    let passes = report.variables.iter().filter(|v| v.passed).count();
    let _ = writeln!(
        text,
        "{} of {} variables have a passing peek; representatives peeked: [{}]",
        passes,
        report.variables.len(),
        report
            .representatives
            .iter()
            .map(|&r| rep_name(r))
            .collect::<Vec<_>>()
            .join(", ")
    );
    SolveOutcome {
        code: if accepted { 0 } else { 1 },
        text,
        lines: report.render_lines(instance),
    }
}

fn plain_outcome(code: u8, verdict: &str) -> SolveOutcome {
    SolveOutcome {
        code,
        text: format!("decision: {verdict}\n"),
        lines: format!("decision {verdict}\n"),
    }
}

fn run_solve(args: &SolveArgs) -> Result<SolveOutcome, Error> {
    let limits = args.limits.limits();
    let options = PacOptions {
        short_circuit: !args.full_report,
        reject_fast: args.reject_fast,
        ..Default::default()
    };
    let template = resolve_template(&args.template)?;
    let raw = read_instance_file(&args.instance)?;

    match template {
        ResolvedTemplate::Finite(b) => {
            let parsed = if matches!(args.template.as_str(), "twosat" | "2sat") {
                let (n_vars, clauses) = io::parse_cnf2(&raw)?;
                cnf2_to_instance(n_vars, &clauses)?
            } else {
                io::align_to_signature(&io::parse_structure(&raw)?, b.signature())?
            };
            match args.method {
                Method::Pac => {
                    let report =
                        pac_decide(&parsed, Template::Finite(&b), args.workers, &options, &limits)?;
                    Ok(report_outcome(&report, &parsed, &|r| b.element_name(r)))
                }
                Method::Ac => {
                    let ok = acc_holds(&parsed, Template::Finite(&b))?;
                    Ok(plain_outcome(u8::from(!ok), if ok { "accept" } else { "reject" }))
                }
                Method::Brute => match find_homomorphism(&parsed, &b, &limits)? {
                    HomSearch::Found(_) => Ok(plain_outcome(0, "accept")),
                    HomSearch::NotFound => Ok(plain_outcome(1, "reject")),
                    HomSearch::BudgetExhausted => Ok(plain_outcome(3, "unknown")),
                },
            }
        }
        ResolvedTemplate::PointAlgebra(pa) => {
            let parsed = io::align_to_signature(&io::parse_structure(&raw)?, pa.signature())?;
            match args.method {
                Method::Pac => {
                    let report = pac_decide(
                        &parsed,
                        Template::Descriptor(&pa),
                        args.workers,
                        &options,
                        &limits,
                    )?;
                    Ok(report_outcome(&report, &parsed, &|r| pa.representative_name(r)))
                }
                Method::Ac => {
                    let ok = acc_holds(&parsed, Template::Descriptor(&pa))?;
                    Ok(plain_outcome(u8::from(!ok), if ok { "accept" } else { "reject" }))
                }
                Method::Brute => {
                    let sat = point_algebra_oracle(&parsed)?;
                    Ok(plain_outcome(u8::from(!sat), if sat { "accept" } else { "reject" }))
                }
            }
        }
        ResolvedTemplate::SetConstraints => {
            let instance = io::parse_set_constraints(&raw)?;
            match args.method {
                Method::Pac => {
                    let ok = set_constraint_pac(&instance).accepted();
                    Ok(plain_outcome(u8::from(!ok), if ok { "accept" } else { "reject" }))
                }
                Method::Ac => Err(Error::Invalid(
                    "set constraints are decided by the pac pattern test or the brute oracle"
                        .into(),
                )),
                Method::Brute => {
                    let limits =
                        Limits { set_oracle_vars: instance.n_vars(), ..args.limits.limits() };
                    // one witness element per disequality keeps a satisfying
                    // family satisfying, so this universe is complete
                    let m = default_oracle_universe(instance.n_vars())
                        .min(instance.neqs().len().max(1))
                        .min(20);
                    match set_constraint_oracle(&instance, m, &limits) {
                        Ok(sat) => {
                            Ok(plain_outcome(u8::from(!sat), if sat { "accept" } else { "reject" }))
                        }
                        Err(Error::BudgetExhausted) => Ok(plain_outcome(3, "unknown")),
                        Err(e) => Err(e),
                    }
                }
            }
        }
    }
}

fn run_gen(args: &GenArgs) -> Result<String, Error> {
    let n = args.size;
    if n == 0 {
        return Err(Error::Invalid("size must be positive".into()));
    }
    match args.kind.as_str() {
        "graph" => Ok(io::serialize_structure(&gen::gen_graph(n, args.edge_prob, args.seed))),
        "2cnf" => {
            let clauses =
                gen::gen_2cnf(n, (n as f64 * args.clauses_per_var).round() as usize, args.seed);
            Ok(io::serialize_cnf2(n, &clauses))
        }
        "pointalg" => Ok(io::serialize_structure(&gen::gen_point_algebra(
            n,
            args.leq_per_var,
            args.neq_per_var,
            args.seed,
        ))),
        "setcon" => {
            let total = (n as f64 * args.cons_per_var).round() as usize;
            let subs = total * 3 / 5;
            let diss = total / 5;
            let neqs = total - subs - diss;
            Ok(io::serialize_set_constraints(&gen::gen_set_constraints(
                n, subs, diss, neqs, args.seed,
            )))
        }
        other => Err(Error::Invalid(format!(
            "unknown kind `{other}` (expected graph | 2cnf | pointalg | setcon)"
        ))),
    }
}

struct BenchCell {
    size: usize,
    workers: usize,
    millis: f64,
}

fn bench_instance(template: &str, size: usize, seed: u64) -> Result<Structure, Error> {
    match template {
        "pointalg" => Ok(gen::gen_point_algebra(size, 2.0, 0.5, seed)),
        "k2" => Ok(gen::gen_graph(size, (2.0 / size as f64).min(1.0), seed)),
        "twosat" => {
            let clauses = gen::gen_2cnf(size, 2 * size, seed);
            cnf2_to_instance(size, &clauses)
        }
        other => {
            Err(Error::Invalid(format!("bench supports pointalg | k2 | twosat, got `{other}`")))
        }
    }
}

fn run_bench(args: &BenchArgs) -> Result<String, Error> {
    let limits = args.limits.limits();
    let sizes: Vec<usize> = args
        .sizes
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Invalid(format!("bad size `{t}`"))))
        .collect::<Result<_, _>>()?;
    let workers: Vec<usize> = args
        .workers
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Invalid(format!("bad workers `{t}`"))))
        .collect::<Result<_, _>>()?;
    let pa = PointAlgebra::new();
    let k2 = k2_template();
    let twosat = two_sat_template();
    let template: Template<'_> = match args.template.as_str() {
        "pointalg" => Template::Descriptor(&pa),
        "k2" => Template::Finite(&k2),
        "twosat" => Template::Finite(&twosat),
        other => return Err(Error::Invalid(format!("unknown bench template `{other}`"))),
    };
    let method = match args.method {
        Method::Pac => "pac",
        Method::Ac => "ac",
        Method::Brute => return Err(Error::Invalid("bench supports pac and ac methods".into())),
    };

    let mut out = String::new();
    let mut cells: Vec<BenchCell> = Vec::new();
    for &size in &sizes {
        let instance = bench_instance(&args.template, size, args.seed ^ size as u64)?;
        for &w in &workers {
            let mut runs: Vec<f64> = Vec::with_capacity(args.repeats.max(1));
            for _ in 0..args.repeats.max(1) {
                let start = Instant::now();
                match args.method {
                    Method::Pac => {
                        pac_decide(&instance, template, w, &PacOptions::default(), &limits)?;
                    }
                    Method::Ac => {
                        acc_holds(&instance, template)?;
                    }
                    Method::Brute => unreachable!("rejected above"),
                }
                runs.push(start.elapsed().as_secs_f64() * 1e3);
            }
            runs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
            let millis = runs[runs.len() / 2];
            let _ = writeln!(
                out,
                "bench template={} method={} size={} workers={} millis={:.3}",
                args.template, method, size, w, millis
            );
            cells.push(BenchCell { size, workers: w, millis });
        }
    }
    for &w in &workers {
        for pair in sizes.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let ta = cells.iter().find(|c| c.size == a && c.workers == w);
            let tb = cells.iter().find(|c| c.size == b && c.workers == w);
            if let (Some(ta), Some(tb)) = (ta, tb) {
                let _ = writeln!(
                    out,
                    "ratio template={} from={} to={} workers={} value={:.3}",
                    args.template,
                    a,
                    b,
                    w,
                    tb.millis / ta.millis.max(1e-9)
                );
            }
        }
    }
    for &size in &sizes {
        if let Some(base) = cells.iter().find(|c| c.size == size && c.workers == 1) {
            for &w in &workers {
                if w == 1 {
                    continue;
                }
                if let Some(cell) = cells.iter().find(|c| c.size == size && c.workers == w) {
                    let _ = writeln!(
                        out,
                        "speedup template={} size={} workers={} vs=1 value={:.3}",
                        args.template,
                        size,
                        w,
                        base.millis / cell.millis.max(1e-9)
                    );
                }
            }
        }
    }
    Ok(out)
}

fn run_characterize(args: &CharacterizeArgs) -> Result<String, Error> {
    let limits = args.limits.limits();
    let ResolvedTemplate::Finite(b) = resolve_template(&args.template)? else {
        return Err(Error::Invalid("characterization checks need a finite template".into()));
    };
    let report = characterize(
        &b,
        &args.template,
        args.nmax,
        InstanceBound::new(args.max_vars, args.max_tuples),
        &limits,
    )?;
    Ok(match args.format {
        Format::Text => report.render_text(),
        Format::Lines => format!("{}\n", report.render_line()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(u8, String), Error> = match &cli.command {
        Command::Solve(args) => run_solve(args).map(|o| {
            let body = match args.format {
                Format::Text => o.text,
                Format::Lines => o.lines,
            };
            (o.code, body)
        }),
        Command::Gen(args) => run_gen(args).and_then(|text| match &args.out {
            Some(path) => {
                std::fs::write(path, &text).map_err(|e| {
                    Error::Invalid(format!("cannot write `{}`: {e}", path.display()))
                })?;
                Ok((0, String::new()))
            }
            None => Ok((0, text)),
        }),
        Command::Bench(args) => run_bench(args).map(|t| (0, t)),
        Command::Characterize(args) => run_characterize(args).map(|t| (0, t)),
    };
    match result {
        Ok((code, body)) => {
            print!("{body}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
