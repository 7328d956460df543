//! Command-line front end: certified spectra, forbidden families, spectral
//! radius orders, equiangular-line constructions and bounds, and the
//! constants table. Every command prints versioned JSON.

mod lambda;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use specrad::algnum::{alpha, alpha_conjugate_audit, beta, lambda_star, AlgebraicReal};
use specrad::forbidden::{
    build_family_or_partial, lambda_json, minimize_family, oracle_check, ForbiddenError, SCHEMA_VERSION,
};
use specrad::graphkit::{parse_graph6, parse_graph6_lines, write_graph6, EnumBudget, Graph};
use specrad::lines::{
    clique_bound_check, lam_of_alpha_algebraic, lower_bound_construction, lower_bound_count, project_code,
    rank_bound_check, size_upper_bound, SphericalCode,
};
use specrad::order::{spectral_order, OrderValue};
use specrad::poly::IntPoly;
use specrad::scalar::Scalar;
use specrad::spectra::{
    char_poly, char_poly_bareiss, compare_radius, eigen_multiplicity, radius_algebraic, radius_bracket,
    RadiusComparison,
};
use specrad::{BigFloat, Rational};

use lambda::parse_algebraic;

#[derive(Parser)]
#[command(name = "specrad", version, about = "Spectral radius, forbidden subgraphs and equiangular lines")]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral radius, characteristic polynomial and comparison with lambda.
    Spectral(SpectralArgs),
    /// Forbidden-subgraph family for lambda, with an optional oracle check.
    Forbidden(ForbiddenArgs),
    /// Spectral radius order of lambda.
    Order(OrderArgs),
    /// Equiangular-line constructions, projections, bounds and audits.
    Lines {
        #[command(subcommand)]
        command: LinesCommand,
    },
    /// Table of beta_m, alpha_m and lambda* with conjugate audits.
    Constants(ConstantsArgs),
    /// Randomized consistency checks on small graphs.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct SpectralArgs {
    /// graph6 strings; read from --file or stdin when absent.
    graphs: Vec<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    /// Compare each spectral radius with this number.
    #[arg(long)]
    compare: Option<String>,
    /// Include the characteristic polynomial (coefficients, constant first).
    #[arg(long)]
    charpoly: bool,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest vertex count enumerated.
    #[arg(long, default_value_t = 8)]
    budget: usize,
    /// Cap on one-vertex extensions examined during enumeration.
    #[arg(long, default_value_t = 10_000_000)]
    max_extensions: u64,
}

impl BudgetArgs {
    fn budget(&self) -> EnumBudget {
        EnumBudget {
            max_vertices: self.budget,
            max_extensions: self.max_extensions,
        }
    }
}

#[derive(Args)]
struct ForbiddenArgs {
    #[arg(long)]
    lambda: String,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Verify the family against all connected graphs up to this order.
    #[arg(long)]
    check_up_to: Option<usize>,
    /// Report the family before removing members that contain others.
    #[arg(long)]
    raw: bool,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = 8)]
    max_order: usize,
    #[arg(long, default_value_t = 10_000_000)]
    max_extensions: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Precision {
    /// Exact rationals when the angle is rational, else high precision.
    Auto,
    Exact,
    F64,
    Big,
}

#[derive(Subcommand)]
enum LinesCommand {
    /// Lower-bound construction in R^n.
    Construct {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        /// Witness graph (graph6) with spectral radius lambda; searched for
        /// when absent.
        #[arg(long)]
        witness: Option<String>,
        #[arg(long, default_value_t = 7)]
        max_order: usize,
        #[arg(long, value_enum, default_value_t = Precision::Auto)]
        precision: Precision,
    },
    /// Reduction of a {±alpha}-code to an L(alpha, t)-code.
    Project {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        t: usize,
        #[arg(long = "in")]
        input: PathBuf,
        /// Ambient dimension for the rank check; defaults to the code's.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Precision::Auto)]
        precision: Precision,
    },
    /// Upper bounds on the number of lines and the lower-bound count.
    Bounds {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        max_order: usize,
    },
    /// Invariant checks on a stored code.
    Audit {
        #[arg(long)]
        alpha: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Precision::Auto)]
        precision: Precision,
    },
}

#[derive(Args)]
struct ConstantsArgs {
    /// Range such as `2..10`, `2-10` or a single value.
    #[arg(long, default_value = "2..10")]
    m: String,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Largest graph order sampled.
    #[arg(long, default_value_t = 8)]
    max_order: usize,
}

/// JSON output and whether every internal audit passed.
struct Outcome {
    value: Value,
    ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

type CmdResult = Result<Outcome, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectral(a) => cmd_spectral(a),
        Command::Forbidden(a) => cmd_forbidden(a),
        Command::Order(a) => cmd_order(a),
        Command::Lines { command } => cmd_lines(command),
        Command::Constants(a) => cmd_constants(a),
        Command::Selftest(a) => cmd_selftest(a),
    };
    let (value, code) = match result {
        Ok(o) => {
            let code = if o.ok { 0 } else { 1 };
            (o.value, code)
        }
        Err(msg) => {
            let kind = msg.split(':').next().filter(|k| k.chars().all(|c| c.is_ascii_uppercase() || c == '_'));
            let v = json!({
                "schema_version": SCHEMA_VERSION,
                "error": kind.unwrap_or("ERROR"),
                "message": msg,
            });
            (v, 2)
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("serializable") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}

fn coeffs_json(p: &IntPoly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| c.to_i64().map(Value::from).unwrap_or_else(|| Value::from(c.to_string())))
            .collect(),
    )
}

fn read_graphs(a: &SpectralArgs) -> Result<Vec<Graph>, String> {
    if !a.graphs.is_empty() {
        return a.graphs.iter().map(|s| parse_graph6(s).map_err(|e| e.to_string())).collect();
    }
    let text = match &a.file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
            s
        }
    };
    parse_graph6_lines(&text).map_err(|e| e.to_string())
}

fn cmd_spectral(a: &SpectralArgs) -> CmdResult {
    let graphs = read_graphs(a)?;
    let lam = a.compare.as_deref().map(parse_algebraic).transpose()?;
    let mut results = Vec::new();
    for g in &graphs {
        let mut r = json!({
            "graph6": write_graph6(g),
            "order": g.order(),
            "edges": g.edge_count(),
        });
        let obj = r.as_object_mut().expect("object");
        if g.order() > 0 {
            let exact = radius_algebraic(g).map_err(|e| e.to_string())?;
            let b = radius_bracket(g).map_err(|e| e.to_string())?;
            obj.insert("lambda1".into(), json!(exact.to_f64()));
            obj.insert("lambda1_exact".into(), json!(exact.notation()));
            obj.insert("bracket".into(), json!([b.lo.to_string(), b.hi.to_string()]));
        }
        if a.charpoly {
            obj.insert("charpoly".into(), coeffs_json(&char_poly(g)));
        }
        if let Some(l) = &lam {
            obj.insert("compare".into(), json!(compare_radius(g, l).to_string()));
        }
        results.push(r);
    }
    Ok(Outcome::ok(json!({
        "schema_version": SCHEMA_VERSION,
        "compare_with": lam.as_ref().map(lambda_json),
        "results": results,
    })))
}

fn cmd_forbidden(a: &ForbiddenArgs) -> CmdResult {
    let lam = parse_algebraic(&a.lambda)?;
    let budget = a.budget.budget();
    let (fam, complete) = build_family_or_partial(&lam, &budget).map_err(|e| match e {
        ForbiddenError::UnsupportedLambda(m) => format!("UNSUPPORTED_LAMBDA: {m}"),
        other => other.to_string(),
    })?;
    let fam = if a.raw { fam } else { minimize_family(&fam) };
    let mut v = fam.to_json();
    let obj = v.as_object_mut().expect("object");
    obj.insert("complete".into(), json!(complete));
    obj.insert("minimized".into(), json!(!a.raw));
    let mut ok = true;
    if let Some(k) = a.check_up_to {
        let oracle_budget = EnumBudget {
            max_vertices: k,
            max_extensions: a.budget.max_extensions.max(100_000_000),
        };
        let report = oracle_check(&fam, k, &oracle_budget).map_err(|e| e.to_string())?;
        ok = report.passed;
        obj.insert("oracle".into(), serde_json::to_value(&report).expect("serializable"));
    }
    Ok(Outcome { value: v, ok })
}

fn cmd_order(a: &OrderArgs) -> CmdResult {
    let lam = parse_algebraic(&a.lambda)?;
    let budget = EnumBudget {
        max_vertices: a.max_order,
        max_extensions: a.max_extensions,
    };
    let r = spectral_order(&lam, a.max_order, &budget).map_err(|e| e.to_string())?;
    Ok(Outcome::ok(r.to_json()))
}

fn resolve_precision(p: Precision, alpha: &AlgebraicReal) -> Precision {
    match p {
        Precision::Auto if alpha.is_rational() => Precision::Exact,
        Precision::Auto => Precision::Big,
        other => other,
    }
}

fn cmd_lines(c: &LinesCommand) -> CmdResult {
    match c {
        LinesCommand::Construct {
            alpha,
            n,
            witness,
            max_order,
            precision,
        } => {
            let alpha = parse_algebraic(alpha)?;
            match resolve_precision(*precision, &alpha) {
                Precision::Exact => construct::<Rational>(&alpha, *n, witness.as_deref(), *max_order),
                Precision::F64 => construct::<f64>(&alpha, *n, witness.as_deref(), *max_order),
                _ => construct::<BigFloat>(&alpha, *n, witness.as_deref(), *max_order),
            }
        }
        LinesCommand::Project {
            alpha,
            t,
            input,
            n,
            precision,
        } => {
            let alpha = parse_algebraic(alpha)?;
            let v = read_code_json(input)?;
            match code_precision(*precision, &alpha, &v) {
                Precision::Exact => project::<Rational>(&alpha, *t, &v, *n),
                Precision::F64 => project::<f64>(&alpha, *t, &v, *n),
                _ => project::<BigFloat>(&alpha, *t, &v, *n),
            }
        }
        LinesCommand::Bounds { alpha, n, max_order } => bounds(&parse_algebraic(alpha)?, *n, *max_order),
        LinesCommand::Audit {
            alpha,
            input,
            n,
            precision,
        } => {
            let alpha = parse_algebraic(alpha)?;
            let v = read_code_json(input)?;
            match code_precision(*precision, &alpha, &v) {
                Precision::Exact => audit::<Rational>(&alpha, &v, *n),
                Precision::F64 => audit::<f64>(&alpha, &v, *n),
                _ => audit::<BigFloat>(&alpha, &v, *n),
            }
        }
    }
}

/// Reads a code file; the output of `lines construct` is accepted as is.
fn read_code_json(path: &PathBuf) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    Ok(match v.get("code") {
        Some(inner) if inner.is_object() => inner.clone(),
        _ => v,
    })
}

fn code_precision(p: Precision, alpha: &AlgebraicReal, v: &Value) -> Precision {
    match p {
        Precision::Auto if v["exact"].as_bool() == Some(false) => Precision::Big,
        other => resolve_precision(other, alpha),
    }
}

fn find_witness(lam: &AlgebraicReal, max_order: usize) -> Result<(OrderValue, Option<Graph>), String> {
    let budget = EnumBudget {
        max_vertices: max_order,
        ..EnumBudget::default()
    };
    let r = spectral_order(lam, max_order, &budget).map_err(|e| e.to_string())?;
    Ok((r.value.clone(), r.witness))
}

fn order_json(v: &OrderValue) -> Value {
    match v {
        OrderValue::Finite(k) => json!({ "k": k }),
        OrderValue::InfiniteUpTo(b) => json!({ "infinite_up_to": b }),
        OrderValue::InfiniteAnalytic(r) => json!({ "infinite_analytic": r }),
    }
}

fn construct<T: Scalar>(alpha: &AlgebraicReal, n: usize, witness: Option<&str>, max_order: usize) -> CmdResult {
    let lam = lam_of_alpha_algebraic(alpha).map_err(|e| e.to_string())?;
    let (order, g) = match witness {
        Some(s) => {
            let g = parse_graph6(s).map_err(|e| e.to_string())?;
            (OrderValue::Finite(g.order()), Some(g))
        }
        None => find_witness(&lam, max_order)?,
    };
    let code = lower_bound_construction::<T>(alpha, n, g.as_ref()).map_err(|e| e.to_string())?;
    let audit = code.validate();
    let expected = lower_bound_count(n, g.as_ref().map(Graph::order)).map_err(|e| e.to_string())?;
    let (omega, clique_bound, clique_ok) = if code.len() <= 64 {
        let (o, b, ok) = clique_bound_check(&code).map_err(|e| e.to_string())?;
        (Some(o), Some(b), ok)
    } else {
        (None, None, true)
    };
    let ok = audit.valid && audit.rank <= n && clique_ok && code.len() == expected;
    Ok(Outcome {
        value: json!({
            "schema_version": SCHEMA_VERSION,
            "alpha": lambda_json(alpha),
            "lambda": lambda_json(&lam),
            "order": order_json(&order),
            "witness": g.as_ref().map(write_graph6),
            "n": n,
            "lines": code.len(),
            "expected": expected,
            "audit": audit,
            "clique_number": omega,
            "clique_bound": clique_bound,
            "code": code.to_json(),
        }),
        ok,
    })
}

fn project<T: Scalar>(alpha: &AlgebraicReal, t: usize, v: &Value, n: Option<usize>) -> CmdResult {
    let code = SphericalCode::<T>::from_json(v, Some(alpha.clone())).map_err(|e| e.to_string())?;
    let p = project_code(&code, t).map_err(|e| e.to_string())?;
    let n = n.unwrap_or(code.dim);
    let audit = p.code.validate();
    let rank = rank_bound_check(&p.code, n).map_err(|e| e.to_string())?;
    Ok(Outcome {
        value: json!({
            "schema_version": SCHEMA_VERSION,
            "alpha": lambda_json(alpha),
            "t": t,
            "L": p.code.l.iter().map(Scalar::to_text).collect::<Vec<_>>(),
            "input_size": code.len(),
            "output_size": p.code.len(),
            "independent_set": p.independent_set,
            "switched": p.switched,
            "kept": p.kept,
            "class_sizes": p.class_sizes,
            "discarded": p.discarded,
            "audit": audit,
            "rank_check": rank,
            "code": p.code.to_json(),
        }),
        ok: audit.valid && rank.passed,
    })
}

fn audit<T: Scalar>(alpha: &AlgebraicReal, v: &Value, n: Option<usize>) -> CmdResult {
    let code = SphericalCode::<T>::from_json(v, Some(alpha.clone())).map_err(|e| e.to_string())?;
    let audit = code.validate();
    let mut ok = audit.valid;
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "alpha": lambda_json(alpha),
        "size": code.len(),
        "audit": audit,
    });
    let obj = out.as_object_mut().expect("object");
    if code.t.is_some() {
        let r = rank_bound_check(&code, n.unwrap_or(code.dim)).map_err(|e| e.to_string())?;
        ok &= r.passed;
        obj.insert("rank_check".into(), serde_json::to_value(&r).expect("serializable"));
    } else if code.len() <= 64 {
        let (omega, bound, holds) = clique_bound_check(&code).map_err(|e| e.to_string())?;
        ok &= holds;
        obj.insert("clique".into(), json!({ "clique_number": omega, "bound": bound, "holds": holds }));
    }
    Ok(Outcome { value: out, ok })
}

fn bounds(alpha: &AlgebraicReal, n: usize, max_order: usize) -> CmdResult {
    let lam = lam_of_alpha_algebraic(alpha).map_err(|e| e.to_string())?;
    let (order, witness) = find_witness(&lam, max_order)?;
    let rows = size_upper_bound(alpha, n, Some(&order)).map_err(|e| e.to_string())?;
    let k = match order {
        OrderValue::Finite(k) => Some(k),
        _ => None,
    };
    let lower = lower_bound_count(n, k).map_err(|e| e.to_string())?;
    let best = rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let sandwich = lower as f64 <= best;
    Ok(Outcome {
        value: json!({
            "schema_version": SCHEMA_VERSION,
            "alpha": lambda_json(alpha),
            "lambda": lambda_json(&lam),
            "n": n,
            "order": order_json(&order),
            "witness": witness.as_ref().map(write_graph6),
            "lower_bound": lower,
            "upper_bounds": rows,
            "best_upper_bound": best,
            "sandwich_ok": sandwich,
        }),
        ok: sandwich,
    })
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("bad range {s}");
    let (a, b) = s
        .split_once("..")
        .or_else(|| s.split_once('-'))
        .unwrap_or((s, s));
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a < 2 || b < a {
        return Err(format!("range {s} must satisfy 2 <= lo <= hi"));
    }
    Ok((a, b))
}

fn cmd_constants(a: &ConstantsArgs) -> CmdResult {
    let (lo, hi) = parse_range(&a.m)?;
    let ls = lambda_star();
    let mut rows = Vec::new();
    let mut ok = true;
    let mut prev: Option<AlgebraicReal> = None;
    let mut increasing = true;
    let mut below = true;
    for m in lo..=hi {
        let b = beta(m).map_err(|e| e.to_string())?;
        let al = alpha(m).map_err(|e| e.to_string())?;
        let audit = alpha_conjugate_audit(m).map_err(|e| e.to_string())?;
        ok &= audit.passed;
        if let Some(p) = &prev {
            increasing &= p.cmp_exact(&al).is_lt();
        }
        below &= al.cmp_exact(&ls).is_lt();
        rows.push(json!({
            "m": m,
            "beta": b.to_f64(),
            "beta_exact": b.notation(),
            "alpha": al.to_f64(),
            "alpha_exact": al.notation(),
            "audit": {
                "verdict": if audit.passed { "not totally real" } else { "audit failed" },
                "found_pm_alpha": audit.found_pm_alpha,
                "offending": audit.offending,
                "max_rounding_distance": audit.max_rounding_distance,
                "matches_exact": audit.matches_exact,
                "passed": audit.passed,
            },
        }));
        prev = Some(al);
    }
    ok &= increasing && below;
    Ok(Outcome {
        value: json!({
            "schema_version": SCHEMA_VERSION,
            "rows": rows,
            "lambda_star": { "value": ls.to_f64(), "exact": ls.notation() },
            "alpha_increasing": increasing,
            "alpha_below_lambda_star": below,
        }),
        ok,
    })
}

fn random_graph(rng: &mut ChaCha8Rng, max_order: usize) -> Graph {
    let n = rng.gen_range(1..=max_order);
    let p: f64 = rng.gen_range(0.2..0.8);
    let mut g = Graph::empty(n).expect("small order");
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("valid edge");
            }
        }
    }
    g
}

fn cmd_selftest(a: &SelftestArgs) -> CmdResult {
    if a.max_order == 0 || a.max_order > 12 {
        return Err("max-order must be between 1 and 12".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut failures = Vec::new();
    let mut connected = 0;
    for case in 0..a.cases {
        let g = random_graph(&mut rng, a.max_order);
        let g6 = write_graph6(&g);
        if char_poly(&g) != char_poly_bareiss(&g) {
            failures.push(json!({ "case": case, "graph6": g6, "check": "charpoly routes" }));
            continue;
        }
        let r = radius_algebraic(&g).map_err(|e| e.to_string())?;
        if compare_radius(&g, &r) != RadiusComparison::Equal {
            failures.push(json!({ "case": case, "graph6": g6, "check": "radius comparison" }));
            continue;
        }
        let b = radius_bracket(&g).map_err(|e| e.to_string())?;
        if r.cmp_rational(&b.lo).is_lt() || r.cmp_rational(&b.hi).is_gt() {
            failures.push(json!({ "case": case, "graph6": g6, "check": "certified bracket" }));
            continue;
        }
        if g.is_connected() {
            connected += 1;
            if eigen_multiplicity(&g, &r) != 1 {
                failures.push(json!({ "case": case, "graph6": g6, "check": "Perron simplicity" }));
            }
        }
    }
    let ok = failures.is_empty();
    Ok(Outcome {
        value: json!({
            "schema_version": SCHEMA_VERSION,
            "seed": a.seed,
            "cases": a.cases,
            "connected": connected,
            "failures": failures,
            "passed": ok,
        }),
        ok,
    })
}
