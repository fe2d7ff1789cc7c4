use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symsub::chains::{
    max_chain, paper_witness_chain, repaired_witness_chain, Chain, SearchOptions, SearchOutcome, SymmetryMode,
    WitnessCase, WitnessFamily, DEFAULT_NODE_BUDGET,
};
use symsub::embeddings::{embed_symmetric, verify_embedding, EmbeddingTarget};
use symsub::norton::{norton_check, DEFAULT_PAIR_BUDGET};
use symsub::phi::{
    normalize_spec, oracle_options, phi_formula, phi_search, phi_table, realize, FormulaSource, PhiReport,
};
use symsub::{Error, GroupSpec, Sign};

const SCHEMA_VERSION: &str = "1";
const THREADS_ENV: &str = "SYMSUB_THREADS";

const SEARCH: &str = "search";
const SPORADIC_NOTE: &str =
    "Fi22, Fi23, Fi24: phi = 10, 12, 12 are stored constants; no desk-scale search reproduces them";

#[derive(Parser, Debug)]
#[command(name = "symsub", version, about = "Largest symmetric subgroups of 3-transposition groups")]
struct Cli {
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    #[arg(long, global = true)]
    tsv: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (also read from SYMSUB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock time in the output. Output is then no longer byte-stable.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// φ from the closed forms, the search, or both.
    Phi {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = Mode::Formula)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Source::Props)]
        source: Source,
    },
    /// Longest chain in the class, on the spec exactly as given.
    Search {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        witness: bool,
        #[arg(long, conflicts_with = "symmetry")]
        no_symmetry_reduction: bool,
        #[arg(long, value_parser = parse_symmetry, default_value = "first-vertex")]
        symmetry: SymmetryMode,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
    },
    /// Oracle against the closed forms for every classical spec up to a dimension.
    VerifyTable {
        #[arg(long)]
        max_dim: usize,
    },
    /// The written chain for a family and its validation.
    Witness {
        #[command(flatten)]
        group: GroupArgs,
        /// Use the corrected chain where the written one fails.
        #[arg(long)]
        repaired: bool,
    },
    /// Permutation-module representations of S_n.
    Embed {
        #[arg(long)]
        sn: usize,
        #[arg(long, value_parser = parse_target)]
        target: EmbeddingTarget,
        #[arg(long)]
        full_injectivity: bool,
    },
    /// Orders of products in the set of commuting pairs.
    Norton {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        budget: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_sign, default_value = "+", allow_hyphen_values = true)]
    eps: Sign,
    #[arg(long, value_parser = parse_sign, default_value = "+", allow_hyphen_values = true)]
    mu: Sign,
    #[arg(long, value_parser = parse_sign, default_value = "+", allow_hyphen_values = true)]
    pi: Sign,
}

impl GroupArgs {
    fn spec(&self) -> GroupSpec {
        let n = self.n;
        match self.family {
            Family::Sym => GroupSpec::Symmetric { n },
            Family::Sp => GroupSpec::Symplectic { n },
            Family::U => GroupSpec::Unitary { n },
            Family::O2 => GroupSpec::OrthogonalF2 { n, eps: self.eps },
            Family::Po3 => GroupSpec::OrthogonalF3 { n, mu: self.mu, pi: self.pi },
            Family::Fischer => GroupSpec::Fischer { n },
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    Sym,
    Sp,
    U,
    O2,
    Po3,
    Fischer,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Formula,
    Search,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Source {
    Props,
    Conclusion,
    Both,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_symmetry(s: &str) -> Result<SymmetryMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target(s: &str) -> Result<EmbeddingTarget, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Copy, Clone, PartialEq, Eq)]
enum Format {
    Human,
    Json,
    Tsv,
}

/// What a subcommand produced, before rendering.
struct Output {
    payload: Value,
    search_stats: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    human: Vec<String>,
    /// A verification inside the command failed.
    mismatch: bool,
}

impl Output {
    fn new(payload: Value, header: Vec<&'static str>) -> Self {
        Output { payload, search_stats: Value::Null, header, rows: Vec::new(), human: Vec::new(), mismatch: false }
    }
}

fn tagged(value: impl Into<Value>, source: &str) -> Value {
    json!({ "value": value.into(), "source": source })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CheckFailed { .. } | Error::Contract(_) | Error::NotInClass(_) => 1,
        Error::Config(_)
        | Error::OutOfRange(_)
        | Error::Domain(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidQuotient(_)
        | Error::Degenerate(_) => 2,
        Error::OrderCapExceeded { .. } | Error::IncompleteSearch { .. } | Error::Unsupported(_) => 3,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match exit_code(e) {
        1 => "mismatch",
        2 => "usage",
        _ => "budget-or-unsupported",
    }
}

fn chain_lines(chain: &[symsub::Vector], field: &str) -> Vec<String> {
    let mut out = vec![format!("  chain over {field}, preset basis:")];
    out.extend(chain.iter().enumerate().map(|(i, v)| format!("    {:>2}: {v}", i + 1)));
    out
}

fn stats_json(o: &SearchOutcome) -> Value {
    json!({
        "source": SEARCH,
        "nodes_explored": o.nodes_explored,
        "class_size": o.class_size,
        "skipped_by_symmetry": o.skipped_by_symmetry,
        "symmetry": o.symmetry,
        "reached_bound": o.reached_bound,
    })
}

fn chain_strings(c: &Chain) -> Vec<String> {
    c.vectors().iter().map(|v| v.to_string()).collect()
}

fn run_phi(group: &GroupArgs, mode: Mode, source: Source) -> Result<Output, Error> {
    let spec = group.spec();
    spec.validate()?;
    let normalized = normalize_spec(spec);
    let sources: Vec<FormulaSource> = match source {
        Source::Props => vec![FormulaSource::Propositions],
        Source::Conclusion => vec![FormulaSource::Conclusion],
        Source::Both => vec![FormulaSource::Propositions, FormulaSource::Conclusion],
    };
    let mut out = Output::new(Value::Null, vec!["spec", "normalized", "source", "value"]);
    let mut values = Vec::new();
    let mut payload = serde_json::Map::new();
    payload.insert("spec".into(), json!(spec.to_string()));
    payload.insert("normalized".into(), json!(normalized.to_string()));
    out.human.push(format!("{spec} (normalized {normalized})"));

    if mode != Mode::Search {
        let mut formula = Vec::new();
        for s in &sources {
            let v = phi_formula(spec, *s)?;
            formula.push((s.tag(), v));
        }
        payload.insert("phi_formula".into(), tagged(formula[0].1, formula[0].0));
        if let GroupSpec::Fischer { .. } = spec {
            payload.insert("note".into(), json!(SPORADIC_NOTE));
        }
        if formula.len() > 1 {
            payload.insert("phi_formula_conclusion".into(), tagged(formula[1].1, formula[1].0));
            payload.insert("sources_agree".into(), json!(formula[0].1 == formula[1].1));
        }
        values.extend(formula);
    }
    if mode != Mode::Formula {
        let (v, outcome) = phi_search(normalized, &oracle_options())?;
        payload.insert("phi_search".into(), tagged(v, SEARCH));
        if let Some(o) = &outcome {
            payload.insert("witness".into(), json!(chain_strings(&o.witness)));
            out.search_stats = stats_json(o);
        }
        values.push((SEARCH, v));
        if let (Some(o), Ok((space, _))) = (&outcome, realize(normalized)) {
            out.human.extend(chain_lines(&o.witness.vectors(), space.field().name()));
        }
    }
    for (tag, v) in &values {
        out.rows.push(vec![spec.to_string(), normalized.to_string(), tag.to_string(), v.to_string()]);
    }
    let lines: Vec<String> = values.iter().map(|(tag, v)| format!("  φ = {v}  [{tag}]")).collect();
    out.human.splice(1..1, lines);
    payload.insert("values".into(), values.iter().map(|(t, v)| tagged(*v, t)).collect());
    out.payload = Value::Object(payload);
    Ok(out)
}

fn run_search(
    group: &GroupArgs,
    witness: bool,
    no_reduction: bool,
    symmetry: SymmetryMode,
    node_budget: u64,
) -> Result<Output, Error> {
    let spec = group.spec();
    let (space, class) = realize(spec)?;
    let mut opts = SearchOptions::with_symmetry(if no_reduction { SymmetryMode::None } else { symmetry });
    opts.node_budget = node_budget;
    let o = max_chain(&space, class, &opts)?;
    let mut payload = json!({
        "spec": spec.to_string(),
        "field": space.field().name(),
        "max_chain_length": tagged(o.max_length, SEARCH),
        "phi": tagged(o.max_length + 1, SEARCH),
    });
    if witness {
        payload["witness"] = json!(chain_strings(&o.witness));
    }
    let mut out = Output::new(payload, vec!["spec", "max_chain_length", "phi", "nodes_explored", "source"]);
    out.rows.push(vec![
        spec.to_string(),
        o.max_length.to_string(),
        (o.max_length + 1).to_string(),
        o.nodes_explored.to_string(),
        SEARCH.into(),
    ]);
    out.human.push(format!("{spec}: longest chain {}, φ = {}  [{SEARCH}]", o.max_length, o.max_length + 1));
    out.human.push(format!("  nodes explored {}, symmetry {:?}", o.nodes_explored, o.symmetry));
    if witness {
        out.human.extend(chain_lines(&o.witness.vectors(), space.field().name()));
    }
    out.search_stats = stats_json(&o);
    Ok(out)
}

/// `agree`: all three values equal. `conflict-resolved`: the formulas differ
/// and the search sides with one of them. Anything else is a mismatch.
fn table_status(r: &PhiReport) -> &'static str {
    let s = r.phi_search;
    if r.sources_agree() {
        if s == Some(r.phi_proposition) {
            "agree"
        } else {
            "mismatch"
        }
    } else if r.search_matches_propositions() == Some(true) || r.search_matches_conclusion() == Some(true) {
        "conflict-resolved"
    } else {
        "mismatch"
    }
}

fn run_verify_table(max_dim: usize) -> Result<Output, Error> {
    if max_dim == 0 {
        return Err(Error::OutOfRange("--max-dim must be at least 1".into()));
    }
    let table = phi_table(max_dim, &oracle_options())?;
    let mut out = Output::new(
        Value::Null,
        vec!["spec", "formula-props", "formula-conclusion", "search", "nodes_explored", "status"],
    );
    let mut rows = Vec::new();
    let mut nodes = 0u64;
    let mut mismatches = 0usize;
    for r in &table {
        let status = table_status(r);
        if status == "mismatch" {
            mismatches += 1;
        }
        let search = r.phi_search.unwrap_or_default();
        nodes += r.nodes_explored.unwrap_or_default();
        rows.push(json!({
            "spec": r.spec.to_string(),
            "values": [
                tagged(r.phi_proposition, FormulaSource::Propositions.tag()),
                tagged(r.phi_conclusion, FormulaSource::Conclusion.tag()),
                tagged(search, SEARCH),
            ],
            "status": status,
        }));
        out.rows.push(vec![
            r.spec.to_string(),
            r.phi_proposition.to_string(),
            r.phi_conclusion.to_string(),
            search.to_string(),
            r.nodes_explored.unwrap_or_default().to_string(),
            status.into(),
        ]);
        out.human.push(format!(
            "{:<14} props {:>2}  conclusion {:>2}  search {:>2}  {status}",
            r.spec.to_string(),
            r.phi_proposition,
            r.phi_conclusion,
            search
        ));
    }
    out.human.push(format!("{} specs, {mismatches} mismatches", table.len()));
    out.human.push(SPORADIC_NOTE.into());
    out.payload = json!({ "max_dim": max_dim, "rows": rows, "mismatches": mismatches, "sporadic_note": SPORADIC_NOTE });
    out.search_stats = json!({ "source": SEARCH, "nodes_explored": nodes, "symmetry": SymmetryMode::Orbit });
    out.mismatch = mismatches > 0;
    Ok(out)
}

fn witness_family(group: &GroupArgs) -> Result<WitnessFamily, Error> {
    match group.family {
        Family::Sp => Ok(WitnessFamily::Sp),
        Family::U => Ok(WitnessFamily::U),
        Family::Po3 if group.pi == Sign::Plus => {
            Ok(if group.mu == Sign::Plus { WitnessFamily::Po3Plus } else { WitnessFamily::Po3Minus })
        }
        Family::O2 if group.eps == Sign::Plus => Ok(WitnessFamily::O2Plus),
        _ => Err(Error::Unsupported(format!("no written chain for {}", group.spec()))),
    }
}

fn run_witness(group: &GroupArgs, repaired: bool) -> Result<Output, Error> {
    let family = witness_family(group)?;
    let case: WitnessCase =
        if repaired { repaired_witness_chain(family, group.n)? } else { paper_witness_chain(family, group.n)? };
    let v = case.validate()?;
    let field = case.space.field().name();
    let vectors: Vec<String> = case.vectors.iter().map(|x| x.to_string()).collect();
    let violations: Vec<String> = v.check.violation.iter().map(|x| x.to_string()).collect();
    let payload = json!({
        "spec": group.spec().to_string(),
        "case": case.case,
        "repaired": case.repaired,
        "field": field,
        "vectors": vectors,
        "claimed_length": tagged(case.claimed_length, FormulaSource::Propositions.tag()),
        "chain_length": tagged(v.check.length, SEARCH),
        "violations": violations,
        "passes": v.passes(),
    });
    let mut out = Output::new(payload, vec!["spec", "index", "vector", "field"]);
    for (i, s) in vectors.iter().enumerate() {
        out.rows.push(vec![group.spec().to_string(), (i + 1).to_string(), s.clone(), field.into()]);
    }
    out.human.push(format!(
        "{} ({}){}: {}",
        group.spec(),
        case.case,
        if case.repaired { ", repaired" } else { "" },
        if v.passes() { "valid chain" } else { "NOT a valid chain" }
    ));
    out.human.extend(chain_lines(&case.vectors, field));
    out.human.push(format!(
        "  claimed length {} [formula-props], checked length {} [search]",
        case.claimed_length, v.check.length
    ));
    out.human.extend(violations.iter().map(|s| format!("  violation: {s}")));
    out.mismatch = !v.passes();
    Ok(out)
}

fn run_embed(sn: usize, target: EmbeddingTarget, full: bool) -> Result<Output, Error> {
    let reports = embed_symmetric(sn, target)?;
    let mut out = Output::new(Value::Null, vec!["construction", "variant", "target", "clause", "passed"]);
    let mut items = Vec::new();
    for r in &reports {
        let checks = verify_embedding(r, full)?;
        let field = r.space.field().name();
        out.human.push(format!(
            "S({sn}) -> {} via {target} [{}]: {}",
            r.target,
            r.variant,
            if checks.passed() { "ok" } else { "FAILED" }
        ));
        for c in &checks.clauses {
            out.rows.push(vec![
                target.to_string(),
                r.variant.clone(),
                r.target.to_string(),
                c.clause.into(),
                c.passed.to_string(),
            ]);
            out.human.push(format!("  {:<13} {}  {}", c.clause, if c.passed { "pass" } else { "FAIL" }, c.detail));
        }
        out.human.push(format!("  images of the transpositions over {field}:"));
        out.human.extend(r.class_vectors.iter().enumerate().map(|(i, v)| format!("    ({} {}): {v}", i + 1, i + 2)));
        out.mismatch |= !checks.passed();
        let vectors: Vec<String> = r.class_vectors.iter().map(|v| v.to_string()).collect();
        items.push(json!({
            "variant": r.variant,
            "target": r.target.to_string(),
            "field": field,
            "class_vectors": vectors,
            "checks": checks,
            "passed": checks.passed(),
        }));
    }
    out.payload =
        json!({ "sn": sn, "construction": target.to_string(), "full_injectivity": full, "embeddings": items });
    Ok(out)
}

fn run_norton(group: &GroupArgs, budget: u64, seed: u64) -> Result<Output, Error> {
    let r = norton_check(group.spec(), budget, seed)?;
    let histogram: Vec<Value> = r.histogram.iter().map(|(o, c)| json!({ "order": o, "count": c })).collect();
    let payload = json!({
        "spec": r.spec.to_string(),
        "class_size": tagged(r.class_size, SEARCH),
        "s_size": tagged(r.s_size, SEARCH),
        "pairs_tested": tagged(r.pairs_tested, SEARCH),
        "exhaustive": r.exhaustive,
        "max_order_seen": tagged(r.max_order_seen, SEARCH),
        "histogram": histogram,
        "violation_count": tagged(r.violation_count, SEARCH),
        "violations": r.violations,
        "holds": r.holds(),
    });
    let mut out = Output::new(payload, vec!["spec", "order", "count"]);
    for (o, c) in &r.histogram {
        out.rows.push(vec![r.spec.to_string(), o.to_string(), c.to_string()]);
    }
    out.human.push(format!(
        "{}: |D| = {}, |S| = {}, {} pairs{}",
        r.spec,
        r.class_size,
        r.s_size,
        r.pairs_tested,
        if r.exhaustive { " (all)" } else { " (sampled)" }
    ));
    out.human.extend(r.histogram.iter().map(|(o, c)| format!("  order {o:>2}: {c}")));
    out.human.push(format!("  largest order {}, {} products of order > 6", r.max_order_seen, r.violation_count));
    out.mismatch = !r.holds();
    Ok(out)
}

fn command_echo(cli: &Cli) -> Value {
    let group = |g: &GroupArgs| {
        json!({
            "family": format!("{:?}", g.family).to_lowercase(),
            "n": g.n,
            "eps": g.eps.symbol(),
            "mu": g.mu.symbol(),
            "pi": g.pi.symbol(),
        })
    };
    let (name, mut args) = match &cli.command {
        Command::Phi { group: g, mode, source } => (
            "phi",
            json!({ "group": group(g), "mode": format!("{mode:?}").to_lowercase(), "source": format!("{source:?}").to_lowercase() }),
        ),
        Command::Search { group: g, witness, no_symmetry_reduction, symmetry, node_budget } => (
            "search",
            json!({
                "group": group(g),
                "witness": witness,
                "no_symmetry_reduction": no_symmetry_reduction,
                "symmetry": symmetry,
                "node_budget": node_budget,
            }),
        ),
        Command::VerifyTable { max_dim } => ("verify-table", json!({ "max_dim": max_dim })),
        Command::Witness { group: g, repaired } => ("witness", json!({ "group": group(g), "repaired": repaired })),
        Command::Embed { sn, target, full_injectivity } => {
            ("embed", json!({ "sn": sn, "target": target.to_string(), "full_injectivity": full_injectivity }))
        }
        Command::Norton { group: g, budget } => ("norton", json!({ "group": group(g), "budget": budget })),
    };
    args["seed"] = json!(cli.seed);
    json!({ "name": name, "args": args })
}

fn configure_threads(cli: &Cli) -> Result<(), Error> {
    let from_env = match std::env::var(THREADS_ENV) {
        Ok(s) => Some(s.parse::<usize>().map_err(|_| Error::Config(format!("{THREADS_ENV} must be a number")))?),
        Err(_) => None,
    };
    if let Some(k) = cli.threads.or(from_env) {
        if k == 0 {
            return Err(Error::Config("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn render_tsv(out: &Output) -> String {
    let mut s = out.header.join("\t");
    s.push('\n');
    for r in &out.rows {
        s.push_str(&r.join("\t"));
        s.push('\n');
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json {
        Format::Json
    } else if cli.tsv {
        Format::Tsv
    } else {
        Format::Human
    };
    let start = Instant::now();
    let result = configure_threads(&cli).and_then(|_| match &cli.command {
        Command::Phi { group, mode, source } => {
            if *mode != Mode::Formula && matches!(group.family, Family::Fischer) {
                return Err(Error::Unsupported(format!(
                    "{}: search is not available for sporadic groups",
                    group.spec()
                )));
            }
            run_phi(group, *mode, *source)
        }
        Command::Search { group, witness, no_symmetry_reduction, symmetry, node_budget } => {
            run_search(group, *witness, *no_symmetry_reduction, *symmetry, *node_budget)
        }
        Command::VerifyTable { max_dim } => run_verify_table(*max_dim),
        Command::Witness { group, repaired } => run_witness(group, *repaired),
        Command::Embed { sn, target, full_injectivity } => run_embed(*sn, *target, *full_injectivity),
        Command::Norton { group, budget } => run_norton(group, *budget, cli.seed),
    });
    let elapsed = start.elapsed().as_millis() as u64;

    let mut envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command_echo(&cli),
        "payload": Value::Null,
        "search_stats": Value::Null,
        "timing": Value::Null,
    });
    if cli.timing {
        envelope["timing"] = json!({ "elapsed_ms": elapsed });
    }
    let code = match result {
        Ok(out) => {
            envelope["payload"] = out.payload.clone();
            envelope["search_stats"] = out.search_stats.clone();
            envelope["verified"] = json!(!out.mismatch);
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&envelope).expect("json"))
                }
                Format::Tsv => print!("{}", render_tsv(&out)),
                Format::Human => {
                    for l in &out.human {
                        println!("{l}");
                    }
                    if cli.timing {
                        println!("time: {elapsed} ms");
                    }
                }
            }
            if out.mismatch {
                1
            } else {
                0
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            if format == Format::Json {
                envelope["error"] = json!({ "kind": error_kind(&e), "message": e.to_string(), "exit_code": code });
                println!("{}", serde_json::to_string_pretty(&envelope).expect("json"));
            }
            code
        }
    };
    ExitCode::from(code)
}
