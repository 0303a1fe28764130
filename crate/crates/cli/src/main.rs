use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use linkgrass::admissible::Strata;
use linkgrass::affine_weyl::DEFAULT_LEN_CAP;
use linkgrass::independence::{validate_structure, weakly_independent};
use linkgrass::lattice::{is_convex, maximal_simplices, Configuration};
use linkgrass::multidegree::{is_concentrated, kn_instance, solve_twist, twist_at, vbar_set, DualGraph, Multidegree};
use linkgrass::quiver::{build_quiver, decompose, enumerate_subreps, rank_vector, RankVector};
use linkgrass::verify::{run_suite, Params, SuiteReport, SUITES};
use linkgrass::Error;

#[derive(Parser, Debug)]
#[command(name = "linkgrass", version, about = "Lattice configurations, admissible strata and quiver Grassmannians")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Subspace dimension.
    #[arg(long, global = true)]
    r: Option<usize>,
    /// Field size (2, 3, 5 or 7).
    #[arg(long, global = true, default_value_t = 2)]
    p: u8,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Enumeration budget (search nodes).
    #[arg(long, global = true, default_value_t = 20_000_000)]
    budget: u64,
    /// Length cap for the Weyl tables [default: 8 for verify, 24 otherwise].
    #[arg(long = "len-cap", global = true)]
    len_cap: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Convexity, maximal simplices, quiver and independence of a configuration.
    Analyze { config: PathBuf },
    /// The quiver of a configuration.
    Quiver { config: PathBuf },
    /// Admissible collections with rank vectors, dimensions and the Hasse diagram.
    Admissible { config: PathBuf },
    /// Enumerated quiver Grassmannian strata, cross-checked against the admissible side.
    Strata { config: PathBuf },
    /// Run one verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Twists, concentration and the set V for a dual graph.
    Multidegree {
        #[command(subcommand)]
        input: MultidegreeInput,
    },
}

#[derive(Subcommand, Debug)]
enum MultidegreeInput {
    /// The complete graph on n vertices.
    Kn { n: usize },
    /// A JSON file with `n`, `edges`, `w0` and optionally `ws`.
    Graph { path: PathBuf },
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    json: Value,
    text: String,
    dot: Option<String>,
    warnings: Vec<String>,
    failed: bool,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Output { json, text, dot: None, warnings: Vec::new(), failed: false }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let body = match cli.format {
                Format::Json => {
                    let wrapped = json!({ "command": command_name(&cli.cmd), "seed": cli.seed, "warnings": out.warnings, "result": out.json });
                    serde_json::to_string_pretty(&wrapped).expect("serializable") + "\n"
                }
                Format::Text => format!("seed: {}\n{}", cli.seed, out.text),
                Format::Dot => match out.dot {
                    Some(d) => d,
                    None => {
                        eprintln!("error: no DOT output for {}", command_name(&cli.cmd));
                        return ExitCode::from(2);
                    }
                },
            };
            print!("{body}");
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Analyze { .. } => "analyze",
        Cmd::Quiver { .. } => "quiver",
        Cmd::Admissible { .. } => "admissible",
        Cmd::Strata { .. } => "strata",
        Cmd::Verify { .. } => "verify",
        Cmd::Multidegree { .. } => "multidegree",
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Analyze { config } => analyze(&read_json(config)?),
        Cmd::Quiver { config } => quiver(&read_json(config)?),
        Cmd::Admissible { config } => admissible(&read_json(config)?, need_r(cli)?, cli.len_cap.unwrap_or(DEFAULT_LEN_CAP)),
        Cmd::Strata { config } => strata(&read_json(config)?, need_r(cli)?, cli),
        Cmd::Verify { suite, d, n, trials } => {
            let params = Params {
                seed: cli.seed,
                trials: *trials,
                d: *d,
                n: *n,
                len_cap: cli.len_cap.unwrap_or(Params::default().len_cap),
                budget: cli.budget,
            };
            verify(suite, &params)
        }
        Cmd::Multidegree { input: MultidegreeInput::Kn { n } } => kn(*n),
        Cmd::Multidegree { input: MultidegreeInput::Graph { path } } => graph(&read_json(path)?),
    }
}

fn need_r(cli: &Cli) -> Result<usize, Failure> {
    cli.r.ok_or_else(|| Failure::Usage("--r is required".into()))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn coords(g: &Configuration, i: usize) -> String {
    g.vertices[i].to_string()
}

fn analyze(g: &Configuration) -> Result<Output, Failure> {
    let conv = is_convex(g);
    let simplices = maximal_simplices(g);
    let mut text = format!("d = {}, {} vertices\n", g.d, g.len());
    let mut warnings = Vec::new();
    let mut json = json!({
        "d": g.d,
        "vertices": g.vertices,
        "convex": conv.convex,
        "missing": conv.missing,
        "maximal_simplices": simplices,
    });
    if !conv.convex {
        let missing: Vec<String> = conv.missing.iter().map(|c| c.to_string()).collect();
        warnings.push(format!("not convex; missing {}", missing.join(" ")));
        text.push_str(&format!("not convex, missing: {}\n", missing.join(" ")));
        let mut out = Output::new(json, text);
        out.warnings = warnings;
        return Ok(out);
    }
    let q = build_quiver(g)?;
    let cert = weakly_independent(&q);
    let structure = validate_structure(&q);
    let cycles: Vec<&Vec<usize>> = q.simplices.iter().filter(|s| s.len() > 1).collect();
    let shape = match (simplices.len(), q.arrows.is_empty()) {
        (_, true) => "no arrows",
        (1, false) => "cycle quiver",
        _ => "glued cycles",
    };
    json["quiver"] = serde_json::to_value(&q).expect("serializable");
    json["cycles"] = json!(cycles);
    json["independence"] = serde_json::to_value(&cert).expect("serializable");
    json["structure"] = serde_json::to_value(&structure).expect("serializable");
    json["summary"] = json!(format!(
        "convex, {} {}, {}, {} cycle{}, {}",
        simplices.len(),
        if simplices.len() == 1 { "simplex" } else { "simplices" },
        shape,
        cycles.len(),
        if cycles.len() == 1 { "" } else { "s" },
        if cert.independent { "weakly independent" } else { "not weakly independent" }
    ));
    text.push_str(json["summary"].as_str().unwrap());
    text.push('\n');
    for (j, s) in simplices.iter().enumerate() {
        let vs: Vec<String> = s.iter().map(|&i| coords(g, i)).collect();
        let _ = writeln!(text, "simplex {j}: {}", vs.join(" "));
    }
    if let Some(v) = cert.first_failure() {
        warnings.push(format!("independence fails at vertex {}", coords(g, v)));
    }
    for issue in &structure.issues {
        warnings.push(issue.clone());
    }
    let mut out = Output::new(json, text);
    out.dot = Some(q.to_dot());
    out.warnings = warnings;
    Ok(out)
}

fn quiver(g: &Configuration) -> Result<Output, Failure> {
    let q = build_quiver(g)?;
    let arrows: Vec<Value> = q
        .arrows
        .iter()
        .map(|&(u, v)| {
            let t = q.t(u, v);
            json!({ "from": u, "to": v, "n": t.n, "support": t.support.iter().collect::<Vec<_>>() })
        })
        .collect();
    let mut text = String::new();
    for (i, c) in q.config.vertices.iter().enumerate() {
        let _ = writeln!(text, "v{i} = {c}");
    }
    for a in &arrows {
        let _ = writeln!(text, "v{} -> v{}  n={} support={}", a["from"], a["to"], a["n"], a["support"]);
    }
    let json = json!({ "vertices": q.config.vertices, "arrows": arrows, "simplices": q.simplices });
    let mut out = Output::new(json, text);
    out.dot = Some(q.to_dot());
    Ok(out)
}

fn admissible(g: &Configuration, r: usize, len_cap: u32) -> Result<Output, Failure> {
    let st = Strata::new(g, r, len_cap)?;
    let rep = st.report()?;
    let mut text = format!("r = {r}, {} strata, {} maximal\n", rep.strata.len(), rep.strata.iter().filter(|s| s.top).count());
    for s in &rep.strata {
        let faces: Vec<String> = s
            .collection
            .faces
            .iter()
            .map(|f| f.vectors.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<String>()).collect::<Vec<_>>().join(","))
            .collect();
        let dim = s.dimension.map_or("-".to_string(), |d| d.to_string());
        let _ = writeln!(text, "{:>3}  dim {dim:>2}  {}{}", s.index, faces.join(" | "), if s.top { "  (top)" } else { "" });
    }
    if !rep.order_discrepancies.is_empty() {
        let _ = writeln!(text, "order discrepancies: {:?}", rep.order_discrepancies);
    }
    let json = json!({
        "r": r,
        "strata_count": rep.strata.len(),
        "maximal": rep.strata.iter().filter(|s| s.top).map(|s| s.index).collect::<Vec<_>>(),
        "report": rep,
    });
    let mut out = Output::new(json, text);
    out.dot = Some(rep.hasse_dot());
    Ok(out)
}

#[derive(Serialize)]
struct MultiplicityEntry {
    generator: usize,
    support: Vec<usize>,
    multiplicity: u32,
}

#[derive(Serialize)]
struct QuiverStratum {
    rank: RankVector,
    points: usize,
    admissible: Option<usize>,
    dimension: Option<u32>,
    multiplicities: Vec<MultiplicityEntry>,
}

fn strata(g: &Configuration, r: usize, cli: &Cli) -> Result<Output, Failure> {
    let q = build_quiver(g)?;
    let st = Strata::from_quiver(q.clone(), r, cli.len_cap.unwrap_or(DEFAULT_LEN_CAP))?;
    let reps = enumerate_subreps(&q, &vec![r; q.n()], cli.p, cli.budget)?;
    let mut classes: BTreeMap<RankVector, (usize, usize)> = BTreeMap::new();
    for (i, m) in reps.iter().enumerate() {
        classes.entry(rank_vector(m, &q)).or_insert((0, i)).0 += 1;
    }
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for (phi, &(points, first)) in &classes {
        let label = st.locate(phi);
        let dimension = match label {
            Some(i) => st.dimension(&st.collections[i])?,
            None => None,
        };
        match label {
            Some(i) if st.rank_vector(&st.collections[i])? == *phi => {}
            _ => mismatches.push(json!({ "rank": phi, "admissible": label })),
        }
        let multiplicities = decompose(&reps[first], &q)?
            .multiplicities()
            .into_iter()
            .map(|(t, m)| MultiplicityEntry { generator: t.generator, support: t.support, multiplicity: m })
            .collect();
        rows.push(QuiverStratum { rank: phi.clone(), points, admissible: label, dimension, multiplicities });
    }
    let hit: BTreeSet<usize> = rows.iter().filter_map(|s| s.admissible).collect();
    let unrealized: Vec<usize> = (0..st.collections.len()).filter(|i| !hit.contains(i)).collect();
    let mut text = format!(
        "r = {r}, p = {}, {} points, {} strata, {} admissible collections ({} unrealized)\n",
        cli.p,
        reps.len(),
        rows.len(),
        st.collections.len(),
        unrealized.len()
    );
    for s in &rows {
        let label = s.admissible.map_or("?".to_string(), |i| i.to_string());
        let dim = s.dimension.map_or("-".to_string(), |d| d.to_string());
        let _ = writeln!(text, "adm {label:>3}  dim {dim:>2}  points {:>6}  rank {:?}", s.points, s.rank.entries());
    }
    let cross_check = mismatches.is_empty();
    let _ = writeln!(text, "cross-check: {}", if cross_check { "ok" } else { "MISMATCH" });
    let dot = rank_hasse_dot(&rows);
    let json = json!({
        "r": r,
        "p": cli.p,
        "points": reps.len(),
        "strata": rows,
        "admissible_collections": st.collections.len(),
        "unrealized_collections": unrealized,
        "cross_check": cross_check,
        "mismatches": mismatches,
    });
    let mut out = Output::new(json, text);
    out.dot = Some(dot);
    Ok(out)
}

fn rank_hasse_dot(rows: &[QuiverStratum]) -> String {
    let mut out = String::from("digraph strata {\n");
    for (i, s) in rows.iter().enumerate() {
        let label = s.admissible.map_or("?".to_string(), |a| a.to_string());
        let _ = writeln!(out, "  s{i} [label=\"{label}\"];");
    }
    for (a, x) in rows.iter().enumerate() {
        for (b, y) in rows.iter().enumerate() {
            let covered = x.rank.below(&y.rank) && !rows.iter().any(|z| x.rank.below(&z.rank) && z.rank.below(&y.rank));
            if covered {
                let _ = writeln!(out, "  s{a} -> s{b};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn verify(suite: &str, params: &Params) -> Result<Output, Failure> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Failure::Usage(format!("unknown suite {s:?}; expected all or one of {}", SUITES.join(", ")))),
    };
    let results: Vec<Result<SuiteReport, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|&n| scope.spawn(move || run_suite(n, params))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread")).collect()
    });
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>().map_err(|e| Failure::Verify(e.to_string()))?;
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{}: {} ({} checks)", r.suite, if r.passed { "PASS" } else { "FAIL" }, r.checks);
        for f in &r.failures {
            let _ = writeln!(text, "  {f}");
        }
    }
    let failed = reports.iter().any(|r| !r.passed);
    let mut out = Output::new(json!({ "params": params, "suites": reports, "passed": !failed }), text);
    out.failed = failed;
    Ok(out)
}

fn fmt_deg(w: &[i64]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn kn(n: usize) -> Result<Output, Failure> {
    let rep = kn_instance(n)?;
    let mut text = format!("K_{n}: w0 = ({})\n", fmt_deg(&rep.w0));
    for (j, w) in rep.ws.iter().enumerate() {
        let _ = writeln!(text, "w{j} = ({})  twist = ({})", fmt_deg(w), fmt_deg(&rep.twist_vectors[j]));
    }
    let _ = writeln!(
        text,
        "formulas {}, concentrated {}, V matches {}, nested {}",
        rep.formulas_hold, rep.concentrated, rep.vbar_matches, rep.nested
    );
    let failed = !rep.ok();
    let mut out = Output::new(serde_json::to_value(&rep).expect("serializable"), text);
    out.failed = failed;
    Ok(out)
}

#[derive(Deserialize)]
struct GraphInput {
    #[serde(flatten)]
    graph: DualGraph,
    w0: Multidegree,
    #[serde(default)]
    ws: Option<Vec<Multidegree>>,
}

fn graph(input: &GraphInput) -> Result<Output, Failure> {
    let g = &input.graph;
    let w0 = &input.w0;
    if w0.len() != g.n {
        return Err(Failure::Usage(format!("w0 has {} entries for {} vertices", w0.len(), g.n)));
    }
    let mut vertices = Vec::new();
    let mut text = format!("w0 = ({})\n", fmt_deg(w0));
    for v in 0..g.n {
        let tw = twist_at(g, w0, v);
        let conc = is_concentrated(g, w0, v)?;
        let _ = writeln!(text, "v{v}: twist ({})  concentrated {}", fmt_deg(&tw), conc.is_some());
        vertices.push(json!({ "vertex": v, "twist": tw, "concentrated": conc.is_some(), "ordering": conc }));
    }
    let mut json = json!({ "graph": g, "w0": w0, "vertices": vertices });
    if let Some(ws) = &input.ws {
        let vbar = vbar_set(g, w0, ws)?;
        let twists = ws.iter().enumerate().map(|(j, w)| solve_twist(g, w0, w, j)).collect::<Result<Vec<_>, _>>()?;
        let _ = writeln!(text, "V has {} multidegrees", vbar.len());
        for w in &vbar {
            let _ = writeln!(text, "  ({})", fmt_deg(w));
        }
        json["twist_vectors"] = json!(twists);
        json["vbar"] = json!(vbar);
    }
    Ok(Output::new(json, text))
}
