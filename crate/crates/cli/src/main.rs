use std::ops::RangeInclusive;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use dpchroma::analysis::{
    classify_generalized, dp_formula_theta3, fvs1_dp_polynomial, lemma31_margin_polynomial,
    list_color_threshold, Classification, DpFormulaResult, Fvs1Result, DEFAULT_SCAN_BUDGET,
};
use dpchroma::chromatic::{chromatic_polynomial, theta_chromatic};
use dpchroma::cover::{min_over_covers, SearchOptions, DEFAULT_BUDGET};
use dpchroma::graph::{build_generalized_theta, Graph, ThetaSpec};
use dpchroma::poly::IntPolynomial;
use dpchroma::report::{run_suite, Suite};
use dpchroma::Exec;

#[derive(Parser)]
#[command(name = "dpchroma", version, about = "DP color functions and chromatic polynomials of small graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads (DPCHROMA_WORKERS overrides this).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Chromatic polynomial by deletion-contraction.
    Chrom { graph: String },
    /// Closed-form chromatic polynomial of a generalized Theta graph.
    ThetaChrom { spec: String },
    /// Exact DP color function value by searching all covers.
    DpExact {
        graph: String,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// DP color function from a closed form (three-path Theta graphs) or the
    /// feedback-vertex construction.
    DpFormula {
        graph: String,
        /// Evaluate at this m and, for the construction, emit the witness cover.
        #[arg(long)]
        m: Option<usize>,
    },
    /// P and P_DP side by side over a range such as `2..5`.
    Compare {
        graph: String,
        #[arg(long, value_parser = parse_range)]
        m: RangeInclusive<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
    },
    /// Parity classification and the one-edge test sweep for a Theta spec.
    Scan {
        spec: String,
        #[arg(long, default_value_t = DEFAULT_SCAN_BUDGET)]
        budget: u64,
    },
    /// Number of colors beyond which list and ordinary color functions agree.
    Threshold {
        #[arg(long)]
        edges: u64,
    },
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long, default_value = "tree-canonical", value_parser = ["none", "tree-canonical", "tree-canonical+conjugacy"])]
    symmetry: String,
    /// Largest number of candidate covers to examine.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions { symmetry: self.symmetry.parse().expect("validated by clap"), budget: self.budget, exec: Exec::Parallel }
    }
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `a..b` or a single value, got `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(format!("range `{s}` must satisfy 1 <= a <= b"));
    }
    Ok(a..=b)
}

/// A graph from `theta:...` or a file in the edge-list format.
struct Source {
    name: String,
    graph: Graph,
    spec: Option<ThetaSpec>,
}

fn load(source: &str) -> Result<Source> {
    if source.starts_with("theta:") {
        let spec: ThetaSpec = source.parse()?;
        return Ok(Source { name: spec.to_string(), graph: build_generalized_theta(&spec), spec: Some(spec) });
    }
    let text = std::fs::read_to_string(source).with_context(|| format!("cannot read graph file `{source}`"))?;
    let graph = Graph::parse(&text).with_context(|| format!("malformed graph file `{source}`"))?;
    Ok(Source { name: source.to_string(), graph, spec: None })
}

struct Output {
    text: String,
    pass: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, pass: true }
    }
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for r in rows {
        out += &r.join(",");
        out.push('\n');
    }
    out
}

fn polynomial_output(name: &str, p: &IntPolynomial, format: Format) -> Output {
    Output::ok(match format {
        Format::Json => json_text(&json!({ "graph": name, "coefficients": p, "polynomial": p.to_string() })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = p.coeffs().iter().enumerate().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect();
            csv_text(&["degree", "coefficient"], &rows)
        }
        Format::Text => format!("{p}\n"),
    })
}

fn cmd_dp_exact(source: &Source, m: usize, search: &SearchArgs, format: Format) -> Result<Output> {
    let opts = search.options();
    let r = min_over_covers(&source.graph, m, &opts)?;
    let witness = serde_json::to_value(r.witness.to_json(&source.graph))?;
    Ok(Output::ok(match format {
        Format::Json => json_text(&json!({
            "graph": source.name,
            "m": m,
            "symmetry": opts.symmetry.to_string(),
            "candidates": r.candidates.to_string(),
            "minimum": r.minimum.to_string(),
            "witness": witness,
        })),
        Format::Csv => csv_text(&["graph", "m", "minimum", "candidates"], &[vec![source.name.clone(), m.to_string(), r.minimum.to_string(), r.candidates.to_string()]]),
        Format::Text => format!("{}\n{}\n", r.minimum, serde_json::to_string(&witness)?),
    }))
}

enum Formula {
    Theta3(DpFormulaResult),
    Fvs1(Box<Fvs1Result>),
}

impl Formula {
    fn of(source: &Source) -> Result<Formula> {
        if let Some(spec) = source.spec.as_ref().filter(|s| s.k() == 3) {
            let mut ls = spec.lengths().to_vec();
            ls.sort_unstable();
            if ls[0] >= 2 {
                return Ok(Formula::Theta3(dp_formula_theta3(ls[0], ls[1], ls[2])?));
            }
        }
        Ok(Formula::Fvs1(Box::new(fvs1_dp_polynomial(&source.graph, Exec::Parallel)?)))
    }

    fn polynomial(&self) -> &IntPolynomial {
        match self {
            Formula::Theta3(f) => &f.polynomial,
            Formula::Fvs1(r) => &r.dp,
        }
    }

    /// Whether the formula is claimed to equal P_DP at `m`.
    fn asserted(&self, m: usize) -> bool {
        match self {
            Formula::Theta3(f) => m as u64 >= f.threshold,
            Formula::Fvs1(r) => BigInt::from(m) >= BigInt::from(r.bound.clone()),
        }
    }

    fn value(&self, m: usize) -> BigInt {
        match self {
            Formula::Theta3(f) if !self.asserted(m) => f.polynomial.eval_at(m as u64),
            Formula::Theta3(f) => f.value(m as u64),
            Formula::Fvs1(r) => r.dp.eval_at(m as u64),
        }
    }
}

fn cmd_dp_formula(source: &Source, m: Option<usize>, format: Format) -> Result<Output> {
    let formula = Formula::of(source)?;
    let g = &source.graph;
    let mut obj = match &formula {
        Formula::Theta3(f) => json!({
            "graph": source.name,
            "method": "theta-closed-form",
            "case": f.case.id(),
            "threshold": f.threshold,
            "coefficients": f.polynomial,
            "polynomial": f.polynomial.to_string(),
        }),
        Formula::Fvs1(r) => json!({
            "graph": source.name,
            "method": "feedback-vertex",
            "center": g.label(r.decomposition.center),
            "partitions": r.partitions_considered,
            "winner": r.winner().describe(g),
            "maximizers": r.maximizers.iter().map(|p| p.describe(g)).collect::<Vec<_>>(),
            "weight": r.weight.to_string(),
            "coefficients": r.dp,
            "polynomial": r.dp.to_string(),
            "bound": r.bound.to_string(),
        }),
    };
    if let Some(m) = m {
        obj["m"] = json!(m);
        obj["value"] = json!(formula.value(m).to_string());
        obj["asserted"] = json!(formula.asserted(m));
        if let Formula::Fvs1(r) = &formula {
            obj["witness"] = serde_json::to_value(r.witness_cover(g, m)?.to_json(g))?;
        }
    }
    Ok(Output::ok(match format {
        Format::Json => json_text(&obj),
        Format::Csv => {
            let value = m.map(|m| formula.value(m).to_string()).unwrap_or_default();
            csv_text(&["graph", "method", "polynomial", "m", "value"], &[vec![
                source.name.clone(),
                obj["method"].as_str().unwrap_or_default().to_string(),
                format!("\"{}\"", formula.polynomial()),
                m.map(|m| m.to_string()).unwrap_or_default(),
                value,
            ]])
        }
        Format::Text => {
            let mut s = format!("{}\n", formula.polynomial());
            if let Some(m) = m {
                s += &format!("{}\n", formula.value(m));
            }
            s
        }
    }))
}

fn cmd_compare(source: &Source, range: RangeInclusive<usize>, search: &SearchArgs, format: Format) -> Result<Output> {
    let g = &source.graph;
    let p = match &source.spec {
        Some(spec) => theta_chromatic(spec)?,
        None => chromatic_polynomial(g)?,
    };
    let formula = Formula::of(source).ok();
    let opts = search.options();
    let mut rows = Vec::new();
    let mut pass = true;
    for m in range {
        let chromatic = p.eval_at(m as u64);
        let dp = BigInt::from(min_over_covers(g, m, &opts)?.minimum);
        let relation = if dp < chromatic { "less" } else if dp == chromatic { "equal" } else { "greater" };
        pass &= dp <= chromatic;
        let (value, asserted) = match &formula {
            Some(f) => {
                let asserted = f.asserted(m);
                pass &= !asserted || f.value(m) == dp;
                (f.value(m).to_string(), asserted.to_string())
            }
            None => (String::new(), String::new()),
        };
        rows.push(vec![m.to_string(), chromatic.to_string(), dp.to_string(), relation.to_string(), value, asserted]);
    }
    let header = ["m", "chromatic", "dp", "relation", "formula", "formula_asserted"];
    let text = match format {
        Format::Csv => csv_text(&header, &rows),
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| header.iter().zip(r).map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into())
                .collect();
            json_text(&json!({ "graph": source.name, "rows": items, "pass": pass }))
        }
        Format::Text => rows.iter().map(|r| format!("m={} P={} P_DP={} {} formula={}\n", r[0], r[1], r[2], r[3], r[4])).collect(),
    };
    Ok(Output { text, pass })
}

fn cmd_verify(suite: &str, format: Format) -> Result<Output> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, Exec::Parallel)?;
    let text = match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    Ok(Output { text, pass: report.passed })
}

fn cmd_scan(spec: &str, budget: u64, format: Format) -> Result<Output> {
    let spec: ThetaSpec = spec.parse()?;
    let class = classify_generalized(&spec, budget)?;
    let mut rows = Vec::new();
    if let Classification::EventuallyLess { witness, .. } = &class {
        let g = build_generalized_theta(&spec);
        let margin = lemma31_margin_polynomial(&g, witness - 1)?;
        for m in 2..=budget {
            let v = margin.eval_at(m);
            rows.push(vec![m.to_string(), v.to_string(), (v > BigInt::from(0)).to_string()]);
        }
    }
    let summary = match &class {
        Classification::EventuallyEqual => "eventually-equal".to_string(),
        Classification::EventuallyLess { witness, empirical_n, holds_through_budget, budget } => {
            let n = empirical_n.map_or("none".to_string(), |n| n.to_string());
            format!("eventually-less witness={witness} N={n} holds-through-{budget}={holds_through_budget}")
        }
    };
    let text = match format {
        Format::Json => {
            let items: Vec<Value> = rows.iter().map(|r| json!({ "m": r[0], "margin": r[1], "holds": r[2] == "true" })).collect();
            json_text(&json!({ "spec": spec.to_string(), "classification": class, "sweep": items }))
        }
        Format::Csv => csv_text(&["m", "margin", "holds"], &rows),
        Format::Text => summary + "\n",
    };
    Ok(Output::ok(text))
}

fn cmd_threshold(edges: u64, format: Format) -> Output {
    let t = list_color_threshold(edges);
    Output::ok(match format {
        Format::Json => json_text(&json!({ "edges": edges, "threshold": t.value, "least_integer": t.least_integer })),
        Format::Csv => csv_text(&["edges", "threshold", "least_integer"], &[vec![edges.to_string(), t.value.to_string(), t.least_integer.to_string()]]),
        Format::Text => format!("threshold {:.6}\nleast integer {}\n", t.value, t.least_integer),
    })
}

fn workers(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var("DPCHROMA_WORKERS") {
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| anyhow!("DPCHROMA_WORKERS must be a positive integer, got `{v}`"))?;
            if n == 0 {
                bail!("DPCHROMA_WORKERS must be at least 1");
            }
            Ok(Some(n))
        }
        Err(_) => match flag {
            Some(0) => bail!("--workers must be at least 1"),
            other => Ok(other),
        },
    }
}

fn run(cli: Cli) -> Result<Output> {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Chrom { graph } => {
            let s = load(graph)?;
            Ok(polynomial_output(&s.name, &chromatic_polynomial(&s.graph)?, fmt(Format::Text)))
        }
        Command::ThetaChrom { spec } => {
            let spec: ThetaSpec = spec.parse()?;
            Ok(polynomial_output(&spec.to_string(), &theta_chromatic(&spec)?, fmt(Format::Text)))
        }
        Command::DpExact { graph, m, search } => cmd_dp_exact(&load(graph)?, *m, search, fmt(Format::Text)),
        Command::DpFormula { graph, m } => cmd_dp_formula(&load(graph)?, *m, fmt(Format::Text)),
        Command::Compare { graph, m, search } => cmd_compare(&load(graph)?, m.clone(), search, fmt(Format::Csv)),
        Command::Verify { suite } => cmd_verify(suite, fmt(Format::Text)),
        Command::Scan { spec, budget } => cmd_scan(spec, *budget, fmt(Format::Text)),
        Command::Threshold { edges } => Ok(cmd_threshold(*edges, fmt(Format::Text))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = workers(cli.workers).and_then(|n| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = n {
            b = b.num_threads(n);
        }
        b.build().map_err(|e| anyhow!("cannot start worker pool: {e}"))
    });
    let result = pool.and_then(|pool| pool.install(|| run(cli)));
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
