mod report;
mod xi;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use e1forge::autos::{order_bound_verdicts, verify_order_bound, AutoWord};
use e1forge::bounds::{FRange, GroupKind, InequalityCert, Registry};
use e1forge::oracle::{verify_sweep, GroupDescriptor, SweepReport};
use e1forge::polyfield::{enumerate_charpolys, CharpolyFilter, MonicPoly};
use e1forge::semisimple::{
    centralizer_shape, classify_gudprep, group_field, index_odd_part, pgl_centralizer_order,
    pgl_is_real, realness_structure, CaseWitness, Epsilon, SemisimpleClass,
};
use e1forge::{FieldSpec, DEFAULT_BUDGET};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use report::{Format, Report};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "e1forge",
    version,
    about = "Semisimple classes, group oracles and inequality certificates in characteristic 2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    parallelism: Option<u64>,

    /// Seed for the generator search of closure-built unitary groups.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Include wall-clock times in reports.
    #[arg(long, global = true)]
    timing: bool,

    /// Upper bound on enumerated elements or candidates.
    #[arg(long, global = true, env = "E1FORGE_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Centralizer, realness and large-index cases of a semisimple class.
    Classify {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_epsilon)]
        epsilon: Option<Epsilon>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        /// Characteristic polynomial, e.g. "(x+1)^2(x+w)^2(x+w2)^2".
        #[arg(long)]
        xi: Option<String>,
        /// Class descriptor as JSON text or a path to a JSON file.
        #[arg(long, conflicts_with_all = ["epsilon", "d", "q", "xi"])]
        descriptor: Option<String>,
    },
    /// Certify inequalities from a registry or the command line.
    Certify {
        /// Certify every registry entry.
        #[arg(long)]
        all: bool,
        /// Registry file; the built-in registry is used otherwise.
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Certify a single registry entry.
        #[arg(long, conflicts_with = "all")]
        id: Option<String>,
        /// Inequality text such as "q^2 > 40q".
        #[arg(conflicts_with_all = ["all", "id"])]
        expr: Option<String>,
        /// Range of f for EXPR, e.g. "f=7..19" or "f>=21".
        #[arg(long, requires = "expr")]
        range: Option<String>,
        /// Include every recorded evaluation in the report.
        #[arg(long)]
        evaluations: bool,
    },
    /// Brute-force group oracles.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Order of a torus automorphism word and the divisibility verdicts.
    AutoOrder {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_epsilon)]
        epsilon: Epsilon,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
        /// Diagonal entries as field encodings, e.g. "1,2,3".
        #[arg(long, value_delimiter = ',', required_unless_present = "exhaustive")]
        t: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        graph_exp: u8,
        #[arg(long, default_value_t = 0)]
        field_exp: u32,
        /// Check every word of the model instead of one.
        #[arg(long, conflicts_with = "t")]
        exhaustive: bool,
    },
    /// Oracle sweeps over several groups and classifier completeness sweeps.
    Sweep {
        /// Groups as KIND:d:q.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "GL:2:2,GL:2:4,GL:3:2,GL:3:4,GU:2:2,GU:2:4,GU:3:2,PGL:2:2,PGL:2:4,PGL:3:2,PGL:3:4,PGU:2:2,PGU:2:4,PGU:3:2"
        )]
        groups: Vec<String>,
        /// Classifier sweeps as epsilon:d:q.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "-1:5:4,-1:6:2"
        )]
        classes: Vec<String>,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Enumerate the group and check every formula against brute force.
    Verify {
        #[arg(long, value_parser = parse_kind)]
        group: GroupKind,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "+1" | "+" | "plus" => Ok(Epsilon::Plus),
        "-1" | "-" | "minus" => Ok(Epsilon::Minus),
        _ => Err(format!("epsilon must be 1 or -1, got {s}")),
    }
}

fn parse_kind(s: &str) -> Result<GroupKind, String> {
    s.parse()
        .map_err(|e: e1forge::bounds::BoundsError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.parallelism {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let start = Instant::now();
    let result = run(&cli).and_then(|mut report| {
        if cli.timing {
            report.set("elapsed_ms", json!(start.elapsed().as_millis() as u64));
        }
        report.emit(cli.format, cli.output.as_deref())?;
        Ok(report.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Classify {
            epsilon,
            d,
            q,
            xi,
            descriptor,
        } => {
            let (eps, d, q, xi) = match descriptor {
                Some(text) => read_descriptor(text)?,
                None => match (epsilon, d, q, xi) {
                    (Some(e), Some(d), Some(q), Some(xi)) => (*e, *d, *q, xi.clone()),
                    _ => {
                        return Err(CliError::Usage(
                            "classify needs --epsilon, --d, --q and --xi, or --descriptor".into(),
                        ))
                    }
                },
            };
            classify(eps, d, q, &xi)
        }
        Command::Certify {
            all: _,
            registry,
            id,
            expr,
            range,
            evaluations,
        } => certify(
            registry.as_ref(),
            id.as_deref(),
            expr.as_deref(),
            range.as_deref(),
            *evaluations,
        ),
        Command::Oracle {
            action: OracleAction::Verify { group, d, q },
        } => oracle_verify(GroupDescriptor::new(*group, *d, *q), cli.budget, cli.seed),
        Command::AutoOrder {
            epsilon,
            d,
            q,
            t,
            graph_exp,
            field_exp,
            exhaustive,
        } => {
            if *exhaustive {
                auto_order_exhaustive(*epsilon, *d, *q)
            } else {
                auto_order(*epsilon, *d, *q, t, *graph_exp, *field_exp)
            }
        }
        Command::Sweep { groups, classes } => sweep(groups, classes, cli.budget, cli.seed),
    }
}

#[derive(Deserialize)]
struct Descriptor {
    epsilon: Value,
    d: usize,
    q: u64,
    xi: String,
}

fn read_descriptor(text: &str) -> CliResult<(Epsilon, usize, u64, String)> {
    let raw = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        fs::read_to_string(text)?
    };
    let desc: Descriptor = serde_json::from_str(&raw)?;
    let eps = match &desc.epsilon {
        Value::Number(n) => parse_epsilon(&n.to_string())?,
        Value::String(s) => parse_epsilon(s)?,
        other => return Err(CliError::Usage(format!("bad epsilon {other}"))),
    };
    Ok((eps, desc.d, desc.q, desc.xi))
}

fn field_for(eps: Epsilon, q: u64) -> CliResult<FieldSpec> {
    Ok(group_field(eps, q)?)
}

fn poly_json(p: &MonicPoly) -> Value {
    json!(p.to_string())
}

fn witness_json(label: char, w: &CaseWitness) -> Value {
    let case = label.to_string();
    match w {
        CaseWitness::ManyOnes { d1, d } => {
            json!({"case": case, "kind": "many-ones", "d1": d1, "d": d})
        }
        CaseWitness::SquareForm {
            delta,
            d1,
            reducible,
            flagged,
        } => json!({
            "case": case, "kind": "square-form", "delta": poly_json(delta), "d1": d1,
            "reducible": reducible, "flagged": flagged,
        }),
        CaseWitness::IndexBound {
            constant,
            strict,
            index_fourth,
            bound_fourth,
        } => json!({
            "case": case, "kind": "index-bound", "constant": constant, "strict": strict,
            "index_fourth": index_fourth.to_string(), "bound_fourth": bound_fourth.to_string(),
        }),
        CaseWitness::Exceptional { d, q } => {
            json!({"case": case, "kind": "exceptional", "d": d, "q": q})
        }
    }
}

fn classify(eps: Epsilon, d: usize, q: u64, text: &str) -> CliResult<Report> {
    let field = field_for(eps, q)?;
    let xi = xi::parse_xi(text, field).map_err(CliError::Usage)?;
    if xi.degree() != d {
        return Err(CliError::Usage(format!(
            "polynomial has degree {}, expected d = {d}",
            xi.degree()
        )));
    }
    let class = SemisimpleClass::from_poly(eps, q, &xi)?;
    let shape = centralizer_shape(&class)?;
    let real = realness_structure(&class)?.real;
    let odd_index = index_odd_part(&class)?;
    let mut rep = Report::new(
        "classify",
        vec![
            "epsilon",
            "d",
            "q",
            "xi",
            "shape",
            "order",
            "odd_index",
            "real",
            "cases",
        ],
    );
    rep.field(field.descriptor());
    let factors: Vec<Value> = class
        .xi()
        .factors()
        .iter()
        .map(|(p, m)| json!({"factor": p.to_string(), "multiplicity": m}))
        .collect();
    rep.set(
        "class",
        json!({
            "epsilon": eps.sign(), "d": d, "q": q, "field": field.descriptor(),
            "xi": xi.to_string(), "factors": factors, "d1": class.d1(), "e": class.e(),
        }),
    );
    rep.set("shape", json!(shape.to_string()));
    rep.set("order", json!(shape.order.to_string()));
    rep.set("odd_index", json!(odd_index.to_string()));
    rep.set("real", json!(real));
    rep.set(
        "pgl_centralizer",
        json!(pgl_centralizer_order(&class)?.to_string()),
    );
    rep.set("pgl_real", json!(pgl_is_real(&class)?));
    let labels = match classify_gudprep(&class) {
        Ok(found) => {
            rep.set(
                "cases",
                json!(found
                    .cases
                    .iter()
                    .map(|(c, _)| c.to_string())
                    .collect::<Vec<_>>()),
            );
            rep.set(
                "witnesses",
                Value::Array(
                    found
                        .cases
                        .iter()
                        .map(|(c, w)| witness_json(*c, w))
                        .collect(),
                ),
            );
            found.labels()
        }
        Err(e) => {
            rep.set("cases", Value::Null);
            rep.set("witnesses", json!([]));
            rep.set("classifier_note", json!(e.to_string()));
            "-".into()
        }
    };
    rep.row(vec![
        eps.sign().to_string(),
        d.to_string(),
        q.to_string(),
        xi.to_string(),
        shape.to_string(),
        shape.order.to_string(),
        odd_index.to_string(),
        real.to_string(),
        labels,
    ]);
    Ok(rep)
}

fn cert_json(c: &InequalityCert, with_evaluations: bool) -> Value {
    let witness = c.witness.as_ref().map(|w| {
        json!({
            "leading_q_exp": w.leading_q_exp, "leading_f_exp": w.leading_f_exp,
            "leading_coeff": w.leading_coeff.to_string(), "f0": w.f0,
            "remainder_at_f0": w.remainder_at_f0.to_string(),
        })
    });
    let failed_at = match c.status {
        e1forge::bounds::CertStatus::Failed { at_f } => Some(at_f),
        _ => None,
    };
    let mut v = json!({
        "id": c.id, "lhs": c.lhs, "rel": c.rel.to_string(), "rhs": c.rhs,
        "range": c.range.to_string(), "clear": c.clear, "anchor": c.anchor,
        "status": c.status.label(), "failed_at": failed_at,
        "evaluated": c.evaluations.len(), "witness": witness,
        "replay": c.replay().err().unwrap_or_else(|| "ok".into()),
    });
    if with_evaluations {
        v["evaluations"] = c
            .evaluations
            .iter()
            .map(|e| json!({"f": e.f, "lhs": e.lhs.to_string(), "rhs": e.rhs.to_string()}))
            .collect();
    }
    v
}

fn certify(
    registry: Option<&PathBuf>,
    id: Option<&str>,
    expr: Option<&str>,
    range: Option<&str>,
    with_evaluations: bool,
) -> CliResult<Report> {
    let certs = match expr {
        Some(text) => {
            let range: FRange = range
                .ok_or_else(|| CliError::Usage("--range is required with an expression".into()))?
                .parse()?;
            vec![e1forge::bounds::certify(text, range)?]
        }
        None => {
            let reg = match registry {
                Some(path) => Registry::parse(&fs::read_to_string(path)?)?,
                None => Registry::builtin(),
            };
            match id {
                Some(id) => vec![reg.certify(id)?],
                None => reg.certify_all(),
            }
        }
    };
    let mut rep = Report::new(
        "certify",
        vec!["id", "range", "status", "evaluated", "f0", "anchor"],
    );
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &certs {
        *counts.entry(c.status.label()).or_default() += 1;
        rep.ok &= c.verified() && c.replay().is_ok();
        rep.row(vec![
            c.id.clone(),
            c.range.to_string(),
            c.status.label().to_string(),
            c.evaluations.len().to_string(),
            c.witness
                .as_ref()
                .map(|w| w.f0.to_string())
                .unwrap_or_default(),
            c.anchor.clone(),
        ]);
    }
    rep.set(
        "summary",
        json!({"total": certs.len(), "by_status": counts}),
    );
    rep.set(
        "entries",
        certs
            .iter()
            .map(|c| cert_json(c, with_evaluations))
            .collect(),
    );
    Ok(rep)
}

fn sweep_json(r: &SweepReport, field: &str) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "lemma": c.lemma, "tested": c.tested, "passed": c.passed, "ok": c.ok(),
                "failures": c.failures.iter().take(20).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "group": r.group.to_string(), "field": field, "order": r.order.to_string(),
        "odd_elements": r.odd_elements, "odd_classes": r.odd_classes, "checks": checks,
    })
}

fn sweep_rows(rep: &mut Report, r: &SweepReport) {
    for c in &r.checks {
        rep.row(vec![
            r.group.to_string(),
            r.order.to_string(),
            c.lemma.clone(),
            c.tested.to_string(),
            c.passed.to_string(),
            c.ok().to_string(),
        ]);
    }
}

fn oracle_verify(desc: GroupDescriptor, budget: u64, seed: u64) -> CliResult<Report> {
    let r = verify_sweep(desc, budget, seed)?;
    let field = field_for(desc.epsilon(), desc.q)?.descriptor();
    let mut rep = Report::new(
        "oracle-verify",
        vec!["group", "order", "lemma", "tested", "passed", "ok"],
    );
    rep.field(field.clone());
    rep.ok = r.passed();
    if let Value::Object(m) = sweep_json(&r, &field) {
        rep.body.extend(m);
    }
    sweep_rows(&mut rep, &r);
    Ok(rep)
}

fn auto_order(
    eps: Epsilon,
    d: usize,
    q: u64,
    t: &[u64],
    graph_exp: u8,
    field_exp: u32,
) -> CliResult<Report> {
    let field = field_for(eps, q)?;
    if t.len() != d {
        return Err(CliError::Usage(format!(
            "--t has {} entries, expected d = {d}",
            t.len()
        )));
    }
    let t = t
        .iter()
        .map(|&b| field.elem(b))
        .collect::<Result<Vec<_>, _>>()?;
    let word = AutoWord::new(eps, q, t, graph_exp, field_exp)?;
    let v = order_bound_verdicts(&word);
    let mut rep = Report::new(
        "auto-order",
        vec!["word", "order", "claim", "divisor", "applies", "holds"],
    );
    rep.field(field.descriptor());
    rep.ok = v.claims.iter().all(|c| c.holds);
    rep.set("word", json!(word.to_string()));
    rep.set("order", json!(v.order));
    rep.set("mu_order", json!(word.mu_order()));
    let claims: Vec<Value> = v
        .claims
        .iter()
        .map(|c| json!({"claim": c.claim.to_string(), "divisor": c.divisor, "applies": c.applies, "holds": c.holds}))
        .collect();
    rep.set("claims", Value::Array(claims));
    for c in &v.claims {
        rep.row(vec![
            word.to_string(),
            v.order.to_string(),
            c.claim.to_string(),
            c.divisor.to_string(),
            c.applies.to_string(),
            c.holds.to_string(),
        ]);
    }
    Ok(rep)
}

fn auto_order_exhaustive(eps: Epsilon, d: usize, q: u64) -> CliResult<Report> {
    let field = field_for(eps, q)?;
    let r = verify_order_bound(d, q, eps)?;
    let mut rep = Report::new(
        "auto-order",
        vec!["claim", "divisor", "tested", "violations"],
    );
    rep.field(field.descriptor());
    rep.ok = r.passed();
    let claims: Vec<Value> = r
        .claims
        .iter()
        .map(|c| {
            let bad: Vec<Value> = c
                .violations
                .iter()
                .take(20)
                .map(|v| json!({"word": v.word, "order": v.order}))
                .collect();
            json!({"claim": c.claim.to_string(), "divisor": c.divisor, "tested": c.tested,
                   "violations": c.violations.len(), "examples": bad})
        })
        .collect();
    rep.set("model", json!({"epsilon": eps.sign(), "d": d, "q": q}));
    rep.set("claims", Value::Array(claims));
    for c in &r.claims {
        rep.row(vec![
            c.claim.to_string(),
            c.divisor.to_string(),
            c.tested.to_string(),
            c.violations.len().to_string(),
        ]);
    }
    Ok(rep)
}

fn parse_triple(s: &str) -> CliResult<(String, usize, u64)> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, d, q] => Ok((a.to_string(), d.parse()?, q.parse()?)),
        _ => Err(CliError::Usage(format!("expected X:d:q, got {s}"))),
    }
}

fn class_sweep(eps: Epsilon, d: usize, q: u64, budget: u64) -> CliResult<Value> {
    let field = field_for(eps, q)?;
    let filter = CharpolyFilter {
        real: true,
        unitary: (eps == Epsilon::Minus).then_some(q),
        exclude_identity: true,
    };
    let space = enumerate_charpolys(d, field, filter, budget)?;
    let xs: Vec<_> = space.iter().collect();
    let outcomes: Vec<Result<(String, bool), String>> = xs
        .par_iter()
        .map(|xi| {
            let class = SemisimpleClass::new(eps, d, q, xi.clone()).map_err(|e| e.to_string())?;
            let labels = classify_gudprep(&class)
                .map_err(|e| e.to_string())?
                .labels();
            let one = MonicPoly::linear(field.one(), field);
            let iv = xi.factors().iter().all(|(p, m)| {
                *p == one || d >= class.d1() as usize + 2 * (*m as usize) * p.degree()
            });
            Ok((labels, iv))
        })
        .collect();
    let mut per_case: BTreeMap<String, usize> = BTreeMap::new();
    let (mut classified, mut iv_ok, mut errors) = (0usize, 0usize, Vec::new());
    for (xi, out) in xs.iter().zip(&outcomes) {
        match out {
            Ok((labels, iv)) => {
                if !labels.is_empty() {
                    classified += 1;
                }
                iv_ok += *iv as usize;
                for c in labels.chars() {
                    *per_case.entry(c.to_string()).or_default() += 1;
                }
            }
            Err(e) => errors.push(format!("{}: {e}", xi.expand())),
        }
    }
    Ok(json!({
        "epsilon": eps.sign(), "d": d, "q": q, "field": field.descriptor(),
        "classes": xs.len(), "classified": classified, "degree_bound_holds": iv_ok,
        "cases": per_case, "errors": errors,
    }))
}

fn sweep(groups: &[String], classes: &[String], budget: u64, seed: u64) -> CliResult<Report> {
    let descs = groups
        .iter()
        .map(|g| {
            let (kind, d, q) = parse_triple(g)?;
            Ok(GroupDescriptor::new(
                parse_kind(&kind).map_err(CliError::Usage)?,
                d,
                q,
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let triples = classes
        .iter()
        .map(|c| {
            let (e, d, q) = parse_triple(c)?;
            Ok((parse_epsilon(&e).map_err(CliError::Usage)?, d, q))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let reports = descs
        .par_iter()
        .map(|&desc| verify_sweep(desc, budget, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rep = Report::new(
        "sweep",
        vec!["group", "order", "lemma", "tested", "passed", "ok"],
    );
    let mut group_json = Vec::new();
    for r in &reports {
        let field = field_for(r.group.epsilon(), r.group.q)?.descriptor();
        rep.field(field.clone());
        rep.ok &= r.passed();
        group_json.push(sweep_json(r, &field));
        sweep_rows(&mut rep, r);
    }
    let mut class_json = Vec::new();
    for &(eps, d, q) in &triples {
        rep.field(field_for(eps, q)?.descriptor());
        let v = class_sweep(eps, d, q, budget)?;
        let complete = v["classified"] == v["classes"] && v["degree_bound_holds"] == v["classes"];
        rep.ok &= complete;
        let label = format!("{}:{d}:{q}", eps.sign());
        rep.row(vec![
            label,
            String::new(),
            "classifier-completeness".into(),
            v["classes"].to_string(),
            v["classified"].to_string(),
            complete.to_string(),
        ]);
        class_json.push(v);
    }
    rep.set("groups", Value::Array(group_json));
    rep.set("class_sweeps", Value::Array(class_json));
    Ok(rep)
}
