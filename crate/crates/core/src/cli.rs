//! The `crn` command-line interface.
//!
//! Exit codes: 0 for success, a positive verdict, equivalence or a found
//! realization; 1 for a negative verdict; 2 when a size cap was hit; 3 for
//! any other error.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::endotactic::{sweep_report, AtlasConfig, AtlasError, SweepDisposition, SweepReport};
use crate::equivalence::{
    eliminate_ghosts, ghost_vertices, is_dynamically_equivalent, random_point_oracle,
};
use crate::exact::{fmt_rat, RatVec};
use crate::io::{
    analyze, parse_network, parse_vector_list, write_system, AnalysisReport, ParsedNetwork,
    ReportConfig, ReportError,
};
use crate::network::{deficiency, MassActionSystem, NetworkError};
use crate::realization::{
    classify_deficiency_one, find_realization, Property, PropertyCertificate, RealizationError,
    RealizationQuery, SearchConfig, TargetDynamics,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "crn",
    version,
    about = "Exact analysis of chemical reaction networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for the random oracles.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples drawn by the random oracles.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Cap on the number of direction cells.
    #[arg(long, global = true)]
    max_cells: Option<usize>,
    /// Cap on the rank of the direction arrangement.
    #[arg(long, global = true, default_value_t = 5)]
    max_dim: usize,
    /// Cap on candidate edges for the enumerating realization searches.
    #[arg(long, global = true, default_value_t = 14)]
    max_edges: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Re-check every certificate before printing.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural report with certified property verdicts.
    Analyze { file: String },
    /// Decides dynamical equivalence of two systems.
    Equiv { first: String, second: String },
    /// Lists ghost vertices and the system without them.
    Ghosts { file: String },
    /// Searches for a realization of a system's dynamics with a property.
    Realize {
        file: String,
        #[arg(long)]
        property: String,
        /// Vertex pool as `x,y;x,y;…`. Defaults to the source vertices.
        #[arg(long, allow_hyphen_values = true)]
        pool: Option<String>,
    },
    /// Deficiency-one type of a network.
    Classify { file: String },
    /// Sweeps a hyperplane across the sources along a direction.
    Sweep {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn error(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_ERROR,
            message: message.into(),
        }
    }
}

impl From<AtlasError> for Failure {
    fn from(e: AtlasError) -> Self {
        let code = match e {
            AtlasError::DimensionCap { .. } | AtlasError::CellCap { .. } => EXIT_CAP,
            _ => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<RealizationError> for Failure {
    fn from(e: RealizationError) -> Self {
        Failure {
            code: if e.is_capability() {
                EXIT_CAP
            } else {
                EXIT_ERROR
            },
            message: e.to_string(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Atlas(a) => a.into(),
            other => Failure::error(other.to_string()),
        }
    }
}

impl From<NetworkError> for Failure {
    fn from(e: NetworkError) -> Self {
        Failure::error(e.to_string())
    }
}

struct Ctx {
    atlas: AtlasConfig,
    search: SearchConfig,
    report: ReportConfig,
    output: Output,
    verify: bool,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let atlas = AtlasConfig {
        max_dim: cli.max_dim,
        max_cells: cli.max_cells,
    };
    let ctx = Ctx {
        atlas,
        search: SearchConfig {
            max_dense_edges: cli.max_edges,
            atlas,
            ..SearchConfig::default()
        },
        report: ReportConfig {
            atlas,
            trials: cli.trials,
            seed: cli.seed,
        },
        output: cli.output,
        verify: cli.verify,
    };
    let result = match &cli.command {
        Command::Analyze { file } => cmd_analyze(&ctx, file),
        Command::Equiv { first, second } => cmd_equiv(&ctx, first, second),
        Command::Ghosts { file } => cmd_ghosts(&ctx, file),
        Command::Realize {
            file,
            property,
            pool,
        } => cmd_realize(&ctx, file, property, pool.as_deref()),
        Command::Classify { file } => cmd_classify(&ctx, file),
        Command::Sweep { file, direction } => cmd_sweep(&ctx, file, direction),
    };
    match result {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "crn: {}", f.message);
            f.code
        }
    }
}

fn load(path: &str) -> Result<ParsedNetwork, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::error(format!("cannot read {path}: {e}")))?;
    parse_network(&text)
        .map_err(|e| Failure::error(format!("{path}:{}:{}: {}", e.line, e.column, e.message)))
}

fn load_system(path: &str) -> Result<MassActionSystem, Failure> {
    match load(path)? {
        ParsedNetwork::System(s) => Ok(s),
        ParsedNetwork::Network(_) => Err(Failure::error(format!(
            "{path}: reactions need rates for this command"
        ))),
    }
}

fn render(ctx: &Ctx, value: &Value, text: impl FnOnce() -> String) -> String {
    match ctx.output {
        Output::Json => serde_json::to_string_pretty(value).expect("value serializes"),
        Output::Text => text(),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_analyze(ctx: &Ctx, file: &str) -> Result<(i32, String), Failure> {
    let p = load(file)?;
    let report = analyze(&p, &ctx.report)?;
    let json = report.to_json();
    if ctx.verify {
        AnalysisReport::from_json(&json)
            .and_then(|r| r.verify(&ctx.atlas))
            .map_err(|e| Failure::error(format!("self-check failed: {e}")))?;
    }
    let text = match ctx.output {
        Output::Json => json,
        Output::Text => {
            let r = &report;
            let mut s = String::new();
            s.push_str(&format!("species: {}\n", r.species.join(" ")));
            s.push_str(&format!("vertices: {}\n", r.structure.vertices.len()));
            s.push_str(&format!("reactions: {}\n", r.structure.reactions.len()));
            s.push_str(&format!(
                "linkage classes: {}\n",
                r.structure.linkage_classes.len()
            ));
            s.push_str(&format!("dim S: {}\n", r.structure.dim_s));
            s.push_str(&format!("deficiency: {}\n", r.structure.deficiency));
            s.push_str(&format!(
                "weakly reversible: {}\n",
                yes_no(r.weakly_reversible)
            ));
            s.push_str(&format!("consistent: {}\n", yes_no(r.consistent.holds)));
            match &r.conservative.vector {
                Some(v) => s.push_str(&format!("conservative: yes ({v})\n")),
                None => s.push_str("conservative: no\n"),
            }
            s.push_str(&format!("endotactic: {}\n", yes_no(r.endotactic.holds)));
            s.push_str(&format!(
                "strongly endotactic: {}\n",
                yes_no(r.strongly_endotactic.holds)
            ));
            if let Some(d) = &r.dynamics {
                for (y, w) in &d.net_vectors {
                    s.push_str(&format!("net vector at [{y}]: [{w}]\n"));
                }
                s.push_str(&format!("ghosts: {}\n", d.ghosts.len()));
            }
            s
        }
    };
    Ok((EXIT_OK, text))
}

fn cmd_equiv(ctx: &Ctx, first: &str, second: &str) -> Result<(i32, String), Failure> {
    let a = load_system(first)?;
    let b = load_system(second)?;
    let verdict = is_dynamically_equivalent(&a, &b).map_err(|_| {
        Failure::error(format!(
            "species lines differ: `{}` vs `{}`",
            a.context().names().join(" "),
            b.context().names().join(" ")
        ))
    })?;
    let oracle = random_point_oracle(&a, &b, ctx.report.trials, ctx.report.seed)?;
    if ctx.verify && verdict.equivalent && !oracle {
        return Err(Failure::error(
            "self-check failed: vector fields differ at a sampled point",
        ));
    }
    let witness = verdict
        .witness
        .as_ref()
        .map(|(y, d)| json!({ "source": y.to_string(), "difference": d.to_string() }));
    let value = json!({
        "equivalent": verdict.equivalent,
        "witness": witness,
        "oracle_agrees": oracle,
        "oracle_trials": ctx.report.trials,
        "oracle_seed": ctx.report.seed,
    });
    let text = render(ctx, &value, || match &verdict.witness {
        None => "equivalent\n".to_string(),
        Some((y, d)) => format!("not equivalent: net vectors at [{y}] differ by [{d}]\n"),
    });
    Ok((
        if verdict.equivalent {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        },
        text,
    ))
}

fn cmd_ghosts(ctx: &Ctx, file: &str) -> Result<(i32, String), Failure> {
    let sys = load_system(file)?;
    let ghosts: Vec<String> = ghost_vertices(&sys)
        .vertices
        .iter()
        .map(|&i| sys.network().vertex(i).to_string())
        .collect();
    let reduced = eliminate_ghosts(&sys);
    if ctx.verify && !is_dynamically_equivalent(&sys, &reduced)?.equivalent {
        return Err(Failure::error(
            "self-check failed: eliminating ghosts changed the dynamics",
        ));
    }
    let value = json!({ "ghosts": ghosts, "eliminated": write_system(&reduced) });
    let text = render(ctx, &value, || {
        let mut s = format!("ghosts: {}\n", ghosts.len());
        for g in &ghosts {
            s.push_str(&format!("  [{g}]\n"));
        }
        s.push_str("eliminated:\n");
        s.push_str(&write_system(&reduced));
        s
    });
    Ok((EXIT_OK, text))
}

fn certificate_json(c: &PropertyCertificate) -> Value {
    match c {
        PropertyCertificate::None => json!({ "kind": "none" }),
        PropertyCertificate::WeaklyReversible => json!({ "kind": "weakly-reversible" }),
        PropertyCertificate::Endotactic(v) => {
            json!({ "kind": "endotactic", "directions_checked": v.directions_checked })
        }
        PropertyCertificate::StronglyEndotactic(v) => {
            json!({ "kind": "strongly-endotactic", "directions_checked": v.directions_checked })
        }
        PropertyCertificate::Consistent(c) => {
            json!({ "kind": "consistent", "weights": c.solution().map(RatVec::to_string) })
        }
        PropertyCertificate::Conservative(v) => {
            json!({ "kind": "conservative", "vector": v.to_string() })
        }
    }
}

fn cmd_realize(
    ctx: &Ctx,
    file: &str,
    property: &str,
    pool: Option<&str>,
) -> Result<(i32, String), Failure> {
    let sys = load_system(file)?;
    let property: Property = property.parse().map_err(Failure::error)?;
    let target = TargetDynamics::from_system(&sys);
    let mut q = RealizationQuery::new(target.clone(), property).with_config(ctx.search);
    if let Some(p) = pool {
        q = q.with_pool(parse_vector_list(p).map_err(|e| Failure::error(format!("--pool: {e}")))?);
    }
    let r = find_realization(&q)?;
    if ctx.verify && !r.verify(&target, property, Some(&q.pool), &ctx.atlas) {
        return Err(Failure::error(
            "self-check failed: realization does not re-verify",
        ));
    }
    let value = json!({
        "found": r.found,
        "property": property.name(),
        "system": r.system.as_ref().map(write_system),
        "certificate": r.certificate.as_ref().map(certificate_json),
    });
    let text = render(ctx, &value, || match (&r.system, &r.certificate) {
        (Some(s), cert) => {
            let mut t = format!("found {property} realization\n");
            if let Some(PropertyCertificate::Conservative(v)) = cert {
                t.push_str(&format!("conservation law: [{v}]\n"));
            }
            t.push_str(&write_system(s));
            t
        }
        _ => format!("no {property} realization on the pool\n"),
    });
    Ok((if r.found { EXIT_OK } else { EXIT_NEGATIVE }, text))
}

fn cmd_classify(ctx: &Ctx, file: &str) -> Result<(i32, String), Failure> {
    let p = load(file)?;
    let g = p.network();
    let kind = classify_deficiency_one(g);
    let s = deficiency(g);
    let value = json!({
        "type": kind.to_string(),
        "deficiency": s.deficiency,
        "linkage_classes": s.linkage_classes.len(),
        "per_class_deficiency": s.per_class_deficiency,
        "weakly_reversible": s.weakly_reversible,
    });
    let text = render(ctx, &value, || {
        format!(
            "{kind} (deficiency {}, {} linkage classes)\n",
            s.deficiency,
            s.linkage_classes.len()
        )
    });
    Ok((EXIT_OK, text))
}

fn sweep_json(r: &SweepReport) -> Value {
    let levels: Vec<Value> = r
        .levels
        .iter()
        .map(|l| {
            json!({
                "value": fmt_rat(&l.value),
                "sources": l.sources,
                "reactions": l.reactions.iter().map(|(e, d)| json!({ "reaction": e, "change": fmt_rat(d) })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "direction": r.direction.to_string(),
        "min_value": fmt_rat(&r.min_value),
        "max_value": fmt_rat(&r.max_value),
        "supporting_sources": r.supporting_sources,
        "levels": levels,
        "disposition": disposition_name(r.disposition),
    })
}

fn disposition_name(d: SweepDisposition) -> &'static str {
    match d {
        SweepDisposition::Pass => "pass",
        SweepDisposition::Fail => "fail",
        SweepDisposition::Continue => "continue",
    }
}

fn cmd_sweep(ctx: &Ctx, file: &str, direction: &str) -> Result<(i32, String), Failure> {
    let p = load(file)?;
    let v: RatVec = direction
        .parse()
        .map_err(|e: crate::exact::ParseRatError| Failure::error(format!("--direction: {e}")))?;
    if v.dim() != p.network().dim() {
        return Err(Failure::error(format!(
            "--direction has {} entries, expected {}",
            v.dim(),
            p.network().dim()
        )));
    }
    let r = sweep_report(p.network(), &v)?;
    let value = sweep_json(&r);
    let text = render(ctx, &value, || {
        let mut s = format!(
            "direction [{}]: {}\n",
            r.direction,
            disposition_name(r.disposition)
        );
        for l in &r.levels {
            s.push_str(&format!(
                "  level {}: sources {:?}\n",
                fmt_rat(&l.value),
                l.sources
            ));
        }
        s
    });
    let code = if r.disposition == SweepDisposition::Fail {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    };
    Ok((code, text))
}
