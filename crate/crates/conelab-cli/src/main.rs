//! `conelab` — valuations and barycenters on finite semilattice cones.
//!
//! Exit codes: `0` when every checked property holds, `1` when a property
//! fails (the report carries replayable witnesses), `2` on input or usage
//! errors. With `--json`, identical invocations produce byte-identical
//! output; timings go to stderr in human mode only.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use conelab::barycenter::{pipeline_barycenter_with, uniqueness_sweep};
use conelab::cone::{
    barycenter_support_sup, check_cone_axioms, dual_cone_enumerate, linear_separation_witness,
    SemilatticeCone,
};
use conelab::files;
use conelab::monad::{check_algebra, check_monad_laws, AlgebraMap, SampleSpec};
use conelab::poset::{ElemSet, FinitePoset, UpSet, DEFAULT_UPSET_BOUND};
use conelab::powercone::{principality_check, PrincipalityVerdict, SmythCone};
use conelab::rational::ExtRat;
use conelab::report::LawReport;
use conelab::{Error, Result};

#[derive(Parser)]
#[command(name = "conelab", version, about = "Exact barycenters of valuations on finite semilattice cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit a single JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every randomized check; identical seeds give identical
    /// reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count for randomized checks.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    /// Bound on enumeration sizes (upsets, powercone elements).
    #[arg(long, global = true)]
    max_size: Option<usize>,

    /// Include the pipeline trace in barycenter reports.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a poset file.
    Poset {
        #[command(subcommand)]
        action: PosetAction,
    },
    /// Check or invert valuations.
    Valuation {
        #[command(subcommand)]
        action: ValuationAction,
    },
    /// Compare two valuations in the stochastic order.
    StochasticLeq {
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        /// Shared poset file, when the valuation files omit theirs.
        #[arg(long)]
        poset: Option<PathBuf>,
    },
    /// Integrate a monotone function against a valuation.
    Integrate {
        #[arg(long)]
        nu: PathBuf,
        /// Function file with per-element values.
        #[arg(long = "h")]
        function: PathBuf,
        #[arg(long)]
        poset: Option<PathBuf>,
    },
    /// Check cone axioms or list the dual cone.
    Cone {
        #[command(subcommand)]
        action: ConeAction,
    },
    /// Find a functional separating two cone elements.
    Separate {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Compute the barycenter of a valuation on a cone.
    Barycenter {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Work inside the upper powercone.
    Powercone {
        #[command(subcommand)]
        action: PowerconeAction,
    },
    /// Shorthand for `powercone jia`.
    Jia(JiaArgs),
    /// Check the valuation monad laws on seeded samples.
    MonadLaws {
        #[arg(long)]
        poset: PathBuf,
        /// Also flatten this nested valuation file and report the mixture.
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Check the Eilenberg-Moore squares of the barycenter map.
    AlgebraCheck {
        #[arg(long)]
        cone: PathBuf,
    },
    /// Sweep a weight grid and verify barycenter uniqueness.
    Sweep {
        #[arg(long)]
        cone: PathBuf,
        /// Comma-separated weights, e.g. `0,1/2,1,2`.
        #[arg(long, default_value = "0,1/2,1,2")]
        grid: String,
    },
    /// Generate a seeded random lattice in the poset file format.
    RandomLattice {
        #[arg(long)]
        size: usize,
    },
}

#[derive(Subcommand)]
enum PosetAction {
    /// Validate the file and summarize the order.
    Check { file: PathBuf },
    /// List every open (upward-closed) set in canonical order.
    Opens { file: PathBuf },
}

#[derive(Subcommand)]
enum ValuationAction {
    /// Check strictness, monotonicity and modularity of the induced table
    /// (or of an explicit table file).
    Check {
        file: PathBuf,
        #[arg(long)]
        poset: Option<PathBuf>,
    },
    /// Recover the weights of a table by inversion (weights files round-trip).
    Weights {
        file: PathBuf,
        #[arg(long)]
        poset: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConeAction {
    /// Verify the cone file is a lattice and satisfies the cone axioms.
    Check { file: PathBuf },
    /// List the dual cone: one 0/inf functional per element.
    Dual { file: PathBuf },
}

#[derive(Subcommand)]
enum PowerconeAction {
    /// List the powercone elements in canonical order.
    Enumerate {
        #[arg(long)]
        cone: PathBuf,
    },
    /// Test upsets for principality by additivity of minimization.
    Jia(JiaArgs),
}

#[derive(Args, Clone)]
struct JiaArgs {
    #[arg(long)]
    cone: PathBuf,
    /// Test every nonempty upset.
    #[arg(long, conflicts_with = "up")]
    all: bool,
    /// Test the upward closure of these comma-separated elements.
    #[arg(long)]
    up: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Method {
    #[value(name = "support-sup")]
    SupportSup,
    Pipeline,
    Both,
}

/// The result document every verb produces.
#[derive(Serialize)]
struct Report {
    verb: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<Value>,
    witnesses: Vec<Value>,
    stats: BTreeMap<String, u64>,
}

impl Report {
    fn pass(verb: &str) -> Self {
        Report {
            verb: verb.to_string(),
            status: "pass",
            result: None,
            witnesses: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    fn with_result(mut self, value: Value) -> Self {
        self.result = Some(value);
        self
    }

    fn with_stat(mut self, key: &str, value: u64) -> Self {
        self.stats.insert(key.to_string(), value);
        self
    }

    fn fail(mut self, witness: Value) -> Self {
        self.status = "fail";
        self.witnesses.push(witness);
        self
    }

    /// Folds a law report in: failures become witnesses.
    fn absorb(mut self, law_report: &LawReport) -> Self {
        self.stats
            .entry("checks".to_string())
            .and_modify(|c| *c += law_report.checks as u64)
            .or_insert(law_report.checks as u64);
        if !law_report.passed() {
            self.status = "fail";
            for failure in &law_report.failures {
                self.witnesses
                    .push(serde_json::to_value(failure).expect("failures serialize"));
            }
        }
        self
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let verb = verb_name(&cli.command);
    let started = Instant::now();
    match run(cli) {
        Ok(report) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("reports serialize")
                );
            } else {
                render_human(&report);
                eprintln!("elapsed: {:.2?}", started.elapsed());
            }
            if report.status == "pass" {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            if json {
                let doc = json!({
                    "verb": verb,
                    "status": "error",
                    "message": err.to_string(),
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("errors serialize")
                );
            }
            ExitCode::from(2)
        }
    }
}

fn verb_name(command: &Command) -> &'static str {
    match command {
        Command::Poset { .. } => "poset",
        Command::Valuation { .. } => "valuation",
        Command::StochasticLeq { .. } => "stochastic-leq",
        Command::Integrate { .. } => "integrate",
        Command::Cone { .. } => "cone",
        Command::Separate { .. } => "separate",
        Command::Barycenter { .. } => "barycenter",
        Command::Powercone { .. } | Command::Jia(_) => "powercone",
        Command::MonadLaws { .. } => "monad-laws",
        Command::AlgebraCheck { .. } => "algebra-check",
        Command::Sweep { .. } => "sweep",
        Command::RandomLattice { .. } => "random-lattice",
    }
}

fn render_human(report: &Report) {
    println!("{} {}", report.verb, report.status);
    if let Some(result) = &report.result {
        println!("{}", serde_json::to_string_pretty(result).expect("results serialize"));
    }
    for witness in &report.witnesses {
        println!("witness: {witness}");
    }
    for (key, value) in &report.stats {
        println!("{key}: {value}");
    }
}

fn load_cone(path: &Path) -> Result<Arc<SemilatticeCone>> {
    let poset = files::load_poset(path)?;
    Ok(Arc::new(SemilatticeCone::new(poset)?))
}

fn upset_names(poset: &FinitePoset, u: UpSet) -> Value {
    Value::Array(
        u.members()
            .iter()
            .map(|x| Value::String(poset.name(x).to_string()))
            .collect(),
    )
}

fn parse_grid(text: &str) -> Result<Vec<ExtRat>> {
    text.split(',')
        .map(|part| part.trim().parse::<ExtRat>())
        .collect()
}

/// Documents can be a weights file or an explicit table file; look at the
/// top-level key to decide.
fn is_table_document(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        file: path.display().to_string(),
        message: e.to_string(),
    })?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
        file: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(doc.get("table").is_some())
}

fn run(cli: Cli) -> Result<Report> {
    let upset_bound = cli.max_size.unwrap_or(DEFAULT_UPSET_BOUND);
    let spec = SampleSpec::new(cli.seed, cli.samples);
    match cli.command {
        Command::Poset { action } => match action {
            PosetAction::Check { file } => {
                let poset = files::load_poset(&file)?;
                let upsets = poset.enumerate_upsets_bounded(upset_bound)?;
                Ok(Report::pass("poset check")
                    .with_result(json!({
                        "elements": poset.len(),
                        "lattice": poset.is_lattice(),
                        "opens": upsets.len(),
                    }))
                    .with_stat("elements", poset.len() as u64))
            }
            PosetAction::Opens { file } => {
                let poset = files::load_poset(&file)?;
                let upsets = poset.enumerate_upsets_bounded(upset_bound)?;
                let listed: Vec<Value> =
                    upsets.iter().map(|&u| upset_names(&poset, u)).collect();
                Ok(Report::pass("poset opens")
                    .with_result(Value::Array(listed))
                    .with_stat("opens", upsets.len() as u64))
            }
        },

        Command::Valuation { action } => match action {
            ValuationAction::Check { file, poset } => {
                let ambient = poset.as_deref().map(files::load_poset).transpose()?;
                let table = if is_table_document(&file)? {
                    files::load_table(&file, ambient.as_ref())?
                } else {
                    files::load_valuation(&file, ambient.as_ref())?.to_table()?
                };
                Ok(Report::pass("valuation check").absorb(&table.check()))
            }
            ValuationAction::Weights { file, poset } => {
                let ambient = poset.as_deref().map(files::load_poset).transpose()?;
                let table = if is_table_document(&file)? {
                    files::load_table(&file, ambient.as_ref())?
                } else {
                    files::load_valuation(&file, ambient.as_ref())?.to_table()?
                };
                match table.to_weights() {
                    Ok(v) => Ok(Report::pass("valuation weights")
                        .with_result(files::valuation_to_json(&v))),
                    Err(Error::NegativeWeight { reason }) => Ok(Report::pass(
                        "valuation weights",
                    )
                    .fail(json!({"law": "induced by nonnegative weights", "witness": reason}))),
                    Err(other) => Err(other),
                }
            }
        },

        Command::StochasticLeq { mu, nu, poset } => {
            let ambient = poset.as_deref().map(files::load_poset).transpose()?;
            let mu_v = files::load_valuation(&mu, ambient.as_ref())?;
            let nu_v = files::load_valuation(&nu, Some(mu_v.poset()))?;
            let report = Report::pass("stochastic-leq");
            match mu_v.stochastic_leq_witness(&nu_v)? {
                None => Ok(report.with_result(json!({"leq": true}))),
                Some(witness) => Ok(report.with_result(json!({"leq": false})).fail(json!({
                    "law": "mu(U) <= nu(U) on every open",
                    "witness": {
                        "open": upset_names(mu_v.poset(), witness),
                        "mu": mu_v.evaluate(witness).to_string(),
                        "nu": nu_v.evaluate(witness).to_string(),
                    },
                }))),
            }
        }

        Command::Integrate { nu, function, poset } => {
            let ambient = poset.as_deref().map(files::load_poset).transpose()?;
            let nu_v = files::load_valuation(&nu, ambient.as_ref())?;
            let h = files::load_function(&function, Some(nu_v.poset()))?;
            let value = nu_v.integrate(&h);
            Ok(Report::pass("integrate").with_result(json!({"integral": value.to_string()})))
        }

        Command::Cone { action } => match action {
            ConeAction::Check { file } => {
                let poset = files::load_poset(&file)?;
                match SemilatticeCone::new(poset) {
                    Err(Error::NotLattice { reason }) => Ok(Report::pass("cone check")
                        .fail(json!({"law": "the carrier is a lattice", "witness": reason}))),
                    Err(other) => Err(other),
                    Ok(cone) => {
                        let samples = vec![
                            (ExtRat::ratio(1, 2), ExtRat::ratio(1, 3)),
                            (ExtRat::from_integer(5), ExtRat::ratio(7, 2)),
                        ];
                        Ok(Report::pass("cone check")
                            .absorb(&check_cone_axioms(&cone, &samples)))
                    }
                }
            }
            ConeAction::Dual { file } => {
                let cone = load_cone(&file)?;
                let lattice = cone.lattice();
                let functionals: Vec<Value> = dual_cone_enumerate(&cone)
                    .iter()
                    .map(|d| {
                        let table: BTreeMap<String, String> = lattice
                            .elements()
                            .map(|x| (lattice.name(x).to_string(), d.apply(x).to_string()))
                            .collect();
                        json!({"anchor": lattice.name(d.anchor()), "values": table})
                    })
                    .collect();
                Ok(Report::pass("cone dual")
                    .with_stat("functionals", functionals.len() as u64)
                    .with_result(Value::Array(functionals)))
            }
        },

        Command::Separate { cone, x, y } => {
            let cone = load_cone(&cone)?;
            let lattice = cone.lattice();
            let x_i = lattice.index_of(&x)?;
            let y_i = lattice.index_of(&y)?;
            match linear_separation_witness(&cone, x_i, y_i) {
                Ok(functional) => Ok(Report::pass("separate").with_result(json!({
                    "anchor": lattice.name(functional.anchor()),
                    "at_x": functional.apply(x_i).to_string(),
                    "at_y": functional.apply(y_i).to_string(),
                }))),
                Err(Error::NotSeparable { x, y }) => {
                    Ok(Report::pass("separate").fail(json!({
                        "law": "x does not dominate y",
                        "witness": format!("`{y}` <= `{x}`, so every functional satisfies L(y) <= L(x)"),
                    })))
                }
                Err(other) => Err(other),
            }
        }

        Command::Barycenter { cone, nu, method } => {
            let cone = load_cone(&cone)?;
            let nu_v = files::load_valuation(&nu, Some(cone.lattice()))?;
            let mut result = serde_json::Map::new();
            if method != Method::Pipeline {
                let closed = barycenter_support_sup(&cone, &nu_v);
                result.insert(
                    "support-sup".into(),
                    Value::String(cone.lattice().name(closed).into()),
                );
            }
            if method != Method::SupportSup {
                let smyth = SmythCone::with_bound(
                    cone.clone(),
                    cli.max_size.unwrap_or(conelab::powercone::DEFAULT_SMYTH_BOUND),
                )?;
                match pipeline_barycenter_with(&smyth, &nu_v) {
                    Ok((beta, trace)) => {
                        result.insert(
                            "pipeline".into(),
                            Value::String(cone.lattice().name(beta).into()),
                        );
                        if cli.trace {
                            result.insert("trace".into(), trace.to_json());
                        }
                    }
                    Err(Error::NonPrincipal { set, trace }) => {
                        return Ok(Report::pass("barycenter").fail(json!({
                            "law": "the powercone barycenter is principal",
                            "witness": {"set": set, "trace": trace.to_json()},
                        })));
                    }
                    Err(other) => return Err(other),
                }
            }
            if method == Method::Both {
                let agree = result.get("support-sup") == result.get("pipeline");
                result.insert("agree".into(), Value::Bool(agree));
                if !agree {
                    return Ok(Report::pass("barycenter")
                        .with_result(Value::Object(result))
                        .fail(json!({
                            "law": "both methods agree",
                            "witness": "support-sup and pipeline disagree",
                        })));
                }
            }
            Ok(Report::pass("barycenter").with_result(Value::Object(result)))
        }

        Command::Powercone { action } => match action {
            PowerconeAction::Enumerate { cone } => {
                let cone = load_cone(&cone)?;
                let smyth = SmythCone::with_bound(
                    cone.clone(),
                    cli.max_size.unwrap_or(conelab::powercone::DEFAULT_SMYTH_BOUND),
                )?;
                let lattice = cone.lattice();
                let elements: Vec<Value> = (0..smyth.len())
                    .map(|i| {
                        upset_names(
                            lattice,
                            lattice.upset(smyth.element_set(i)).expect("upsets"),
                        )
                    })
                    .collect();
                Ok(Report::pass("powercone enumerate")
                    .with_stat("elements", elements.len() as u64)
                    .with_result(Value::Array(elements)))
            }
            PowerconeAction::Jia(args) => run_jia(args),
        },
        Command::Jia(args) => run_jia(args),

        Command::MonadLaws { poset, phi } => {
            let poset = files::load_poset(&poset)?;
            let mut report = Report::pass("monad-laws").absorb(&check_monad_laws(&poset, &spec));
            if let Some(phi) = phi {
                let nested = files::load_nested(&phi, Some(&poset))?;
                report = report.with_result(json!({
                    "multiply": files::valuation_to_json(&nested.multiply()),
                }));
            }
            Ok(report)
        }

        Command::AlgebraCheck { cone } => {
            let cone = load_cone(&cone)?;
            let beta = AlgebraMap::support_sup(cone);
            Ok(Report::pass("algebra-check").absorb(&check_algebra(&beta, &spec)))
        }

        Command::Sweep { cone, grid } => {
            let cone = load_cone(&cone)?;
            let grid = parse_grid(&grid)?;
            let (report, swept) = uniqueness_sweep(&cone, &grid)?;
            Ok(Report::pass("sweep")
                .with_stat("valuations", swept as u64)
                .absorb(&report))
        }

        Command::RandomLattice { size } => {
            let lattice = conelab::random::random_lattice(size, cli.seed)?;
            Ok(Report::pass("random-lattice")
                .with_stat("elements", lattice.len() as u64)
                .with_result(files::poset_to_json(&lattice)))
        }
    }
}

fn run_jia(args: JiaArgs) -> Result<Report> {
    let cone = load_cone(&args.cone)?;
    let lattice = cone.lattice();
    let targets: Vec<UpSet> = if args.all {
        lattice
            .enumerate_upsets()?
            .into_iter()
            .filter(|u| !u.is_empty())
            .collect()
    } else {
        let spec = args.up.ok_or_else(|| Error::Parse {
            file: args.cone.display().to_string(),
            message: "pass --all or --up <elements>".into(),
        })?;
        let mut generators = ElemSet::EMPTY;
        for name in spec.split(',') {
            generators.insert(lattice.index_of(name.trim())?);
        }
        if generators.is_empty() {
            return Err(Error::Parse {
                file: args.cone.display().to_string(),
                message: "--up needs at least one element".into(),
            });
        }
        vec![lattice.up_closure(generators)]
    };

    let mut verdicts = Vec::new();
    let mut principal = 0u64;
    let mut non_linear = 0u64;
    for q in &targets {
        let verdict = match principality_check(&cone, q) {
            PrincipalityVerdict::Principal { witness } => {
                principal += 1;
                json!({
                    "upset": upset_names(lattice, *q),
                    "verdict": "principal",
                    "witness": lattice.name(witness),
                })
            }
            PrincipalityVerdict::NotLinear {
                lhs_anchor,
                rhs_anchor,
                min_of_sum,
                sum_of_mins,
            } => {
                non_linear += 1;
                json!({
                    "upset": upset_names(lattice, *q),
                    "verdict": "not_linear",
                    "certificate": {
                        "anchors": [lattice.name(lhs_anchor), lattice.name(rhs_anchor)],
                        "min_of_sum": min_of_sum.to_string(),
                        "sum_of_mins": sum_of_mins.to_string(),
                    },
                })
            }
        };
        verdicts.push(verdict);
    }
    Ok(Report::pass("powercone jia")
        .with_stat("principal", principal)
        .with_stat("not_linear", non_linear)
        .with_result(Value::Array(verdicts)))
}
