//! `unimitl` command line. Exit codes: 0 success or a true verdict, 1 a false
//! verdict (false, reject, UNSAT, inequivalent), 2 usage or input error,
//! 3 inconclusive search (run budget exhausted).

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use unimitl::analysis::{
    is_satisfiable, sampled_equivalence, size_report, SamplerConfig, SearchBounds, Side, Verdict,
};
use unimitl::automaton::{Po2dta, Verdict as RunVerdict};
use unimitl::bcompile::compile_bounded;
use unimitl::benchgen::TilingInstance;
use unimitl::extract::extract_formula;
use unimitl::formula::{classify, modal_dag_size, parse, parse_with_alphabet, NormalForm};
use unimitl::lbcompile::compile_lb;
use unimitl::oracle::holds_at;
use unimitl::word::{parse_rational, Alphabet, Symbol, TimedWord};

#[derive(Parser)]
#[command(
    name = "unimitl",
    version,
    about = "Unary MITL over finite timed words"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Comma-separated alphabet; defaults to the atoms of the input.
    #[arg(long, global = true, value_delimiter = ',')]
    alphabet: Option<Vec<String>>,
    /// Search bounds `N,g,Tmax` for `sat`.
    #[arg(long, global = true)]
    bounds: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompileFragment {
    Lb,
    Bounded,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFamily {
    Expspace,
    Nexptime,
    Pspace,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and pretty-print a formula.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Print the normal form.
    Normalize {
        #[arg(long)]
        formula: String,
    },
    /// Report the most specific syntactic fragment.
    Classify {
        #[arg(long)]
        formula: String,
    },
    /// Evaluate a formula at a position of a word.
    Eval {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 0)]
        pos: usize,
    },
    /// Compile a formula to a po2DTA (JSON, or DOT with `--dot`).
    Compile {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum)]
        fragment: CompileFragment,
        #[arg(long)]
        dot: bool,
    },
    /// Extract an equivalent formula over the end-marked alphabet.
    Extract {
        #[arg(long)]
        automaton: PathBuf,
    },
    /// Run an automaton on a word.
    Run {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        trace: bool,
    },
    /// Bounded satisfiability check.
    Sat {
        #[arg(long)]
        formula: String,
        /// Give up after this many automaton runs.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Sampled equivalence of two sides, each a formula or `@automaton.json`.
    Equiv {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a tiling-reduction formula from an instance file.
    Bench {
        #[arg(long, value_enum)]
        family: BenchFamily,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Formula and automaton size metrics.
    SizeReport {
        #[arg(long)]
        formula: String,
    },
}

/// What the process reports through its exit code.
enum Status {
    Yes,
    No,
    Inconclusive,
}

impl Status {
    fn of(b: bool) -> Self {
        if b {
            Status::Yes
        } else {
            Status::No
        }
    }

    fn code(&self) -> u8 {
        match self {
            Status::Yes => 0,
            Status::No => 1,
            Status::Inconclusive => 3,
        }
    }
}

type CliResult = Result<(Status, String), String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

struct Ctx {
    alphabet: Option<Alphabet>,
    bounds: Option<String>,
    json: bool,
}

impl Ctx {
    fn formula(&self, text: &str) -> Result<unimitl::Formula, String> {
        match &self.alphabet {
            Some(sigma) => parse_with_alphabet(text, sigma).map_err(err),
            None => parse(text).map_err(err),
        }
    }

    fn sigma_for(&self, phi: &unimitl::Formula) -> Alphabet {
        self.alphabet.clone().unwrap_or_else(|| phi.atoms())
    }

    fn emit(&self, text: String, doc: Value) -> String {
        if self.json {
            serde_json::to_string_pretty(&doc).expect("json values serialise")
        } else {
            text
        }
    }

    fn search_bounds(&self, sigma: &Alphabet) -> Result<Option<SearchBounds>, String> {
        let Some(spec) = &self.bounds else {
            return Ok(None);
        };
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        let [n, g, t] = parts[..] else {
            return Err(format!("--bounds expects N,g,Tmax, got `{spec}`"));
        };
        let max_len = n.parse().map_err(|_| format!("bad N `{n}`"))?;
        let grid: i64 = g.parse().map_err(|_| format!("bad g `{g}`"))?;
        if grid < 1 {
            return Err("grid must be positive".into());
        }
        let horizon = parse_rational(t).map_err(|e| format!("bad Tmax `{t}`: {e}"))?;
        Ok(Some(SearchBounds {
            max_len,
            grid,
            horizon,
            alphabet: sigma.clone(),
            budget: None,
        }))
    }
}

fn load_automaton(path: &PathBuf) -> Result<Po2dta, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Po2dta::from_json(&text).map_err(err)
}

fn word(text: &str) -> Result<TimedWord, String> {
    TimedWord::parse(text).map_err(err)
}

fn dispatch(cmd: Command, ctx: &Ctx) -> CliResult {
    match cmd {
        Command::Parse { formula } => {
            let phi = ctx.formula(&formula)?;
            let doc = json!({
                "formula": phi.to_string(),
                "atoms": phi.atoms().iter().map(Symbol::as_str).collect::<Vec<_>>(),
                "dag_nodes": phi.dag_nodes(),
            });
            Ok((Status::Yes, ctx.emit(phi.to_string(), doc)))
        }
        Command::Normalize { formula } => {
            let phi = ctx.formula(&formula)?;
            let nf = NormalForm::new(&phi, &ctx.sigma_for(&phi));
            let doc = json!({
                "normal_form": nf.to_string(),
                "formula": nf.to_formula().to_string(),
                "modals": nf.modals().len(),
            });
            Ok((Status::Yes, ctx.emit(nf.to_string(), doc)))
        }
        Command::Classify { formula } => {
            let tag = classify(&ctx.formula(&formula)?);
            let doc = json!({
                "fragment": format!("{:?}", tag.fragment),
                "name": tag.to_string(),
                "future_only": tag.future_only,
            });
            Ok((Status::Yes, ctx.emit(tag.to_string(), doc)))
        }
        Command::Eval {
            formula,
            word: w,
            pos,
        } => {
            let phi = ctx.formula(&formula)?;
            let w = word(&w)?;
            let v = holds_at(&w, pos, &phi).map_err(err)?;
            let doc = json!({ "value": v, "pos": pos });
            Ok((Status::of(v), ctx.emit(v.to_string(), doc)))
        }
        Command::Compile {
            formula,
            fragment,
            dot,
        } => {
            let phi = ctx.formula(&formula)?;
            let sigma = ctx.sigma_for(&phi);
            let a = match fragment {
                CompileFragment::Lb => compile_lb(&phi, &sigma),
                CompileFragment::Bounded => compile_bounded(&phi, &sigma),
            }
            .map_err(err)?;
            let out = if dot { a.to_dot() } else { a.to_json() };
            Ok((Status::Yes, out))
        }
        Command::Extract { automaton } => {
            let phi = extract_formula(&load_automaton(&automaton)?);
            let doc = json!({ "formula": phi.to_string(), "fragment": classify(&phi).to_string() });
            Ok((Status::Yes, ctx.emit(phi.to_string(), doc)))
        }
        Command::Run {
            automaton,
            word: w,
            trace,
        } => run(&load_automaton(&automaton)?, &word(&w)?, trace, ctx),
        Command::Sat { formula, budget } => {
            let phi = ctx.formula(&formula)?;
            let sigma = ctx.sigma_for(&phi);
            let bounds = ctx
                .search_bounds(&sigma)?
                .map(|b| SearchBounds { budget, ..b });
            let bounds = match (bounds, budget) {
                (None, Some(_)) => {
                    let mut full = sigma.clone();
                    full.extend(phi.atoms());
                    let a = unimitl::analysis::compile(&phi, &full).map_err(err)?;
                    Some(SearchBounds {
                        budget,
                        ..SearchBounds::defaults_for(&a)
                    })
                }
                (b, _) => b,
            };
            let out = is_satisfiable(&phi, &sigma, bounds).map_err(err)?;
            let status = match out.verdict {
                Verdict::Sat { .. } => Status::Yes,
                Verdict::UnsatWithinBounds => Status::No,
                Verdict::Unknown => Status::Inconclusive,
            };
            let text = match out.verdict.witness() {
                Some(w) => format!("{} {w}", out.verdict.label()),
                None => out.verdict.label().to_string(),
            };
            Ok((status, ctx.emit(text, out.to_json())))
        }
        Command::Equiv {
            lhs,
            rhs,
            samples,
            seed,
        } => {
            let side = |s: &str| -> Result<Side, String> {
                match s.strip_prefix('@') {
                    Some(path) => Ok(Side::Automaton(load_automaton(&PathBuf::from(path))?)),
                    None => Ok(Side::Formula(ctx.formula(s)?)),
                }
            };
            let cfg = SamplerConfig {
                alphabet: ctx.alphabet.clone(),
                samples,
                seed,
                ..SamplerConfig::default()
            };
            let report = sampled_equivalence(&side(&lhs)?, &side(&rhs)?, &cfg).map_err(err)?;
            let text = match &report.counterexample {
                None => format!("equivalent on {} sampled words", report.checked),
                Some(cx) => format!("inequivalent: {} (lhs {}, rhs {})", cx.word, cx.lhs, cx.rhs),
            };
            let doc = serde_json::to_value(&report).map_err(err)?;
            Ok((Status::of(report.passed()), ctx.emit(text, doc)))
        }
        Command::Bench { family, instance } => {
            let text = fs::read_to_string(&instance)
                .map_err(|e| format!("{}: {e}", instance.display()))?;
            let inst = bench_instance(&text, family)?;
            let phi = inst.formula().map_err(err)?;
            let size = modal_dag_size(&phi);
            let doc = json!({
                "formula": phi.to_string(),
                "fragment": classify(&phi).to_string(),
                "modal_dag_size": size.total,
                "alphabet": inst.alphabet().iter().map(Symbol::as_str).collect::<Vec<_>>(),
            });
            Ok((Status::Yes, ctx.emit(phi.to_string(), doc)))
        }
        Command::SizeReport { formula } => {
            let phi = ctx.formula(&formula)?;
            let report = size_report(&phi, &ctx.sigma_for(&phi)).map_err(err)?;
            let doc = serde_json::to_value(&report).map_err(err)?;
            let text = serde_json::to_string_pretty(&doc).map_err(err)?;
            Ok((Status::Yes, text))
        }
    }
}

/// The instance file's `family` tag must agree with `--family`; it is
/// filled in when missing.
fn bench_instance(text: &str, family: BenchFamily) -> Result<TilingInstance, String> {
    let mut doc: Value = serde_json::from_str(text).map_err(err)?;
    let tag = match family {
        BenchFamily::Expspace => "expspace",
        BenchFamily::Nexptime => "nexptime",
        BenchFamily::Pspace => "pspace",
    };
    let obj = doc
        .as_object_mut()
        .ok_or("instance file must hold a JSON object")?;
    match obj.get("family").and_then(Value::as_str) {
        Some(found) if found != tag => {
            return Err(format!("instance is for `{found}`, not `{tag}`"));
        }
        _ => {
            obj.insert("family".into(), tag.into());
        }
    }
    TilingInstance::from_json(&doc.to_string()).map_err(err)
}

fn run(a: &Po2dta, w: &TimedWord, trace: bool, ctx: &Ctx) -> CliResult {
    let res = a.run(w, a.initial_valuation(), 1).map_err(err)?;
    let accepted = match res.verdict {
        RunVerdict::Accept => true,
        RunVerdict::Reject => false,
        RunVerdict::FellOff => return Err("head fell off the word".into()),
    };
    let ext = w.extended();
    let steps: Vec<Value> = res
        .trace
        .iter()
        .map(|c| {
            json!({
                "state": a.state(c.state).name,
                "head": c.head,
                "letter": ext.event(c.head).as_str(),
                "time": ext.stamp(c.head).to_string(),
                "clocks": a.clocks().iter().zip(&c.valuation)
                    .map(|(n, v)| (n.clone(), Value::from(v.to_string())))
                    .collect::<serde_json::Map<_, _>>(),
            })
        })
        .collect();
    let verdict = if accepted { "accept" } else { "reject" };
    let mut text = verdict.to_string();
    if trace {
        for s in &steps {
            let clocks: Vec<String> = s["clocks"]
                .as_object()
                .unwrap()
                .iter()
                .map(|(n, v)| format!("{n}={}", v.as_str().unwrap()))
                .collect();
            text += &format!(
                "\n  {} @{} ({}, {}) [{}]",
                s["state"].as_str().unwrap(),
                s["head"],
                s["letter"].as_str().unwrap(),
                s["time"].as_str().unwrap(),
                clocks.join(" ")
            );
        }
    }
    let mut doc = json!({ "verdict": verdict });
    if trace {
        doc["trace"] = Value::from(steps);
    }
    Ok((Status::of(accepted), ctx.emit(text, doc)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let ctx = Ctx {
        alphabet: cli
            .global
            .alphabet
            .map(|v| v.iter().map(|s| Symbol::new(s.trim())).collect()),
        bounds: cli.global.bounds,
        json: cli.global.format == Format::Json,
    };
    match dispatch(cli.command, &ctx) {
        Ok((status, out)) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout(), "{out}");
            ExitCode::from(status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
