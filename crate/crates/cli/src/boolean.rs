//! Commands over CNFs, NNF circuits and SDDs.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use num_rational::BigRational;
use tc_core::analysis::{self, Method};
use tc_core::lit::parse_var_list;
use tc_core::queries;
use tc_core::sdd::{parse_sdd, Op as SddOp};
use tc_core::weights::rational_to_f64;
use tc_core::{parse_cnf, parse_nnf, parse_vtree, parse_weights, Assignment, NnfCircuit, PropertyReport, SddManager, Var, WeightMap};

use crate::{emit, read, Failure, Op, Outcome, Trust};

#[derive(Clone, Copy, ValueEnum)]
pub enum HeuristicArg {
    MostOccurring,
    LowestIndex,
}

#[derive(Args)]
pub struct CompileArgs {
    #[arg(long)]
    cnf: PathBuf,
    /// Variables (names or 1-based indices) branched on first.
    #[arg(long)]
    x_first: Option<String>,
    #[arg(long, value_enum, default_value = "most-occurring")]
    heuristic: HeuristicArg,
    /// Disable the component cache.
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn compile(a: CompileArgs) -> Outcome {
    let f = parse_cnf(&read(&a.cnf)?)?;
    let mut opts = tc_core::CompileOptions {
        heuristic: match a.heuristic {
            HeuristicArg::MostOccurring => tc_core::Heuristic::MostOccurring,
            HeuristicArg::LowestIndex => tc_core::Heuristic::LowestIndex,
        },
        ..Default::default()
    };
    if a.no_cache {
        opts.cache_capacity = 0;
    }
    if let Some(x) = &a.x_first {
        opts.x_first = Some(parse_var_list(x, f.names.as_deref(), f.var_count)?);
    }
    let c = tc_core::compile(&f, &opts);
    log::info!("compiled {} clauses into {} nodes, {} edges", f.clauses.len(), c.len(), c.edge_count());
    emit(a.out.as_ref(), &c.to_text())
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    nnf: PathBuf,
    /// Comma-separated: decomposable, deterministic, smooth, decision,
    /// structured, x-constrained.
    #[arg(long)]
    props: String,
    /// Vtree for `structured`.
    #[arg(long)]
    vtree: Option<PathBuf>,
    /// Variables for `x-constrained`.
    #[arg(long)]
    x: Option<String>,
    /// Judge smoothness only over satisfiable children.
    #[arg(long)]
    exclude_unsat: bool,
    #[arg(long, default_value_t = tc_core::DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
}

pub fn check(a: CheckArgs) -> Outcome {
    let c = parse_nnf(&read(&a.nnf)?)?;
    let mut failed = Vec::new();
    for prop in a.props.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let report = match prop {
            "decomposable" => analysis::check_decomposability(&c),
            "smooth" => analysis::check_smoothness(&c, a.exclude_unsat)?,
            "decision" => analysis::check_decision(&c),
            "deterministic" => {
                if analysis::check_decision(&c).holds() {
                    PropertyReport::new("deterministic", Method::Structural)
                } else {
                    analysis::check_determinism_exhaustive(&c, a.oracle_cap)?
                }
            }
            "structured" => {
                let path = a.vtree.as_ref().ok_or_else(|| Failure::Usage("`structured` needs --vtree".into()))?;
                analysis::check_structured(&c, &parse_vtree(&read(path)?)?)
            }
            "x-constrained" => {
                let x = a.x.as_ref().ok_or_else(|| Failure::Usage("`x-constrained` needs --x".into()))?;
                let x = parse_var_list(x, c.names.as_deref(), c.var_count)?;
                let mut r = PropertyReport::new("x-constrained", Method::Structural);
                if !analysis::check_x_constrained(&c, &x)? {
                    r.witnesses.push(analysis::Witness {
                        node: c.root(),
                        detail: "an X decision sits below a non-X decision".into(),
                    });
                }
                r
            }
            other => return Err(Failure::Usage(format!("unknown property `{other}`"))),
        };
        log::info!("{} checked by {:?}", report.name, report.method);
        print!("{report}");
        if !report.holds() {
            failed.push(report.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(format!("property fails: {}", failed.join(", "))))
    }
}

#[derive(Args)]
pub struct SmoothArgs {
    #[arg(long)]
    nnf: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn smooth(a: SmoothArgs) -> Outcome {
    let c = parse_nnf(&read(&a.nnf)?)?;
    emit(a.out.as_ref(), &analysis::smooth(&c).to_text())
}

fn evidence(c: &NnfCircuit, e: Option<&String>) -> Result<Assignment, Failure> {
    Ok(match e {
        Some(s) => Assignment::parse_evidence(s, c.names.as_deref(), c.var_count)?,
        None => Assignment::new(),
    })
}

pub fn weights(path: Option<&PathBuf>, var_count: usize) -> Result<WeightMap<BigRational>, Failure> {
    match path {
        Some(p) => {
            let (w, missing) = parse_weights(&read(p)?, var_count)?;
            if !missing.is_empty() {
                log::info!("{} literals default to weight 1", missing.len());
            }
            Ok(w)
        }
        None => Ok(WeightMap::unit(var_count)),
    }
}

pub fn number(r: &BigRational, exact: bool) -> String {
    if exact {
        r.to_string()
    } else {
        rational_to_f64(r).to_string()
    }
}

pub fn var_name(names: Option<&[String]>, v: Var) -> String {
    names.and_then(|n| n.get(v.pos()).cloned()).unwrap_or_else(|| v.index().to_string())
}

#[derive(Args)]
pub struct CountArgs {
    #[arg(long)]
    nnf: PathBuf,
    /// Evidence such as `A=1,K=0`.
    #[arg(long)]
    evidence: Option<String>,
    /// Weigh models, as `wmc` does.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    trust: Trust,
}

pub fn count(a: CountArgs) -> Outcome {
    if a.weights.is_some() {
        let CountArgs { nnf, evidence, weights, exact, trust } = a;
        return wmc(WmcArgs { nnf, weights, evidence, exact, trust });
    }
    let c = parse_nnf(&read(&a.nnf)?)?;
    let e = evidence(&c, a.evidence.as_ref())?;
    println!("{}", queries::conditioned_count(&c, &e, &a.trust.options())?);
    Ok(())
}

#[derive(Args)]
pub struct WmcArgs {
    #[arg(long)]
    nnf: PathBuf,
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    evidence: Option<String>,
    /// Print the exact rational instead of a float.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    trust: Trust,
}

pub fn wmc(a: WmcArgs) -> Outcome {
    let c = parse_nnf(&read(&a.nnf)?)?;
    let w = weights(a.weights.as_ref(), c.var_count)?;
    let e = evidence(&c, a.evidence.as_ref())?;
    println!("{}", number(&queries::weighted_count(&c, &w, &e, &a.trust.options())?, a.exact));
    Ok(())
}

#[derive(Args)]
pub struct EmajsatArgs {
    #[arg(long)]
    nnf: PathBuf,
    /// The maximized variables.
    #[arg(long)]
    x: String,
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    exact: bool,
}

pub fn emajsat(a: EmajsatArgs) -> Outcome {
    let c = parse_nnf(&read(&a.nnf)?)?;
    let x = parse_var_list(&a.x, c.names.as_deref(), c.var_count)?;
    let w = weights(a.weights.as_ref(), c.var_count)?;
    let (value, witness) = queries::e_majsat(&c, &x, &w)?;
    let names = c.names.as_deref();
    let shown: Vec<String> = x
        .iter()
        .filter_map(|&v| witness.get(v).map(|b| format!("{}={}", var_name(names, v), u8::from(b))))
        .collect();
    println!("{}", shown.join(","));
    println!("{}", number(&value, a.exact));
    Ok(())
}

#[derive(Subcommand)]
pub enum SddCommand {
    /// Compile a CNF bottom-up under a vtree.
    Compile {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        vtree: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conjoin or disjoin two SDDs over the same vtree.
    Apply {
        #[arg(long)]
        vtree: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an SDD as an NNF circuit.
    ExportNnf {
        #[arg(long)]
        vtree: PathBuf,
        #[arg(long)]
        sdd: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an SDD over a right-linear vtree as an OBDD.
    ExportObdd {
        #[arg(long)]
        vtree: PathBuf,
        #[arg(long)]
        sdd: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn manager(vtree: &PathBuf) -> Result<SddManager, Failure> {
    Ok(SddManager::new(parse_vtree(&read(vtree)?)?))
}

pub fn sdd(cmd: SddCommand) -> Outcome {
    match cmd {
        SddCommand::Compile { cnf, vtree, out } => {
            let mut m = manager(&vtree)?;
            let root = m.compile_cnf(&parse_cnf(&read(&cnf)?)?)?;
            log::info!("{} SDD nodes", m.reachable(root).len());
            emit(out.as_ref(), &m.to_text(root))
        }
        SddCommand::Apply { vtree, left, right, op, out } => {
            let mut m = manager(&vtree)?;
            let l = parse_sdd(&mut m, &read(&left)?, false)?.root;
            let r = parse_sdd(&mut m, &read(&right)?, false)?.root;
            let root = m.apply(l, r, if op == Op::And { SddOp::And } else { SddOp::Or });
            emit(out.as_ref(), &m.to_text(root))
        }
        SddCommand::ExportNnf { vtree, sdd, out } => {
            let mut m = manager(&vtree)?;
            let root = parse_sdd(&mut m, &read(&sdd)?, false)?.root;
            emit(out.as_ref(), &m.to_nnf(root).to_text())
        }
        SddCommand::ExportObdd { vtree, sdd, out } => {
            let mut m = manager(&vtree)?;
            let root = parse_sdd(&mut m, &read(&sdd)?, false)?.root;
            emit(out.as_ref(), &m.to_obdd(root)?.to_text())
        }
    }
}
