//! Commands over arithmetic circuits, PSDDs and Bayesian networks. Every
//! command runs in floating point, or in exact rationals with `--exact`.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use num_rational::BigRational;
use tc_arith::ac::IndicatorSetting;
use tc_arith::bn::{compile_to_ac, evidence_probability, marginals};
use tc_arith::factor::{format_instantiation, parse_instantiation, DiscreteVar};
use tc_arith::{
    backprop, enumerate_complete_subcircuits, learn_ml_complete, mpe, parse_ac, parse_bn, parse_dataset, parse_psdd,
    soft_evidence, ArithmeticCircuit, Scalar, DEFAULT_ROW_CAP,
};
use tc_core::sdd::parse_sdd;
use tc_core::weights::parse_rational;
use tc_core::{parse_vtree, SddManager};

use crate::{emit, read, Failure, Outcome};

#[derive(Args)]
pub struct AcArgs {
    #[arg(long)]
    ac: PathBuf,
    /// Instantiation such as `A=a,B=~b`.
    #[arg(long)]
    evidence: Option<String>,
    /// Likelihoods, one `NAME w1 … wk` line per variable.
    #[arg(long)]
    soft: Option<PathBuf>,
    #[arg(long)]
    exact: bool,
    /// Row cap for the exhaustive determinism check.
    #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
    cap: u64,
}

#[derive(Subcommand)]
pub enum AcCommand {
    /// Evaluate under evidence (and likelihoods).
    Eval(AcArgs),
    /// Marginal of the evidence; with `--soft`, its probability given the
    /// soft evidence.
    Marginal(AcArgs),
    /// Most probable completion of the evidence and its value.
    Mpe(AcArgs),
    /// Every complete subcircuit, then their number.
    Subcircuits {
        #[command(flatten)]
        args: AcArgs,
        /// Maximum subcircuits per node.
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Partials of the root with respect to each indicator.
    Grad(AcArgs),
    /// Decomposability, smoothness and determinism reports.
    Check(AcArgs),
}

fn scalar<T: Scalar>(text: &str) -> Result<T, Failure> {
    parse_rational(text)
        .map(|r| T::from_rational(&r))
        .ok_or_else(|| Failure::Usage(format!("`{text}` is not a number")))
}

pub fn likelihoods<T: Scalar>(path: &PathBuf, vars: &[DiscreteVar]) -> Result<IndicatorSetting<T>, Failure> {
    let mut s: IndicatorSetting<T> = vars.iter().map(|d| vec![T::one(); d.k()]).collect();
    for (idx, raw) in read(path)?.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |m: String| Failure::Core(tc_core::Error::parse(idx + 1, m));
        let mut toks = line.split_whitespace();
        let name = toks.next().unwrap_or_default();
        let v = vars.iter().position(|d| d.name == name).ok_or_else(|| bad(format!("unknown variable `{name}`")))?;
        let ws: Vec<&str> = toks.collect();
        if ws.len() != vars[v].k() {
            return Err(bad(format!("`{name}` needs {} likelihoods", vars[v].k())));
        }
        for (x, w) in ws.iter().enumerate() {
            s[v][x] = parse_rational(w)
                .map(|r| T::from_rational(&r))
                .ok_or_else(|| bad(format!("bad likelihood `{w}`")))?;
        }
    }
    Ok(s)
}

/// Likelihoods (or ones) with the values `e` rules out set to zero.
fn setting<T: Scalar>(
    ac: &ArithmeticCircuit<T>,
    soft: Option<&PathBuf>,
    e: &[Option<usize>],
) -> Result<IndicatorSetting<T>, Failure> {
    let mut s = match soft {
        Some(p) => likelihoods(p, ac.vars())?,
        None => return Ok(ac.setting(e)),
    };
    for (row, x) in s.iter_mut().zip(e) {
        if let Some(x) = x {
            for (y, w) in row.iter_mut().enumerate() {
                if y != *x {
                    *w = T::zero();
                }
            }
        }
    }
    Ok(s)
}

fn inst(text: Option<&String>, vars: &[DiscreteVar]) -> Result<Vec<Option<usize>>, Failure> {
    Ok(match text {
        Some(t) => parse_instantiation(t, vars)?,
        None => vec![None; vars.len()],
    })
}

fn print_witness(x: &[usize], vars: &[DiscreteVar]) -> String {
    format_instantiation(&x.iter().map(|&v| Some(v)).collect::<Vec<_>>(), vars)
}

pub fn ac(cmd: AcCommand) -> Outcome {
    let exact = match &cmd {
        AcCommand::Eval(a) | AcCommand::Marginal(a) | AcCommand::Mpe(a) | AcCommand::Grad(a) | AcCommand::Check(a) => a.exact,
        AcCommand::Subcircuits { args, .. } => args.exact,
    };
    if exact {
        ac_in::<BigRational>(cmd)
    } else {
        ac_in::<f64>(cmd)
    }
}

fn ac_in<T: Scalar>(cmd: AcCommand) -> Outcome {
    let load = |a: &AcArgs| -> Result<(ArithmeticCircuit<T>, Vec<Option<usize>>), Failure> {
        let ac: ArithmeticCircuit<T> = parse_ac(&read(&a.ac)?)?;
        let e = inst(a.evidence.as_ref(), ac.vars())?;
        Ok((ac, e))
    };
    match cmd {
        AcCommand::Eval(a) => {
            let (ac, e) = load(&a)?;
            println!("{}", ac.evaluate_setting(&setting(&ac, a.soft.as_ref(), &e)?)?);
        }
        AcCommand::Marginal(a) => {
            let (ac, e) = load(&a)?;
            let v = match &a.soft {
                Some(p) => soft_evidence(&ac, &likelihoods(p, ac.vars())?, &e, a.cap)?,
                None => ac.marginal(&e)?,
            };
            println!("{v}");
        }
        AcCommand::Mpe(a) => {
            let (ac, e) = load(&a)?;
            let (v, x) = mpe(&ac, &e, a.cap)?;
            println!("{}", print_witness(&x, ac.vars()));
            println!("{v}");
        }
        AcCommand::Subcircuits { args, limit } => {
            let (ac, _) = load(&args)?;
            let subs = enumerate_complete_subcircuits(&ac, limit)?;
            for s in &subs {
                let term: Vec<String> =
                    s.term.iter().map(|&(v, x)| format!("{}={}", ac.vars()[v].name, ac.vars()[v].labels[x])).collect();
                println!("{}\t{}", s.coefficient, term.join(","));
            }
            println!("{}", subs.len());
        }
        AcCommand::Grad(a) => {
            let (ac, e) = load(&a)?;
            let g = backprop(&ac, &setting(&ac, a.soft.as_ref(), &e)?)?;
            for (v, row) in g.indicators(&ac).iter().enumerate() {
                for (x, d) in row.iter().enumerate() {
                    println!("{}={}\t{d}", ac.vars()[v].name, ac.vars()[v].labels[x]);
                }
            }
            println!("{}", g.value);
        }
        AcCommand::Check(a) => {
            let (ac, _) = load(&a)?;
            let p = ac.check_properties(a.cap)?;
            let mut failed = Vec::new();
            for r in p.all() {
                print!("{r}");
                if !r.holds() {
                    failed.push(r.name.clone());
                }
            }
            if !failed.is_empty() {
                return Err(Failure::Property(format!("property fails: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

#[derive(Subcommand)]
pub enum PsddCommand {
    /// Maximum-likelihood parameters for an SDD from complete data.
    Learn {
        #[arg(long)]
        vtree: PathBuf,
        #[arg(long)]
        sdd: PathBuf,
        /// CSV with one 0/1 column per variable and an optional count.
        #[arg(long)]
        data: PathBuf,
        /// Pseudo-count added to every feasible element.
        #[arg(long, default_value = "0")]
        alpha: String,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probability of one complete row.
    Eval {
        #[arg(long)]
        vtree: PathBuf,
        #[arg(long)]
        psdd: PathBuf,
        /// Values in variable order, such as `1,0,1`.
        #[arg(long)]
        row: String,
        #[arg(long)]
        exact: bool,
    },
}

fn row(text: &str, n: usize) -> Result<Vec<bool>, Failure> {
    let x: Vec<bool> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(Failure::Usage(format!("row value `{t}` is not 0 or 1"))),
        })
        .collect::<Result<_, _>>()?;
    if x.len() != n {
        return Err(Failure::Usage(format!("row has {} values, the PSDD has {n} variables", x.len())));
    }
    Ok(x)
}

pub fn psdd(cmd: PsddCommand) -> Outcome {
    match cmd {
        PsddCommand::Learn { exact: true, .. } | PsddCommand::Eval { exact: true, .. } => psdd_in::<BigRational>(cmd),
        _ => psdd_in::<f64>(cmd),
    }
}

fn psdd_in<T: Scalar>(cmd: PsddCommand) -> Outcome {
    match cmd {
        PsddCommand::Learn { vtree, sdd, data, alpha, out, .. } => {
            let mut m = SddManager::new(parse_vtree(&read(&vtree)?)?);
            let root = parse_sdd(&mut m, &read(&sdd)?, false)?.root;
            let d = parse_dataset(&read(&data)?, m.var_count())?;
            let (p, rejected) = learn_ml_complete::<T>(m, root, &d, &scalar(&alpha)?)?;
            if rejected > 0 {
                log::warn!("{rejected} rows fall outside the base and were skipped");
            }
            let ll = p.log_likelihood(&d);
            match &out {
                Some(_) => {
                    emit(out.as_ref(), &p.to_text())?;
                    println!("{ll}");
                }
                None => {
                    emit(None, &p.to_text())?;
                    eprintln!("log-likelihood {ll}");
                }
            }
        }
        PsddCommand::Eval { vtree, psdd, row: r, .. } => {
            let p = parse_psdd::<T>(parse_vtree(&read(&vtree)?)?, &read(&psdd)?)?;
            println!("{}", p.evaluate(&row(&r, p.var_count())?));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QueryKind {
    EvidenceProb,
    Marginals,
    Mpe,
    Soft,
}

#[derive(Subcommand)]
pub enum BnCommand {
    /// Compile a network into an arithmetic circuit.
    Compile {
        #[arg(long)]
        net: PathBuf,
        /// Keep CPT entries as named parameters.
        #[arg(long)]
        symbolic: bool,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Query a compiled network: one number per line, legend on stderr.
    Query {
        #[arg(long)]
        ac: PathBuf,
        #[arg(long, value_enum)]
        kind: QueryKind,
        #[arg(long)]
        evidence: Option<String>,
        #[arg(long)]
        soft: Option<PathBuf>,
        /// Network whose CPT entries bind a symbolic circuit.
        #[arg(long)]
        net: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
        cap: u64,
    },
}

pub fn bn(cmd: BnCommand) -> Outcome {
    match cmd {
        BnCommand::Compile { exact: true, .. } | BnCommand::Query { exact: true, .. } => bn_in::<BigRational>(cmd),
        _ => bn_in::<f64>(cmd),
    }
}

fn bn_in<T: Scalar>(cmd: BnCommand) -> Outcome {
    match cmd {
        BnCommand::Compile { net, symbolic, out, .. } => {
            let bn = parse_bn(&read(&net)?)?;
            let ac = compile_to_ac::<T>(&bn, symbolic)?;
            log::info!("{} nodes, {} edges", ac.len(), ac.edge_count());
            emit(out.as_ref(), &ac.to_text())
        }
        BnCommand::Query { ac, kind, evidence, soft, net, cap, .. } => {
            let mut ac: ArithmeticCircuit<T> = parse_ac(&read(&ac)?)?;
            if let Some(net) = net {
                ac = ac.bind(&parse_bn(&read(&net)?)?.param_values())?;
            }
            let e = inst(evidence.as_ref(), ac.vars())?;
            let vars = ac.vars().to_vec();
            match kind {
                QueryKind::EvidenceProb => {
                    println!("{}", evidence_probability(&ac, &e)?);
                    eprintln!("P({})", format_instantiation(&e, &vars));
                }
                QueryKind::Marginals => {
                    let m = marginals(&ac, &e)?;
                    let mut legend = Vec::new();
                    for (v, row) in m.iter().enumerate() {
                        for (x, p) in row.iter().enumerate() {
                            println!("{p}");
                            legend.push(format!("{}={}", vars[v].name, vars[v].labels[x]));
                        }
                    }
                    eprintln!("P(X=x, {}) for X=x in: {}", format_instantiation(&e, &vars), legend.join(" "));
                }
                QueryKind::Mpe => {
                    let (v, x) = mpe(&ac, &e, cap)?;
                    println!("{v}");
                    eprintln!("MPE {}", print_witness(&x, &vars));
                }
                QueryKind::Soft => {
                    let path = soft.ok_or_else(|| Failure::Usage("`--kind soft` needs --soft".into()))?;
                    println!("{}", soft_evidence(&ac, &likelihoods(&path, &vars)?, &e, cap)?);
                    eprintln!("P({} | soft evidence)", format_instantiation(&e, &vars));
                }
            }
            Ok(())
        }
    }
}
