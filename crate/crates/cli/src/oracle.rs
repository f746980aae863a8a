//! Brute-force twins of the query commands, by enumeration of every input
//! or every row of a factor.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use num_rational::BigRational;
use tc_arith::bn::BayesNet;
use tc_arith::factor::{compatible, format_instantiation, parse_instantiation, rows, Factor};
use tc_arith::{parse_ac, parse_bn, ArithmeticCircuit, Scalar, DEFAULT_ROW_CAP};
use tc_core::lit::parse_var_list;
use tc_core::{parse_cnf, parse_nnf, Assignment, CnfFormula, NnfCircuit, Var};

use crate::boolean::{number, var_name, weights};
use crate::numeric::QueryKind;
use crate::{read, Failure, Outcome};

#[derive(Args)]
pub struct Formula {
    #[arg(long, conflicts_with = "nnf", required_unless_present = "nnf")]
    cnf: Option<PathBuf>,
    #[arg(long)]
    nnf: Option<PathBuf>,
    /// Largest variable count to enumerate.
    #[arg(long, default_value_t = 24)]
    cap: usize,
}

enum Source {
    Cnf(CnfFormula),
    Nnf(NnfCircuit),
}

impl Source {
    fn load(f: &Formula) -> Result<Source, Failure> {
        let s = match (&f.cnf, &f.nnf) {
            (Some(p), _) => Source::Cnf(parse_cnf(&read(p)?)?),
            (None, Some(p)) => Source::Nnf(parse_nnf(&read(p)?)?),
            (None, None) => return Err(Failure::Usage("give --cnf or --nnf".into())),
        };
        if s.var_count() > f.cap {
            return Err(Failure::Core(tc_core::Error::CapExceeded {
                what: "enumerated variables",
                size: s.var_count() as u64,
                cap: f.cap as u64,
            }));
        }
        Ok(s)
    }

    fn var_count(&self) -> usize {
        match self {
            Source::Cnf(f) => f.var_count,
            Source::Nnf(c) => c.var_count,
        }
    }

    fn names(&self) -> Option<&[String]> {
        match self {
            Source::Cnf(f) => f.names.as_deref(),
            Source::Nnf(c) => c.names.as_deref(),
        }
    }

    fn holds(&self, x: &[bool]) -> bool {
        match self {
            Source::Cnf(f) => f.clauses.iter().all(|c| c.iter().any(|l| x[l.var().pos()] == l.is_positive())),
            Source::Nnf(c) => c.evaluate(&Assignment::complete(x)).unwrap_or(false),
        }
    }

    /// Satisfying inputs consistent with `e`, first variable most significant.
    fn models(&self, e: &Assignment) -> Vec<Vec<bool>> {
        let n = self.var_count();
        (0..1u64 << n)
            .map(|i| (0..n).map(|p| i >> (n - 1 - p) & 1 == 1).collect::<Vec<bool>>())
            .filter(|x| x.iter().enumerate().all(|(p, &b)| e.get(Var::from_pos(p)).is_none_or(|v| v == b)))
            .filter(|x| self.holds(x))
            .collect()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AcKind {
    Marginal,
    Mpe,
}

#[derive(Subcommand)]
pub enum OracleCommand {
    /// Count (or weigh, with `--weights`) satisfying inputs.
    Count {
        #[command(flatten)]
        formula: Formula,
        #[arg(long)]
        evidence: Option<String>,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
    },
    /// List satisfying inputs as bit strings, then their number.
    Models {
        #[command(flatten)]
        formula: Formula,
        #[arg(long)]
        evidence: Option<String>,
    },
    /// Maximize the weighted count over every instantiation of X.
    Emajsat {
        #[command(flatten)]
        formula: Formula,
        #[arg(long)]
        x: String,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
    },
    /// Network queries from the full joint table.
    Joint {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, value_enum, default_value = "evidence-prob")]
        kind: QueryKind,
        #[arg(long)]
        evidence: Option<String>,
        #[arg(long)]
        soft: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
    },
    /// Circuit queries from the circuit's factor.
    Ac {
        #[arg(long)]
        ac: PathBuf,
        #[arg(long, value_enum)]
        kind: AcKind,
        #[arg(long)]
        evidence: Option<String>,
        #[arg(long)]
        exact: bool,
    },
}

fn weighted(w: &tc_core::WeightMap<BigRational>, models: &[Vec<bool>]) -> BigRational {
    models
        .iter()
        .map(|x| {
            x.iter()
                .enumerate()
                .fold(BigRational::from_integer(1.into()), |acc, (p, &b)| acc * w.get(Var::from_pos(p).lit(b)))
        })
        .fold(BigRational::from_integer(0.into()), |a, b| a + b)
}

pub fn run(cmd: OracleCommand) -> Outcome {
    match cmd {
        OracleCommand::Count { formula, evidence, weights: wpath, exact } => {
            let src = Source::load(&formula)?;
            let e = boolean_evidence(&src, evidence.as_ref())?;
            let models = src.models(&e);
            match wpath {
                Some(p) => {
                    let w = weights(Some(&p), src.var_count())?;
                    println!("{}", number(&weighted(&w, &models), exact));
                }
                None => println!("{}", models.len()),
            }
        }
        OracleCommand::Models { formula, evidence } => {
            let src = Source::load(&formula)?;
            let e = boolean_evidence(&src, evidence.as_ref())?;
            let models = src.models(&e);
            for x in &models {
                println!("{}", x.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
            }
            println!("{}", models.len());
        }
        OracleCommand::Emajsat { formula, x, weights: wpath, exact } => {
            let src = Source::load(&formula)?;
            let xs = parse_var_list(&x, src.names(), src.var_count())?;
            let w = weights(wpath.as_ref(), src.var_count())?;
            let mut best: Option<(BigRational, Assignment)> = None;
            for i in 0..1u64 << xs.len() {
                let mut a = Assignment::new();
                for (k, &v) in xs.iter().enumerate() {
                    a.set(v, i >> (xs.len() - 1 - k) & 1 == 1);
                }
                let value = weighted(&w, &src.models(&a));
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, a));
                }
            }
            let (value, a) = best.expect("at least one instantiation");
            let shown: Vec<String> = xs
                .iter()
                .map(|&v| format!("{}={}", var_name(src.names(), v), u8::from(a.get(v).unwrap_or(false))))
                .collect();
            println!("{}", shown.join(","));
            println!("{}", number(&value, exact));
        }
        OracleCommand::Joint { exact: true, net, kind, evidence, soft } => joint::<BigRational>(net, kind, evidence, soft)?,
        OracleCommand::Joint { net, kind, evidence, soft, .. } => joint::<f64>(net, kind, evidence, soft)?,
        OracleCommand::Ac { exact: true, ac, kind, evidence } => ac_factor::<BigRational>(ac, kind, evidence)?,
        OracleCommand::Ac { ac, kind, evidence, .. } => ac_factor::<f64>(ac, kind, evidence)?,
    }
    Ok(())
}

fn boolean_evidence(src: &Source, e: Option<&String>) -> Result<Assignment, Failure> {
    Ok(match e {
        Some(t) => Assignment::parse_evidence(t, src.names(), src.var_count())?,
        None => Assignment::new(),
    })
}

fn inst(text: Option<&String>, vars: &[tc_arith::DiscreteVar]) -> Result<Vec<Option<usize>>, Failure> {
    Ok(match text {
        Some(t) => parse_instantiation(t, vars)?,
        None => vec![None; vars.len()],
    })
}

fn joint<T: Scalar>(net: PathBuf, kind: QueryKind, evidence: Option<String>, soft: Option<PathBuf>) -> Outcome {
    let bn: BayesNet = parse_bn(&read(&net)?)?;
    let f: Factor<T> = bn.joint_factor(DEFAULT_ROW_CAP)?;
    let e = inst(evidence.as_ref(), &bn.vars)?;
    match kind {
        QueryKind::EvidenceProb => println!("{}", f.marginal(&e)),
        QueryKind::Marginals => {
            for (v, d) in bn.vars.iter().enumerate() {
                for x in 0..d.k() {
                    let p = if e[v].is_some_and(|y| y != x) {
                        T::zero()
                    } else {
                        let mut e2 = e.clone();
                        e2[v] = Some(x);
                        f.marginal(&e2)
                    };
                    println!("{p}");
                }
            }
        }
        QueryKind::Mpe => {
            let (v, x) = f.argmax(&e).ok_or_else(|| Failure::Usage("evidence rules out every row".into()))?;
            println!("{v}");
            eprintln!("MPE {}", format_instantiation(&x.iter().map(|&v| Some(v)).collect::<Vec<_>>(), &bn.vars));
        }
        QueryKind::Soft => {
            let path = soft.ok_or_else(|| Failure::Usage("`--kind soft` needs --soft".into()))?;
            let like = crate::numeric::likelihoods::<T>(&path, &bn.vars)?;
            let (mut num, mut den) = (T::zero(), T::zero());
            for x in rows(&bn.vars) {
                let w = x.iter().enumerate().fold(f.get(&x).clone(), |acc, (v, &val)| acc * like[v][val].clone());
                if compatible(&x, &e) {
                    num = num + w.clone();
                }
                den = den + w;
            }
            if den.is_zero() {
                return Err(Failure::Core(tc_core::Error::Invalid("soft evidence has probability zero".into())));
            }
            println!("{}", num / den);
        }
    }
    Ok(())
}

fn ac_factor<T: Scalar>(path: PathBuf, kind: AcKind, evidence: Option<String>) -> Outcome {
    let ac: ArithmeticCircuit<T> = parse_ac(&read(&path)?)?;
    let f = ac.circuit_factor(DEFAULT_ROW_CAP)?;
    let e = inst(evidence.as_ref(), ac.vars())?;
    match kind {
        AcKind::Marginal => println!("{}", f.marginal(&e)),
        AcKind::Mpe => {
            let (v, x) = f.argmax(&e).ok_or_else(|| Failure::Usage("evidence rules out every row".into()))?;
            println!("{}", format_instantiation(&x.iter().map(|&v| Some(v)).collect::<Vec<_>>(), ac.vars()));
            println!("{v}");
        }
    }
    Ok(())
}
