//! CNF formulas and the DIMACS text format.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lit::{Assignment, Literal};

pub type Clause = Vec<Literal>;

/// A formula in conjunctive normal form over variables `1..=var_count`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Clause>,
    /// Optional display names, position `i` naming variable `i+1`.
    pub names: Option<Vec<String>>,
}

impl CnfFormula {
    pub fn new(var_count: usize, clauses: Vec<Clause>) -> Result<CnfFormula> {
        for c in &clauses {
            for l in c {
                if l.var().index() as usize > var_count {
                    return Err(Error::Invalid(format!(
                        "literal {l} exceeds variable count {var_count}"
                    )));
                }
            }
        }
        Ok(CnfFormula {
            var_count,
            clauses,
            names: None,
        })
    }

    /// Truth value under a complete assignment.
    pub fn eval(&self, a: &Assignment) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| a.value_of(l) == Some(true)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        if let Some(names) = &self.names {
            let _ = writeln!(out, "c names {}", names.join(" "));
        }
        let _ = writeln!(out, "p cnf {} {}", self.var_count, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{} ", l.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Reads `c names A B ...` directives; any other comment is ignored.
pub(crate) fn names_directive(line: &str) -> Option<Vec<String>> {
    let rest = line.strip_prefix('c')?.trim_start();
    let rest = rest.strip_prefix("names")?;
    if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
        return None;
    }
    Some(rest.split_whitespace().map(str::to_owned).collect())
}

/// Parses DIMACS CNF text.
pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut names = None;
    let mut clauses = Vec::new();
    let mut current: Clause = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('c') {
            if let Some(n) = names_directive(line) {
                names = Some(n);
            }
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(lineno, "duplicate header"));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(Error::parse(lineno, "expected `p cnf <vars> <clauses>`"));
            }
            let v = toks[2]
                .parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("bad variable count `{}`", toks[2])))?;
            let c = toks[3]
                .parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("bad clause count `{}`", toks[3])))?;
            header = Some((v, c));
            continue;
        }
        let (var_count, _) =
            header.ok_or_else(|| Error::parse(lineno, "clause before `p cnf` header"))?;
        for tok in line.split_whitespace() {
            let code: i64 = tok
                .parse()
                .map_err(|_| Error::parse(lineno, format!("non-integer token `{tok}`")))?;
            if code == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let lit = Literal::from_dimacs(code)
                .ok_or_else(|| Error::parse(lineno, format!("literal `{tok}` out of range")))?;
            if lit.var().index() as usize > var_count {
                return Err(Error::parse(
                    lineno,
                    format!("literal {code} out of range (header declares {var_count} variables)"),
                ));
            }
            current.push(lit);
        }
        last_line = lineno;
    }

    let (var_count, clause_count) = header.ok_or_else(|| Error::parse(0, "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(Error::parse(last_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != clause_count {
        return Err(Error::parse(
            0,
            format!("header declares {clause_count} clauses, found {}", clauses.len()),
        ));
    }
    if let Some(n) = &names {
        if n.len() != var_count {
            return Err(Error::parse(0, "`c names` must name every variable"));
        }
    }
    Ok(CnfFormula {
        var_count,
        clauses,
        names,
    })
}
