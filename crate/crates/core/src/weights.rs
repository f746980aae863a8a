//! Literal weights and the numeric types they live in.

use std::fmt::Debug;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lit::{Literal, Var};

/// Numbers a circuit pass can add, multiply and compare.
pub trait Weight: Clone + Debug + Zero + One + Add<Output = Self> + Mul<Output = Self> + PartialOrd {}

impl<T> Weight for T where T: Clone + Debug + Zero + One + Add<Output = T> + Mul<Output = T> + PartialOrd {}

/// Weight of every literal over variables `1..=var_count`, indexed by
/// [`Literal::code`].
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMap<T> {
    var_count: usize,
    w: Vec<T>,
}

impl<T> WeightMap<T> {
    pub fn var_count(&self) -> usize {
        self.var_count
    }
}

impl<T: Weight> WeightMap<T> {
    /// All weights 1.
    pub fn unit(var_count: usize) -> WeightMap<T> {
        WeightMap {
            var_count,
            w: vec![T::one(); 2 * var_count],
        }
    }

    pub fn get(&self, l: Literal) -> T {
        self.w[l.code()].clone()
    }

    pub fn get_ref(&self, l: Literal) -> &T {
        &self.w[l.code()]
    }

    pub fn set(&mut self, l: Literal, value: T) -> Result<()> {
        if l.var().pos() >= self.var_count {
            return Err(Error::Invalid(format!("literal {l} outside 1..={}", self.var_count)));
        }
        if value < T::zero() {
            return Err(Error::Invalid(format!("negative weight for literal {l}")));
        }
        self.w[l.code()] = value;
        Ok(())
    }

    pub fn map<U: Weight>(&self, f: impl Fn(&T) -> U) -> WeightMap<U> {
        WeightMap {
            var_count: self.var_count,
            w: self.w.iter().map(f).collect(),
        }
    }
}

/// Parses a non-negative decimal (`0.25`, `3`, `1e-3`) or fraction (`1/3`)
/// exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    if exp.unsigned_abs() > 4096 {
        return None;
    }
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// Parses a weights file of `<signed literal> <weight>` lines into exact
/// rationals. Literals without a line keep weight 1 and are returned so the
/// caller can warn about them.
pub fn parse_weights(text: &str, var_count: usize) -> Result<(WeightMap<BigRational>, Vec<Literal>)> {
    let mut map = WeightMap::unit(var_count);
    let mut given = vec![false; 2 * var_count];
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [lit, w] = toks.as_slice() else {
            return Err(Error::parse(lineno, "expected `<literal> <weight>`"));
        };
        let code: i64 = lit
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad literal `{lit}`")))?;
        let l = Literal::from_dimacs(code)
            .filter(|l| l.var().pos() < var_count)
            .ok_or_else(|| Error::parse(lineno, format!("literal {code} out of range")))?;
        let value = parse_rational(w)
            .ok_or_else(|| Error::parse(lineno, format!("bad weight `{w}`")))?;
        if value < BigRational::zero() {
            return Err(Error::parse(lineno, format!("negative weight `{w}`")));
        }
        if given[l.code()] {
            return Err(Error::parse(lineno, format!("literal {code} weighted twice")));
        }
        given[l.code()] = true;
        map.set(l, value)?;
    }
    let missing: Vec<Literal> = (0..var_count)
        .flat_map(|p| [Var::from_pos(p).pos_lit(), Var::from_pos(p).neg_lit()])
        .filter(|l| !given[l.code()])
        .collect();
    for l in &missing {
        log::warn!("no weight for literal {l}; using 1");
    }
    Ok((map, missing))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
