//! Complete Boolean datasets read from CSV.

use tc_core::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    pub var_count: usize,
    /// Rows with their multiplicities.
    pub rows: Vec<(Vec<bool>, u64)>,
}

impl Dataset {
    pub fn new(var_count: usize) -> Dataset {
        Dataset { var_count, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<bool>, count: u64) -> Result<()> {
        if row.len() != self.var_count {
            return Err(Error::Invalid(format!("row has {} values, expected {}", row.len(), self.var_count)));
        }
        self.rows.push((row, count));
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|(_, c)| c).sum()
    }
}

fn bit(field: &str) -> Option<bool> {
    match field {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

/// One 0/1 column per variable and an optional trailing count column. A
/// first record that is not all 0/1 is taken as a header.
pub fn parse_dataset(text: &str, var_count: usize) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut d = Dataset::new(var_count);
    for (idx, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::parse(idx + 1, e.to_string()))?;
        let line = rec.position().map_or(idx + 1, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let fields: Vec<&str> = rec.iter().collect();
        let values: Option<Vec<bool>> = fields.iter().take(var_count).map(|f| bit(f)).collect();
        if idx == 0 && values.is_none() {
            continue;
        }
        let values = values.ok_or_else(|| Error::parse(line, "values must be 0 or 1"))?;
        let count = match fields.len() {
            n if n == var_count => 1,
            n if n == var_count + 1 => fields[var_count]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad count `{}`", fields[var_count])))?,
            n => return Err(Error::parse(line, format!("expected {var_count} values and an optional count, got {n} fields"))),
        };
        if values.len() != var_count {
            return Err(Error::parse(line, "too few values"));
        }
        d.rows.push((values, count));
    }
    Ok(d)
}
