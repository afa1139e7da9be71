use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::{format_decimal, parse_rational, Rational};

/// One nonzero `matno blkno i j value` line (1-based block and indices).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SdpaEntry {
    pub matno: usize,
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: Rational,
}

/// A sparse SDPA problem: `minimize c·x` subject to `Σ F_i x_i - F_0 ⪰ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SdpaData {
    pub m: usize,
    /// Negative sizes mark diagonal blocks.
    pub block_sizes: Vec<i64>,
    pub objective: Vec<Rational>,
    pub entries: Vec<SdpaEntry>,
}

impl SdpaData {
    pub fn emit(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.m).unwrap();
        writeln!(out, "{}", self.block_sizes.len()).unwrap();
        let sizes: Vec<String> = self.block_sizes.iter().map(i64::to_string).collect();
        writeln!(out, "{}", sizes.join(" ")).unwrap();
        let c: Vec<String> = self.objective.iter().map(format_decimal).collect();
        writeln!(out, "{}", c.join(" ")).unwrap();
        for e in &self.entries {
            writeln!(out, "{} {} {} {} {}", e.matno, e.block, e.i, e.j, format_decimal(&e.value)).unwrap();
        }
        out
    }

    /// Reads the layout written by [`SdpaData::emit`]. Comment lines
    /// (`"` or `*`) and the usual `{}(),` separators are tolerated.
    pub fn parse(text: &str) -> Result<SdpaData> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
        let mut next = |what: &str| lines.next().ok_or_else(|| Error::parse(0, format!("missing {what}")));
        let clean = |l: &str| l.replace(['{', '}', '(', ')', ','], " ");

        let (ln, l) = next("variable count")?;
        let m: usize = clean(l).split_whitespace().next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::parse(ln, "bad variable count"))?;
        let (ln, l) = next("block count")?;
        let nb: usize = clean(l).split_whitespace().next().and_then(|t| t.parse().ok()).ok_or_else(|| Error::parse(ln, "bad block count"))?;
        let (ln, l) = next("block sizes")?;
        let block_sizes: Vec<i64> = clean(l)
            .split_whitespace()
            .take(nb)
            .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad block size `{t}`"))))
            .collect::<Result<_>>()?;
        if block_sizes.len() != nb {
            return Err(Error::parse(ln, format!("expected {nb} block sizes")));
        }
        let (ln, l) = next("objective")?;
        let objective: Vec<Rational> = clean(l)
            .split_whitespace()
            .map(|t| parse_rational(t).map_err(|e| Error::parse(ln, e.to_string())))
            .collect::<Result<_>>()?;
        if objective.len() != m {
            return Err(Error::parse(ln, format!("expected {m} objective entries, found {}", objective.len())));
        }
        let mut entries = Vec::new();
        for (ln, l) in lines {
            let fields: Vec<String> = clean(l).split_whitespace().map(str::to_string).collect();
            if fields.len() != 5 {
                return Err(Error::parse(ln, "expected `matno blkno i j value`"));
            }
            let int = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad index `{s}`")));
            let e = SdpaEntry {
                matno: int(&fields[0])?,
                block: int(&fields[1])?,
                i: int(&fields[2])?,
                j: int(&fields[3])?,
                value: parse_rational(&fields[4]).map_err(|e| Error::parse(ln, e.to_string()))?,
            };
            let size = block_sizes.get(e.block.wrapping_sub(1)).map(|s| s.unsigned_abs() as usize);
            if e.matno > m || size.is_none_or(|s| e.i == 0 || e.j == 0 || e.i > s || e.j > s) {
                return Err(Error::parse(ln, "entry outside the declared blocks"));
            }
            entries.push(e);
        }
        Ok(SdpaData { m, block_sizes, objective, entries })
    }
}
