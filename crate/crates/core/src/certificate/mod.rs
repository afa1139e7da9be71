//! Sum-of-squares certificates for upper bounds on induced densities, and
//! their exact verification.
//!
//! A certificate for `t_ind(target) <= bound` lists blocks `(z, Y)` of flag
//! vectors and symmetric matrices. It is accepted when every `Y` is PSD and,
//! in the induced basis of `n`-vertex graphs,
//! `bound - Ind(target) - Σ ⟦z^T Y z⟧` has only nonnegative coefficients.

mod psd;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

pub use psd::{psd_check_exact, PsdCheck};

use crate::algebra::{lift, quadratic_form, Basis, QuantumGraph};
use crate::error::{Error, Result};
use crate::graph::{automorphism_count, canonical, enumerate_graphs, parse_graph, Graph};
use crate::linalg::{self, Matrix};
use crate::rational::{best_approximation, format_rational, parse_rational, Rational};

/// One `(z, Y)` pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertificateBlock {
    pub k: usize,
    pub flags: Vec<QuantumGraph>,
    pub y: Matrix,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub name: String,
    pub target: Graph,
    pub n: usize,
    pub bound: Rational,
    pub blocks: Vec<CertificateBlock>,
}

/// Per-block PSD outcomes and per-class slacks of a verification run.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub psd: Vec<PsdCheck>,
    pub classes: Vec<Graph>,
    /// `α_i - β_i` for every class, in class order.
    pub slacks: Vec<Rational>,
    pub accepted: bool,
}

impl VerificationReport {
    /// The class with the smallest slack.
    pub fn worst_slack(&self) -> Option<(Graph, Rational)> {
        self.classes.iter().zip(&self.slacks).min_by(|a, b| a.1.cmp(b.1)).map(|(g, s)| (*g, s.clone()))
    }

    /// Classes with negative slack.
    pub fn failing_classes(&self) -> Vec<(Graph, Rational)> {
        self.classes.iter().zip(&self.slacks).filter(|(_, s)| s.is_negative()).map(|(g, s)| (*g, s.clone())).collect()
    }

    /// Indices of blocks whose matrix is not PSD.
    pub fn non_psd_blocks(&self) -> Vec<usize> {
        self.psd.iter().enumerate().filter(|(_, p)| !p.is_psd()).map(|(i, _)| i).collect()
    }
}

/// `α_i`: coefficients of `bound * K_1 - Ind(target)` over the `n`-vertex
/// classes, where `K_1` contributes `n!/|Aut(H)|` to class `H`.
pub fn target_vector(target: &Graph, bound: &Rational, n: usize, classes: &[Graph]) -> Result<Vec<Rational>> {
    let lifted = lift(&QuantumGraph::ind(&target.unlabeled()), n)?;
    let n_fact: u64 = (1..=n as u64).product();
    Ok(classes
        .iter()
        .map(|h| {
            let copies = Rational::new(BigInt::from(n_fact), BigInt::from(automorphism_count(h)));
            bound * copies - lifted.coeff(h)
        })
        .collect())
}

impl Certificate {
    fn check_blocks(&self) -> Result<()> {
        for (i, b) in self.blocks.iter().enumerate() {
            if b.flags.len() != b.y.len() || b.y.iter().any(|r| r.len() != b.flags.len()) {
                return Err(Error::Dimension(format!("block {}: {} flags, Y is {}x?", i + 1, b.flags.len(), b.y.len())));
            }
            let mut sigma = None;
            for f in &b.flags {
                if f.k() != b.k {
                    return Err(Error::LabelMismatch(b.k, f.k()));
                }
                for (g, _) in f.terms() {
                    if 2 * g.n() - b.k > self.n {
                        return Err(Error::ExceedsTarget { have: 2 * g.n() - b.k, want: self.n });
                    }
                    let t = g.labeled_part();
                    if *sigma.get_or_insert(t) != t {
                        return Err(Error::Config(format!("block {}: flags of different types", i + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks every block exactly and compares the expansion with the target
    /// coefficientwise in the induced basis.
    pub fn verify(&self) -> Result<VerificationReport> {
        self.check_blocks()?;
        let classes = enumerate_graphs(self.n)?;
        let alpha = target_vector(&self.target, &self.bound, self.n, &classes)?;
        let psd = self.blocks.iter().map(|b| psd_check_exact(&b.y)).collect::<Result<Vec<_>>>()?;
        let expansions = self
            .blocks
            .par_iter()
            .map(|b| quadratic_form(&b.flags, &b.y, self.n))
            .collect::<Result<Vec<_>>>()?;
        let mut beta = QuantumGraph::zero(0, Basis::Ind);
        for e in &expansions {
            beta = &beta + e;
        }
        let beta = beta.coefficients(&classes);
        let slacks: Vec<Rational> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
        let accepted = psd.iter().all(PsdCheck::is_psd) && slacks.iter().all(|s| !s.is_negative());
        Ok(VerificationReport { psd, classes, slacks, accepted })
    }

    /// Parses the textual certificate format.
    pub fn load(text: &str) -> Result<Certificate> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut it = lines.into_iter().peekable();
        let mut header: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        while let Some(&(ln, line)) = it.peek() {
            if line == "block" {
                break;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| Error::parse(ln, "expected `key: value`"))?;
            header.insert(key.trim(), (ln, value.trim()));
            it.next();
        }
        let field = |key: &str| header.get(key).copied().ok_or_else(|| Error::parse(1, format!("missing `{key}:` header")));
        let name = field("name")?.1.to_string();
        let (ln, t) = field("target")?;
        let target = parse_graph(t).map_err(|e| Error::parse(ln, e.to_string()))?;
        if target.k() != 0 {
            return Err(Error::parse(ln, "target must be unlabeled"));
        }
        let target = canonical(&target);
        let (ln, n) = field("n")?;
        let n: usize = n.parse().map_err(|_| Error::parse(ln, "bad `n:` value"))?;
        let (ln, b) = field("bound")?;
        let bound = parse_rational(b).map_err(|e| Error::parse(ln, e.to_string()))?;

        let mut blocks = Vec::new();
        while let Some((ln, line)) = it.next() {
            if line != "block" {
                return Err(Error::parse(ln, format!("expected `block`, found `{line}`")));
            }
            let (ln, kline) = it.next().ok_or_else(|| Error::parse(ln, "block without `k:`"))?;
            let k: usize = kline
                .strip_prefix("k:")
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::parse(ln, "expected `k: <int>`"))?;
            match it.next() {
                Some((_, "flags:")) => {}
                Some((ln, _)) => return Err(Error::parse(ln, "expected `flags:`")),
                None => return Err(Error::parse(ln, "expected `flags:`")),
            }
            let mut flags = Vec::new();
            let mut scale = Rational::from_integer(1.into());
            loop {
                let (ln, line) = it.next().ok_or_else(|| Error::parse(ln, "block without `Y:`"))?;
                if let Some(rest) = line.strip_prefix("Y:") {
                    if !rest.trim().is_empty() {
                        scale = parse_rational(rest).map_err(|e| Error::parse(ln, e.to_string()))?;
                    }
                    break;
                }
                let q = QuantumGraph::parse(line, Basis::Ind).map_err(|e| Error::parse(ln, e.to_string()))?;
                if q.k() != k {
                    return Err(Error::parse(ln, format!("flag has {} labels in a k = {k} block", q.k())));
                }
                flags.push(q);
            }
            let mut y = Vec::new();
            for _ in 0..flags.len() {
                let (ln, row) = it.next().ok_or_else(|| Error::parse(ln, "Y has too few rows"))?;
                let row = row
                    .split_whitespace()
                    .map(|x| parse_rational(x).map(|v| v * &scale))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| Error::parse(ln, e.to_string()))?;
                if row.len() != flags.len() {
                    return Err(Error::parse(ln, format!("Y row has {} entries, expected {}", row.len(), flags.len())));
                }
                y.push(row);
            }
            if !linalg::is_symmetric(&y) {
                return Err(Error::parse(ln, "Y is not symmetric"));
            }
            blocks.push(CertificateBlock { k, flags, y });
        }
        Ok(Certificate { name, target, n, bound, blocks })
    }

    pub fn save(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name: {}", self.name).unwrap();
        writeln!(out, "target: {}", self.target).unwrap();
        writeln!(out, "n: {}", self.n).unwrap();
        writeln!(out, "bound: {}", format_rational(&self.bound)).unwrap();
        for b in &self.blocks {
            writeln!(out, "\nblock\nk: {}\nflags:", b.k).unwrap();
            for f in &b.flags {
                writeln!(out, "{f}").unwrap();
            }
            writeln!(out, "Y:").unwrap();
            for row in &b.y {
                let cells: Vec<String> = row.iter().map(format_rational).collect();
                writeln!(out, "{}", cells.join(" ")).unwrap();
            }
        }
        out
    }
}

/// Entries fixed during rounding, addressed 1-based as `(block, row, col)`.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct Pins {
    pub bound: Option<Rational>,
    pub entries: BTreeMap<(usize, usize, usize), Rational>,
}

impl Pins {
    /// Lines `bound <q>` or `<block> <row> <col> <q>`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Pins> {
        let mut pins = Pins::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |m: &str| Error::parse(i + 1, m.to_string());
            match fields.as_slice() {
                ["bound", v] => pins.bound = Some(parse_rational(v).map_err(|e| bad(&e.to_string()))?),
                [b, r, c, v] => {
                    let idx = |s: &str| s.parse::<usize>().ok().filter(|&x| x >= 1).ok_or_else(|| bad("indices are 1-based integers"));
                    let (b, r, c) = (idx(b)?, idx(r)?, idx(c)?);
                    let v = parse_rational(v).map_err(|e| bad(&e.to_string()))?;
                    pins.entries.insert((b, r.min(c), r.max(c)), v);
                }
                _ => return Err(bad("expected `bound <q>` or `<block> <row> <col> <q>`")),
            }
        }
        Ok(pins)
    }
}

/// Rounds every free entry of every `Y` (and the bound) to its best rational
/// approximation with denominator at most `cap`; pinned entries are set
/// exactly. No PSD repair happens here: `verify` is the judge.
pub fn round_to_rational(c: &Certificate, cap: u64, pins: &Pins) -> Result<Certificate> {
    for &(b, r, col) in pins.entries.keys() {
        let dim = c.blocks.get(b - 1).map(|blk| blk.y.len()).unwrap_or(0);
        if r > dim || col > dim {
            return Err(Error::Dimension(format!("pin ({b}, {r}, {col}) outside the certificate")));
        }
    }
    let mut out = c.clone();
    out.bound = pins.bound.clone().unwrap_or_else(|| best_approximation(&c.bound, cap));
    for (bi, block) in out.blocks.iter_mut().enumerate() {
        let d = block.y.len();
        for i in 0..d {
            for j in i..d {
                let v = match pins.entries.get(&(bi + 1, i + 1, j + 1)) {
                    Some(p) => p.clone(),
                    None => {
                        let avg = (&c.blocks[bi].y[i][j] + &c.blocks[bi].y[j][i]) / Rational::from_integer(2.into());
                        best_approximation(&avg, cap)
                    }
                };
                block.y[i][j] = v.clone();
                block.y[j][i] = v;
            }
        }
    }
    Ok(out)
}

/// `Y = Σ λ_i g_i g_i^T` from a symmetric eigendecomposition, so that
/// `⟦z^T Y z⟧ = Σ λ_i ⟦(g_i · z)^2⟧`.
pub fn eigen_terms(y: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
    let n = y.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| y[i][j]);
    let eig = nalgebra::SymmetricEigen::new(m);
    (0..n).map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect())).collect()
}

/// Soundness identity helper: `bound - t(Ind(target)) - Σ β_i t(Ind(H_i))`
/// at the induced profile of a graphon (class -> density).
pub fn residual_at(report: &VerificationReport, profile: &BTreeMap<Graph, Rational>) -> Rational {
    report
        .classes
        .iter()
        .zip(&report.slacks)
        .map(|(h, s)| s * profile.get(h).cloned().unwrap_or_else(Rational::zero))
        .sum()
}

/// Shipped certificate for the paw graph.
pub const PAW_CERTIFICATE: &str = include_str!("../../certificates/paw.cert");
/// Shipped certificate for `K_{1,1,2}`.
pub const K112_CERTIFICATE: &str = include_str!("../../certificates/k112.cert");

/// The paw certificate with block 1 exactly as originally printed (rejected).
pub const PAW_PRINTED_CERTIFICATE: &str = include_str!("../../certificates/paw_printed.cert");

/// The `K_{1,1,2}` certificate with blocks 5 and 6 as originally printed
/// (rejected: neither matrix is PSD).
pub const K112_PRINTED_CERTIFICATE: &str = include_str!("../../certificates/k112_printed.cert");
