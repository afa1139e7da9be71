use serde::{Deserialize, Serialize};

use super::{k1_coefficients, SdpProblem};
use crate::algebra::{Basis, Parity, QuantumGraph};
use crate::certificate::{Certificate, CertificateBlock};
use crate::error::{Error, Result};
use crate::graph::{canonical, parse_graph, Graph};
use crate::rational::{format_rational, parse_rational, Rational};

/// Allowed gap between the primal objective `c·x` and the dual objective
/// `F_0 • Y` of an ingested solution.
pub const OBJECTIVE_TOLERANCE: f64 = 1e-6;

/// Flag strings of one block, so certificates can be rebuilt from a
/// solver run without re-assembling the program.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockManifest {
    pub sigma: String,
    pub parity: Parity,
    pub flag_size: usize,
    pub elements: Vec<String>,
}

/// Sidecar written next to an SDPA emission.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub n: usize,
    pub target: Option<String>,
    pub classes: Vec<String>,
    pub objective: Vec<String>,
    pub blocks: Vec<BlockManifest>,
}

impl Manifest {
    pub fn of(p: &SdpProblem) -> Manifest {
        Manifest {
            name: p.name.clone(),
            n: p.n,
            target: p.target.map(|t| t.to_string()),
            classes: p.classes.iter().map(Graph::to_string).collect(),
            objective: p.objective.iter().map(format_rational).collect(),
            blocks: p
                .blocks
                .iter()
                .map(|b| BlockManifest {
                    sigma: b.basis.sigma().to_string(),
                    parity: b.basis.parity(),
                    flag_size: b.basis.flag_size(),
                    elements: b.basis.elements().iter().map(QuantumGraph::to_string).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Manifest> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.elements.len()).collect()
    }

    pub fn objective_values(&self) -> Result<Vec<Rational>> {
        self.objective.iter().map(|s| parse_rational(s)).collect()
    }

    pub fn class_graphs(&self) -> Result<Vec<Graph>> {
        self.classes.iter().map(|s| parse_graph(s)).collect()
    }

    pub fn target_graph(&self) -> Result<Option<Graph>> {
        self.target.as_deref().map(|t| parse_graph(t).map(|g| canonical(&g))).transpose()
    }

    /// Flag vectors of each block.
    pub fn flag_vectors(&self) -> Result<Vec<Vec<QuantumGraph>>> {
        self.blocks.iter().map(|b| b.elements.iter().map(|e| QuantumGraph::parse(e, Basis::Ind)).collect()).collect()
    }
}

/// A floating solver answer: the primal vector `x`, the dual matrix `Y`
/// split into flag blocks, the per-class slacks and the 2-entry
/// normalization diagonal.
#[derive(Clone, PartialEq, Debug)]
pub struct SolverSolution {
    pub x: Vec<f64>,
    pub blocks: Vec<Vec<Vec<f64>>>,
    /// Dual of the nonnegativity block: the per-class slacks.
    pub slacks: Vec<f64>,
    pub normalization: [f64; 2],
    /// `c · x`.
    pub primal_objective: f64,
    /// `F_0 • Y = Y_norm(1,1) - Y_norm(2,2)`.
    pub dual_objective: f64,
}

/// Reads a CSDP-style solution: the first line is the vector `x` (the
/// solver's `y`), then lines `matno blkno i j value` where `matno 1` is the
/// slack matrix (ignored) and `matno 2` is the dual matrix `Y`.
pub fn parse_solution(text: &str, manifest: &Manifest) -> Result<SolverSolution> {
    let dims = manifest.block_dims();
    let nb = dims.len();
    let m = manifest.classes.len();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (ln, first) = lines.next().ok_or_else(|| Error::parse(1, "empty solution file"))?;
    let x: Vec<f64> = first
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| Error::parse(ln, format!("bad number `{t}`"))))
        .collect::<Result<_>>()?;
    if x.len() != m {
        return Err(Error::parse(ln, format!("expected {m} values in the first line, found {}", x.len())));
    }
    let mut blocks: Vec<Vec<Vec<f64>>> = dims.iter().map(|&d| vec![vec![0.0; d]; d]).collect();
    let mut normalization = [0.0; 2];
    let mut slacks = vec![0.0; m];
    for (ln, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 5 {
            return Err(Error::parse(ln, "expected `matno blkno i j value`"));
        }
        let idx = |s: &str| s.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(|| Error::parse(ln, format!("bad index `{s}`")));
        let (matno, blk, i, j) = (idx(f[0])?, idx(f[1])?, idx(f[2])?, idx(f[3])?);
        let value: f64 = f[4].parse().map_err(|_| Error::parse(ln, format!("bad number `{}`", f[4])))?;
        if matno > 2 {
            return Err(Error::parse(ln, format!("unknown matrix number {matno}")));
        }
        if blk > nb + 2 {
            return Err(Error::Dimension(format!("line {ln}: block {blk} but the program has {}", nb + 2)));
        }
        let size = if blk == nb + 1 {
            m
        } else if blk == nb + 2 {
            2
        } else {
            dims[blk - 1]
        };
        if i > size || j > size || (blk > nb && i != j) {
            return Err(Error::Dimension(format!("line {ln}: entry ({i}, {j}) outside block {blk}")));
        }
        if matno == 1 {
            continue;
        }
        if blk == nb + 1 {
            slacks[i - 1] = value;
        } else if blk == nb + 2 {
            normalization[i - 1] = value;
        } else {
            blocks[blk - 1][i - 1][j - 1] = value;
            blocks[blk - 1][j - 1][i - 1] = value;
        }
    }
    let c = manifest.objective_values()?;
    let primal_objective: f64 = c.iter().zip(&x).map(|(ci, xi)| crate::rational::to_f64(ci) * xi).sum();
    let dual_objective = normalization[0] - normalization[1];
    if (primal_objective - dual_objective).abs() > OBJECTIVE_TOLERANCE {
        return Err(Error::ObjectiveMismatch { primal: primal_objective, dual: dual_objective });
    }
    Ok(SolverSolution { x, blocks, slacks, normalization, primal_objective, dual_objective })
}

/// Shortest decimal that reads back as `x`, as an exact rational.
fn decimal_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Rational(x.to_string()));
    }
    parse_rational(&format!("{x}"))
}

/// Pairs each floating `Y` block with its flag vector. The bound is the
/// negated dual objective; entries are carried as the rationals of their
/// shortest decimal renderings, ready for rounding and exact verification.
pub fn extract_certificate(s: &SolverSolution, manifest: &Manifest) -> Result<Certificate> {
    let target = manifest
        .target_graph()?
        .ok_or_else(|| Error::Config("certificate extraction needs an inducibility target".into()))?;
    let flags = manifest.flag_vectors()?;
    if flags.len() != s.blocks.len() {
        return Err(Error::Dimension(format!("{} blocks in the solution, {} in the manifest", s.blocks.len(), flags.len())));
    }
    let mut blocks = Vec::with_capacity(flags.len());
    for ((z, y), bm) in flags.into_iter().zip(&s.blocks).zip(&manifest.blocks) {
        if z.len() != y.len() {
            return Err(Error::Dimension(format!("block of {} flags with a {}x{} matrix", z.len(), y.len(), y.len())));
        }
        let k = parse_graph(&bm.sigma)?.k();
        let y = y.iter().map(|row| row.iter().map(|&v| decimal_rational(v)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        blocks.push(CertificateBlock { k, flags: z, y });
    }
    Ok(Certificate {
        name: manifest.name.clone(),
        target,
        n: manifest.n,
        bound: decimal_rational(-s.dual_objective)?,
        blocks,
    })
}

/// `N!/|Aut(H)|` coefficients of the manifest's classes.
pub fn manifest_normalization(manifest: &Manifest) -> Result<Vec<Rational>> {
    Ok(k1_coefficients(&manifest.class_graphs()?))
}
