//! Assembly of the flag-algebra semidefinite program in the primal form
//! `minimize c·x subject to Σ F_i x_i - F_0 ⪰ 0`, with one variable per
//! `N`-vertex class (read as `t(Ind(H_i); w)`), one block per flag basis,
//! a diagonal block keeping every `x_i >= 0`, and a final 2x2 diagonal block
//! pinning `x_{K_1} = 1`.

mod sdpa;
mod solution;

use num_traits::Zero;
use rayon::prelude::*;

pub use sdpa::{SdpaData, SdpaEntry};
pub use solution::{extract_certificate, manifest_normalization, parse_solution, BlockManifest, Manifest, SolverSolution, OBJECTIVE_TOLERANCE};

use crate::algebra::{lift, unlabeled_product, Basis, FlagBasis, QuantumGraph};
use crate::density::StepGraphon;
use crate::error::{Error, Result};
use crate::graph::{automorphism_count, enumerate_graphs, enumerate_types, Graph, MAX_ENUMERATION};
use crate::linalg::{self, Matrix};
use crate::rational::{int, Rational};

/// Coefficients of `-lift(Ind(h), n)` over the `n`-vertex classes.
/// Minimizing it maximizes the induced density of `h`.
pub fn objective_for_inducibility(h: &Graph, n: usize) -> Result<Vec<Rational>> {
    if h.k() != 0 {
        return Err(Error::LabelMismatch(0, h.k()));
    }
    let q = QuantumGraph::ind(h).scaled(&int(-1));
    objective_for(&q, n)
}

/// Coefficients of an unlabeled quantum graph (either basis) lifted to `n`
/// vertices in the induced basis.
pub fn objective_for(f: &QuantumGraph, n: usize) -> Result<Vec<Rational>> {
    if f.k() != 0 {
        return Err(Error::LabelMismatch(0, f.k()));
    }
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge { n, limit: MAX_ENUMERATION });
    }
    let lifted = lift(&f.to_basis(Basis::Ind), n)?;
    Ok(lifted.coefficients(&enumerate_graphs(n)?))
}

/// `K_3 - 2(K_2 ∪ K_2) + K_2` in the plain basis; its density is never negative.
pub fn goodman_objective() -> QuantumGraph {
    QuantumGraph::parse("{ab, ac, bc}_{3, 0} - 2*{ab, cd}_{4, 0} + {ab}_{2, 0}", Basis::Plain)
        .expect("well-formed constant")
}

/// Flag bases for every type on `1..=l` labels, with flags on
/// `⌊(n+k)/2⌋` vertices, optionally split into invariant/anti-invariant
/// parts and restricted to vanish on the graphons `w0s`. Empty bases are
/// dropped.
pub fn build_bases(n: usize, l: usize, dedup_types: bool, split: bool, w0s: &[StepGraphon]) -> Result<Vec<FlagBasis>> {
    if l == 0 || l > n || n > MAX_ENUMERATION {
        return Err(Error::Config(format!("need 1 <= L <= N <= {MAX_ENUMERATION}, got L = {l}, N = {n}")));
    }
    let mut out = Vec::new();
    for k in 1..=l {
        let m = (n + k) / 2;
        for sigma in enumerate_types(k, dedup_types)? {
            let full = FlagBasis::full(&sigma, m)?;
            let parts = if split {
                let (plus, minus) = full.symmetry_split()?;
                vec![plus, minus]
            } else {
                vec![full]
            };
            for part in parts {
                let part = part.delta_restrict(w0s)?;
                if !part.is_empty() {
                    out.push(part);
                }
            }
        }
    }
    Ok(out)
}

/// Nonzero class coefficients of `⟦lift(f_u · f_v, N)⟧` for one pair `u <= v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairEntry {
    pub u: usize,
    pub v: usize,
    pub coeffs: Vec<(usize, Rational)>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SdpBlock {
    pub basis: FlagBasis,
    pub entries: Vec<PairEntry>,
}

impl SdpBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `F_i` restricted to this block.
    pub fn coefficient_matrix(&self, class: usize) -> Matrix {
        let mut f = linalg::zeros(self.dim(), self.dim());
        for e in &self.entries {
            if let Some((_, c)) = e.coeffs.iter().find(|(i, _)| *i == class) {
                f[e.u][e.v] = c.clone();
                f[e.v][e.u] = c.clone();
            }
        }
        f
    }

    /// `M(u, v) = Σ_i F_i(u, v) x_i`.
    pub fn evaluate(&self, x: &[Rational]) -> Matrix {
        let mut m = linalg::zeros(self.dim(), self.dim());
        for e in &self.entries {
            let s: Rational = e.coeffs.iter().map(|(i, c)| c * &x[*i]).sum();
            m[e.u][e.v] = s.clone();
            m[e.v][e.u] = s;
        }
        m
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SdpProblem {
    pub name: String,
    pub n: usize,
    /// Set for inducibility problems; the objective is then `-Ind(target)`
    /// and reported bounds are negated optima.
    pub target: Option<Graph>,
    pub classes: Vec<Graph>,
    pub objective: Vec<Rational>,
    /// Coefficient of each class in `K_1` lifted to `N` vertices: `N!/|Aut(H)|`.
    pub normalization: Vec<Rational>,
    pub blocks: Vec<SdpBlock>,
}

/// `N!/|Aut(H)|` for each class.
pub fn k1_coefficients(classes: &[Graph]) -> Vec<Rational> {
    classes
        .iter()
        .map(|h| {
            let n_fact: u64 = (1..=h.n() as u64).product();
            Rational::new(n_fact.into(), automorphism_count(h).into())
        })
        .collect()
}

/// Builds the program: one block per basis plus the normalization block.
pub fn assemble(objective: &[Rational], bases: &[FlagBasis], n: usize) -> Result<SdpProblem> {
    if bases.is_empty() {
        return Err(Error::Config("at least one flag block is required".into()));
    }
    let classes = enumerate_graphs(n)?;
    if objective.len() != classes.len() {
        return Err(Error::Dimension(format!("objective has {} entries, {} classes on {n} vertices", objective.len(), classes.len())));
    }
    let index: std::collections::BTreeMap<Graph, usize> = classes.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut blocks = Vec::with_capacity(bases.len());
    for basis in bases {
        let k = basis.sigma().k();
        let m = basis.flag_size();
        if 2 * m < k || !(2 * m - k == n || 2 * m - k + 1 == n) {
            return Err(Error::Config(format!("flags on {m} vertices with {k} labels do not fit N = {n} after one lift")));
        }
        let d = basis.len();
        let z = basis.elements();
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|u| (u..d).map(move |v| (u, v))).collect();
        let entries = pairs
            .par_iter()
            .map(|&(u, v)| {
                let q = unlabeled_product(&z[u], &z[v], n)?;
                let coeffs = q.terms().filter(|(_, c)| !c.is_zero()).map(|(g, c)| (index[g], c.clone())).collect();
                Ok(PairEntry { u, v, coeffs })
            })
            .collect::<Result<Vec<_>>>()?;
        blocks.push(SdpBlock { basis: basis.clone(), entries });
    }
    Ok(SdpProblem {
        name: String::from("sdp"),
        n,
        target: None,
        normalization: k1_coefficients(&classes),
        classes,
        objective: objective.to_vec(),
        blocks,
    })
}

impl SdpProblem {
    /// Marks the program as maximizing the induced density of `h`.
    pub fn with_target(mut self, name: &str, h: &Graph) -> Self {
        self.name = name.to_string();
        self.target = Some(*h);
        self
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// The bound implied by an optimum: negated for inducibility problems.
    pub fn bound_from(&self, optimum: f64) -> f64 {
        if self.target.is_some() {
            -optimum
        } else {
            optimum
        }
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(SdpBlock::dim).collect()
    }

    /// `c · x`.
    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// The sparse SDPA data: flag blocks first, then the size `-m`
    /// nonnegativity block (`F_i = e_i e_i^T`), then the size -2
    /// normalization block with `F_0 = diag(1, -1)` and
    /// `F_i = diag(c_i, -c_i)`.
    pub fn to_sdpa(&self) -> SdpaData {
        let m = self.classes.len();
        let nb = self.blocks.len() + 2;
        let mut entries = vec![
            SdpaEntry { matno: 0, block: nb, i: 1, j: 1, value: int(1) },
            SdpaEntry { matno: 0, block: nb, i: 2, j: 2, value: int(-1) },
        ];
        for (b, block) in self.blocks.iter().enumerate() {
            for e in &block.entries {
                for (class, c) in &e.coeffs {
                    entries.push(SdpaEntry { matno: class + 1, block: b + 1, i: e.u + 1, j: e.v + 1, value: c.clone() });
                }
            }
        }
        for class in 0..m {
            entries.push(SdpaEntry { matno: class + 1, block: nb - 1, i: class + 1, j: class + 1, value: int(1) });
        }
        for (class, c) in self.normalization.iter().enumerate() {
            entries.push(SdpaEntry { matno: class + 1, block: nb, i: 1, j: 1, value: c.clone() });
            entries.push(SdpaEntry { matno: class + 1, block: nb, i: 2, j: 2, value: -c.clone() });
        }
        entries.sort_by(|a, b| (a.matno, a.block, a.i, a.j).cmp(&(b.matno, b.block, b.i, b.j)));
        let mut sizes: Vec<i64> = self.block_dims().into_iter().map(|d| d as i64).collect();
        sizes.push(-(m as i64));
        sizes.push(-2);
        SdpaData { m, block_sizes: sizes, objective: self.objective.clone(), entries }
    }

    pub fn emit_sdpa(&self) -> String {
        self.to_sdpa().emit()
    }

    pub fn manifest(&self) -> Manifest {
        Manifest::of(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{ind_profile, step_graphon_of};
    use crate::graph::{parse_graph, HostGraph, LabeledGraph};
    use num_traits::Signed;

    #[test]
    fn inducibility_objectives() {
        let paw = objective_for_inducibility(&LabeledGraph::paw(), 5).unwrap();
        assert_eq!(paw.len(), 34);
        assert_eq!(paw.iter().sum::<Rational>(), int(-16));
        let k1 = objective_for_inducibility(&parse_graph("{}_{1, 0}").unwrap(), 2).unwrap();
        assert_eq!(k1, vec![int(-1), int(-1)]);
        assert!(objective_for_inducibility(&LabeledGraph::paw(), 3).is_err());
    }

    #[test]
    fn basis_counts() {
        let b = build_bases(5, 1, false, false, &[]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].len(), 6);
        let all = build_bases(5, 3, false, false, &[]).unwrap();
        let dedup = build_bases(5, 3, true, false, &[]).unwrap();
        let k3 = |v: &[FlagBasis]| v.iter().filter(|b| b.sigma().k() == 3).count();
        assert_eq!(k3(&all), 8);
        assert_eq!(k3(&dedup), 4);
        let split = build_bases(5, 3, true, true, &[]).unwrap();
        let total = |v: &[FlagBasis]| v.iter().map(FlagBasis::len).sum::<usize>();
        assert_eq!(total(&split), total(&dedup));
        assert!(build_bases(5, 0, false, false, &[]).is_err());
        assert!(build_bases(8, 1, false, false, &[]).is_err());
    }

    #[test]
    fn delta_restriction_shrinks_blocks() {
        let w = step_graphon_of(&HostGraph::from(&LabeledGraph::complete(5).unwrap()));
        let plain = build_bases(5, 1, false, false, &[]).unwrap();
        let cut = build_bases(5, 1, false, false, &[w]).unwrap();
        assert!(cut[0].len() < plain[0].len());
    }

    #[test]
    fn assembled_blocks_are_psd_at_graphs() {
        let bases = build_bases(4, 2, true, false, &[]).unwrap();
        let obj = objective_for_inducibility(&LabeledGraph::path(3).unwrap(), 4).unwrap();
        let p = assemble(&obj, &bases, 4).unwrap();
        let c5 = step_graphon_of(&HostGraph::from(&LabeledGraph::cycle(5).unwrap()));
        let prof = ind_profile(4, &c5).unwrap();
        let x: Vec<Rational> = p.classes.iter().map(|h| prof.get(h).cloned().unwrap_or_else(Rational::zero)).collect();
        for b in &p.blocks {
            let m = b.evaluate(&x);
            assert!(crate::certificate::psd_check_exact(&m).unwrap().is_psd());
        }
        let k1: Rational = p.normalization.iter().zip(&x).map(|(c, v)| c * v).sum();
        assert_eq!(k1, int(1));
        let t = crate::density::t_ind_graph(&LabeledGraph::path(3).unwrap(), &c5);
        assert_eq!(p.objective_value(&x), -t);
    }

    #[test]
    fn assemble_validation() {
        let obj = objective_for_inducibility(&LabeledGraph::paw(), 5).unwrap();
        assert!(assemble(&obj, &[], 5).is_err());
        let wrong = build_bases(3, 1, false, false, &[]).unwrap();
        assert!(assemble(&obj, &wrong, 5).is_err());
        let bases = build_bases(5, 1, false, false, &[]).unwrap();
        assert!(assemble(&obj[1..], &bases, 5).is_err());
    }

    #[test]
    fn goodman_objective_is_nonnegative_on_graphs() {
        let obj = objective_for(&goodman_objective(), 4).unwrap();
        let classes = enumerate_graphs(4).unwrap();
        for g in &classes {
            let w = step_graphon_of(&HostGraph::from(g));
            let prof = ind_profile(4, &w).unwrap();
            let val: Rational = classes.iter().zip(&obj).map(|(h, c)| c * prof.get(h).cloned().unwrap_or_else(Rational::zero)).sum();
            assert!(!val.is_negative());
        }
        assert!(objective_for(&goodman_objective(), 3).is_err());
    }
}
