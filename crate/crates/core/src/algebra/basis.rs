use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Basis, QuantumGraph};
use crate::density::{eval_rooted, root_assignments, StepGraphon};
use crate::error::{Error, Result};
use crate::graph::{automorphisms, canonical, enumerate_flags, LabeledGraph, Permutation, TypeSigma};
use crate::linalg::{self, Matrix};
use crate::rational::Rational;

/// Which part of the label-permutation decomposition a basis spans.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Full,
    Plus,
    Minus,
}

/// Independent induced-basis quantum graphs built from the `m`-vertex flags
/// of one type.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagBasis {
    sigma: TypeSigma,
    m: usize,
    parity: Parity,
    flags: Vec<LabeledGraph>,
    elements: Vec<QuantumGraph>,
}

impl FlagBasis {
    /// Every `Ind(F)` for the `m`-vertex `sigma`-flags `F`.
    pub fn full(sigma: &TypeSigma, m: usize) -> Result<Self> {
        let flags = enumerate_flags(sigma, m)?;
        let elements = flags.iter().map(QuantumGraph::ind).collect();
        Ok(FlagBasis { sigma: *sigma, m, parity: Parity::Full, flags, elements })
    }

    /// A basis from explicit elements. Each element must be a combination of
    /// `m`-vertex flags of type `sigma`, and the elements must be independent.
    pub fn from_elements(sigma: &TypeSigma, m: usize, parity: Parity, elements: Vec<QuantumGraph>) -> Result<Self> {
        let flags = enumerate_flags(sigma, m)?;
        let basis = FlagBasis { sigma: *sigma, m, parity, flags, elements };
        for e in &basis.elements {
            if e.basis() != Basis::Ind || e.k() != sigma.k() {
                return Err(Error::Config(format!("element {e} is not an induced {}-quantum graph", sigma.k())));
            }
            if e.terms().any(|(g, _)| g.n() != m || g.labeled_part() != *sigma) {
                return Err(Error::Config(format!("element {e} is not spanned by {m}-vertex flags of type {sigma}")));
            }
        }
        let rows = basis.coordinates();
        if linalg::rank(&rows) != rows.len() {
            return Err(Error::Config("basis elements are linearly dependent".into()));
        }
        Ok(basis)
    }

    pub fn sigma(&self) -> &TypeSigma {
        &self.sigma
    }

    pub fn flag_size(&self) -> usize {
        self.m
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn elements(&self) -> &[QuantumGraph] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The coordinate flags (all `m`-vertex flags of the type).
    pub fn flags(&self) -> &[LabeledGraph] {
        &self.flags
    }

    /// Rows: the elements' coefficients over [`Self::flags`].
    pub fn coordinates(&self) -> Matrix {
        self.elements.iter().map(|e| e.coefficients(&self.flags)).collect()
    }

    fn from_rows(&self, rows: &Matrix, parity: Parity) -> FlagBasis {
        let elements = rows
            .iter()
            .map(|row| {
                let mut q = QuantumGraph::zero(self.sigma.k(), Basis::Ind);
                for (f, c) in self.flags.iter().zip(row) {
                    q.add_term(f, c.clone());
                }
                q
            })
            .collect();
        FlagBasis { sigma: self.sigma, m: self.m, parity, flags: self.flags.clone(), elements }
    }

    /// Label permutations induced by automorphisms of the unlabeled type,
    /// extended by the identity on unlabeled vertices.
    fn label_actions(&self) -> Vec<Permutation> {
        let k = self.sigma.k();
        automorphisms(&self.sigma.unlabeled())
            .into_iter()
            .map(|p| {
                let image = (0..self.m).map(|v| if v < k { p.apply(v) } else { v }).collect();
                Permutation::from_images(image).expect("valid extension")
            })
            .collect()
    }

    /// Group-averaging operator on flag coordinates: row `i` is the image of
    /// flag `i`.
    pub fn averaging_matrix(&self) -> Matrix {
        let index: BTreeMap<LabeledGraph, usize> = self.flags.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let actions = self.label_actions();
        let share = Rational::new(1.into(), (actions.len() as i64).into());
        let mut p = linalg::zeros(self.flags.len(), self.flags.len());
        for (i, f) in self.flags.iter().enumerate() {
            for pi in &actions {
                let j = index[&canonical(&f.permuted(pi))];
                p[i][j] += &share;
            }
        }
        p
    }

    /// Splits into the invariant part (image of group averaging) and the
    /// anti-invariant part (kernel of group averaging).
    pub fn symmetry_split(&self) -> Result<(FlagBasis, FlagBasis)> {
        if self.parity != Parity::Full {
            return Err(Error::Config("symmetry split needs a full basis".into()));
        }
        let coords = self.coordinates();
        let averaged = linalg::mul(&coords, &self.averaging_matrix());
        let plus = linalg::row_space(&averaged);
        // combinations c with (sum_i c_i b_i) P = 0
        let null = linalg::kernel(&linalg::transpose(&averaged), coords.len());
        let minus: Matrix = linalg::row_space(&linalg::mul(&null, &coords));
        Ok((self.from_rows(&plus, Parity::Plus), self.from_rows(&minus, Parity::Minus)))
    }

    /// The subspace of elements whose rooted induced density vanishes at
    /// every label assignment into every graphon in `w0s`.
    pub fn delta_restrict(&self, w0s: &[StepGraphon]) -> Result<FlagBasis> {
        if w0s.is_empty() {
            return Ok(self.clone());
        }
        let k = self.sigma.k();
        let mut eval: Matrix = Vec::new();
        for w in w0s {
            if !w.is_zero_one() {
                return Err(Error::Graphon("restriction graphons must be 0/1-valued".into()));
            }
            for (psi, _) in root_assignments(k, w) {
                let row = self.elements.iter().map(|e| eval_rooted(e, &psi, w)).collect::<Result<Vec<_>>>()?;
                if row.iter().any(|x| !x.is_zero()) {
                    eval.push(row);
                }
            }
        }
        let combos = linalg::kernel(&eval, self.elements.len());
        let rows = linalg::row_space(&linalg::mul(&combos, &self.coordinates()));
        Ok(self.from_rows(&rows, self.parity))
    }

    /// True when `q` lies in the span of this basis.
    pub fn contains(&self, q: &QuantumGraph) -> bool {
        let mut rows = self.coordinates();
        let r = linalg::rank(&rows);
        rows.push(q.coefficients(&self.flags));
        linalg::rank(&rows) == r && q.terms().all(|(g, _)| self.flags.contains(g))
    }
}

/// `q` with every label permuted by `pi` (for tests and diagnostics).
pub fn permute_labels(q: &QuantumGraph, pi: &Permutation) -> QuantumGraph {
    let mut out = QuantumGraph::zero(q.k(), q.basis());
    for (g, c) in q.terms() {
        let image = (0..g.n()).map(|v| if v < q.k() { pi.apply(v) } else { v }).collect();
        let ext = Permutation::from_images(image).expect("label permutation");
        out.add_term(&g.permuted(&ext), c.clone());
    }
    out
}
