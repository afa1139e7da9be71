//! Quantum graphs: finite rational combinations of canonical partially
//! labeled graphs, with the zeta/Möbius transforms between the plain and
//! induced bases, flag products, vertex lifting, and unlabeling.
//!
//! Induced-basis elements use the normalization in which `Ind(H)` evaluates
//! to the probability that the sampled labeled graph equals `H` exactly.
//! Under it the product of two flags counts cross-edge patterns, lifting
//! counts the attachment patterns of a new vertex, and unlabeling keeps
//! coefficients unchanged.

mod basis;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

pub use basis::{permute_labels, FlagBasis, Parity};

use crate::error::{Error, Result};
use crate::graph::{canonical, parse_graph, LabeledGraph, MAX_VERTICES};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Which family the keyed graphs of a [`QuantumGraph`] stand for.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Basis {
    /// Graphs evaluated by homomorphism density.
    Plain,
    /// `Ind(H)` terms evaluated by induced density.
    Ind,
}

/// A `k`-quantum graph with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QuantumGraph {
    k: usize,
    basis: Basis,
    terms: BTreeMap<LabeledGraph, Rational>,
}

impl QuantumGraph {
    pub fn zero(k: usize, basis: Basis) -> Self {
        QuantumGraph { k, basis, terms: BTreeMap::new() }
    }

    /// The single term `g` (canonicalized).
    pub fn from_graph(g: &LabeledGraph, basis: Basis) -> Self {
        let mut q = Self::zero(g.k(), basis);
        q.add_term(g, Rational::one());
        q
    }

    /// `Ind(g)`.
    pub fn ind(g: &LabeledGraph) -> Self {
        Self::from_graph(g, Basis::Ind)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LabeledGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &LabeledGraph) -> Rational {
        self.terms.get(&canonical(g)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest vertex count among the terms.
    pub fn max_vertices(&self) -> usize {
        self.terms.keys().map(LabeledGraph::n).max().unwrap_or(0)
    }

    /// Adds `c * g`, canonicalizing `g` and dropping zero coefficients.
    pub fn add_term(&mut self, g: &LabeledGraph, c: Rational) {
        assert_eq!(g.k(), self.k, "label count mismatch in quantum graph");
        if c.is_zero() {
            return;
        }
        let key = canonical(g);
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add_scaled(&mut self, other: &QuantumGraph, c: &Rational) {
        assert_eq!(self.basis, other.basis, "mixing plain and induced bases");
        for (g, x) in &other.terms {
            self.add_term(g, x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> QuantumGraph {
        let mut out = Self::zero(self.k, self.basis);
        out.add_scaled(self, c);
        out
    }

    /// Parses `[coeff*]graph (+|- [coeff*]graph)*` into the given basis.
    pub fn parse(text: &str, basis: Basis) -> Result<QuantumGraph> {
        let mut pieces = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let mut sign = Rational::one();
        for (i, ch) in text.char_indices() {
            match ch {
                '{' => depth += 1,
                '}' => depth -= 1,
                '+' | '-' if depth == 0 => {
                    let piece = text[start..i].trim();
                    if piece.is_empty() {
                        // leading or doubled sign
                        if ch == '-' {
                            sign = -sign;
                        }
                    } else {
                        pieces.push((sign.clone(), piece));
                        sign = if ch == '-' { -Rational::one() } else { Rational::one() };
                    }
                    start = i + 1;
                }
                _ => {}
            }
        }
        let last = text[start..].trim();
        if last.is_empty() {
            return Err(Error::Notation { pos: text.len(), msg: "empty quantum graph term".into() });
        }
        pieces.push((sign, last));
        let mut out: Option<QuantumGraph> = None;
        for (sign, piece) in pieces {
            let (coeff, graph) = match piece.split_once('*') {
                Some((c, g)) => (parse_rational(c)?, g.trim()),
                None => (Rational::one(), piece),
            };
            let g = parse_graph(graph)?;
            let q = out.get_or_insert_with(|| QuantumGraph::zero(g.k(), basis));
            if q.k != g.k() {
                return Err(Error::LabelMismatch(q.k, g.k()));
            }
            q.add_term(&g, sign * coeff);
        }
        Ok(out.expect("at least one term"))
    }

    /// `self * other`: flag products in the induced basis, glued products
    /// in the plain basis; bilinear over terms.
    pub fn product(&self, other: &QuantumGraph) -> Result<QuantumGraph> {
        if self.k != other.k {
            return Err(Error::LabelMismatch(self.k, other.k));
        }
        if self.basis != other.basis {
            return Err(Error::Config("product of quantum graphs in different bases".into()));
        }
        let mut out = QuantumGraph::zero(self.k, self.basis);
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let c = a * b;
                match self.basis {
                    Basis::Ind => out.add_scaled(&product_ind(f, g)?, &c),
                    Basis::Plain => out.add_term(&product_plain(f, g)?, c),
                }
            }
        }
        Ok(out)
    }

    /// Converts between the plain and induced bases (zeta / Möbius).
    pub fn to_basis(&self, basis: Basis) -> QuantumGraph {
        if basis == self.basis {
            return self.clone();
        }
        let mut out = QuantumGraph::zero(self.k, basis);
        for (g, c) in &self.terms {
            let expanded = match basis {
                Basis::Ind => zeta_expand(g),
                Basis::Plain => ind_expand(g),
            };
            out.add_scaled(&expanded, c);
        }
        out
    }

    /// Coefficients of the listed graphs, in order.
    pub fn coefficients(&self, classes: &[LabeledGraph]) -> Vec<Rational> {
        classes.iter().map(|g| self.terms.get(g).cloned().unwrap_or_else(Rational::zero)).collect()
    }
}

impl fmt::Display for QuantumGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{}*", format_rational(&a))?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QuantumGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuantumGraph[{:?}, k={}]({})", self.basis, self.k, self)
    }
}

impl Add for &QuantumGraph {
    type Output = QuantumGraph;
    fn add(self, rhs: &QuantumGraph) -> QuantumGraph {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &QuantumGraph {
    type Output = QuantumGraph;
    fn sub(self, rhs: &QuantumGraph) -> QuantumGraph {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &QuantumGraph {
    type Output = QuantumGraph;
    fn neg(self) -> QuantumGraph {
        self.scaled(&-Rational::one())
    }
}

/// Supergraphs of `h` on the same vertex set, with the number of added edges.
fn supergraphs(h: &LabeledGraph) -> impl Iterator<Item = (LabeledGraph, usize)> + '_ {
    let missing: Vec<(usize, usize)> = h.non_edges().collect();
    (0..(1u64 << missing.len())).map(move |sel| {
        let mut f = *h;
        for (i, &(u, v)) in missing.iter().enumerate() {
            if sel >> i & 1 == 1 {
                f = f.with_edge(u, v, true);
            }
        }
        (f, sel.count_ones() as usize)
    })
}

/// `Ind(h)` written in the plain basis (Möbius inversion).
pub fn ind_expand(h: &LabeledGraph) -> QuantumGraph {
    let mut q = QuantumGraph::zero(h.k(), Basis::Plain);
    for (f, added) in supergraphs(h) {
        q.add_term(&f, if added % 2 == 0 { int(1) } else { int(-1) });
    }
    q
}

/// The plain graph `h` written in the induced basis (zeta transform).
pub fn zeta_expand(h: &LabeledGraph) -> QuantumGraph {
    let mut q = QuantumGraph::zero(h.k(), Basis::Ind);
    for (f, _) in supergraphs(h) {
        q.add_term(&f, int(1));
    }
    q
}

/// Glues `f` and `g` along their labels; labeled-labeled edges are merged and
/// the unlabeled parts stay disjoint.
pub fn product_plain(f: &LabeledGraph, g: &LabeledGraph) -> Result<LabeledGraph> {
    let (glued, _) = glue(f, g)?;
    Ok(glued)
}

/// The disjoint gluing of `f` and `g` along their labels, plus the list of
/// cross pairs between the two unlabeled parts.
fn glue(f: &LabeledGraph, g: &LabeledGraph) -> Result<(LabeledGraph, Vec<(usize, usize)>)> {
    if f.k() != g.k() {
        return Err(Error::LabelMismatch(f.k(), g.k()));
    }
    let k = f.k();
    let a = f.n() - k;
    let b = g.n() - k;
    let n = k + a + b;
    if n > MAX_VERTICES {
        return Err(Error::TooLarge { n, limit: MAX_VERTICES });
    }
    let mut out = LabeledGraph::empty(n, k)?;
    for (u, v) in f.edges() {
        out = out.with_edge(u, v, true);
    }
    let shift = |v: usize| if v < k { v } else { v + a };
    for (u, v) in g.edges() {
        out = out.with_edge(shift(u), shift(v), true);
    }
    let cross = (k..k + a).flat_map(|u| (k + a..n).map(move |v| (u, v))).collect();
    Ok((out, cross))
}

/// `Ind(f) * Ind(g)`: zero when the types differ, otherwise the sum over
/// cross-edge patterns between the unlabeled parts.
pub fn product_ind(f: &LabeledGraph, g: &LabeledGraph) -> Result<QuantumGraph> {
    if f.k() != g.k() {
        return Err(Error::LabelMismatch(f.k(), g.k()));
    }
    let mut out = QuantumGraph::zero(f.k(), Basis::Ind);
    if f.labeled_part() != g.labeled_part() {
        return Ok(out);
    }
    let (base, cross) = glue(f, g)?;
    for sel in 0..(1u64 << cross.len()) {
        let mut h = base;
        for (i, &(u, v)) in cross.iter().enumerate() {
            if sel >> i & 1 == 1 {
                h = h.with_edge(u, v, true);
            }
        }
        out.add_term(&h, int(1));
    }
    Ok(out)
}

/// Rewrites every term on fewer than `n_target` vertices by adding unlabeled
/// vertices one at a time in all attachment patterns.
pub fn lift(q: &QuantumGraph, n_target: usize) -> Result<QuantumGraph> {
    if q.basis != Basis::Ind {
        return Err(Error::Config("lift operates on the induced basis".into()));
    }
    let have = q.max_vertices();
    if have > n_target {
        return Err(Error::ExceedsTarget { have, want: n_target });
    }
    if n_target > MAX_VERTICES {
        return Err(Error::TooLarge { n: n_target, limit: MAX_VERTICES });
    }
    let mut cur = q.clone();
    while cur.terms.keys().any(|g| g.n() < n_target) {
        let mut next = QuantumGraph::zero(q.k, Basis::Ind);
        for (g, c) in &cur.terms {
            if g.n() == n_target {
                next.add_term(g, c.clone());
                continue;
            }
            for pattern in 0..(1u32 << g.n()) {
                next.add_term(&g.extended(pattern)?, c.clone());
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `⟦q⟧`: drops the labels; coefficients are unchanged.
pub fn unlabel(q: &QuantumGraph) -> QuantumGraph {
    let mut out = QuantumGraph::zero(0, q.basis);
    for (g, c) in &q.terms {
        out.add_term(&g.unlabeled(), c.clone());
    }
    out
}

/// `⟦lift(f * g, n_target)⟧`.
pub fn unlabeled_product(f: &QuantumGraph, g: &QuantumGraph, n_target: usize) -> Result<QuantumGraph> {
    Ok(unlabel(&lift(&f.product(g)?, n_target)?))
}

/// `Σ_{u,v} Y(u,v) ⟦lift(z_u * z_v, n_target)⟧`, exact.
pub fn quadratic_form(z: &[QuantumGraph], y: &[Vec<Rational>], n_target: usize) -> Result<QuantumGraph> {
    let d = z.len();
    if y.len() != d || y.iter().any(|r| r.len() != d) {
        return Err(Error::Dimension(format!("{} flags against a {}x{} matrix", d, y.len(), y.first().map_or(0, Vec::len))));
    }
    if (0..d).any(|u| (0..u).any(|v| y[u][v] != y[v][u])) {
        return Err(Error::Dimension("Y must be symmetric".into()));
    }
    let pairs: Vec<(usize, usize)> =
        (0..d).flat_map(|u| (u..d).map(move |v| (u, v))).filter(|&(u, v)| !y[u][v].is_zero()).collect();
    let parts = pairs
        .par_iter()
        .map(|&(u, v)| {
            let weight = if u == v { y[u][v].clone() } else { &y[u][v] * int(2) };
            Ok(unlabeled_product(&z[u], &z[v], n_target)?.scaled(&weight))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = QuantumGraph::zero(0, Basis::Ind);
    for p in &parts {
        out.add_scaled(p, &Rational::one());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::automorphism_count;

    fn g(s: &str) -> LabeledGraph {
        parse_graph(s).unwrap()
    }

    fn q(s: &str) -> QuantumGraph {
        QuantumGraph::parse(s, Basis::Ind).unwrap()
    }

    #[test]
    fn mobius_examples() {
        let k3 = LabeledGraph::complete(3).unwrap();
        assert_eq!(ind_expand(&k3), QuantumGraph::from_graph(&k3, Basis::Plain));
        let p3 = LabeledGraph::path(3).unwrap();
        let expected = &QuantumGraph::from_graph(&p3, Basis::Plain) - &QuantumGraph::from_graph(&k3, Basis::Plain);
        assert_eq!(ind_expand(&p3), expected);
        let e2 = LabeledGraph::empty(2, 0).unwrap();
        let k2 = LabeledGraph::complete(2).unwrap();
        let expected = &QuantumGraph::from_graph(&e2, Basis::Plain) - &QuantumGraph::from_graph(&k2, Basis::Plain);
        assert_eq!(ind_expand(&e2), expected);
    }

    #[test]
    fn zeta_examples() {
        let k3 = LabeledGraph::complete(3).unwrap();
        assert_eq!(zeta_expand(&k3), QuantumGraph::ind(&k3));
        let k2 = LabeledGraph::complete(2).unwrap();
        assert_eq!(zeta_expand(&k2), QuantumGraph::ind(&k2));
        let e2 = LabeledGraph::empty(2, 0).unwrap();
        assert_eq!(zeta_expand(&e2), &QuantumGraph::ind(&e2) + &QuantumGraph::ind(&k2));
    }

    #[test]
    fn product_examples() {
        let f = g("{1a}_{2, 1}");
        assert_eq!(product_ind(&f, &f).unwrap(), q("{1a, 1b}_{3, 1} + {1a, 1b, ab}_{3, 1}"));
        assert!(product_ind(&g("{12, 1a}_{3, 2}"), &g("{1a}_{3, 2}")).unwrap().is_zero());
        let sigma = g("{12}_{2, 2}");
        let flag = g("{12, 1a, 2b}_{4, 2}");
        assert_eq!(product_ind(&sigma, &flag).unwrap(), QuantumGraph::ind(&flag));
        assert!(matches!(product_ind(&f, &sigma), Err(Error::LabelMismatch(1, 2))));
    }

    #[test]
    fn plain_product_examples() {
        let f = g("{1a}_{2, 1}");
        assert_eq!(canonical(&product_plain(&f, &f).unwrap()), canonical(&g("{1a, 1b}_{3, 1}")));
        let e = g("{12}_{2, 2}");
        assert_eq!(product_plain(&e, &e).unwrap(), e);
        let unit = g("{}_{1, 1}");
        let h = g("{1a, ab, bc}_{4, 1}");
        assert_eq!(product_plain(&unit, &h).unwrap(), h);
        assert!(product_plain(&unit, &e).is_err());
    }

    #[test]
    fn lift_examples() {
        let k1 = LabeledGraph::empty(1, 0).unwrap();
        let e2 = LabeledGraph::empty(2, 0).unwrap();
        let k2 = LabeledGraph::complete(2).unwrap();
        assert_eq!(lift(&QuantumGraph::ind(&k1), 2).unwrap(), &QuantumGraph::ind(&e2) + &QuantumGraph::ind(&k2));
        let l3 = lift(&QuantumGraph::ind(&k1), 3).unwrap();
        assert_eq!(l3.coeff(&LabeledGraph::path(3).unwrap()), int(3));
        for (h, c) in l3.terms() {
            assert_eq!(*c, int(6 / automorphism_count(h) as i64));
        }
        let paw5 = lift(&QuantumGraph::ind(&LabeledGraph::paw()), 5).unwrap();
        assert_eq!(paw5.terms().map(|(_, c)| c.clone()).sum::<Rational>(), int(16));
        assert!(matches!(lift(&paw5, 4), Err(Error::ExceedsTarget { .. })));
    }

    #[test]
    fn unlabel_examples() {
        let k2 = QuantumGraph::ind(&LabeledGraph::complete(2).unwrap());
        assert_eq!(unlabel(&q("{1a}_{2, 1}")), k2);
        assert_eq!(unlabel(&q("{12}_{2, 2}")), k2);
        assert!(unlabel(&q("{1a, 1b}_{3, 1} - {1a, 1b}_{3, 1}")).is_zero());
    }

    #[test]
    fn quadratic_form_examples() {
        let z = vec![q("{1a}_{2, 1}")];
        assert!(quadratic_form(&z, &[vec![int(0)]], 3).unwrap().is_zero());
        let expected = &QuantumGraph::ind(&LabeledGraph::path(3).unwrap()) + &QuantumGraph::ind(&LabeledGraph::complete(3).unwrap());
        assert_eq!(quadratic_form(&z, &[vec![int(1)]], 3).unwrap(), expected);
        assert!(quadratic_form(&z, &[vec![int(1), int(0)]], 3).is_err());
        let z2 = vec![q("{1a}_{2, 1}"), q("{}_{2, 1}")];
        assert!(quadratic_form(&z2, &[vec![int(1), int(2)], vec![int(0), int(1)]], 3).is_err());
    }

    #[test]
    fn parse_and_display() {
        let x = q("{23, 3a}_{4, 3} - {23, 2a}_{4, 3}");
        assert_eq!(x.len(), 2);
        assert_eq!(x.k(), 3);
        let again = QuantumGraph::parse(&x.to_string(), Basis::Ind).unwrap();
        assert_eq!(again, x);
        let y = q("1/2*{1a}_{2, 1} + -3*{}_{2, 1}");
        assert_eq!(y.coeff(&g("{}_{2, 1}")), int(-3));
        assert!(QuantumGraph::parse("{1a}_{2, 1} + {12}_{2, 2}", Basis::Ind).is_err());
        assert!(QuantumGraph::parse("{1a}_{2, 1} +", Basis::Ind).is_err());
    }
}
