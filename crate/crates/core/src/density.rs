//! Exact homomorphism and induced densities against step graphons, rooted
//! densities, and brute-force induced-subgraph counting on finite graphs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Basis, QuantumGraph};
use crate::error::{Error, Result};
use crate::graph::{automorphism_count, canonical, Graph, HostGraph, LabeledGraph};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// A graphon constant on the blocks of a finite partition of `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepGraphon {
    weights: Vec<Rational>,
    values: Vec<Vec<Rational>>,
}

impl StepGraphon {
    /// Validates positive weights summing to one and a symmetric value
    /// matrix with entries in `[0, 1]`.
    pub fn new(weights: Vec<Rational>, values: Vec<Vec<Rational>>) -> Result<Self> {
        let p = weights.len();
        if p == 0 {
            return Err(Error::Graphon("no parts".into()));
        }
        if weights.iter().any(|w| *w <= Rational::zero()) {
            return Err(Error::Graphon("part weights must be positive".into()));
        }
        if weights.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::Graphon("part weights must sum to 1".into()));
        }
        if values.len() != p || values.iter().any(|r| r.len() != p) {
            return Err(Error::Graphon(format!("value matrix must be {p}x{p}")));
        }
        for i in 0..p {
            for j in 0..p {
                let v = &values[i][j];
                if *v < Rational::zero() || *v > Rational::one() {
                    return Err(Error::Graphon(format!("value {} outside [0,1]", format_rational(v))));
                }
                if values[j][i] != *v {
                    return Err(Error::Graphon("value matrix must be symmetric".into()));
                }
            }
        }
        Ok(StepGraphon { weights, values })
    }

    /// The constant graphon `p`.
    pub fn constant(p: Rational) -> Result<Self> {
        Self::new(vec![Rational::one()], vec![vec![p]])
    }

    pub fn parts(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn value(&self, i: usize, j: usize) -> &Rational {
        &self.values[i][j]
    }

    pub fn is_zero_one(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_zero() || v.is_one())
    }

    /// `1 - w`, diagonal included.
    pub fn complement(&self) -> StepGraphon {
        let values = self.values.iter().map(|r| r.iter().map(|v| Rational::one() - v).collect()).collect();
        StepGraphon { weights: self.weights.clone(), values }
    }
}

/// `w_G`: `n` equal parts with the adjacency matrix as values.
pub fn step_graphon_of(g: &HostGraph) -> StepGraphon {
    let n = g.n().max(1);
    let weight = Rational::new(BigInt::one(), BigInt::from(n));
    let values = (0..g.n())
        .map(|i| (0..g.n()).map(|j| if g.has_edge(i, j) { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    StepGraphon { weights: vec![weight; g.n()], values }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pair {
    Edge,
    NonEdge,
    Free,
}

/// Expectation over independent part choices for vertices `k..n` (vertices
/// `0..k` pinned to `pinned`) of the product of per-pair factors.
fn expectation(n: usize, pairs: &[Vec<Pair>], pinned: &[usize], w: &StepGraphon) -> Rational {
    let p = w.parts();
    let co: Vec<Vec<Rational>> = w.values.iter().map(|r| r.iter().map(|v| Rational::one() - v).collect()).collect();
    let mut assign = vec![0usize; n];
    let mut total = Rational::zero();

    fn factor(pairs: &[Vec<Pair>], assign: &[usize], depth: usize, part: usize, w: &StepGraphon, co: &[Vec<Rational>]) -> Option<Rational> {
        let mut f = Rational::one();
        for u in 0..depth {
            let v = match pairs[u][depth] {
                Pair::Edge => &w.values[assign[u]][part],
                Pair::NonEdge => &co[assign[u]][part],
                Pair::Free => continue,
            };
            if v.is_zero() {
                return None;
            }
            if !v.is_one() {
                f *= v;
            }
        }
        Some(f)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        depth: usize,
        n: usize,
        pairs: &[Vec<Pair>],
        pinned: &[usize],
        w: &StepGraphon,
        co: &[Vec<Rational>],
        assign: &mut Vec<usize>,
        acc: Rational,
        total: &mut Rational,
        p: usize,
    ) {
        if depth == n {
            *total += acc;
            return;
        }
        if depth < pinned.len() {
            let part = pinned[depth];
            if let Some(f) = factor(pairs, assign, depth, part, w, co) {
                assign[depth] = part;
                dfs(depth + 1, n, pairs, pinned, w, co, assign, acc * f, total, p);
            }
            return;
        }
        for part in 0..p {
            if let Some(f) = factor(pairs, assign, depth, part, w, co) {
                assign[depth] = part;
                dfs(depth + 1, n, pairs, pinned, w, co, assign, &acc * f * &w.weights[part], total, p);
            }
        }
    }

    dfs(0, n, pairs, pinned, w, &co, &mut assign, Rational::one(), &mut total, p);
    total
}

fn pair_table(h: &LabeledGraph, induced: bool) -> Vec<Vec<Pair>> {
    let n = h.n();
    (0..n)
        .map(|u| {
            (0..n)
                .map(|v| match (h.has_edge(u, v), induced) {
                    (true, _) => Pair::Edge,
                    (false, true) => Pair::NonEdge,
                    (false, false) => Pair::Free,
                })
                .collect()
        })
        .collect()
}

/// Homomorphism density `t(h; w)`.
pub fn t_hom(h: &Graph, w: &StepGraphon) -> Rational {
    expectation(h.n(), &pair_table(h, false), &[], w)
}

/// Induced density `t_ind(h; w)`; non-edges contribute `1 - w`.
pub fn t_ind_graph(h: &Graph, w: &StepGraphon) -> Rational {
    expectation(h.n(), &pair_table(h, true), &[], w)
}

/// Homomorphism density with labeled vertex `i` pinned to part `psi[i]`.
pub fn t_hom_rooted(f: &LabeledGraph, psi: &[usize], w: &StepGraphon) -> Result<Rational> {
    check_roots(f, psi, w)?;
    Ok(expectation(f.n(), &pair_table(f, false), psi, w))
}

/// Induced density with labeled vertex `i` pinned to part `psi[i]`. Pinned
/// vertices carry no weight factor.
pub fn t_ind_rooted(f: &LabeledGraph, psi: &[usize], w: &StepGraphon) -> Result<Rational> {
    check_roots(f, psi, w)?;
    Ok(expectation(f.n(), &pair_table(f, true), psi, w))
}

fn check_roots(f: &LabeledGraph, psi: &[usize], w: &StepGraphon) -> Result<()> {
    if psi.len() != f.k() {
        return Err(Error::Dimension(format!("{} roots for {} labels", psi.len(), f.k())));
    }
    if let Some(&bad) = psi.iter().find(|&&p| p >= w.parts()) {
        return Err(Error::Graphon(format!("part index {bad} out of range ({} parts)", w.parts())));
    }
    Ok(())
}

/// Linear evaluation of a quantum graph (any label count) at root
/// assignment `psi`.
pub fn eval_rooted(q: &QuantumGraph, psi: &[usize], w: &StepGraphon) -> Result<Rational> {
    let mut total = Rational::zero();
    for (g, c) in q.terms() {
        let t = match q.basis() {
            Basis::Plain => t_hom_rooted(g, psi, w)?,
            Basis::Ind => t_ind_rooted(g, psi, w)?,
        };
        total += c * t;
    }
    Ok(total)
}

/// Linear evaluation of an unlabeled quantum graph.
pub fn eval_quantum(q: &QuantumGraph, w: &StepGraphon) -> Result<Rational> {
    if q.k() != 0 {
        return Err(Error::LabelMismatch(q.k(), 0));
    }
    eval_rooted(q, &[], w)
}

/// Every assignment of `k` labels to the parts of `w`, with its probability.
pub fn root_assignments(k: usize, w: &StepGraphon) -> Vec<(Vec<usize>, Rational)> {
    let mut out = vec![(Vec::new(), Rational::one())];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|(psi, pr)| {
                (0..w.parts()).map(move |p| {
                    let mut next = psi.clone();
                    next.push(p);
                    (next, &pr * &w.weights[p])
                })
            })
            .collect();
    }
    out
}

/// `t_ind(H; w)` for every `n`-vertex class `H` at once, by classifying each
/// vertex-to-part map. Requires a 0/1-valued graphon.
pub fn ind_profile(n: usize, w: &StepGraphon) -> Result<BTreeMap<Graph, Rational>> {
    if !w.is_zero_one() {
        return Err(Error::Graphon("induced profiles need a 0/1-valued graphon".into()));
    }
    let p = w.parts();
    let mut mass: BTreeMap<Graph, Rational> = BTreeMap::new();
    let mut assign = vec![0usize; n];
    loop {
        let mut g = LabeledGraph::empty(n, 0)?;
        let mut weight = Rational::one();
        for u in 0..n {
            weight *= &w.weights[assign[u]];
            for v in u + 1..n {
                if w.values[assign[u]][assign[v]].is_one() {
                    g = g.with_edge(u, v, true);
                }
            }
        }
        *mass.entry(canonical(&g)).or_insert_with(Rational::zero) += weight;
        // odometer
        let mut i = 0;
        while i < n {
            assign[i] += 1;
            if assign[i] < p {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    // mass of a class is (labeled copies) * t_ind of one labeled copy
    let n_fact: u64 = (1..=n as u64).product();
    Ok(mass
        .into_iter()
        .map(|(h, m)| {
            let copies = Rational::new(BigInt::from(n_fact), BigInt::from(automorphism_count(&h)));
            (h, m / copies)
        })
        .collect())
}

/// Induced copies of `h` in `g` and the normalized density
/// `I(h; g) / C(|g|, |h|)`.
pub fn count_induced(h: &Graph, g: &HostGraph) -> Result<(u64, Rational)> {
    let (k, n) = (h.n(), g.n());
    if k > n {
        return Err(Error::Dimension(format!("pattern with {k} vertices in host with {n}")));
    }
    let target = canonical(&h.unlabeled());
    let mut count = 0u64;
    let mut total = 0u64;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        total += 1;
        if canonical(&g.induced(&subset)?) == target {
            count += 1;
        }
        // next k-combination
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else { break };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Ok((count, Rational::new(BigInt::from(count), BigInt::from(total))))
}

/// Fraction of injective maps `V(h) -> V(g)` that are homomorphisms.
pub fn t_inj(h: &Graph, g: &HostGraph) -> Result<Rational> {
    let (k, n) = (h.n(), g.n());
    if k > n {
        return Err(Error::Dimension(format!("pattern with {k} vertices in host with {n}")));
    }
    let edges: Vec<_> = h.edges().collect();
    let mut image = vec![0usize; k];
    let mut used = vec![false; n];
    let (mut hits, mut total) = (0u64, 0u64);

    fn rec(d: usize, k: usize, n: usize, edges: &[(usize, usize)], g: &HostGraph, image: &mut [usize], used: &mut [bool], hits: &mut u64, total: &mut u64) {
        if d == k {
            *total += 1;
            if edges.iter().all(|&(u, v)| g.has_edge(image[u], image[v])) {
                *hits += 1;
            }
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                image[d] = x;
                rec(d + 1, k, n, edges, g, image, used, hits, total);
                used[x] = false;
            }
        }
    }
    rec(0, k, n, &edges, g, &mut image, &mut used, &mut hits, &mut total);
    Ok(Rational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Converts a graphon induced density to the inducibility scale:
/// `i = t_ind * |V(h)|! / |Aut(h)|`.
pub fn inducibility_from_tind(h: &Graph, tind: &Rational) -> Result<Rational> {
    if *tind < Rational::zero() || *tind > Rational::one() {
        return Err(Error::Dimension(format!("density {} outside [0,1]", format_rational(tind))));
    }
    let n_fact: i64 = (1..=h.n() as i64).product();
    Ok(tind * int(n_fact) / int(automorphism_count(h) as i64))
}

/// Parses `parts: w_1 .. w_p` followed by `p` rows of `p` values.
pub fn parse_graphon(text: &str) -> Result<StepGraphon> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty graphon file"))?;
    let rest = header.strip_prefix("parts:").ok_or_else(|| Error::parse(ln, "expected `parts:` header"))?;
    let weights = rest
        .split_whitespace()
        .map(parse_rational)
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::parse(ln, e.to_string()))?;
    let mut values = Vec::new();
    for _ in 0..weights.len() {
        let (ln, row) = lines.next().ok_or_else(|| Error::parse(ln, "missing value rows"))?;
        let row = row
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::parse(ln, e.to_string()))?;
        values.push(row);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "unexpected trailing content"));
    }
    StepGraphon::new(weights, values)
}

/// Named constructions: `k<n>` (the graphon of `K_n`), `k2uk2`,
/// `complement(<name>)` (the graphon `1 - w`), `paley<q>`, `const p/q`, or
/// an unlabeled graph string such as `{ab, bc}_{3, 0}`.
pub fn builtin_graphon(name: &str) -> Result<StepGraphon> {
    let name = name.trim();
    let bad = || Error::Graphon(format!("unknown graphon `{name}`"));
    if let Some(inner) = name.strip_prefix("complement(").and_then(|r| r.strip_suffix(')')) {
        return Ok(builtin_graphon(inner)?.complement());
    }
    if let Some(p) = name.strip_prefix("const") {
        let p = p.trim().trim_start_matches('(').trim_end_matches(')').trim();
        return StepGraphon::constant(parse_rational(p)?);
    }
    if name == "k2uk2" {
        let k2 = HostGraph::from(&LabeledGraph::complete(2)?);
        return Ok(step_graphon_of(&k2.disjoint_union(&k2)));
    }
    if let Some(q) = name.strip_prefix("paley") {
        let q: usize = q.parse().map_err(|_| bad())?;
        return Ok(step_graphon_of(&HostGraph::paley(q)?));
    }
    if let Some(n) = name.strip_prefix('k') {
        let n: usize = n.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let mut g = HostGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        return Ok(step_graphon_of(&g));
    }
    if name.starts_with('{') {
        let g = crate::graph::parse_graph(name)?;
        if g.k() != 0 {
            return Err(Error::Graphon("graph graphons must be unlabeled".into()));
        }
        return Ok(step_graphon_of(&HostGraph::from(&g)));
    }
    Err(bad())
}

pub fn format_graphon(w: &StepGraphon) -> String {
    let mut out = String::from("parts:");
    for x in &w.weights {
        write!(out, " {}", format_rational(x)).unwrap();
    }
    out.push('\n');
    for row in &w.values {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
