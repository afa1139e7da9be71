mod common;

use common::{random_host, rng};
use flagcert::density::{ind_profile, step_graphon_of, t_ind_graph};
use flagcert::graph::{enumerate_graphs, parse_graph, LabeledGraph};
use flagcert::rational::Rational;
use flagcert::sdp::{assemble, build_bases, objective_for_inducibility, SdpaData};
use flagcert::{certificate::psd_check_exact, SdpProblem};
use num_traits::{One, Zero};
use rand::Rng;

fn paw_problem() -> SdpProblem {
    let paw = LabeledGraph::paw();
    let obj = objective_for_inducibility(&paw, 5).unwrap();
    assemble(&obj, &build_bases(5, 3, false, false, &[]).unwrap(), 5).unwrap().with_target("paw", &paw)
}

fn profile(p: &SdpProblem, g: &flagcert::HostGraph) -> Vec<Rational> {
    let prof = ind_profile(p.n, &step_graphon_of(g)).unwrap();
    p.classes.iter().map(|h| prof.get(h).cloned().unwrap_or_else(Rational::zero)).collect()
}

#[test]
fn blocks_are_psd_on_graph_profiles() {
    let p = paw_problem();
    let mut r = rng(21);
    let mut hosts: Vec<_> = (1..=4).flat_map(|n| enumerate_graphs(n).unwrap()).map(|g| flagcert::HostGraph::from(&g)).collect();
    hosts.extend((0..20).map(|_| {
        let n = r.random_range(5..=6);
        random_host(&mut r, n)
    }));
    let paw = LabeledGraph::paw();
    for g in &hosts {
        let x = profile(&p, g);
        for block in &p.blocks {
            assert!(psd_check_exact(&block.evaluate(&x)).unwrap().is_psd());
        }
        let norm: Rational = p.normalization.iter().zip(&x).map(|(c, v)| c * v).sum();
        assert_eq!(norm, Rational::one());
        assert_eq!(p.objective_value(&x), -t_ind_graph(&paw, &step_graphon_of(g)));
    }
}

#[test]
fn goodman_blocks_are_psd() {
    // K_2 ∪ K_2 has four vertices, so the smallest program lives at N = 4
    let obj = flagcert::sdp::objective_for(&flagcert::sdp::goodman_objective(), 4).unwrap();
    let p = assemble(&obj, &build_bases(4, 2, false, false, &[]).unwrap(), 4).unwrap();
    let mut r = rng(22);
    for _ in 0..30 {
        let n = r.random_range(1..=6);
        let g = random_host(&mut r, n);
        let x = profile(&p, &g);
        assert!(p.objective_value(&x) >= Rational::zero());
        for block in &p.blocks {
            assert!(psd_check_exact(&block.evaluate(&x)).unwrap().is_psd());
        }
    }
}

#[test]
fn sdpa_round_trip_and_golden_emission() {
    let p = paw_problem();
    let text = p.emit_sdpa();
    assert_eq!(SdpaData::parse(&text).unwrap(), p.to_sdpa());
    assert_eq!(paw_problem().emit_sdpa(), text);
    assert_eq!(text, include_str!("golden/paw_n5_l3.sdpa"));
}

#[test]
fn sdpa_layout() {
    let data = paw_problem().to_sdpa();
    assert_eq!(data.m, 34);
    assert_eq!(data.block_sizes.last(), Some(&-2));
    assert_eq!(data.block_sizes[data.block_sizes.len() - 2], -34);
    assert!(data.entries.iter().all(|e| e.i <= e.j));
    let f0: Vec<_> = data.entries.iter().filter(|e| e.matno == 0).collect();
    assert_eq!(f0.len(), 2);
    assert!(f0.iter().all(|e| e.block == data.block_sizes.len()));
}

#[test]
fn reductions_shrink_the_program() {
    let full = build_bases(5, 3, false, false, &[]).unwrap();
    let dedup = build_bases(5, 3, true, false, &[]).unwrap();
    let w0 = flagcert::density::builtin_graphon("complement(k2uk2)").unwrap();
    let delta = build_bases(5, 3, true, false, &[w0]).unwrap();
    let dims = |b: &[flagcert::FlagBasis]| b.iter().map(|x| x.len()).sum::<usize>();
    assert!(dims(&dedup) < dims(&full));
    assert!(dims(&delta) < dims(&dedup));
    let k3 = parse_graph("{12, 13, 23}_{3, 3}").unwrap();
    assert!(dedup.iter().any(|b| *b.sigma() == k3));
}
