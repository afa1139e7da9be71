mod common;

use common::{random_host, rng};
use flagcert::certificate::{psd_check_exact, target_vector, PsdCheck, K112_CERTIFICATE, PAW_CERTIFICATE, PAW_PRINTED_CERTIFICATE};
use flagcert::density::{ind_profile, step_graphon_of, t_ind_graph};
use flagcert::linalg::quadratic;
use flagcert::rational::{ratio, Rational};
use flagcert::Certificate;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

/// For random hosts: `bound - t_ind(target) >= Σ β_i x_i >= 0` where `x` is the host's profile.
fn soundness_sample(text: &str, hosts: usize, max_n: usize, seed: u64) {
    let cert = Certificate::load(text).unwrap();
    let report = cert.verify().unwrap();
    assert!(report.accepted);
    let alpha = target_vector(&cert.target, &cert.bound, cert.n, &report.classes).unwrap();
    let beta: Vec<Rational> = alpha.iter().zip(&report.slacks).map(|(a, s)| a - s).collect();
    let mut r = rng(seed);
    for _ in 0..hosts {
        let n = r.random_range(1..=max_n);
        let w = step_graphon_of(&random_host(&mut r, n));
        let prof = ind_profile(cert.n, &w).unwrap();
        let sos: Rational = report.classes.iter().zip(&beta).map(|(h, b)| b * prof.get(h).cloned().unwrap_or_else(Rational::zero)).sum();
        assert!(sos >= Rational::zero());
        assert!(&cert.bound - t_ind_graph(&cert.target, &w) >= sos);
    }
}

#[test]
fn paw_soundness_sampling() {
    soundness_sample(PAW_CERTIFICATE, 200, 6, 31);
}

#[test]
fn k112_soundness_sampling() {
    soundness_sample(K112_CERTIFICATE, 10, 5, 32);
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = ratio(1, 1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for j in c..n {
                let sub = &f * &m[c][j];
                m[r][j] -= sub;
            }
        }
    }
    d
}

/// PSD iff every principal minor is nonnegative.
fn minors_oracle(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    (1u32..1 << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        det(idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect()) >= Rational::zero()
    })
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<Rational>>> {
    // B B^T (PSD, often singular) or an arbitrary symmetric matrix
    (1usize..=5, 1usize..=5, any::<bool>()).prop_flat_map(|(n, rank, gram)| {
        prop::collection::vec((-4i64..=4, 1i64..=3), n * n.max(rank)).prop_map(move |raw| {
            let q: Vec<Rational> = raw.into_iter().map(|(p, d)| ratio(p, d)).collect();
            if gram {
                let b: Vec<Vec<Rational>> = (0..n).map(|i| (0..rank).map(|j| q[i * rank + j].clone()).collect()).collect();
                (0..n).map(|i| (0..n).map(|j| (0..rank).map(|t| &b[i][t] * &b[j][t]).sum()).collect()).collect()
            } else {
                (0..n).map(|i| (0..n).map(|j| q[i.min(j) * n + i.max(j)].clone()).collect()).collect()
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn psd_check_agrees_with_principal_minors(m in matrix_strategy()) {
        let verdict = psd_check_exact(&m).unwrap();
        prop_assert_eq!(verdict.is_psd(), minors_oracle(&m));
        if let PsdCheck::NotPsd { witness } = verdict {
            prop_assert!(quadratic(&m, &witness).is_negative());
        }
    }
}

#[test]
fn verify_is_invariant_under_permutations() {
    let cert = Certificate::load(PAW_CERTIFICATE).unwrap();
    let base = cert.verify().unwrap();
    let mut r = rng(33);
    for _ in 0..5 {
        let mut c = cert.clone();
        // shuffle blocks
        for i in (1..c.blocks.len()).rev() {
            let j = r.random_range(0..=i);
            c.blocks.swap(i, j);
        }
        // permute each block's flags together with Y's rows and columns
        for b in &mut c.blocks {
            let d = b.flags.len();
            let mut p: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                p.swap(i, r.random_range(0..=i));
            }
            b.flags = p.iter().map(|&i| b.flags[i].clone()).collect();
            b.y = p.iter().map(|&i| p.iter().map(|&j| b.y[i][j].clone()).collect()).collect();
        }
        let report = c.verify().unwrap();
        assert_eq!(report.slacks, base.slacks);
        assert!(report.accepted);
    }
}

#[test]
fn save_load_preserves_verdict_and_slacks() {
    for text in [PAW_CERTIFICATE, PAW_PRINTED_CERTIFICATE] {
        let c = Certificate::load(text).unwrap();
        let back = Certificate::load(&c.save()).unwrap();
        assert_eq!(back, c);
        let (a, b) = (c.verify().unwrap(), back.verify().unwrap());
        assert_eq!(a.accepted, b.accepted);
        assert_eq!(a.slacks, b.slacks);
    }
}

#[test]
fn negated_entry_is_rejected() {
    let cert = Certificate::load(PAW_CERTIFICATE).unwrap();
    for b in 0..cert.blocks.len() {
        let mut c = cert.clone();
        let v = -c.blocks[b].y[0][0].clone();
        c.blocks[b].y[0][0] = v;
        let report = c.verify().unwrap();
        assert!(!report.accepted, "block {b}");
        assert!(!report.non_psd_blocks().is_empty() || !report.failing_classes().is_empty());
    }
}
