mod common;

use expander_forge_core::*;
use proptest::prelude::*;

fn lps_with_spectrum(p: i64, q: i64) -> (LpsGraph, Spectrum) {
    let x = build_lps(p, q).unwrap();
    let s = eigenvalues(&x.graph).unwrap();
    (x, s)
}

fn assert_trace_and_moment(g: &Graph, s: &Spectrum) {
    let n = g.n() as f64;
    let trace: f64 = s.eigenvalues().iter().sum();
    let moment: f64 = s.eigenvalues().iter().map(|x| x * x).sum();
    assert!(trace.abs() <= 1e-6 * n, "trace {trace}");
    let two_e = 2.0 * g.edge_count() as f64;
    assert!((moment - two_e).abs() <= 1e-6 * two_e.max(1.0), "moment {moment} vs {two_e}");
    let grouped: usize = s.grouped().iter().map(|(_, m)| m).sum();
    assert_eq!(grouped, g.n());
}

#[test]
fn three_eleven_grouping() {
    let (x, s) = lps_with_spectrum(3, 11);
    let groups = group_multiplicities(&s, 1e-6).unwrap();
    assert_eq!(groups.len(), 26);
    let lowest = *groups.last().unwrap();
    assert_eq!(round4(lowest.0), -3.2361);
    assert_eq!(lowest.1, 30);
    assert_trace_and_moment(&x.graph, &s);
    let c = certify(&x.graph, &s).unwrap();
    assert!(c.is_ramanujan && c.is_connected && !c.is_bipartite_spectral);
}

#[test]
fn perron_and_bipartite_invariants() {
    for (p, q) in [(3, 5), (3, 7), (5, 7), (3, 11)] {
        let (x, s) = lps_with_spectrum(p, q);
        let k = (p + 1) as f64;
        assert_trace_and_moment(&x.graph, &s);
        assert!((s.lambda0() - k).abs() < 1e-9);
        assert_eq!(s.grouped()[0].1, 1);
        let detected = detect_bipartition(&x.graph).unwrap().is_some();
        assert_eq!(s.contains(-k, 1e-6), detected, "({p},{q})");
        let c = certify(&x.graph, &s).unwrap();
        assert_eq!(c.is_bipartite_spectral, detected);
        assert_eq!(c.spectrally_connected(), c.is_connected);
    }
}

#[test]
fn five_eleven_is_ramanujan() {
    let (x, s) = lps_with_spectrum(5, 11);
    let c = certify(&x.graph, &s).unwrap();
    assert!(c.is_ramanujan);
    assert!((c.ramanujan_bound - 2.0 * 5f64.sqrt()).abs() < 1e-15);
    let second = s.grouped()[1];
    assert_eq!((round4(second.0), second.1), (4.3723, 10));
}

#[test]
fn removing_a_matching_splits_multiplicities() {
    let (x, base) = lps_with_spectrum(3, 5);
    let max_base = base.grouped().iter().map(|g| g.1).max().unwrap();
    assert_eq!(max_base, 30);
    let f = perfect_matching_bipartite(&x.graph, MatchingSeed(0)).unwrap();
    let y = remove_matching(&x.graph, &f).unwrap();
    assert_eq!(y.n(), 120);
    assert_eq!(y.regular_degree(), Some(3));
    let s = eigenvalues(&y).unwrap();
    assert_trace_and_moment(&y, &s);
    assert!(s.grouped().iter().all(|g| g.1 < max_base));
    // still bipartite: spectrum symmetric
    let ev = s.eigenvalues();
    for j in 0..ev.len() {
        assert!((ev[j] + ev[ev.len() - 1 - j]).abs() < 1e-8);
    }
}

#[test]
fn minus_gaps_for_three_five() {
    let (x, base) = lps_with_spectrum(3, 5);
    let sample = sample_matchings(&x.graph, 4, MatchingSeed(0)).unwrap();
    assert!(sample.is_complete());
    for f in &sample.matchings {
        let s = eigenvalues(&remove_matching(&x.graph, f).unwrap()).unwrap();
        let gap = 3.0 - s.lambda1();
        assert!(gap > 0.0);
        // lambda_1 moves by at most one from 3
        assert!(gap <= 1.0 + 1e-9);
        assert!(check_weyl_bound(&base, &s).unwrap().holds);
    }
}

#[test]
fn plus_matching_on_five_seven() {
    let (x, base) = lps_with_spectrum(5, 7);
    let comp = bipartite_complement(&x.graph).unwrap();
    for seed in 0..3 {
        let f = perfect_matching_bipartite(&comp, MatchingSeed(seed)).unwrap();
        let y = add_matching(&x.graph, &f).unwrap();
        assert_eq!(y.regular_degree(), Some(7));
        assert!(y.is_bipartite_flagged());
        let s = eigenvalues(&y).unwrap();
        assert!((s.lambda0() - 7.0).abs() < 1e-9);
        let w = check_weyl_bound(&base, &s).unwrap();
        assert!(w.holds);
        assert!((s.lambda0() - base.lambda0() - 1.0).abs() < 1e-9);
        let c = certify(&y, &s).unwrap();
        assert!(c.gap >= gap_lower_bound(5, Direction::Plus));
    }
}

#[test]
fn five_seven_minus_drops_top_eigenvalue() {
    let (x, base) = lps_with_spectrum(5, 7);
    let f = perfect_matching_bipartite(&x.graph, MatchingSeed(2)).unwrap();
    let s = eigenvalues(&remove_matching(&x.graph, &f).unwrap()).unwrap();
    assert!((s.lambda0() - 5.0).abs() < 1e-9);
    assert!(s.lambda0() < base.lambda0());
    assert!(check_weyl_bound(&base, &s).unwrap().holds);
}

#[test]
fn matching_operator_norm_is_one() {
    let x = build_lps(3, 7).unwrap();
    let f = perfect_matching_bipartite(&x.graph, MatchingSeed(9)).unwrap();
    let s = eigenvalues(&f.as_graph()).unwrap();
    assert_eq!(s.grouped().len(), 2);
    assert!((s.lambda0() - 1.0).abs() < 1e-12);
    assert!((s.eigenvalues().last().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn matching_is_reproducible_per_seed() {
    let x = build_lps(3, 5).unwrap();
    let a = perfect_matching_bipartite(&x.graph, MatchingSeed(42)).unwrap();
    let b = perfect_matching_bipartite(&x.graph, MatchingSeed(42)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn small_oracle_examples() {
    // K4 and the 4-cycle against exact roots
    for g in [Graph::complete(4), Graph::cycle(4), Graph::cycle(5)] {
        let exact = common::oracle_eigenvalues(&g);
        let ours = eigenvalues(&g).unwrap();
        for (a, b) in ours.eigenvalues().iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }
    assert_eq!(common::charpoly(&Graph::complete(3)), vec![1, 0, -3, -2]);
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..=8).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mask = bits.iter().enumerate().fold(0u64, |m, (i, &b)| m | (u64::from(b) << i));
            common::graph_from_mask(n, mask)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigensolver_agrees_with_exact_roots(g in arb_graph()) {
        let exact = common::oracle_eigenvalues(&g);
        let ours = eigenvalues(&g).unwrap();
        prop_assert_eq!(exact.len(), g.n());
        for (a, b) in ours.eigenvalues().iter().zip(&exact) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn weyl_bound_for_any_matching_removal(g in arb_graph(), seed in any::<u64>()) {
        // greedily pick a matching from the graph's own edges
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut edges: Vec<_> = g.edges().collect();
        edges.shuffle(&mut rng);
        let mut used = vec![false; g.n()];
        let mut picked = Vec::new();
        for (u, v) in edges {
            if !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                picked.push((u, v));
            }
        }
        let mut remaining: Vec<_> = g.edges().filter(|e| !picked.contains(e)).collect();
        remaining.sort_unstable();
        let h = Graph::from_edges(g.n(), &remaining).unwrap();
        let w = check_weyl_bound(&eigenvalues(&g).unwrap(), &eigenvalues(&h).unwrap()).unwrap();
        prop_assert!(w.holds, "deviation {}", w.max_deviation);
    }
}
