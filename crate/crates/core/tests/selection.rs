use proptest::prelude::*;

use pagtc_core::io::{load_bundled, parse_edge_list, write_edge_list};
use pagtc_core::seedopt::{solve, subset_count, Algorithm, DEFAULT_SUBSET_GUARD};
use pagtc_core::targeting::{choose_next, growth_curve};
use pagtc_core::{
    full_influence, one_round_influence, run_targeted, ContagionParams, Graph, NodeSet, Objective,
    SeedProblem, TargetingStrategy,
};

fn params(k: usize) -> ContagionParams {
    ContagionParams::new(k).unwrap()
}

fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        // a random spanning tree plus extra edges keeps the graph connected
        let tree = proptest::collection::vec(any::<prop::sample::Index>(), n - 1);
        let extra = proptest::collection::vec((0..n, 0..n), 0..2 * n);
        (tree, extra).prop_map(move |(tree, extra)| {
            let mut edges: Vec<(usize, usize)> = tree
                .iter()
                .enumerate()
                .map(|(i, p)| (i + 1, p.index(i + 1)))
                .collect();
            edges.extend(extra);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn solutions_are_consistent_and_dominated_by_optimum(g in connected_graph(10), k in 1..=3usize, r_pick in any::<prop::sample::Index>(), full in any::<bool>()) {
        let n = g.node_count();
        let r = 1 + r_pick.index(n - 1);
        let objective = if full { Objective::Full } else { Objective::OneRound };
        let problem = SeedProblem::new(&g, objective, r, params(k)).unwrap();
        let opt = solve(&g, &problem, Algorithm::Optimal, DEFAULT_SUBSET_GUARD).unwrap();
        for alg in Algorithm::ALL {
            let sol = solve(&g, &problem, alg, DEFAULT_SUBSET_GUARD).unwrap();
            let set = sol.seed_set(n);
            prop_assert_eq!(sol.seeds.len(), r);
            prop_assert_eq!(set.len(), r);
            prop_assert_eq!(sol.one_round_value, one_round_influence(&g, &set, params(k)));
            prop_assert_eq!(sol.full_value, full_influence(&g, &set, params(k)));
            prop_assert!(sol.full_value >= sol.one_round_value && sol.one_round_value >= r);
            prop_assert!(sol.value() <= opt.value(), "{:?}", alg);
        }
    }

    #[test]
    fn single_seed_pagtc_equals_greedy(g in connected_graph(12), k in 1..=4usize) {
        let problem = SeedProblem::new(&g, Objective::OneRound, 1, params(k)).unwrap();
        let greedy = solve(&g, &problem, Algorithm::Greedy, 0).unwrap();
        let pagtc = solve(&g, &problem, Algorithm::PagtcDelta, 0).unwrap();
        prop_assert_eq!(greedy.seeds, pagtc.seeds);
    }

    #[test]
    fn greedy_bound_for_simple_contagion(g in connected_graph(10), r_pick in any::<prop::sample::Index>()) {
        let n = g.node_count();
        let r = 1 + r_pick.index(n - 1);
        let problem = SeedProblem::new(&g, Objective::OneRound, r, params(1)).unwrap();
        let greedy = solve(&g, &problem, Algorithm::Greedy, 0).unwrap().one_round_value as f64;
        let opt = solve(&g, &problem, Algorithm::Optimal, DEFAULT_SUBSET_GUARD).unwrap().one_round_value as f64;
        prop_assert!(greedy >= (1.0 - (-1.0f64).exp()) * opt);
    }

    #[test]
    fn degenerate_truncation_is_greedy(g in connected_graph(12), k in 1..=3usize) {
        let dirac_like = run_targeted(&g, params(k), TargetingStrategy::PagtcTruncated(1e-9)).unwrap();
        let greedy = run_targeted(&g, params(k), TargetingStrategy::GreedyOneRound).unwrap();
        prop_assert_eq!(dirac_like, greedy);
    }

    #[test]
    fn traces_are_well_formed(g in connected_graph(12), k in 1..=4usize, which in 0..6usize) {
        let strategy = [
            TargetingStrategy::Degree,
            TargetingStrategy::GreedyOneRound,
            TargetingStrategy::GreedyFull,
            TargetingStrategy::PagtcShapley,
            TargetingStrategy::PagtcTruncated(0.5),
            TargetingStrategy::PagtcTruncated(1.0),
        ][which];
        let n = g.node_count();
        let trace = run_targeted(&g, params(k), strategy).unwrap();
        prop_assert!(trace.active_history.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(*trace.active_history.last().unwrap(), n);
        prop_assert!(trace.chosen.len() <= trace.rounds && trace.rounds <= n);
        if k == 1 {
            prop_assert!(trace.rounds <= g.diameter().unwrap() + 1);
        }
        if k > g.max_degree() {
            prop_assert_eq!(trace.rounds, n);
            prop_assert_eq!(trace.chosen.len(), n);
        }
    }

    #[test]
    fn edge_list_round_trip(g in connected_graph(20)) {
        let back = parse_edge_list(&write_edge_list(&g), false).unwrap();
        prop_assert_eq!(back.node_count(), g.node_count());
        let relabel = |u: usize| g.resolve(&back.label(u)).unwrap();
        let mut edges: Vec<_> = back.edges().map(|(a, b)| {
            let (a, b) = (relabel(a), relabel(b));
            (a.min(b), a.max(b))
        }).collect();
        edges.sort_unstable();
        prop_assert_eq!(edges, g.edges().collect::<Vec<_>>());
    }
}

#[test]
fn bundled_datasets_have_expected_sizes() {
    for (name, n, m) in [
        ("flor-families", 15, 20),
        ("les-miserables", 77, 254),
        ("fig2-grid", 25, 54),
    ] {
        let g = load_bundled(name).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (n, m), "{name}");
        assert!(g.is_connected(), "{name}");
    }
    assert!(load_bundled("nope").is_err());
}

#[test]
fn flor_families_targeting_by_degree() {
    let g = load_bundled("flor-families").unwrap();
    let trace = run_targeted(&g, params(4), TargetingStrategy::Degree).unwrap();
    assert_eq!(trace.rounds, 15);
    assert_eq!(format!("{:.1}", trace.normalized_rounds(15)), "100.0");
}

#[test]
fn focused_beta_grows_faster_early() {
    let g = load_bundled("les-miserables").unwrap();
    for k in [2, 3] {
        let narrow = run_targeted(&g, params(k), TargetingStrategy::PagtcTruncated(0.25)).unwrap();
        let wide = run_targeted(&g, params(k), TargetingStrategy::PagtcTruncated(1.0)).unwrap();
        let quarter = narrow.rounds.min(wide.rounds) / 4;
        let early = |h: &[usize]| h[..quarter].iter().sum::<usize>();
        assert!(
            early(&narrow.active_history) >= early(&wide.active_history),
            "K={k}: {} vs {}",
            growth_curve(&narrow),
            growth_curve(&wide)
        );
    }
}

#[test]
fn star_center_is_the_degree_choice() {
    let star = Graph::from_edges(5, [(0, 4), (1, 4), (2, 4), (3, 4)]).unwrap();
    let empty = NodeSet::new(5);
    assert_eq!(
        choose_next(&star, &empty, params(2), TargetingStrategy::Degree).unwrap(),
        4
    );
}

#[test]
fn fig2_grid_selection() {
    let g = load_bundled("fig2-grid").unwrap();
    let problem = SeedProblem::new(&g, Objective::OneRound, 7, params(3)).unwrap();
    assert_eq!(
        solve(&g, &problem, Algorithm::PagtcDelta, 0)
            .unwrap()
            .one_round_value,
        14
    );
    assert!(
        solve(&g, &problem, Algorithm::Greedy, 0)
            .unwrap()
            .one_round_value
            <= 14
    );
    assert_eq!(subset_count(25, 7), 480_700);
}

#[test]
fn flor_families_one_round_optimum() {
    let g = load_bundled("flor-families").unwrap();
    let problem = SeedProblem::new(&g, Objective::OneRound, 4, params(2)).unwrap();
    let opt = solve(&g, &problem, Algorithm::Optimal, DEFAULT_SUBSET_GUARD).unwrap();
    assert_eq!(opt.one_round_value, 10);
}
