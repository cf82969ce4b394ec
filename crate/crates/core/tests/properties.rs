mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;

use nexcover::baselines::{ga_cover, greedy_cover, GaConfig};
use nexcover::centrality::{betweenness, cost_vector, CostParams, CostVector};
use nexcover::dynamic::{attach_node, pad_warm_start, Attachment};
use nexcover::generators::{generate, Family, GeneratorSpec};
use nexcover::graph::{build_coverage_matrix, Graph};
use nexcover::lp::{reference_solve, solve, LpProblem, SolverConfig};
use nexcover::select::{exact_solver, select_static, select_with_cost, verify_cover, SelectionParams};

use common::{brute_betweenness, brute_min_cover, relative_gap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn family_graph(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    (family(), n, any::<u64>()).prop_map(|(f, n, seed)| common::family_graph(f, n, seed))
}

/// A random spanning tree over `0..n` plus extra random edges.
fn arbitrary_connected(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    n.prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|v| (0..v).boxed()).collect();
        (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..2 * n))
    })
    .prop_map(|(n, parents, extra)| {
        let mut g = Graph::new(n).unwrap();
        for (i, p) in parents.into_iter().enumerate() {
            g.add_edge(i + 1, p).unwrap();
        }
        for (u, v) in extra {
            if u != v && !g.has_edge(u, v) {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    })
}

fn any_graph(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    prop_oneof![family_graph(n.clone()), arbitrary_connected(n)]
}

fn positive_costs(n: usize) -> impl Strategy<Value = CostVector> {
    prop::collection::vec(0.05f64..20.0, n).prop_map(|values| CostVector { values })
}

fn centrality_costs(g: &Graph) -> CostVector {
    cost_vector(g, &betweenness(g), &CostParams::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn brandes_matches_path_enumeration(g in any_graph(2..=10)) {
        let fast = betweenness(&g).values;
        let slow = brute_betweenness(&g);
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!((a - b).abs() <= 1e-9, "{fast:?} vs {slow:?}");
        }
    }

    #[test]
    fn lp_bound_exact_and_heuristics_are_ordered(g in any_graph(4..=12), ga_seed in any::<u64>()) {
        let cost = centrality_costs(&g);
        let (lp_set, sol) = select_with_cost(&g, &cost, &SelectionParams::default(), &SolverConfig::default()).unwrap();
        let exact = exact_solver(&g, &cost).unwrap();
        let greedy = greedy_cover(&g, &cost);
        let ga = ga_cover(&g, &cost, &GaConfig { generations: 30, seed: ga_seed, ..GaConfig::default() }).unwrap();
        let tol = 1e-6 * exact.total_cost.max(1.0);
        prop_assert!(sol.objective <= exact.total_cost + tol);
        for (name, s) in [("exact", &exact), ("lp", &lp_set), ("greedy", &greedy), ("ga", &ga)] {
            prop_assert!(s.feasible && verify_cover(&g, &s.selected), "{name} is not a cover");
            prop_assert!(exact.total_cost <= s.total_cost * (1.0 + 1e-12), "{name} beats the optimum");
        }
    }

    #[test]
    fn exact_solver_matches_enumeration(g in any_graph(1..=12), seed in any::<u64>()) {
        let cost = CostVector { values: (0..g.node_count()).map(|v| 1.0 + ((seed >> (v % 60)) & 7) as f64).collect() };
        let (best, _) = brute_min_cover(&g, &cost);
        assert_relative_eq!(exact_solver(&g, &cost).unwrap().total_cost, best, max_relative = 1e-12);
    }

    #[test]
    fn simplex_matches_reference(
        (g, cost) in any_graph(2..=40).prop_flat_map(|g| { let n = g.node_count(); (Just(g), positive_costs(n)) })
    ) {
        let p = LpProblem::from_graph(&g, cost).unwrap();
        let fast = solve(&p, &SolverConfig::default()).unwrap();
        let slow = reference_solve(&p).unwrap();
        prop_assert!(relative_gap(fast.objective, slow.objective) <= 1e-4, "{} vs {}", fast.objective, slow.objective);
        prop_assert!(p.max_infeasibility(&fast.x) <= 1e-6);
        prop_assert!(fast.x.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn warm_start_does_not_change_the_optimum(
        (g, cost, x0) in any_graph(2..=40).prop_flat_map(|g| {
            let n = g.node_count();
            (Just(g), positive_costs(n), prop::collection::vec(0.0f64..1.5, n))
        })
    ) {
        let p = LpProblem::from_graph(&g, cost).unwrap();
        let cold = solve(&p, &SolverConfig::default()).unwrap();
        let warm = solve(&p, &SolverConfig::default().with_warm_start(x0)).unwrap();
        prop_assert!(relative_gap(cold.objective, warm.objective) <= 1e-5);
    }

    #[test]
    fn warm_start_after_growth(g in family_graph(5..=40), seed in any::<u64>()) {
        let config = SolverConfig::default();
        let prev = solve(&LpProblem::from_graph(&g, centrality_costs(&g)).unwrap(), &config).unwrap();
        let mut grown = g.clone();
        attach_node(&mut grown, Attachment::PreferentialAttach(2), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let p = LpProblem::from_graph(&grown, centrality_costs(&grown)).unwrap();
        let cold = solve(&p, &config).unwrap();
        let warm = solve(&p, &config.with_warm_start(pad_warm_start(&prev.x, grown.node_count()).unwrap())).unwrap();
        prop_assert!(relative_gap(cold.objective, warm.objective) <= 1e-5);
    }

    #[test]
    fn selection_is_deterministic_and_feasible(g in any_graph(1..=60), delta in 0.05f64..0.95) {
        let params = SelectionParams { delta, ..SelectionParams::default() };
        let a = select_static(&g, &params, &CostParams::default(), &SolverConfig::default()).unwrap();
        let b = select_static(&g, &params, &CostParams::default(), &SolverConfig::default()).unwrap();
        prop_assert!(a.0.feasible);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn generators_are_seeded_and_connected(f in family(), n in 1usize..80, seed in any::<u64>()) {
        let spec = GeneratorSpec::new(f, n, seed);
        let g = generate(&spec).unwrap();
        prop_assert_eq!(g.node_count(), n);
        prop_assert!(g.is_connected());
        prop_assert_eq!(&g, &generate(&spec).unwrap());
    }

    #[test]
    fn edge_list_round_trip_and_coverage_rows(g in any_graph(1..=30)) {
        let back = Graph::read_edge_list(g.to_edge_list().as_bytes()).unwrap();
        prop_assert_eq!(&back, &g);
        let a = build_coverage_matrix(&g);
        for v in 0..g.node_count() {
            prop_assert_eq!(a.row(v).len(), g.neighbors(v).len() + 1);
        }
    }
}
