use orient::algorithms::{offline_opt, optimal_d, run_once, AlgorithmRegistry, AlgorithmSpec};
use orient::checks::brute;
use orient::harness::{
    evaluate_with, gen_random, random_generalized, vertex_split, RandomFamily, RandomOptions,
};
use orient::mandatory::{is_feasible, mandatory_set, mandatory_set_cells};
use orient::model::{
    is_reduced, parse_instance, reduce, sample_realization, serialize_instance, stream_rng,
    CellRealization, ProbabilityMatrix,
};
use orient::vcover::{
    build_cover_graph, lp_half_integral, vc_bipartite_exact, vc_exact_small,
    vc_local_ratio_2approx, AutoExactSolver, CoverGraph, SolveContext,
};
use orient::Instance;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = RandomFamily> {
    prop_oneof![
        (2usize..8, 0.2f64..0.8).prop_map(|(n, p)| RandomFamily::Gnp { n, p }),
        (3usize..8, 1usize..4, 2usize..4).prop_map(|(n, m, s)| RandomFamily::Hypergraph {
            n,
            m,
            max_size: s
        }),
        (1usize..5).prop_map(|leaves| RandomFamily::Star { leaves }),
    ]
}

fn instance(reduced: bool) -> impl Strategy<Value = Instance> {
    (family(), any::<u64>(), any::<bool>()).prop_filter_map(
        "generator rejected",
        move |(f, seed, unit)| {
            let opts = RandomOptions {
                unit_costs: unit,
                max_cells: 3,
                reduce: reduced,
            };
            gen_random(f, opts, &mut stream_rng(seed, 0)).ok()
        },
    )
}

fn graph() -> impl Strategy<Value = CoverGraph> {
    (1usize..9)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.5f64..4.0, n),
                prop::collection::vec((0..n, 0..n), 0..2 * n),
            )
        })
        .prop_map(|(w, e)| CoverGraph::new(w, e.into_iter().filter(|(a, b)| a != b)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent(inst in instance(false)) {
        let once = reduce(&inst);
        prop_assert!(is_reduced(&once.instance));
        let twice = reduce(&once.instance);
        prop_assert!(twice.forced.is_empty());
        prop_assert_eq!(twice.instance.hyperedges(), once.instance.hyperedges());
    }

    #[test]
    fn mandatory_set_agrees_with_enumeration(inst in instance(false), seed in any::<u64>()) {
        let pm = ProbabilityMatrix::new(&inst);
        let r = sample_realization(&inst, &mut stream_rng(seed, 0));
        let m = mandatory_set(&inst, &r);
        prop_assert_eq!(&m, &brute::mandatory(&inst, &r));
        let cells = CellRealization {
            cells: r.weights.iter().map(|&w| pm.grid().partition_point(|&t| t < w) - 1).collect(),
        };
        prop_assert_eq!(&m, &mandatory_set_cells(&inst, &pm, &cells));
    }

    #[test]
    fn runs_are_feasible_and_never_beat_offline(inst in instance(true), seed in any::<u64>()) {
        let registry = AlgorithmRegistry::builtin();
        let r = sample_realization(&inst, &mut stream_rng(seed, 0));
        let opt = offline_opt(&inst, &r).unwrap();
        prop_assert!(is_feasible(&inst, &r, &opt.query));
        prop_assert!((opt.cost - brute::opt(&inst, &r)).abs() < 1e-9);
        let mut names = vec!["bestvc", "baseline", "leaves-first", "threshold-hyper"];
        if inst.is_graph() {
            names.push("threshold");
        }
        for name in names {
            let alg = registry.create(name, &AlgorithmSpec::default()).unwrap();
            let out = run_once(alg.as_ref(), &inst, &r, &mut stream_rng(seed, u64::MAX)).unwrap();
            prop_assert!(is_feasible(&inst, &r, out.transcript.queried()), "{}", name);
            prop_assert!(out.transcript.total_cost >= opt.cost - 1e-9, "{}", name);
        }
    }

    #[test]
    fn documents_round_trip(inst in instance(false)) {
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn cover_solvers_agree_with_enumeration(g in graph()) {
        let best = brute::min_cover_weight(&g);
        let exact = vc_exact_small(&g).unwrap();
        prop_assert!(g.is_cover(&exact.members));
        prop_assert!((exact.weight - best).abs() < 1e-9);
        let auto = AutoExactSolver::min_cover(&g, &SolveContext::default()).unwrap();
        prop_assert!((auto.weight - best).abs() < 1e-9);
        let lr = vc_local_ratio_2approx(&g);
        prop_assert!(g.is_cover(&lr.members));
        prop_assert!(lr.weight <= 2.0 * best + 1e-9);
        if let Some(sides) = g.bipartition() {
            prop_assert!((vc_bipartite_exact(&g, &sides).unwrap().weight - best).abs() < 1e-9);
        }
    }

    #[test]
    fn lp_is_half_integral_and_bounds_the_optimum(g in graph()) {
        let lp = lp_half_integral(&g);
        prop_assert!(lp.x.iter().all(|&x| x == 0.0 || x == 0.5 || x == 1.0));
        for (a, b) in g.edges() {
            prop_assert!(lp.x[a] + lp.x[b] >= 1.0);
        }
        let obj: f64 = lp.x.iter().zip(g.weights()).map(|(x, w)| x * w).sum();
        prop_assert!((obj - lp.objective).abs() < 1e-9);
        prop_assert!(lp.objective <= brute::min_cover_weight(&g) + 1e-9);
        let mut rounded = lp.v1.clone();
        rounded.union_with(&lp.v_half);
        prop_assert!(g.is_cover(&rounded));
    }

    #[test]
    fn optimal_threshold_balances(alpha in 1.0f64..2.0) {
        let d = optimal_d(alpha).unwrap();
        prop_assert!(d > 0.0 && d <= 1.0);
        prop_assert!((1.0 / d - (alpha + (2.0 - alpha) * d)).abs() < 1e-9);
    }

    #[test]
    fn splitting_preserves_expected_opt(n in 2usize..6, seed in any::<u64>(), f in 0.05f64..0.95) {
        let mut rng = stream_rng(seed, 0);
        let gi = random_generalized(n, &mut rng).unwrap();
        let before = gi.expected_opt().unwrap();
        let active: Vec<usize> = gi.graph.active().iter().collect();
        let v = active[seed as usize % active.len()];
        let split = vertex_split(&gi, v, &[f, 1.0 - f]).unwrap();
        prop_assert!((split.expected_opt().unwrap() - before).abs() < 1e-9);
        let again = vertex_split(&split, split.graph.n() - 1, &[0.5, 0.5]).unwrap();
        prop_assert!((again.expected_opt().unwrap() - before).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn evaluation_is_deterministic(inst in instance(true), seed in any::<u64>()) {
        let registry = AlgorithmRegistry::builtin();
        let alg = registry.create("bestvc", &AlgorithmSpec::default()).unwrap();
        let a = evaluate_with(&inst, "p", alg.as_ref(), 200, seed, 50).unwrap();
        let b = evaluate_with(&inst, "p", alg.as_ref(), 200, seed, 50).unwrap();
        prop_assert_eq!(a.mean_alg, b.mean_alg);
        prop_assert_eq!(a.mean_opt, b.mean_opt);
        prop_assert_eq!(a.ci95_ratio, b.ci95_ratio);
        prop_assert!(a.mean_alg >= a.mean_opt - 1e-9);
    }
}

#[test]
fn cover_graph_of_a_graph_is_itself() {
    let inst = gen_random(
        RandomFamily::Gnp { n: 8, p: 0.5 },
        RandomOptions::default(),
        &mut stream_rng(4, 0),
    )
    .unwrap();
    let g = build_cover_graph(&inst, &inst.costs()).unwrap();
    let mut want: Vec<(usize, usize)> = inst
        .hyperedges()
        .iter()
        .map(|e| (e[0].min(e[1]), e[0].max(e[1])))
        .collect();
    want.sort();
    want.dedup();
    let mut got = g.edges();
    got.sort();
    assert_eq!(got, want);
}
