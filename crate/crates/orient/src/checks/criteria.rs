use super::{brute, timed, CheckResult};
use crate::algorithms::{
    hyper_ratio, offline_opt, optimal_d, threshold_ratio, Baseline, BestVc, FixedCover,
    LeavesFirst, OfflineOpt, QueryAlgorithm, Threshold, ThresholdConfig,
};
use crate::bitset::BitSet;
use crate::harness::constructions::{
    fig1, single_hyperedge_lb, tightness_edge, tightness_star, two_interval, two_stage_lb,
    vc_lb_single_hyperedge,
};
use crate::harness::{
    best_strict_two_stage, evaluate, exact_expected_opt, gen_random, generate, random_generalized,
    vertex_split, EvaluationReport, PrefixTwoStage, RandomFamily, RandomOptions,
};
use crate::mandatory::{estimate_prob, mandatory_set, sample_count};
use crate::model::{is_reduced, sample_realization, stream_rng, Instance, Stage};
use crate::vcover::{
    build_cover_graph, clique_reduce, cover_stars, interval_layer_cliques, lp_half_integral,
    vc_interval_union_dp, AutoExactSolver, BipartiteSolver, Cover, CoverGraph, ExactSmall,
    ExactSmallSolver, FewHyperedgesSolver, LocalRatioSolver, SolveContext, VcSolver,
    DEFAULT_DP_LAYERS, DEFAULT_FEW_BOUND,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::{Duration, Instant};

const TOL: f64 = 1e-9;

/// Generator randomness for instance `i` of criterion `c`, disjoint from the
/// realization and planning streams.
fn gen_rng(seed: u64, c: u64, i: u64) -> ChaCha8Rng {
    stream_rng(seed, (1 << 62) | (c << 32) | i)
}

fn eval(
    inst: &Instance,
    alg: &dyn QueryAlgorithm,
    n: usize,
    seed: u64,
) -> crate::Result<EvaluationReport> {
    evaluate(inst, "check", alg, n, seed)
}

fn exact_threshold() -> crate::Result<Threshold> {
    Threshold::new(ThresholdConfig::graph(Arc::new(AutoExactSolver))?)
}

fn hyper_threshold(epsilon: f64, delta: f64) -> crate::Result<Threshold> {
    let solver = Arc::new(FewHyperedgesSolver {
        bound: DEFAULT_FEW_BOUND,
    });
    Threshold::new(ThresholdConfig::hypergraph(solver, 1.0, epsilon, delta)?)
}

fn label(alg: &dyn QueryAlgorithm) -> String {
    match alg.alpha() {
        Some(a) if alg.d().is_some() => format!("{}(a={a})", alg.name()),
        _ => alg.name(),
    }
}

pub fn fig1_exact_opt(seed: u64) -> CheckResult {
    timed(1, "fig1-exact-opt", || {
        let start = Instant::now();
        let mut ok = true;
        let mut parts = Vec::new();
        for eps in [0.1, 0.01] {
            let inst = fig1(eps)?;
            let want = 2.0 - (1.0 - eps) * (1.0 - eps) / 2.0;
            let exact = exact_expected_opt(&inst)?;
            let mc = eval(&inst, &OfflineOpt, 100_000, seed)?.mean_opt;
            ok &= (exact - want).abs() <= 1e-12 && ((mc - want) / want).abs() <= 0.01;
            parts.push(format!(
                "eps={eps}: exact={exact:.12} closed={want:.12} mc={mc:.4}"
            ));
        }
        let secs = start.elapsed().as_secs_f64();
        ok &= secs < 10.0;
        parts.push(format!("{secs:.2}s < 10s"));
        Ok((ok, parts.join("; ")))
    })
}

pub fn general_lower_bound(seed: u64) -> CheckResult {
    timed(2, "general-lower-bound", || {
        let inst = fig1(0.001)?;
        let mut algs: Vec<Box<dyn QueryAlgorithm>> = vec![
            Box::new(exact_threshold()?),
            Box::new(Threshold::new(ThresholdConfig::graph(Arc::new(
                LocalRatioSolver,
            ))?)?),
            Box::new(hyper_threshold(0.05, 0.1)?),
            Box::new(BestVc::new(Arc::new(AutoExactSolver))),
            Box::new(FixedCover::new(vec!["x".into()])),
            Box::new(FixedCover::new(vec!["y".into(), "z".into()])),
        ];
        for k in 0..=3 {
            algs.push(Box::new(PrefixTwoStage { k }));
        }
        let bound = 4.0 / 3.0 - 0.02;
        let mut ok = true;
        let mut parts = Vec::new();
        for alg in &algs {
            let r = eval(&inst, alg.as_ref(), 100_000, seed)?;
            ok &= r.ratio >= bound;
            parts.push(format!("{}={:.4}", label(alg.as_ref()), r.ratio));
        }
        Ok((ok, format!("all >= {bound:.4}: {}", parts.join(" "))))
    })
}

pub fn threshold_upper_bound(seed: u64) -> CheckResult {
    timed(3, "threshold-upper-bound", || {
        let algs = [
            exact_threshold()?,
            Threshold::new(ThresholdConfig::graph(Arc::new(LocalRatioSolver))?)?,
        ];
        let bounds = [threshold_ratio(1.0)? + 0.03, threshold_ratio(2.0)? + 0.03];
        let mut worst = [0.0f64; 2];
        let instances = 50;
        for i in 0..instances {
            let mut rng = gen_rng(seed, 3, i);
            let n = rng.gen_range(6..=16);
            let inst = gen_random(
                RandomFamily::Gnp { n, p: 0.3 },
                RandomOptions::default(),
                &mut rng,
            )?;
            for (j, alg) in algs.iter().enumerate() {
                worst[j] = worst[j].max(eval(&inst, alg, 10_000, seed)?.ratio);
            }
        }
        let ok = worst[0] <= bounds[0] && worst[1] <= bounds[1];
        Ok((
            ok,
            format!(
                "{instances} graphs: max ratio exact-vc {:.4} <= {:.4}, local-ratio {:.4} <= {:.4}",
                worst[0], bounds[0], worst[1], bounds[1]
            ),
        ))
    })
}

pub fn threshold_tightness(seed: u64) -> CheckResult {
    timed(4, "threshold-tightness", || {
        let d = optimal_d(1.0)?;
        let alg = exact_threshold()?;
        let n = 50;
        let star = eval(&tightness_star(d, n)?, &alg, 20_000, seed)?.ratio;
        let star_min = (n as f64 + 1.0) / (1.0 + n as f64 * d) - 0.05;
        let edge = eval(&tightness_edge(d, 0.01)?, &alg, 100_000, seed)?.ratio;
        let edge_min = 1.0 + d - 0.03;
        Ok((
            star >= star_min && edge >= edge_min,
            format!("d={d:.6}: star {star:.4} >= {star_min:.4}, edge {edge:.4} >= {edge_min:.4}"),
        ))
    })
}

pub fn bestvc_bipartite(seed: u64) -> CheckResult {
    timed(5, "bestvc-bipartite", || {
        let alg = BestVc::new(Arc::new(BipartiteSolver));
        let bound = 4.0 / 3.0 + 0.02;
        let instances = 50;
        let mut worst = 0.0f64;
        for i in 0..instances {
            let mut rng = gen_rng(seed, 5, i);
            let family = RandomFamily::Bipartite {
                left: rng.gen_range(3..=8),
                right: rng.gen_range(3..=8),
                p: 0.4,
            };
            let inst = gen_random(family, RandomOptions::default(), &mut rng)?;
            worst = worst.max(eval(&inst, &alg, 10_000, seed)?.ratio);
        }
        Ok((
            worst <= bound,
            format!("{instances} bipartite graphs: max ratio {worst:.4} <= {bound:.4}"),
        ))
    })
}

pub fn bestvc_two_interval(seed: u64) -> CheckResult {
    timed(6, "bestvc-two-interval", || {
        let p = 2f64.sqrt() - 1.0;
        let inst = two_interval(p, p)?;
        let exact = exact_expected_opt(&inst)?;
        let r = eval(
            &inst,
            &BestVc::new(Arc::new(AutoExactSolver)),
            100_000,
            seed,
        )?
        .ratio;
        let want = (1.0 + 2f64.sqrt()) / 2.0;
        Ok((
            (r - want).abs() <= 0.01 && (exact - (1.0 + p * p)).abs() <= 1e-12,
            format!(
                "ratio {r:.4} vs {want:.4}; E[OPT] {exact:.12} vs {:.12}",
                1.0 + p * p
            ),
        ))
    })
}

pub fn single_hyperedge_lower_bound(seed: u64) -> CheckResult {
    timed(7, "single-hyperedge-lower-bound", || {
        let n = 3.0;
        let inst = single_hyperedge_lb(3, 0.001)?;
        let exact = exact_expected_opt(&inst)?;
        let want_opt = (n * n - n + 1.0) / n;
        let bound = n * n / (n * n - n + 1.0) - 0.02;
        let left = eval(&inst, &Baseline, 100_000, seed)?.ratio;
        let right = eval(&inst, &LeavesFirst, 100_000, seed)?.ratio;
        Ok((
            left >= bound && right >= bound && (exact - want_opt).abs() <= 0.01,
            format!(
                "leftmost-first {left:.4}, others-first {right:.4} >= {bound:.4}; E[OPT] {exact:.4} vs {want_opt:.4}"
            ),
        ))
    })
}

pub fn two_stage_log_n(seed: u64) -> CheckResult {
    timed(8, "two-stage-log-n", || {
        let mut ok = true;
        let mut parts = Vec::new();
        let mut last = 0.0;
        for n in [64usize, 256, 1024] {
            let (k, cost) = best_strict_two_stage(n);
            let r = eval(&two_stage_lb(n)?, &PrefixTwoStage { k }, 4000, seed)?;
            let se_alg = r.sd_alg / (r.n_samples as f64).sqrt();
            let se_opt = r.sd_opt / (r.n_samples as f64).sqrt();
            let ratio = cost / r.mean_opt;
            ok &= (r.mean_alg - cost).abs() <= 4.0 * se_alg + 1e-9
                && r.mean_opt <= 2.0 + 4.0 * se_opt
                && ratio > (n as f64).log2() / 8.0
                && ratio > last;
            last = ratio;
            parts.push(format!(
                "n={n}: k={k} cost={cost:.3} (mc {:.3}) E[OPT]~{:.3} ratio {ratio:.3}",
                r.mean_alg, r.mean_opt
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

pub fn vc_three_halves(seed: u64) -> CheckResult {
    timed(9, "vc-three-halves", || {
        let inst = vc_lb_single_hyperedge(100, 0.01)?;
        let x = eval(&inst, &FixedCover::new(vec!["x".into()]), 100_000, seed)?.ratio;
        let yz = eval(
            &inst,
            &FixedCover::new(vec!["y".into(), "z".into()]),
            100_000,
            seed,
        )?
        .ratio;
        Ok((
            x >= 1.45 && yz >= 1.45,
            format!("cover {{x}} {x:.4}, cover {{y,z}} {yz:.4}, both >= 1.45"),
        ))
    })
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL * (1.0 + a.abs().max(b.abs()))
}

fn vc_oracles(
    g: &CoverGraph,
    ctx: &SolveContext<'_>,
    tag: &str,
    t: &mut Tally,
) -> crate::Result<()> {
    let best = brute::min_cover_weight(g);
    let mut exact_like = |name: &str, c: Cover| {
        t.check(g.is_cover(&c.members) && close(c.weight, best), || {
            format!("{tag}: {name} weight {} != brute {best}", c.weight)
        })
    };
    exact_like(
        "exact-small",
        ExactSmallSolver(ExactSmall::default()).solve(g, ctx)?,
    );
    exact_like("exact", AutoExactSolver.solve(g, ctx)?);
    exact_like("exact-fast", AutoExactSolver::min_cover(g, ctx)?);
    if g.bipartition().is_some() {
        exact_like("bipartite", BipartiteSolver.solve(g, ctx)?);
    }
    if ctx.stars.is_some() {
        exact_like(
            "few-hyperedges",
            FewHyperedgesSolver {
                bound: DEFAULT_FEW_BOUND,
            }
            .solve(g, ctx)?,
        );
    }
    let lr = LocalRatioSolver.solve(g, ctx)?;
    t.check(
        g.is_cover(&lr.members) && lr.weight <= 2.0 * best + TOL,
        || format!("{tag}: local ratio {} vs 2 x {best}", lr.weight),
    );

    let lp = lp_half_integral(g);
    let mut rounded = lp.v1.clone();
    rounded.union_with(&lp.v_half);
    let up = g.weight_of(&rounded);
    t.check(
        lp.objective <= best + TOL && g.is_cover(&rounded) && up <= 2.0 * lp.objective + TOL,
        || format!("{tag}: lp sandwich {} <= {best} <= {up}", lp.objective),
    );

    let bip: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(a, b)| {
            (lp.v1.contains(a) && lp.v0.contains(b)) || (lp.v0.contains(a) && lp.v1.contains(b))
        })
        .collect();
    let gp = CoverGraph::new(g.weights().to_vec(), bip)?;
    let v1w = g.weight_of(&lp.v1);
    let gp_best = brute::min_cover_weight(&gp);
    t.check(gp.is_cover(&lp.v1) && close(v1w, gp_best), || {
        format!("{tag}: c(V1) = {v1w} but the V1-V0 graph needs {gp_best}")
    });
    Ok(())
}

pub fn oracle_suite(seed: u64) -> CheckResult {
    timed(10, "oracles", || {
        let start = Instant::now();
        let mut t = Tally::default();
        let instances = 1000;
        for i in 0..instances {
            let mut rng = gen_rng(seed, 10, i);
            let n = rng.gen_range(2..=6);
            let opts = RandomOptions {
                unit_costs: rng.gen_bool(0.5),
                max_cells: 3,
                reduce: rng.gen_bool(0.5),
            };
            let family = if rng.gen_bool(0.4) {
                RandomFamily::Gnp { n, p: 0.5 }
            } else {
                RandomFamily::Hypergraph {
                    n,
                    m: rng.gen_range(1..=3),
                    max_size: rng.gen_range(2..=n.min(4)),
                }
            };
            let inst = gen_random(family, opts, &mut rng)?;
            let tag = format!("instance {i}");
            let policy = Baseline.plan(&inst, &mut rng)?;
            let mut vc_based = Vec::new();
            if is_reduced(&inst) {
                vc_based.push(BestVc::new(Arc::new(AutoExactSolver)).plan(&inst, &mut rng)?);
                if inst.is_graph() {
                    vc_based.push(exact_threshold()?.plan(&inst, &mut rng)?);
                }
            }
            for _ in 0..3 {
                let real = sample_realization(&inst, &mut rng);
                let m = mandatory_set(&inst, &real);
                let bm = brute::mandatory(&inst, &real);
                t.check(m == bm, || {
                    format!(
                        "{tag}: mandatory {:?} != brute {:?}",
                        m.to_vec(),
                        bm.to_vec()
                    )
                });

                let best = brute::opt(&inst, &real);
                if is_reduced(&inst) {
                    let off = offline_opt(&inst, &real)?;
                    t.check(
                        close(off.cost, best) && brute::feasible(&inst, &real, &off.query),
                        || format!("{tag}: offline opt {} != brute {best}", off.cost),
                    );
                }
                for p in &vc_based {
                    let run = p.execute(&inst, &real)?;
                    t.check(run.total_cost >= best - TOL, || {
                        format!(
                            "{tag}: algorithm paid {} below the optimum {best}",
                            run.total_cost
                        )
                    });
                    let mut revealed = vec![None; inst.n()];
                    for step in &run.steps {
                        if step.stage == Stage::Stage2 {
                            if let Some(m) =
                                brute::always_mandatory(&inst, &revealed, step.vertex, 4096)
                            {
                                t.check(m, || {
                                    format!(
                                        "{tag}: stage-2 query of {} was not certainly mandatory",
                                        step.vertex
                                    )
                                });
                            }
                        }
                        revealed[step.vertex] = Some(step.weight);
                    }
                }

                let run = policy.execute(&inst, &real)?;
                t.check(brute::feasible(&inst, &real, run.queried()), || {
                    format!("{tag}: baseline stopped infeasible")
                });

                let parts = rng.gen_range(2..=3);
                let mut sets = vec![BitSet::new(inst.n()); parts];
                for v in 0..inst.n() {
                    sets[rng.gen_range(0..parts)].insert(v);
                }
                let sum: f64 = sets
                    .iter()
                    .map(|s| brute::opt_within(&inst, &real, s))
                    .sum();
                t.check(best >= sum - TOL, || {
                    format!("{tag}: OPT {best} < sum of parts {sum}")
                });
            }
            let stars = cover_stars(&inst);
            let ctx = SolveContext {
                stars: Some(&stars),
                layers: None,
            };
            vc_oracles(
                &build_cover_graph(&inst, &inst.costs())?,
                &ctx,
                &tag,
                &mut t,
            )?;
        }
        let layered = 200;
        for i in 0..layered {
            let mut rng = gen_rng(seed, 10, 1_000_000 + i);
            let family = RandomFamily::IntervalLayers {
                k: rng.gen_range(1..=3),
                n: rng.gen_range(3..=9),
            };
            let opts = RandomOptions {
                unit_costs: false,
                ..RandomOptions::default()
            };
            let gen = generate(family, opts, &mut rng)?;
            let inst = gen.instance;
            let layers: Vec<Vec<usize>> = gen
                .layers
                .expect("layered family")
                .iter()
                .map(|l| l.iter().filter_map(|id| inst.index_of(id)).collect())
                .collect();
            let g = build_cover_graph(&inst, &inst.costs())?;
            let red = clique_reduce(&g, interval_layer_cliques(&layers));
            let dp = vc_interval_union_dp(&red.reduced, &layers, DEFAULT_DP_LAYERS)?;
            let best = brute::min_cover_weight(&red.reduced);
            t.check(
                red.reduced.is_cover(&dp.members) && close(dp.weight, best),
                || format!("layered instance {i}: dp {} != brute {best}", dp.weight),
            );
        }
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(120);
        let mut detail = format!(
            "{} checks on {instances} instances + {layered} layered, {} failures, {:.1}s < 120s",
            t.cases,
            t.failures.len(),
            elapsed.as_secs_f64()
        );
        if let Some(first) = t.failures.first() {
            detail.push_str(&format!("; first: {first}"));
        }
        Ok((t.failures.is_empty() && in_time, detail))
    })
}

pub fn sampling_accuracy(seed: u64) -> CheckResult {
    timed(11, "sampling", || {
        let inst = fig1(0.01)?;
        let y = inst.index_of("y").expect("fig1 has y");
        let k = sample_count(0.05, 0.01)?;
        let runs = 100;
        let mut inside = 0;
        for i in 0..runs {
            let p = estimate_prob(&inst, y, 0.05, 0.01, &mut gen_rng(seed, 11, i))?;
            if (0.45..=0.55).contains(&p) {
                inside += 1;
            }
        }
        Ok((
            k == 1060 && inside >= 97,
            format!("k={k}; {inside}/{runs} estimates in [0.45, 0.55]"),
        ))
    })
}

fn random_fractions<R: Rng + ?Sized>(parts: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..parts).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut f: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let head: f64 = f[..parts - 1].iter().sum();
    f[parts - 1] = 1.0 - head;
    f
}

pub fn vertex_split_invariance(seed: u64) -> CheckResult {
    timed(12, "vertex-split", || {
        let instances = 100;
        let mut worst = 0.0f64;
        let mut lemma_ok = true;
        for i in 0..instances {
            let mut rng = gen_rng(seed, 12, i);
            let gi = random_generalized(rng.gen_range(3..=5), &mut rng)?;
            let base = gi.expected_opt()?;
            let mut cur = gi;
            for _ in 0..2 {
                let room = 8 - cur.graph.n();
                if room == 0 {
                    break;
                }
                let v = rng.gen_range(0..cur.graph.n());
                let parts = rng.gen_range(2..=3.min(room + 1));
                cur = vertex_split(&cur, v, &random_fractions(parts, &mut rng))?;
                let e = cur.expected_opt()?;
                worst = worst.max((e - base).abs());
                let n = cur.graph.n();
                let groups = rng.gen_range(2..=3);
                let mut sets = vec![BitSet::new(n); groups];
                for u in 0..n {
                    sets[rng.gen_range(0..groups)].insert(u);
                }
                lemma_ok &= e >= cur.expected_opt_partition(&sets)? - TOL;
            }
        }
        Ok((
            worst <= 1e-12 && lemma_ok,
            format!("{instances} instances, up to two splits each: max |E[OPT'] - E[OPT]| = {worst:.2e}; partition bound held: {lemma_ok}"),
        ))
    })
}

pub fn hypergraph_threshold(seed: u64) -> CheckResult {
    timed(13, "hypergraph-threshold", || {
        let (eps, delta) = (0.05, 0.1);
        let alg = hyper_threshold(eps, delta)?;
        let bound = hyper_ratio(1.0, eps)? + 0.05;
        let instances = 40;
        let mut within = 0;
        let mut worst = 0.0f64;
        for i in 0..instances {
            let mut rng = gen_rng(seed, 13, i);
            let n = rng.gen_range(6..=12);
            let family = RandomFamily::Hypergraph {
                n,
                m: rng.gen_range(2..=5),
                max_size: rng.gen_range(2..=4),
            };
            let inst = gen_random(family, RandomOptions::default(), &mut rng)?;
            let r = eval(&inst, &alg, 5000, seed)?.ratio;
            worst = worst.max(r);
            if r <= bound {
                within += 1;
            }
        }
        Ok((
            within * 10 >= instances * 9,
            format!("{within}/{instances} ratios <= {bound:.4} (need 90%); max {worst:.4}"),
        ))
    })
}
