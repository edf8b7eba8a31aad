//! Lower-bound and tightness constructions.

use crate::algorithms::optimal_d;
use crate::error::{Error, Result};
use crate::model::{Instance, UncertainVertex};

/// A named construction with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Construction {
    /// Two edges `{x, y}`, `{x, z}`; the general 4/3 lower bound.
    Fig1 { eps: f64 },
    /// One hyperedge `{x, y, z}` with `c_x = c_z = k`; both vertex covers
    /// approach 3/2 times the optimum.
    VcLbSingleHyperedge { k: usize, eps: f64 },
    /// Hyperedges `{x_i, y, z_1..z_k}`; the cover graph is complete bipartite.
    VcLbBipartite { k: usize, eps: f64 },
    /// Graph: complete bipartite `x_i`–`z_j` plus a universal vertex `y`.
    VcLbNonbipartite { k: usize, eps: f64 },
    /// One hyperedge `e_0..e_n`; no algorithm beats `n²/(n² − n + 1)`.
    SingleHyperedgeLb { n: usize, eps: f64 },
    /// One hyperedge of `n` staggered intervals with mass only at their ends.
    TwoStageLb { n: usize },
    /// Single edge with `p = d − ε` on one end and `p = 0` on the other.
    TightnessEdge { d: f64, eps: f64 },
    /// Star whose centre is almost surely mandatory and whose leaves have
    /// `p = d`.
    TightnessStar { d: f64, n: usize },
    /// Two overlapping intervals with crossing probabilities `p` and `q`.
    TwoInterval { p: f64, q: f64 },
}

pub const DEFAULT_EPS: f64 = 0.01;

/// Optional generator parameters as given on a command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct GenParams {
    pub eps: Option<f64>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub d: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
}

impl Construction {
    pub const NAMES: [&'static str; 9] = [
        "fig1",
        "vc-lb-single-hyperedge",
        "vc-lb-bipartite",
        "vc-lb-nonbipartite",
        "single-hyperedge-lb",
        "two-stage-lb",
        "tightness-edge",
        "tightness-star",
        "two-interval",
    ];

    /// Resolves a kebab-case name, filling unset parameters with defaults.
    pub fn from_name(name: &str, p: &GenParams) -> Result<Self> {
        let eps = p.eps.unwrap_or(DEFAULT_EPS);
        let golden = optimal_d(1.0)?;
        let half_root = 2f64.sqrt() - 1.0;
        Ok(match name {
            "fig1" => Construction::Fig1 { eps },
            "vc-lb-single-hyperedge" => Construction::VcLbSingleHyperedge {
                k: p.k.unwrap_or(100),
                eps,
            },
            "vc-lb-bipartite" => Construction::VcLbBipartite {
                k: p.k.unwrap_or(5),
                eps,
            },
            "vc-lb-nonbipartite" => Construction::VcLbNonbipartite {
                k: p.k.unwrap_or(5),
                eps,
            },
            "single-hyperedge-lb" => Construction::SingleHyperedgeLb {
                n: p.n.unwrap_or(3),
                eps,
            },
            "two-stage-lb" => Construction::TwoStageLb {
                n: p.n.unwrap_or(64),
            },
            "tightness-edge" => Construction::TightnessEdge {
                d: p.d.unwrap_or(golden),
                eps,
            },
            "tightness-star" => Construction::TightnessStar {
                d: p.d.unwrap_or(golden),
                n: p.n.unwrap_or(50),
            },
            "two-interval" => Construction::TwoInterval {
                p: p.p.unwrap_or(half_root),
                q: p.q.unwrap_or(half_root),
            },
            _ => {
                return Err(Error::Unknown {
                    kind: "generator",
                    name: name.to_string(),
                })
            }
        })
    }

    pub fn build(&self) -> Result<Instance> {
        match *self {
            Construction::Fig1 { eps } => fig1(eps),
            Construction::VcLbSingleHyperedge { k, eps } => vc_lb_single_hyperedge(k, eps),
            Construction::VcLbBipartite { k, eps } => vc_lb_bipartite(k, eps),
            Construction::VcLbNonbipartite { k, eps } => vc_lb_nonbipartite(k, eps),
            Construction::SingleHyperedgeLb { n, eps } => single_hyperedge_lb(n, eps),
            Construction::TwoStageLb { n } => two_stage_lb(n),
            Construction::TightnessEdge { d, eps } => tightness_edge(d, eps),
            Construction::TightnessStar { d, n } => tightness_star(d, n),
            Construction::TwoInterval { p, q } => two_interval(p, q),
        }
    }
}

pub fn gen_paper(gen: &Construction) -> Result<Instance> {
    gen.build()
}

fn prob(name: &str, x: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(Error::Param(format!("{name} must lie in [0, 1], got {x}")))
    }
}

fn small_eps(eps: f64) -> Result<f64> {
    if eps > 0.0 && eps < 0.5 {
        Ok(eps)
    } else {
        Err(Error::Param(format!("eps must lie in (0, 0.5), got {eps}")))
    }
}

fn at_least(name: &str, x: usize, min: usize) -> Result<usize> {
    if x >= min {
        Ok(x)
    } else {
        Err(Error::Param(format!(
            "{name} must be at least {min}, got {x}"
        )))
    }
}

/// `prefix` followed by `i` zero-padded so ids sort numerically.
fn numbered(prefix: &str, i: usize, max: usize) -> String {
    let width = max.to_string().len();
    format!("{prefix}{i:0width$}")
}

fn v(id: &str, cost: f64, cells: &[(f64, f64, f64)]) -> Result<UncertainVertex> {
    UncertainVertex::with_cells(id, cost, cells)
}

fn edges(list: &[(&str, &str)]) -> Vec<Vec<String>> {
    list.iter()
        .map(|(a, b)| vec![a.to_string(), b.to_string()])
        .collect()
}

pub fn fig1(eps: f64) -> Result<Instance> {
    let eps = small_eps(eps)?;
    let right = [(1.0, 2.0, eps), (2.0, 3.0, 1.0 - eps)];
    Instance::new(
        vec![
            v("x", 1.0, &[(0.0, 1.0, 0.5), (1.0, 2.0, 0.5)])?,
            v("y", 1.0, &right)?,
            v("z", 1.0, &right)?,
        ],
        edges(&[("x", "y"), ("x", "z")]),
    )
}

fn left_heavy_right(eps: f64) -> [(f64, f64, f64); 3] {
    [(0.0, 1.0, eps), (1.0, 2.0, 0.0), (2.0, 3.0, 1.0 - eps)]
}

fn middle() -> [(f64, f64, f64); 3] {
    [(1.0, 2.0, 0.5), (2.0, 3.0, 0.0), (3.0, 4.0, 0.5)]
}

fn right(eps: f64) -> [(f64, f64, f64); 2] {
    [(2.0, 3.0, eps), (3.0, 5.0, 1.0 - eps)]
}

pub fn vc_lb_single_hyperedge(k: usize, eps: f64) -> Result<Instance> {
    let eps = small_eps(eps)?;
    let k = at_least("k", k, 1)? as f64;
    Instance::new(
        vec![
            v("x", k, &left_heavy_right(eps))?,
            v("y", 1.0, &middle())?,
            v("z", k, &right(eps))?,
        ],
        vec![vec!["x".into(), "y".into(), "z".into()]],
    )
}

pub fn vc_lb_bipartite(k: usize, eps: f64) -> Result<Instance> {
    let eps = small_eps(eps)?;
    let k = at_least("k", k, 1)?;
    let xs: Vec<String> = (1..=k).map(|i| numbered("x", i, k)).collect();
    let zs: Vec<String> = (1..=k).map(|i| numbered("z", i, k)).collect();
    let mut vertices = vec![v("y", 1.0, &middle())?];
    for x in &xs {
        vertices.push(v(x, 1.0, &left_heavy_right(eps))?);
    }
    for z in &zs {
        vertices.push(v(z, 1.0, &right(eps))?);
    }
    let hyperedges = xs
        .iter()
        .map(|x| {
            let mut e = vec![x.clone(), "y".to_string()];
            e.extend(zs.iter().cloned());
            e
        })
        .collect();
    Instance::new(vertices, hyperedges)
}

pub fn vc_lb_nonbipartite(k: usize, eps: f64) -> Result<Instance> {
    let eps = small_eps(eps)?;
    let k = at_least("k", k, 1)?;
    let xs: Vec<String> = (1..=k).map(|i| numbered("x", i, k)).collect();
    let zs: Vec<String> = (1..=k).map(|i| numbered("z", i, k)).collect();
    let left_heavy = [(0.0, 1.0, 1.0 - eps), (1.0, 2.0, 0.0), (2.0, 3.0, eps)];
    let mut vertices = vec![v("y", 1.0, &middle())?];
    for x in &xs {
        vertices.push(v(x, 1.0, &left_heavy)?);
    }
    for z in &zs {
        vertices.push(v(z, 1.0, &right(eps))?);
    }
    let mut hyperedges = Vec::new();
    for x in &xs {
        for z in &zs {
            hyperedges.push(vec![x.clone(), z.clone()]);
        }
        hyperedges.push(vec![x.clone(), "y".into()]);
    }
    for z in &zs {
        hyperedges.push(vec!["y".into(), z.clone()]);
    }
    Instance::new(vertices, hyperedges)
}

pub fn single_hyperedge_lb(n: usize, eps: f64) -> Result<Instance> {
    let eps = small_eps(eps)?;
    let n = at_least("n", n, 1)?;
    let inside = (n - 1) as f64 / n as f64;
    let mut vertices = vec![v(
        &numbered("e", 0, n),
        1.0,
        &[(0.0, 1.0, 1.0 - inside), (1.0, 2.0, inside)],
    )?];
    for i in 1..=n {
        vertices.push(v(
            &numbered("e", i, n),
            1.0,
            &[(1.0, 2.0, eps), (2.0, 3.0, 1.0 - eps)],
        )?);
    }
    let edge = (0..=n).map(|i| numbered("e", i, n)).collect();
    Instance::new(vertices, vec![edge])
}

pub fn two_stage_lb(n: usize) -> Result<Instance> {
    let n = at_least("n", n, 2)?;
    let ends = |a: f64, b: f64| {
        let mut cells = vec![(a, a + 1.0, 0.5)];
        if b - a > 2.0 {
            cells.push((a + 1.0, b - 1.0, 0.0));
        }
        cells.push((b - 1.0, b, 0.5));
        cells
    };
    let mut vertices = Vec::with_capacity(n);
    for i in 1..=n {
        let (a, b) = if i == 1 {
            (1.0, n as f64 + 1.0)
        } else {
            (i as f64, n as f64 + 2.0)
        };
        vertices.push(v(&numbered("i", i, n), 1.0, &ends(a, b))?);
    }
    let edge = (1..=n).map(|i| numbered("i", i, n)).collect();
    Instance::new(vertices, vec![edge])
}

/// `p0` sorts first, so ties in the LP and in exact covers go its way: the
/// algorithm queries `p0` and pays again for `pd` with probability `d − ε`.
pub fn tightness_edge(d: f64, eps: f64) -> Result<Instance> {
    let d = prob("d", d)?;
    if !(eps > 0.0 && eps < d) {
        return Err(Error::Param(format!("eps must lie in (0, d), got {eps}")));
    }
    Instance::new(
        vec![
            v("p0", 1.0, &[(1.0, 2.0, d - eps), (2.0, 3.0, 1.0 - d + eps)])?,
            v("pd", 1.0, &[(0.0, 1.0, 1.0), (1.0, 2.0, 0.0)])?,
        ],
        edges(&[("p0", "pd")]),
    )
}

pub fn tightness_star(d: f64, n: usize) -> Result<Instance> {
    let d = prob("d", d)?;
    let n = at_least("n", n, 1)?;
    let mut vertices = vec![v("c", 1.0, &[(0.0, 1.0, 1.0 - d), (1.0, 2.0, d)])?];
    let mut hyperedges = Vec::new();
    for i in 1..=n {
        let id = numbered("l", i, n);
        vertices.push(v(&id, 1.0, &[(1.0, 2.0, 0.5), (2.0, 3.0, 0.5)])?);
        hyperedges.push(vec!["c".to_string(), id]);
    }
    Instance::new(vertices, hyperedges)
}

pub fn two_interval(p: f64, q: f64) -> Result<Instance> {
    let (p, q) = (prob("p", p)?, prob("q", q)?);
    Instance::new(
        vec![
            v("v0", 1.0, &[(0.0, 1.0, 1.0 - p), (1.0, 2.0, p)])?,
            v("v1", 1.0, &[(1.0, 2.0, q), (2.0, 3.0, 1.0 - q)])?,
        ],
        edges(&[("v0", "v1")]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{elementary_grid, reduce};
    use crate::vcover::build_cover_graph;

    #[test]
    fn constructions_are_already_reduced() {
        for name in Construction::NAMES {
            let inst = Construction::from_name(name, &GenParams::default())
                .unwrap()
                .build()
                .unwrap();
            let r = reduce(&inst);
            assert!(r.forced.is_empty(), "{name}");
            assert_eq!(r.instance.hyperedges(), inst.hyperedges(), "{name}");
        }
    }

    #[test]
    fn fig1_shape() {
        let inst = fig1(0.1).unwrap();
        assert_eq!((inst.n(), inst.hyperedges().len()), (3, 2));
    }

    #[test]
    fn bipartite_lower_bound_cover_graph_is_complete_bipartite() {
        let inst = vc_lb_bipartite(3, 0.01).unwrap();
        let g = build_cover_graph(&inst, &inst.costs()).unwrap();
        let xs: Vec<usize> = (1..=3)
            .map(|i| inst.index_of(&format!("x{i}")).unwrap())
            .collect();
        assert_eq!(g.edge_count(), 3 * 4);
        for &x in &xs {
            assert_eq!(g.degree(x), 4);
        }
        assert!(g.bipartition().is_some());
    }

    #[test]
    fn nonbipartite_grid() {
        assert_eq!(
            elementary_grid(&vc_lb_nonbipartite(3, 0.01).unwrap()),
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
        );
        let inst = vc_lb_nonbipartite(2, 0.01).unwrap();
        assert!(build_cover_graph(&inst, &inst.costs())
            .unwrap()
            .bipartition()
            .is_none());
    }

    #[test]
    fn two_stage_layout() {
        let inst = two_stage_lb(8).unwrap();
        assert_eq!(inst.hyperedges()[0].len(), 8);
        let first = inst.interval(inst.index_of("i1").unwrap());
        let last = inst.interval(inst.index_of("i8").unwrap());
        assert_eq!(
            (first.lo, first.hi, last.lo, last.hi),
            (1.0, 9.0, 8.0, 10.0)
        );
    }

    #[test]
    fn bad_params_are_rejected() {
        assert!(fig1(0.7).is_err());
        assert!(tightness_edge(0.5, 0.6).is_err());
        assert!(two_interval(1.2, 0.5).is_err());
        assert!(Construction::from_name("fig9", &GenParams::default()).is_err());
    }
}
