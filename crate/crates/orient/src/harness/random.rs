//! Random instance families.

use crate::error::{Error, Result};
use crate::model::{reduce, Instance, UncertainVertex};
use rand::seq::index::sample;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RandomFamily {
    /// Erdős–Rényi graph on `n` vertices.
    Gnp { n: usize, p: f64 },
    /// `m` hyperedges of sizes `2..=max_size` over `n` vertices.
    Hypergraph { n: usize, m: usize, max_size: usize },
    /// Random edges between a left and a right side.
    Bipartite { left: usize, right: usize, p: f64 },
    /// One centre and `leaves` leaves.
    Star { leaves: usize },
    /// Union of `k` sets to sort over `n` equal-length intervals.
    IntervalLayers { k: usize, n: usize },
}

/// Knobs shared by all families.
#[derive(Clone, Copy, Debug)]
pub struct RandomOptions {
    pub unit_costs: bool,
    /// Most cells per distribution.
    pub max_cells: usize,
    /// Apply [`reduce`] to the result.
    pub reduce: bool,
}

impl Default for RandomOptions {
    fn default() -> Self {
        RandomOptions {
            unit_costs: true,
            max_cells: 3,
            reduce: true,
        }
    }
}

/// A generated instance; `layers` lists, for interval-layer families, the
/// ids of each set in left-endpoint order.
#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance,
    pub layers: Option<Vec<Vec<String>>>,
}

pub fn gen_random<R: Rng + ?Sized>(
    family: RandomFamily,
    opts: RandomOptions,
    rng: &mut R,
) -> Result<Instance> {
    Ok(generate(family, opts, rng)?.instance)
}

/// Generates an instance of `family`, reduced unless `opts.reduce` is off.
pub fn generate<R: Rng + ?Sized>(
    family: RandomFamily,
    opts: RandomOptions,
    rng: &mut R,
) -> Result<Generated> {
    if opts.max_cells == 0 {
        return Err(Error::Param("max_cells must be positive".into()));
    }
    let (intervals, edges, layers): (Vec<(f64, f64)>, Vec<Vec<usize>>, Option<Vec<Vec<usize>>>) =
        match family {
            RandomFamily::Gnp { n, p } => {
                check_p(p)?;
                let iv = free_intervals(n, rng);
                let mut e = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        if rng.gen_bool(p) {
                            e.push(vec![a, b]);
                        }
                    }
                }
                (iv, e, None)
            }
            RandomFamily::Hypergraph { n, m, max_size } => {
                if max_size < 2 || max_size > n {
                    return Err(Error::Param(format!(
                        "max_size must lie in [2, n], got {max_size}"
                    )));
                }
                let iv = free_intervals(n, rng);
                let e = (0..m)
                    .map(|_| {
                        let size = rng.gen_range(2..=max_size);
                        sample(rng, n, size).into_vec()
                    })
                    .collect();
                (iv, e, None)
            }
            RandomFamily::Bipartite { left, right, p } => {
                check_p(p)?;
                let iv = free_intervals(left + right, rng);
                let mut e = Vec::new();
                for a in 0..left {
                    for b in left..left + right {
                        if rng.gen_bool(p) {
                            e.push(vec![a, b]);
                        }
                    }
                }
                (iv, e, None)
            }
            RandomFamily::Star { leaves } => {
                let mut iv = vec![(0.0, 2.0)];
                for _ in 0..leaves {
                    iv.push((rng.gen_range(0.1..1.9), 2.0 + rng.gen_range(0.1..1.5)));
                }
                let e = (1..=leaves).map(|l| vec![0, l]).collect();
                (iv, e, None)
            }
            RandomFamily::IntervalLayers { k, n } => {
                if k == 0 {
                    return Err(Error::Param("need at least one layer".into()));
                }
                let span = (n as f64 / 3.0).max(1.0);
                let iv: Vec<(f64, f64)> = (0..n)
                    .map(|_| {
                        let lo = rng.gen_range(0.0..span);
                        (lo, lo + 1.5)
                    })
                    .collect();
                let mut layers = Vec::with_capacity(k);
                let mut e = Vec::new();
                for _ in 0..k {
                    let mut members: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
                    members.sort_by(|&a, &b| iv[a].0.total_cmp(&iv[b].0));
                    for (i, &a) in members.iter().enumerate() {
                        for &b in &members[i + 1..] {
                            if iv[b].0 < iv[a].1 {
                                e.push(vec![a, b]);
                            }
                        }
                    }
                    layers.push(members);
                }
                (iv, e, Some(layers))
            }
        };

    let n = intervals.len();
    let width = n.max(1).to_string().len();
    let ids: Vec<String> = (0..n).map(|i| format!("v{i:0width$}")).collect();
    let vertices = intervals
        .iter()
        .zip(&ids)
        .map(|(&(lo, hi), id)| {
            let cost = if opts.unit_costs {
                1.0
            } else {
                rng.gen_range(1.0..5.0)
            };
            UncertainVertex::with_cells(id, cost, &random_cells(lo, hi, opts.max_cells, rng))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut edges: Vec<Vec<String>> = edges
        .into_iter()
        .map(|e| e.into_iter().map(|v| ids[v].clone()).collect())
        .collect();
    edges.sort();
    edges.dedup();
    let built = Instance::new(vertices, edges)?;
    let instance = if opts.reduce {
        reduce(&built).instance
    } else {
        built
    };
    let layers = layers.map(|ls| {
        ls.into_iter()
            .map(|l| {
                l.into_iter()
                    .map(|v| ids[v].clone())
                    .filter(|id| instance.index_of(id).is_some())
                    .collect()
            })
            .collect()
    });
    Ok(Generated { instance, layers })
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Param(format!(
            "edge probability must lie in [0, 1], got {p}"
        )))
    }
}

/// Overlapping intervals on a span that grows slowly with `n`.
fn free_intervals<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(f64, f64)> {
    let span = 1.0 + n as f64 / 4.0;
    (0..n)
        .map(|_| {
            let lo = rng.gen_range(0.0..span);
            (lo, lo + rng.gen_range(1.0..3.0))
        })
        .collect()
}

/// Splits `(lo, hi)` into up to `max_cells` cells with random positive masses.
fn random_cells<R: Rng + ?Sized>(
    lo: f64,
    hi: f64,
    max_cells: usize,
    rng: &mut R,
) -> Vec<(f64, f64, f64)> {
    let k = rng.gen_range(1..=max_cells);
    let mut cuts: Vec<f64> = (1..k).map(|_| rng.gen_range(lo..hi)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut bounds = vec![lo];
    bounds.extend(cuts.into_iter().filter(|&c| c > lo && c < hi));
    bounds.push(hi);
    let raw: Vec<f64> = (1..bounds.len())
        .map(|_| rng.gen_range(0.05..1.0))
        .collect();
    let total: f64 = raw.iter().sum();
    let mut cells: Vec<(f64, f64, f64)> = bounds
        .windows(2)
        .zip(&raw)
        .map(|(w, m)| (w[0], w[1], m / total))
        .collect();
    // Make the masses sum to one up to the last bit.
    let rest: f64 = cells[..cells.len() - 1].iter().map(|c| c.2).sum();
    cells.last_mut().expect("at least one cell").2 = 1.0 - rest;
    cells
}
