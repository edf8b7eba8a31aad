use super::{Instance, Interval};
use rand::Rng;

/// Sorted distinct interval endpoints; consecutive values bound the
/// elementary intervals.
pub fn elementary_grid(instance: &Instance) -> Vec<f64> {
    let mut pts: Vec<f64> = instance
        .vertices()
        .iter()
        .flat_map(|v| [v.interval.lo, v.interval.hi])
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Per-vertex masses over the elementary intervals.
///
/// Every interval is a union of elementary intervals, so membership of a
/// weight in any interval depends only on the elementary interval ("cell")
/// it falls into.
#[derive(Clone, Debug)]
pub struct ProbabilityMatrix {
    grid: Vec<f64>,
    spans: Vec<(usize, usize)>,
    masses: Vec<Vec<(usize, f64)>>,
}

/// One elementary-cell index per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellRealization {
    pub cells: Vec<usize>,
}

impl ProbabilityMatrix {
    pub fn new(instance: &Instance) -> Self {
        let grid = elementary_grid(instance);
        let pos = |x: f64| grid.partition_point(|&t| t < x);
        let mut spans = Vec::with_capacity(instance.n());
        let mut masses = Vec::with_capacity(instance.n());
        for v in instance.vertices() {
            let (a, b) = (pos(v.interval.lo), pos(v.interval.hi));
            let mut row = Vec::new();
            for k in a..b {
                let elem = Interval {
                    lo: grid[k],
                    hi: grid[k + 1],
                };
                let m: f64 = v
                    .pmf
                    .cells()
                    .iter()
                    .map(|c| c.mass * c.span.overlap_len(&elem) / c.span.len())
                    .sum();
                if m > 0.0 {
                    row.push((k, m));
                }
            }
            spans.push((a, b));
            masses.push(row);
        }
        ProbabilityMatrix {
            grid,
            spans,
            masses,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn n_cells(&self) -> usize {
        self.grid.len().saturating_sub(1)
    }

    /// Half-open range of cell indices making up the vertex's interval.
    pub fn span(&self, v: usize) -> (usize, usize) {
        self.spans[v]
    }

    pub fn in_interval(&self, v: usize, cell: usize) -> bool {
        let (a, b) = self.spans[v];
        a <= cell && cell < b
    }

    /// Cells with positive mass for `v`, ascending.
    pub fn masses(&self, v: usize) -> &[(usize, f64)] {
        &self.masses[v]
    }

    /// Number of joint cell assignments with positive probability.
    pub fn combinations(&self) -> f64 {
        self.masses.iter().map(|r| r.len() as f64).product()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CellRealization {
        let cells = self
            .masses
            .iter()
            .map(|row| {
                let total: f64 = row.iter().map(|c| c.1).sum();
                let u = rng.gen::<f64>() * total;
                let mut acc = 0.0;
                for &(k, m) in row {
                    acc += m;
                    if u < acc {
                        return k;
                    }
                }
                row.last().expect("vertex has positive mass").0
            })
            .collect();
        CellRealization { cells }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::fig1;
    use crate::model::UncertainVertex;

    #[test]
    fn fig1_grid() {
        assert_eq!(elementary_grid(&fig1(0.1)), vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn single_vertex_grid() {
        let v = UncertainVertex::with_cells("a", 1.0, &[(0.0, 1.0, 1.0)]).unwrap();
        let inst = Instance::new(vec![v], vec![]).unwrap();
        assert_eq!(elementary_grid(&inst), vec![0.0, 1.0]);
    }

    #[test]
    fn staircase_grid() {
        let inst = Instance::new(
            vec![
                UncertainVertex::with_cells("x", 1.0, &[(0.0, 3.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("y", 1.0, &[(1.0, 4.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("z", 1.0, &[(2.0, 5.0, 1.0)]).unwrap(),
            ],
            vec![vec!["x".into(), "y".into(), "z".into()]],
        )
        .unwrap();
        assert_eq!(elementary_grid(&inst), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn straddling_cell_is_split_by_length() {
        let inst = Instance::new(
            vec![
                UncertainVertex::with_cells("a", 1.0, &[(0.0, 4.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("b", 1.0, &[(1.0, 5.0, 1.0)]).unwrap(),
            ],
            vec![vec!["a".into(), "b".into()]],
        )
        .unwrap();
        let pm = ProbabilityMatrix::new(&inst);
        assert_eq!(pm.masses(0), &[(0, 0.25), (1, 0.75)]);
        assert_eq!(pm.span(1), (1, 3));
    }
}
