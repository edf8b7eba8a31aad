use crate::algorithms::OptOracle;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::mandatory::mandatory_set_cells;
use crate::model::{CellRealization, Instance, ProbabilityMatrix};
use std::collections::HashMap;

/// Largest number of joint cell assignments [`exact_expected_opt`] enumerates.
pub const EXACT_COMBINATION_BOUND: usize = 1_000_000;

/// `E[OPT]` by enumerating every joint elementary-cell assignment; the
/// mandatory set, and hence the optimum, only depends on the cells.
pub fn exact_expected_opt(instance: &Instance) -> Result<f64> {
    let pm = ProbabilityMatrix::new(instance);
    let combos = pm.combinations();
    if combos > EXACT_COMBINATION_BOUND as f64 {
        return Err(Error::BoundExceeded {
            solver: "exact-expected-opt",
            size: combos.min(usize::MAX as f64) as usize,
            bound: EXACT_COMBINATION_BOUND,
        });
    }
    let n = instance.n();
    let oracle = OptOracle::new(instance)?;
    let mut cache: HashMap<BitSet, f64> = HashMap::new();
    let rows: Vec<&[(usize, f64)]> = (0..n).map(|v| pm.masses(v)).collect();
    let mut digit = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let prob: f64 = (0..n).map(|v| rows[v][digit[v]].1).product();
        let cr = CellRealization {
            cells: (0..n).map(|v| rows[v][digit[v]].0).collect(),
        };
        let m = mandatory_set_cells(instance, &pm, &cr);
        let cover = match cache.get(&m) {
            Some(&w) => w,
            None => {
                let w = oracle.cover_outside(&m)?.weight;
                cache.insert(m.clone(), w);
                w
            }
        };
        total += prob * (instance.total_cost(&m) + cover);

        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            digit[i] += 1;
            if digit[i] < rows[i].len() {
                break;
            }
            digit[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::constructions::{fig1, two_interval};
    use crate::model::UncertainVertex;

    #[test]
    fn fig1_closed_form() {
        for eps in [0.1, 0.01] {
            let e = exact_expected_opt(&fig1(eps).unwrap()).unwrap();
            assert!((e - (2.0 - (1.0 - eps) * (1.0 - eps) / 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_interval_closed_form() {
        let e = exact_expected_opt(&two_interval(0.4, 0.4).unwrap()).unwrap();
        assert!((e - 1.16).abs() < 1e-12);
    }

    #[test]
    fn isolated_vertex_costs_nothing() {
        let v = UncertainVertex::with_cells("a", 1.0, &[(0.0, 1.0, 1.0)]).unwrap();
        assert_eq!(
            exact_expected_opt(&Instance::new(vec![v], vec![]).unwrap()).unwrap(),
            0.0
        );
    }
}
