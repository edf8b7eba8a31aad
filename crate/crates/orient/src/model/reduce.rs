use super::Instance;

#[derive(Clone, Debug)]
pub struct Reduced {
    pub instance: Instance,
    /// Ids of vertices that are mandatory in every realization, in the order
    /// they were removed.
    pub forced: Vec<String>,
}

/// Preprocesses to a fixpoint: members disjoint from their hyperedge's
/// leftmost interval are dropped, a leftmost vertex whose interval contains
/// another member's interval is forced and removed everywhere, and hyperedges
/// left with fewer than two members disappear.
pub fn reduce(instance: &Instance) -> Reduced {
    let n = instance.n();
    let iv = |v: usize| instance.interval(v);
    let mut alive = vec![true; n];
    let mut edges: Vec<Vec<usize>> = instance.hyperedges().to_vec();
    let mut forced = Vec::new();
    loop {
        for e in edges.iter_mut() {
            e.retain(|&v| alive[v]);
            if let Some(&l) = e.first() {
                e.retain(|&u| u == l || iv(l).intersects(iv(u)));
            }
        }
        edges.retain(|e| e.len() >= 2);
        let hit = edges.iter().find_map(|e| {
            let l = e[0];
            e[1..]
                .iter()
                .any(|&u| iv(l).contains_interval(iv(u)))
                .then_some(l)
        });
        match hit {
            Some(l) => {
                alive[l] = false;
                forced.push(instance.id(l).to_string());
            }
            None => break,
        }
    }
    let mut remap = vec![usize::MAX; n];
    let mut vertices = Vec::new();
    for v in 0..n {
        if alive[v] {
            remap[v] = vertices.len();
            vertices.push(instance.vertex(v).clone());
        }
    }
    let edges = edges
        .into_iter()
        .map(|e| e.into_iter().map(|v| remap[v]).collect())
        .collect();
    Reduced {
        instance: Instance::from_parts(vertices, edges),
        forced,
    }
}

/// No hyperedge's leftmost interval contains another member's interval, so
/// [`reduce`] would force nothing.
pub fn is_reduced(instance: &Instance) -> bool {
    instance.hyperedges().iter().all(|e| {
        let l = instance.interval(e[0]);
        e[1..]
            .iter()
            .all(|&u| !l.contains_interval(instance.interval(u)))
    })
}
