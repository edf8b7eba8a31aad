use super::{Cell, Instance, Interval, Pmf, UncertainVertex};
use crate::error::Result;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    vertices: Vec<VertexDoc>,
    #[serde(default)]
    hyperedges: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: String,
    cost: f64,
    interval: [f64; 2],
    pmf: Vec<CellDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDoc {
    cell: [f64; 2],
    mass: f64,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: Document = serde_json::from_str(text)?;
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for v in doc.vertices {
        let interval = Interval::new(v.interval[0], v.interval[1])?;
        let cells = v
            .pmf
            .iter()
            .map(|c| {
                Ok(Cell {
                    span: Interval::new(c.cell[0], c.cell[1])?,
                    mass: c.mass,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        vertices.push(UncertainVertex::new(
            v.id,
            v.cost,
            interval,
            Pmf::new(interval, cells)?,
        )?);
    }
    Instance::new(vertices, doc.hyperedges)
}

/// Pretty JSON; floats use shortest round-trip formatting, so values are
/// reproduced exactly on parse.
pub fn serialize_instance(instance: &Instance) -> String {
    let doc = Document {
        vertices: instance
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id.clone(),
                cost: v.cost,
                interval: [v.interval.lo, v.interval.hi],
                pmf: v
                    .pmf
                    .cells()
                    .iter()
                    .map(|c| CellDoc {
                        cell: [c.span.lo, c.span.hi],
                        mass: c.mass,
                    })
                    .collect(),
            })
            .collect(),
        hyperedges: instance
            .hyperedges()
            .iter()
            .map(|e| e.iter().map(|&v| instance.id(v).to_string()).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("instance documents always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::fig1;

    const FIG1: &str = r#"{
      "vertices": [
        {"id": "x", "cost": 1, "interval": [0, 2], "pmf": [{"cell": [0, 1], "mass": 0.5}, {"cell": [1, 2], "mass": 0.5}]},
        {"id": "y", "cost": 1, "interval": [1, 3], "pmf": [{"cell": [1, 2], "mass": 0.01}, {"cell": [2, 3], "mass": 0.99}]},
        {"id": "z", "cost": 1, "interval": [1, 3], "pmf": [{"cell": [1, 2], "mass": 0.01}, {"cell": [2, 3], "mass": 0.99}]}
      ],
      "hyperedges": [["x", "y"], ["x", "z"]]
    }"#;

    #[test]
    fn parses_fig1_document() {
        let inst = parse_instance(FIG1).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.hyperedges().len(), 2);
        assert_eq!(inst, fig1(0.01));
    }

    #[test]
    fn lone_vertex_document() {
        let inst = parse_instance(
            r#"{"vertices":[{"id":"a","cost":2,"interval":[0,1],"pmf":[{"cell":[0,1],"mass":1}]}],"hyperedges":[]}"#,
        )
        .unwrap();
        assert_eq!(inst.n(), 1);
        assert!(inst.hyperedges().is_empty());
    }

    #[test]
    fn mass_error_is_reported() {
        let err = parse_instance(
            r#"{"vertices":[{"id":"a","cost":1,"interval":[0,2],"pmf":[{"cell":[0,1],"mass":0.5},{"cell":[1,2],"mass":0.4}]}],"hyperedges":[]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("mass sum"), "{err}");
    }

    #[test]
    fn round_trip_preserves_awkward_floats() {
        let inst = fig1(0.1 + 0.2);
        let back = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(back, inst);
    }
}
