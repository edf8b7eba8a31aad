//! Instance generators addressable by name, for both `generate` and `run`.

use anyhow::{bail, Context, Result};
use clap::Args;
use orient::harness::{gen_random, Construction, GenParams, RandomFamily, RandomOptions};
use orient::model::stream_rng;
use orient::Instance;

pub const RANDOM_NAMES: [&str; 5] = ["gnp", "hypergraph", "bipartite", "star", "interval-layers"];

/// Stream reserved for drawing random instances, away from realization streams.
const GEN_STREAM: u64 = 1 << 63;

#[derive(Args, Clone, Debug, Default)]
pub struct GenArgs {
    /// Perturbation of the lower-bound constructions.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    /// Size or set count.
    #[arg(long)]
    pub k: Option<usize>,
    /// Threshold for the tightness constructions.
    #[arg(long)]
    pub d: Option<f64>,
    /// Probability (edge probability for random graphs).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Hyperedge count.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long)]
    pub left: Option<usize>,
    #[arg(long)]
    pub right: Option<usize>,
    #[arg(long)]
    pub leaves: Option<usize>,
    /// Most cells per random distribution.
    #[arg(long)]
    pub max_cells: Option<usize>,
    /// Draw random costs instead of unit costs.
    #[arg(long)]
    pub weighted: bool,
}

impl GenArgs {
    /// Parses `key=value,key=value` as used in `run --gen name:...`.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let mut a = GenArgs::default();
        for pair in text.split(',').filter(|s| !s.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .unwrap_or((pair.trim(), ""));
            let float = || {
                value
                    .parse::<f64>()
                    .with_context(|| format!("{key}={value}"))
            };
            let int = || {
                value
                    .parse::<usize>()
                    .with_context(|| format!("{key}={value}"))
            };
            match key {
                "eps" => a.eps = Some(float()?),
                "n" => a.n = Some(int()?),
                "k" => a.k = Some(int()?),
                "d" => a.d = Some(float()?),
                "p" => a.p = Some(float()?),
                "q" => a.q = Some(float()?),
                "m" => a.m = Some(int()?),
                "max-size" => a.max_size = Some(int()?),
                "left" => a.left = Some(int()?),
                "right" => a.right = Some(int()?),
                "leaves" => a.leaves = Some(int()?),
                "max-cells" => a.max_cells = Some(int()?),
                "weighted" => a.weighted = value.is_empty() || value == "true",
                _ => bail!("unknown generator parameter `{key}`"),
            }
        }
        Ok(a)
    }

    fn construction_params(&self) -> GenParams {
        GenParams {
            eps: self.eps,
            n: self.n,
            k: self.k,
            d: self.d,
            p: self.p,
            q: self.q,
        }
    }

    fn family(&self, name: &str) -> Option<RandomFamily> {
        Some(match name {
            "gnp" => RandomFamily::Gnp {
                n: self.n.unwrap_or(10),
                p: self.p.unwrap_or(0.3),
            },
            "hypergraph" => RandomFamily::Hypergraph {
                n: self.n.unwrap_or(10),
                m: self.m.unwrap_or(4),
                max_size: self.max_size.unwrap_or(3),
            },
            "bipartite" => RandomFamily::Bipartite {
                left: self.left.unwrap_or(4),
                right: self.right.unwrap_or(4),
                p: self.p.unwrap_or(0.5),
            },
            "star" => RandomFamily::Star {
                leaves: self.leaves.or(self.n).unwrap_or(5),
            },
            "interval-layers" => RandomFamily::IntervalLayers {
                k: self.k.unwrap_or(2),
                n: self.n.unwrap_or(8),
            },
            _ => return None,
        })
    }
}

/// Builds the named construction or random family; random families draw
/// from `seed`.
pub fn build(name: &str, args: &GenArgs, seed: u64) -> orient::Result<Instance> {
    match args.family(name) {
        Some(family) => {
            let opts = RandomOptions {
                unit_costs: !args.weighted,
                max_cells: args.max_cells.unwrap_or(RandomOptions::default().max_cells),
                reduce: true,
            };
            gen_random(family, opts, &mut stream_rng(seed, GEN_STREAM))
        }
        None => Construction::from_name(name, &args.construction_params())?.build(),
    }
}

pub fn all_names() -> Vec<&'static str> {
    Construction::NAMES
        .iter()
        .chain(RANDOM_NAMES.iter())
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_parameters() {
        let a = GenArgs::parse_inline("p=0.4,q=0.25,n=7,weighted").unwrap();
        assert_eq!(
            (a.p, a.q, a.n, a.weighted),
            (Some(0.4), Some(0.25), Some(7), true)
        );
        assert!(GenArgs::parse_inline("zz=1").is_err());
        assert!(GenArgs::parse_inline("n=x").is_err());
    }

    #[test]
    fn every_name_builds() {
        for name in all_names() {
            build(name, &GenArgs::default(), 1).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(build("nope", &GenArgs::default(), 1).is_err());
    }
}
