use crate::algorithms::{OptOracle, QueryAlgorithm, QueryPolicy};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::mandatory::{is_feasible, mandatory_set};
use crate::model::{is_reduced, sample_realization, stream_rng, Instance, Realization};
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

pub const DEFAULT_BOOTSTRAP: usize = 1000;

/// Monte-Carlo estimate of `E[ALG] / E[OPT]` from paired samples.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub instance_id: String,
    pub algorithm: String,
    pub d: Option<f64>,
    pub alpha: Option<f64>,
    pub n_samples: usize,
    pub mean_alg: f64,
    pub mean_opt: f64,
    /// Sample standard deviations of the per-realization costs.
    pub sd_alg: f64,
    pub sd_opt: f64,
    pub ratio: f64,
    pub ci95_ratio: (f64, f64),
    pub master_seed: u64,
    pub wall_ms: u64,
}

/// Per-realization costs of one evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedSamples {
    pub alg: Vec<f64>,
    pub opt: Vec<f64>,
}

/// Runs `policy` and the offline optimum on realizations `0..n` of
/// `master_seed`. The instance must already be reduced.
pub fn paired_samples(
    instance: &Instance,
    policy: &dyn QueryPolicy,
    n_samples: usize,
    master_seed: u64,
) -> Result<PairedSamples> {
    let oracle = OptOracle::new(instance)?;
    let cache: Mutex<HashMap<BitSet, f64>> = Mutex::new(HashMap::new());
    let opt_cost = |real: &Realization| -> Result<f64> {
        let m = mandatory_set(instance, real);
        let cached = cache.lock().expect("cache lock").get(&m).copied();
        let cover = match cached {
            Some(w) => w,
            None => {
                let w = oracle.cover_outside(&m)?.weight;
                cache.lock().expect("cache lock").insert(m.clone(), w);
                w
            }
        };
        Ok(instance.total_cost(&m) + cover)
    };
    let pairs: Vec<(f64, f64)> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let real = sample_realization(instance, &mut stream_rng(master_seed, i));
            let t = policy.execute(instance, &real)?;
            if !is_feasible(instance, &real, t.queried()) {
                return Err(Error::Invalid(format!(
                    "infeasible query set on realization {i}"
                )));
            }
            Ok((t.total_cost, opt_cost(&real)?))
        })
        .collect::<Result<_>>()?;
    let (alg, opt) = pairs.into_iter().unzip();
    Ok(PairedSamples { alg, opt })
}

/// Evaluates `algorithm` on `n_samples` paired realizations of a reduced
/// instance. Planning randomness uses the last stream of `master_seed`,
/// realization `i` uses stream `i`.
pub fn evaluate(
    instance: &Instance,
    instance_id: &str,
    algorithm: &dyn QueryAlgorithm,
    n_samples: usize,
    master_seed: u64,
) -> Result<EvaluationReport> {
    evaluate_with(
        instance,
        instance_id,
        algorithm,
        n_samples,
        master_seed,
        DEFAULT_BOOTSTRAP,
    )
}

pub fn evaluate_with(
    instance: &Instance,
    instance_id: &str,
    algorithm: &dyn QueryAlgorithm,
    n_samples: usize,
    master_seed: u64,
    bootstrap: usize,
) -> Result<EvaluationReport> {
    if n_samples == 0 {
        return Err(Error::Param("need at least one sample".into()));
    }
    if !is_reduced(instance) {
        return Err(Error::Invalid(
            "evaluation needs a reduced instance; apply reduce first".into(),
        ));
    }
    let start = Instant::now();
    let policy = algorithm.plan(instance, &mut stream_rng(master_seed, u64::MAX))?;
    let s = paired_samples(instance, policy.as_ref(), n_samples, master_seed)?;

    let n = n_samples as f64;
    let (sum_alg, sum_opt) = (s.alg.iter().sum::<f64>(), s.opt.iter().sum::<f64>());
    let mean_alg = sum_alg / n;
    let mean_opt = sum_opt / n;
    let ci95_ratio = bootstrap_ci(&s, bootstrap, master_seed);
    Ok(EvaluationReport {
        instance_id: instance_id.to_string(),
        algorithm: algorithm.name(),
        d: algorithm.d(),
        alpha: algorithm.alpha(),
        n_samples,
        mean_alg,
        mean_opt,
        sd_alg: sd(&s.alg),
        sd_opt: sd(&s.opt),
        ratio: ratio(mean_alg, mean_opt),
        ci95_ratio,
        master_seed,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// `a / b`, with `0 / 0 = 1`.
fn ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 && b == 0.0 {
        1.0
    } else {
        a / b
    }
}

fn sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Percentile bootstrap of the ratio of sums, resampling realizations with
/// their pairing intact.
fn bootstrap_ci(s: &PairedSamples, resamples: usize, seed: u64) -> (f64, f64) {
    let n = s.alg.len();
    if resamples == 0 {
        let r = ratio(s.alg.iter().sum(), s.opt.iter().sum());
        return (r, r);
    }
    let mut ratios: Vec<f64> = (0..resamples as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, u64::MAX - 1 - b);
            let (mut a, mut o) = (0.0, 0.0);
            for _ in 0..n {
                let i = rng.gen_range(0..n);
                a += s.alg[i];
                o += s.opt[i];
            }
            ratio(a, o)
        })
        .collect();
    ratios.sort_by(f64::total_cmp);
    let lo = ((0.025 * resamples as f64).floor() as usize).min(resamples - 1);
    let hi = ((0.975 * resamples as f64).ceil() as usize)
        .saturating_sub(1)
        .min(resamples - 1);
    (ratios[lo], ratios[hi])
}

pub const CSV_HEADER: [&str; 13] = [
    "instance_id",
    "algorithm",
    "d",
    "alpha",
    "n_samples",
    "mean_alg",
    "mean_opt",
    "ratio",
    "ci_lo",
    "ci_hi",
    "seed",
    "wall_ms",
    "status",
];

/// One CSV line: a report, or the failure of one (instance, algorithm) pair.
#[derive(Clone, Debug)]
pub enum ReportRow {
    Ok(EvaluationReport),
    Failed {
        instance_id: String,
        algorithm: String,
        n_samples: usize,
        seed: u64,
        message: String,
    },
}

fn opt_num(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes rows under [`CSV_HEADER`]. With `zero_wall`, `wall_ms` is written
/// as 0 so that output bytes depend only on the inputs.
pub fn write_csv<W: Write>(out: W, rows: &[ReportRow], zero_wall: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Invalid(format!("writing CSV: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        let rec: Vec<String> = match row {
            ReportRow::Ok(r) => vec![
                r.instance_id.clone(),
                r.algorithm.clone(),
                opt_num(r.d),
                opt_num(r.alpha),
                r.n_samples.to_string(),
                r.mean_alg.to_string(),
                r.mean_opt.to_string(),
                r.ratio.to_string(),
                r.ci95_ratio.0.to_string(),
                r.ci95_ratio.1.to_string(),
                r.master_seed.to_string(),
                if zero_wall { 0 } else { r.wall_ms }.to_string(),
                "ok".into(),
            ],
            ReportRow::Failed {
                instance_id,
                algorithm,
                n_samples,
                seed,
                message,
            } => {
                let mut rec = vec![instance_id.clone(), algorithm.clone()];
                rec.extend(std::iter::repeat_n(String::new(), 2));
                rec.push(n_samples.to_string());
                rec.extend(std::iter::repeat_n(String::new(), 5));
                rec.push(seed.to_string());
                rec.push("0".into());
                rec.push(format!("error: {message}"));
                rec
            }
        };
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Invalid(format!("writing CSV: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{Baseline, OfflineOpt};
    use crate::harness::constructions::fig1;
    use crate::model::{reduce, UncertainVertex};

    #[test]
    fn offline_opt_has_ratio_one() {
        let r = evaluate(&fig1(0.1).unwrap(), "fig1", &OfflineOpt, 2000, 5).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.ci95_ratio, (1.0, 1.0));
    }

    #[test]
    fn reruns_are_identical() {
        let inst = fig1(0.1).unwrap();
        let a = evaluate(&inst, "fig1", &Baseline, 3000, 11).unwrap();
        let b = evaluate(&inst, "fig1", &Baseline, 3000, 11).unwrap();
        assert_eq!(
            (a.mean_alg, a.mean_opt, a.ci95_ratio),
            (b.mean_alg, b.mean_opt, b.ci95_ratio)
        );
    }

    #[test]
    fn unreduced_instances_are_rejected() {
        let u = |id: &str, lo: f64, hi: f64| {
            UncertainVertex::with_cells(id, 1.0, &[(lo, hi, 1.0)]).unwrap()
        };
        let inst = Instance::new(
            vec![u("a", 0.0, 10.0), u("b", 2.0, 3.0)],
            vec![vec!["a".into(), "b".into()]],
        )
        .unwrap();
        assert!(evaluate(&inst, "contained", &Baseline, 10, 1).is_err());
        assert!(evaluate(&reduce(&inst).instance, "contained", &Baseline, 10, 1).is_ok());
    }

    #[test]
    fn csv_layout() {
        let r = evaluate(&fig1(0.1).unwrap(), "fig1", &Baseline, 100, 2).unwrap();
        let rows = vec![
            ReportRow::Ok(r),
            ReportRow::Failed {
                instance_id: "big".into(),
                algorithm: "bestvc".into(),
                n_samples: 100,
                seed: 2,
                message: "too big".into(),
            },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER.join(","));
        assert!(lines[1].starts_with("fig1,baseline,,,100,"));
        assert!(lines[1].ends_with(",2,0,ok"));
        assert_eq!(lines[2], "big,bestvc,,,100,,,,,,2,0,error: too big");
    }
}
