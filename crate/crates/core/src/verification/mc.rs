use rayon::prelude::*;

use super::stats::{empirical_pmf, tv_distance};
use super::{ComparisonReport, McConfig, Metric};
use crate::error::{invalid, Result};
use crate::sampling::{BoxRegion, RngStream};
use crate::skellam_field::{gsrf_count, lattice_sample, srf_pmf_table, GsrfParams, LatticeSpec, PmfTable, SkellamParams};

/// Stream id of replicate `index` within the experiment labelled `tag`.
pub fn stream_id(tag: u64, index: u64) -> u64 {
    (tag << 40) | index
}

/// Runs `f` once per replicate, replicate `i` drawing from stream
/// [`stream_id`]`(tag, i)` of `cfg.seed`. Output order is replicate order, so
/// the result does not depend on `cfg.workers`.
pub fn run_replicates<T, F>(cfg: &McConfig, tag: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    cfg.validate()?;
    if cfg.replicates as u64 >= 1 << 40 {
        return Err(invalid("replicates", "must be below 2^40"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| invalid("workers", e.to_string()))?;
    pool.install(|| {
        (0..cfg.replicates as u64)
            .into_par_iter()
            .map(|i| f(&mut RngStream::new(cfg.seed, stream_id(tag, i))))
            .collect()
    })
}

fn as_skellam(params: &GsrfParams) -> Option<SkellamParams> {
    match params.jumps.as_slice() {
        [(1.0, a), (-1.0, b)] | [(-1.0, b), (1.0, a)] => SkellamParams::new(*a, *b).ok(),
        _ => None,
    }
}

/// Expected total-variation distance of an `n`-sample empirical pmf from the
/// truth, `sum_n sqrt(p_n (1 - p_n) / (2 pi N))`.
fn noise_floor(reference: &PmfTable, n: usize) -> f64 {
    let mut mass: Vec<f64> = reference.probs.clone();
    mass.push(reference.tail_mass);
    mass.iter()
        .map(|p| (p * (1.0 - p) / (2.0 * std::f64::consts::PI * n as f64)).sqrt())
        .sum()
}

/// Total-variation distance between the lattice approximation `Z_k(s, t)`
/// (uniform cell rule) and the field at `(s, t)`, for each `k`.
///
/// The reference is the exact Skellam pmf when the jumps are `{+1, -1}` and an
/// independent `gsrf_count` sample otherwise. Each report carries the
/// sampling-noise floor of the distance in its metadata.
pub fn convergence_study(
    params: &GsrfParams,
    s: f64,
    t: f64,
    k_values: &[u64],
    cfg: &McConfig,
    window: (i64, i64),
    tv_threshold: f64,
) -> Result<Vec<ComparisonReport>> {
    params.validate()?;
    if k_values.is_empty() || k_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("k_values", "must be a nonempty increasing list"));
    }
    if params.jumps.iter().any(|&(j, _)| j.fract() != 0.0) {
        return Err(invalid("jumps", "integer jump sizes are required for a pmf comparison"));
    }
    let region = BoxRegion::rectangle(s, t)?;
    let (reference, kind) = match as_skellam(params) {
        Some(p) => (srf_pmf_table(&p, s, t, window.0, window.1)?, "exact"),
        None => {
            let draws = run_replicates(cfg, 0, |rng| Ok(gsrf_count(params, &region, rng)? as i64))?;
            (empirical_pmf(&draws, window.0, window.1)?, "monte_carlo")
        }
    };
    let mut floor = noise_floor(&reference, cfg.replicates);
    if kind == "monte_carlo" {
        floor *= std::f64::consts::SQRT_2;
    }
    k_values
        .iter()
        .map(|&k| {
            let spec = LatticeSpec::uniform(k);
            let draws = run_replicates(cfg, k, |rng| Ok(lattice_sample(&spec, params, s, t, rng)? as i64))?;
            let tv = tv_distance(&empirical_pmf(&draws, window.0, window.1)?, &reference)?;
            Ok(ComparisonReport::new(format!("lattice k={k}"), Metric::Tv, tv, tv_threshold)
                .with("k", k)
                .with("reference", kind)
                .with("noise_floor", floor))
        })
        .collect()
}
