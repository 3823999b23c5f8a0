//! Seeded, parallel Monte Carlo estimation of the secrecy outage probability.
//!
//! Trials are grouped in fixed chunks of [`CHUNK`]. Chunk `c` draws from a
//! ChaCha8 stream keyed by the seed with stream id `c`, so every chunk can be
//! generated on any thread and the merged count does not depend on the
//! number of workers.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{Method, SopEstimate};
use crate::chanmodel::{ChannelSampler, CorrelationSpec, SystemConfig};
use crate::combine::{in_outage, select_unchecked, CombinerKind, TasMode};
use crate::error::{domain, Result};

/// Trials per random stream.
pub const CHUNK: u64 = 1 << 14;

/// Trial budget and seeding of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McPlan {
    pub trials: u64,
    pub seed: u64,
    /// Threads used; never changes the result.
    pub workers: usize,
}

impl McPlan {
    pub fn new(trials: u64, seed: u64, workers: usize) -> Result<Self> {
        let plan = McPlan { trials, seed, workers };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1000 {
            return domain(format!("need at least 1000 trials, got {}", self.trials));
        }
        if self.workers < 1 {
            return domain("need at least one worker");
        }
        Ok(())
    }
}

/// Random stream for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn run_parallel<F>(chunks: u64, workers: usize, f: F) -> Result<u64>
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    if workers == 1 {
        return Ok((0..chunks).map(f).sum());
    }
    // Already on a pool (e.g. a sweep running points in parallel): share it.
    if rayon::current_thread_index().is_some() {
        return Ok((0..chunks).into_par_iter().map(f).sum());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::Error::Domain(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..chunks).into_par_iter().map(f).sum()))
}

/// Fraction of trials in secrecy outage, with a 95% Wilson interval.
pub fn estimate_sop(
    cfg: &SystemConfig,
    spec: &CorrelationSpec,
    kind: CombinerKind,
    mode: TasMode,
    plan: &McPlan,
) -> Result<SopEstimate> {
    plan.validate()?;
    if mode == TasMode::Simo && cfg.n_t != 1 {
        return domain("SIMO mode needs N_t = 1");
    }
    let sampler = ChannelSampler::new(spec, cfg)?;
    let (m, n_t, n_e) = sampler.dims();
    let rate_factor = cfg.rate_factor();
    let chunks = plan.trials.div_ceil(CHUNK);

    let count_chunk = |c: u64| -> u64 {
        let mut rng = chunk_rng(plan.seed, c);
        let n = CHUNK.min(plan.trials - c * CHUNK);
        let mut b = vec![0.0; m * n_t];
        let mut e = vec![0.0; n_e * n_t];
        let mut gb = vec![0.0; n_t];
        let mut ge = vec![0.0; n_t];
        let mut events = 0;
        for _ in 0..n {
            sampler.draw_powers(&mut rng, &mut b, &mut e);
            for i in 0..n_t {
                gb[i] = cfg.gamma_b * kind.combine_unchecked(&b[i * m..(i + 1) * m]);
                ge[i] = cfg.gamma_e * e[i * n_e..(i + 1) * n_e].iter().sum::<f64>();
            }
            let sel = select_unchecked(mode, &gb, &ge);
            if in_outage(gb[sel], ge[sel], rate_factor) {
                events += 1;
            }
        }
        events
    };
    let events = run_parallel(chunks, plan.workers, count_chunk)?;

    let mut est = SopEstimate::new(events as f64 / plan.trials as f64, Method::MonteCarlo, cfg, kind, mode);
    est.ci95 = Some(wilson_interval(events, plan.trials, 1.959_963_984_540_054));
    est.meta.counts = Some((events, plan.trials));
    Ok(est)
}

/// Sorted samples with empirical-CDF helpers.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    pub samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Self {
        samples.sort_by(|a, b| a.total_cmp(b));
        EmpiricalCdf { samples }
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }

    /// Kolmogorov-Smirnov distance to a continuous CDF.
    pub fn ks_statistic(&self, mut reference: impl FnMut(f64) -> f64) -> f64 {
        let n = self.samples.len() as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = reference(x);
                (f - i as f64 / n).max((i as f64 + 1.0) / n - f)
            })
            .fold(0.0, f64::max)
    }
}

/// Combined legitimate SNR samples with the shared component fixed at
/// magnitude `sqrt(t)`. The phase is uniform unless `phase` is given.
pub fn estimate_conditional_cdf(
    cfg: &SystemConfig,
    spec: &CorrelationSpec,
    kind: CombinerKind,
    t: f64,
    samples: usize,
    stream: u64,
    phase: Option<f64>,
) -> Result<EmpiricalCdf> {
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("conditioning value must be finite and >= 0, got {t}"));
    }
    if samples == 0 {
        return domain("need at least one sample");
    }
    let sampler = ChannelSampler::new(spec, cfg)?;
    let mut rng = chunk_rng(stream, 0);
    let mut h = Vec::with_capacity(cfg.m as usize);
    let mut powers = vec![0.0; cfg.m as usize];
    let radius = t.sqrt();
    let out = (0..samples)
        .map(|_| {
            let phi = phase.unwrap_or_else(|| rng.random::<f64>() * std::f64::consts::TAU);
            sampler.draw_main_given(&mut rng, Complex64::from_polar(radius, phi), &mut h);
            for (p, g) in powers.iter_mut().zip(&h) {
                *p = g.norm_sqr();
            }
            cfg.gamma_b * kind.combine_unchecked(&powers)
        })
        .collect();
    Ok(EmpiricalCdf::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 1000, 1.96);
        assert!(lo < 0.03 && 0.03 < hi);
        let (lo, hi) = wilson_interval(0, 1000, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.01);
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let cfg = SystemConfig::new(2, 2, 2, 10.0, 2.0, 1.0).unwrap();
        let spec = CorrelationSpec::new(vec![0.5, -0.3], 0.4).unwrap();
        let a = estimate_sop(&cfg, &spec, CombinerKind::Egc, TasMode::TasWithEveCsi, &McPlan::new(50_000, 9, 1).unwrap()).unwrap();
        let b = estimate_sop(&cfg, &spec, CombinerKind::Egc, TasMode::TasWithEveCsi, &McPlan::new(50_000, 9, 3).unwrap()).unwrap();
        assert_eq!(a.meta.counts, b.meta.counts);
    }

    #[test]
    fn vanishing_snr_is_always_outage() {
        let cfg = SystemConfig::new(1, 1, 1, 1e-6, 1.0, 1.0).unwrap();
        let spec = CorrelationSpec::new(vec![0.0], 0.0).unwrap();
        let est = estimate_sop(&cfg, &spec, CombinerKind::Mrc, TasMode::Simo, &McPlan::new(10_000, 1, 1).unwrap()).unwrap();
        assert!(est.value > 0.999);
    }

    #[test]
    fn plan_validation() {
        assert!(McPlan::new(999, 0, 1).is_err());
        assert!(McPlan::new(1000, 0, 0).is_err());
    }
}
