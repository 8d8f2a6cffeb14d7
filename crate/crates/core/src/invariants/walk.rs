use super::fit::{fit_power_law, FitResult, WindowPolicy};
use crate::builders::Exhaustion;
use crate::complex::{CellId, Flavor};
use crate::error::{Error, Result};
use crate::tolerances::WALK_FIT_START;
use crate::trace::power_trace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    Exact,
    MonteCarlo { seed: u64, budget: usize },
}

impl WindowPolicy {
    /// Automatic window for return probabilities, skipping the first steps.
    pub fn walk_default() -> Self {
        WindowPolicy::Automatic {
            lower: WALK_FIT_START,
            upper: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnSample {
    pub k: usize,
    /// Window average of `p_k(x,x) + p_{k+1}(x,x)`.
    pub value: f64,
    /// Heuristic level-difference error (exact mode) or two standard errors (Monte Carlo).
    pub error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReturnProbabilityReport {
    pub mode: WalkMode,
    pub level: usize,
    pub ambient: usize,
    pub k_max: usize,
    pub walkers: Option<usize>,
    pub plateau: f64,
    pub samples: Vec<ReturnSample>,
    pub gamma: FitResult,
    /// `α = 2γ`.
    pub alpha: f64,
    /// Two standard errors of `α` from batch means (Monte Carlo only).
    pub alpha_error: Option<f64>,
}

/// Walkers are split into this many contiguous batches for error estimates.
pub const MC_BATCHES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloReturns {
    pub samples: Vec<ReturnSample>,
    pub walkers: usize,
    /// Paired return frequencies of each batch.
    pub batch_means: Vec<Vec<f64>>,
}

/// Paired return probabilities averaged over the window, by simple random
/// walks. `budget` walkers of `k_max` steps each (rounded down to a multiple
/// of the window size) give `budget` samples of every `p_k`. Walker `w` starts
/// at window vertex `w mod |window|` and draws from its own ChaCha8 stream, so
/// results depend only on `seed` and the walker count, not on `threads`.
pub fn monte_carlo_returns(
    ex: &Exhaustion,
    n: usize,
    m: usize,
    k_max: usize,
    seed: u64,
    budget: usize,
    threads: usize,
) -> Result<MonteCarloReturns> {
    let cx = ex.level(m);
    let window = ex.level(n).count(0);
    let mut walkers = budget;
    if walkers >= window {
        walkers -= walkers % window;
    }
    if walkers < MC_BATCHES || k_max == 0 {
        return Err(Error::Budget(format!(
            "budget {budget} allows {walkers} walkers of length {k_max}"
        )));
    }
    let nbrs: Vec<Vec<usize>> = (0..cx.count(0))
        .map(|v| cx.neighbors(CellId::new(0, v), Flavor::D))
        .collect();
    if nbrs.iter().any(|v| v.is_empty()) {
        return Err(Error::Disconnected);
    }
    let run = |range: std::ops::Range<usize>| {
        let mut sum = vec![0u64; k_max];
        let mut sum_sq = vec![0u64; k_max];
        let mut hit = vec![0u8; k_max + 1];
        for w in range {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            let start = w % window;
            let mut pos = start;
            hit[0] = 1;
            for h in hit.iter_mut().skip(1) {
                let nb = &nbrs[pos];
                pos = nb[rng.gen_range(0..nb.len())];
                *h = (pos == start) as u8;
            }
            for k in 0..k_max {
                let y = (hit[k] + hit[k + 1]) as u64;
                sum[k] += y;
                sum_sq[k] += y * y;
            }
        }
        (sum, sum_sq)
    };
    let batches = MC_BATCHES.min(walkers);
    let bounds = |b: usize| b * walkers / batches..(b + 1) * walkers / batches;
    let threads = threads.clamp(1, batches);
    type Sums = (Vec<u64>, Vec<u64>);
    let mut parts: Vec<(usize, Sums)> = std::thread::scope(|sc| {
        let handles: Vec<_> = (0..threads)
            .map(|i| {
                let run = &run;
                sc.spawn(move || {
                    (i..batches)
                        .step_by(threads)
                        .map(|b| (b, run(bounds(b))))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().unwrap())
            .collect()
    });
    parts.sort_by_key(|p| p.0);
    let mut sum = vec![0u64; k_max];
    let mut sum_sq = vec![0u64; k_max];
    let mut batch_means = Vec::with_capacity(batches);
    for (b, (s1, s2)) in &parts {
        let size = bounds(*b).len() as f64;
        batch_means.push(s1.iter().map(|&x| x as f64 / size).collect());
        for k in 0..k_max {
            sum[k] += s1[k];
            sum_sq[k] += s2[k];
        }
    }
    let wf = walkers as f64;
    let samples = (0..k_max)
        .map(|k| {
            let mean = sum[k] as f64 / wf;
            let var = (sum_sq[k] as f64 / wf - mean * mean).max(0.0) * wf / (wf - 1.0);
            ReturnSample {
                k,
                value: mean,
                error: Some(2.0 * (var / wf).sqrt()),
            }
        })
        .collect();
    Ok(MonteCarloReturns {
        samples,
        walkers,
        batch_means,
    })
}

/// Fits `τ(P^k + P^{k+1}) - plateau ≈ A k^{-γ}` and reports `α = 2γ`.
///
/// In Monte Carlo mode an automatic window is chosen on the exact curve and
/// then held fixed, so both modes fit the same range of `k`.
pub fn return_probability_pipeline(
    ex: &Exhaustion,
    n: usize,
    m: usize,
    k_max: usize,
    mode: WalkMode,
    policy: WindowPolicy,
    threads: usize,
) -> Result<ReturnProbabilityReport> {
    let exact = power_trace(ex, n, m, k_max)?;
    let ks: Vec<f64> = (0..k_max).map(|k| k as f64).collect();
    let exact_values = &exact.paired[..k_max];
    let (samples, walkers, gamma) = match mode {
        WalkMode::Exact => {
            let s = exact
                .paired
                .iter()
                .zip(&exact.paired_error)
                .take(k_max)
                .enumerate()
                .map(|(k, (&value, &error))| ReturnSample { k, value, error })
                .collect();
            let gamma = fit_power_law(&ks, exact_values, exact.plateau, policy, None)?;
            (s, None, gamma)
        }
        WalkMode::MonteCarlo { seed, budget } => {
            let mc = monte_carlo_returns(ex, n, m, k_max, seed, budget, threads)?;
            let policy = match policy {
                WindowPolicy::Automatic { .. } => {
                    let w = fit_power_law(&ks, exact_values, exact.plateau, policy, None)?.window;
                    WindowPolicy::Fixed { lo: w.0, hi: w.1 }
                }
                fixed => fixed,
            };
            let vs: Vec<f64> = mc.samples.iter().map(|s| s.value).collect();
            let mut gamma = fit_power_law(&ks, &vs, exact.plateau, policy, None)?;
            let per_batch = mc
                .batch_means
                .iter()
                .map(|b| fit_power_law(&ks, b, exact.plateau, policy, None).map(|f| f.exponent))
                .collect::<Result<Vec<_>>>()?;
            let nb = per_batch.len() as f64;
            let mean = per_batch.iter().sum::<f64>() / nb;
            let var = per_batch.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (nb - 1.0);
            gamma.exponent_error = Some((var / nb).sqrt());
            (mc.samples, Some(mc.walkers), gamma)
        }
    };
    let alpha_error = gamma.exponent_error.map(|e| 2.0 * 2.0 * e);
    Ok(ReturnProbabilityReport {
        mode,
        level: n,
        ambient: m,
        k_max,
        walkers,
        plateau: exact.plateau,
        samples,
        alpha: gamma.alpha(),
        gamma,
        alpha_error,
    })
}
