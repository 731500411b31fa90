//! Seeded simulation scenarios and the summaries used to check the null
//! behaviour of `T_k`.
//!
//! Every replication derives its own generator from `(seed, rep)`, so the
//! outcome of a replication does not depend on which thread ran it or in
//! which order. [`run_sequential`] is the single-threaded driver; the std
//! companion crate runs replications in parallel and then calls
//! [`summarize`].

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::correlation::{correlation_matrix, ordered_edges, OrderedEdges};
use crate::error::{Error, Result};
use crate::ingest::{augment_noise, standardize, subsample_rows, DataMatrix};
use crate::knotpath::knot_sequence;
use crate::rng;
use crate::testing::test_statistics;

/// Asymptotic Kolmogorov critical value at level 0.01, times `√N`.
pub const KS_CRIT_1PCT: f64 = 1.627_62;

/// Geometric decay of pair strengths in the disconnected-pairs scenario.
pub const PAIR_DECAY: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    GlobalNull,
    DisconnectedPairs,
    Clique,
    TiedPairs,
    AugmentedReal,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::GlobalNull => "global_null",
            Self::DisconnectedPairs => "disconnected_pairs",
            Self::Clique => "clique",
            Self::TiedPairs => "tied_pairs",
            Self::AugmentedReal => "augmented_real",
        }
    }

    /// Accepts the snake_case name; `-` may stand for `_`.
    pub fn parse(s: &str) -> Option<Self> {
        [
            Self::GlobalNull,
            Self::DisconnectedPairs,
            Self::Clique,
            Self::TiedPairs,
            Self::AugmentedReal,
        ]
        .into_iter()
        .find(|k| {
            k.name()
                .bytes()
                .eq(s.bytes().map(|b| if b == b'-' { b'_' } else { b }))
        })
    }

    pub fn default_strength(self) -> f64 {
        match self {
            Self::Clique => 0.6,
            Self::TiedPairs => 0.7,
            _ => 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub n: usize,
    pub p: usize,
    /// Number of signal variables `|A|`. For `augmented_real` this is the
    /// number of real columns and is taken from `base`.
    pub signal_size: usize,
    pub signal_strength: f64,
    pub reps: usize,
    pub seed: u64,
    /// Null steps summarized after alignment.
    pub null_steps: usize,
    /// Leading statistics kept per replication regardless of alignment.
    pub raw_steps: usize,
    /// Size of the top-edge set checked for shared indices.
    pub disjoint_top: usize,
    /// Source rows for `augmented_real`.
    #[serde(skip)]
    pub base: Option<Arc<DataMatrix>>,
}

impl Scenario {
    pub fn new(kind: ScenarioKind, n: usize, p: usize) -> Self {
        Self {
            kind,
            n,
            p,
            signal_size: if kind == ScenarioKind::GlobalNull { 0 } else { 6 },
            signal_strength: kind.default_strength(),
            reps: 1000,
            seed: 0,
            null_steps: 5,
            raw_steps: 15,
            disjoint_top: 6,
            base: None,
        }
    }

    /// Noise augmentation of a real data set: each replication subsamples
    /// `n` rows of `base` and appends `p − base.p` noise columns.
    pub fn augmented(base: DataMatrix, n: usize, p: usize) -> Self {
        let mut s = Self::new(ScenarioKind::AugmentedReal, n, p);
        s.signal_size = base.p();
        s.base = Some(Arc::new(base));
        s
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_signal(mut self, size: usize, strength: f64) -> Self {
        self.signal_size = size;
        self.signal_strength = strength;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::Scenario(msg));
        if self.n < 3 || self.p < 2 {
            return bad(format!("need n >= 3 and p >= 2, got n={} p={}", self.n, self.p));
        }
        if self.reps == 0 {
            return bad("reps must be positive".into());
        }
        let strength_ok = self.signal_strength > 0.0 && self.signal_strength < 1.0;
        match self.kind {
            ScenarioKind::GlobalNull => {}
            ScenarioKind::DisconnectedPairs | ScenarioKind::TiedPairs => {
                if self.signal_size < 2 || self.signal_size % 2 != 0 || self.signal_size > self.p {
                    return bad(format!(
                        "pair scenarios need an even signal size in [2, p], got {}",
                        self.signal_size
                    ));
                }
                if !strength_ok {
                    return bad(format!("signal strength {} not in (0, 1)", self.signal_strength));
                }
            }
            ScenarioKind::Clique => {
                if self.signal_size < 2 || self.signal_size > self.p {
                    return bad(format!("clique size {} not in [2, p]", self.signal_size));
                }
                if !strength_ok {
                    return bad(format!("signal strength {} not in (0, 1)", self.signal_strength));
                }
            }
            ScenarioKind::AugmentedReal => {
                let Some(base) = &self.base else {
                    return bad("augmented_real needs base data".into());
                };
                if base.p() > self.p || base.n() < self.n {
                    return bad(format!(
                        "base data is {}x{}, cannot produce {}x{}",
                        base.n(),
                        base.p(),
                        self.n,
                        self.p
                    ));
                }
            }
        }
        Ok(())
    }

    /// Signal variables `A`, or `None` under the global null.
    pub fn signal_set(&self) -> Option<core::ops::Range<usize>> {
        match self.kind {
            ScenarioKind::GlobalNull => None,
            ScenarioKind::AugmentedReal => self.base.as_ref().map(|b| 0..b.p()),
            _ => Some(0..self.signal_size),
        }
    }

    /// Correlation of pair `j` (0-based) in the pair scenarios.
    pub fn pair_strength(&self, j: usize) -> f64 {
        match self.kind {
            ScenarioKind::DisconnectedPairs => {
                self.signal_strength * libm::pow(PAIR_DECAY, j as f64)
            }
            _ => self.signal_strength,
        }
    }
}

/// Replaces `cols` of a column-major block by `√(1−r)(z − z̄) + √(1+(m−1)r) z̄`,
/// the symmetric square root of the equicorrelation matrix applied to i.i.d.
/// normals.
fn equicorrelate(values: &mut [f64], n: usize, cols: core::ops::Range<usize>, r: f64) {
    let m = cols.len() as f64;
    let a = libm::sqrt(1.0 - r);
    let b = libm::sqrt(1.0 + (m - 1.0) * r);
    for row in 0..n {
        let mean = cols.clone().map(|j| values[j * n + row]).sum::<f64>() / m;
        for j in cols.clone() {
            let z = values[j * n + row];
            values[j * n + row] = a * (z - mean) + b * mean;
        }
    }
}

/// The data set of replication `rep`.
pub fn generate(s: &Scenario, rep: u64) -> Result<DataMatrix> {
    s.validate()?;
    let stream = rng::mix_seed(s.seed, rep);
    if s.kind == ScenarioKind::AugmentedReal {
        let base = s.base.as_ref().expect("validated");
        let rows = subsample_rows(base, s.n, stream)?;
        let q = s.p - base.p();
        return Ok(augment_noise(&rows, q, rng::mix_seed(stream, 1)));
    }
    let (n, p) = (s.n, s.p);
    let mut rng = rng::seeded(stream);
    let mut values: Vec<f64> = Vec::with_capacity(n * p);
    for _ in 0..n * p {
        values.push(StandardNormal.sample(&mut rng));
    }
    match s.kind {
        ScenarioKind::DisconnectedPairs | ScenarioKind::TiedPairs => {
            for j in 0..s.signal_size / 2 {
                equicorrelate(&mut values, n, 2 * j..2 * j + 2, s.pair_strength(j));
            }
        }
        ScenarioKind::Clique => equicorrelate(&mut values, n, 0..s.signal_size, s.signal_strength),
        _ => {}
    }
    DataMatrix::from_columns(n, p, values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepOutcome {
    pub rep: u64,
    pub knots: usize,
    /// Knots before the first edge leaving `A × A` (0 under the global null).
    pub signal_steps: usize,
    /// 1-based knot index of that first edge.
    pub first_noise_step: usize,
    /// `T_1, T_2, …` up to `raw_steps`.
    pub raw: Vec<f64>,
    /// `T_{m+1}, T_{m+2}, …` up to `null_steps`.
    pub null: Vec<f64>,
    /// Conservative p-value of `T_{m+1}`.
    pub first_null_p: Option<f64>,
    /// Every signal variable's strongest link inside `A` beats every
    /// correlation that involves a variable outside `A`.
    pub event_b: Option<bool>,
    /// The top `disjoint_top` edges share no variable.
    pub top_disjoint: bool,
}

fn event_b(edges: &OrderedEdges, a: &core::ops::Range<usize>, p: usize) -> bool {
    let inside = |e: &crate::correlation::Edge| a.contains(&e.i) && a.contains(&e.j);
    let mut best = alloc::vec![0.0f64; p];
    let mut outside_max = 0.0f64;
    for e in &edges.edges {
        if inside(e) {
            best[e.i] = best[e.i].max(e.value);
            best[e.j] = best[e.j].max(e.value);
        } else {
            outside_max = outside_max.max(e.value);
        }
    }
    a.clone().map(|i| best[i]).fold(f64::INFINITY, f64::min) > outside_max
}

/// Generates one replication and reduces it to its statistics.
pub fn replicate(s: &Scenario, rep: u64) -> Result<RepOutcome> {
    let data = standardize(&generate(s, rep)?)?;
    let edges = ordered_edges(&correlation_matrix(&data)?);
    let ks = knot_sequence(&edges);
    let report = test_statistics(&ks)?;
    let t = report.statistics();

    let signal = s.signal_set();
    let signal_steps = match &signal {
        None => 0,
        Some(a) => ks
            .knots
            .iter()
            .position(|k| !(a.contains(&k.edge.0) && a.contains(&k.edge.1)))
            .unwrap_or(ks.m()),
    };
    let null: Vec<f64> = t.iter().skip(signal_steps).take(s.null_steps).copied().collect();
    Ok(RepOutcome {
        rep,
        knots: ks.m(),
        signal_steps,
        first_noise_step: signal_steps + 1,
        raw: t.iter().take(s.raw_steps).copied().collect(),
        first_null_p: report.steps.get(signal_steps).map(|st| st.p_conservative),
        null,
        event_b: signal.as_ref().map(|a| event_b(&edges, a, s.p)),
        top_disjoint: edges.top_disjoint(s.disjoint_top),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub n: usize,
    pub d: f64,
    pub critical_1pct: f64,
    pub pass_at_1pct: bool,
    pub p_value: f64,
}

/// Kolmogorov limiting survival `Q(λ) = 2 Σ (−1)^{j−1} e^{−2j²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let jf = j as f64;
        let term = libm::exp(-2.0 * jf * jf * lambda * lambda);
        sum += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_with_cdf<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    const MIN: usize = 20;
    if samples.len() < MIN {
        return Err(Error::TooFewSamples {
            required: MIN,
            got: samples.len(),
        });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / nf - f).max(f - i as f64 / nf)
        })
        .fold(0.0f64, f64::max);
    let root = libm::sqrt(nf);
    let critical = KS_CRIT_1PCT / root;
    Ok(KsResult {
        n: sorted.len(),
        d,
        critical_1pct: critical,
        pass_at_1pct: d < critical,
        p_value: kolmogorov_q((root + 0.12 + 0.11 / root) * d),
    })
}

/// One-sample Kolmogorov-Smirnov test against Exp(mean `mu`).
pub fn ks_distance(samples: &[f64], mu: f64) -> Result<KsResult> {
    ks_with_cdf(samples, |x| if x <= 0.0 { 0.0 } else { -libm::expm1(-x / mu) })
}

/// One-sample Kolmogorov-Smirnov test against Uniform(0, 1).
pub fn ks_uniform(samples: &[f64]) -> Result<KsResult> {
    ks_with_cdf(samples, |x| x.clamp(0.0, 1.0))
}

/// `(theoretical, empirical)` pairs: Exp(mean `mu`) quantiles at plotting
/// positions `(i − 0.5)/N` against the sorted samples.
pub fn qq_points(samples: &[f64], mu: f64) -> Vec<(f64, f64)> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, y)| (-mu * libm::log1p(-(i as f64 + 0.5) / nf), y))
        .collect()
}

/// Least-squares slope through the origin.
pub fn qq_slope(points: &[(f64, f64)]) -> f64 {
    let (sxy, sxx) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x * y, b + x * x));
    sxy / sxx
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    // Linear interpolation between order statistics.
    let h = (sorted.len() - 1) as f64 * q;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    /// 1-based step index.
    pub k: usize,
    pub count: usize,
    pub mean: f64,
    pub se: f64,
    pub ci95: (f64, f64),
    pub median: f64,
    pub quartiles: (f64, f64),
    /// KS of `k · T_k` against Exp(1), equivalently `T_k` against Exp(1/k).
    pub ks: Option<KsResult>,
    /// QQ slope against Exp(1) quantiles; `1/k` when the step is Exp(1/k).
    pub qq_slope: f64,
}

pub fn summarize_step(k: usize, samples: &[f64]) -> StepSummary {
    let count = samples.len();
    let nf = count as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = if count > 1 {
        samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0)
    } else {
        0.0
    };
    let se = libm::sqrt(var / nf);
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let scaled: Vec<f64> = samples.iter().map(|t| t * k as f64).collect();
    StepSummary {
        k,
        count,
        mean,
        se,
        ci95: (mean - 1.96 * se, mean + 1.96 * se),
        median: quantile_sorted(&sorted, 0.5),
        quartiles: (quantile_sorted(&sorted, 0.25), quantile_sorted(&sorted, 0.75)),
        ks: ks_distance(&scaled, 1.0).ok(),
        qq_slope: qq_slope(&qq_points(samples, 1.0)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub scenario: Scenario,
    pub outcomes: Vec<RepOutcome>,
    /// Null steps available in every replication.
    pub aligned_steps: usize,
    /// Per null step, over all replications.
    pub null_summaries: Vec<StepSummary>,
    /// Per raw step `k`, over all replications.
    pub raw_summaries: Vec<StepSummary>,
    pub pvalue_samples: Vec<f64>,
    pub pvalue_ks: Option<KsResult>,
    pub event_b_frequency: Option<f64>,
    pub top_disjoint_frequency: f64,
}

impl SimulationResult {
    /// `reps × aligned_steps` matrix of null statistics.
    pub fn null_matrix(&self) -> Vec<Vec<f64>> {
        self.outcomes
            .iter()
            .map(|o| o.null[..self.aligned_steps].to_vec())
            .collect()
    }

    pub fn null_column(&self, step: usize) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.null[step - 1]).collect()
    }

    pub fn raw_column(&self, step: usize) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.raw[step - 1]).collect()
    }
}

/// Aggregates replications (in the given order) into a result.
pub fn summarize(s: &Scenario, mut outcomes: Vec<RepOutcome>) -> Result<SimulationResult> {
    if outcomes.is_empty() {
        return Err(Error::Scenario("no replications to summarize".into()));
    }
    outcomes.sort_by_key(|o| o.rep);
    let aligned = outcomes.iter().map(|o| o.null.len()).min().unwrap_or(0);
    let raw_len = outcomes.iter().map(|o| o.raw.len()).min().unwrap_or(0);
    let column = |f: &dyn Fn(&RepOutcome) -> f64| outcomes.iter().map(f).collect::<Vec<f64>>();
    let null_summaries = (1..=aligned)
        .map(|k| summarize_step(k, &column(&|o| o.null[k - 1])))
        .collect();
    let raw_summaries = (1..=raw_len)
        .map(|k| summarize_step(k, &column(&|o| o.raw[k - 1])))
        .collect();
    let pvalue_samples: Vec<f64> = outcomes.iter().filter_map(|o| o.first_null_p).collect();
    let nf = outcomes.len() as f64;
    let event_b_frequency = if outcomes.iter().all(|o| o.event_b.is_some()) {
        Some(outcomes.iter().filter(|o| o.event_b == Some(true)).count() as f64 / nf)
    } else {
        None
    };
    let top_disjoint_frequency = outcomes.iter().filter(|o| o.top_disjoint).count() as f64 / nf;
    Ok(SimulationResult {
        scenario: s.clone(),
        pvalue_ks: ks_uniform(&pvalue_samples).ok(),
        pvalue_samples,
        aligned_steps: aligned,
        null_summaries,
        raw_summaries,
        event_b_frequency,
        top_disjoint_frequency,
        outcomes,
    })
}

/// Runs every replication on the current thread.
pub fn run_sequential(s: &Scenario) -> Result<SimulationResult> {
    s.validate()?;
    let outcomes = (0..s.reps as u64)
        .map(|rep| replicate(s, rep))
        .collect::<Result<Vec<_>>>()?;
    summarize(s, outcomes)
}
