//! Seeded Monte-Carlo experiment drivers behind the CLI subcommands: pooled
//! spectral summaries with histograms, moment estimates against exact
//! limits, the depth sweep, gap statistics, the sandwich-conjecture table,
//! and the exact counterexample report.
//!
//! Every run is a pure function of its config; identical configs give
//! identical results, trial by trial, because each matrix draws from its own
//! (seed, stream) slot.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::disco::STREAM_SLOTS_PER_TRIAL;
use crate::eigen::eigenvalues_sym;
use crate::ensembles::{self, counterexample_matrices, EnsembleSpec, Kind};
use crate::error::{Error, Result};
use crate::limits::{block_circulant_limit, catalan, gaussian_moment, limit_moment_disco};
use crate::matrix::SymmetricMatrix;

/// Largest moment order served by the matrix-power route; higher orders go
/// through the spectrum instead (powering eigenvalues is cheap and stable).
pub const POWER_ROUTE_MAX: usize = 8;

/// Full order the eigensolver will accept (n^3 work).
pub const MAX_EXPERIMENT_ORDER: usize = 1 << 14;

/// One experiment, fully determined by its fields.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Base ensemble; at depth >= 1 this becomes the seed matrix of the
    /// block construction and Wigner blocks are stacked on top.
    pub ensemble: EnsembleSpec,
    /// Second ensemble for the two-sample conjecture experiment.
    pub ensemble_b: Option<EnsembleSpec>,
    pub depth: usize,
    pub trials: u64,
    pub moment_orders: Vec<usize>,
    /// Histogram bin override; automatic width selection when absent.
    pub bins: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(ensemble: EnsembleSpec) -> Self {
        ExperimentConfig {
            ensemble,
            ensemble_b: None,
            depth: 0,
            trials: 1,
            moment_orders: vec![2, 4, 6, 8],
            bins: None,
        }
    }

    /// Order of the matrix actually measured: 2^depth times the base order.
    pub fn full_order(&self) -> usize {
        self.ensemble.order << self.depth
    }

    pub fn validate(&self) -> Result<()> {
        self.ensemble.validate()?;
        if let Some(b) = &self.ensemble_b {
            b.validate()?;
            if b.order != self.ensemble.order {
                return Err(Error::Config(format!(
                    "ensemble orders differ: {} vs {}",
                    self.ensemble.order, b.order
                )));
            }
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        let full = self
            .ensemble
            .order
            .checked_shl(self.depth as u32)
            .filter(|&n| n <= MAX_EXPERIMENT_ORDER);
        if full.is_none() {
            return Err(Error::Config(format!(
                "order {} at depth {} exceeds the budget of {}",
                self.ensemble.order, self.depth, MAX_EXPERIMENT_ORDER
            )));
        }
        if self.moment_orders.contains(&0) {
            return Err(Error::Config("moment orders must be >= 1".into()));
        }
        if self.bins == Some(0) {
            return Err(Error::Config("bins must be >= 1".into()));
        }
        Ok(())
    }
}

/// Sample mean and its standard error across trials (n-1 variance divisor;
/// zero error for a single trial).
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    assert!(!xs.is_empty(), "no samples");
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// The matrix measured in one trial: the bare ensemble at depth 0, otherwise
/// the block construction seeded by it with Wigner blocks of doubling order.
/// Stream slot t*16 is the base draw, t*16+1+i the i-th block.
pub fn sample_trial_matrix(
    base: &EnsembleSpec,
    depth: usize,
    trial: u64,
) -> Result<SymmetricMatrix<f64>> {
    let slot0 = trial * STREAM_SLOTS_PER_TRIAL;
    let a = ensembles::sample(&base.with_stream(slot0))?;
    if depth == 0 {
        return Ok(a);
    }
    let mut bs = Vec::with_capacity(depth);
    for i in 0..depth {
        let spec = EnsembleSpec::new(Kind::Wigner, base.order << i, base.seed)
            .with_distribution(base.distribution)
            .with_stream(slot0 + 1 + i as u64);
        bs.push(ensembles::sample(&spec)?);
    }
    crate::disco::build_disco(&a, &bs)
}

/// (1/n) Tr((M/normalization)^h) for each requested h. Orders up to
/// POWER_ROUTE_MAX share one set of cached matrix powers; larger orders are
/// summed over the spectrum.
pub fn empirical_moments(
    m: &SymmetricMatrix<f64>,
    orders: &[usize],
    normalization: f64,
) -> Result<Vec<f64>> {
    if !(normalization > 0.0 && normalization.is_finite()) {
        return Err(Error::Config(format!(
            "normalization must be positive, got {normalization}"
        )));
    }
    if orders.contains(&0) {
        return Err(Error::Config("moment order must be >= 1".into()));
    }
    let n = m.order() as f64;
    let max_hi = orders
        .iter()
        .filter(|&&h| (2..=POWER_ROUTE_MAX).contains(&h))
        .map(|&h| h.div_ceil(2))
        .max();
    let ps = max_hi.map(|k| m.powers(k));
    let eigs = if orders.iter().any(|&h| h > POWER_ROUTE_MAX) {
        Some(eigenvalues_sym(m)?)
    } else {
        None
    };
    orders
        .iter()
        .map(|&h| {
            if h <= POWER_ROUTE_MAX {
                let tr = if h == 1 {
                    m.trace()
                } else {
                    let ps = ps.as_ref().unwrap();
                    let hi = h.div_ceil(2);
                    ps[hi - 1].frobenius_dot(&ps[h - hi - 1])?
                };
                Ok(tr / normalization.powi(h as i32) / n)
            } else {
                let eigs = eigs.as_ref().unwrap();
                Ok(eigs
                    .iter()
                    .map(|l| (l / normalization).powi(h as i32))
                    .sum::<f64>()
                    / n)
            }
        })
        .collect()
}

/// Single-order convenience wrapper over empirical_moments.
pub fn empirical_moment(m: &SymmetricMatrix<f64>, h: usize, normalization: f64) -> Result<f64> {
    Ok(empirical_moments(m, &[h], normalization)?[0])
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile_sorted(xs: &[f64], p: f64) -> f64 {
    let n = xs.len();
    if n == 1 {
        return xs[0];
    }
    let h = p * (n - 1) as f64;
    let i = h.floor() as usize;
    let frac = h - i as f64;
    if i + 1 >= n {
        xs[n - 1]
    } else {
        xs[i] + frac * (xs[i + 1] - xs[i])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    /// bins+1 ascending edges; bin i covers [edges[i], edges[i+1]), last bin
    /// right-closed.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Equal-width histogram over sorted values. Bin count from the override
    /// when given, otherwise from the interquartile-range width rule
    /// 2*IQR*n^{-1/3} (square-root rule when the IQR degenerates).
    pub fn from_sorted(values: &[f64], bins: Option<usize>) -> Result<Histogram> {
        if values.is_empty() {
            return Err(Error::Config("histogram of no values".into()));
        }
        let n = values.len();
        let lo = values[0];
        let hi = values[n - 1];
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Numerical("non-finite value in histogram input".into()));
        }
        // A zero-width spread still needs edges; pad to a unit span.
        let degenerate = hi == lo;
        let (lo, hi) = if degenerate { (lo - 0.5, lo + 0.5) } else { (lo, hi) };
        let b = match bins {
            Some(0) => return Err(Error::Config("bins must be >= 1".into())),
            Some(b) => b,
            None if degenerate => 1,
            None => {
                let iqr = quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
                let width = 2.0 * iqr / (n as f64).cbrt();
                let auto = if width > 0.0 {
                    ((hi - lo) / width).ceil() as usize
                } else {
                    (n as f64).sqrt().ceil() as usize
                };
                auto.clamp(1, 4096)
            }
        };
        let span = hi - lo;
        let mut counts = vec![0u64; b];
        for &x in values {
            let idx = (((x - lo) / span) * b as f64) as usize;
            counts[idx.min(b - 1)] += 1;
        }
        // Convex combination, not lo + span*t: the endpoints come out bit
        // equal to lo and hi, so every value lies within the edge range.
        let edges = (0..=b)
            .map(|i| {
                let t = i as f64 / b as f64;
                lo * (1.0 - t) + hi * t
            })
            .collect();
        Ok(Histogram { edges, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MomentEstimate {
    pub order: usize,
    pub estimate: f64,
    pub std_error: f64,
}

/// Pooled spectral data of one experiment: normalized eigenvalues of every
/// trial merged and sorted, with the statistics derived from them.
#[derive(Clone, Debug)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub moments: Vec<MomentEstimate>,
    pub histogram: Histogram,
    pub gaps: Vec<f64>,
}

/// Draws `trials` matrices, pools the spectra normalized by sqrt(order),
/// and summarizes. Moment standard errors are across trials.
pub fn run_esd(config: &ExperimentConfig) -> Result<SpectralSummary> {
    config.validate()?;
    let order = config.full_order();
    let norm = (order as f64).sqrt();
    let mut pooled: Vec<f64> = Vec::with_capacity(order * config.trials as usize);
    let mut samples: Vec<Vec<f64>> = vec![Vec::new(); config.moment_orders.len()];
    for trial in 0..config.trials {
        let m = sample_trial_matrix(&config.ensemble, config.depth, trial)?;
        let eigs = eigenvalues_sym(&m)
            .map_err(|e| Error::Numerical(format!("trial {trial}: {e}")))?;
        let normalized: Vec<f64> = eigs.iter().map(|l| l / norm).collect();
        for (slot, &h) in config.moment_orders.iter().enumerate() {
            let mh = normalized.iter().map(|l| l.powi(h as i32)).sum::<f64>() / order as f64;
            samples[slot].push(mh);
        }
        pooled.extend(normalized);
    }
    pooled.sort_by(f64::total_cmp);
    let moments = config
        .moment_orders
        .iter()
        .zip(&samples)
        .map(|(&h, s)| {
            let (estimate, std_error) = mean_and_std_error(s);
            MomentEstimate {
                order: h,
                estimate,
                std_error,
            }
        })
        .collect();
    let histogram = Histogram::from_sorted(&pooled, config.bins)?;
    let gaps = pooled.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(SpectralSummary {
        eigenvalues: pooled,
        moments,
        histogram,
        gaps,
    })
}

/// The exact limiting moment the configured experiment converges to, when
/// one is known in closed or enumerable form. Odd orders of every centered
/// ensemble limit to zero; the deterministic counterexample matrices have no
/// limit law.
pub fn exact_limit(config: &ExperimentConfig, h: usize) -> Option<BigRational> {
    match config.ensemble.kind {
        Kind::CounterexampleA | Kind::CounterexampleB => return None,
        _ => {}
    }
    if h % 2 != 0 {
        return Some(BigRational::zero());
    }
    if config.depth > 0 {
        return match config.ensemble.kind {
            // Base PST: the mixed Gaussian/semicircular limit.
            Kind::Pst => limit_moment_disco(config.depth, h).ok(),
            // Base Wigner: every component is semicircular and free, and the
            // weights' variances sum to one, so the limit is the semicircle.
            Kind::Wigner => Some(BigRational::from_integer(catalan(h / 2))),
            _ => None,
        };
    }
    match config.ensemble.kind {
        Kind::Pst => Some(BigRational::from_integer(gaussian_moment(h))),
        Kind::Wigner => Some(BigRational::from_integer(catalan(h / 2))),
        Kind::BlockCirculant => block_circulant_limit(config.ensemble.period, h),
        Kind::CounterexampleA | Kind::CounterexampleB => None,
    }
}

#[derive(Clone, Debug)]
pub struct MomentComparison {
    pub order: usize,
    pub estimate: f64,
    pub std_error: f64,
    pub exact_limit: Option<BigRational>,
}

impl MomentComparison {
    pub fn exact_as_float(&self) -> Option<f64> {
        use num_traits::ToPrimitive;
        self.exact_limit
            .as_ref()
            .map(|r| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap())
    }

    pub fn abs_deviation(&self) -> Option<f64> {
        self.exact_as_float().map(|e| (self.estimate - e).abs())
    }
}

/// Moment estimates via the trace route (no eigensolve), with the exact
/// limit and absolute deviation attached where a limit is known.
pub fn run_moments(config: &ExperimentConfig) -> Result<Vec<MomentComparison>> {
    config.validate()?;
    let order = config.full_order();
    let norm = (order as f64).sqrt();
    let mut samples: Vec<Vec<f64>> = vec![Vec::new(); config.moment_orders.len()];
    for trial in 0..config.trials {
        let m = sample_trial_matrix(&config.ensemble, config.depth, trial)?;
        let ms = empirical_moments(&m, &config.moment_orders, norm)?;
        for (slot, v) in ms.into_iter().enumerate() {
            samples[slot].push(v);
        }
    }
    Ok(config
        .moment_orders
        .iter()
        .zip(&samples)
        .map(|(&h, s)| {
            let (estimate, std_error) = mean_and_std_error(s);
            MomentComparison {
                order: h,
                estimate,
                std_error,
                exact_limit: exact_limit(config, h),
            }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct DepthMomentRow {
    pub depth: usize,
    pub comparison: MomentComparison,
}

/// run_moments repeated across depths, sharing the base draws per trial
/// (the depth-d run extends the depth-(d-1) block stack deterministically).
pub fn run_dsweep(config: &ExperimentConfig, depths: &[usize]) -> Result<Vec<DepthMomentRow>> {
    if depths.is_empty() {
        return Err(Error::Config("empty depth list".into()));
    }
    let mut rows = Vec::new();
    for &d in depths {
        let mut sub = config.clone();
        sub.depth = d;
        for comparison in run_moments(&sub)? {
            rows.push(DepthMomentRow {
                depth: d,
                comparison,
            });
        }
    }
    Ok(rows)
}

/// Normalized spacings (consecutive differences over scale) of an ascending
/// spectrum.
pub fn gap_statistics(eigs: &[f64], scale: f64) -> Result<Vec<f64>> {
    if eigs.len() < 2 {
        return Err(Error::Config("need at least two eigenvalues".into()));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Config(format!("scale must be positive, got {scale}")));
    }
    if eigs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Config("eigenvalues must be sorted ascending".into()));
    }
    Ok(eigs.windows(2).map(|w| (w[1] - w[0]) / scale).collect())
}

#[derive(Clone, Debug)]
pub struct GapReport {
    /// Spacings in spectral order, scaled by sqrt(order); length order-1.
    pub spacings: Vec<f64>,
    pub histogram: Histogram,
}

/// Gap statistics of a single draw (trial stream 0).
pub fn run_gaps(config: &ExperimentConfig) -> Result<GapReport> {
    config.validate()?;
    let m = sample_trial_matrix(&config.ensemble, config.depth, 0)?;
    let eigs = eigenvalues_sym(&m)?;
    let spacings = gap_statistics(&eigs, (config.full_order() as f64).sqrt())?;
    let mut sorted = spacings.clone();
    sorted.sort_by(f64::total_cmp);
    let histogram = Histogram::from_sorted(&sorted, config.bins)?;
    Ok(GapReport {
        spacings,
        histogram,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    WithinNoise,
    Violated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::WithinNoise => "within_noise",
            Verdict::Violated => "violated",
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConjectureRow {
    pub k: usize,
    pub m_a: f64,
    pub se_a: f64,
    pub m_disco: f64,
    pub se_disco: f64,
    pub m_b: f64,
    pub se_b: f64,
    pub verdict: Verdict,
}

/// Judged at two standard errors: the sandwich "holds" only with >= 2 SE of
/// margin on both sides, is "violated" only when broken by >= 2 SE, and is
/// "within_noise" in between.
fn sandwich_verdict(
    (m_a, se_a): (f64, f64),
    (m_d, se_d): (f64, f64),
    (m_b, se_b): (f64, f64),
) -> Verdict {
    let (lo, se_lo, hi, se_hi) = if m_a <= m_b {
        (m_a, se_a, m_b, se_b)
    } else {
        (m_b, se_b, m_a, se_a)
    };
    let z_lower = (m_d - lo) / (se_d * se_d + se_lo * se_lo).sqrt().max(f64::MIN_POSITIVE);
    let z_upper = (hi - m_d) / (se_d * se_d + se_hi * se_hi).sqrt().max(f64::MIN_POSITIVE);
    if z_lower >= 2.0 && z_upper >= 2.0 {
        Verdict::Holds
    } else if z_lower <= -2.0 || z_upper <= -2.0 {
        Verdict::Violated
    } else {
        Verdict::WithinNoise
    }
}

/// Monte-Carlo moment sandwich for a pair of ensembles: per even order k,
/// estimates of the k-th moments of A, of the depth-1 construction over
/// (A, B), and of B. The middle column is computed from the trace split of
/// A+B and A-B, so no doubled matrix is ever materialized.
pub fn run_conjecture(config: &ExperimentConfig) -> Result<Vec<ConjectureRow>> {
    config.validate()?;
    let b_spec = config
        .ensemble_b
        .ok_or_else(|| Error::Config("conjecture experiment needs --ensemble-b".into()))?;
    if config.moment_orders.iter().any(|&h| h % 2 != 0) {
        return Err(Error::Config("conjecture moments must be even".into()));
    }
    let n = config.ensemble.order as f64;
    let norm_n = n.sqrt();
    let norm_2n = (2.0 * n).sqrt();
    let k_count = config.moment_orders.len();
    let mut acc_a: Vec<Vec<f64>> = vec![Vec::new(); k_count];
    let mut acc_d: Vec<Vec<f64>> = vec![Vec::new(); k_count];
    let mut acc_b: Vec<Vec<f64>> = vec![Vec::new(); k_count];
    for trial in 0..config.trials {
        let slot0 = trial * STREAM_SLOTS_PER_TRIAL;
        let a = ensembles::sample(&config.ensemble.with_stream(slot0))?;
        let b = ensembles::sample(&b_spec.with_stream(slot0 + 1))?;
        let ma = empirical_moments(&a, &config.moment_orders, norm_n)?;
        let mb = empirical_moments(&b, &config.moment_orders, norm_n)?;
        // Tr(D_1^k) = Tr((A+B)^k) + Tr((A-B)^k), so the normalized moment of
        // the order-2N construction is the mean of the two half moments.
        let mp = empirical_moments(&a.add(&b)?, &config.moment_orders, norm_2n)?;
        let mm = empirical_moments(&a.sub(&b)?, &config.moment_orders, norm_2n)?;
        for slot in 0..k_count {
            acc_a[slot].push(ma[slot]);
            acc_b[slot].push(mb[slot]);
            acc_d[slot].push(0.5 * (mp[slot] + mm[slot]));
        }
    }
    Ok(config
        .moment_orders
        .iter()
        .enumerate()
        .map(|(slot, &k)| {
            let (m_a, se_a) = mean_and_std_error(&acc_a[slot]);
            let (m_d, se_d) = mean_and_std_error(&acc_d[slot]);
            let (m_b, se_b) = mean_and_std_error(&acc_b[slot]);
            ConjectureRow {
                k,
                m_a,
                se_a,
                m_disco: m_d,
                se_disco: se_d,
                m_b,
                se_b,
                verdict: sandwich_verdict((m_a, se_a), (m_d, se_d), (m_b, se_b)),
            }
        })
        .collect())
}

/// The deterministic 20x20 integer construction, evaluated exactly.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub blocks: usize,
    pub trace_a4: BigInt,
    pub trace_b4: BigInt,
    /// 2^{-3} [Tr((A+B)^4) + Tr((A-B)^4)], integral for this pair.
    pub normalized_disco: BigInt,
    /// Commonly quoted values for the three quantities; Tr(A^4) was
    /// misquoted at 889,801,750 (a digit slip), which the report surfaces.
    pub quoted_a4: BigInt,
    pub quoted_b4: BigInt,
    pub quoted_normalized: BigInt,
}

impl CounterexampleReport {
    /// The middle quantity exceeding both outer traces breaks the moment
    /// sandwich for this pair.
    pub fn sandwich_violated(&self) -> bool {
        self.normalized_disco > self.trace_a4 && self.normalized_disco > self.trace_b4
    }

    /// Human-readable notes on any disagreement with the quoted values.
    pub fn mismatches(&self) -> Vec<String> {
        let mut notes = Vec::new();
        for (name, got, quoted) in [
            ("trace_a4", &self.trace_a4, &self.quoted_a4),
            ("trace_b4", &self.trace_b4, &self.quoted_b4),
            ("normalized_disco", &self.normalized_disco, &self.quoted_normalized),
        ] {
            if got != quoted {
                notes.push(format!("{name}: exact {got} differs from quoted {quoted}"));
            }
        }
        notes
    }
}

/// Builds the block-diagonal pair at 10 blocks (order 20), computes the
/// three fourth-power traces exactly, and asserts the sandwich violation.
pub fn run_counterexample() -> Result<CounterexampleReport> {
    let (a, b) = counterexample_matrices(10)?;
    let trace_a4 = a.trace_power(4)?;
    let trace_b4 = b.trace_power(4)?;
    let nd = crate::disco::normalized_disco_moment_exact(&a, &b, 4)?;
    if !nd.is_integer() {
        return Err(Error::Numerical(format!(
            "normalized trace expected integral, got {nd}"
        )));
    }
    let report = CounterexampleReport {
        blocks: 10,
        trace_a4,
        trace_b4,
        normalized_disco: nd.to_integer(),
        quoted_a4: BigInt::from(889_801_750u64),
        quoted_b4: BigInt::from(869_734_090u64),
        quoted_normalized: BigInt::from(1_336_343_790u64),
    };
    if !report.sandwich_violated() {
        return Err(Error::Assertion(format!(
            "expected sandwich violation, got mid {} vs ({}, {})",
            report.normalized_disco, report.trace_a4, report.trace_b4
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EntryDistribution;

    fn wigner_cfg(order: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig::new(EnsembleSpec::new(Kind::Wigner, order, seed))
    }

    #[test]
    fn mean_and_error_basics() {
        let (m, se) = mean_and_std_error(&[1.0, 1.0, 1.0]);
        assert_eq!((m, se), (1.0, 0.0));
        let (m, se) = mean_and_std_error(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - 1.0).abs() < 1e-15);
        let (m, se) = mean_and_std_error(&[5.0]);
        assert_eq!((m, se), (5.0, 0.0));
    }

    #[test]
    fn histogram_fixed_bins() {
        let values: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let h = Histogram::from_sorted(&values, Some(3)).unwrap();
        assert_eq!(h.counts, vec![3, 3, 4]);
        assert_eq!(h.edges.len(), 4);
        assert_eq!(h.total(), 10);
        assert_eq!(h.edges[0], 0.0);
        assert_eq!(h.edges[3], 9.0);
    }

    #[test]
    fn histogram_degenerate_and_auto() {
        let h = Histogram::from_sorted(&[2.5, 2.5, 2.5], None).unwrap();
        assert_eq!(h.counts, vec![3]);
        assert_eq!(h.edges, vec![2.0, 3.0]);

        let values: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let h = Histogram::from_sorted(&values, None).unwrap();
        assert_eq!(h.total(), 1000);
        assert!(h.counts.len() > 1);
        assert!(Histogram::from_sorted(&[], None).is_err());
    }

    #[test]
    fn gap_statistics_contract() {
        assert_eq!(gap_statistics(&[0.0, 1.0, 3.0], 1.0).unwrap(), vec![1.0, 2.0]);
        assert_eq!(gap_statistics(&[0.0, 1.0, 3.0], 2.0).unwrap(), vec![0.5, 1.0]);
        assert_eq!(gap_statistics(&[4.0, 4.0, 4.0], 1.0).unwrap(), vec![0.0, 0.0]);
        assert!(gap_statistics(&[1.0], 1.0).is_err());
        assert!(gap_statistics(&[1.0, 0.0], 1.0).is_err());
        assert!(gap_statistics(&[0.0, 1.0], 0.0).is_err());
    }

    #[test]
    fn empirical_moment_identity() {
        let id = SymmetricMatrix::from_fn(4, |i, j| if i == j { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(empirical_moment(&id, 2, 1.0).unwrap(), 1.0);
        assert_eq!(empirical_moment(&id, 1, 1.0).unwrap(), 1.0);
        assert!(empirical_moment(&id, 0, 1.0).is_err());
        assert!(empirical_moment(&id, 2, 0.0).is_err());
    }

    #[test]
    fn power_and_eigen_routes_agree() {
        let spec = EnsembleSpec::new(Kind::Wigner, 12, 5);
        let m = ensembles::sample(&spec).unwrap();
        let norm = (12f64).sqrt();
        let via_powers = empirical_moments(&m, &[2, 4, 6, 8], norm).unwrap();
        let eigs = eigenvalues_sym(&m).unwrap();
        for (slot, h) in [2usize, 4, 6, 8].iter().enumerate() {
            let via_eigs = eigs
                .iter()
                .map(|l| (l / norm).powi(*h as i32))
                .sum::<f64>()
                / 12.0;
            let rel = (via_powers[slot] - via_eigs).abs() / via_eigs.abs().max(1e-12);
            assert!(rel < 1e-8, "h = {h}: {} vs {via_eigs}", via_powers[slot]);
        }
    }

    #[test]
    fn trial_matrix_depths() {
        let base = EnsembleSpec::new(Kind::Pst, 4, 99);
        let d0 = sample_trial_matrix(&base, 0, 0).unwrap();
        assert_eq!(d0, ensembles::sample(&base.with_stream(0)).unwrap());
        let d2 = sample_trial_matrix(&base, 2, 3).unwrap();
        assert_eq!(d2.order(), 16);
        assert_eq!(d2, sample_trial_matrix(&base, 2, 3).unwrap());
        assert_ne!(d2, sample_trial_matrix(&base, 2, 4).unwrap());
    }

    #[test]
    fn esd_summary_invariants() {
        let mut cfg = wigner_cfg(24, 7);
        cfg.trials = 3;
        cfg.moment_orders = vec![1, 2, 4];
        let s = run_esd(&cfg).unwrap();
        assert_eq!(s.eigenvalues.len(), 72);
        assert_eq!(s.histogram.total(), 72);
        assert_eq!(s.gaps.len(), 71);
        assert!(s.gaps.iter().all(|&g| g >= 0.0));
        // Moment estimates must match a recomputation from the pooled
        // eigenvalues (equal-size trials make the means identical).
        for me in &s.moments {
            let pooled = s
                .eigenvalues
                .iter()
                .map(|l| l.powi(me.order as i32))
                .sum::<f64>()
                / 72.0;
            assert!(
                (me.estimate - pooled).abs() <= 1e-10 * pooled.abs().max(1.0),
                "order {}",
                me.order
            );
        }
        let again = run_esd(&cfg).unwrap();
        assert_eq!(s.eigenvalues, again.eigenvalues);
        assert_eq!(s.histogram, again.histogram);
    }

    #[test]
    fn moments_run_carries_exact_limits() {
        let mut cfg = ExperimentConfig::new(EnsembleSpec::new(Kind::Pst, 8, 3));
        cfg.depth = 1;
        cfg.trials = 2;
        cfg.moment_orders = vec![2, 3, 4];
        let rows = run_moments(&cfg).unwrap();
        let as_rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(rows[0].exact_limit, Some(as_rat(1, 1)));
        assert_eq!(rows[1].exact_limit, Some(as_rat(0, 1)));
        assert_eq!(rows[2].exact_limit, Some(as_rat(9, 4)));
        assert_eq!(rows[2].exact_as_float(), Some(2.25));
        assert!(rows[2].abs_deviation().unwrap() >= 0.0);
    }

    #[test]
    fn exact_limit_dispatch() {
        let rat_int = |v: i64| BigRational::from_integer(BigInt::from(v));
        let wigner = wigner_cfg(8, 1);
        assert_eq!(exact_limit(&wigner, 6), Some(rat_int(5)));
        let mut deep_wigner = wigner_cfg(8, 1);
        deep_wigner.depth = 3;
        assert_eq!(exact_limit(&deep_wigner, 6), Some(rat_int(5)));
        let pst = ExperimentConfig::new(EnsembleSpec::new(Kind::Pst, 8, 1));
        assert_eq!(exact_limit(&pst, 6), Some(rat_int(15)));
        let bc = ExperimentConfig::new(
            EnsembleSpec::new(Kind::BlockCirculant, 9, 1).with_period(3),
        );
        assert_eq!(
            exact_limit(&bc, 4),
            Some(BigRational::new(BigInt::from(19), BigInt::from(9)))
        );
        assert_eq!(exact_limit(&bc, 10), None);
        let ce = ExperimentConfig::new(EnsembleSpec::new(Kind::CounterexampleA, 20, 1));
        assert_eq!(exact_limit(&ce, 4), None);
    }

    #[test]
    fn dsweep_rows_cover_depths() {
        let mut cfg = ExperimentConfig::new(EnsembleSpec::new(Kind::Pst, 8, 3));
        cfg.trials = 2;
        cfg.moment_orders = vec![2, 4];
        let rows = run_dsweep(&cfg, &[0, 1, 2]).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].depth, 0);
        assert_eq!(rows[5].depth, 2);
        assert!(run_dsweep(&cfg, &[]).is_err());
    }

    #[test]
    fn gaps_run_structure() {
        let mut cfg = wigner_cfg(32, 11);
        cfg.bins = Some(8);
        let r = run_gaps(&cfg).unwrap();
        assert_eq!(r.spacings.len(), 31);
        assert!(r.spacings.iter().all(|&s| s >= 0.0));
        assert_eq!(r.histogram.total(), 31);
        assert_eq!(r.spacings, run_gaps(&cfg).unwrap().spacings);
    }

    #[test]
    fn conjecture_self_sandwich() {
        let mut cfg = wigner_cfg(32, 13);
        cfg.ensemble_b = Some(EnsembleSpec::new(Kind::Wigner, 32, 13));
        cfg.trials = 8;
        cfg.moment_orders = vec![2, 4];
        let rows = run_conjecture(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            // Same-law pair: all three columns estimate the same number, so
            // a two-sigma violation would flag a bug.
            assert_ne!(r.verdict, Verdict::Violated, "k = {}", r.k);
            assert!(r.m_disco > 0.0);
            assert!(r.se_disco >= 0.0);
        }
    }

    #[test]
    fn conjecture_requires_second_ensemble_and_even_orders() {
        let mut cfg = wigner_cfg(16, 1);
        assert!(run_conjecture(&cfg).is_err());
        cfg.ensemble_b = Some(EnsembleSpec::new(Kind::Wigner, 16, 1));
        cfg.moment_orders = vec![3];
        assert!(run_conjecture(&cfg).is_err());
    }

    #[test]
    fn counterexample_report_values() {
        let r = run_counterexample().unwrap();
        assert_eq!(r.trace_a4, BigInt::from(886_801_750u64));
        assert_eq!(r.trace_b4, BigInt::from(869_734_090u64));
        assert_eq!(r.normalized_disco, BigInt::from(1_336_343_790u64));
        assert!(r.sandwich_violated());
        let notes = r.mismatches();
        assert_eq!(notes.len(), 1);
        assert!(notes[0].contains("trace_a4"));
        assert!(notes[0].contains("886801750"));
    }

    #[test]
    fn config_validation() {
        let mut cfg = wigner_cfg(16, 1);
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = wigner_cfg(16, 1);
        cfg.depth = 32;
        assert!(cfg.validate().is_err());
        let mut cfg = wigner_cfg(16, 1);
        cfg.ensemble_b = Some(EnsembleSpec::new(Kind::Wigner, 8, 1));
        assert!(cfg.validate().is_err());
        let mut cfg = wigner_cfg(16, 1);
        cfg.moment_orders = vec![2, 0];
        assert!(cfg.validate().is_err());
        let mut cfg = wigner_cfg(16, 1);
        cfg.bins = Some(0);
        assert!(cfg.validate().is_err());
        let mut cfg = wigner_cfg(16, 1);
        cfg.ensemble = cfg.ensemble.with_distribution(EntryDistribution::Rademacher);
        assert!(cfg.validate().is_ok());
    }
}
