//! Entanglement generating power: the time integral of logarithmic
//! negativity over the intervals where it stays at or above half its peak,
//! evaluated from separable initial states, plus Haar sampling of those
//! states and a seeded search for the best one.
//!
//! The integral needs a finite horizon to be well defined (a plateau above
//! threshold would otherwise diverge), so every report carries the horizon
//! it was evaluated over.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::bath::JumpChannel;
use crate::circuit::CompositeSystem;
use crate::dynamics::{evolve_sampled, DensityMatrix, EvolveMode};
use crate::linalg::CMatrix;
use crate::measures::MeasureSeries;
use crate::states;
use crate::{Error, Result, C64};

/// Result of evaluating the generating-power functional over one trajectory.
#[derive(Debug, Clone)]
pub struct PowerReport {
    /// The integral, in ebit time units.
    pub e_value: f64,
    /// Peak of the logarithmic-negativity series.
    pub ln_max: f64,
    /// Half the peak; the integration gate.
    pub threshold: f64,
    /// Maximal runs where the series stays at or above the threshold,
    /// ascending and disjoint, boundaries located by linear interpolation.
    pub intervals: Vec<(f64, f64)>,
    /// Upper integration limit the report was evaluated against.
    pub horizon: f64,
    /// The state the trajectory started from.
    pub initial_state: DensityMatrix,
}

/// Families of separable initial states the sampler can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleKind {
    /// Haar product of two qubit states embedded in the lowest two levels.
    PureProductQubit,
    /// Haar product of two full qutrit states.
    PureProductQutrit,
    /// Product of two mixed locals from the Hilbert-Schmidt measure.
    MixedProduct,
    /// Simplex-weighted convex mixture of pure products.
    MixedSeparable,
}

impl SampleKind {
    pub const ALL: [SampleKind; 4] = [
        SampleKind::PureProductQubit,
        SampleKind::PureProductQutrit,
        SampleKind::MixedProduct,
        SampleKind::MixedSeparable,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SampleKind::PureProductQubit => "pure_product_qubit",
            SampleKind::PureProductQutrit => "pure_product_qutrit",
            SampleKind::MixedProduct => "mixed_product",
            SampleKind::MixedSeparable => "mixed_separable",
        }
    }
}

/// A separable initial state together with how it was drawn.
#[derive(Debug, Clone)]
pub struct SeparableSample {
    pub state: DensityMatrix,
    pub kind: SampleKind,
    pub seed: u64,
}

/// Evaluates the generating-power functional on a measured series.
///
/// The series must start at zero and reach the horizon; a longer series is
/// clipped, interpolating the value at the horizon itself. Grid points
/// sitting exactly on the threshold count as inside. A series that never
/// leaves zero yields an empty report rather than an error.
pub fn generating_power(
    series: &MeasureSeries,
    horizon: f64,
    initial_state: &DensityMatrix,
) -> Result<PowerReport> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidParameter(
            "horizon must be finite and positive".into(),
        ));
    }
    let n = series.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "series needs at least two points".into(),
        ));
    }
    if series.tau[0] > 1e-12 || series.tau[n - 1] < horizon - 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "series [{:.3}, {:.3}] does not cover [0, {horizon}]",
            series.tau[0],
            series.tau[n - 1]
        )));
    }
    for (i, &y) in series.log_negativity.iter().enumerate() {
        if y < -1e-9 {
            return Err(Error::InvalidParameter(format!(
                "log negativity {y:.3e} at index {i} is negative"
            )));
        }
    }

    // Clip to [0, horizon], interpolating the endpoint when it falls between
    // grid points, and clamp rounding-level negatives to zero.
    let mut ts: Vec<f64> = Vec::with_capacity(n);
    let mut ys: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        let t = series.tau[i];
        let y = series.log_negativity[i].max(0.0);
        if t <= horizon + 1e-12 {
            ts.push(t.min(horizon));
            ys.push(y);
        } else {
            let t0 = series.tau[i - 1];
            let y0 = ys[i - 1];
            let frac = (horizon - t0) / (t - t0);
            ts.push(horizon);
            ys.push(y0 + frac * (y - y0));
            break;
        }
    }

    let ln_max = ys.iter().cloned().fold(0.0f64, f64::max);
    if ln_max <= 0.0 {
        return Ok(PowerReport {
            e_value: 0.0,
            ln_max: 0.0,
            threshold: 0.0,
            intervals: Vec::new(),
            horizon,
            initial_state: initial_state.clone(),
        });
    }
    let threshold = 0.5 * ln_max;

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut integral = 0.0;
    let mut open: Option<f64> = None;
    let inside = |y: f64| y >= threshold;
    for i in 0..ts.len() - 1 {
        let (t0, t1) = (ts[i], ts[i + 1]);
        let (y0, y1) = (ys[i], ys[i + 1]);
        match (inside(y0), inside(y1)) {
            (true, true) => {
                if open.is_none() {
                    open = Some(t0);
                }
                integral += 0.5 * (y0 + y1) * (t1 - t0);
            }
            (true, false) => {
                let start = open.take().unwrap_or(t0);
                let tc = (t0 + (threshold - y0) * (t1 - t0) / (y1 - y0)).clamp(t0, t1);
                integral += 0.5 * (y0 + threshold) * (tc - t0);
                if tc - start > 1e-15 {
                    intervals.push((start, tc));
                }
            }
            (false, true) => {
                let tc = (t0 + (threshold - y0) * (t1 - t0) / (y1 - y0)).clamp(t0, t1);
                open = Some(tc);
                integral += 0.5 * (threshold + y1) * (t1 - tc);
            }
            (false, false) => {}
        }
    }
    if let Some(start) = open {
        let end = *ts.last().expect("nonempty grid");
        if end - start > 1e-15 {
            intervals.push((start, end));
        }
    }

    Ok(PowerReport {
        e_value: integral,
        ln_max,
        threshold,
        intervals,
        horizon,
        initial_state: initial_state.clone(),
    })
}

fn haar_vector(rng: &mut ChaCha12Rng, d: usize) -> Vec<C64> {
    (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Mixed local state from the measure induced by tracing a Haar pure state
/// on a doubled space: a normalized Ginibre Gram matrix.
fn hilbert_schmidt_mixed(rng: &mut ChaCha12Rng, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    w.map(|z| z / tr)
}

fn qubit_embedded(rng: &mut ChaCha12Rng) -> Vec<C64> {
    let v = haar_vector(rng, 2);
    vec![v[0], v[1], C64::ZERO]
}

/// Draws one separable state, deterministically in the seed.
///
/// `mix_terms` only matters for [`SampleKind::MixedSeparable`], where it
/// sets the number of pure products mixed with simplex-uniform weights.
pub fn sample_separable(seed: u64, kind: SampleKind, mix_terms: usize) -> Result<SeparableSample> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let state = match kind {
        SampleKind::PureProductQubit => {
            let a = qubit_embedded(&mut rng);
            let b = qubit_embedded(&mut rng);
            states::product_state(&a, &b)?
        }
        SampleKind::PureProductQutrit => {
            let a = haar_vector(&mut rng, 3);
            let b = haar_vector(&mut rng, 3);
            states::product_state(&a, &b)?
        }
        SampleKind::MixedProduct => {
            let a = hilbert_schmidt_mixed(&mut rng, 3);
            let b = hilbert_schmidt_mixed(&mut rng, 3);
            DensityMatrix::new(crate::linalg::tensor_product(&a, &b))?
        }
        SampleKind::MixedSeparable => {
            if !(1..=4).contains(&mix_terms) {
                return Err(Error::InvalidParameter(format!(
                    "mix_terms must lie in [1, 4], got {mix_terms}"
                )));
            }
            let raw: Vec<f64> = (0..mix_terms)
                .map(|_| {
                    let e: f64 = Exp1.sample(&mut rng);
                    e
                })
                .collect();
            let total: f64 = raw.iter().sum();
            let mut acc = CMatrix::zeros(9, 9);
            for w in &raw {
                let a = haar_vector(&mut rng, 3);
                let b = haar_vector(&mut rng, 3);
                let term = states::product_state(&a, &b)?;
                acc += term.matrix().map(|z| z.scale(w / total));
            }
            DensityMatrix::new(acc)?
        }
    };
    Ok(SeparableSample { state, kind, seed })
}

/// Search configuration for [`optimize_power`].
#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    pub n_samples: usize,
    /// Integration horizon and upper limit of the functional.
    pub horizon: f64,
    pub dt: f64,
    /// Sample families, assigned round-robin by sample index.
    pub kinds: Vec<SampleKind>,
    pub master_seed: u64,
    /// Trajectory sampling stride for the measured series.
    pub store_stride: usize,
    /// Mixture terms for the mixed-separable family.
    pub mix_terms: usize,
    /// Generator to integrate; dissipative by default.
    pub mode: EvolveMode,
}

impl OptimizeOptions {
    /// Defaults: all four families round-robin (half pure, half mixed),
    /// three-term mixtures, dissipative evolution, measure stride 10.
    pub fn new(n_samples: usize, horizon: f64, dt: f64, master_seed: u64) -> Self {
        Self {
            n_samples,
            horizon,
            dt,
            kinds: SampleKind::ALL.to_vec(),
            master_seed,
            store_stride: 10,
            mix_terms: 3,
            mode: EvolveMode::Lindblad,
        }
    }
}

/// One row of the search's value distribution.
#[derive(Debug, Clone, Copy)]
pub struct SampleOutcome {
    pub index: usize,
    pub kind: SampleKind,
    pub seed: u64,
    pub ln_max: f64,
    pub e_value: f64,
}

/// Everything the search produced.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub best: SeparableSample,
    pub best_report: PowerReport,
    /// Per-sample values in index order, successes only.
    pub all: Vec<SampleOutcome>,
    /// Samples dropped after an integration failure.
    pub failures: usize,
}

type Evaluated = (
    usize,
    SampleKind,
    u64,
    Result<(SeparableSample, PowerReport)>,
);

/// Seeded search for the separable state with the largest generating power.
///
/// Per-sample seeds derive from `master_seed` by counter, so runs are
/// reproducible and samples carry no shared random state; evaluations may
/// run concurrently. A sample whose integration fails is logged and skipped.
/// Ties in the final argmax break toward the lowest sample index.
pub fn optimize_power(
    system: &CompositeSystem,
    channel_sets: &[Vec<JumpChannel>],
    opts: &OptimizeOptions,
) -> Result<OptimizeOutcome> {
    if opts.n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be >= 1".into()));
    }
    if opts.kinds.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one sample kind is required".into(),
        ));
    }

    let mut seeder = ChaCha12Rng::seed_from_u64(opts.master_seed);
    let specs: Vec<(usize, u64, SampleKind)> = (0..opts.n_samples)
        .map(|i| (i, seeder.random::<u64>(), opts.kinds[i % opts.kinds.len()]))
        .collect();

    let evaluate = |&(index, seed, kind): &(usize, u64, SampleKind)| -> Evaluated {
        let run = || -> Result<(SeparableSample, PowerReport)> {
            let sample = sample_separable(seed, kind, opts.mix_terms)?;
            let traj = evolve_sampled(
                &sample.state,
                system,
                channel_sets,
                opts.horizon,
                opts.dt,
                opts.mode,
                opts.store_stride,
            )?;
            let series = MeasureSeries::from_trajectory(&traj)?;
            let report = generating_power(&series, opts.horizon, &sample.state)?;
            Ok((sample, report))
        };
        (index, kind, seed, run())
    };

    #[cfg(feature = "parallel")]
    let results: Vec<Evaluated> = specs.par_iter().map(evaluate).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Evaluated> = specs.iter().map(evaluate).collect();

    let mut all = Vec::with_capacity(results.len());
    let mut failures = 0usize;
    let mut best: Option<(SeparableSample, PowerReport)> = None;
    for (index, kind, seed, res) in results {
        match res {
            Ok((sample, report)) => {
                all.push(SampleOutcome {
                    index,
                    kind,
                    seed,
                    ln_max: report.ln_max,
                    e_value: report.e_value,
                });
                let better = best
                    .as_ref()
                    .map_or(true, |(_, b)| report.e_value > b.e_value);
                if better {
                    best = Some((sample, report));
                }
            }
            Err(err) => {
                log::warn!("sample {index} (seed {seed}) skipped: {err}");
                failures += 1;
            }
        }
    }

    let (best, best_report) = best.ok_or(Error::NoUsableSamples(opts.n_samples))?;
    Ok(OptimizeOutcome {
        best,
        best_report,
        all,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{self, BathIndex, BathParams};
    use crate::circuit::{composite_hamiltonian, CircuitParams};
    use crate::linalg;
    use crate::measures::{self, log_negativity};
    use proptest::prelude::*;

    fn series_from(tau: Vec<f64>, ln: Vec<f64>) -> MeasureSeries {
        let n = tau.len();
        MeasureSeries {
            tau,
            log_negativity: ln,
            l1_coherence: vec![0.0; n],
            trace_distance_to_initial: vec![0.0; n],
            fidelity_to_initial: vec![1.0; n],
        }
    }

    fn ref_state() -> DensityMatrix {
        DensityMatrix::basis_state(9, 0).unwrap()
    }

    fn grid(n: usize, t_max: f64) -> Vec<f64> {
        (0..=n).map(|k| k as f64 * t_max / n as f64).collect()
    }

    #[test]
    fn constant_series_integrates_to_height_times_span() {
        let ts = grid(40, 2.0);
        let ys = vec![0.3; ts.len()];
        let r = generating_power(&series_from(ts, ys), 2.0, &ref_state()).unwrap();
        assert!((r.e_value - 0.6).abs() < 1e-12);
        assert_eq!(r.intervals.len(), 1);
        assert!((r.intervals[0].0 - 0.0).abs() < 1e-12);
        assert!((r.intervals[0].1 - 2.0).abs() < 1e-12);
        assert!((r.ln_max - 0.3).abs() < 1e-15);
        assert!((r.threshold - 0.15).abs() < 1e-15);
    }

    #[test]
    fn triangle_pulse_matches_the_closed_form() {
        // Peak L at the midpoint of [0, b]: the gated integral is 3Lb/8 and
        // the gate spans the middle half. A 90-point grid keeps the peak on
        // a grid point while both crossings fall between points.
        let b = 1.0;
        let peak = 0.8;
        let ts = grid(90, b);
        let ys: Vec<f64> = ts
            .iter()
            .map(|&t| {
                if t <= b / 2.0 {
                    peak * 2.0 * t / b
                } else {
                    peak * 2.0 * (b - t) / b
                }
            })
            .collect();
        let r = generating_power(&series_from(ts, ys), b, &ref_state()).unwrap();
        assert!((r.e_value - 3.0 * peak * b / 8.0).abs() < 1e-12);
        assert_eq!(r.intervals.len(), 1);
        assert!((r.intervals[0].0 - 0.25).abs() < 1e-12);
        assert!((r.intervals[0].1 - 0.75).abs() < 1e-12);
    }

    #[test]
    fn flat_zero_series_reports_nothing() {
        let ts = grid(10, 1.0);
        let ys = vec![0.0; ts.len()];
        let r = generating_power(&series_from(ts, ys), 1.0, &ref_state()).unwrap();
        assert_eq!(r.e_value, 0.0);
        assert!(r.intervals.is_empty());
        assert_eq!(r.ln_max, 0.0);
    }

    #[test]
    fn plateau_at_the_end_closes_on_the_horizon() {
        // Linear ramp y = t on [0, 1]: gate opens at 0.5 and never closes.
        let ts = grid(50, 1.0);
        let ys = ts.clone();
        let r = generating_power(&series_from(ts, ys), 1.0, &ref_state()).unwrap();
        assert_eq!(r.intervals.len(), 1);
        assert!((r.intervals[0].0 - 0.5).abs() < 1e-12);
        assert!((r.intervals[0].1 - 1.0).abs() < 1e-12);
        assert!((r.e_value - 0.375).abs() < 1e-12);
    }

    #[test]
    fn horizon_clips_a_longer_series() {
        // Constant series over [0, 1] evaluated to horizon 0.63, a point
        // strictly between grid nodes.
        let ts = grid(10, 1.0);
        let ys = vec![0.4; ts.len()];
        let r = generating_power(&series_from(ts, ys), 0.63, &ref_state()).unwrap();
        assert!((r.e_value - 0.4 * 0.63).abs() < 1e-12);
        assert!((r.intervals[0].1 - 0.63).abs() < 1e-12);
    }

    #[test]
    fn coverage_and_sign_preconditions_are_enforced() {
        let ts = grid(10, 0.5);
        let ys = vec![0.1; ts.len()];
        assert!(generating_power(&series_from(ts, ys), 1.0, &ref_state()).is_err());

        let ts = grid(10, 1.0);
        let mut ys = vec![0.1; ts.len()];
        ys[3] = -0.01;
        assert!(generating_power(&series_from(ts, ys), 1.0, &ref_state()).is_err());
    }

    #[test]
    fn power_scales_linearly_with_the_series() {
        let ts = grid(64, 3.0);
        let ys: Vec<f64> = ts.iter().map(|&t| (1.1 * t).sin().max(0.0) * 0.2).collect();
        let base =
            generating_power(&series_from(ts.clone(), ys.clone()), 3.0, &ref_state()).unwrap();
        let scaled_ys: Vec<f64> = ys.iter().map(|y| 2.5 * y).collect();
        let scaled = generating_power(&series_from(ts, scaled_ys), 3.0, &ref_state()).unwrap();
        assert!((scaled.e_value - 2.5 * base.e_value).abs() < 1e-12);
        assert_eq!(base.intervals.len(), scaled.intervals.len());
        for (a, b) in base.intervals.iter().zip(&scaled.intervals) {
            assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_are_separable_normalized_and_deterministic() {
        for kind in SampleKind::ALL {
            for seed in 0..10u64 {
                let s = sample_separable(seed, kind, 3).unwrap();
                assert!(
                    log_negativity(&s.state).unwrap() <= 1e-10,
                    "{} seed {seed} is entangled",
                    kind.as_str()
                );
                assert!(s.state.trace_deviation() < 1e-12);
                let again = sample_separable(seed, kind, 3).unwrap();
                let diff = linalg::max_abs(&(s.state.matrix() - again.state.matrix()));
                assert_eq!(diff, 0.0, "resampling {seed} is not bitwise stable");
            }
        }
    }

    #[test]
    fn pure_kinds_have_unit_purity() {
        for kind in [SampleKind::PureProductQubit, SampleKind::PureProductQutrit] {
            for seed in 0..10u64 {
                let s = sample_separable(seed, kind, 1).unwrap();
                let purity = (s.state.matrix() * s.state.matrix()).trace().re;
                assert!((purity - 1.0).abs() < 1e-10);
            }
        }
        // Mixed draws are almost surely strictly mixed.
        let m = sample_separable(7, SampleKind::MixedProduct, 1).unwrap();
        let purity = (m.state.matrix() * m.state.matrix()).trace().re;
        assert!(purity < 0.999);
    }

    #[test]
    fn qubit_samples_leave_level_two_empty() {
        let s = sample_separable(3, SampleKind::PureProductQubit, 1).unwrap();
        for idx in [2usize, 5, 6, 7, 8] {
            assert!(s.state.matrix()[(idx, idx)].norm() < 1e-15);
        }
        assert!(sample_separable(0, SampleKind::MixedSeparable, 0).is_err());
        assert!(sample_separable(0, SampleKind::MixedSeparable, 5).is_err());
    }

    #[test]
    fn haar_qubit_marginal_has_the_uniform_moment() {
        // |<0|psi>|^2 is uniform on [0, 1] for Haar qubit states; its mean
        // over 1e5 draws must sit within three standard errors of 1/2.
        let mut rng = ChaCha12Rng::seed_from_u64(123);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let v = haar_vector(&mut rng, 2);
            let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            acc += v[0].norm_sqr() / norm;
        }
        let mean = acc / n as f64;
        let three_sigma = 3.0 * (1.0f64 / 12.0 / n as f64).sqrt();
        assert!(
            (mean - 0.5).abs() < three_sigma,
            "mean {mean} outside 0.5 +- {three_sigma}"
        );
    }

    #[test]
    fn sampled_product_population_moment_matches() {
        // Through the full pipeline: rho_00 of a qubit product averages to
        // E[u]E[v] = 1/4 over independent uniform locals.
        let n = 20_000;
        let mut acc = 0.0;
        for seed in 0..n {
            let s = sample_separable(seed as u64, SampleKind::PureProductQubit, 1).unwrap();
            acc += s.state.matrix()[(0, 0)].re;
        }
        let mean = acc / n as f64;
        assert!((mean - 0.25).abs() < 0.005, "mean {mean}");
    }

    fn short_search_opts() -> OptimizeOptions {
        let mut opts = OptimizeOptions::new(6, 2.0, 5e-3, 42);
        opts.store_stride = 10;
        opts
    }

    #[test]
    fn search_is_reproducible_and_well_formed() {
        let p = CircuitParams::new(1.0, 100.0, 0.2, 10).unwrap();
        let sys = composite_hamiltonian(&p).unwrap();
        let b = BathParams::defaults_for(sys.omega01);
        let channels = vec![
            bath::jump_channels(&sys, BathIndex::One, &b),
            bath::jump_channels(&sys, BathIndex::Two, &b),
        ];
        let opts = short_search_opts();
        let first = optimize_power(&sys, &channels, &opts).unwrap();
        let second = optimize_power(&sys, &channels, &opts).unwrap();

        assert_eq!(first.all.len(), 6);
        assert_eq!(first.failures, 0);
        assert_eq!(first.best.seed, second.best.seed);
        assert_eq!(first.best_report.e_value, second.best_report.e_value);
        for (a, b) in first.all.iter().zip(&second.all) {
            assert_eq!(a.e_value, b.e_value);
            assert_eq!(a.seed, b.seed);
        }

        // Round-robin kind assignment in index order.
        for row in &first.all {
            assert_eq!(row.kind, SampleKind::ALL[row.index % 4]);
        }

        // Report invariants.
        let r = &first.best_report;
        assert!(r.e_value >= 0.0);
        assert!(r.e_value <= r.ln_max * r.horizon + 1e-9);
        let mut prev_end = -1.0;
        for &(a, b) in &r.intervals {
            assert!(a < b, "interval ({a}, {b}) is not ordered");
            assert!(a >= -1e-12 && b <= r.horizon + 1e-12);
            assert!(a > prev_end, "intervals overlap");
            prev_end = b;
        }
        assert!(measures::log_negativity(&r.initial_state).unwrap() <= 1e-10);

        // The best value is the maximum of the distribution.
        let max_all = first.all.iter().map(|o| o.e_value).fold(0.0f64, f64::max);
        assert_eq!(first.best_report.e_value, max_all);
    }

    #[test]
    fn search_with_unstable_step_reports_no_usable_samples() {
        let p = CircuitParams::new(1.0, 100.0, 0.2, 10).unwrap();
        let sys = composite_hamiltonian(&p).unwrap();
        let b = BathParams::defaults_for(sys.omega01);
        let channels = vec![
            bath::jump_channels(&sys, BathIndex::One, &b),
            bath::jump_channels(&sys, BathIndex::Two, &b),
        ];
        let mut opts = OptimizeOptions::new(3, 2.0, 1.0, 7);
        opts.store_stride = 1;
        match optimize_power(&sys, &channels, &opts) {
            Err(Error::NoUsableSamples(n)) => assert_eq!(n, 3),
            other => panic!("expected no-usable-samples, got {other:?}"),
        }
    }

    #[test]
    fn search_rejects_empty_configuration() {
        let p = CircuitParams::new(1.0, 100.0, 0.2, 10).unwrap();
        let sys = composite_hamiltonian(&p).unwrap();
        let mut opts = OptimizeOptions::new(0, 1.0, 1e-2, 1);
        assert!(optimize_power(&sys, &[], &opts).is_err());
        opts.n_samples = 1;
        opts.kinds.clear();
        assert!(optimize_power(&sys, &[], &opts).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn report_invariants_hold_for_arbitrary_series(
            seed in 0u64..10_000,
            scale in 0.01f64..2.0,
        ) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let ts = grid(60, 4.0);
            let ys: Vec<f64> = ts.iter().map(|_| rng.random::<f64>() * scale).collect();
            let r = generating_power(&series_from(ts, ys), 4.0, &ref_state()).unwrap();
            prop_assert!(r.e_value >= 0.0);
            prop_assert!(r.e_value <= r.ln_max * r.horizon + 1e-9);
            prop_assert!((r.threshold - r.ln_max / 2.0).abs() < 1e-15);
            let mut prev = -1.0;
            for &(a, b) in &r.intervals {
                prop_assert!(a < b);
                prop_assert!(a >= -1e-12 && b <= 4.0 + 1e-12);
                prop_assert!(a > prev);
                prev = b;
            }
        }
    }
}
