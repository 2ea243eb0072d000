//! State functionals: normalized l1-coherence, negativity and logarithmic
//! negativity, trace distance, and fidelity, plus a per-trajectory series
//! that evaluates all four against the initial state.
//!
//! Coherence is basis-dependent and is always taken in the product basis the
//! states are stored in. Entanglement is measured across the two-transmon
//! split, partial-transposing the first factor.

use crate::dynamics::{DensityMatrix, Trajectory};
use crate::linalg::{self, CMatrix, Subsystem};
use crate::{Error, Result};

/// Eigenvalue clamp for matrix square roots: integration round-off leaves
/// eigenvalues slightly negative; anything below this is a real defect.
const NEG_TOL: f64 = 1e-10;

/// Normalized l1-coherence: the off-diagonal modulus sum over its maximum
/// `d - 1`, evaluated in the basis the matrix is expressed in.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let d = m.nrows();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m[(i, j)].norm();
            }
        }
    }
    sum / (d - 1) as f64
}

fn bipartition(dim: usize) -> Result<usize> {
    let k = (dim as f64).sqrt().round() as usize;
    if k * k != dim || k < 2 {
        return Err(Error::InvalidDimension { min: 4, got: dim });
    }
    Ok(k)
}

/// Negativity: the absolute sum of negative eigenvalues of the partial
/// transpose over the first factor. Zero for every separable state.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let k = bipartition(rho.dim())?;
    let pt = linalg::partial_transpose(rho.matrix(), (k, k), Subsystem::A)?;
    let spec = linalg::eig_hermitian(&linalg::hermitize(&pt))?;
    Ok(spec
        .eigenvalues
        .iter()
        .filter(|&&lam| lam < 0.0)
        .map(|lam| -lam)
        .sum())
}

/// Logarithmic negativity `log2(2 N + 1)` in ebits.
pub fn log_negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok((2.0 * negativity(rho)? + 1.0).log2())
}

/// Trace distance `(1/2) ||rho - sigma||_1`, a metric with range [0, 1].
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::ShapeMismatch(format!(
            "trace distance needs equal dimensions, got {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(0.5 * linalg::trace_norm(&(rho.matrix() - sigma.matrix())))
}

/// Uhlmann fidelity `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`, range [0, 1],
/// symmetric in its arguments.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::ShapeMismatch(format!(
            "fidelity needs equal dimensions, got {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let root = linalg::sqrtm_psd(&linalg::hermitize(rho.matrix()), NEG_TOL)?;
    fidelity_with_root(&root, sigma)
}

fn fidelity_with_root(sqrt_rho: &CMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let inner = sqrt_rho * sigma.matrix() * sqrt_rho;
    let outer = linalg::sqrtm_psd(&linalg::hermitize(&inner), NEG_TOL)?;
    let f = outer.trace().re;
    Ok(f * f)
}

/// The four functionals evaluated along a trajectory, distance and fidelity
/// both taken against the initial state. All vectors share the trajectory's
/// length and time grid.
#[derive(Debug, Clone)]
pub struct MeasureSeries {
    pub tau: Vec<f64>,
    pub log_negativity: Vec<f64>,
    pub l1_coherence: Vec<f64>,
    pub trace_distance_to_initial: Vec<f64>,
    pub fidelity_to_initial: Vec<f64>,
}

impl MeasureSeries {
    /// Evaluates every stored state. The square root of the initial state is
    /// factored once and reused across the fidelity column.
    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        if traj.is_empty() {
            return Err(Error::InvalidParameter(
                "cannot measure an empty trajectory".into(),
            ));
        }
        let rho0 = &traj.states[0];
        let sqrt0 = linalg::sqrtm_psd(&linalg::hermitize(rho0.matrix()), NEG_TOL)?;

        let n = traj.len();
        let mut series = Self {
            tau: traj.tau.clone(),
            log_negativity: Vec::with_capacity(n),
            l1_coherence: Vec::with_capacity(n),
            trace_distance_to_initial: Vec::with_capacity(n),
            fidelity_to_initial: Vec::with_capacity(n),
        };
        for s in &traj.states {
            series.log_negativity.push(log_negativity(s)?);
            series.l1_coherence.push(l1_coherence(s));
            series
                .trace_distance_to_initial
                .push(trace_distance(rho0, s)?);
            series
                .fidelity_to_initial
                .push(fidelity_with_root(&sqrt0, s)?);
        }
        Ok(series)
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{self, BathIndex, BathParams};
    use crate::circuit::{composite_hamiltonian, CircuitParams};
    use crate::dynamics::{evolve_sampled, EvolveMode};
    use crate::C64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn product_index(i: usize, j: usize) -> usize {
        3 * i + j
    }

    fn pure9(pairs: &[(usize, C64)]) -> DensityMatrix {
        let mut amps = vec![C64::ZERO; 9];
        for (k, a) in pairs {
            amps[*k] = *a;
        }
        DensityMatrix::from_pure(&amps).unwrap()
    }

    fn random_mixed(rng: &mut ChaCha12Rng, n: usize) -> DensityMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let w = &g * g.adjoint();
        let tr = w.trace().re;
        DensityMatrix::new(w.map(|z| z / tr)).unwrap()
    }

    fn random_pure(rng: &mut ChaCha12Rng, n: usize) -> DensityMatrix {
        let amps: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        DensityMatrix::from_pure(&amps).unwrap()
    }

    fn random_unitary(rng: &mut ChaCha12Rng, n: usize) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        g.qr().q()
    }

    #[test]
    fn coherence_hits_its_reference_points() {
        let basis = DensityMatrix::basis_state(9, 0).unwrap();
        assert!(l1_coherence(&basis).abs() < 1e-14);

        let flat: Vec<(usize, C64)> = (0..9).map(|k| (k, C64::ONE)).collect();
        let equal = pure9(&flat);
        assert!((l1_coherence(&equal) - 1.0).abs() < 1e-12);

        let bell = pure9(&[
            (product_index(0, 1), C64::ONE),
            (product_index(1, 0), C64::ONE),
        ]);
        assert!((l1_coherence(&bell) - 0.125).abs() < 1e-13);
    }

    #[test]
    fn coherence_survives_diagonal_phase_rotation() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let rho = random_mixed(&mut rng, 9);
        let phases = CMatrix::from_fn(9, 9, |i, j| {
            if i == j {
                C64::from_polar(1.0, 0.7 * i as f64 - 1.1)
            } else {
                C64::ZERO
            }
        });
        let rotated = DensityMatrix::new(&phases * rho.matrix() * phases.adjoint()).unwrap();
        assert!((l1_coherence(&rho) - l1_coherence(&rotated)).abs() < 1e-12);
    }

    #[test]
    fn negativity_of_reference_states() {
        let product = DensityMatrix::basis_state(9, product_index(1, 2)).unwrap();
        assert!(negativity(&product).unwrap() < 1e-12);

        let bell = pure9(&[
            (product_index(0, 1), C64::ONE),
            (product_index(1, 0), C64::ONE),
        ]);
        assert!((negativity(&bell).unwrap() - 0.5).abs() < 1e-10);

        let ghz = pure9(&[
            (product_index(0, 0), C64::ONE),
            (product_index(1, 1), C64::ONE),
            (product_index(2, 2), C64::ONE),
        ]);
        assert!((negativity(&ghz).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negativity_routes_cross_validate() {
        // Negative-eigenvalue sum against the trace-norm formula.
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..10 {
            let rho = if rng.random::<bool>() {
                random_pure(&mut rng, 9)
            } else {
                random_mixed(&mut rng, 9)
            };
            let direct = negativity(&rho).unwrap();
            let pt = linalg::partial_transpose(rho.matrix(), (3, 3), Subsystem::A).unwrap();
            let via_norm = (linalg::trace_norm(&pt) - 1.0) / 2.0;
            assert!(
                (direct - via_norm).abs() < 1e-10,
                "routes differ: {direct} vs {via_norm}"
            );
        }
    }

    #[test]
    fn negativity_is_symmetric_in_the_bipartition() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for _ in 0..5 {
            let rho = random_pure(&mut rng, 9);
            let a = negativity(&rho).unwrap();
            let pt_b = linalg::partial_transpose(rho.matrix(), (3, 3), Subsystem::B).unwrap();
            let spec = linalg::eig_hermitian(&linalg::hermitize(&pt_b)).unwrap();
            let b: f64 = spec
                .eigenvalues
                .iter()
                .filter(|&&l| l < 0.0)
                .map(|l| -l)
                .sum();
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn log_negativity_reference_values() {
        let product = DensityMatrix::basis_state(9, 4).unwrap();
        assert!(log_negativity(&product).unwrap() < 1e-12);

        let bell = pure9(&[
            (product_index(0, 1), C64::ONE),
            (product_index(1, 0), C64::ONE),
        ]);
        assert!((log_negativity(&bell).unwrap() - 1.0).abs() < 1e-10);

        let ghz = pure9(&[
            (product_index(0, 0), C64::ONE),
            (product_index(1, 1), C64::ONE),
            (product_index(2, 2), C64::ONE),
        ]);
        assert!((log_negativity(&ghz).unwrap() - 3f64.log2()).abs() < 1e-10);
    }

    #[test]
    fn log_negativity_ignores_local_unitaries() {
        let mut rng = ChaCha12Rng::seed_from_u64(14);
        let states = [
            pure9(&[
                (product_index(0, 1), C64::ONE),
                (product_index(1, 0), C64::ONE),
            ]),
            random_pure(&mut rng, 9),
            random_mixed(&mut rng, 9),
        ];
        for rho in &states {
            let u =
                linalg::tensor_product(&random_unitary(&mut rng, 3), &random_unitary(&mut rng, 3));
            let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
            let before = log_negativity(rho).unwrap();
            let after = log_negativity(&rotated).unwrap();
            assert!(
                (before - after).abs() < 1e-9,
                "local unitary moved LN: {before} -> {after}"
            );
        }
    }

    #[test]
    fn trace_distance_reference_values() {
        let a = DensityMatrix::basis_state(9, 0).unwrap();
        assert!(trace_distance(&a, &a).unwrap() < 1e-14);

        let b = DensityMatrix::basis_state(9, 5).unwrap();
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);

        // diag(0.6, 0.4) against diag(0.4, 0.6) padded into 9 dimensions.
        let p = DensityMatrix::new(CMatrix::from_fn(9, 9, |i, j| match (i, j) {
            (0, 0) => C64::new(0.6, 0.0),
            (1, 1) => C64::new(0.4, 0.0),
            _ => C64::ZERO,
        }))
        .unwrap();
        let q = DensityMatrix::new(CMatrix::from_fn(9, 9, |i, j| match (i, j) {
            (0, 0) => C64::new(0.4, 0.0),
            (1, 1) => C64::new(0.6, 0.0),
            _ => C64::ZERO,
        }))
        .unwrap();
        assert!((trace_distance(&p, &q).unwrap() - 0.2).abs() < 1e-12);

        let small = DensityMatrix::basis_state(4, 0).unwrap();
        assert!(trace_distance(&a, &small).is_err());
    }

    #[test]
    fn trace_distance_is_symmetric() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let a = random_mixed(&mut rng, 9);
        let b = random_mixed(&mut rng, 9);
        let ab = trace_distance(&a, &b).unwrap();
        let ba = trace_distance(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-13);
        assert!(ab > 0.0);
    }

    #[test]
    fn fidelity_reference_values() {
        let a = DensityMatrix::basis_state(9, 2).unwrap();
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);

        let b = DensityMatrix::basis_state(9, 7).unwrap();
        assert!(fidelity(&a, &b).unwrap() < 1e-12);

        let small = DensityMatrix::basis_state(4, 0).unwrap();
        assert!(fidelity(&a, &small).is_err());
    }

    #[test]
    fn fidelity_pure_state_shortcut_is_an_oracle() {
        // For pure rho the general formula collapses to <psi| sigma |psi>.
        // A pure state is rank deficient, and the square root amplifies its
        // numerically-zero eigenvalues to sqrt(eps) ~ 1e-8; the comparison
        // cannot be tighter than that floor.
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..5 {
            let psi = random_pure(&mut rng, 9);
            let sigma = random_mixed(&mut rng, 9);
            let general = fidelity(&psi, &sigma).unwrap();
            let shortcut = (psi.matrix() * sigma.matrix()).trace().re;
            assert!(
                (general - shortcut).abs() < 5e-8,
                "pure shortcut {shortcut} vs general {general}"
            );
        }
    }

    #[test]
    fn fidelity_is_symmetric() {
        let mut rng = ChaCha12Rng::seed_from_u64(55);
        for _ in 0..5 {
            let a = random_mixed(&mut rng, 9);
            let b = random_mixed(&mut rng, 9);
            let ab = fidelity(&a, &b).unwrap();
            let ba = fidelity(&b, &a).unwrap();
            assert!((ab - ba).abs() < 1e-9, "asymmetry {ab} vs {ba}");
        }
    }

    #[test]
    fn fuchs_van_de_graaf_inequalities_hold() {
        let mut rng = ChaCha12Rng::seed_from_u64(77);
        for k in 0..200 {
            let a = if k % 3 == 0 {
                random_pure(&mut rng, 9)
            } else {
                random_mixed(&mut rng, 9)
            };
            let b = if k % 4 == 0 {
                random_pure(&mut rng, 9)
            } else {
                random_mixed(&mut rng, 9)
            };
            let d = trace_distance(&a, &b).unwrap();
            let f = fidelity(&a, &b).unwrap();
            assert!(1.0 - f.sqrt() <= d + 1e-8, "lower bound broken at pair {k}");
            assert!(
                d <= (1.0 - f).sqrt() + 1e-8,
                "upper bound broken at pair {k}"
            );
        }
    }

    #[test]
    fn series_tracks_a_dissipative_trajectory() {
        let p = CircuitParams::new(1.0, 100.0, 0.2, 10).unwrap();
        let sys = composite_hamiltonian(&p).unwrap();
        let b = BathParams::defaults_for(sys.omega01);
        let channels = vec![
            bath::jump_channels(&sys, BathIndex::One, &b),
            bath::jump_channels(&sys, BathIndex::Two, &b),
        ];
        let rho0 = DensityMatrix::basis_state(9, 0).unwrap();
        let traj =
            evolve_sampled(&rho0, &sys, &channels, 0.5, 1e-3, EvolveMode::Lindblad, 25).unwrap();
        let series = MeasureSeries::from_trajectory(&traj).unwrap();

        assert_eq!(series.len(), traj.len());
        assert_eq!(series.tau, traj.tau);
        assert!((series.fidelity_to_initial[0] - 1.0).abs() < 1e-9);
        assert!(series.trace_distance_to_initial[0] < 1e-9);
        for i in 0..series.len() {
            let slack = 1e-9;
            assert!(series.l1_coherence[i] >= -slack && series.l1_coherence[i] <= 1.0 + slack);
            assert!(series.log_negativity[i] >= -slack);
            assert!(
                series.trace_distance_to_initial[i] >= -slack
                    && series.trace_distance_to_initial[i] <= 1.0 + slack
            );
            assert!(
                series.fidelity_to_initial[i] >= -slack
                    && series.fidelity_to_initial[i] <= 1.0 + slack
            );
        }
        // The damped system leaves its initial state.
        assert!(*series.trace_distance_to_initial.last().unwrap() > 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn functional_ranges_hold(seed in 0u64..10_000) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_mixed(&mut rng, 9);
            let b = random_pure(&mut rng, 9);
            let slack = 1e-9;
            for rho in [&a, &b] {
                let c = l1_coherence(rho);
                prop_assert!((-slack..=1.0 + slack).contains(&c));
                prop_assert!(negativity(rho).unwrap() >= 0.0);
            }
            let d = trace_distance(&a, &b).unwrap();
            prop_assert!((-slack..=1.0 + slack).contains(&d));
            let f = fidelity(&a, &b).unwrap();
            prop_assert!((-slack..=1.0 + slack).contains(&f));
        }
    }
}
