//! Markovian bath model: Ohmic spectral density with a Drude-style cutoff,
//! thermal transition rates, and the jump channels that feed the dissipator.
//!
//! Each transmon couples to its own bosonic bath through its charge
//! operator. In the system eigenbasis the coupling decomposes into one jump
//! operator per eigenstate pair `(n, m)` with positive gap, weighted by the
//! charge matrix element `q_nm`, plus pure-dephasing operators on the
//! diagonal elements `q_nn` (which vanish by parity for the transmon).

use crate::circuit::CompositeSystem;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::C64;

/// Channels with `|q_nm|` at or below this threshold are dropped; they are
/// numerically indistinguishable from zero and would only add dead weight.
pub const Q_TOL: f64 = 1e-10;

/// Parameters of one thermal bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Overall coupling rate scale of the Ohmic density.
    pub kappa: f64,
    /// Inverse temperature (with Boltzmann's constant absorbed).
    pub beta: f64,
    /// Cutoff frequency of the `[1 + (omega/cutoff)^2]^-2` rolloff.
    pub cutoff: f64,
}

impl BathParams {
    pub fn new(kappa: f64, beta: f64, cutoff: f64) -> Result<Self> {
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "kappa must be >= 0, got {kappa}"
            )));
        }
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be > 0, got {beta}"
            )));
        }
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cutoff must be > 0, got {cutoff}"
            )));
        }
        Ok(Self {
            kappa,
            beta,
            cutoff,
        })
    }

    /// Default bath for a system whose reference gap is `omega01`:
    /// `kappa = omega01/20`, `beta = 5/omega01`, `cutoff = 50 omega01`.
    pub fn defaults_for(omega01: f64) -> Self {
        Self {
            kappa: omega01 / 20.0,
            beta: 5.0 / omega01,
            cutoff: 50.0 * omega01,
        }
    }
}

/// Whose bath: the first or the second transmon's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BathIndex {
    One,
    Two,
}

/// Transition channels move population across a finite gap; dephasing
/// channels act on a single eigenstate at zero frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Transition,
    Dephasing,
}

/// One Lindblad jump channel.
///
/// For a transition channel, `op` lowers the pair (`|lower><upper|` scaled
/// by the charge element) and enters the dissipator twice: once with
/// `rate_down` and once, conjugated, with `rate_up`. A dephasing channel is
/// Hermitian and enters once with `rate_down` (`rate_up` is stored equal).
#[derive(Debug, Clone)]
pub struct JumpChannel {
    /// Transition frequency `omega_m - omega_n >= 0`; zero for dephasing.
    pub omega: f64,
    /// Jump operator in the product basis.
    pub op: CMatrix,
    /// Rate of the emission direction, `S(omega)`.
    pub rate_down: f64,
    /// Rate of the absorption direction, `S(-omega)`.
    pub rate_up: f64,
    pub kind: ChannelKind,
    /// Eigenstate index the channel decays into.
    pub lower: usize,
    /// Eigenstate index the channel decays out of (equals `lower` for
    /// dephasing).
    pub upper: usize,
    /// Charge matrix element `q_nm` in the eigenbasis.
    pub amp: C64,
}

/// Ohmic spectral density `kappa (omega/omega01) / [1 + (omega/cutoff)^2]^2`,
/// odd in `omega` by construction.
pub fn spectral_density(omega: f64, params: &BathParams, omega01: f64) -> f64 {
    let u = omega / params.cutoff;
    params.kappa * (omega / omega01) / (1.0 + u * u).powi(2)
}

/// Thermal transition rate `S(omega) = J(omega) / (1 - e^{-beta omega})`.
///
/// Positive frequencies give emission, negative give absorption, and the
/// removable singularity at zero is replaced by its analytic limit
/// `kappa / (omega01 beta)`. The denominator uses `exp_m1` so small
/// frequencies lose no precision.
pub fn transition_rate(omega: f64, params: &BathParams, omega01: f64) -> f64 {
    if omega == 0.0 {
        return params.kappa / (omega01 * params.beta);
    }
    let denom = -(-params.beta * omega).exp_m1();
    let s = spectral_density(omega, params, omega01) / denom;
    debug_assert!(s >= -1e-300, "transition rate must be nonnegative");
    s.max(0.0)
}

/// Builds the jump channels of one bath from the system eigenbasis.
///
/// One transition channel is produced per eigenpair `(n, m)` with
/// `omega_m > omega_n` and `|q_nm| > Q_TOL`, plus one dephasing channel per
/// diagonal element surviving the same threshold. Operators are conjugated
/// back into the product basis, where the rest of the crate works.
pub fn jump_channels(
    system: &CompositeSystem,
    bath_index: BathIndex,
    params: &BathParams,
) -> Vec<JumpChannel> {
    let q = match bath_index {
        BathIndex::One => &system.q1,
        BathIndex::Two => &system.q2,
    };
    let v = &system.spectrum.eigenvectors;
    let dim = system.dim();
    let omega01 = system.omega01;
    let mut channels = Vec::new();

    let embed = |n: usize, m: usize, qnm: C64| -> CMatrix {
        let mut e = CMatrix::zeros(dim, dim);
        e[(n, m)] = qnm;
        v * e * v.adjoint()
    };

    for n in 0..dim {
        for m in 0..dim {
            let omega = system.spectrum.eigenvalues[m] - system.spectrum.eigenvalues[n];
            if omega <= 0.0 {
                continue;
            }
            let qnm = q[(n, m)];
            if qnm.norm() <= Q_TOL {
                continue;
            }
            let rate_down = transition_rate(omega, params, omega01);
            if rate_down > 0.0 && rate_down / omega >= 0.1 {
                log::warn!(
                    "bath coupling is not weak: S({omega:.4}) / omega = {:.3}",
                    rate_down / omega
                );
            }
            channels.push(JumpChannel {
                omega,
                op: embed(n, m, qnm),
                rate_down,
                rate_up: transition_rate(-omega, params, omega01),
                kind: ChannelKind::Transition,
                lower: n,
                upper: m,
                amp: qnm,
            });
        }
    }

    for n in 0..dim {
        let qnn = q[(n, n)];
        if qnn.norm() <= Q_TOL {
            continue;
        }
        let rate = transition_rate(0.0, params, omega01);
        channels.push(JumpChannel {
            omega: 0.0,
            op: embed(n, n, qnn),
            rate_down: rate,
            rate_up: rate,
            kind: ChannelKind::Dephasing,
            lower: n,
            upper: n,
            amp: qnn,
        });
    }

    if channels.is_empty() {
        log::warn!("bath produced no jump channels; dynamics will be unitary");
    }
    channels
}

/// GKSL drift of one channel list:
/// `sum_ch rate_down (P rho P^† - {P^†P, rho}/2) + rate_up (P^† rho P - {P P^†, rho}/2)`
/// with the absorption term present only for transition channels.
pub fn dissipator(rho: &CMatrix, channels: &[JumpChannel]) -> CMatrix {
    let dim = rho.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    for ch in channels {
        lindblad_term(&mut out, rho, &ch.op, ch.rate_down);
        if ch.kind == ChannelKind::Transition && ch.rate_up > 0.0 {
            lindblad_term(&mut out, rho, &ch.op.adjoint(), ch.rate_up);
        }
    }
    out
}

fn lindblad_term(out: &mut CMatrix, rho: &CMatrix, op: &CMatrix, rate: f64) {
    if rate == 0.0 {
        return;
    }
    let op_dag = op.adjoint();
    let sandwich = op * rho * &op_dag;
    let gram = &op_dag * op;
    let anti = &gram * rho + rho * &gram;
    *out += (sandwich - anti.scale(0.5)).scale(rate);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{composite_hamiltonian, CircuitParams};
    use crate::linalg;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    const OMEGA01: f64 = 27.0;

    fn default_bath() -> BathParams {
        BathParams::defaults_for(OMEGA01)
    }

    fn default_system() -> CompositeSystem {
        let p = CircuitParams::new(1.0, 100.0, 0.2, 10).unwrap();
        composite_hamiltonian(&p).unwrap()
    }

    fn random_density(rng: &mut ChaCha12Rng, n: usize) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let p = &g * g.adjoint();
        let tr = p.trace();
        p.map(|z| z / tr)
    }

    #[test]
    fn params_validation() {
        assert!(BathParams::new(-0.1, 1.0, 1.0).is_err());
        assert!(BathParams::new(0.1, 0.0, 1.0).is_err());
        assert!(BathParams::new(0.1, 1.0, 0.0).is_err());
        assert!(BathParams::new(0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn defaults_follow_reference_gap() {
        let b = default_bath();
        assert_abs_diff_eq!(b.kappa, OMEGA01 / 20.0, epsilon = 0.0);
        assert_abs_diff_eq!(b.beta, 5.0 / OMEGA01, epsilon = 0.0);
        assert_abs_diff_eq!(b.cutoff, 50.0 * OMEGA01, epsilon = 0.0);
    }

    #[test]
    fn spectral_density_vanishes_at_zero_and_is_odd() {
        let b = default_bath();
        assert_eq!(spectral_density(0.0, &b, OMEGA01), 0.0);
        for omega in [0.3, 1.0, OMEGA01, 100.0] {
            let plus = spectral_density(omega, &b, OMEGA01);
            let minus = spectral_density(-omega, &b, OMEGA01);
            assert_abs_diff_eq!(plus, -minus, epsilon = 0.0);
            assert!(plus > 0.0);
        }
    }

    #[test]
    fn spectral_density_at_reference_gap() {
        // (omega01/20)/[1 + (1/50)^2]^2, evaluated independently.
        let b = default_bath();
        let expect = (OMEGA01 / 20.0) * (1.0f64 / (1.0 + 0.02 * 0.02)).powi(2);
        assert_abs_diff_eq!(
            spectral_density(OMEGA01, &b, OMEGA01),
            expect,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            spectral_density(OMEGA01, &b, OMEGA01) / OMEGA01,
            0.049960,
            epsilon = 1e-6
        );
    }

    #[test]
    fn spectral_density_decays_cubically_past_cutoff() {
        let b = default_bath();
        let ratio = spectral_density(10.0 * b.cutoff, &b, OMEGA01)
            / spectral_density(b.cutoff, &b, OMEGA01);
        // Closed form: (10/101^2) / (1/4) = 40/10201.
        assert_abs_diff_eq!(ratio, 40.0 / 10201.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_frequency_rate_is_analytic_limit() {
        let b = default_bath();
        let s0 = transition_rate(0.0, &b, OMEGA01);
        assert_abs_diff_eq!(s0, 0.01 * OMEGA01, epsilon = 1e-12);
        // The limit continues the function: tiny frequencies agree.
        for omega in [1e-9, -1e-9, 1e-6] {
            assert_abs_diff_eq!(transition_rate(omega, &b, OMEGA01), s0, epsilon = 1e-6);
        }
    }

    #[test]
    fn detailed_balance_on_frequency_grid() {
        let b = default_bath();
        for omega in [0.1, 1.0, 5.0, OMEGA01, 2.0 * OMEGA01, 100.0] {
            let down = transition_rate(omega, &b, OMEGA01);
            let up = transition_rate(-omega, &b, OMEGA01);
            let boltzmann = (-b.beta * omega).exp();
            assert_abs_diff_eq!(up / down, boltzmann, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_temperature_kills_absorption() {
        let cold = BathParams::new(1.0, 1e6, 50.0 * OMEGA01).unwrap();
        for omega in [0.1, 1.0, OMEGA01] {
            assert_abs_diff_eq!(
                transition_rate(-omega, &cold, OMEGA01),
                0.0,
                epsilon = 1e-300
            );
        }
    }

    #[test]
    fn channels_satisfy_detailed_balance_and_ordering() {
        let sys = default_system();
        let b = BathParams::defaults_for(sys.omega01);
        for idx in [BathIndex::One, BathIndex::Two] {
            let channels = jump_channels(&sys, idx, &b);
            assert!(!channels.is_empty());
            for ch in &channels {
                if ch.kind == ChannelKind::Transition {
                    assert!(ch.omega > 0.0);
                    assert!(ch.rate_down >= ch.rate_up);
                    assert!(ch.rate_up >= 0.0);
                    let boltzmann = (-b.beta * ch.omega).exp();
                    assert_abs_diff_eq!(ch.rate_up / ch.rate_down, boltzmann, epsilon = 1e-12);
                    // Weak-coupling regime at defaults.
                    assert!(ch.rate_down / ch.omega < 0.1);
                }
            }
        }
    }

    #[test]
    fn no_dephasing_channels_survive_parity() {
        let sys = default_system();
        let b = BathParams::defaults_for(sys.omega01);
        let channels = jump_channels(&sys, BathIndex::One, &b);
        let dephasing = channels
            .iter()
            .filter(|c| c.kind == ChannelKind::Dephasing)
            .count();
        assert_eq!(dephasing, 0);
    }

    #[test]
    fn channel_amplitudes_match_brute_force_elements() {
        // Independent route: rebuild <n| q |m> by sandwiching the product
        // operator between eigenvector columns.
        let p = CircuitParams::new(1.0, 100.0, 0.2, 10).unwrap();
        let sys = composite_hamiltonian(&p).unwrap();
        let b = BathParams::defaults_for(sys.omega01);
        let tb = crate::circuit::transmon_eigenbasis(&p).unwrap();
        let eye3 = CMatrix::identity(3, 3);
        let q_product = linalg::tensor_product(&tb.charge_op, &eye3);
        let v = &sys.spectrum.eigenvectors;
        for ch in jump_channels(&sys, BathIndex::One, &b) {
            let col_n = v.column(ch.lower);
            let col_m = v.column(ch.upper);
            let brute: C64 = (col_n.adjoint() * &q_product * col_m)[(0, 0)];
            assert!((brute - ch.amp).norm() < 1e-9);
        }
    }

    #[test]
    fn uncoupled_system_has_single_transmon_channels_only() {
        let p = CircuitParams::new(1.0, 100.0, 0.0, 10).unwrap();
        let sys = composite_hamiltonian(&p).unwrap();
        let b = BathParams::defaults_for(sys.omega01);
        // Map eigenindices back to product labels (gamma = 0 makes the
        // eigenvectors a permutation of the product basis).
        let v = &sys.spectrum.eigenvectors;
        let label = |k: usize| -> (usize, usize) {
            let mut best = (0, 0.0f64);
            for i in 0..9 {
                let w = v[(i, k)].norm();
                if w > best.1 {
                    best = (i, w);
                }
            }
            (best.0 / 3, best.0 % 3)
        };
        for ch in jump_channels(&sys, BathIndex::One, &b) {
            let (i1, j1) = label(ch.lower);
            let (i2, j2) = label(ch.upper);
            // Bath 1 couples through transmon 1 alone: the second index is a
            // spectator and only one index may change.
            assert_eq!(j1, j2);
            assert_ne!(i1, i2);
        }
    }

    #[test]
    fn zero_kappa_freezes_the_dissipator() {
        let sys = default_system();
        let b = BathParams::new(0.0, 5.0 / sys.omega01, 50.0 * sys.omega01).unwrap();
        let channels = jump_channels(&sys, BathIndex::One, &b);
        for ch in &channels {
            assert_eq!(ch.rate_down, 0.0);
            assert_eq!(ch.rate_up, 0.0);
        }
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let rho = random_density(&mut rng, 9);
        assert!(linalg::max_abs(&dissipator(&rho, &channels)) == 0.0);
    }

    #[test]
    fn dissipator_preserves_trace_and_hermiticity() {
        let sys = default_system();
        let b = BathParams::defaults_for(sys.omega01);
        let mut channels = jump_channels(&sys, BathIndex::One, &b);
        channels.extend(jump_channels(&sys, BathIndex::Two, &b));
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..20 {
            let rho = random_density(&mut rng, 9);
            let d = dissipator(&rho, &channels);
            assert!(d.trace().norm() < 1e-12);
            assert!(linalg::hermitian_deviation(&d) < 1e-12);
        }
    }

    #[test]
    fn single_channel_amplitude_damping_matches_hand_result() {
        // Zero-temperature two-level damping embedded in nine dimensions:
        // D(|1><1|) = S (|0><0| - |1><1|).
        let s_rate = 0.37;
        let mut op = CMatrix::zeros(9, 9);
        op[(0, 1)] = C64::new(1.0, 0.0);
        let ch = JumpChannel {
            omega: 1.0,
            op,
            rate_down: s_rate,
            rate_up: 0.0,
            kind: ChannelKind::Transition,
            lower: 0,
            upper: 1,
            amp: C64::new(1.0, 0.0),
        };
        let mut rho = CMatrix::zeros(9, 9);
        rho[(1, 1)] = C64::new(1.0, 0.0);
        let d = dissipator(&rho, &[ch]);
        let mut want = CMatrix::zeros(9, 9);
        want[(0, 0)] = C64::new(s_rate, 0.0);
        want[(1, 1)] = C64::new(-s_rate, 0.0);
        assert!(linalg::max_abs(&(d - want)) < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rates_are_ordered_for_any_thermal_bath(
            kappa in 1e-3f64..2.0,
            beta in 1e-2f64..10.0,
            cutoff in 1.0f64..100.0,
            omega in 1e-3f64..50.0,
        ) {
            let b = BathParams::new(kappa, beta, cutoff).unwrap();
            let down = transition_rate(omega, &b, OMEGA01);
            let up = transition_rate(-omega, &b, OMEGA01);
            prop_assert!(down >= up);
            prop_assert!(up >= 0.0);
        }
    }
}
