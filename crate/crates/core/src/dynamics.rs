//! Time evolution of the open system: validated density matrices, the
//! master-equation right-hand side, a fixed-step integrator, the vectorized
//! superoperator, and a direct steady-state solver.
//!
//! Integration runs in the system eigenbasis, where the generator splits into
//! an entrywise linear part (coherent phases plus damping) and a population
//! feed matrix. That form costs `O(d^2)` per derivative instead of the
//! `O(d^3)` of dense commutators and keeps the trace conserved by
//! construction. States handed back to callers are rotated to the product
//! basis.

use nalgebra::DVector;

use crate::bath::{ChannelKind, JumpChannel};
use crate::circuit::CompositeSystem;
use crate::linalg::{self, CMatrix};
use crate::{Error, Result, C64};

/// Admissibility tolerances for [`DensityMatrix::new`].
const HERMITICITY_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-9;
const EIGENVALUE_FLOOR: f64 = -1e-8;

/// Trace drift that aborts integration as unstable.
const INSTABILITY_TOL: f64 = 1e-6;

/// Residual bound the steady-state solver must reach.
const RESIDUAL_TOL: f64 = 1e-9;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// within tolerance.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking hermiticity, trace, and positivity.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "density matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_dev = linalg::hermitian_deviation(&mat);
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { dev: herm_dev });
        }
        let trace = mat.trace();
        let trace_dev = (trace.re - 1.0).hypot(trace.im);
        if trace_dev > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace deviates from one by {trace_dev:.3e}"
            )));
        }
        let spec = linalg::eig_hermitian(&linalg::hermitize(&mat))?;
        let min_eig = spec.eigenvalues[0];
        if min_eig < EIGENVALUE_FLOOR {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e} is below the positivity floor"
            )));
        }
        Ok(Self { mat })
    }

    /// Projector onto a pure state; amplitudes are normalized first.
    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sq > 1e-24) {
            return Err(Error::InvalidState(
                "pure-state amplitudes have vanishing norm".into(),
            ));
        }
        let d = amplitudes.len();
        let mat = CMatrix::from_fn(d, d, |i, j| amplitudes[i] * amplitudes[j].conj() / norm_sq);
        Ok(Self {
            mat: linalg::hermitize(&mat),
        })
    }

    /// The computational basis state `|index><index|`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::ShapeMismatch(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::ZERO; dim];
        amps[index] = C64::ONE;
        Self::from_pure(&amps)
    }

    /// The maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension { min: 1, got: 0 });
        }
        let w = C64::new(1.0 / dim as f64, 0.0);
        Ok(Self {
            mat: CMatrix::from_diagonal_element(dim, dim, w),
        })
    }

    /// Wraps evolution output without re-validating; the integrator
    /// re-Hermitizes every step, so only rounding-level defects are possible.
    pub(crate) fn from_evolution(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// `|tr rho - 1|`.
    pub fn trace_deviation(&self) -> f64 {
        let t = self.mat.trace();
        (t.re - 1.0).hypot(t.im)
    }

    /// Smallest eigenvalue; negative values measure positivity loss.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let spec = linalg::eig_hermitian(&linalg::hermitize(&self.mat))?;
        Ok(spec.eigenvalues[0])
    }

    /// `tr(rho A)`.
    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (op * &self.mat).trace()
    }
}

/// Per-sample integration health record.
#[derive(Debug, Clone, Copy)]
pub struct StateDiagnostics {
    /// `|tr rho - 1|` at the sample.
    pub trace_dev: f64,
    /// Smallest eigenvalue at the sample.
    pub min_eig: f64,
}

/// Evolution output: times, states in the product basis, diagnostics,
/// index-aligned. Always holds at least the initial and final samples.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub tau: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub diagnostics: Vec<StateDiagnostics>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds >= 2 samples")
    }

    pub fn final_tau(&self) -> f64 {
        *self.tau.last().expect("trajectory holds >= 2 samples")
    }
}

/// Which generator to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolveMode {
    /// Full dissipative generator.
    Lindblad,
    /// Commutator part only, propagated exactly; channels are ignored.
    Unitary,
}

/// Full right-hand side `-i[H, rho] + sum_k D_k(rho)` in the product basis.
///
/// This is the reference form of the generator. The integrator uses an
/// algebraically equal eigenbasis form instead; tests hold the two together.
pub fn gksl_rhs(
    rho: &CMatrix,
    system: &CompositeSystem,
    channel_sets: &[Vec<JumpChannel>],
) -> CMatrix {
    let h = &system.h_s;
    let comm = h * rho - rho * h;
    let mut out = comm.map(|z| z * C64::new(0.0, -1.0));
    for set in channel_sets {
        out += crate::bath::dissipator(rho, set);
    }
    out
}

/// Entrywise generator in the eigenbasis.
///
/// Every jump operator is rank one between eigenstates, so the dissipator
/// acts exactly as damping `-(Lambda_a + Lambda_b)/2` on each entry plus a
/// population feed into the diagonal. `outflow` is derived as the column sums
/// of `gains`, which ties the gain and loss bookkeeping to one source and
/// conserves the trace identically.
struct EigenGenerator {
    dim: usize,
    /// Linear coefficient per entry, row-major over `(a, b)`.
    coef: Vec<C64>,
    /// `gains[a * dim + v]`: population flow rate from `v` into `a`.
    gains: Vec<f64>,
}

impl EigenGenerator {
    fn new(eigenvalues: &[f64], channel_sets: &[Vec<JumpChannel>], dissipative: bool) -> Self {
        let dim = eigenvalues.len();
        let mut gains = vec![0.0; dim * dim];
        if dissipative {
            for ch in channel_sets.iter().flatten() {
                let w2 = ch.amp.norm_sqr();
                match ch.kind {
                    ChannelKind::Transition => {
                        gains[ch.lower * dim + ch.upper] += ch.rate_down * w2;
                        gains[ch.upper * dim + ch.lower] += ch.rate_up * w2;
                    }
                    ChannelKind::Dephasing => {
                        gains[ch.lower * dim + ch.lower] += ch.rate_down * w2;
                    }
                }
            }
        }
        let mut outflow = vec![0.0; dim];
        for (v, out) in outflow.iter_mut().enumerate() {
            *out = (0..dim).map(|a| gains[a * dim + v]).sum();
        }
        let mut coef = vec![C64::ZERO; dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                coef[a * dim + b] = C64::new(
                    -0.5 * (outflow[a] + outflow[b]),
                    -(eigenvalues[a] - eigenvalues[b]),
                );
            }
        }
        Self { dim, coef, gains }
    }

    fn rhs(&self, rho: &[C64], out: &mut [C64]) {
        for ((o, c), r) in out.iter_mut().zip(&self.coef).zip(rho) {
            *o = c * r;
        }
        let d = self.dim;
        for a in 0..d {
            let row = &self.gains[a * d..(a + 1) * d];
            let mut gain = C64::ZERO;
            for (v, w) in row.iter().enumerate() {
                if *w != 0.0 {
                    gain += rho[v * d + v].scale(*w);
                }
            }
            out[a * d + a] += gain;
        }
    }
}

struct Rk4Buffers {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    stage: Vec<C64>,
}

impl Rk4Buffers {
    fn new(n: usize) -> Self {
        Self {
            k1: vec![C64::ZERO; n],
            k2: vec![C64::ZERO; n],
            k3: vec![C64::ZERO; n],
            k4: vec![C64::ZERO; n],
            stage: vec![C64::ZERO; n],
        }
    }
}

fn rk4_step(gen: &EigenGenerator, rho: &mut [C64], dt: f64, b: &mut Rk4Buffers) {
    let n = rho.len();
    gen.rhs(rho, &mut b.k1);
    for i in 0..n {
        b.stage[i] = rho[i] + b.k1[i].scale(0.5 * dt);
    }
    gen.rhs(&b.stage, &mut b.k2);
    for i in 0..n {
        b.stage[i] = rho[i] + b.k2[i].scale(0.5 * dt);
    }
    gen.rhs(&b.stage, &mut b.k3);
    for i in 0..n {
        b.stage[i] = rho[i] + b.k3[i].scale(dt);
    }
    gen.rhs(&b.stage, &mut b.k4);
    let w = dt / 6.0;
    for i in 0..n {
        rho[i] += (b.k1[i] + (b.k2[i] + b.k3[i]).scale(2.0) + b.k4[i]).scale(w);
    }
}

fn to_flat(m: &CMatrix, d: usize) -> Vec<C64> {
    let mut flat = vec![C64::ZERO; d * d];
    for a in 0..d {
        for b in 0..d {
            flat[a * d + b] = m[(a, b)];
        }
    }
    flat
}

fn from_flat(flat: &[C64], d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| flat[i * d + j])
}

fn hermitize_flat(flat: &mut [C64], d: usize) {
    for a in 0..d {
        flat[a * d + a].im = 0.0;
        for b in (a + 1)..d {
            let avg = (flat[a * d + b] + flat[b * d + a].conj()).scale(0.5);
            flat[a * d + b] = avg;
            flat[b * d + a] = avg.conj();
        }
    }
}

fn trace_dev_flat(flat: &[C64], d: usize) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for a in 0..d {
        re += flat[a * d + a].re;
        im += flat[a * d + a].im;
    }
    (re - 1.0).hypot(im)
}

/// Integrates the master equation with every step retained.
///
/// `tau` runs over multiples of `dt` up to the multiple nearest `t_max`.
/// Lindblad mode uses classic fourth-order Runge-Kutta with the state
/// re-Hermitized after each step; unitary mode evaluates the exact spectral
/// propagator at each sample, so it carries no step error and conserves
/// eigenbasis populations identically. Integration aborts with
/// [`Error::StepInstability`] once the trace drifts past `1e-6`.
pub fn evolve(
    rho0: &DensityMatrix,
    system: &CompositeSystem,
    channel_sets: &[Vec<JumpChannel>],
    t_max: f64,
    dt: f64,
    mode: EvolveMode,
) -> Result<Trajectory> {
    evolve_sampled(rho0, system, channel_sets, t_max, dt, mode, 1)
}

/// [`evolve`] retaining every `store_stride`-th step (the final step always).
///
/// Long horizons at fine steps produce far more states than anyone plots;
/// the stride bounds memory without touching the integration itself.
pub fn evolve_sampled(
    rho0: &DensityMatrix,
    system: &CompositeSystem,
    channel_sets: &[Vec<JumpChannel>],
    t_max: f64,
    dt: f64,
    mode: EvolveMode,
    store_stride: usize,
) -> Result<Trajectory> {
    let d = system.dim();
    if rho0.dim() != d {
        return Err(Error::ShapeMismatch(format!(
            "state dimension {} does not match system dimension {}",
            rho0.dim(),
            d
        )));
    }
    if !(t_max.is_finite() && t_max > 0.0 && dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(
            "t_max and dt must be finite and positive".into(),
        ));
    }
    if dt > t_max {
        return Err(Error::InvalidParameter(format!(
            "dt = {dt} exceeds t_max = {t_max}; nothing to integrate"
        )));
    }
    if store_stride == 0 {
        return Err(Error::InvalidParameter("store_stride must be >= 1".into()));
    }

    let ev = &system.spectrum.eigenvalues;
    let v = &system.spectrum.eigenvectors;
    let n_steps = (t_max / dt).round().max(1.0) as usize;

    if mode == EvolveMode::Lindblad {
        let omega_max = channel_sets
            .iter()
            .flatten()
            .map(|c| c.omega)
            .fold(0.0f64, f64::max);
        let scale = if omega_max > 0.0 {
            omega_max
        } else {
            ev[d - 1] - ev[0]
        };
        if dt * scale > 0.05 {
            log::warn!(
                "dt = {dt:.3e} is coarse against the fastest frequency {scale:.3}; \
                 step error may be visible"
            );
        }
    }

    let mut flat = to_flat(&(v.adjoint() * rho0.matrix() * v), d);
    hermitize_flat(&mut flat, d);

    let capacity = n_steps / store_stride + 2;
    let mut tau = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut diagnostics = Vec::with_capacity(capacity);

    let mut store = |flat: &[C64], tau_k: f64| -> Result<()> {
        let rho_p = linalg::hermitize(&(v * from_flat(flat, d) * v.adjoint()));
        let spec = linalg::eig_hermitian(&rho_p)?;
        diagnostics.push(StateDiagnostics {
            trace_dev: trace_dev_flat(flat, d),
            min_eig: spec.eigenvalues[0],
        });
        states.push(DensityMatrix::from_evolution(rho_p));
        tau.push(tau_k);
        Ok(())
    };

    match mode {
        EvolveMode::Unitary => {
            let mut k = 0usize;
            loop {
                let tau_k = k as f64 * dt;
                let mut flat_k = flat.clone();
                for a in 0..d {
                    for b in 0..d {
                        if a != b {
                            let phase = C64::from_polar(1.0, -(ev[a] - ev[b]) * tau_k);
                            flat_k[a * d + b] *= phase;
                        }
                    }
                }
                store(&flat_k, tau_k)?;
                if k == n_steps {
                    break;
                }
                k = (k + store_stride).min(n_steps);
            }
        }
        EvolveMode::Lindblad => {
            let gen = EigenGenerator::new(ev, channel_sets, true);
            let mut buf = Rk4Buffers::new(d * d);
            store(&flat, 0.0)?;
            for k in 1..=n_steps {
                rk4_step(&gen, &mut flat, dt, &mut buf);
                hermitize_flat(&mut flat, d);
                let dev = trace_dev_flat(&flat, d);
                if dev > INSTABILITY_TOL {
                    return Err(Error::StepInstability {
                        tau: k as f64 * dt,
                        dev,
                    });
                }
                if k % store_stride == 0 || k == n_steps {
                    store(&flat, k as f64 * dt)?;
                }
            }
        }
    }

    Ok(Trajectory {
        tau,
        states,
        diagnostics,
    })
}

/// The generator as a dense matrix on column-stacked states,
/// `L vec(rho) = vec(d rho / d tau)`.
pub fn liouvillian_superoperator(
    system: &CompositeSystem,
    channel_sets: &[Vec<JumpChannel>],
) -> CMatrix {
    let d = system.dim();
    let eye = CMatrix::identity(d, d);
    let h = &system.h_s;
    let mut l = (linalg::tensor_product(&eye, h) - linalg::tensor_product(&h.transpose(), &eye))
        .map(|z| z * C64::new(0.0, -1.0));

    let add_jump = |l: &mut CMatrix, op: &CMatrix, rate: f64| {
        if rate == 0.0 {
            return;
        }
        let gram = op.adjoint() * op;
        let jump = linalg::tensor_product(&op.conjugate(), op);
        let anti =
            linalg::tensor_product(&eye, &gram) + linalg::tensor_product(&gram.transpose(), &eye);
        *l += jump.scale(rate) - anti.scale(0.5 * rate);
    };

    for ch in channel_sets.iter().flatten() {
        add_jump(&mut l, &ch.op, ch.rate_down);
        if ch.kind == ChannelKind::Transition {
            add_jump(&mut l, &ch.op.adjoint(), ch.rate_up);
        }
    }
    l
}

/// Thermal state `e^{-beta H} / Z`.
pub fn gibbs_state(h: &CMatrix, beta: f64) -> Result<DensityMatrix> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter(
            "inverse temperature must be finite and positive".into(),
        ));
    }
    if !linalg::is_hermitian(h, 1e-10) {
        return Err(Error::NotHermitian {
            dev: linalg::hermitian_deviation(h),
        });
    }
    // Shift by the ground energy before exponentiating so Z stays O(d).
    let spec = linalg::eig_hermitian(h)?;
    let e0 = spec.eigenvalues[0];
    let shifted = h - CMatrix::from_diagonal_element(h.nrows(), h.ncols(), C64::new(e0, 0.0));
    let w = linalg::expm(&shifted.map(|z| z * C64::new(-beta, 0.0)));
    let z = w.trace().re;
    DensityMatrix::new(linalg::hermitize(&w.map(|x| x / z)))
}

/// Solves `L vec(rho) = 0` with unit trace directly.
///
/// The kernel dimension is checked first through the spectrum of `L^H L`;
/// more than one zero singular value means the stationary state is not unique
/// and the solver refuses rather than return an arbitrary element. Otherwise
/// the trace-augmented normal system `(L^H L + t t^H) x = t` with
/// `t = vec(I)` is solved and refined until the generator residual drops to
/// `1e-9`.
pub fn steady_state(
    system: &CompositeSystem,
    channel_sets: &[Vec<JumpChannel>],
) -> Result<DensityMatrix> {
    let dissipative = channel_sets
        .iter()
        .flatten()
        .any(|c| c.rate_down > 0.0 || c.rate_up > 0.0);
    if !dissipative {
        return Err(Error::InvalidParameter(
            "no dissipative channel present; every state of the closed system is stationary \
             up to phases"
                .into(),
        ));
    }

    let d = system.dim();
    let n = d * d;
    let l = liouvillian_superoperator(system, channel_sets);
    let lhl = linalg::hermitize(&(l.adjoint() * &l));

    let spec = linalg::eig_hermitian(&lhl)?;
    let lam_max = spec.eigenvalues[n - 1].max(0.0);
    let threshold = lam_max * 1e-12 + f64::MIN_POSITIVE;
    let kernel_dim = spec
        .eigenvalues
        .iter()
        .filter(|&&lam| lam < threshold)
        .count();
    if kernel_dim > 1 {
        return Err(Error::DegenerateSteadyState(kernel_dim));
    }

    let trace_vec = DVector::<C64>::from_fn(n, |i, _| {
        if i % (d + 1) == 0 {
            C64::ONE
        } else {
            C64::ZERO
        }
    });
    let mut m = lhl;
    for i in (0..n).step_by(d + 1) {
        for j in (0..n).step_by(d + 1) {
            m[(i, j)] += C64::ONE;
        }
    }

    let lu = m.clone().lu();
    let mut x = match lu.solve(&trace_vec) {
        Some(x) => x,
        None => return Err(Error::SteadyStateResidual(f64::INFINITY)),
    };

    let mut residual = f64::INFINITY;
    for _ in 0..5 {
        let mut rho = CMatrix::from_fn(d, d, |i, j| x[j * d + i]);
        rho = linalg::hermitize(&rho);
        let tr = rho.trace().re;
        if tr.abs() < 1e-12 {
            break;
        }
        rho = rho.map(|z| z / tr);
        residual = linalg::max_abs(&gksl_rhs(&rho, system, channel_sets));
        if residual <= RESIDUAL_TOL {
            return DensityMatrix::new(rho);
        }
        let r = &trace_vec - &m * &x;
        match lu.solve(&r) {
            Some(dx) => x += dx,
            None => break,
        }
    }
    Err(Error::SteadyStateResidual(residual))
}
