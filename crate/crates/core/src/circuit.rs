//! Transmon circuit Hamiltonians and the coupled two-qutrit system.
//!
//! Each transmon is modeled in an extended Fock space as a harmonic
//! oscillator of frequency `omega0 = sqrt(8 E_C E_J)` plus the quartic
//! correction `-(E_C/12)(c^† + c)^4`. Its three lowest eigenstates form the
//! qutrit; the charge number operator `n = i n_zpf (c^† - c)` projected onto
//! those states mediates both the transmon-transmon coupling and the bath
//! coupling.
//!
//! Working units are `hbar = 1` and energies in multiples of the charging
//! energy, so times are measured in inverse charging energies.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Spectrum};
use crate::C64;

/// Parameters of one transmon pair. Both transmons are identical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    /// Charging energy. The working unit of energy, normally `1.0`.
    pub e_c: f64,
    /// Josephson energy in the same unit.
    pub e_j: f64,
    /// Transmon-transmon coupling strength (angular frequency).
    pub gamma: f64,
    /// Fock-space truncation used before projecting to three levels.
    pub fock_dim: usize,
    /// How the three-level basis is obtained.
    pub basis: BasisMode,
}

/// Route from the extended Fock space to the three-level basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    /// Exact diagonalization of the truncated transmon Hamiltonian.
    Numeric,
    /// First-order perturbation theory in the quartic term: Fock states as
    /// eigenstates, energies `omega0 (n + 1/2) - (e_c/12)(6n^2 + 6n + 3)`.
    Perturbative,
}

impl CircuitParams {
    /// Validates and builds parameters with the numeric basis route.
    pub fn new(e_c: f64, e_j: f64, gamma: f64, fock_dim: usize) -> Result<Self> {
        if !(e_c > 0.0) || !e_c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "e_c must be > 0, got {e_c}"
            )));
        }
        if !(e_j > 0.0) || !e_j.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "e_j must be > 0, got {e_j}"
            )));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be >= 0, got {gamma}"
            )));
        }
        if fock_dim < 6 {
            return Err(Error::InvalidDimension {
                min: 6,
                got: fock_dim,
            });
        }
        if e_j / e_c < 50.0 {
            log::warn!(
                "e_j/e_c = {:.1} is below the transmon regime (>= 50); results may be unreliable",
                e_j / e_c
            );
        }
        Ok(Self {
            e_c,
            e_j,
            gamma,
            fock_dim,
            basis: BasisMode::Numeric,
        })
    }

    /// Same parameters with an explicit basis route.
    pub fn with_basis(mut self, basis: BasisMode) -> Self {
        self.basis = basis;
        self
    }

    /// Harmonic frequency `sqrt(8 e_c e_j)` (with `hbar = 1`).
    pub fn omega0(&self) -> f64 {
        (8.0 * self.e_c * self.e_j).sqrt()
    }

    /// Zero-point charge fluctuation `(e_j / 32 e_c)^(1/4)`.
    pub fn n_zpf(&self) -> f64 {
        (self.e_j / (32.0 * self.e_c)).powf(0.25)
    }

    /// Zero-point phase fluctuation `(2 e_c / e_j)^(1/4)`.
    pub fn phi_zpf(&self) -> f64 {
        (2.0 * self.e_c / self.e_j).powf(0.25)
    }
}

/// Three-level data of a single transmon.
#[derive(Debug, Clone)]
pub struct TransmonBasis {
    /// Lowest three eigenenergies, strictly ascending.
    pub energies: [f64; 3],
    /// Charge number operator projected onto the three lowest eigenstates.
    pub charge_op: CMatrix,
    /// `(E2 - E1) - (E1 - E0)`; close to `-e_c` in the transmon regime.
    pub anharmonicity: f64,
}

/// The assembled two-transmon system (9-dimensional in production; tests may
/// build smaller synthetic instances directly from the public fields).
#[derive(Debug, Clone)]
pub struct CompositeSystem {
    /// System Hamiltonian in the product basis `|ij>`, transmon 1 slow.
    pub h_s: CMatrix,
    /// Eigendecomposition of `h_s`, ascending.
    pub spectrum: Spectrum,
    /// Charge operator of transmon 1 in the eigenbasis of `h_s`.
    pub q1: CMatrix,
    /// Charge operator of transmon 2 in the eigenbasis of `h_s`.
    pub q2: CMatrix,
    /// Gap between the two lowest composite levels; the bath reference
    /// frequency.
    pub omega01: f64,
}

impl CompositeSystem {
    pub fn dim(&self) -> usize {
        self.h_s.nrows()
    }
}

/// Harmonic part `omega0 (c^† c + 1/2)` in the truncated Fock space.
fn harmonic_term(params: &CircuitParams) -> CMatrix {
    let dim = params.fock_dim;
    let omega0 = params.omega0();
    CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            C64::new(omega0 * (i as f64 + 0.5), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Quartic correction `-(e_c/12)(c^† + c)^4` in the truncated Fock space.
/// Evaluated after truncation, so only the low-lying levels are converged.
fn quartic_term(params: &CircuitParams) -> CMatrix {
    let a = linalg::ladder_operator(params.fock_dim).expect("fock_dim >= 6");
    let x = &a + a.adjoint();
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    x4.scale(-params.e_c / 12.0)
}

/// Charge number operator `i n_zpf (c^† - c)` in the truncated Fock space.
fn charge_number_operator(params: &CircuitParams) -> CMatrix {
    let a = linalg::ladder_operator(params.fock_dim).expect("fock_dim >= 6");
    (a.adjoint() - &a).map(|z| z * C64::new(0.0, params.n_zpf()))
}

/// Transmon Hamiltonian in the number basis of the extended Fock space.
/// The constant Josephson offset is dropped.
pub fn single_transmon_hamiltonian(params: &CircuitParams) -> CMatrix {
    harmonic_term(params) + quartic_term(params)
}

/// Lowest three levels sorted out of the extended Fock space.
///
/// The numeric route diagonalizes the truncated Hamiltonian and projects the
/// charge operator onto the three lowest eigenstates; it also probes
/// `fock_dim + 2` and logs a warning when the retained energies have not
/// converged to `1e-6 e_c`. The perturbative route uses first-order energies
/// and bare Fock states.
pub fn transmon_eigenbasis(params: &CircuitParams) -> Result<TransmonBasis> {
    match params.basis {
        BasisMode::Perturbative => Ok(perturbative_basis(params)),
        BasisMode::Numeric => numeric_basis(params),
    }
}

fn perturbative_basis(params: &CircuitParams) -> TransmonBasis {
    let omega0 = params.omega0();
    let mut energies = [0.0; 3];
    for (n, e) in energies.iter_mut().enumerate() {
        let nf = n as f64;
        // First-order shift: diagonal of (c^† + c)^4 is 6n^2 + 6n + 3.
        *e = omega0 * (nf + 0.5) - params.e_c / 12.0 * (6.0 * nf * nf + 6.0 * nf + 3.0);
    }
    let n_zpf = params.n_zpf();
    let mut charge_op = CMatrix::zeros(3, 3);
    charge_op[(0, 1)] = C64::new(0.0, -n_zpf);
    charge_op[(1, 0)] = C64::new(0.0, n_zpf);
    charge_op[(1, 2)] = C64::new(0.0, -n_zpf * 2f64.sqrt());
    charge_op[(2, 1)] = C64::new(0.0, n_zpf * 2f64.sqrt());
    TransmonBasis {
        energies,
        charge_op,
        anharmonicity: -params.e_c,
    }
}

fn lowest_three(params: &CircuitParams) -> Result<([f64; 3], CMatrix)> {
    let spec = linalg::eig_hermitian(&single_transmon_hamiltonian(params))?;
    let energies = [
        spec.eigenvalues[0],
        spec.eigenvalues[1],
        spec.eigenvalues[2],
    ];
    let vectors = CMatrix::from_fn(params.fock_dim, 3, |i, j| spec.eigenvectors[(i, j)]);
    Ok((energies, vectors))
}

fn numeric_basis(params: &CircuitParams) -> Result<TransmonBasis> {
    let (energies, vectors) = lowest_three(params)?;

    let probe = CircuitParams {
        fock_dim: params.fock_dim + 2,
        ..*params
    };
    let (probe_energies, _) = lowest_three(&probe)?;
    let drift = energies
        .iter()
        .zip(probe_energies.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if drift > 1e-6 * params.e_c {
        log::warn!(
            "fock truncation not converged: lowest energies move by {:.2e} when \
             fock_dim goes {} -> {}",
            drift,
            params.fock_dim,
            params.fock_dim + 2
        );
    }

    let charge_op = vectors.adjoint() * charge_number_operator(params) * &vectors;
    Ok(TransmonBasis {
        energies,
        charge_op: linalg::hermitize(&charge_op),
        anharmonicity: (energies[2] - energies[1]) - (energies[1] - energies[0]),
    })
}

/// Assembles `H_s = h ⊗ I + I ⊗ h + gamma n ⊗ n` for two identical
/// transmons, diagonalizes it, and expresses both charge operators in the
/// resulting eigenbasis.
pub fn composite_hamiltonian(params: &CircuitParams) -> Result<CompositeSystem> {
    let tb = transmon_eigenbasis(params)?;
    let h_local = CMatrix::from_fn(3, 3, |i, j| {
        if i == j {
            C64::new(tb.energies[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let eye3 = CMatrix::identity(3, 3);
    let n_op = &tb.charge_op;

    let h_s = linalg::tensor_product(&h_local, &eye3)
        + linalg::tensor_product(&eye3, &h_local)
        + linalg::tensor_product(n_op, n_op).scale(params.gamma);
    let spectrum = linalg::eig_hermitian(&h_s)?;
    let v = &spectrum.eigenvectors;

    let q1 = v.adjoint() * linalg::tensor_product(n_op, &eye3) * v;
    let q2 = v.adjoint() * linalg::tensor_product(&eye3, n_op) * v;
    let omega01 = spectrum.eigenvalues[1] - spectrum.eigenvalues[0];

    Ok(CompositeSystem {
        h_s,
        q1: linalg::hermitize(&q1),
        q2: linalg::hermitize(&q2),
        spectrum,
        omega01,
    })
}

/// Coupling strength from the capacitor network, `gamma` proportional to
/// `c_g / (c_1 c_2)`.
///
/// `unit_scale` carries the physical prefactor (four electron charges
/// squared over `hbar`) expressed in the caller's capacitance and energy
/// units; it is deliberately a parameter rather than a constant so the crate
/// stays unit-agnostic.
pub fn coupling_from_capacitances(c_g: f64, c_1: f64, c_2: f64, unit_scale: f64) -> Result<f64> {
    for (name, v) in [("c_g", c_g), ("c_1", c_1), ("c_2", c_2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name} must be > 0, got {v}"
            )));
        }
    }
    if !(unit_scale > 0.0) || !unit_scale.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "unit_scale must be > 0, got {unit_scale}"
        )));
    }
    if c_g > 0.1 * c_1.min(c_2) {
        log::warn!(
            "coupling capacitance {c_g} is not small against {c_1}, {c_2}; \
             the perturbative coupling formula degrades"
        );
    }
    Ok(unit_scale * c_g / (c_1 * c_2))
}
