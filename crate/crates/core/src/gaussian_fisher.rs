//! Quantum Fisher information for n-mode circularly symmetric Gaussian
//! states, the quadratic-form coefficient matrix of the symmetric
//! logarithmic derivative, optimal detection modes, and quantum Cramér-Rao
//! bounds.
//!
//! The engine builds the 4n² × 4n² tensor 𝔐 = Σ⊗Σ + ¼ Ω⊗Ω with
//! 𝔐[(αβ),(γδ)] = Σ[α][γ]Σ[β][δ] + ¼ Ω[α][γ]Ω[β][δ], solves
//! 𝔐 vec(A_i) = vec(∂_iΣ) per parameter through an LU factorization (never
//! an explicit inverse), and contracts 𝓕_ij = ½ Σ_{αβ} ∂_jΣ[α][β] A_i[α][β].

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{hermitian_eig, ComplexMatrix, LuFactors, NumericsError};
use crate::scenario::ParamId;
use crate::visibility::{CovarianceState, VisibilitySet};

/// Default cap on the receiver-mode count. At the cap the tensor is a dense
/// 2304 x 2304 complex system.
pub const DEFAULT_MODE_CAP: usize = 24;

/// Index-pairing convention used to assemble 𝔐. `Standard` is verified
/// against the single-mode closed form by the validation battery; the other
/// variants exist as test hooks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairingConvention {
    /// 𝔐[(αβ),(γδ)] = Σ[α][γ]Σ[β][δ] + ¼ Ω[α][γ]Ω[β][δ]
    #[default]
    Standard,
    /// 𝔐[(αβ),(γδ)] = Σ[α][δ]Σ[β][γ] + ¼ Ω[α][δ]Ω[β][γ].
    /// Coincides with `Standard` on symmetric derivative inputs.
    SwappedIndices,
    /// Sign-flipped symplectic term (Σ⊗Σ − ¼ Ω⊗Ω). Deliberately wrong;
    /// used to prove the single-mode gate detects a bad tensor.
    FlippedSymplecticSign,
}

#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    pub max_modes: usize,
    pub pairing: PairingConvention,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            max_modes: DEFAULT_MODE_CAP,
            pairing: PairingConvention::Standard,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum FisherError {
    #[error("state is degenerate (vacuum mode); the Fisher tensor is singular")]
    DegenerateState,
    #[error("{n} modes exceed the cap of {cap}; raise --max-modes to override")]
    CapExceeded { n: usize, cap: usize },
    #[error("no parameter derivatives present")]
    NoParameters,
    #[error("parameter {parameter} not present in the state")]
    MissingParameter { parameter: String },
    #[error("QFI imaginary residue {residue:e} exceeds tolerance (suspect state input)")]
    ResidueCheck { residue: f64 },
    #[error("QFI singular along {direction}; parameter combination unidentifiable")]
    UnidentifiableParameter { direction: String },
    #[error("internal numerical check failed: {detail}")]
    Internal { detail: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Real symmetric QFI matrix over an ordered parameter list. Entries carry
/// (parameter unit)⁻².
#[derive(Debug, Clone)]
pub struct QfiMatrix {
    pub parameters: Vec<ParamId>,
    /// Row-major k x k entries.
    pub entries: Vec<f64>,
    /// Largest |imaginary part| discarded during realification, relative to
    /// the largest entry magnitude.
    pub max_imag_residue: f64,
}

impl QfiMatrix {
    pub fn dim(&self) -> usize {
        self.parameters.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.parameters.len() + j]
    }

    /// Diagonal entry for a parameter.
    pub fn diagonal(&self, p: ParamId) -> Option<f64> {
        let i = self.parameters.iter().position(|&q| q == p)?;
        Some(self.get(i, i))
    }

    /// Smallest eigenvalue (for PSD checks).
    pub fn min_eigenvalue(&self) -> f64 {
        let k = self.dim();
        let m = ComplexMatrix::from_fn(k, k, |i, j| Complex64::new(self.get(i, j), 0.0));
        hermitian_eig(&m)
            .map(|e| *e.values.last().unwrap())
            .unwrap_or(f64::NAN)
    }
}

/// Hermitian coefficient matrix of the SLD quadratic form 𝓛 = b̄† M b̄.
#[derive(Debug, Clone)]
pub struct SldMatrix {
    pub parameter: ParamId,
    pub matrix: ComplexMatrix,
    /// Hermiticity defect of the raw extraction, before symmetrization.
    pub asymmetry: f64,
}

/// Unitary mode mixing that diagonalizes an SLD, with eigenvalues and
/// per-mode occupations.
#[derive(Debug, Clone)]
pub struct DetectionModes {
    pub parameter: ParamId,
    /// Rows are detection modes over receiver modes (V M V† diagonal).
    pub v: ComplexMatrix,
    /// SLD eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// diag(V Ξ V†) — thermal occupations of the detection modes whenever
    /// the SLD commutes with the state.
    pub occupations: Vec<f64>,
}

/// Cramér-Rao bounds scaled by a sample count.
#[derive(Debug, Clone)]
pub struct Qcrb {
    pub parameters: Vec<ParamId>,
    pub samples: u64,
    /// Per-parameter standard-deviation bounds from the full matrix inverse
    /// (single-parameter case: 1/√(N F)).
    pub std_bounds: Vec<f64>,
    /// (N F)⁻¹, row-major.
    pub covariance_bound: Vec<f64>,
    /// Eigendirections dropped by the pseudo-inverse (near-singular QFI).
    pub dropped_directions: usize,
}

/// Assemble the 4n²×4n² tensor for a 2n×2n covariance matrix.
pub fn build_m_tensor(sigma: &ComplexMatrix, pairing: PairingConvention) -> ComplexMatrix {
    let d = sigma.rows(); // 2n
    let n2 = d * d;
    let omega = omega_matrix(d / 2);
    let quarter = Complex64::new(0.25, 0.0);
    let sign = match pairing {
        PairingConvention::FlippedSymplecticSign => -quarter,
        _ => quarter,
    };
    let mut m = ComplexMatrix::zeros(n2, n2);
    for alpha in 0..d {
        for beta in 0..d {
            let row = alpha * d + beta;
            for gamma in 0..d {
                for delta in 0..d {
                    let col = gamma * d + delta;
                    let val = match pairing {
                        PairingConvention::SwappedIndices => {
                            sigma[(alpha, delta)] * sigma[(beta, gamma)]
                                + sign * omega[(alpha, delta)] * omega[(beta, gamma)]
                        }
                        _ => {
                            sigma[(alpha, gamma)] * sigma[(beta, delta)]
                                + sign * omega[(alpha, gamma)] * omega[(beta, delta)]
                        }
                    };
                    m[(row, col)] = val;
                }
            }
        }
    }
    m
}

/// Ω = ⊕ iσ_y in the (b, b†) slot ordering.
fn omega_matrix(n: usize) -> ComplexMatrix {
    let mut o = ComplexMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        o[(2 * k, 2 * k + 1)] = Complex64::new(1.0, 0.0);
        o[(2 * k + 1, 2 * k)] = Complex64::new(-1.0, 0.0);
    }
    o
}

fn vec_of(m: &ComplexMatrix) -> Vec<Complex64> {
    m.data().to_vec()
}

/// Factored tensor plus per-parameter solutions A_i (reshaped 2n×2n).
struct TensorSolutions {
    params: Vec<ParamId>,
    a: Vec<ComplexMatrix>,
}

fn solve_tensor(
    state: &CovarianceState,
    opts: &EngineOptions,
) -> Result<TensorSolutions, FisherError> {
    let n = state.n_modes;
    if n > opts.max_modes {
        return Err(FisherError::CapExceeded {
            n,
            cap: opts.max_modes,
        });
    }
    if state.d_sigma.is_empty() {
        return Err(FisherError::NoParameters);
    }
    // χ = 1/2 exactly means vacuum: the tensor is singular by construction.
    if state.chi() <= 0.5 {
        return Err(FisherError::DegenerateState);
    }
    let tensor = build_m_tensor(&state.sigma, opts.pairing);
    let lu = match LuFactors::factor(&tensor) {
        Ok(lu) => lu,
        Err(NumericsError::SingularMatrix { .. }) => return Err(FisherError::DegenerateState),
        Err(e) => return Err(e.into()),
    };
    let d = 2 * n;
    let mut params = Vec::with_capacity(state.d_sigma.len());
    let mut a = Vec::with_capacity(state.d_sigma.len());
    for (p, dsig) in &state.d_sigma {
        let x = match lu.solve(&vec_of(dsig)) {
            Ok(x) => x,
            Err(NumericsError::SingularMatrix { .. }) => {
                return Err(FisherError::DegenerateState)
            }
            Err(e) => return Err(e.into()),
        };
        let mut am = ComplexMatrix::zeros(d, d);
        for alpha in 0..d {
            for beta in 0..d {
                am[(alpha, beta)] = x[alpha * d + beta];
            }
        }
        params.push(*p);
        a.push(am);
    }
    Ok(TensorSolutions { params, a })
}

/// Maximum tolerated relative imaginary residue in QFI entries.
const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// QFI matrix of a covariance state over its parameter derivatives.
pub fn qfi_matrix(state: &CovarianceState, opts: &EngineOptions) -> Result<QfiMatrix, FisherError> {
    let sols = solve_tensor(state, opts)?;
    let k = sols.params.len();
    let d = 2 * state.n_modes;
    let mut complex_entries = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for (j, (_, dsig_j)) in state.d_sigma.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for alpha in 0..d {
                for beta in 0..d {
                    acc += dsig_j[(alpha, beta)] * sols.a[i][(alpha, beta)];
                }
            }
            complex_entries[i * k + j] = acc * 0.5;
        }
    }
    let scale = complex_entries
        .iter()
        .map(|z| z.re.abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let residue = complex_entries
        .iter()
        .map(|z| z.im.abs())
        .fold(0.0f64, f64::max)
        / scale;
    if residue > IMAG_RESIDUE_TOL {
        return Err(FisherError::ResidueCheck { residue });
    }
    // realify and symmetrize
    let mut entries = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            entries[i * k + j] = 0.5 * (complex_entries[i * k + j].re + complex_entries[j * k + i].re);
        }
    }
    Ok(QfiMatrix {
        parameters: sols.params,
        entries,
        max_imag_residue: residue,
    })
}

/// Hermiticity an extracted SLD coefficient matrix is allowed to miss by
/// before it is flagged.
pub const SLD_ASYMMETRY_WARN: f64 = 1e-8;

/// SLD coefficient matrix for one parameter: M[j][k] is read from the
/// solution A at the (creation_j, annihilation_k) slot pair, then symmetrized
/// M ← (M + M†)/2.
pub fn sld_matrix(
    state: &CovarianceState,
    parameter: ParamId,
    opts: &EngineOptions,
) -> Result<SldMatrix, FisherError> {
    let sols = solve_tensor(state, opts)?;
    let idx = sols
        .params
        .iter()
        .position(|&p| p == parameter)
        .ok_or_else(|| FisherError::MissingParameter {
            parameter: parameter.token().to_string(),
        })?;
    let a = &sols.a[idx];
    let n = state.n_modes;
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            // creation slot of mode j is 2j+1, annihilation slot of mode k is 2k
            m[(j, k)] = a[(2 * j + 1, 2 * k)];
        }
    }
    let asymmetry = m.hermiticity_defect();
    let sym = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    Ok(SldMatrix {
        parameter,
        matrix: sym,
        asymmetry,
    })
}

/// Tolerances enforced on detection-mode output.
const UNITARITY_TOL: f64 = 1e-10;

/// Diagonalize an SLD into detection modes; occupations are the diagonal of
/// V Ξ V†.
pub fn detection_modes(
    sld: &SldMatrix,
    vis: &VisibilitySet,
) -> Result<DetectionModes, FisherError> {
    let eig = hermitian_eig(&sld.matrix)?;
    let v = eig.vectors.dagger(); // rows = conjugated eigenvectors
    let n = vis.n_modes;

    let unit_defect = v
        .matmul(&v.dagger())
        .sub(&ComplexMatrix::identity(n))
        .max_abs();
    if unit_defect > UNITARITY_TOL {
        return Err(FisherError::Internal {
            detail: format!("detection-mode unitarity defect {unit_defect:e}"),
        });
    }
    let diag_defect = {
        let vmv = v.matmul(&sld.matrix).matmul(&v.dagger());
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(vmv[(i, j)].norm());
                }
            }
        }
        off
    };
    if diag_defect > UNITARITY_TOL * sld.matrix.max_abs().max(1.0) {
        return Err(FisherError::Internal {
            detail: format!("SLD not diagonalized: defect {diag_defect:e}"),
        });
    }

    let vxiv = v.matmul(&vis.xi).matmul(&v.dagger());
    let occupations: Vec<f64> = (0..n).map(|i| vxiv[(i, i)].re).collect();
    if occupations.iter().any(|&o| o < -1e-10 * vis.nbar.max(1.0)) {
        return Err(FisherError::Internal {
            detail: "negative detection-mode occupation".into(),
        });
    }
    Ok(DetectionModes {
        parameter: sld.parameter,
        v,
        eigenvalues: eig.values,
        occupations,
    })
}

/// Near-singularity threshold for the multiparameter bound: eigenvalues below
/// `QCRB_PINV_THRESHOLD * λ_max` are dropped from the pseudo-inverse;
/// eigenvalues at or below the absolute floor raise UnidentifiableParameter.
pub const QCRB_PINV_THRESHOLD: f64 = 1e-12;

/// Cramér-Rao bounds for a QFI matrix at a given sample count.
pub fn qcrb(qfi: &QfiMatrix, samples: u64) -> Result<Qcrb, FisherError> {
    assert!(samples >= 1, "sample count must be at least 1");
    let k = qfi.dim();
    let nf = samples as f64;

    if k == 1 {
        let f = qfi.get(0, 0);
        if f <= 0.0 {
            return Err(FisherError::UnidentifiableParameter {
                direction: qfi.parameters[0].token().to_string(),
            });
        }
        let var = 1.0 / (nf * f);
        return Ok(Qcrb {
            parameters: qfi.parameters.clone(),
            samples,
            std_bounds: vec![var.sqrt()],
            covariance_bound: vec![var],
            dropped_directions: 0,
        });
    }

    let m = ComplexMatrix::from_fn(k, k, |i, j| Complex64::new(qfi.get(i, j), 0.0));
    let eig = hermitian_eig(&m)?;
    let lmax = eig.values[0].max(0.0);
    let abs_floor = 1e-14 * lmax.max(1e-300);
    if eig.values[k - 1] <= abs_floor {
        // name the null direction by its dominant parameter weights
        let mut parts: Vec<String> = Vec::new();
        for (i, p) in qfi.parameters.iter().enumerate() {
            let w = eig.vectors[(i, k - 1)];
            if w.norm() > 1e-3 {
                parts.push(format!("{:+.3}·{}", w.re, p.token()));
            }
        }
        return Err(FisherError::UnidentifiableParameter {
            direction: parts.join(" "),
        });
    }
    let mut dropped = 0usize;
    let mut cov = vec![0.0; k * k];
    for (l, &lam) in eig.values.iter().enumerate() {
        if lam < QCRB_PINV_THRESHOLD * lmax {
            dropped += 1;
            continue;
        }
        for i in 0..k {
            for j in 0..k {
                cov[i * k + j] +=
                    (eig.vectors[(i, l)] * eig.vectors[(j, l)].conj()).re / (nf * lam);
            }
        }
    }
    let std_bounds = (0..k).map(|i| cov[i * k + i].sqrt()).collect();
    Ok(Qcrb {
        parameters: qfi.parameters.clone(),
        samples,
        std_bounds,
        covariance_bound: cov,
        dropped_directions: dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{validate_scenario, ParamId, RawPhysics, RawScenario, SourceModel};
    use crate::visibility::{covariance, visibility_matrix, DerivativeMode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const R: f64 = 758e3;

    fn raw(positions: Vec<(f64, f64)>, source: SourceModel, params: Vec<ParamId>) -> RawScenario {
        RawScenario {
            physics: RawPhysics {
                center_frequency: Some(1.4235e9),
                bandwidth: Some(7e6),
                platform_height: Some(R),
                platform_speed: Some(7e3),
                kappa_override: Some(9.4),
                flight_distance: None,
            },
            positions,
            polarization: None,
            source: Some(source),
            parameters: params,
        }
    }

    fn disc(a: f64, t: f64, center: (f64, f64)) -> SourceModel {
        SourceModel::UniformDisc {
            radius: a,
            temperature: t,
            center,
        }
    }

    /// Hand-built single-mode state with given n̄ and one derivative dn̄.
    fn single_mode_state(nbar: f64, dn: f64) -> CovarianceState {
        let xi = ComplexMatrix::from_fn(1, 1, |_, _| Complex64::new(nbar, 0.0));
        let dxi = ComplexMatrix::from_fn(1, 1, |_, _| Complex64::new(dn, 0.0));
        let vis = VisibilitySet {
            n_modes: 1,
            nbar,
            xi,
            d_xi: vec![(ParamId::Temperature, dxi)],
        };
        covariance(&vis)
    }

    #[test]
    fn single_mode_gate_standard_pairing() {
        // randomized single-mode states against the closed form
        // 4 (∂χ)² / (4χ² − 1); this check gates the tensor build.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let nbar = rng.gen::<f64>() * 20.0 + 1e-4;
            let dn = rng.gen::<f64>() * 2.0 - 1.0;
            let state = single_mode_state(nbar, dn);
            let f = qfi_matrix(&state, &EngineOptions::default()).unwrap();
            let chi = 0.5 + nbar;
            let want = 4.0 * dn * dn / (4.0 * chi * chi - 1.0);
            let rel = (f.get(0, 0) - want).abs() / want.abs().max(1e-300);
            assert!(rel < 1e-10, "single-mode gate: rel err {rel:e}");
        }
    }

    #[test]
    fn swapped_pairing_is_equivalent_on_symmetric_inputs() {
        let state = single_mode_state(0.7, 0.13);
        let std = qfi_matrix(&state, &EngineOptions::default()).unwrap();
        let swapped = qfi_matrix(
            &state,
            &EngineOptions {
                pairing: PairingConvention::SwappedIndices,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((std.get(0, 0) - swapped.get(0, 0)).abs() < 1e-14 * std.get(0, 0).abs());
    }

    #[test]
    fn flipped_symplectic_sign_fails_the_gate() {
        let state = single_mode_state(0.7, 0.13);
        let f = qfi_matrix(
            &state,
            &EngineOptions {
                pairing: PairingConvention::FlippedSymplecticSign,
                ..Default::default()
            },
        )
        .unwrap();
        let chi = 0.5 + 0.7f64;
        let want = 4.0 * 0.13 * 0.13 / (4.0 * chi * chi - 1.0);
        let rel = (f.get(0, 0) - want).abs() / want;
        assert!(
            rel > 1e-3,
            "deliberately wrong pairing should fail the gate (rel err {rel:e})"
        );
    }

    #[test]
    fn single_receiver_disc_radius_matches_closed_form() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![ParamId::Radius],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let f = qfi_matrix(&state, &EngineOptions::default()).unwrap();
        let (a, t, kap) = (30e3, 300.0, 9.4);
        let want = 4.0 * std::f64::consts::PI * t * kap
            / (R * R + a * a * std::f64::consts::PI * t * kap);
        let rel = (f.get(0, 0) - want).abs() / want;
        assert!(rel < 1e-8, "F_a rel err {rel:e}");
    }

    #[test]
    fn duplicated_parameter_gives_equal_entries() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (4.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![ParamId::Radius, ParamId::Radius],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let f = qfi_matrix(&state, &EngineOptions::default()).unwrap();
        let v = f.get(0, 0);
        for i in 0..2 {
            for j in 0..2 {
                assert!((f.get(i, j) - v).abs() < 1e-12 * v.abs());
            }
        }
        // ... and the two-parameter bound is then singular
        match qcrb(&f, 1) {
            Err(FisherError::UnidentifiableParameter { .. }) => {}
            other => panic!("expected UnidentifiableParameter, got {other:?}"),
        }
    }

    #[test]
    fn qfi_invariant_under_receiver_permutation() {
        let positions = vec![(0.0, 0.0), (1.0, 0.5), (3.0, -1.0)];
        let mut permuted = positions.clone();
        permuted.rotate_left(1);
        let mk = |pos: Vec<(f64, f64)>| {
            let s = validate_scenario(&raw(
                pos,
                disc(25e3, 280.0, (9e3, -4e3)),
                vec![ParamId::Radius, ParamId::Temperature],
            ))
            .unwrap();
            let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
            qfi_matrix(&covariance(&vis), &EngineOptions::default()).unwrap()
        };
        let f1 = mk(positions);
        let f2 = mk(permuted);
        for i in 0..2 {
            for j in 0..2 {
                let rel = (f1.get(i, j) - f2.get(i, j)).abs() / f1.get(i, j).abs().max(1e-300);
                assert!(rel < 1e-9, "permutation changed QFI entry ({i},{j}) by {rel:e}");
            }
        }
    }

    #[test]
    fn qfi_matrix_is_symmetric_and_psd() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (4.0, 0.0)],
            disc(30e3, 300.0, (11e3, 6e3)),
            vec![ParamId::Radius, ParamId::Temperature, ParamId::X0, ParamId::Y0],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let f = qfi_matrix(&covariance(&vis), &EngineOptions::default()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((f.get(i, j) - f.get(j, i)).abs() < 1e-9 * f.get(i, i).max(1e-300));
            }
        }
        let trace: f64 = (0..4).map(|i| f.get(i, i)).sum();
        assert!(f.min_eigenvalue() >= -1e-8 * trace);
        assert!(f.max_imag_residue < 1e-9);
    }

    #[test]
    fn vacuum_state_is_degenerate() {
        let state = single_mode_state(0.0, 0.1);
        match qfi_matrix(&state, &EngineOptions::default()) {
            Err(FisherError::DegenerateState) => {}
            other => panic!("expected DegenerateState, got {other:?}"),
        }
    }

    #[test]
    fn mode_cap_enforced() {
        let s = validate_scenario(&raw(
            (0..5).map(|i| (i as f64, 0.0)).collect(),
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![ParamId::Radius],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        match qfi_matrix(
            &state,
            &EngineOptions {
                max_modes: 4,
                ..Default::default()
            },
        ) {
            Err(FisherError::CapExceeded { n: 5, cap: 4 }) => {}
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn single_mode_sld_coefficient() {
        // 𝓛_a = 2R²/(a R² + a³ π T κ) b†b
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![ParamId::Radius],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let sld = sld_matrix(&state, ParamId::Radius, &EngineOptions::default()).unwrap();
        let (a, t, kap) = (30e3, 300.0, 9.4);
        let want = 2.0 * R * R
            / (a * R * R + a.powi(3) * std::f64::consts::PI * t * kap);
        let got = sld.matrix[(0, 0)].re;
        assert!(
            ((got - want) / want).abs() < 1e-8,
            "g_a = {got:e}, want {want:e}"
        );
        assert!(sld.asymmetry < SLD_ASYMMETRY_WARN);
    }

    #[test]
    fn two_mode_centered_disc_sld_structure() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (4.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![ParamId::Temperature, ParamId::X0],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);

        // temperature: equal real diagonal, real off-diagonal (phase 0 mod π)
        let sld_t = sld_matrix(&state, ParamId::Temperature, &EngineOptions::default()).unwrap();
        let m = &sld_t.matrix;
        assert!((m[(0, 0)] - m[(1, 1)]).norm() < 1e-12 * m.max_abs());
        assert!(m[(0, 1)].im.abs() < 1e-12 * m.max_abs());

        // centre coordinate: zero diagonal, purely imaginary off-diagonal
        let sld_x = sld_matrix(&state, ParamId::X0, &EngineOptions::default()).unwrap();
        let mx = &sld_x.matrix;
        assert!(mx[(0, 0)].norm() < 1e-10 * mx.max_abs());
        assert!(mx[(1, 1)].norm() < 1e-10 * mx.max_abs());
        assert!(mx[(0, 1)].re.abs() < 1e-10 * mx.max_abs());
    }

    #[test]
    fn detection_modes_balanced_for_symmetric_two_mode() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (4.0, 0.0)],
            disc(30e3, 300.0, (13e3, -2e3)),
            vec![ParamId::Radius],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let sld = sld_matrix(&state, ParamId::Radius, &EngineOptions::default()).unwrap();
        let modes = detection_modes(&sld, &vis).unwrap();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (modes.v[(i, j)].norm() - inv_sqrt2).abs() < 1e-9,
                    "|V[{i}][{j}]| = {}",
                    modes.v[(i, j)].norm()
                );
            }
        }
        assert!(modes.eigenvalues[0] >= modes.eigenvalues[1]);
        for &o in &modes.occupations {
            assert!(o >= -1e-10);
        }
    }

    #[test]
    fn detection_modes_single_mode_trivial() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![ParamId::Radius],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let sld = sld_matrix(&state, ParamId::Radius, &EngineOptions::default()).unwrap();
        let modes = detection_modes(&sld, &vis).unwrap();
        assert_eq!(modes.v.rows(), 1);
        assert!((modes.v[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((modes.eigenvalues[0] - sld.matrix[(0, 0)].re).abs() < 1e-14);
        assert!((modes.occupations[0] - vis.nbar).abs() < 1e-12 * vis.nbar);
    }

    #[test]
    fn detection_modes_three_receivers_diagonalize() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
            SourceModel::TwoDiscs {
                radius: 4.276e3,
                t1: 300.0,
                t2: 300.0,
                center1: (8e3, 0.0),
                center2: (-8e3, 0.0),
            },
            vec![ParamId::SepX],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let sld = sld_matrix(&state, ParamId::SepX, &EngineOptions::default()).unwrap();
        let modes = detection_modes(&sld, &vis).unwrap();
        // constructor enforces V M V† diagonal within 1e-10; re-check V†V here
        let defect = modes
            .v
            .dagger()
            .matmul(&modes.v)
            .sub(&ComplexMatrix::identity(3))
            .max_abs();
        assert!(defect < 1e-10);
    }

    #[test]
    fn qcrb_known_value_and_scaling() {
        let f = QfiMatrix {
            parameters: vec![ParamId::Radius],
            entries: vec![0.0616e-6], // 0.0616 km⁻² in m⁻²
            max_imag_residue: 0.0,
        };
        let b1 = qcrb(&f, 1).unwrap();
        let km = b1.std_bounds[0] / 1e3;
        assert!((km - 4.03).abs() < 0.01, "δa = {km} km");
        let b4 = qcrb(&f, 4).unwrap();
        assert!((b4.std_bounds[0] - b1.std_bounds[0] / 2.0).abs() < 1e-12 * b1.std_bounds[0]);
    }

    #[test]
    fn two_parameter_bound_dominates_single() {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![ParamId::Radius, ParamId::Temperature],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let f = qfi_matrix(&state, &EngineOptions::default()).unwrap();
        let joint = qcrb(&f, 1).unwrap();
        let single = (1.0 / f.get(0, 0)).sqrt();
        assert!(
            joint.std_bounds[0] >= single * (1.0 - 1e-12),
            "joint bound {} must dominate single-parameter bound {}",
            joint.std_bounds[0],
            single
        );
    }
}
