//! Second moments of the received Gaussian state: mean photon number n̄, the
//! mode-correlation (visibility) matrix Ξ with Ξ[i][j] = ⟨b_i†b_j⟩, the
//! 2n×2n covariance matrix Σ, and parameter derivatives of all three.
//!
//! Baseline convention: the phase kernel for the pair (i, j) is
//! e^{2πi(v_x x + v_y y)} with v_x = (x_i − x_j)/(λR) and
//! v_y = (y_i − y_j)/(λR) — the x-baseline couples to the x-coordinate of
//! the source plane.

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{bessel, integrate_pixels, ComplexMatrix, NumericsError};
use crate::scenario::{ParamId, Scenario, SourceModel};

#[derive(Debug, Clone, Error)]
pub enum VisibilityError {
    #[error("parameter {parameter} not applicable to this source model")]
    InvalidParameter { parameter: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// How parameter derivatives of the moments are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Exact derivatives of the disc / two-disc closed forms.
    #[default]
    Analytic,
    /// Central finite differences with a relative step.
    FiniteDifference,
}

/// n̄, Ξ, and parameter derivatives dΞ (diagonal of each dΞ is ∂n̄).
#[derive(Debug, Clone)]
pub struct VisibilitySet {
    pub n_modes: usize,
    pub nbar: f64,
    pub xi: ComplexMatrix,
    pub d_xi: Vec<(ParamId, ComplexMatrix)>,
}

/// Σ in the (b₁, b₁†, b₂, b₂†, …) ordering, plus parameter derivatives.
#[derive(Debug, Clone)]
pub struct CovarianceState {
    pub n_modes: usize,
    pub sigma: ComplexMatrix,
    pub d_sigma: Vec<(ParamId, ComplexMatrix)>,
}

/// Mean photon number per receiver mode: n̄ = (κ/R²)∫T_eff dx dy.
pub fn mean_photon_number(scenario: &Scenario) -> Result<f64, VisibilityError> {
    let kappa = scenario.physics.kappa;
    let r2 = scenario.physics.platform_height.powi(2);
    match &scenario.source {
        SourceModel::UniformDisc {
            radius,
            temperature,
            ..
        } => Ok(std::f64::consts::PI * radius * radius * kappa * temperature / r2),
        SourceModel::TwoDiscs { radius, t1, t2, .. } => {
            let eta = std::f64::consts::PI * radius * radius / r2;
            Ok(eta * kappa * (t1 + t2))
        }
        SourceModel::PixelMap(map) => {
            let total = integrate_pixels(map, |_, _| Complex64::new(1.0, 0.0))?;
            Ok(kappa / r2 * total.re)
        }
    }
}

/// Spatial frequency of the baseline (i, j) in 1/m.
fn baseline_freq(scenario: &Scenario, i: usize, j: usize) -> (f64, f64) {
    let lam_r = scenario.physics.wavelength * scenario.physics.platform_height;
    let pi_ = scenario.array.positions[i];
    let pj = scenario.array.positions[j];
    ((pi_.0 - pj.0) / lam_r, (pi_.1 - pj.1) / lam_r)
}

fn phase(vx: f64, vy: f64, x: f64, y: f64) -> Complex64 {
    (Complex64::i() * 2.0 * std::f64::consts::PI * (vx * x + vy * y)).exp()
}

/// Visibility matrix with derivatives for every estimation parameter of the
/// scenario.
pub fn visibility_matrix(
    scenario: &Scenario,
    mode: DerivativeMode,
) -> Result<VisibilitySet, VisibilityError> {
    let nbar = mean_photon_number(scenario)?;
    let n = scenario.n_modes();
    let xi = xi_matrix(scenario, nbar)?;

    let mut d_xi = Vec::with_capacity(scenario.parameters.len());
    for &p in &scenario.parameters {
        if !p.applicable_to(&scenario.source) {
            return Err(VisibilityError::InvalidParameter {
                parameter: p.token().to_string(),
            });
        }
        let d = match mode {
            DerivativeMode::Analytic => d_xi_analytic(scenario, nbar, &xi, p)?,
            DerivativeMode::FiniteDifference => d_xi_fd(scenario, p)?,
        };
        d_xi.push((p, d));
    }
    Ok(VisibilitySet {
        n_modes: n,
        nbar,
        xi,
        d_xi,
    })
}

fn xi_matrix(scenario: &Scenario, nbar: f64) -> Result<ComplexMatrix, VisibilityError> {
    let n = scenario.n_modes();
    let kappa = scenario.physics.kappa;
    let r2 = scenario.physics.platform_height.powi(2);
    let mut xi = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        xi[(i, i)] = Complex64::new(nbar, 0.0);
        for j in 0..n {
            if i == j {
                continue;
            }
            let (vx, vy) = baseline_freq(scenario, i, j);
            let val = match &scenario.source {
                SourceModel::UniformDisc {
                    radius,
                    temperature,
                    center,
                } => {
                    let q = vx.hypot(vy);
                    let u = 2.0 * std::f64::consts::PI * radius * q;
                    let eta2 = bessel::two_j1_over_x(u);
                    let amp = std::f64::consts::PI * radius * radius * kappa * temperature / r2;
                    phase(vx, vy, center.0, center.1) * amp * eta2
                }
                SourceModel::TwoDiscs {
                    radius,
                    t1,
                    t2,
                    center1,
                    center2,
                } => {
                    let q = vx.hypot(vy);
                    let u = 2.0 * std::f64::consts::PI * radius * q;
                    let eta2 = bessel::two_j1_over_x(u);
                    let eta = std::f64::consts::PI * radius * radius / r2;
                    (phase(vx, vy, center1.0, center1.1) * *t1
                        + phase(vx, vy, center2.0, center2.1) * *t2)
                        * kappa
                        * eta
                        * eta2
                }
                SourceModel::PixelMap(map) => {
                    let z = integrate_pixels(map, |x, y| phase(vx, vy, x, y))?;
                    z * kappa / r2
                }
            };
            xi[(i, j)] = val;
        }
    }
    Ok(xi)
}

fn d_xi_analytic(
    scenario: &Scenario,
    nbar: f64,
    xi: &ComplexMatrix,
    p: ParamId,
) -> Result<ComplexMatrix, VisibilityError> {
    let n = scenario.n_modes();
    let kappa = scenario.physics.kappa;
    let r2 = scenario.physics.platform_height.powi(2);
    let mut d = ComplexMatrix::zeros(n, n);

    match &scenario.source {
        SourceModel::UniformDisc {
            radius,
            temperature,
            center,
        } => {
            let a = *radius;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        d[(i, i)] = Complex64::new(
                            match p {
                                ParamId::Radius => 2.0 * nbar / a,
                                ParamId::Temperature => nbar / temperature,
                                ParamId::X0 | ParamId::Y0 => 0.0,
                                _ => unreachable!("validated applicability"),
                            },
                            0.0,
                        );
                        continue;
                    }
                    let (vx, vy) = baseline_freq(scenario, i, j);
                    let q = vx.hypot(vy);
                    let u = 2.0 * std::f64::consts::PI * a * q;
                    d[(i, j)] = match p {
                        ParamId::Radius => {
                            // d/da [n̄ η₂(u)] = (2 n̄ / a) J₀(u); the η₂ and
                            // Bessel terms telescope.
                            let amp = 2.0 * nbar / a * bessel::j0(u);
                            phase(vx, vy, center.0, center.1) * amp
                        }
                        ParamId::Temperature => xi[(i, j)] / *temperature,
                        ParamId::X0 => {
                            xi[(i, j)] * Complex64::i() * 2.0 * std::f64::consts::PI * vx
                        }
                        ParamId::Y0 => {
                            xi[(i, j)] * Complex64::i() * 2.0 * std::f64::consts::PI * vy
                        }
                        _ => unreachable!(),
                    };
                }
            }
        }
        SourceModel::TwoDiscs {
            radius,
            t1,
            t2,
            center1,
            center2,
        } => {
            let a = *radius;
            let eta = std::f64::consts::PI * a * a / r2;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        d[(i, i)] = Complex64::new(
                            match p {
                                ParamId::Radius => 2.0 * nbar / a,
                                ParamId::Temperature => 2.0 * eta * kappa,
                                ParamId::T1 | ParamId::T2 => eta * kappa,
                                ParamId::SepX
                                | ParamId::SepY
                                | ParamId::CentroidX
                                | ParamId::CentroidY => 0.0,
                                _ => unreachable!(),
                            },
                            0.0,
                        );
                        continue;
                    }
                    let (vx, vy) = baseline_freq(scenario, i, j);
                    let q = vx.hypot(vy);
                    let u = 2.0 * std::f64::consts::PI * a * q;
                    let eta2 = bessel::two_j1_over_x(u);
                    let p1 = phase(vx, vy, center1.0, center1.1);
                    let p2 = phase(vx, vy, center2.0, center2.1);
                    d[(i, j)] = match p {
                        ParamId::Radius => {
                            (p1 * *t1 + p2 * *t2)
                                * (2.0 * bessel::j0(u) / a)
                                * kappa
                                * eta
                        }
                        ParamId::Temperature => (p1 + p2) * kappa * eta * eta2,
                        ParamId::T1 => p1 * kappa * eta * eta2,
                        ParamId::T2 => p2 * kappa * eta * eta2,
                        ParamId::SepX => {
                            // x₁ = t_x + s_x/2, x₂ = t_x − s_x/2
                            (p1 * *t1 - p2 * *t2)
                                * Complex64::i()
                                * std::f64::consts::PI
                                * vx
                                * kappa
                                * eta
                                * eta2
                        }
                        ParamId::SepY => {
                            (p1 * *t1 - p2 * *t2)
                                * Complex64::i()
                                * std::f64::consts::PI
                                * vy
                                * kappa
                                * eta
                                * eta2
                        }
                        ParamId::CentroidX => {
                            xi[(i, j)] * Complex64::i() * 2.0 * std::f64::consts::PI * vx
                        }
                        ParamId::CentroidY => {
                            xi[(i, j)] * Complex64::i() * 2.0 * std::f64::consts::PI * vy
                        }
                        _ => unreachable!(),
                    };
                }
            }
        }
        SourceModel::PixelMap(_) => {
            return Err(VisibilityError::InvalidParameter {
                parameter: p.token().to_string(),
            })
        }
    }
    Ok(d)
}

/// Current value of an estimation parameter in a scenario.
pub fn param_value(scenario: &Scenario, p: ParamId) -> Option<f64> {
    match (&scenario.source, p) {
        (SourceModel::UniformDisc { radius, .. }, ParamId::Radius) => Some(*radius),
        (SourceModel::UniformDisc { temperature, .. }, ParamId::Temperature) => Some(*temperature),
        (SourceModel::UniformDisc { center, .. }, ParamId::X0) => Some(center.0),
        (SourceModel::UniformDisc { center, .. }, ParamId::Y0) => Some(center.1),
        (SourceModel::TwoDiscs { radius, .. }, ParamId::Radius) => Some(*radius),
        (SourceModel::TwoDiscs { t1, .. }, ParamId::T1) => Some(*t1),
        (SourceModel::TwoDiscs { t2, .. }, ParamId::T2) => Some(*t2),
        (src @ SourceModel::TwoDiscs { .. }, _) => {
            let d = src.two_disc_derived()?;
            Some(match p {
                ParamId::Temperature => d.t_mean,
                ParamId::SepX => d.s_x,
                ParamId::SepY => d.s_y,
                ParamId::CentroidX => d.t_x,
                ParamId::CentroidY => d.t_y,
                _ => return None,
            })
        }
        _ => None,
    }
}

/// Scenario with one estimation parameter set to a new value. Two-disc
/// separation/centroid/mean-temperature updates preserve the other derived
/// parameters.
pub fn with_param(scenario: &Scenario, p: ParamId, value: f64) -> Option<Scenario> {
    let mut s = scenario.clone();
    match (&mut s.source, p) {
        (SourceModel::UniformDisc { radius, .. }, ParamId::Radius) => *radius = value,
        (SourceModel::UniformDisc { temperature, .. }, ParamId::Temperature) => {
            *temperature = value
        }
        (SourceModel::UniformDisc { center, .. }, ParamId::X0) => center.0 = value,
        (SourceModel::UniformDisc { center, .. }, ParamId::Y0) => center.1 = value,
        (SourceModel::TwoDiscs { radius, .. }, ParamId::Radius) => *radius = value,
        (SourceModel::TwoDiscs { t1, .. }, ParamId::T1) => *t1 = value,
        (SourceModel::TwoDiscs { t2, .. }, ParamId::T2) => *t2 = value,
        (src @ SourceModel::TwoDiscs { .. }, _) => {
            let d = src.two_disc_derived()?;
            let (mut sx, mut sy, mut tx, mut ty, mut tm) =
                (d.s_x, d.s_y, d.t_x, d.t_y, d.t_mean);
            let dt = d.delta_t;
            match p {
                ParamId::SepX => sx = value,
                ParamId::SepY => sy = value,
                ParamId::CentroidX => tx = value,
                ParamId::CentroidY => ty = value,
                ParamId::Temperature => tm = value,
                _ => return None,
            }
            if let SourceModel::TwoDiscs {
                t1,
                t2,
                center1,
                center2,
                ..
            } = src
            {
                *center1 = (tx + sx / 2.0, ty + sy / 2.0);
                *center2 = (tx - sx / 2.0, ty - sy / 2.0);
                *t1 = tm - dt / 2.0;
                *t2 = tm + dt / 2.0;
            }
        }
        _ => return None,
    }
    Some(s)
}

/// Relative finite-difference step for a parameter: max(1e-6 |θ|, 1e-9 scale)
/// where scale is the source radius for lengths and the (mean) temperature
/// for temperatures.
pub fn fd_step(scenario: &Scenario, p: ParamId) -> f64 {
    let theta = param_value(scenario, p).unwrap_or(0.0);
    let scale = if p.is_length() {
        match &scenario.source {
            SourceModel::UniformDisc { radius, .. } | SourceModel::TwoDiscs { radius, .. } => {
                *radius
            }
            SourceModel::PixelMap(m) => m.pixel_size * m.cols as f64,
        }
    } else {
        match &scenario.source {
            SourceModel::UniformDisc { temperature, .. } => *temperature,
            SourceModel::TwoDiscs { t1, t2, .. } => 0.5 * (t1 + t2),
            SourceModel::PixelMap(_) => 1.0,
        }
    };
    (1e-6 * theta.abs()).max(1e-9 * scale)
}

fn d_xi_fd(scenario: &Scenario, p: ParamId) -> Result<ComplexMatrix, VisibilityError> {
    let h = fd_step(scenario, p);
    let theta = param_value(scenario, p).ok_or_else(|| VisibilityError::InvalidParameter {
        parameter: p.token().to_string(),
    })?;
    let plus = with_param(scenario, p, theta + h).unwrap();
    let minus = with_param(scenario, p, theta - h).unwrap();
    let xi_p = xi_matrix(&plus, mean_photon_number(&plus)?)?;
    let xi_m = xi_matrix(&minus, mean_photon_number(&minus)?)?;
    Ok(xi_p
        .sub(&xi_m)
        .scale(Complex64::new(1.0 / (2.0 * h), 0.0)))
}

/// Assemble Σ from Ξ: Σ[(aᵢ),(cⱼ)] = δᵢⱼ/2 + Ξ[j][i],
/// Σ[(cᵢ),(aⱼ)] = δᵢⱼ/2 + Ξ[i][j]; the ⟨bb⟩ and ⟨b†b†⟩ blocks vanish for
/// circularly symmetric states.
pub fn covariance(vis: &VisibilitySet) -> CovarianceState {
    let n = vis.n_modes;
    let sigma = assemble_sigma(&vis.xi, 0.5);
    let d_sigma = vis
        .d_xi
        .iter()
        .map(|(p, dxi)| (*p, assemble_sigma(dxi, 0.0)))
        .collect();
    CovarianceState {
        n_modes: n,
        sigma,
        d_sigma,
    }
}

fn assemble_sigma(xi: &ComplexMatrix, diag: f64) -> ComplexMatrix {
    let n = xi.rows();
    let mut s = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { diag } else { 0.0 };
            s[(2 * i, 2 * j + 1)] = Complex64::new(delta, 0.0) + xi[(j, i)];
            s[(2 * i + 1, 2 * j)] = Complex64::new(delta, 0.0) + xi[(i, j)];
        }
    }
    s
}

impl VisibilitySet {
    /// Invariant checks: Hermiticity, positive semidefiniteness, constant
    /// diagonal, and the Cauchy-Schwarz bound |Ξᵢⱼ| ≤ n̄.
    pub fn check_invariants(&self) -> Result<(), String> {
        let scale = self.nbar.max(1e-300);
        if self.xi.hermiticity_defect() > 1e-12 * scale {
            return Err(format!(
                "visibility matrix not Hermitian: defect {:e}",
                self.xi.hermiticity_defect()
            ));
        }
        for i in 0..self.n_modes {
            if (self.xi[(i, i)].re - self.nbar).abs() > 1e-12 * scale
                || self.xi[(i, i)].im.abs() > 1e-12 * scale
            {
                return Err(format!("diagonal entry {i} differs from nbar"));
            }
            for j in 0..self.n_modes {
                if self.xi[(i, j)].norm() > self.nbar + 1e-12 * scale.max(1.0) {
                    return Err(format!("|Xi[{i}][{j}]| exceeds nbar"));
                }
            }
        }
        let eig = crate::numerics::hermitian_eig(&self.xi).map_err(|e| e.to_string())?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -1e-10 * scale {
            return Err(format!("visibility matrix not PSD: min eigenvalue {min:e}"));
        }
        Ok(())
    }
}

impl CovarianceState {
    pub fn check_invariants(&self) -> Result<(), String> {
        let n2 = 2 * self.n_modes;
        let scale = self.sigma.max_abs().max(1e-300);
        if self.sigma.symmetry_defect() > 1e-12 * scale {
            return Err("covariance matrix not symmetric".into());
        }
        for i in 0..n2 {
            for j in 0..n2 {
                // same-kind slots (annihilation-annihilation or
                // creation-creation) must vanish exactly
                if (i + j) % 2 == 0 && self.sigma[(i, j)].norm() != 0.0 {
                    return Err(format!("nonzero pairing slot ({i},{j})"));
                }
            }
        }
        Ok(())
    }

    /// χ = 1/2 + n̄ read off the first diagonal pairing slot.
    pub fn chi(&self) -> f64 {
        self.sigma[(0, 1)].re
    }
}
