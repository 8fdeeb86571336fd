//! Catalog of analytic formulas for the single-receiver, two-mode-disc, and
//! two-point-source configurations, used as golden oracles for the generic
//! engines and as fast evaluation paths.
//!
//! Canonical entries follow from the eigenmode decomposition of the
//! mode-correlation matrix: with occupations ν_l and the derivative
//! transformed into the eigenbasis,
//!
//!   𝓕_ij = Σ_l ∂iν_l ∂jν_l / (ν_l(ν_l+1))
//!        + Σ_{l≠m} Re(∂iΞ̃_lm ∂jΞ̃_ml) / (ν_lν_m + (ν_l+ν_m)/2),
//!
//! and the heterodyne analogue replaces the denominators by (1+ν_l)(1+ν_m).
//! Several published algebraic forms of the same quantities disagree with
//! the tensor engine; those are kept in [`variants`] under descriptive
//! labels and arbitrated by the validation battery.

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{bessel, hermitian_eig, solve_linear, ComplexMatrix};

#[derive(Debug, Clone, Error)]
pub enum FormulaError {
    #[error("{field}: {detail}")]
    InvalidInput { field: &'static str, detail: String },
    #[error("formula {id} is singular at these inputs")]
    SingularFormula { id: &'static str },
}

fn require(ok: bool, field: &'static str, detail: &str) -> Result<(), FormulaError> {
    if ok {
        Ok(())
    } else {
        Err(FormulaError::InvalidInput {
            field,
            detail: detail.to_string(),
        })
    }
}

// ---------------------------------------------------------------------------
// Eigenmode oracle (any mode count)
// ---------------------------------------------------------------------------

/// QFI matrix from the mode-correlation matrix Ξ and its derivatives,
/// computed through the eigenmode decomposition. Independent of the tensor
/// engine's solve path; serves as its cross-validation oracle.
pub fn eigenmode_qfi(
    xi: &ComplexMatrix,
    d_xi: &[ComplexMatrix],
) -> Result<Vec<f64>, FormulaError> {
    eigenmode_fisher(xi, d_xi, FisherKind::Quantum)
}

/// Heterodyne CFI matrix by the same eigenmode route (denominators
/// (1+ν_l)(1+ν_m)); equals the trace identity exactly.
pub fn eigenmode_het_cfi(
    xi: &ComplexMatrix,
    d_xi: &[ComplexMatrix],
) -> Result<Vec<f64>, FormulaError> {
    eigenmode_fisher(xi, d_xi, FisherKind::Heterodyne)
}

enum FisherKind {
    Quantum,
    Heterodyne,
}

fn eigenmode_fisher(
    xi: &ComplexMatrix,
    d_xi: &[ComplexMatrix],
    kind: FisherKind,
) -> Result<Vec<f64>, FormulaError> {
    let n = xi.rows();
    let eig = hermitian_eig(xi).map_err(|e| FormulaError::InvalidInput {
        field: "xi",
        detail: e.to_string(),
    })?;
    let nu = &eig.values;
    let p = &eig.vectors;
    let k = d_xi.len();
    let scale = xi.max_abs().max(1e-300);

    // transform derivatives into the eigenbasis: P† dΞ P
    let transformed: Vec<ComplexMatrix> = d_xi
        .iter()
        .map(|d| p.dagger().matmul(d).matmul(p))
        .collect();

    let mut out = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = 0.0;
            for l in 0..n {
                for m in 0..n {
                    let den = match kind {
                        FisherKind::Quantum => nu[l] * nu[m] + 0.5 * (nu[l] + nu[m]),
                        FisherKind::Heterodyne => (1.0 + nu[l]) * (1.0 + nu[m]),
                    };
                    let num = (transformed[i][(l, m)] * transformed[j][(m, l)]).re;
                    if den <= 1e-15 * scale {
                        if num.abs() <= 1e-24 * scale * scale {
                            continue; // vacuum pair carrying no information
                        }
                        return Err(FormulaError::SingularFormula {
                            id: "eigenmode_fisher",
                        });
                    }
                    acc += num / den;
                }
            }
            out[i * k + j] = acc;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Two-mode bridge formulas in (χ, ξ)
// ---------------------------------------------------------------------------

/// One parameter's derivative data for a symmetric two-mode state.
#[derive(Debug, Clone, Copy)]
pub struct TwoModeDeriv {
    /// ∂n̄ (equivalently ∂χ).
    pub d_nbar: f64,
    /// ∂ξ with ξ = ⟨b₂†b₁⟩.
    pub d_xi: Complex64,
}

/// General two-mode QFI entry from (χ, ξ) and two derivative pairs — the
/// bridge between raw covariances and the scenario-specific formulas.
pub fn two_mode_general_qfi(
    chi: f64,
    xi: Complex64,
    di: TwoModeDeriv,
    dj: TwoModeDeriv,
) -> Result<f64, FormulaError> {
    require(
        4.0 * chi * chi - 1.0 > 0.0,
        "chi",
        "requires 4χ² − 1 > 0 (non-vacuum state)",
    )?;
    let nbar = chi - 0.5;
    let r = xi.norm();
    require(r <= nbar + 1e-12 * nbar.max(1.0), "xi", "requires |ξ| ≤ n̄")?;

    let phase = if r > 0.0 {
        xi / r
    } else {
        Complex64::new(1.0, 0.0)
    };
    let nu_p = nbar + r;
    let nu_m = nbar - r;
    let ei = di.d_xi * phase.conj();
    let ej = dj.d_xi * phase.conj();
    let (dnu_p_i, dnu_m_i, ui) = (di.d_nbar + ei.re, di.d_nbar - ei.re, ei.im);
    let (dnu_p_j, dnu_m_j, uj) = (dj.d_nbar + ej.re, dj.d_nbar - ej.re, ej.im);

    let mut total = 0.0;
    for (nul, dnl, dnj) in [
        (nu_p, dnu_p_i, dnu_p_j),
        (nu_m, dnu_m_i, dnu_m_j),
    ] {
        let den = nul * (nul + 1.0);
        if den <= 1e-15 * nbar.max(1e-300) {
            if (dnl * dnj).abs() <= 1e-24 * (1.0 + nbar * nbar) {
                continue;
            }
            return Err(FormulaError::SingularFormula {
                id: "two_mode_general_qfi",
            });
        }
        total += dnl * dnj / den;
    }
    let cross_den = nu_p * nu_m + 0.5 * (nu_p + nu_m);
    if cross_den <= 1e-15 * nbar.max(1e-300) {
        if (ui * uj).abs() > 1e-24 * (1.0 + nbar * nbar) {
            return Err(FormulaError::SingularFormula {
                id: "two_mode_general_qfi",
            });
        }
    } else {
        total += 2.0 * ui * uj / cross_den;
    }
    Ok(total)
}

/// Heterodyne CFI entry for the same two-mode family.
pub fn two_mode_general_het(
    chi: f64,
    xi: Complex64,
    di: TwoModeDeriv,
    dj: TwoModeDeriv,
) -> Result<f64, FormulaError> {
    let nbar = chi - 0.5;
    require(nbar >= 0.0, "chi", "requires n̄ ≥ 0")?;
    let r = xi.norm();
    let phase = if r > 0.0 {
        xi / r
    } else {
        Complex64::new(1.0, 0.0)
    };
    let c_p = 1.0 + nbar + r;
    let c_m = 1.0 + nbar - r;
    let ei = di.d_xi * phase.conj();
    let ej = dj.d_xi * phase.conj();
    Ok((di.d_nbar + ei.re) * (dj.d_nbar + ej.re) / (c_p * c_p)
        + (di.d_nbar - ei.re) * (dj.d_nbar - ej.re) / (c_m * c_m)
        + 2.0 * ei.im * ej.im / (c_p * c_m))
}

/// Coefficients of the SLD quadratic form for the symmetric two-mode state:
/// the (shared real) diagonal g¹ and the off-diagonal g² = M[0][1], obtained
/// by solving the three-unknown linear system the tensor equation reduces to
/// for this family.
pub fn two_mode_general_sld(
    chi: f64,
    xi: Complex64,
    d: TwoModeDeriv,
) -> Result<(f64, Complex64), FormulaError> {
    require(
        4.0 * chi * chi - 1.0 > 0.0,
        "chi",
        "requires 4χ² − 1 > 0 (non-vacuum state)",
    )?;
    let q = chi * chi - 0.25;
    let x2 = xi.norm_sqr();
    // unknowns (p, qbar, qplain):
    //   (q + |ξ|²) p + χ ξ* qbar + χ ξ qplain            = ∂χ
    //   2χξ p      + q qbar      + ξ² qplain             = ∂ξ
    //   2χξ* p     + (ξ*)² qbar  + q qplain              = ∂ξ*
    let c = |re: f64| Complex64::new(re, 0.0);
    let a = ComplexMatrix::from_fn(3, 3, |i, j| match (i, j) {
        (0, 0) => c(q + x2),
        (0, 1) => xi.conj() * chi,
        (0, 2) => xi * chi,
        (1, 0) => xi * 2.0 * chi,
        (1, 1) => c(q),
        (1, 2) => xi * xi,
        (2, 0) => xi.conj() * 2.0 * chi,
        (2, 1) => xi.conj() * xi.conj(),
        (2, 2) => c(q),
        _ => unreachable!(),
    });
    let b = [c(d.d_nbar), d.d_xi, d.d_xi.conj()];
    let sol = solve_linear(&a, &b).map_err(|_| FormulaError::SingularFormula {
        id: "two_mode_general_sld",
    })?;
    let g1 = sol[0];
    if g1.im.abs() > 1e-9 * g1.norm().max(1e-300) {
        return Err(FormulaError::SingularFormula {
            id: "two_mode_general_sld",
        });
    }
    Ok((g1.re, sol[1]))
}

// ---------------------------------------------------------------------------
// Single receiver
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct SingleReceiver {
    pub nbar: f64,
    pub qfi_radius: f64,
    pub qfi_temperature: f64,
    pub qfi_radius_temperature: f64,
    pub het_radius: f64,
    pub het_temperature: f64,
    /// SLD coefficients of b†b for radius / temperature estimation.
    pub sld_radius: f64,
    pub sld_temperature: f64,
}

/// Closed forms for a single receiver observing a centred uniform disc.
pub fn single_receiver(
    radius: f64,
    temperature: f64,
    platform_height: f64,
    kappa: f64,
) -> Result<SingleReceiver, FormulaError> {
    require(radius >= 0.0, "radius", "must be non-negative")?;
    require(temperature > 0.0, "temperature", "microwave regime requires T > 0")?;
    require(platform_height > 0.0, "platform_height", "must be positive")?;
    require(kappa > 0.0, "kappa", "must be positive")?;
    let pi = std::f64::consts::PI;
    let r2 = platform_height * platform_height;
    let x = pi * radius * radius * kappa * temperature; // π a² κ T
    let nbar = x / r2;
    let den = r2 + x;
    Ok(SingleReceiver {
        nbar,
        qfi_radius: 4.0 * pi * temperature * kappa / den,
        qfi_temperature: pi * radius * radius * kappa / (temperature * den),
        qfi_radius_temperature: 2.0 * radius * pi * kappa / den,
        het_radius: 4.0 * radius * radius * pi * pi * temperature * temperature * kappa * kappa
            / (den * den),
        het_temperature: pi * pi * radius.powi(4) * kappa * kappa / (den * den),
        sld_radius: if radius > 0.0 {
            2.0 * r2 / (radius * den)
        } else {
            f64::INFINITY
        },
        sld_temperature: r2 / (temperature * den),
    })
}

/// a → 0 limit of the single-receiver radius QFI: 4πκT/R².
pub fn single_receiver_radius_limit(temperature: f64, platform_height: f64, kappa: f64) -> f64 {
    4.0 * std::f64::consts::PI * kappa * temperature / (platform_height * platform_height)
}

/// Radius minimizing δa when the sample count is L·B/v with L ∼ a:
/// a* = R/√(πκT).
pub fn optimal_sampling_radius(platform_height: f64, kappa: f64, temperature: f64) -> f64 {
    platform_height / (std::f64::consts::PI * kappa * temperature).sqrt()
}

// ---------------------------------------------------------------------------
// Two receivers, uniform disc
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct DiscInputs {
    pub radius: f64,
    pub temperature: f64,
    /// Disc centre (x₀, y₀) in metres.
    pub center: (f64, f64),
    pub platform_height: f64,
    pub kappa: f64,
    pub wavelength: f64,
    /// Receiver separation Δr > 0.
    pub baseline: f64,
    /// Baseline azimuth φ (radians; 0 = aligned with x).
    pub azimuth: f64,
}

impl DiscInputs {
    pub fn spatial_freq(&self) -> (f64, f64) {
        let v = self.baseline / (self.wavelength * self.platform_height);
        (v * self.azimuth.cos(), v * self.azimuth.sin())
    }

    /// Bessel argument u = 2π a Δr/(λ R).
    pub fn bessel_arg(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.radius * self.baseline
            / (self.wavelength * self.platform_height)
    }

    fn nbar(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius * self.kappa * self.temperature
            / (self.platform_height * self.platform_height)
    }

    fn xi(&self) -> Complex64 {
        let (vx, vy) = self.spatial_freq();
        let eta2 = bessel::two_j1_over_x(self.bessel_arg());
        let ph = Complex64::i()
            * 2.0
            * std::f64::consts::PI
            * (vx * self.center.0 + vy * self.center.1);
        ph.exp() * self.nbar() * eta2
    }

    fn derivs(&self) -> DiscDerivs {
        let (vx, vy) = self.spatial_freq();
        let u = self.bessel_arg();
        let nbar = self.nbar();
        let xi = self.xi();
        let ph = (Complex64::i()
            * 2.0
            * std::f64::consts::PI
            * (vx * self.center.0 + vy * self.center.1))
            .exp();
        DiscDerivs {
            radius: TwoModeDeriv {
                d_nbar: 2.0 * nbar / self.radius,
                d_xi: ph * (2.0 * nbar / self.radius) * bessel::j0(u),
            },
            temperature: TwoModeDeriv {
                d_nbar: nbar / self.temperature,
                d_xi: xi / self.temperature,
            },
            x0: TwoModeDeriv {
                d_nbar: 0.0,
                d_xi: xi * Complex64::i() * 2.0 * std::f64::consts::PI * vx,
            },
            y0: TwoModeDeriv {
                d_nbar: 0.0,
                d_xi: xi * Complex64::i() * 2.0 * std::f64::consts::PI * vy,
            },
        }
    }
}

struct DiscDerivs {
    radius: TwoModeDeriv,
    temperature: TwoModeDeriv,
    x0: TwoModeDeriv,
    y0: TwoModeDeriv,
}

#[derive(Debug, Clone)]
pub struct TwoModeDisc {
    pub nbar: f64,
    pub xi: Complex64,
    /// 2J₁(u)/u at u = 2πaΔr/(λR).
    pub eta2: f64,
    pub qfi_radius: f64,
    pub qfi_temperature: f64,
    pub qfi_radius_temperature: f64,
    /// Location QFI over (x₀, y₀), row-major 2×2.
    pub qfi_location: [f64; 4],
    pub het_radius: f64,
    pub het_temperature: f64,
    /// SLD coefficients (g¹, g²) per parameter.
    pub sld_radius: (f64, Complex64),
    pub sld_temperature: (f64, Complex64),
    pub sld_x0: (f64, Complex64),
    pub sld_y0: (f64, Complex64),
    /// Phase of ξ: 2π(v_x x₀ + v_y y₀) folded to (−π, π].
    pub delta: f64,
}

/// Closed forms for two receivers observing one uniform disc.
pub fn two_mode_disc(inp: &DiscInputs) -> Result<TwoModeDisc, FormulaError> {
    require(inp.radius > 0.0, "radius", "must be positive")?;
    require(inp.temperature > 0.0, "temperature", "must be positive")?;
    require(inp.baseline > 0.0, "baseline", "must be positive")?;
    require(inp.bessel_arg().is_finite(), "baseline", "Bessel argument must be finite")?;
    let nbar = inp.nbar();
    let xi = inp.xi();
    let chi = 0.5 + nbar;
    let d = inp.derivs();

    let q = |a: TwoModeDeriv, b: TwoModeDeriv| two_mode_general_qfi(chi, xi, a, b);
    let h = |a: TwoModeDeriv, b: TwoModeDeriv| two_mode_general_het(chi, xi, a, b);
    let sld = |a: TwoModeDeriv| two_mode_general_sld(chi, xi, a);

    Ok(TwoModeDisc {
        nbar,
        xi,
        eta2: bessel::two_j1_over_x(inp.bessel_arg()),
        qfi_radius: q(d.radius, d.radius)?,
        qfi_temperature: q(d.temperature, d.temperature)?,
        qfi_radius_temperature: q(d.radius, d.temperature)?,
        qfi_location: [
            q(d.x0, d.x0)?,
            q(d.x0, d.y0)?,
            q(d.y0, d.x0)?,
            q(d.y0, d.y0)?,
        ],
        het_radius: h(d.radius, d.radius)?,
        het_temperature: h(d.temperature, d.temperature)?,
        sld_radius: sld(d.radius)?,
        sld_temperature: sld(d.temperature)?,
        sld_x0: sld(d.x0)?,
        sld_y0: sld(d.y0)?,
        delta: xi.arg(),
    })
}

/// Δr → 0 limits for the two-mode disc.
pub fn two_mode_disc_zero_baseline_limits(
    radius: f64,
    temperature: f64,
    platform_height: f64,
    kappa: f64,
) -> (f64, f64, f64) {
    let pi = std::f64::consts::PI;
    let r2 = platform_height * platform_height;
    let den = r2 + 2.0 * pi * radius * radius * kappa * temperature;
    (
        // 𝓕_a → 8πκT/(R² + 2πa²κT)
        8.0 * pi * kappa * temperature / den,
        // 𝓕_T → 2πa²κ/(T(R² + 2πa²κT))
        2.0 * pi * radius * radius * kappa / (temperature * den),
        // 𝓕_aT → 4πaκ/(R² + 2πa²κT)
        4.0 * pi * radius * kappa / den,
    )
}

// ---------------------------------------------------------------------------
// Two point-like sources, two receivers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct TwoPointInputs {
    /// Source radius a ≥ 0 (0 selects the point-source limit η₂ = 1).
    pub radius: f64,
    /// Mean temperature T̄ > 0.
    pub t_mean: f64,
    /// ΔT = T₂ − T₁ with |ΔT| ≤ 2T̄.
    pub delta_t: f64,
    /// Separation components s = r₁ − r₂, metres.
    pub s: (f64, f64),
    /// Centroid components t = (r₁ + r₂)/2, metres.
    pub t: (f64, f64),
    /// Baseline spatial frequency (v_x, v_y), 1/m.
    pub v: (f64, f64),
    /// Single-source solid-angle strength η = πa²/R².
    pub eta: f64,
    pub kappa: f64,
}

impl TwoPointInputs {
    pub fn eta2(&self) -> f64 {
        if self.radius <= 0.0 {
            1.0
        } else {
            let q = self.v.0.hypot(self.v.1);
            bessel::two_j1_over_x(2.0 * std::f64::consts::PI * self.radius * q)
        }
    }

    fn state(&self) -> (f64, Complex64) {
        let t1 = self.t_mean - 0.5 * self.delta_t;
        let t2 = self.t_mean + 0.5 * self.delta_t;
        let (x1, y1) = (self.t.0 + 0.5 * self.s.0, self.t.1 + 0.5 * self.s.1);
        let (x2, y2) = (self.t.0 - 0.5 * self.s.0, self.t.1 - 0.5 * self.s.1);
        let nbar = self.eta * self.kappa * (t1 + t2);
        let two_pi = 2.0 * std::f64::consts::PI;
        let p1 = (Complex64::i() * two_pi * (self.v.0 * x1 + self.v.1 * y1)).exp();
        let p2 = (Complex64::i() * two_pi * (self.v.0 * x2 + self.v.1 * y2)).exp();
        let xi = (p1 * t1 + p2 * t2) * self.eta * self.kappa * self.eta2();
        (nbar, xi)
    }

    fn deriv(&self, which: TwoPointParam) -> TwoModeDeriv {
        let t1 = self.t_mean - 0.5 * self.delta_t;
        let t2 = self.t_mean + 0.5 * self.delta_t;
        let (x1, y1) = (self.t.0 + 0.5 * self.s.0, self.t.1 + 0.5 * self.s.1);
        let (x2, y2) = (self.t.0 - 0.5 * self.s.0, self.t.1 - 0.5 * self.s.1);
        let two_pi = 2.0 * std::f64::consts::PI;
        let p1 = (Complex64::i() * two_pi * (self.v.0 * x1 + self.v.1 * y1)).exp();
        let p2 = (Complex64::i() * two_pi * (self.v.0 * x2 + self.v.1 * y2)).exp();
        let amp = self.eta * self.kappa * self.eta2();
        let pi_ = std::f64::consts::PI;
        match which {
            TwoPointParam::SepX => TwoModeDeriv {
                d_nbar: 0.0,
                d_xi: (p1 * t1 - p2 * t2) * Complex64::i() * pi_ * self.v.0 * amp,
            },
            TwoPointParam::SepY => TwoModeDeriv {
                d_nbar: 0.0,
                d_xi: (p1 * t1 - p2 * t2) * Complex64::i() * pi_ * self.v.1 * amp,
            },
            TwoPointParam::CentroidX => TwoModeDeriv {
                d_nbar: 0.0,
                d_xi: (p1 * t1 + p2 * t2) * Complex64::i() * 2.0 * pi_ * self.v.0 * amp,
            },
            TwoPointParam::CentroidY => TwoModeDeriv {
                d_nbar: 0.0,
                d_xi: (p1 * t1 + p2 * t2) * Complex64::i() * 2.0 * pi_ * self.v.1 * amp,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPointParam {
    SepX,
    SepY,
    CentroidX,
    CentroidY,
}

pub const TWO_POINT_PARAMS: [TwoPointParam; 4] = [
    TwoPointParam::SepX,
    TwoPointParam::SepY,
    TwoPointParam::CentroidX,
    TwoPointParam::CentroidY,
];

#[derive(Debug, Clone)]
pub struct TwoPointSources {
    pub nbar: f64,
    pub xi: Complex64,
    pub eta2: f64,
    /// QFI over (s_x, s_y, t_x, t_y), row-major 4×4.
    pub qfi: [f64; 16],
    /// Heterodyne CFI over the same ordering.
    pub het: [f64; 16],
    /// SLD coefficients (g¹, g²) per parameter, same ordering.
    pub sld: [(f64, Complex64); 4],
    /// Mode-combination phase for separation: δ_s = 2π(t·v) − π.
    pub delta_s: f64,
    /// Mode-combination phase for centroid: δ_t = 2π(t·v) + π/2.
    pub delta_t_phase: f64,
}

/// Closed forms for two point-like sources seen by two receivers.
pub fn two_point_sources(inp: &TwoPointInputs) -> Result<TwoPointSources, FormulaError> {
    require(inp.t_mean > 0.0, "t_mean", "must be positive")?;
    require(
        inp.delta_t.abs() <= 2.0 * inp.t_mean,
        "delta_t",
        "requires |ΔT| ≤ 2T̄",
    )?;
    require(inp.eta > 0.0, "eta", "must be positive")?;
    let eta2 = inp.eta2();
    require(eta2 > 0.0 && eta2 <= 1.0 + 1e-12, "eta2", "requires 0 < η₂ ≤ 1")?;

    let (nbar, xi) = inp.state();
    let chi = 0.5 + nbar;
    let derivs: Vec<TwoModeDeriv> = TWO_POINT_PARAMS.iter().map(|&p| inp.deriv(p)).collect();

    let mut qfi = [0.0; 16];
    let mut het = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            qfi[i * 4 + j] = two_mode_general_qfi(chi, xi, derivs[i], derivs[j])?;
            het[i * 4 + j] = two_mode_general_het(chi, xi, derivs[i], derivs[j])?;
        }
    }
    let mut sld = [(0.0, Complex64::new(0.0, 0.0)); 4];
    for i in 0..4 {
        sld[i] = two_mode_general_sld(chi, xi, derivs[i])?;
    }
    let phase_t = 2.0 * std::f64::consts::PI * (inp.t.0 * inp.v.0 + inp.t.1 * inp.v.1);
    Ok(TwoPointSources {
        nbar,
        xi,
        eta2,
        qfi,
        het,
        sld,
        delta_s: wrap_angle(phase_t - std::f64::consts::PI),
        delta_t_phase: wrap_angle(phase_t + std::f64::consts::PI / 2.0),
    })
}

/// Fold an angle to (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = a % two_pi;
    if x <= -std::f64::consts::PI {
        x += two_pi;
    } else if x > std::f64::consts::PI {
        x -= two_pi;
    }
    x
}

/// s → 0 limit of the separation QFI at ΔT = 0 (1D aligned case):
/// 4π²v²ηκT̄.
pub fn separation_qfi_limit(v: f64, eta: f64, kappa: f64, t_mean: f64) -> f64 {
    4.0 * std::f64::consts::PI.powi(2) * v * v * eta * kappa * t_mean
}

/// s → 0 limit of the centroid QFI at ΔT = 0: 16π²v²ηκT̄ (the doubled
/// 32π² form circulates; the engine arbitrates — see `variants`).
pub fn centroid_qfi_limit(v: f64, eta: f64, kappa: f64, t_mean: f64) -> f64 {
    16.0 * std::f64::consts::PI.powi(2) * v * v * eta * kappa * t_mean
}

// ---------------------------------------------------------------------------
// Alternative published algebraic forms (arbitrated by `validate`)
// ---------------------------------------------------------------------------

pub mod variants {
    //! Alternative algebraic forms of catalog quantities. Each is evaluated
    //! side by side with the canonical entry by the validation battery, which
    //! declares the engine-matching form canonical. Names describe the
    //! distinguishing algebraic feature, not a provenance.

    use super::*;

    /// Shared pieces for the disc variants.
    struct DiscPieces {
        a: f64,
        t: f64,
        r2: f64,
        kappa: f64,
        lam: f64,
        dr: f64,
        j0: f64,
        j1: f64,
        x: f64, // π a² κ T
    }

    fn pieces(inp: &DiscInputs) -> DiscPieces {
        let u = inp.bessel_arg();
        DiscPieces {
            a: inp.radius,
            t: inp.temperature,
            r2: inp.platform_height * inp.platform_height,
            kappa: inp.kappa,
            lam: inp.wavelength,
            dr: inp.baseline,
            j0: bessel::j0(u),
            j1: bessel::j1(u),
            x: std::f64::consts::PI * inp.radius * inp.radius * inp.kappa * inp.temperature,
        }
    }

    fn radius_qfi_with_denominator(inp: &DiscInputs, squared_radius_term: bool) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let first = pi * pi * p.a * p.a * p.dr * p.dr - p.lam * p.lam * p.r2 * p.j1 * p.j1;
        let corr = if squared_radius_term { p.a * p.a } else { 1.0 };
        let second = p.dr * p.dr * (p.x + p.r2).powi(2)
            - corr * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1;
        let da = first * second;
        let bracket = pi * p.a * p.dr * p.dr * (p.x + p.r2) * (p.j0 * p.j0 + 1.0)
            - 2.0 * p.dr * p.lam * p.r2.sqrt() * (2.0 * p.x + p.r2) * p.j0 * p.j1
            + p.a * p.kappa * p.lam * p.lam * p.r2 * p.t * (p.j0 * p.j0 + 1.0) * p.j1 * p.j1;
        8.0 * pi * pi * p.a * p.dr * p.dr * p.kappa * p.t * bracket / da
    }

    /// Disc radius QFI with the radius-squared factor restored in the
    /// denominator (dimensionally consistent reading).
    pub fn disc_qfi_radius_corrected_denominator(inp: &DiscInputs) -> f64 {
        radius_qfi_with_denominator(inp, true)
    }

    /// Disc radius QFI with the compact (dimensionally inconsistent)
    /// denominator as circulated.
    pub fn disc_qfi_radius_compact_denominator(inp: &DiscInputs) -> f64 {
        radius_qfi_with_denominator(inp, false)
    }

    /// Disc temperature QFI, polynomial form.
    pub fn disc_qfi_temperature_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let num = 2.0 * p.kappa * p.a * p.a
            * (pi * p.dr * p.dr * (p.x + p.r2)
                - p.kappa * p.lam * p.lam * p.r2 * p.t * p.j1 * p.j1);
        let den = p.t
            * (p.dr * p.dr * (p.x + p.r2).powi(2)
                - p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1);
        num / den
    }

    /// Disc radius-temperature QFI cross entry, polynomial form.
    pub fn disc_qfi_cross_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let r = p.r2.sqrt();
        let num = 4.0 * pi * p.a * p.dr * p.kappa
            * (p.dr * (p.x + p.r2) - p.a * p.kappa * p.lam * r * p.t * p.j0 * p.j1);
        let den = p.dr * p.dr * (p.x + p.r2).powi(2)
            - p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1;
        num / den
    }

    /// Location QFI with the wavelength-squared numerator (8π²R²λ²κT J₁² v_i v_j / D).
    pub fn location_qfi_wavelength_numerator(inp: &DiscInputs, vi: f64, vj: f64) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let den = pi * p.dr * p.dr * (p.x + p.r2)
            - p.kappa * p.lam * p.lam * p.r2 * p.t * p.j1 * p.j1;
        8.0 * pi * pi * p.r2 * p.lam * p.lam * p.kappa * p.t * p.j1 * p.j1 * vi * vj / den
    }

    /// Location QFI with the baseline-squared numerator (8π²Δr²κT J₁² v_i v_j / D).
    pub fn location_qfi_baseline_numerator(inp: &DiscInputs, vi: f64, vj: f64) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let den = pi * p.dr * p.dr * (p.x + p.r2)
            - p.kappa * p.lam * p.lam * p.r2 * p.t * p.j1 * p.j1;
        8.0 * pi * pi * p.dr * p.dr * p.kappa * p.t * p.j1 * p.j1 * vi * vj / den
    }

    /// Disc heterodyne radius CFI, sixth-order polynomial form.
    pub fn disc_het_radius_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let r = p.r2.sqrt();
        let xr = p.x + p.r2;
        let da = (p.dr * p.dr * xr * xr
            - p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1)
            .powi(4);
        let klrt = p.kappa * p.lam * r * p.t;
        let bracket = 4.0 * p.a.powi(5) * klrt.powi(5) * p.j0 * p.j1.powi(5)
            - 2.0 * p.a * p.a * p.dr.powi(3) * klrt.powi(2) * xr.powi(3)
                * (p.j0 * p.j0 + 1.0)
                * p.j1
                * p.j1
            + p.dr.powi(5) * xr.powi(5) * (p.j0 * p.j0 + 1.0)
            - 4.0 * p.a * p.dr.powi(4) * klrt * xr.powi(4) * p.j0 * p.j1
            - 7.0 * p.a.powi(4) * p.dr * klrt.powi(4) * xr * (p.j0 * p.j0 + 1.0) * p.j1.powi(4)
            + 16.0 * p.a.powi(3) * p.dr * p.dr * klrt.powi(3) * xr * xr * p.j0 * p.j1.powi(3);
        8.0 * pi * pi * p.a * p.a * p.kappa * p.kappa * p.t * p.t * p.dr.powi(3) * xr * bracket
            / da
    }

    /// Disc heterodyne temperature CFI, polynomial form.
    pub fn disc_het_temperature_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let xr = p.x + p.r2;
        let dt = (p.dr * p.dr * xr * xr
            - p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1)
            .powi(4);
        let bracket = pi * pi * p.a * p.a * p.dr.powi(6) * xr.powi(5)
            - p.a.powi(4) * p.kappa.powi(4) * p.lam.powi(6) * p.r2.powi(3) * p.t.powi(4)
                * (3.0 * p.x + 7.0 * p.r2)
                * p.j1.powi(6)
            + p.dr.powi(4) * p.lam * p.lam * p.r2 * xr.powi(3)
                * (-5.0 * p.x * p.x - 2.0 * p.x * p.r2 + p.r2 * p.r2)
                * p.j1
                * p.j1
            + p.a * p.a * p.dr * p.dr * p.kappa * p.kappa * p.lam.powi(4) * p.r2 * p.r2
                * p.t
                * p.t
                * (7.0 * p.x.powi(3) + 19.0 * p.x * p.x * p.r2 + 10.0 * p.x * p.r2 * p.r2
                    - 2.0 * p.r2.powi(3))
                * p.j1.powi(4);
        2.0 * p.a * p.a * p.dr * p.dr * p.kappa * p.kappa * xr * bracket / dt
    }

    /// Disc SLD diagonal for radius, polynomial form (corrected denominator).
    pub fn disc_sld_g1_radius_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let r = p.r2.sqrt();
        let first = pi * pi * p.a * p.a * p.dr * p.dr - p.lam * p.lam * p.r2 * p.j1 * p.j1;
        let second = p.dr * p.dr * (p.x + p.r2).powi(2)
            - p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1;
        let da = first * second;
        (2.0 * pi * p.dr * p.dr * p.r2 / da)
            * (pi * p.a * p.dr * p.dr * (p.x + p.r2)
                + p.lam
                    * r
                    * p.j1
                    * (p.a * p.kappa * p.lam * r * p.t * p.j1
                        - p.dr * (2.0 * p.x + p.r2) * p.j0))
    }

    /// Disc SLD off-diagonal magnitude for radius, polynomial form.
    pub fn disc_sld_g2_radius_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let pi = std::f64::consts::PI;
        let r = p.r2.sqrt();
        let first = pi * pi * p.a * p.a * p.dr * p.dr - p.lam * p.lam * p.r2 * p.j1 * p.j1;
        let second = p.dr * p.dr * (p.x + p.r2).powi(2)
            - p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1;
        let da = first * second;
        (2.0 * pi * p.dr * p.dr * p.r2 / da)
            * (p.a
                * p.j0
                * (pi * p.dr * p.dr * (p.x + p.r2)
                    + p.kappa * p.lam * p.lam * p.r2 * p.t * p.j1 * p.j1)
                - p.dr * p.lam * r * (2.0 * p.x + p.r2) * p.j1)
    }

    /// Disc SLD diagonal for temperature, polynomial form.
    pub fn disc_sld_g1_temperature_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let num = p.dr * p.dr * p.r2 * (p.x + p.r2);
        let den = p.dr * p.dr * p.t * (p.x + p.r2).powi(2)
            - p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t.powi(3) * p.j1 * p.j1;
        num / den
    }

    /// Disc SLD off-diagonal for temperature, signed polynomial form (carries
    /// a leading minus relative to the canonical solve).
    pub fn disc_sld_g2_temperature_polynomial(inp: &DiscInputs) -> f64 {
        let p = pieces(inp);
        let r = p.r2.sqrt();
        let num = -p.a * p.dr * p.kappa * p.lam * p.r2 * r * p.j1;
        let den = p.a * p.a * p.kappa * p.kappa * p.lam * p.lam * p.r2 * p.t * p.t * p.j1 * p.j1
            - p.dr * p.dr * (p.x + p.r2).powi(2);
        num / den
    }

    /// Separation QFI, trigonometric polynomial form (ΔT general, point
    /// sources).
    pub fn separation_qfi_polynomial(inp: &TwoPointInputs, vi: f64, vj: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let (ek, t, dt) = (inp.eta * inp.kappa, inp.t_mean, inp.delta_t);
        let w = inp.s.0 * inp.v.0 + inp.s.1 * inp.v.1;
        let four_t2 = 4.0 * t * t - dt * dt;
        let num = 2.0 * pi * pi * inp.eta * inp.kappa * vi * vj
            * (ek * ek
                * four_t2
                * (four_t2 * (4.0 * pi * w).cos() + 16.0 * t * t * (2.0 * pi * w).cos())
                - ek * ek * (dt.powi(4) - 24.0 * dt * dt * t * t + 80.0 * t.powi(4))
                - 128.0 * ek * t.powi(3)
                - 32.0 * t * t);
        let den = ek
            * four_t2
            * (ek * ek * (dt * dt - 4.0 * t * t) * (4.0 * pi * w).cos()
                + 4.0 * (ek * (-dt * dt * ek + 4.0 * ek * t * t + 6.0 * t) + 1.0)
                    * (2.0 * pi * w).cos())
            - 3.0 * ek.powi(3) * (dt * dt - 4.0 * t * t).powi(2)
            + 24.0 * ek * ek * t * (dt * dt - 4.0 * t * t)
            + 4.0 * ek * (dt * dt - 20.0 * t * t)
            - 16.0 * t;
        num / den
    }

    /// Centroid QFI, trigonometric form — carries a factor 2 relative to the
    /// canonical eigenmode result.
    pub fn centroid_qfi_doubled(inp: &TwoPointInputs, vi: f64, vj: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let (ek, t, dt) = (inp.eta * inp.kappa, inp.t_mean, inp.delta_t);
        let w = inp.s.0 * inp.v.0 + inp.s.1 * inp.v.1;
        let num = 16.0 * pi * pi * vi * vj * ek
            * ((4.0 * t * t - dt * dt) * (2.0 * pi * w).cos() + dt * dt + 4.0 * t * t);
        let den = 4.0 * t + 4.0 * ek * t * t
            - dt * dt * ek
            - ek * (4.0 * t * t - dt * dt) * (2.0 * pi * w).cos();
        num / den
    }

    /// Separation-centroid QFI cross entry, trigonometric form.
    pub fn cross_qfi_polynomial(inp: &TwoPointInputs, vi: f64, vj: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let (ek, t, dt) = (inp.eta * inp.kappa, inp.t_mean, inp.delta_t);
        let w = inp.s.0 * inp.v.0 + inp.s.1 * inp.v.1;
        let num = 32.0 * pi * pi * dt * ek * t * vi * vj;
        let den = dt * dt * ek + ek * (4.0 * t * t - dt * dt) * (2.0 * pi * w).cos()
            - 4.0 * ek * t * t
            - 4.0 * t;
        num / den
    }

    /// Centroid small-separation limit carrying the factor 32π² (twice the
    /// canonical 16π² limit).
    pub fn centroid_qfi_limit_doubled(v: f64, eta: f64, kappa: f64, t_mean: f64) -> f64 {
        32.0 * std::f64::consts::PI.powi(2) * v * v * eta * kappa * t_mean
    }

    /// Heterodyne separation CFI, quartic-denominator trigonometric form
    /// (ΔT = 0).
    pub fn separation_het_polynomial(inp: &TwoPointInputs, vi: f64, vj: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let m = inp.eta * inp.kappa * inp.t_mean;
        let w = inp.s.0 * inp.v.0 + inp.s.1 * inp.v.1;
        let sw = (pi * w).sin();
        let den = (1.0 + 4.0 * m + 2.0 * m * m - 2.0 * m * m * (2.0 * pi * w).cos()).powi(4);
        let bracket = 1.0 - 14.0 * m.powi(4) * (4.0 * pi * w).cos()
            - 4.0 * m * m * (2.0 * pi * w).cos() * (2.0 * m * (9.0 * m + 2.0) + 1.0)
            - 2.0 * m * (m * (m * (21.0 * m - 8.0) - 10.0) - 4.0);
        8.0 * pi * pi * m * m * vi * vj * sw * sw * (2.0 * m + 1.0).powi(2) * bracket / den
    }

    /// Heterodyne centroid CFI, squared-denominator trigonometric form
    /// (ΔT = 0).
    pub fn centroid_het_polynomial(inp: &TwoPointInputs, vi: f64, vj: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let m = inp.eta * inp.kappa * inp.t_mean;
        let w = inp.s.0 * inp.v.0 + inp.s.1 * inp.v.1;
        let cw = (pi * w).cos();
        let den = (-2.0 * m * m * (2.0 * pi * w).cos() + 2.0 * m * (m + 2.0) + 1.0).powi(2);
        32.0 * pi * pi * m * m * vi * vj * (2.0 * m + 1.0).powi(2) * cw * cw / den
    }

    /// General two-mode QFI as a single rational expression in (χ, ξ, ∂χ, ∂ξ).
    pub fn general_qfi_polynomial(chi: f64, xi: Complex64, d: TwoModeDeriv) -> f64 {
        let x2 = xi.norm_sqr();
        let chi2 = chi * chi;
        let dchi = d.d_nbar;
        let dxi = d.d_xi;
        let den = (-1.0 + 4.0 * chi2 - 4.0 * x2)
            * (16.0 * chi2 * chi2 + (1.0 - 4.0 * x2).powi(2) - 8.0 * chi2 * (1.0 + x2));
        let t12 = 2.0 * (dxi.conj() * dxi).re
            * ((1.0 - 4.0 * chi2).powi(2) - 4.0 * (1.0 + 4.0 * chi2) * x2);
        let inner = xi * dxi.conj() * (1.0 + 4.0 * chi2 - 4.0 * x2)
            + Complex64::new(2.0 * chi * dchi * (1.0 - 4.0 * chi2 + 4.0 * x2), 0.0);
        let t34 = 4.0 * ((xi * dxi.conj() + xi.conj() * dxi) * inner).re;
        let t5 = 2.0 * dchi
            * (-1.0 + 4.0 * chi2 - 4.0 * x2)
            * (-4.0 * chi * (xi * dxi.conj() + xi.conj() * dxi).re
                + dchi * (-1.0 + 4.0 * chi2 + 4.0 * x2));
        8.0 * (t12 + t34 + t5) / den
    }
}
