//! Cross-validation battery: closed forms against the generic engines,
//! analytic against finite-difference derivatives, limit laws, measurement
//! inequalities, quadrature convergence, and arbitration of the alternative
//! algebraic formula variants.
//!
//! Every check reports its tolerance and the observed error; the runner is
//! fully deterministic for a given seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical_fisher::heterodyne_cfi;
use crate::closed_forms::{self as cf, variants, DiscInputs, TwoModeDeriv, TwoPointInputs};
use crate::gaussian_fisher::{
    detection_modes, qfi_matrix, sld_matrix, EngineOptions, PairingConvention,
};
use crate::numerics::rasterize_disc;
use crate::scenario::{validate_scenario, ParamId, RawPhysics, RawScenario, Scenario, SourceModel};
use crate::visibility::{covariance, visibility_matrix, DerivativeMode};

/// Default seed for the randomized property draws.
pub const DEFAULT_SEED: u64 = 20240809;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: String,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
    pub note: String,
}

impl CheckResult {
    fn new(id: impl Into<String>, tolerance: f64, observed: f64, note: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            tolerance,
            observed,
            passed: observed <= tolerance,
            note: note.into(),
        }
    }
}

const R: f64 = 758e3;
const F0: f64 = 1.4235e9;
const KAP: f64 = 9.4;

fn lambda() -> f64 {
    crate::scenario::SPEED_OF_LIGHT / F0
}

fn raw(positions: Vec<(f64, f64)>, source: SourceModel, params: Vec<ParamId>) -> RawScenario {
    RawScenario {
        physics: RawPhysics {
            center_frequency: Some(F0),
            bandwidth: Some(7e6),
            platform_height: Some(R),
            platform_speed: Some(7e3),
            kappa_override: Some(KAP),
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

fn engine_qfi(s: &Scenario) -> Vec<f64> {
    let vis = visibility_matrix(s, DerivativeMode::Analytic).expect("visibility");
    let state = covariance(&vis);
    let f = qfi_matrix(&state, &EngineOptions::default()).expect("qfi");
    f.entries
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Run the complete battery. Returns one result per check.
pub fn run_battery(seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(single_mode_gate());
    out.extend(engine_vs_catalog_grid());
    out.push(derivative_consistency());
    out.extend(heterodyne_consistency());
    out.push(cfi_bounded_by_qfi(seed));
    out.push(saturation_checks());
    out.push(quadrature_check());
    out.extend(limit_checks());
    out.extend(variant_arbitration());
    out
}

/// Gate: the tensor pairing must reproduce the single-mode closed form
/// 4(∂χ)²/(4χ²−1) on randomized single-mode states.
fn single_mode_gate() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut worst = 0.0f64;
    for _ in 0..40 {
        let nbar = rng.gen::<f64>() * 25.0 + 1e-3;
        let dn = rng.gen::<f64>() * 2.0 - 1.0;
        let xi = crate::numerics::ComplexMatrix::from_fn(1, 1, |_, _| Complex64::new(nbar, 0.0));
        let dxi = crate::numerics::ComplexMatrix::from_fn(1, 1, |_, _| Complex64::new(dn, 0.0));
        let vis = crate::visibility::VisibilitySet {
            n_modes: 1,
            nbar,
            xi,
            d_xi: vec![(ParamId::Temperature, dxi)],
        };
        let state = covariance(&vis);
        let f = qfi_matrix(&state, &EngineOptions::default()).expect("qfi");
        let chi = 0.5 + nbar;
        let want = 4.0 * dn * dn / (4.0 * chi * chi - 1.0);
        worst = worst.max(rel(f.entries[0], want));
    }
    CheckResult::new(
        "single_mode_pairing_gate",
        1e-10,
        worst,
        "engine vs 4(dχ)²/(4χ²−1), 40 random states",
    )
}

/// Deterministic 200-point grid: engine vs canonical catalog entries.
fn engine_vs_catalog_grid() -> Vec<CheckResult> {
    let mut results = Vec::new();

    // --- 40 single-receiver points (8 radii x 5 temperatures)
    let mut worst = 0.0f64;
    for ia in 0..8 {
        for it in 0..5 {
            let a = 2e3 + ia as f64 * 6e3;
            let t = 100.0 + it as f64 * 75.0;
            let s = validate_scenario(&raw(
                vec![(0.0, 0.0)],
                disc(a, t, (0.0, 0.0)),
                vec![ParamId::Radius, ParamId::Temperature],
            ))
            .unwrap();
            let f = engine_qfi(&s);
            let c = cf::single_receiver(a, t, R, KAP).unwrap();
            worst = worst.max(rel(f[0], c.qfi_radius));
            worst = worst.max(rel(f[3], c.qfi_temperature));
            worst = worst.max(rel(f[1], c.qfi_radius_temperature));
        }
    }
    results.push(CheckResult::new(
        "engine_vs_catalog_single_receiver",
        1e-6,
        worst,
        "40-point (a, T) grid, 3 entries each",
    ));

    // --- 80 two-mode disc points (4 radii x 4 baselines x 5 centres)
    let mut worst = 0.0f64;
    for ia in 0..4 {
        for idr in 0..4 {
            for ic in 0..5 {
                let a = 8e3 + ia as f64 * 9e3;
                let dr = 1.0 + idr as f64 * 2.5;
                let x0 = -20e3 + ic as f64 * 10e3;
                let s = validate_scenario(&raw(
                    vec![(0.0, 0.0), (dr, 0.0)],
                    disc(a, 300.0, (x0, 0.5 * x0)),
                    vec![ParamId::Radius, ParamId::Temperature, ParamId::X0],
                ))
                .unwrap();
                let f = engine_qfi(&s);
                let inp = DiscInputs {
                    radius: a,
                    temperature: 300.0,
                    center: (x0, 0.5 * x0),
                    platform_height: R,
                    kappa: KAP,
                    wavelength: lambda(),
                    baseline: dr,
                    azimuth: 0.0,
                };
                let c = cf::two_mode_disc(&inp).unwrap();
                // entries: [aa, aT, ax0; Ta, TT, Tx0; x0a, x0T, x0x0]
                worst = worst.max(rel(f[0], c.qfi_radius));
                worst = worst.max(rel(f[4], c.qfi_temperature));
                worst = worst.max(rel(f[1], c.qfi_radius_temperature));
                worst = worst.max(rel(f[8], c.qfi_location[0]));
            }
        }
    }
    results.push(CheckResult::new(
        "engine_vs_catalog_two_mode_disc",
        1e-6,
        worst,
        "80-point (a, Δr, x₀) grid, 4 entries each",
    ));

    // --- 80 two-point points (5 separations x 4 ΔT x 4 baselines)
    let mut worst = 0.0f64;
    let a = 4.276e3; // η ≈ 1e-4
    let eta = std::f64::consts::PI * a * a / (R * R);
    for isv in 0..5 {
        for idt in 0..4 {
            for idr in 0..4 {
                let dr = 1.0 + idr as f64 * 1.5;
                let v = dr / (lambda() * R);
                let sv = 0.12 + isv as f64 * 0.18;
                let s_m = sv / v;
                let dt = idt as f64 * 120.0;
                let (t1, t2) = (300.0 - dt / 2.0, 300.0 + dt / 2.0);
                let tx = 3e3;
                let s = validate_scenario(&raw(
                    vec![(0.0, 0.0), (dr, 0.0)],
                    SourceModel::TwoDiscs {
                        radius: a,
                        t1,
                        t2,
                        center1: (tx + s_m / 2.0, 0.0),
                        center2: (tx - s_m / 2.0, 0.0),
                    },
                    vec![ParamId::SepX, ParamId::CentroidX],
                ))
                .unwrap();
                let f = engine_qfi(&s);
                let inp = TwoPointInputs {
                    radius: a,
                    t_mean: 300.0,
                    delta_t: dt,
                    s: (s_m, 0.0),
                    t: (tx, 0.0),
                    v: (v, 0.0),
                    eta,
                    kappa: KAP,
                };
                let c = cf::two_point_sources(&inp).unwrap();
                worst = worst.max(rel(f[0], c.qfi[0])); // ss
                worst = worst.max(rel(f[3], c.qfi[2 * 4 + 2])); // tt
                if dt > 0.0 {
                    worst = worst.max(rel(f[1], c.qfi[2])); // st
                }
            }
        }
    }
    results.push(CheckResult::new(
        "engine_vs_catalog_two_point",
        1e-6,
        worst,
        "80-point (s·v, ΔT, Δr) grid, separation/centroid/cross entries",
    ));

    results
}

/// Analytic vs finite-difference derivatives across all catalog parameters.
fn derivative_consistency() -> CheckResult {
    let mut worst = 0.0f64;
    let scenarios = vec![
        validate_scenario(&raw(
            vec![(0.0, 0.0), (4.0, 1.0)],
            disc(20e3, 300.0, (12e3, -6e3)),
            vec![ParamId::Radius, ParamId::Temperature, ParamId::X0, ParamId::Y0],
        ))
        .unwrap(),
        validate_scenario(&raw(
            vec![(0.0, 0.0), (3.0, 0.0)],
            SourceModel::TwoDiscs {
                radius: 4e3,
                t1: 250.0,
                t2: 330.0,
                center1: (18e3, 2e3),
                center2: (-14e3, -3e3),
            },
            vec![
                ParamId::Radius,
                ParamId::Temperature,
                ParamId::T1,
                ParamId::T2,
                ParamId::SepX,
                ParamId::SepY,
                ParamId::CentroidX,
                ParamId::CentroidY,
            ],
        ))
        .unwrap(),
    ];
    for s in &scenarios {
        let va = visibility_matrix(s, DerivativeMode::Analytic).unwrap();
        let vf = visibility_matrix(s, DerivativeMode::FiniteDifference).unwrap();
        for ((_, da), (_, df)) in va.d_xi.iter().zip(&vf.d_xi) {
            worst = worst.max(da.sub(df).max_abs() / da.max_abs().max(1e-300));
        }
    }
    CheckResult::new(
        "derivatives_analytic_vs_finite_difference",
        1e-6,
        worst,
        "dΞ for every catalog parameter, disc and two-disc scenarios",
    )
}

/// Heterodyne trace engine vs canonical catalog closed forms.
fn heterodyne_consistency() -> Vec<CheckResult> {
    let mut results = Vec::new();

    // 20-point (a, Δr) disc grid
    let mut worst = 0.0f64;
    for ia in 0..5 {
        for idr in 0..4 {
            let a = 6e3 + ia as f64 * 9e3;
            let dr = 1.0 + idr as f64 * 2.0;
            let s = validate_scenario(&raw(
                vec![(0.0, 0.0), (dr, 0.0)],
                disc(a, 300.0, (5e3, -2e3)),
                vec![ParamId::Radius, ParamId::Temperature],
            ))
            .unwrap();
            let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
            let cfi = heterodyne_cfi(&vis).unwrap();
            let inp = DiscInputs {
                radius: a,
                temperature: 300.0,
                center: (5e3, -2e3),
                platform_height: R,
                kappa: KAP,
                wavelength: lambda(),
                baseline: dr,
                azimuth: 0.0,
            };
            let c = cf::two_mode_disc(&inp).unwrap();
            worst = worst.max(rel(cfi.get(0, 0), c.het_radius));
            worst = worst.max(rel(cfi.get(1, 1), c.het_temperature));
        }
    }
    results.push(CheckResult::new(
        "heterodyne_trace_vs_catalog_disc",
        1e-6,
        worst,
        "20-point (a, Δr) grid",
    ));

    // two-point heterodyne
    let mut worst = 0.0f64;
    let a = 4.276e3;
    let eta = std::f64::consts::PI * a * a / (R * R);
    for isv in 0..6 {
        let dr = 4.0;
        let v = dr / (lambda() * R);
        let sv = 0.1 + isv as f64 * 0.15;
        let s_m = sv / v;
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (dr, 0.0)],
            SourceModel::TwoDiscs {
                radius: a,
                t1: 300.0,
                t2: 300.0,
                center1: (s_m / 2.0, 0.0),
                center2: (-s_m / 2.0, 0.0),
            },
            vec![ParamId::SepX, ParamId::CentroidX],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let cfi = heterodyne_cfi(&vis).unwrap();
        let inp = TwoPointInputs {
            radius: a,
            t_mean: 300.0,
            delta_t: 0.0,
            s: (s_m, 0.0),
            t: (0.0, 0.0),
            v: (v, 0.0),
            eta,
            kappa: KAP,
        };
        let c = cf::two_point_sources(&inp).unwrap();
        worst = worst.max(rel(cfi.get(0, 0), c.het[0]));
        worst = worst.max(rel(cfi.get(1, 1), c.het[2 * 4 + 2]));
    }
    results.push(CheckResult::new(
        "heterodyne_trace_vs_catalog_two_point",
        1e-6,
        worst,
        "6-point separation sweep, ΔT = 0",
    ));

    results
}

/// Data-processing inequality over randomized scenarios.
fn cfi_bounded_by_qfi(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_excess = 0.0f64;
    for _ in 0..500 {
        let a = 3e3 + rng.gen::<f64>() * 50e3;
        let t = 60.0 + rng.gen::<f64>() * 440.0;
        let dr = 0.4 + rng.gen::<f64>() * 11.0;
        let cx = (rng.gen::<f64>() - 0.5) * 60e3;
        let cy = (rng.gen::<f64>() - 0.5) * 60e3;
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (dr, 0.0)],
            disc(a, t, (cx, cy)),
            vec![ParamId::Radius, ParamId::Temperature],
        ))
        .unwrap();
        let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
        let state = covariance(&vis);
        let qfi = qfi_matrix(&state, &EngineOptions::default()).unwrap();
        let cfi = heterodyne_cfi(&vis).unwrap();
        for i in 0..2 {
            let excess = (cfi.get(i, i) - qfi.get(i, i)) / qfi.get(i, i).max(1e-300);
            worst_excess = worst_excess.max(excess);
        }
    }
    CheckResult::new(
        "heterodyne_cfi_bounded_by_qfi",
        1e-8,
        worst_excess.max(0.0),
        "500 random disc scenarios, diagonal entries",
    )
}

/// Photon counting in detection modes saturates the QFI wherever the SLD
/// commutes with the state.
fn saturation_checks() -> CheckResult {
    let mut worst = 0.0f64;
    // single mode, both parameters
    for p in [ParamId::Radius, ParamId::Temperature] {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![p],
        ))
        .unwrap();
        worst = worst.max(saturation_defect(&s, p));
    }
    // two modes, centred disc
    for p in [ParamId::Radius, ParamId::Temperature] {
        let s = validate_scenario(&raw(
            vec![(0.0, 0.0), (4.0, 0.0)],
            disc(30e3, 300.0, (0.0, 0.0)),
            vec![p],
        ))
        .unwrap();
        worst = worst.max(saturation_defect(&s, p));
    }
    // two point sources at zero centroid, separation estimation
    let v = 4.0 / (lambda() * R);
    let s_m = 0.35 / v;
    let s = validate_scenario(&raw(
        vec![(0.0, 0.0), (4.0, 0.0)],
        SourceModel::TwoDiscs {
            radius: 4.276e3,
            t1: 300.0,
            t2: 300.0,
            center1: (s_m / 2.0, 0.0),
            center2: (-s_m / 2.0, 0.0),
        },
        vec![ParamId::SepX],
    ))
    .unwrap();
    worst = worst.max(saturation_defect(&s, ParamId::SepX));

    CheckResult::new(
        "photon_counting_saturates_qfi",
        1e-8,
        worst,
        "single mode (a, T); two-mode centred disc (a, T); two-point separation at zero centroid",
    )
}

fn saturation_defect(s: &Scenario, p: ParamId) -> f64 {
    let vis = visibility_matrix(s, DerivativeMode::Analytic).unwrap();
    let state = covariance(&vis);
    let opts = EngineOptions::default();
    let qfi = qfi_matrix(&state, &opts).unwrap();
    let sld = sld_matrix(&state, p, &opts).unwrap();
    let modes = detection_modes(&sld, &vis).unwrap();
    let pc = crate::classical_fisher::photon_counting_cfi(&modes, &vis, &sld.matrix).unwrap();
    rel(pc, qfi.entries[0])
}

/// Disc quadrature against the analytic Bessel visibility at 1024².
fn quadrature_check() -> CheckResult {
    let a = 10e3;
    let center = (20e3, -8e3);
    let analytic = validate_scenario(&raw(
        vec![(0.0, 0.0), (6.0, 2.0)],
        disc(a, 300.0, center),
        vec![],
    ))
    .unwrap();
    let map = rasterize_disc(a, 300.0, center, 1.05 * a, 1024);
    let raster = validate_scenario(&raw(
        vec![(0.0, 0.0), (6.0, 2.0)],
        SourceModel::PixelMap(map),
        vec![],
    ))
    .unwrap();
    let va = visibility_matrix(&analytic, DerivativeMode::Analytic).unwrap();
    let vr = visibility_matrix(&raster, DerivativeMode::Analytic).unwrap();
    let err = ((va.nbar - vr.nbar).abs() / va.nbar)
        .max((va.xi[(0, 1)] - vr.xi[(0, 1)]).norm() / va.xi[(0, 1)].norm());
    CheckResult::new(
        "quadrature_vs_analytic_disc",
        1e-3,
        err,
        "1024² raster of an off-centre disc",
    )
}

/// Limit laws approached with the documented convergence.
fn limit_checks() -> Vec<CheckResult> {
    let mut results = Vec::new();

    // two-mode a → 0 doubling of the single-receiver radius QFI
    let a = 1e-3 * R / (std::f64::consts::PI * KAP * 300.0).sqrt();
    let s2 = validate_scenario(&raw(
        vec![(0.0, 0.0), (995.0, 0.0)],
        disc(a, 300.0, (0.0, 0.0)),
        vec![ParamId::Radius],
    ))
    .unwrap();
    let s1 = validate_scenario(&raw(
        vec![(0.0, 0.0)],
        disc(a, 300.0, (0.0, 0.0)),
        vec![ParamId::Radius],
    ))
    .unwrap();
    let f2 = engine_qfi(&s2)[0];
    let f1 = engine_qfi(&s1)[0];
    let lim = 2.0 * cf::single_receiver_radius_limit(300.0, R, KAP);
    results.push(CheckResult::new(
        "two_mode_radius_qfi_doubled_at_small_radius",
        5e-3,
        rel(f2, lim),
        format!("engine ratio two/one = {:.9}", f2 / f1),
    ));

    // Δr → 0 disc limits approached over three decades
    let (la, lt, lat) = cf::two_mode_disc_zero_baseline_limits(30e3, 300.0, R, KAP);
    let mut errs = Vec::new();
    for dr in [1e-1, 1e-2, 1e-3] {
        let d = cf::two_mode_disc(&DiscInputs {
            radius: 30e3,
            temperature: 300.0,
            center: (0.0, 0.0),
            platform_height: R,
            kappa: KAP,
            wavelength: lambda(),
            baseline: dr,
            azimuth: 0.0,
        })
        .unwrap();
        errs.push(
            rel(d.qfi_radius, la)
                .max(rel(d.qfi_temperature, lt))
                .max(rel(d.qfi_radius_temperature, lat)),
        );
    }
    let monotone = errs[0] > errs[1] && errs[1] > errs[2];
    results.push(CheckResult {
        id: "disc_zero_baseline_limits".into(),
        tolerance: 1e-8,
        observed: errs[2],
        passed: monotone && errs[2] < 1e-8,
        note: format!("errors over three baseline decades: {errs:?}"),
    });

    // separation QFI limit at sv = 1e-3 within 0.5%
    let v = 4.0 / (lambda() * R);
    let tp = cf::two_point_sources(&TwoPointInputs {
        radius: 0.0,
        t_mean: 300.0,
        delta_t: 0.0,
        s: (1e-3 / v, 0.0),
        t: (0.0, 0.0),
        v: (v, 0.0),
        eta: 1e-4,
        kappa: KAP,
    })
    .unwrap();
    let lim = cf::separation_qfi_limit(v, 1e-4, KAP, 300.0);
    results.push(CheckResult::new(
        "separation_qfi_small_s_limit",
        5e-3,
        rel(tp.qfi[0], lim),
        "point sources, sv = 1e-3 vs 4π²v²ηκT̄",
    ));

    results
}

/// Evaluate alternative formula variants against the engine and declare the
/// canonical one. Each check passes when the canonical form matches the
/// engine to 1e-6; the note records the alternate's deviation.
fn variant_arbitration() -> Vec<CheckResult> {
    let mut results = Vec::new();
    let inp = DiscInputs {
        radius: 30e3,
        temperature: 300.0,
        center: (0.0, 0.0),
        platform_height: R,
        kappa: KAP,
        wavelength: lambda(),
        baseline: 4.0,
        azimuth: 0.0,
    };
    let s = validate_scenario(&raw(
        vec![(0.0, 0.0), (4.0, 0.0)],
        disc(30e3, 300.0, (0.0, 0.0)),
        vec![ParamId::Radius, ParamId::Temperature, ParamId::X0],
    ))
    .unwrap();
    let f = engine_qfi(&s);
    let (engine_aa, engine_tt, engine_xx) = (f[0], f[4], f[8]);

    let canon = variants::disc_qfi_radius_corrected_denominator(&inp);
    let alt = variants::disc_qfi_radius_compact_denominator(&inp);
    results.push(CheckResult::new(
        "variant_disc_radius_qfi_denominator",
        1e-6,
        rel(canon, engine_aa),
        format!(
            "canonical: corrected (radius-squared) denominator; compact variant deviates by {:.3e}",
            rel(alt, engine_aa)
        ),
    ));

    let (vx, _) = inp.spatial_freq();
    let canon = variants::location_qfi_wavelength_numerator(&inp, vx, vx);
    let alt = variants::location_qfi_baseline_numerator(&inp, vx, vx);
    results.push(CheckResult::new(
        "variant_location_qfi_numerator",
        1e-6,
        rel(canon, engine_xx),
        format!(
            "canonical: wavelength-squared numerator; baseline-squared variant deviates by {:.3e}",
            rel(alt, engine_xx)
        ),
    ));

    results.push(CheckResult::new(
        "variant_disc_temperature_qfi_polynomial",
        1e-6,
        rel(variants::disc_qfi_temperature_polynomial(&inp), engine_tt),
        "polynomial form confirmed against the engine",
    ));

    // general two-mode rational expression vs engine on the same disc state
    let d = cf::two_mode_disc(&inp).unwrap();
    let chi = 0.5 + d.nbar;
    let u = inp.bessel_arg();
    let deriv = TwoModeDeriv {
        d_nbar: 2.0 * d.nbar / inp.radius,
        d_xi: Complex64::new(2.0 * d.nbar / inp.radius * crate::numerics::j0(u), 0.0),
    };
    let legacy = variants::general_qfi_polynomial(chi, d.xi, deriv);
    results.push(CheckResult::new(
        "variant_general_two_mode_qfi",
        1e-6,
        rel(cf::two_mode_general_qfi(chi, d.xi, deriv, deriv).unwrap(), engine_aa),
        format!(
            "canonical: eigenmode form; rational-polynomial variant deviates by {:.3e}",
            rel(legacy, engine_aa)
        ),
    ));

    // two-point centroid factor
    let v = 4.0 / (lambda() * R);
    let a = 4.276e3;
    let eta = std::f64::consts::PI * a * a / (R * R);
    let sv = 0.3;
    let s_m = sv / v;
    let s2 = validate_scenario(&raw(
        vec![(0.0, 0.0), (4.0, 0.0)],
        SourceModel::TwoDiscs {
            radius: a,
            t1: 300.0,
            t2: 300.0,
            center1: (s_m / 2.0, 0.0),
            center2: (-s_m / 2.0, 0.0),
        },
        vec![ParamId::SepX, ParamId::CentroidX],
    ))
    .unwrap();
    let f2 = engine_qfi(&s2);
    let tinp = TwoPointInputs {
        radius: a,
        t_mean: 300.0,
        delta_t: 0.0,
        s: (s_m, 0.0),
        t: (0.0, 0.0),
        v: (v, 0.0),
        eta,
        kappa: KAP,
    };
    let c2 = cf::two_point_sources(&tinp).unwrap();
    results.push(CheckResult::new(
        "variant_centroid_qfi_factor",
        1e-6,
        rel(c2.qfi[2 * 4 + 2], f2[3]),
        format!(
            "canonical: eigenmode form; doubled trigonometric variant deviates by {:.3e}",
            rel(variants::centroid_qfi_doubled(&tinp, v, v), f2[3])
        ),
    ));
    results.push(CheckResult::new(
        "variant_separation_qfi_polynomial",
        1e-3,
        rel(variants::separation_qfi_polynomial(&tinp, v, v), f2[0]),
        "trigonometric form confirmed against the engine (point-source attenuation applied)",
    ));

    // heterodyne variants
    let vis = visibility_matrix(&s, DerivativeMode::Analytic).unwrap();
    let cfi = heterodyne_cfi(&vis).unwrap();
    let dcat = cf::two_mode_disc(&inp).unwrap();
    results.push(CheckResult::new(
        "variant_disc_heterodyne_cfi",
        1e-6,
        rel(dcat.het_radius, cfi.get(0, 0)).max(rel(dcat.het_temperature, cfi.get(1, 1))),
        format!(
            "canonical: trace/eigenmode form; polynomial variants deviate by {:.3e} (radius), {:.3e} (temperature)",
            rel(variants::disc_het_radius_polynomial(&inp), cfi.get(0, 0)),
            rel(variants::disc_het_temperature_polynomial(&inp), cfi.get(1, 1)),
        ),
    ));

    let vis2 = visibility_matrix(&s2, DerivativeMode::Analytic).unwrap();
    let cfi2 = heterodyne_cfi(&vis2).unwrap();
    results.push(CheckResult::new(
        "variant_two_point_heterodyne_cfi",
        1e-6,
        rel(c2.het[0], cfi2.get(0, 0)).max(rel(c2.het[2 * 4 + 2], cfi2.get(1, 1))),
        format!(
            "canonical: trace/eigenmode form; trigonometric variants deviate by {:.3e} (separation), {:.3e} (centroid)",
            rel(variants::separation_het_polynomial(&tinp, v, v), cfi2.get(0, 0)),
            rel(variants::centroid_het_polynomial(&tinp, v, v), cfi2.get(1, 1)),
        ),
    ));

    // SLD element variants on the centred disc
    let state = covariance(&vis);
    let opts = EngineOptions::default();
    let sld_a = sld_matrix(&state, ParamId::Radius, &opts).unwrap();
    let sld_t = sld_matrix(&state, ParamId::Temperature, &opts).unwrap();
    let g1a = variants::disc_sld_g1_radius_polynomial(&inp);
    let g2a = variants::disc_sld_g2_radius_polynomial(&inp);
    let g1t = variants::disc_sld_g1_temperature_polynomial(&inp);
    let g2t = variants::disc_sld_g2_temperature_polynomial(&inp);
    let obs = rel(g1a, sld_a.matrix[(0, 0)].re)
        .max(rel(g2a, sld_a.matrix[(0, 1)].re))
        .max(rel(g1t, sld_t.matrix[(0, 0)].re));
    results.push(CheckResult::new(
        "variant_disc_sld_elements",
        1e-6,
        obs,
        format!(
            "g¹_a, g²_a, g¹_T polynomial forms confirmed; signed g²_T variant deviates by {:.3e}",
            rel(g2t, sld_t.matrix[(0, 1)].re)
        ),
    ));

    results
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_green() {
        let results = run_battery(DEFAULT_SEED);
        let failed: Vec<&CheckResult> = results.iter().filter(|r| !r.passed).collect();
        for r in &results {
            eprintln!(
                "{:55} tol {:9.2e} observed {:9.2e} {}",
                r.id,
                r.tolerance,
                r.observed,
                if r.passed { "ok" } else { "FAILED" }
            );
        }
        assert!(failed.is_empty(), "failed checks: {failed:#?}");
    }

    #[test]
    fn battery_is_deterministic() {
        let a = run_battery(7);
        let b = run_battery(7);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            assert_eq!(x.observed.to_bits(), y.observed.to_bits());
        }
    }
}
