//! Problem definition: physics constants, receiver geometry, source models,
//! and configuration validation.
//!
//! All quantities are SI internally (m, s, Hz, K). Reporting layers convert
//! to km⁻² or km where asked.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::numerics::PixelMap;

/// Speed of light, m/s (exact SI).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K (exact SI).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Planck constant, J s (exact SI).
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScenarioError {
    #[error("{field}: {constraint}")]
    Invalid { field: String, constraint: String },
    #[error("parameter {parameter} is not applicable to source model {source}")]
    InvalidParameter { parameter: String, source: String },
}

fn invalid(field: &str, constraint: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.to_string(),
        constraint: constraint.into(),
    }
}

/// κ = 2 k_B / (π ħ ω₀) with ω₀ = 2π f₀ — the brightness-to-photon-number
/// conversion factor, in 1/K.
pub fn kappa_from_frequency(f0: f64) -> Result<f64, ScenarioError> {
    if !f0.is_finite() || f0 <= 0.0 {
        return Err(invalid("center_frequency", "must be positive and finite"));
    }
    let omega0 = 2.0 * std::f64::consts::PI * f0;
    Ok(2.0 * BOLTZMANN / (std::f64::consts::PI * HBAR * omega0))
}

/// Number of independent samples over a flight distance L: 𝒩 = ⌊L B / v⌋,
/// clamped to at least 1.
pub fn sample_size(flight_distance: f64, bandwidth: f64, speed: f64) -> Result<u64, ScenarioError> {
    for (name, v) in [
        ("flight_distance", flight_distance),
        ("bandwidth", bandwidth),
        ("platform_speed", speed),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return Err(invalid(name, "must be positive and finite"));
        }
    }
    let n = (flight_distance * bandwidth / speed).floor();
    Ok(if n < 1.0 { 1 } else { n as u64 })
}

/// Physics block: frequency, bandwidth, platform geometry, κ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicsConfig {
    /// Centre frequency f₀, Hz.
    pub center_frequency: f64,
    /// Centre wavelength λ = c/f₀, m (derived).
    pub wavelength: f64,
    /// Bandwidth B, Hz.
    pub bandwidth: f64,
    /// Platform height R above the source plane, m.
    pub platform_height: f64,
    /// Platform speed v, m/s.
    pub platform_speed: f64,
    /// Brightness-to-photon conversion κ, 1/K. Defaults to the value computed
    /// from f₀; may be overridden in configuration.
    pub kappa: f64,
    /// Optional flight distance L, m, for sample-count bounds.
    pub flight_distance: Option<f64>,
}

/// Raw (pre-validation) physics block.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawPhysics {
    pub center_frequency: Option<f64>,
    pub bandwidth: Option<f64>,
    pub platform_height: Option<f64>,
    pub platform_speed: Option<f64>,
    pub kappa_override: Option<f64>,
    pub flight_distance: Option<f64>,
}

/// Receiver positions in the detection plane, metres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceiverArray {
    pub positions: Vec<(f64, f64)>,
    /// Polarization axis label, metadata only.
    pub polarization: Polarization,
    /// Positions closer than λ found during validation (pairs of indices).
    /// The model assumes receiver separations larger than the wavelength;
    /// closer pairs are admitted but flagged.
    pub sub_wavelength_pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Polarization {
    #[default]
    X,
    Y,
}

impl ReceiverArray {
    pub fn n_receivers(&self) -> usize {
        self.positions.len()
    }

    /// Smallest pairwise separation, m (None for a single receiver).
    pub fn min_separation(&self) -> Option<f64> {
        let n = self.positions.len();
        if n < 2 {
            return None;
        }
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = self.positions[i].0 - self.positions[j].0;
                let dy = self.positions[i].1 - self.positions[j].1;
                best = best.min(dx.hypot(dy));
            }
        }
        Some(best)
    }

    /// Largest pairwise separation, m (None for a single receiver).
    pub fn max_baseline(&self) -> Option<f64> {
        let n = self.positions.len();
        if n < 2 {
            return None;
        }
        let mut best = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = self.positions[i].0 - self.positions[j].0;
                let dy = self.positions[i].1 - self.positions[j].1;
                best = best.max(dx.hypot(dy));
            }
        }
        Some(best)
    }

    /// Evenly spaced 1D array along the x axis starting at the origin.
    pub fn linear(n: usize, spacing: f64) -> Vec<(f64, f64)> {
        (0..n).map(|i| (i as f64 * spacing, 0.0)).collect()
    }
}

/// Source brightness model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SourceModel {
    /// Uniform circular disc: radius a, temperature T, centre (x₀, y₀).
    UniformDisc {
        radius: f64,
        temperature: f64,
        center: (f64, f64),
    },
    /// Two equal-radius discs with temperatures T₁, T₂ at two centres.
    TwoDiscs {
        radius: f64,
        t1: f64,
        t2: f64,
        center1: (f64, f64),
        center2: (f64, f64),
    },
    /// Arbitrary brightness map.
    PixelMap(PixelMap),
}

impl SourceModel {
    pub fn name(&self) -> &'static str {
        match self {
            SourceModel::UniformDisc { .. } => "disc",
            SourceModel::TwoDiscs { .. } => "two_discs",
            SourceModel::PixelMap(_) => "pixel_map",
        }
    }
}

/// Derived two-disc quantities: separation, centroid, mean temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDiscDerived {
    pub s_x: f64,
    pub s_y: f64,
    pub t_x: f64,
    pub t_y: f64,
    /// Mean temperature T̄ = (T₁+T₂)/2.
    pub t_mean: f64,
    /// ΔT = T₂ − T₁.
    pub delta_t: f64,
}

impl SourceModel {
    pub fn two_disc_derived(&self) -> Option<TwoDiscDerived> {
        match self {
            SourceModel::TwoDiscs {
                t1,
                t2,
                center1,
                center2,
                ..
            } => Some(TwoDiscDerived {
                s_x: center1.0 - center2.0,
                s_y: center1.1 - center2.1,
                t_x: 0.5 * (center1.0 + center2.0),
                t_y: 0.5 * (center1.1 + center2.1),
                t_mean: 0.5 * (t1 + t2),
                delta_t: t2 - t1,
            }),
            _ => None,
        }
    }
}

/// Estimation parameter identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParamId {
    /// Disc radius a (m).
    Radius,
    /// Temperature: the disc T, or the two-disc mean T̄ (K).
    Temperature,
    /// First-disc temperature T₁ (K).
    T1,
    /// Second-disc temperature T₂ (K).
    T2,
    /// Disc centre x₀ (m).
    X0,
    /// Disc centre y₀ (m).
    Y0,
    /// Separation components s = r₁ − r₂ (m).
    SepX,
    SepY,
    /// Centroid components t = (r₁ + r₂)/2 (m).
    CentroidX,
    CentroidY,
}

impl ParamId {
    pub fn token(&self) -> &'static str {
        match self {
            ParamId::Radius => "a",
            ParamId::Temperature => "T",
            ParamId::T1 => "T1",
            ParamId::T2 => "T2",
            ParamId::X0 => "x0",
            ParamId::Y0 => "y0",
            ParamId::SepX => "s_x",
            ParamId::SepY => "s_y",
            ParamId::CentroidX => "t_x",
            ParamId::CentroidY => "t_y",
        }
    }

    pub fn parse(s: &str) -> Option<ParamId> {
        Some(match s {
            "a" => ParamId::Radius,
            "T" => ParamId::Temperature,
            "T1" => ParamId::T1,
            "T2" => ParamId::T2,
            "x0" => ParamId::X0,
            "y0" => ParamId::Y0,
            "s_x" | "sx" | "s" => ParamId::SepX,
            "s_y" | "sy" => ParamId::SepY,
            "t_x" | "tx" | "t" => ParamId::CentroidX,
            "t_y" | "ty" => ParamId::CentroidY,
            _ => return None,
        })
    }

    /// Length parameters report in metres, temperatures in Kelvin.
    pub fn is_length(&self) -> bool {
        !matches!(self, ParamId::Temperature | ParamId::T1 | ParamId::T2)
    }

    pub fn applicable_to(&self, source: &SourceModel) -> bool {
        match source {
            SourceModel::UniformDisc { .. } => matches!(
                self,
                ParamId::Radius | ParamId::Temperature | ParamId::X0 | ParamId::Y0
            ),
            SourceModel::TwoDiscs { .. } => matches!(
                self,
                ParamId::Radius
                    | ParamId::Temperature
                    | ParamId::T1
                    | ParamId::T2
                    | ParamId::SepX
                    | ParamId::SepY
                    | ParamId::CentroidX
                    | ParamId::CentroidY
            ),
            SourceModel::PixelMap(_) => false,
        }
    }
}

/// Fully validated problem statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub physics: PhysicsConfig,
    pub array: ReceiverArray,
    pub source: SourceModel,
    /// Ordered estimation parameters.
    pub parameters: Vec<ParamId>,
}

/// Raw (pre-validation) scenario as read from configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawScenario {
    pub physics: RawPhysics,
    pub positions: Vec<(f64, f64)>,
    pub polarization: Option<Polarization>,
    pub source: Option<SourceModel>,
    pub parameters: Vec<ParamId>,
}

/// Validate a raw configuration into a [`Scenario`], populating all derived
/// quantities. Each violated invariant yields a named error.
pub fn validate_scenario(raw: &RawScenario) -> Result<Scenario, ScenarioError> {
    // physics
    let f0 = raw
        .physics
        .center_frequency
        .ok_or_else(|| invalid("physics.center_frequency", "missing"))?;
    if !f0.is_finite() || f0 <= 0.0 {
        return Err(invalid("physics.center_frequency", "must be positive"));
    }
    let bandwidth = raw
        .physics
        .bandwidth
        .ok_or_else(|| invalid("physics.bandwidth", "missing"))?;
    if !bandwidth.is_finite() || bandwidth <= 0.0 {
        return Err(invalid("physics.bandwidth", "must be positive"));
    }
    if bandwidth > f0 / 10.0 {
        return Err(invalid(
            "physics.bandwidth",
            "narrow-band model requires B <= f0/10",
        ));
    }
    let platform_height = raw
        .physics
        .platform_height
        .ok_or_else(|| invalid("physics.platform_height", "missing"))?;
    if !platform_height.is_finite() || platform_height <= 0.0 {
        return Err(invalid("physics.platform_height", "must be positive"));
    }
    let platform_speed = raw.physics.platform_speed.unwrap_or(7e3);
    if !platform_speed.is_finite() || platform_speed <= 0.0 {
        return Err(invalid("physics.platform_speed", "must be positive"));
    }
    let kappa = match raw.physics.kappa_override {
        Some(k) => {
            if !k.is_finite() || k <= 0.0 {
                return Err(invalid("physics.kappa", "must be positive"));
            }
            k
        }
        None => kappa_from_frequency(f0)?,
    };
    if let Some(l) = raw.physics.flight_distance {
        if !l.is_finite() || l <= 0.0 {
            return Err(invalid("physics.flight_distance", "must be positive"));
        }
    }
    let wavelength = SPEED_OF_LIGHT / f0;
    let physics = PhysicsConfig {
        center_frequency: f0,
        wavelength,
        bandwidth,
        platform_height,
        platform_speed,
        kappa,
        flight_distance: raw.physics.flight_distance,
    };

    // array
    if raw.positions.is_empty() {
        return Err(invalid("array.positions", "at least one receiver required"));
    }
    for (i, (x, y)) in raw.positions.iter().enumerate() {
        if !x.is_finite() || !y.is_finite() {
            return Err(invalid(
                &format!("array.positions[{i}]"),
                "must be finite",
            ));
        }
    }
    let mut sub_wavelength_pairs = Vec::new();
    for i in 0..raw.positions.len() {
        for j in (i + 1)..raw.positions.len() {
            let dx = raw.positions[i].0 - raw.positions[j].0;
            let dy = raw.positions[i].1 - raw.positions[j].1;
            let sep = dx.hypot(dy);
            if sep == 0.0 {
                return Err(invalid(
                    "array.positions",
                    format!("receivers {i} and {j} coincide"),
                ));
            }
            if sep < wavelength {
                sub_wavelength_pairs.push((i, j));
            }
        }
    }
    let array = ReceiverArray {
        positions: raw.positions.clone(),
        polarization: raw.polarization.unwrap_or_default(),
        sub_wavelength_pairs,
    };

    // source
    let source = raw
        .source
        .clone()
        .ok_or_else(|| invalid("source", "missing"))?;
    match &source {
        SourceModel::UniformDisc {
            radius,
            temperature,
            center,
        } => {
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(invalid("source.radius", "radius must be positive"));
            }
            if *radius > platform_height / 10.0 {
                return Err(invalid(
                    "source.radius",
                    "far-field model requires a <= R/10",
                ));
            }
            if !(temperature.is_finite() && *temperature >= 0.0) {
                return Err(invalid("source.temperature", "must be >= 0"));
            }
            if !center.0.is_finite() || !center.1.is_finite() {
                return Err(invalid("source.center", "must be finite"));
            }
        }
        SourceModel::TwoDiscs {
            radius,
            t1,
            t2,
            center1,
            center2,
        } => {
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(invalid("source.radius", "radius must be positive"));
            }
            if *radius > platform_height / 10.0 {
                return Err(invalid(
                    "source.radius",
                    "far-field model requires a <= R/10",
                ));
            }
            for (name, t) in [("source.t1", t1), ("source.t2", t2)] {
                if !(t.is_finite() && *t >= 0.0) {
                    return Err(invalid(name, "must be >= 0"));
                }
            }
            for (name, c) in [("source.center1", center1), ("source.center2", center2)] {
                if !c.0.is_finite() || !c.1.is_finite() {
                    return Err(invalid(name, "must be finite"));
                }
            }
        }
        SourceModel::PixelMap(map) => {
            // re-run the constructor checks on deserialized data
            PixelMap::new(
                map.rows,
                map.cols,
                map.pixel_size,
                map.origin,
                map.values.clone(),
            )
            .map_err(|e| invalid("source.pixel_map", e.to_string()))?;
        }
    }

    // parameters
    for p in &raw.parameters {
        if !p.applicable_to(&source) {
            return Err(ScenarioError::InvalidParameter {
                parameter: p.token().to_string(),
                source: source.name().to_string(),
            });
        }
    }

    Ok(Scenario {
        physics,
        array,
        source,
        parameters: raw.parameters.clone(),
    })
}

impl Scenario {
    /// Re-validate an already valid scenario; the result is identical.
    pub fn revalidate(&self) -> Result<Scenario, ScenarioError> {
        let raw = RawScenario {
            physics: RawPhysics {
                center_frequency: Some(self.physics.center_frequency),
                bandwidth: Some(self.physics.bandwidth),
                platform_height: Some(self.physics.platform_height),
                platform_speed: Some(self.physics.platform_speed),
                kappa_override: Some(self.physics.kappa),
                flight_distance: self.physics.flight_distance,
            },
            positions: self.array.positions.clone(),
            polarization: Some(self.array.polarization),
            source: Some(self.source.clone()),
            parameters: self.parameters.clone(),
        };
        validate_scenario(&raw)
    }

    pub fn n_modes(&self) -> usize {
        self.array.n_receivers()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn smos_raw() -> RawScenario {
        RawScenario {
            physics: RawPhysics {
                center_frequency: Some(1.4235e9),
                bandwidth: Some(7e6),
                platform_height: Some(758e3),
                platform_speed: Some(7e3),
                kappa_override: None,
                flight_distance: None,
            },
            positions: vec![(0.0, 0.0)],
            polarization: None,
            source: Some(SourceModel::UniformDisc {
                radius: 30e3,
                temperature: 300.0,
                center: (0.0, 0.0),
            }),
            parameters: vec![ParamId::Radius, ParamId::Temperature],
        }
    }

    #[test]
    fn kappa_smos_band_near_nine_point_four() {
        let k = kappa_from_frequency(1.4235e9).unwrap();
        assert!(
            (k - 9.4).abs() / 9.4 < 0.02,
            "kappa = {k}, expected within 2% of 9.4"
        );
        // frozen CODATA evaluation
        assert!((k - 9.31858357794).abs() < 1e-9);
    }

    #[test]
    fn kappa_scales_inversely_with_frequency() {
        let k1 = kappa_from_frequency(1.4235e9).unwrap();
        let k2 = kappa_from_frequency(2.847e9).unwrap();
        assert_eq!(k2, k1 * (1.4235e9 / 2.847e9), "exact 1/f scaling");
        assert!((k2 - 4.65929178897).abs() < 1e-9);
        assert!((k2 - 4.66).abs() < 0.01);
    }

    #[test]
    fn kappa_rejects_bad_input() {
        assert!(kappa_from_frequency(0.0).is_err());
        assert!(kappa_from_frequency(-1.0).is_err());
        assert!(kappa_from_frequency(f64::NAN).is_err());
    }

    #[test]
    fn sample_size_examples() {
        // one detection interval when L = v/B
        assert_eq!(sample_size(7e3 / 7e6, 7e6, 7e3).unwrap(), 1);
        // headline configuration
        assert_eq!(sample_size(7.9e3, 7e6, 7e3).unwrap(), 7_900_000);
        // doubling L doubles N
        let n1 = sample_size(1.0e4, 7e6, 7e3).unwrap();
        let n2 = sample_size(2.0e4, 7e6, 7e3).unwrap();
        assert_eq!(n2, 2 * n1);
        assert!(sample_size(-1.0, 7e6, 7e3).is_err());
    }

    #[test]
    fn negative_radius_named_error() {
        let mut raw = smos_raw();
        raw.source = Some(SourceModel::UniformDisc {
            radius: -1.0,
            temperature: 300.0,
            center: (0.0, 0.0),
        });
        match validate_scenario(&raw) {
            Err(ScenarioError::Invalid { field, constraint }) => {
                assert_eq!(field, "source.radius");
                assert!(constraint.contains("positive"));
            }
            other => panic!("expected named error, got {other:?}"),
        }
    }

    #[test]
    fn two_discs_accepts_shared_radius_parameter() {
        let mut raw = smos_raw();
        raw.source = Some(SourceModel::TwoDiscs {
            radius: 1e3,
            t1: 300.0,
            t2: 300.0,
            center1: (10e3, 0.0),
            center2: (-10e3, 0.0),
        });
        raw.parameters = vec![ParamId::Radius, ParamId::SepX];
        assert!(validate_scenario(&raw).is_ok());
    }

    #[test]
    fn disc_rejects_separation_parameter() {
        let mut raw = smos_raw();
        raw.parameters = vec![ParamId::SepX];
        match validate_scenario(&raw) {
            Err(ScenarioError::InvalidParameter { parameter, source }) => {
                assert_eq!(parameter, "s_x");
                assert_eq!(source, "disc");
            }
            other => panic!("expected InvalidParameter, got {other:?}"),
        }
    }

    #[test]
    fn smos_like_scenario_has_kappa_near_nine_point_four() {
        let s = validate_scenario(&smos_raw()).unwrap();
        assert!((s.physics.kappa - 9.4).abs() / 9.4 < 0.02);
        assert!((s.physics.wavelength - 0.21).abs() < 0.001);
    }

    #[test]
    fn validation_is_idempotent() {
        let s = validate_scenario(&smos_raw()).unwrap();
        let s2 = s.revalidate().unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn serde_roundtrip_is_bit_identical() {
        let mut raw = smos_raw();
        raw.positions = vec![(0.0, 0.0), (4.0, 0.0), (8.0, 1.5)];
        let s = validate_scenario(&raw).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        let back: Scenario = serde_json::from_str(&json).unwrap();
        let re = back.revalidate().unwrap();
        assert_eq!(s, re);
        assert_eq!(
            s.physics.kappa.to_bits(),
            re.physics.kappa.to_bits(),
            "derived kappa must survive the round trip bit for bit"
        );
        assert_eq!(s.physics.wavelength.to_bits(), re.physics.wavelength.to_bits());
    }

    #[test]
    fn coincident_receivers_rejected_sub_wavelength_flagged() {
        let mut raw = smos_raw();
        raw.positions = vec![(0.0, 0.0), (0.0, 0.0)];
        assert!(validate_scenario(&raw).is_err());
        raw.positions = vec![(0.0, 0.0), (0.05, 0.0)]; // below the 21 cm wavelength
        let s = validate_scenario(&raw).unwrap();
        assert_eq!(s.array.sub_wavelength_pairs, vec![(0, 1)]);
    }

    #[test]
    fn wide_band_rejected() {
        let mut raw = smos_raw();
        raw.physics.bandwidth = Some(2e8); // > f0/10
        assert!(validate_scenario(&raw).is_err());
    }

    #[test]
    fn linear_array_helper() {
        let p = ReceiverArray::linear(4, 1.5);
        assert_eq!(p, vec![(0.0, 0.0), (1.5, 0.0), (3.0, 0.0), (4.5, 0.0)]);
    }

    proptest! {
        #[test]
        fn prop_kappa_strictly_decreasing(f in 1e8f64..1e11, factor in 1.0001f64..10.0) {
            let k1 = kappa_from_frequency(f).unwrap();
            let k2 = kappa_from_frequency(f * factor).unwrap();
            prop_assert!(k2 < k1);
            // exact 1/f scaling
            prop_assert!(((k2 * factor - k1) / k1).abs() < 1e-12);
        }
    }
}
