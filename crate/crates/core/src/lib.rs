//! Quantum and classical Cramér-Rao bounds for passive microwave
//! interferometric sensing.
//!
//! A receiver array observing a thermal brightness scene receives a zero-mean
//! circularly symmetric Gaussian state, fully described by the mode
//! correlations Ξ[i][j] = ⟨b_i†b_j⟩. This crate builds that state for disc,
//! two-disc, and pixel-map sources ([`visibility`]), evaluates the quantum
//! Fisher information and the optimal detection modes through the Gaussian
//! tensor equation ([`gaussian_fisher`]), compares against heterodyne and
//! photon-counting strategies ([`classical_fisher`]), and carries a catalog
//! of closed forms ([`closed_forms`]) cross-validated against the generic
//! engines ([`validate`]).

pub mod classical_fisher;
pub mod closed_forms;
pub mod gaussian_fisher;
pub mod numerics;
pub mod scenario;
pub mod validate;
pub mod visibility;

pub use classical_fisher::{heterodyne_cfi, photon_counting_cfi, HeterodyneCfi};
pub use gaussian_fisher::{
    detection_modes, qcrb, qfi_matrix, sld_matrix, DetectionModes, EngineOptions, FisherError,
    QfiMatrix, Qcrb, SldMatrix,
};
pub use numerics::{bessel_j, hermitian_eig, integrate_pixels, solve_linear, ComplexMatrix,
    PixelMap};
pub use scenario::{
    kappa_from_frequency, sample_size, validate_scenario, ParamId, PhysicsConfig, RawScenario,
    ReceiverArray, Scenario, ScenarioError, SourceModel,
};
pub use visibility::{
    covariance, mean_photon_number, visibility_matrix, CovarianceState, DerivativeMode,
    VisibilitySet,
};
