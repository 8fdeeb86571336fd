//! Classical Fisher information for the two measurement strategies under
//! comparison: heterodyne detection of every receiver mode, and photon
//! counting in detection modes.
//!
//! Heterodyne outcomes of an n-mode circularly symmetric Gaussian state are
//! zero-mean complex Gaussians with covariance C = I + Ξ; their Fisher
//! information is the exact trace identity F_ij = Tr[C⁻¹(∂_iC)C⁻¹(∂_jC)]
//! (the Wick contraction of the fourth-order outcome statistics).

use num_complex::Complex64;
use thiserror::Error;

use crate::gaussian_fisher::DetectionModes;
use crate::numerics::{ComplexMatrix, LuFactors, NumericsError};
use crate::scenario::ParamId;
use crate::visibility::VisibilitySet;

#[derive(Debug, Clone, Error)]
pub enum ClassicalFisherError {
    #[error("heterodyne outcome covariance is singular; impossible for C = I + Ξ with Ξ ⪰ 0")]
    ImpossibleCovariance,
    #[error(
        "SLD does not commute with the state (defect {defect:e}); photon-number statistics are \
         not a thermal product in the detection modes"
    )]
    NotProductState { defect: f64 },
    #[error("detection mode {index} is numerically empty but carries information; \
             the geometric-distribution Fisher information diverges")]
    DegenerateMode { index: usize },
    #[error("parameter {parameter} not present in the visibility set")]
    MissingParameter { parameter: String },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Heterodyne CFI matrix over the parameter derivatives of a visibility set.
#[derive(Debug, Clone)]
pub struct HeterodyneCfi {
    pub parameters: Vec<ParamId>,
    /// Row-major k x k entries.
    pub entries: Vec<f64>,
}

impl HeterodyneCfi {
    pub fn dim(&self) -> usize {
        self.parameters.len()
    }
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.parameters.len() + j]
    }
    pub fn diagonal(&self, p: ParamId) -> Option<f64> {
        let i = self.parameters.iter().position(|&q| q == p)?;
        Some(self.get(i, i))
    }
}

/// Exact heterodyne CFI: F_ij = Tr[C⁻¹(∂_iC)C⁻¹(∂_jC)] with C = I + Ξ.
pub fn heterodyne_cfi(vis: &VisibilitySet) -> Result<HeterodyneCfi, ClassicalFisherError> {
    let n = vis.n_modes;
    let c = ComplexMatrix::from_fn(n, n, |i, j| {
        vis.xi[(i, j)]
            + if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
    });
    let lu = match LuFactors::factor(&c) {
        Ok(lu) => lu,
        // C ⪰ I, so a singular factorization signals corrupted input
        Err(NumericsError::SingularMatrix { .. }) => {
            return Err(ClassicalFisherError::ImpossibleCovariance)
        }
        Err(e) => return Err(e.into()),
    };

    // X_i = C⁻¹ ∂_i C, column by column
    let k = vis.d_xi.len();
    let mut xs: Vec<ComplexMatrix> = Vec::with_capacity(k);
    for (_, dc) in &vis.d_xi {
        let mut x = ComplexMatrix::zeros(n, n);
        for col in 0..n {
            let b: Vec<Complex64> = (0..n).map(|row| dc[(row, col)]).collect();
            let sol = lu.solve(&b)?;
            for row in 0..n {
                x[(row, col)] = sol[row];
            }
        }
        xs.push(x);
    }

    let mut entries = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            let tr = xs[i].matmul(&xs[j]).trace();
            entries[i * k + j] = tr.re;
        }
    }
    Ok(HeterodyneCfi {
        parameters: vis.d_xi.iter().map(|(p, _)| *p).collect(),
        entries,
    })
}

/// Commutation tolerance for accepting the thermal-product model, relative to
/// ‖M‖·‖Ξ‖.
pub const COMMUTATOR_TOL: f64 = 1e-8;

/// Occupations below this (relative to n̄) count as vacuum in the 0/0 guard.
const VACUUM_OCCUPATION: f64 = 1e-14;

/// Photon-counting CFI in detection modes: Σ_l (∂ν_l)² / (ν_l (ν_l + 1)).
///
/// Valid when the SLD commutes with Ξ, i.e. the state is a product of
/// thermal states in the detection-mode basis. ν_l is the diagonal of VΞV†
/// and ∂ν_l the diagonal of V(∂Ξ)V†. Empty modes with vanishing derivative
/// contribute zero (the analytic limit).
pub fn photon_counting_cfi(
    modes: &DetectionModes,
    vis: &VisibilitySet,
    sld_matrix: &ComplexMatrix,
) -> Result<f64, ClassicalFisherError> {
    let n = vis.n_modes;
    // precondition: [M, Ξ] = 0 within tolerance
    let comm = sld_matrix
        .matmul(&vis.xi)
        .sub(&vis.xi.matmul(sld_matrix));
    let scale = sld_matrix.max_abs() * vis.xi.max_abs();
    let defect = if scale > 0.0 {
        comm.max_abs() / scale
    } else {
        0.0
    };
    if defect > COMMUTATOR_TOL {
        return Err(ClassicalFisherError::NotProductState { defect });
    }

    let dxi = vis
        .d_xi
        .iter()
        .find(|(p, _)| *p == modes.parameter)
        .map(|(_, d)| d)
        .ok_or_else(|| ClassicalFisherError::MissingParameter {
            parameter: modes.parameter.token().to_string(),
        })?;

    let vdv = modes.v.matmul(dxi).matmul(&modes.v.dagger());
    let d_scale = dxi.max_abs().max(1e-300);
    let occ_floor = VACUUM_OCCUPATION * vis.nbar.max(1e-300);

    let mut total = 0.0;
    for l in 0..n {
        let nu = modes.occupations[l].max(0.0);
        let dnu = vdv[(l, l)].re;
        if nu <= occ_floor {
            if dnu.abs() <= 1e-12 * d_scale {
                continue; // vacuum mode carrying no information: limit is 0
            }
            return Err(ClassicalFisherError::DegenerateMode { index: l });
        }
        total += dnu * dnu / (nu * (nu + 1.0));
    }
    Ok(total)
}
