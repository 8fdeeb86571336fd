//! Eigendecomposition of complex Hermitian matrices.
//!
//! Cyclic Jacobi with complex plane rotations. Quadratic convergence, fully
//! deterministic (no randomized pivoting), adequate for the mode-count range
//! this crate handles (n ≤ a few tens).
//!
//! Output convention: eigenvalues sorted descending; eigenvectors are the
//! columns of the returned matrix; each eigenvector is phase-fixed so that
//! its largest-magnitude component (earliest index on near-ties) is real and
//! positive. That makes detection-mode output reproducible byte for byte.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::NumericsError;

/// Tolerance on max |M - M†| for accepting an input as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EigDecomposition {
    /// Descending real eigenvalues.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, aligned with `values`.
    pub vectors: ComplexMatrix,
}

/// Diagonalize a Hermitian matrix: M = V D V† with V unitary (columns are
/// the eigenvectors).
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigDecomposition, NumericsError> {
    if !m.is_square() {
        return Err(NumericsError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.all_finite() {
        return Err(NumericsError::NonFiniteInput);
    }
    let scale = m.max_abs().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL * scale.max(1.0) {
        return Err(NumericsError::NotHermitian { defect });
    }

    let n = m.rows();
    // work on the Hermitian average so tiny asymmetries cannot bias sweeps
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let off = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };

    let norm = a.max_abs().max(1e-300);
    let target = 1e-15 * norm * n as f64;
    for _sweep in 0..60 {
        if off(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // phase that makes the pivot real, then a real Jacobi rotation
                let phase = apq / apq.norm();
                let g = apq.norm();
                let theta = 0.5 * (2.0 * g).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                let sp = phase * s; // complex sine carrying the pivot phase

                // A <- J† A J where J acts on columns (p, q):
                // col_p' = c*col_p + conj(sp)*col_q ... applied two-sided.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * sp.conj();
                    a[(i, q)] = -aip * sp + aiq * c;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * sp;
                    a[(q, j)] = -apj * sp.conj() + aqj * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c + viq * sp.conj();
                    v[(i, q)] = -vip * sp + viq * c;
                }
            }
        }
    }

    // collect eigenpairs, sort descending, fix phases
    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let val = a[(k, k)].re;
            let vec: Vec<Complex64> = (0..n).map(|i| v[(i, k)]).collect();
            (val, vec)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());

    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (k, (val, mut vec)) in pairs.into_iter().enumerate() {
        fix_phase(&mut vec);
        for i in 0..n {
            vectors[(i, k)] = vec[i];
        }
        values.push(val);
    }
    Ok(EigDecomposition { values, vectors })
}

/// Rotate a vector's global phase so its dominant component is real positive.
/// Near-ties (within 1e-12 relative) resolve to the earliest index.
fn fix_phase(vec: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in vec.iter().enumerate() {
        let m = z.norm();
        if m > best_mag * (1.0 + 1e-12) {
            best = i;
            best_mag = m;
        }
    }
    if best_mag == 0.0 {
        return;
    }
    let phase = vec[best] / best_mag;
    let rot = phase.conj();
    for z in vec.iter_mut() {
        *z *= rot;
    }
    // enforce exactness on the anchor component
    vec[best] = Complex64::new(vec[best].re.abs(), 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(e: &EigDecomposition) -> ComplexMatrix {
        let n = e.values.len();
        let d = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(e.values[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        e.vectors.matmul(&d).matmul(&e.vectors.dagger())
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(5)).unwrap();
        for v in &e.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
        let unitary_defect = e
            .vectors
            .dagger()
            .matmul(&e.vectors)
            .sub(&ComplexMatrix::identity(5))
            .max_abs();
        assert!(unitary_defect < 1e-13);
    }

    #[test]
    fn two_mode_phase_structure() {
        // [[g1, |g2| e^{i d}], [|g2| e^{-i d}, g1]] has eigenvectors
        // (1, ±e^{-i d})/√2
        let g1 = 0.8;
        let g2 = 0.35;
        let d = 1.234;
        let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => c(g1, 0.0),
            (0, 1) => c(g2, 0.0) * c(0.0, d).exp(),
            _ => c(g2, 0.0) * c(0.0, -d).exp(),
        });
        let e = hermitian_eig(&m).unwrap();
        assert!((e.values[0] - (g1 + g2)).abs() < 1e-13);
        assert!((e.values[1] - (g1 - g2)).abs() < 1e-13);
        let s = 1.0 / 2.0f64.sqrt();
        // phase fixing anchors component 0 (tie resolves to earliest index)
        let want0 = [c(s, 0.0), c(s, 0.0) * c(0.0, -d).exp()];
        let want1 = [c(s, 0.0), -c(s, 0.0) * c(0.0, -d).exp()];
        for i in 0..2 {
            assert!((e.vectors[(i, 0)] - want0[i]).norm() < 1e-12);
            assert!((e.vectors[(i, 1)] - want1[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn random_hermitian_6x6_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let n = 6;
            let raw = ComplexMatrix::from_fn(n, n, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let h = raw.add(&raw.dagger()); // Hermitian
            let e = hermitian_eig(&h).unwrap();

            let vdv = e.vectors.dagger().matmul(&e.vectors);
            assert!(vdv.sub(&ComplexMatrix::identity(n)).max_abs() < 1e-12);

            let rec = reconstruct(&e);
            let scale = 1.0 + h.max_abs();
            assert!(rec.sub(&h).max_abs() <= 1e-10 * scale);

            // descending order
            for k in 1..n {
                assert!(e.values[k - 1] >= e.values[k] - 1e-12);
            }
            // eigenvalue sum = trace
            let sum: f64 = e.values.iter().sum();
            assert!((sum - h.trace().re).abs() <= 1e-10 * n as f64 * h.max_abs().max(1.0));
        }
    }

    #[test]
    fn known_spectrum_recovered() {
        // build from a known spectrum and a unitary from a previous eig
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 6;
        let raw =
            ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let u = hermitian_eig(&raw.add(&raw.dagger())).unwrap().vectors;
        let spec = [5.0, 3.5, 1.0, 0.25, -0.5, -2.0];
        let d = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(spec[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let h = u.matmul(&d).matmul(&u.dagger());
        let e = hermitian_eig(&h).unwrap();
        for (got, want) in e.values.iter().zip(spec) {
            assert!((got - want).abs() < 1e-11, "got {got}, want {want}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            hermitian_eig(&m),
            Err(NumericsError::NotHermitian { .. })
        ));
    }

    #[test]
    fn deterministic_across_calls() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 8;
        let raw =
            ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let h = raw.add(&raw.dagger());
        let a = hermitian_eig(&h).unwrap();
        let b = hermitian_eig(&h).unwrap();
        assert_eq!(a.vectors, b.vectors);
        assert_eq!(a.values, b.values);
    }
}
