//! Dense complex linear-algebra helpers shared by the engine and the oracle.
//!
//! The matrix exponential uses scaling-and-squaring with a Padé(13,13)
//! approximant (Higham 2005). The window generators are non-normal, so no
//! diagonalizability is assumed anywhere on this path; the target backward
//! error is ~1e-13.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Padé(13,13) numerator coefficients, Higham (2005) Table 10.4 scaled form.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// 1-norm bound below which the unscaled Padé(13) approximant meets double
/// precision (theta_13 from Higham 2005, Table 10.2).
const THETA13: f64 = 5.371920351148152;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Max-column-sum norm of a complex matrix.
pub fn norm_1(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Matrix exponential exp(A) by scaling-and-squaring with Padé(13,13).
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");

    let norm = norm_1(a);
    if norm == 0.0 {
        return CMatrix::identity(n, n);
    }

    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|z| z / c((1u64 << s) as f64));

    let mut result = pade13(&scaled);
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

fn pade13(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let eye = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let w1 = &a6 * c(PADE13[13]) + &a4 * c(PADE13[11]) + &a2 * c(PADE13[9]);
    let w2 = &w1 * &a6
        + &a6 * c(PADE13[7])
        + &a4 * c(PADE13[5])
        + &a2 * c(PADE13[3])
        + &eye * c(PADE13[1]);
    let u = a * &w2;

    let v1 = &a6 * c(PADE13[12]) + &a4 * c(PADE13[10]) + &a2 * c(PADE13[8]);
    let v = &v1 * &a6
        + &a6 * c(PADE13[6])
        + &a4 * c(PADE13[4])
        + &a2 * c(PADE13[2])
        + &eye * c(PADE13[0]);

    let numer = &v + &u;
    let denom = &v - &u;
    denom
        .lu()
        .solve(&numer)
        .expect("Pade denominator is singular; input norm out of range")
}

/// Eigenvalues of a Hermitian matrix, ascending. The upper triangle is
/// trusted; no symmetrization is applied.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn hermitian_min_eigenvalue(a: &CMatrix) -> f64 {
    hermitian_eigenvalues(a)
        .first()
        .copied()
        .expect("empty matrix")
}

/// Full eigendecomposition of a Hermitian matrix: (eigenvalues, columns).
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = a.clone().symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    (values, eig.eigenvectors)
}

/// Largest singular value, computed as sqrt(lambda_max(A^dag A)).
pub fn max_singular_value(a: &CMatrix) -> f64 {
    let gram = a.adjoint() * a;
    hermitian_eigenvalues(&gram)
        .last()
        .copied()
        .expect("empty matrix")
        .max(0.0)
        .sqrt()
}

/// Largest |(A - A^dag)_ij|; zero for an exactly Hermitian matrix.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Sesquilinear form <a, b> = sum conj(a_j) b_j (antilinear in the first slot).
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_zero_is_identity() {
        let z = CMatrix::zeros(4, 4);
        let e = expm(&z);
        assert_eq!(e, CMatrix::identity(4, 4));
    }

    #[test]
    fn expm_diagonal() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = cx(1.0, 2.0);
        a[(1, 1)] = cx(-0.5, 0.1);
        let e = expm(&a);
        assert!((e[(0, 0)] - cx(1.0, 2.0).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - cx(-0.5, 0.1).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() == 0.0 && e[(1, 0)].norm() == 0.0);
    }

    #[test]
    fn expm_antihermitian_is_unitary() {
        // exp(iH) for Hermitian H must be unitary.
        let mut h = CMatrix::zeros(3, 3);
        h[(0, 1)] = cx(0.3, -0.2);
        h[(1, 0)] = cx(0.3, 0.2);
        h[(1, 2)] = cx(0.0, 1.1);
        h[(2, 1)] = cx(0.0, -1.1);
        h[(0, 0)] = cx(0.7, 0.0);
        let a = h.map(|z| z * cx(0.0, 1.0));
        let u = expm(&a);
        let defect = (&u.adjoint() * &u - CMatrix::identity(3, 3)).norm();
        assert!(defect < 1e-13, "unitarity defect {defect}");
    }

    #[test]
    fn expm_large_norm_scales() {
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = cx(30.0, 0.0);
        a[(1, 1)] = cx(-30.0, 0.0);
        let e = expm(&a);
        assert_relative_eq!(e[(0, 0)].re, 30.0f64.exp(), max_relative = 1e-12);
        assert_relative_eq!(e[(1, 1)].re, (-30.0f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn expm_semigroup_on_nonnormal_input() {
        // exp(A(s+t)) = exp(As) exp(At) for a non-normal A.
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 1)] = cx(1.0, 0.5);
        a[(0, 0)] = cx(0.0, 1.3);
        a[(1, 2)] = cx(-0.4, 0.0);
        a[(2, 0)] = cx(0.2, -0.1);
        let s = 0.7;
        let t = 0.4;
        let whole = expm(&a.map(|z| z * c(s + t)));
        let split = expm(&a.map(|z| z * c(s))) * expm(&a.map(|z| z * c(t)));
        assert!(max_abs_diff(&whole, &split) < 1e-13);
    }

    /// Independent check of the Hermitian eigensolver against a cyclic
    /// Jacobi iteration with complex rotations.
    fn jacobi_eigenvalues(a: &CMatrix) -> Vec<f64> {
        let n = a.nrows();
        let mut m = a.clone();
        for _ in 0..60 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += m[(p, q)].norm_sqr();
                }
            }
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    if apq.norm() < 1e-300 {
                        continue;
                    }
                    let app = m[(p, p)].re;
                    let aqq = m[(q, q)].re;
                    // Unitary 2x2 rotation annihilating (p,q).
                    let phase = apq / c(apq.norm());
                    let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                    let (cs, sn) = (theta.cos(), theta.sin());
                    let g = phase * c(sn);
                    for k in 0..n {
                        let mkp = m[(k, p)];
                        let mkq = m[(k, q)];
                        m[(k, p)] = mkp * c(cs) - mkq * g.conj();
                        m[(k, q)] = mkp * g + mkq * c(cs);
                    }
                    for k in 0..n {
                        let mpk = m[(p, k)];
                        let mqk = m[(q, k)];
                        m[(p, k)] = mpk * c(cs) - mqk * g;
                        m[(q, k)] = mpk * g.conj() + mqk * c(cs);
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }

    #[test]
    fn hermitian_eigenvalues_match_jacobi_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(2..7);
            let mut h = CMatrix::zeros(n, n);
            for i in 0..n {
                h[(i, i)] = cx(rng.gen_range(-2.0..2.0), 0.0);
                for j in (i + 1)..n {
                    let z = cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                }
            }
            let got = hermitian_eigenvalues(&h);
            let want = jacobi_eigenvalues(&h);
            for (g, w) in got.iter().zip(want.iter()) {
                assert!((g - w).abs() < 1e-10, "eig mismatch: {g} vs {w}");
            }
        }
    }

    #[test]
    fn max_singular_value_of_scaled_identity() {
        let u = CMatrix::identity(3, 3).map(|z| z * cx(1.1, 0.0));
        assert_relative_eq!(max_singular_value(&u), 1.1, max_relative = 1e-12);
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let mut a = CMatrix::identity(2, 2);
        assert_eq!(hermiticity_defect(&a), 0.0);
        a[(0, 1)] = cx(0.0, 1e-3);
        assert_relative_eq!(hermiticity_defect(&a), 1e-3, max_relative = 1e-12);
    }

    #[test]
    fn inner_is_antilinear_in_first_slot() {
        let a = CVector::from_vec(vec![cx(0.0, 1.0), cx(2.0, 0.0)]);
        let b = CVector::from_vec(vec![cx(1.0, 0.0), cx(0.0, 3.0)]);
        // <a,b> = conj(i)*1 + conj(2)*(3i) = -i + 6i = 5i
        assert!((inner(&a, &b) - cx(0.0, 5.0)).norm() < 1e-15);
    }
}
