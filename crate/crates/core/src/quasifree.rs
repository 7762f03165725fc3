//! Closed-form dual semigroup on Weyl symbols and quasi-free state evolution.
//!
//! During window `n` the dual map sends the Weyl operator W(zeta) to
//! `Gamma(zeta) * W(U zeta)` where `U = exp[it(Y_n + i((sigma_minus -
//! sigma_plus)/2) P0)]` and
//!
//! ```text
//! Gamma(zeta) = exp[-(kappa/4) (<zeta,zeta> - <U zeta, U zeta>)],
//! kappa = (sigma_minus + sigma_plus) / (sigma_minus - sigma_plus).
//! ```
//!
//! Composites telescope exactly, so a map is fully described by the pair
//! `(U, kappa)`. Zero-mean quasi-free states are carried as Hermitian
//! covariance matrices `X` with characteristic function
//! `exp[-<zeta, X zeta>/4]`; the dual action above pushes them forward as
//! `X' = U^dag (X - kappa I) U + kappa I`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    self, expm, hermitian_min_eigenvalue, inner, max_singular_value, CMatrix, CVector,
};
use crate::model::ModelParams;

/// Singular values of a window propagator may exceed 1 by at most this much.
pub const TOL_SV: f64 = 1e-12;
/// Physicality slack: smallest eigenvalue of X - I must be >= -TOL_PSD.
pub const TOL_PSD: f64 = 1e-10;
/// Hermiticity slack for covariance matrices.
pub const TOL_HERM: f64 = 1e-12;
/// Relative tolerance for the attenuation coefficients of composed maps.
pub const KAPPA_MATCH_TOL: f64 = 1e-14;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Generator of the window-`n` argument flow: i(Y_n + i((s- - s+)/2) P0).
fn window_generator(p: &ModelParams, n: usize) -> Result<CMatrix> {
    let layout = p.layout(n)?;
    let damping = (p.sigma_minus - p.sigma_plus) / 2.0;
    let dim = p.dim();
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(-damping * layout.p0[(i, j)], layout.y[(i, j)])
    }))
}

/// Propagator U_n(t) = exp[it(Y_n + i((sigma_minus - sigma_plus)/2) P0)].
///
/// The generator is non-normal; the exponential is evaluated by
/// scaling-and-squaring. At t = 0 the identity is returned exactly.
pub fn propagator(p: &ModelParams, n: usize, t: f64) -> Result<CMatrix> {
    p.require_valid()?;
    if t < 0.0 || !t.is_finite() {
        return Err(Error::TimeOutOfRange {
            t,
            limit: f64::INFINITY,
        });
    }
    let gen = window_generator(p, n)?;
    if t == 0.0 {
        return Ok(CMatrix::identity(p.dim(), p.dim()));
    }
    Ok(expm(&gen.map(|z| z * c(t))))
}

/// One window of the evolution, kept for provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowSegment {
    /// Active chain mode.
    pub mode: usize,
    /// Time spent in that window.
    pub duration: f64,
}

/// A dual-semigroup element acting on Weyl symbols as
/// `W(zeta) -> Gamma(zeta) W(U zeta)`.
#[derive(Debug, Clone)]
pub struct QuasiFreeMap {
    u: CMatrix,
    kappa: f64,
    segments: Vec<WindowSegment>,
}

impl QuasiFreeMap {
    /// Wrap (U, kappa), enforcing the contraction and attenuation invariants.
    pub fn new(u: CMatrix, kappa: f64) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::DimensionMismatch {
                expected: u.nrows(),
                found: u.ncols(),
            });
        }
        let sv = max_singular_value(&u);
        if sv > 1.0 + TOL_SV {
            return Err(Error::InvalidState(format!(
                "argument transformer is not a contraction: max singular value {sv}"
            )));
        }
        if kappa < 1.0 - TOL_SV {
            return Err(Error::InvalidState(format!(
                "attenuation coefficient {kappa} < 1"
            )));
        }
        Ok(Self {
            u,
            kappa,
            segments: Vec::new(),
        })
    }

    /// Wrap (U, kappa) without invariant checks. Intended for diagnostics
    /// such as feeding deliberately invalid maps to [`cp_certificate`].
    pub fn new_unchecked(u: CMatrix, kappa: f64) -> Self {
        Self {
            u,
            kappa,
            segments: Vec::new(),
        }
    }

    /// The identity map (U = I); `kappa` is still needed for composition.
    pub fn identity(dim: usize, kappa: f64) -> Self {
        Self {
            u: CMatrix::identity(dim, dim),
            kappa,
            segments: Vec::new(),
        }
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    /// Windows this map was assembled from (informational).
    pub fn segments(&self) -> &[WindowSegment] {
        &self.segments
    }

    fn check_dim(&self, zeta: &CVector) -> Result<()> {
        if zeta.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: zeta.len(),
            });
        }
        Ok(())
    }

    /// Attenuation factor Gamma(zeta) = exp[-(kappa/4)(<z,z> - <Uz,Uz>)].
    ///
    /// The exponent is assembled in log space and exponentiated once, so a
    /// huge-norm `zeta` underflows to 0 gracefully. A defect within rounding
    /// noise of zero (|defect| <= 4e-12 * |zeta|^2, the slack implied by the
    /// contraction tolerance) is snapped to zero so that unitary directions
    /// give Gamma = 1 exactly.
    pub fn gamma(&self, zeta: &CVector) -> Result<f64> {
        self.check_dim(zeta)?;
        // Rescale by the largest entry so |zeta|^2 cannot overflow before
        // the exponent is formed.
        let scale = zeta.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if scale == 0.0 {
            return Ok(1.0);
        }
        let w = zeta.map(|z| z.unscale(scale));
        let norm_sq = w.norm_squared();
        let image_sq = (&self.u * &w).norm_squared();
        let mut defect = norm_sq - image_sq;
        if defect < 0.0 && defect >= -4.0 * TOL_SV * norm_sq {
            defect = 0.0;
        }
        if defect == 0.0 {
            return Ok(1.0);
        }
        let exponent = (-0.25 * self.kappa * defect) * scale * scale;
        Ok(exponent.exp())
    }

    /// Full symbol-level action on W(zeta): returns (Gamma(zeta), U zeta).
    pub fn apply_to_weyl(&self, zeta: &CVector) -> Result<(f64, CVector)> {
        Ok((self.gamma(zeta)?, &self.u * zeta))
    }

    /// Push a covariance matrix forward: X' = U^dag (X - kappa I) U + kappa I.
    ///
    /// This form makes the matched Gibbs covariance X = kappa I an exact
    /// fixed point. It is algebraically identical to
    /// X' = U^dag X U + kappa (I - U^dag U).
    pub fn evolve_covariance(&self, state: &CovarianceState) -> Result<CovarianceState> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: state.dim(),
            });
        }
        let dim = self.dim();
        let shifted = state.x() - CMatrix::identity(dim, dim) * c(self.kappa);
        let mut x = self.u.adjoint() * shifted * &self.u;
        for i in 0..dim {
            x[(i, i)] += c(self.kappa);
        }
        // Rounding in the triple product can leave a ~1e-16 skew; restore
        // exact Hermiticity before validating.
        let x = symmetrize(&x);
        CovarianceState::new(x)
    }
}

fn symmetrize(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    CMatrix::from_fn(n, n, |i, j| (x[(i, j)] + x[(j, i)].conj()) * c(0.5))
}

/// The dual map of window `n` run for time `t`: (U_n(t), kappa).
pub fn one_step_map(p: &ModelParams, n: usize, t: f64) -> Result<QuasiFreeMap> {
    let u = propagator(p, n, t)?;
    let mut map = QuasiFreeMap::new(u, p.kappa()?)?;
    map.segments = vec![WindowSegment {
        mode: n,
        duration: t,
    }];
    Ok(map)
}

/// Compose two maps: `left` is applied after `right` on Weyl symbols, so the
/// composite argument transformer is `U_left * U_right`. The attenuation
/// factors telescope exactly; kappa must match.
pub fn compose(left: &QuasiFreeMap, right: &QuasiFreeMap) -> Result<QuasiFreeMap> {
    if left.dim() != right.dim() {
        return Err(Error::DimensionMismatch {
            expected: left.dim(),
            found: right.dim(),
        });
    }
    let scale = left.kappa.abs().max(right.kappa.abs()).max(1.0);
    if (left.kappa - right.kappa).abs() > KAPPA_MATCH_TOL * scale {
        return Err(Error::KappaMismatch {
            left: left.kappa,
            right: right.kappa,
        });
    }
    let mut segments = left.segments.clone();
    segments.extend_from_slice(&right.segments);
    Ok(QuasiFreeMap {
        u: &left.u * &right.u,
        kappa: left.kappa,
        segments,
    })
}

/// The dual evolution map for the repeated interaction up to time `t`.
///
/// `t` is decomposed as (n-1) tau + nu with nu in [0, tau); completed windows
/// 1..n-1 run for the full tau and window n for the remainder nu, composed
/// with the window-1 map outermost. A boundary time t = k tau belongs to the
/// next window, except t = N tau which closes the last window (nu = tau).
pub fn repeated_interaction_map(p: &ModelParams, t: f64) -> Result<QuasiFreeMap> {
    p.require_valid()?;
    let horizon = p.n_chain as f64 * p.tau;
    if !(0.0..=horizon).contains(&t) {
        return Err(Error::TimeOutOfRange { t, limit: horizon });
    }

    let (active, nu) = decompose_time(t, p.tau, p.n_chain);
    let mut map = one_step_map(p, active, nu)?;
    for n in (1..active).rev() {
        let full = one_step_map(p, n, p.tau)?;
        map = compose(&full, &map)?;
    }
    Ok(map)
}

/// Split t in [0, N tau] into (active window, time inside the window).
pub(crate) fn decompose_time(t: f64, tau: f64, n_chain: usize) -> (usize, f64) {
    if t >= n_chain as f64 * tau {
        return (n_chain, t - (n_chain - 1) as f64 * tau);
    }
    let mut k = (t / tau).floor() as usize;
    let mut nu = t - k as f64 * tau;
    // Guard the floating-point edges of the division.
    if nu < 0.0 {
        k -= 1;
        nu = t - k as f64 * tau;
    } else if nu >= tau {
        k += 1;
        nu = t - k as f64 * tau;
    }
    (k + 1, nu)
}

/// Hermitian covariance matrix X of a zero-mean quasi-free state with
/// characteristic function exp[-<zeta, X zeta>/4]. Physicality requires
/// X - I >= 0.
#[derive(Debug, Clone)]
pub struct CovarianceState {
    x: CMatrix,
}

impl CovarianceState {
    pub fn new(x: CMatrix) -> Result<Self> {
        if x.nrows() != x.ncols() {
            return Err(Error::DimensionMismatch {
                expected: x.nrows(),
                found: x.ncols(),
            });
        }
        let herm = linalg::hermiticity_defect(&x);
        if herm > TOL_HERM {
            return Err(Error::InvalidState(format!(
                "covariance not Hermitian: defect {herm:.3e}"
            )));
        }
        let min_eig = hermitian_min_eigenvalue(&(&x - CMatrix::identity(x.nrows(), x.ncols())));
        if min_eig < -TOL_PSD {
            return Err(Error::InvalidState(format!(
                "covariance not physical: min eigenvalue of X - I is {min_eig:.3e}"
            )));
        }
        Ok(Self { x })
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    /// Characteristic function exp[-<zeta, X zeta>/4], in (0, 1].
    pub fn char_function(&self, zeta: &CVector) -> Result<f64> {
        if zeta.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: zeta.len(),
            });
        }
        let quad = inner(zeta, &(&self.x * zeta)).re;
        Ok((-0.25 * quad).exp())
    }

    /// Mode occupation numbers n_j = (X_jj - 1)/2.
    pub fn occupations(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|j| (self.x[(j, j)].re - 1.0) / 2.0)
            .collect()
    }

    /// Smallest eigenvalue of X - I (>= -TOL_PSD for valid states).
    pub fn min_eig_x_minus_i(&self) -> f64 {
        let dim = self.dim();
        hermitian_min_eigenvalue(&(&self.x - CMatrix::identity(dim, dim)))
    }
}

/// Covariance of the product Gibbs state: mode 0 at inverse temperature
/// `beta0`, chain modes at `beta`:
/// X = coth(beta/2) I + (coth(beta0/2) - coth(beta/2)) P0.
pub fn gibbs_covariance(beta0: f64, beta: f64, n_chain: usize) -> Result<CovarianceState> {
    if !(beta0 > 0.0) || !(beta > 0.0) {
        return Err(Error::InvalidState(format!(
            "inverse temperatures must be positive: beta0={beta0}, beta={beta}"
        )));
    }
    let dim = n_chain + 1;
    let mut x = CMatrix::identity(dim, dim) * c(coth_half(beta));
    x[(0, 0)] = c(coth_half(beta0));
    CovarianceState::new(x)
}

/// coth(beta/2) = (1 + e^{-beta}) / (1 - e^{-beta}).
pub fn coth_half(beta: f64) -> f64 {
    let q = (-beta).exp();
    (1.0 + q) / (1.0 - q)
}

/// Complete-positivity certificate for a quasi-free map.
///
/// The map extends to a completely positive map iff a defect map C with
/// <C a, C b> = <a, b> - <U a, U b> exists, i.e. the defect Gram matrix
/// D = I - U^dag U is positive semidefinite, and the attenuation factor is
/// the characteristic function of a Gibbs state on the deformed CCR algebra,
/// which requires kappa = coth(beta/2) >= 1.
#[derive(Debug, Clone, Serialize)]
pub struct CpCertificate {
    /// Smallest eigenvalue of D = I - U^dag U.
    pub defect_min_eigenvalue: f64,
    /// Whether D is PSD within the tolerance.
    pub defect_psd: bool,
    pub kappa: f64,
    pub kappa_ok: bool,
    /// Tolerance the PSD check was run at.
    pub tol: f64,
    /// CP iff both checks hold.
    pub is_cp: bool,
}

impl std::fmt::Display for CpCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: min eig(I - U^dag U) = {:.3e} (psd: {}), kappa = {:.6} (>= 1: {})",
            if self.is_cp { "CP" } else { "NOT CP" },
            self.defect_min_eigenvalue,
            self.defect_psd,
            self.kappa,
            self.kappa_ok
        )
    }
}

/// Certify complete positivity of `map`; reports, never aborts.
pub fn cp_certificate(map: &QuasiFreeMap, tol: f64) -> CpCertificate {
    let dim = map.dim();
    let defect = CMatrix::identity(dim, dim) - map.u().adjoint() * map.u();
    let min_eig = hermitian_min_eigenvalue(&symmetrize(&defect));
    let defect_psd = min_eig >= -tol;
    let kappa_ok = map.kappa() >= 1.0 - tol;
    CpCertificate {
        defect_min_eigenvalue: min_eig,
        defect_psd,
        kappa: map.kappa(),
        kappa_ok,
        tol,
        is_cp: defect_psd && kappa_ok,
    }
}
