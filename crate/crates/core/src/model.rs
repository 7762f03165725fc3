//! Model parameters, hypothesis validation and window coupling matrices.
//!
//! The model is one bosonic mode (index 0, energy `E`) coupled during window
//! `n` to chain mode `n` (indices 1..=N, energy `epsilon`) with strength
//! `eta`, while mode 0 exchanges quanta with a reservoir at rates
//! `sigma_minus` (loss) and `sigma_plus` (gain). Two hypotheses keep the
//! dynamics well behaved:
//!
//! - H1: eta^2 <= E * epsilon  (window Hamiltonians bounded below)
//! - H2: 0 <= sigma_plus < sigma_minus  (net loss)

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the repeated-interaction model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Energy of the distinguished mode 0.
    #[serde(rename = "E")]
    pub e: f64,
    /// Energy of each chain mode.
    pub epsilon: f64,
    /// Coupling strength between mode 0 and the active chain mode.
    pub eta: f64,
    /// Length of one interaction window.
    pub tau: f64,
    /// Reservoir gain rate.
    pub sigma_plus: f64,
    /// Reservoir loss rate.
    pub sigma_minus: f64,
    /// Number of chain modes.
    #[serde(rename = "N")]
    pub n_chain: usize,
}

/// A single violated constraint, by name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub name: &'static str,
    pub detail: String,
}

/// Result of inspecting a parameter set; never aborts, lists every violation.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.violations.iter().map(|v| v.name).collect()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            let lines: Vec<String> = self
                .violations
                .iter()
                .map(|v| format!("{}: {}", v.name, v.detail))
                .collect();
            write!(f, "{}", lines.join("; "))
        }
    }
}

impl ModelParams {
    /// Dimension of the one-particle space: mode 0 plus N chain modes.
    pub fn dim(&self) -> usize {
        self.n_chain + 1
    }

    /// Check every constraint; the report lists all violations by name.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut positive = |name: &'static str, value: f64| {
            if !(value > 0.0) {
                violations.push(Violation {
                    name,
                    detail: format!("{name} = {value} must be > 0"),
                });
            }
        };
        positive("E>0", self.e);
        positive("epsilon>0", self.epsilon);
        positive("tau>0", self.tau);
        positive("sigma_minus>0", self.sigma_minus);
        // eta = 0 is the decoupled limit; accepted so that decoupled
        // reference runs validate.
        if !(self.eta >= 0.0) {
            violations.push(Violation {
                name: "eta>=0",
                detail: format!("eta = {} must be >= 0", self.eta),
            });
        }
        if !(self.sigma_plus >= 0.0) {
            violations.push(Violation {
                name: "sigma_plus>=0",
                detail: format!("sigma_plus = {} must be >= 0", self.sigma_plus),
            });
        }
        if self.n_chain < 1 {
            violations.push(Violation {
                name: "N>=1",
                detail: "at least one chain mode is required".into(),
            });
        }
        // H1 (non-strict boundary accepted): eta^2 <= E * epsilon.
        if !(self.eta * self.eta <= self.e * self.epsilon) {
            violations.push(Violation {
                name: "H1",
                detail: format!(
                    "eta^2 = {} > E*epsilon = {}",
                    self.eta * self.eta,
                    self.e * self.epsilon
                ),
            });
        }
        // H2 (strict): 0 <= sigma_plus < sigma_minus. sigma_plus = 0 allowed.
        if !(self.sigma_plus < self.sigma_minus) {
            violations.push(Violation {
                name: "H2",
                detail: format!(
                    "sigma_plus = {} must be < sigma_minus = {}",
                    self.sigma_plus, self.sigma_minus
                ),
            });
        }
        ValidationReport { violations }
    }

    /// Error unless every constraint holds.
    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidParams(report.to_string()))
        }
    }

    /// Attenuation coefficient kappa = (sigma_minus + sigma_plus) /
    /// (sigma_minus - sigma_plus), >= 1 with equality iff sigma_plus = 0.
    pub fn kappa(&self) -> Result<f64> {
        if !(self.sigma_plus >= 0.0 && self.sigma_plus < self.sigma_minus) {
            return Err(Error::KappaUndefined {
                sigma_plus: self.sigma_plus,
                sigma_minus: self.sigma_minus,
            });
        }
        Ok((self.sigma_minus + self.sigma_plus) / (self.sigma_minus - self.sigma_plus))
    }

    /// Inverse temperature at which the reservoir gain/loss rates balance a
    /// Gibbs state: beta = log(sigma_minus / sigma_plus).
    pub fn matched_beta(&self) -> Result<f64> {
        if !(self.sigma_plus > 0.0 && self.sigma_plus < self.sigma_minus) {
            return Err(Error::KappaUndefined {
                sigma_plus: self.sigma_plus,
                sigma_minus: self.sigma_minus,
            });
        }
        Ok((self.sigma_minus / self.sigma_plus).ln())
    }

    /// Relative bound of the window coupling with respect to the dissipative
    /// part: c = sqrt(2) * eta * (E + sqrt(E^2 + (sigma_plus+sigma_minus)^2/4))^{-1/2}
    /// * epsilon^{-1/2}. Under H1 and H2, c < 1.
    pub fn relative_bound_c(&self) -> f64 {
        let s = self.sigma_plus + self.sigma_minus;
        let root = (self.e * self.e + s * s / 4.0).sqrt();
        2.0_f64.sqrt() * self.eta / ((self.e + root).sqrt() * self.epsilon.sqrt())
    }

    /// Constant C in || eta(b0^dag b_n + b_n^dag b0) phi || <= c ||K0 phi|| + C ||phi||,
    /// from the same estimate chain as [`Self::relative_bound_c`].
    pub fn relative_bound_shift(&self) -> f64 {
        let offset = ((self.e + self.epsilon).powi(2) + self.sigma_minus.powi(2) / 4.0).sqrt();
        self.relative_bound_c() * offset
    }

    /// Coupling matrices of window `n`.
    pub fn layout(&self, n: usize) -> Result<CouplingLayout> {
        build_layout(self, n)
    }
}

/// Convenience free function mirroring [`ModelParams::validate`].
pub fn validate_params(p: &ModelParams) -> ValidationReport {
    p.validate()
}

/// The (N+1)x(N+1) real matrices that define one interaction window.
///
/// `y = epsilon*I + ((E-epsilon)/2)*J_n + X_n` carries the window Hamiltonian
/// coefficients: y[0,0] = E, y[n,n] = epsilon, y[0,n] = y[n,0] = eta, every
/// other diagonal entry epsilon, everything else zero. `p0` projects onto
/// mode 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingLayout {
    pub j: DMatrix<f64>,
    pub x: DMatrix<f64>,
    pub y: DMatrix<f64>,
    pub p0: DMatrix<f64>,
    /// Active chain mode, 1..=N.
    pub mode: usize,
}

/// Build the window-`n` coupling matrices.
pub fn build_layout(p: &ModelParams, n: usize) -> Result<CouplingLayout> {
    p.require_valid()?;
    if n < 1 || n > p.n_chain {
        return Err(Error::WindowOutOfRange {
            n,
            n_chain: p.n_chain,
        });
    }
    let dim = p.dim();
    let half_gap = (p.e - p.epsilon) / 2.0;

    let mut j = DMatrix::<f64>::zeros(dim, dim);
    j[(0, 0)] = 1.0;
    j[(n, n)] = 1.0;

    let mut x = DMatrix::<f64>::zeros(dim, dim);
    x[(0, 0)] = half_gap;
    x[(n, n)] = -half_gap;
    x[(0, n)] = p.eta;
    x[(n, 0)] = p.eta;

    let y = DMatrix::<f64>::identity(dim, dim) * p.epsilon + &j * half_gap + &x;

    let mut p0 = DMatrix::<f64>::zeros(dim, dim);
    p0[(0, 0)] = 1.0;

    Ok(CouplingLayout { j, x, y, p0, mode: n })
}
