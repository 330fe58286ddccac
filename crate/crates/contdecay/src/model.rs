//! Shared model parameters and the Lorentzian spectral density.
//!
//! Every evaluator in this crate integrates (or sums) the same spectral
//! density: a Lorentzian of half-width `δ = α/2` centered at `ω = 0`,
//! optionally broadened by the squared coupling `V̄²` in the denominator.
//! [`ModelParams`] carries that parameter set; [`ContinuumSpec`] selects the
//! spectral support.

use thiserror::Error;

/// Errors from parameter and spectrum-specification validation.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    /// `alpha` must be a positive, finite decay-rate parameter.
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    /// Level spacing must be positive.
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    /// Coupling must be nonnegative.
    #[error("vbar must be nonnegative and finite, got {0}")]
    InvalidVbar(f64),
    /// `omega_s` must be finite.
    #[error("omega_s must be finite, got {0}")]
    InvalidOmegaS(f64),
    /// Supplied `alpha` and coupling pair disagree with `alpha = 2π·v̄²/ε`.
    #[error("alpha {alpha} inconsistent with 2*pi*vbar^2/epsilon = {derived} (relative tolerance 1e-12)")]
    InconsistentCoupling { alpha: f64, derived: f64 },
    /// The `V̄²`-in-denominator flag needs a known coupling value.
    #[error("include_vbar_sq requires a vbar value (construct via from_coupling or from_alpha_with_vbar)")]
    MissingVbar,
    /// Doubly-truncated support needs a nonempty interval.
    #[error("doubly truncated spectrum requires omega_min < omega_max, got [{omega_min}, {omega_max}]")]
    EmptySupport { omega_min: f64, omega_max: f64 },
    /// Truncation edges must be finite numbers.
    #[error("spectrum edge must be finite, got {0}")]
    NonFiniteEdge(f64),
}

/// The decay-rate/coupling parameter set shared by every evaluator.
///
/// `alpha` is the canonical stored parameter (`α = 2πV̄²/ε`, inverse time
/// units, with `ħ = 1` so all frequencies are angular). The coupling `v̄` and
/// level spacing `ε` are optional extras: they are required by the
/// discrete-ladder model and by the `V̄²` denominator flag, but continuum runs
/// parameterized directly by `α` may omit them.
///
/// Invariants maintained by the constructors:
/// - `alpha > 0`, `epsilon > 0`, `vbar ≥ 0`, all finite;
/// - when both `vbar` and `epsilon` are supplied, `alpha = 2π·v̄²/ε` to
///   relative tolerance `1e-12`;
/// - `include_vbar_sq` implies `vbar` is known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    omega_s: f64,
    include_vbar_sq: bool,
    vbar: Option<f64>,
    epsilon: Option<f64>,
}

impl ModelParams {
    /// Parameters fixed directly by the decay rate `α`; no coupling data attached.
    pub fn from_alpha(alpha: f64) -> Result<Self, ModelError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(ModelError::InvalidAlpha(alpha));
        }
        Ok(Self { alpha, omega_s: 0.0, include_vbar_sq: false, vbar: None, epsilon: None })
    }

    /// Parameters fixed by `α` with a coupling value attached (used by runs
    /// that quote `α` exactly but still carry `v̄` for the denominator flag).
    pub fn from_alpha_with_vbar(alpha: f64, vbar: f64) -> Result<Self, ModelError> {
        let mut p = Self::from_alpha(alpha)?;
        if !(vbar >= 0.0) || !vbar.is_finite() {
            return Err(ModelError::InvalidVbar(vbar));
        }
        p.vbar = Some(vbar);
        Ok(p)
    }

    /// Derives `α = 2π·v̄²/ε` from the coupling and level spacing; `ω_s = 0`.
    pub fn from_coupling(vbar: f64, epsilon: f64) -> Result<Self, ModelError> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(ModelError::InvalidEpsilon(epsilon));
        }
        if !(vbar >= 0.0) || !vbar.is_finite() {
            return Err(ModelError::InvalidVbar(vbar));
        }
        let alpha = 2.0 * std::f64::consts::PI * vbar * vbar / epsilon;
        if !(alpha > 0.0) {
            return Err(ModelError::InvalidAlpha(alpha));
        }
        Ok(Self { alpha, omega_s: 0.0, include_vbar_sq: false, vbar: Some(vbar), epsilon: Some(epsilon) })
    }

    /// Full triple, checked for coherence: `alpha` must equal `2π·v̄²/ε`
    /// to relative tolerance `1e-12`.
    pub fn from_alpha_and_coupling(alpha: f64, vbar: f64, epsilon: f64) -> Result<Self, ModelError> {
        let derived = Self::from_coupling(vbar, epsilon)?;
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(ModelError::InvalidAlpha(alpha));
        }
        if (alpha - derived.alpha).abs() > 1e-12 * alpha.abs() {
            return Err(ModelError::InconsistentCoupling { alpha, derived: derived.alpha });
        }
        Ok(Self { alpha, ..derived })
    }

    /// Sets the initial-state frequency `ω_s` (default 0).
    pub fn with_omega_s(mut self, omega_s: f64) -> Result<Self, ModelError> {
        if !omega_s.is_finite() {
            return Err(ModelError::InvalidOmegaS(omega_s));
        }
        self.omega_s = omega_s;
        Ok(self)
    }

    /// Switches the `V̄²`-in-denominator term on or off. Turning it on
    /// requires a known coupling value.
    pub fn with_vbar_sq_in_denominator(mut self, on: bool) -> Result<Self, ModelError> {
        if on && self.vbar.is_none() {
            return Err(ModelError::MissingVbar);
        }
        self.include_vbar_sq = on;
        Ok(self)
    }

    /// Decay-rate parameter `α`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Initial-state frequency `ω_s`.
    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    /// Whether `V̄²` is added to the Lorentzian denominator.
    pub fn include_vbar_sq(&self) -> bool {
        self.include_vbar_sq
    }

    /// Coupling `v̄ = V/ħ`, when supplied.
    pub fn vbar(&self) -> Option<f64> {
        self.vbar
    }

    /// Unperturbed level spacing `ε`, when supplied.
    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    /// Lorentzian half-width `δ = α/2`.
    pub fn half_width(&self) -> f64 {
        0.5 * self.alpha
    }

    /// Effective half-width `sqrt(δ² + V̄²)` when the denominator flag is on,
    /// plain `δ` otherwise. This is the decay constant of the full-line
    /// survival amplitude for the active density.
    pub fn effective_half_width(&self) -> f64 {
        let d = self.half_width();
        if self.include_vbar_sq {
            let v = self.vbar.expect("flag implies vbar present");
            (d * d + v * v).sqrt()
        } else {
            d
        }
    }
}

/// Spectral support of the environment the initial state decays into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuumSpec {
    /// Energy support `(−∞, ∞)`.
    Full,
    /// Energy support `[ω_min, ∞)`.
    LowerTruncated { omega_min: f64 },
    /// Energy support `[ω_min, ω_max]`.
    DoublyTruncated { omega_min: f64, omega_max: f64 },
    /// Equally spaced ladder of `2m+1` levels `ω_s + kε`, `k ∈ {−m..m}`.
    Discrete { m: u32 },
}

impl ContinuumSpec {
    /// Checks the support invariants (finite edges, nonempty interval).
    pub fn validate(&self) -> Result<(), ModelError> {
        match *self {
            ContinuumSpec::Full | ContinuumSpec::Discrete { .. } => Ok(()),
            ContinuumSpec::LowerTruncated { omega_min } => {
                if omega_min.is_finite() {
                    Ok(())
                } else {
                    Err(ModelError::NonFiniteEdge(omega_min))
                }
            }
            ContinuumSpec::DoublyTruncated { omega_min, omega_max } => {
                if !omega_min.is_finite() {
                    return Err(ModelError::NonFiniteEdge(omega_min));
                }
                if !omega_max.is_finite() {
                    return Err(ModelError::NonFiniteEdge(omega_max));
                }
                if omega_min < omega_max {
                    Ok(())
                } else {
                    Err(ModelError::EmptySupport { omega_min, omega_max })
                }
            }
        }
    }
}

/// The Lorentzian spectral density
/// `M(ω) = (α/2π) / (ω² + δ² [+ V̄²])` with `δ = α/2`.
///
/// Positive and even in `ω`, strictly decreasing in `|ω|`; integrates to 1
/// over the full line when the `V̄²` term is off (and to `δ/δ_eff < 1` when
/// it is on).
pub fn lorentzian_density(omega: f64, params: &ModelParams) -> f64 {
    let kappa = params.alpha() / (2.0 * std::f64::consts::PI);
    let d = params.effective_half_width();
    kappa / (omega * omega + d * d)
}

/// Builds [`ModelParams`] from the coupling pair: `α = 2π·v̄²/ε`, `ω_s = 0`.
pub fn params_from_coupling(vbar: f64, epsilon: f64) -> Result<ModelParams, ModelError> {
    ModelParams::from_coupling(vbar, epsilon)
}
