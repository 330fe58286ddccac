//! The finite ladder model: an initial state coupled with equal strength to
//! `2m+1` equally spaced levels.
//!
//! The Hamiltonian is an arrowhead matrix — diagonal `(ω_s, ω_{−m}, …, ω_m)`
//! with constant coupling `v̄` between the initial state and every ladder
//! level, and no ladder–ladder coupling. Its eigenfrequencies are the roots
//! of the secular function
//!
//! ```text
//! f(ω′) = (ω_s − ω′) − v̄²·Σ_k 1/(ω_k − ω′)
//! ```
//!
//! which is strictly decreasing between consecutive poles `ω_k`, so exactly
//! one root lies in each of the `2m` interior gaps plus one below `ω_{−m}`
//! and one above `ω_m` — `2m+2` in total, found here by bisection. The
//! squared overlaps of each eigenvector with the initial state follow from
//! the exact finite normalization, and the survival amplitude is the
//! weighted phase sum `A_s(t) = Σ_j a_j²·e^{−iω′_j t}`.

use num_complex::Complex64;
use thiserror::Error;

use crate::model::{ModelError, ModelParams};

/// Bisection convergence target for eigenfrequencies (absolute, in ω′).
const ROOT_TOL: f64 = 1e-13;

/// Errors from the ladder-model solver.
#[derive(Debug, Error, PartialEq)]
pub enum DiscreteError {
    /// Parameter validation failed.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// A root bracket could not be established (secular function did not
    /// change sign where interlacing requires it).
    #[error("no sign change in the root bracket [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },
    /// The solved spectrum has the wrong number of eigenfrequencies.
    #[error("expected {expected} eigenfrequencies, found {found}")]
    RootCountMismatch { expected: usize, found: usize },
    /// The ladder model needs coupling data the parameters lack.
    #[error("discrete spectrum requires both vbar and epsilon in the parameters")]
    MissingCoupling,
}

/// The ladder specification: `2m+1` levels `ω_k = ω_s + kε`, `k ∈ {−m..m}`,
/// each coupled to the initial state with strength `v̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteSpectrum {
    m: u32,
    omega_s: f64,
    epsilon: f64,
    vbar: f64,
}

impl DiscreteSpectrum {
    /// A ladder with `ω_s = 0`.
    pub fn new(m: u32, epsilon: f64, vbar: f64) -> Result<Self, DiscreteError> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(ModelError::InvalidEpsilon(epsilon).into());
        }
        if !(vbar >= 0.0) || !vbar.is_finite() {
            return Err(ModelError::InvalidVbar(vbar).into());
        }
        Ok(Self { m, omega_s: 0.0, epsilon, vbar })
    }

    /// Builds the ladder from shared model parameters, which must carry both
    /// the coupling and the level spacing.
    pub fn from_params(m: u32, params: &ModelParams) -> Result<Self, DiscreteError> {
        let (Some(vbar), Some(epsilon)) = (params.vbar(), params.epsilon()) else {
            return Err(DiscreteError::MissingCoupling);
        };
        let mut spec = Self::new(m, epsilon, vbar)?;
        spec.omega_s = params.omega_s();
        Ok(spec)
    }

    /// Sets the initial-state frequency.
    pub fn with_omega_s(mut self, omega_s: f64) -> Result<Self, DiscreteError> {
        if !omega_s.is_finite() {
            return Err(ModelError::InvalidOmegaS(omega_s).into());
        }
        self.omega_s = omega_s;
        Ok(self)
    }

    /// Ladder half-count `m` (levels run `k = −m..m`).
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Initial-state frequency `ω_s`.
    pub fn omega_s(&self) -> f64 {
        self.omega_s
    }

    /// Level spacing `ε`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Coupling `v̄`.
    pub fn vbar(&self) -> f64 {
        self.vbar
    }

    /// Unperturbed ladder frequency `ω_k = ω_s + kε`.
    pub fn omega_k(&self, k: i64) -> f64 {
        self.omega_s + k as f64 * self.epsilon
    }

    /// Number of ladder levels, `2m + 1`.
    pub fn level_count(&self) -> usize {
        2 * self.m as usize + 1
    }

    /// Total state count including the initial state, `2m + 2`.
    pub fn state_count(&self) -> usize {
        self.level_count() + 1
    }

    /// The secular function `f(ω′) = (ω_s − ω′) − v̄²·Σ_k 1/(ω_k − ω′)`,
    /// strictly decreasing between consecutive poles.
    fn secular(&self, omega_prime: f64) -> f64 {
        let mut sum = 0.0;
        for k in -(self.m as i64)..=(self.m as i64) {
            sum += 1.0 / (self.omega_k(k) - omega_prime);
        }
        (self.omega_s - omega_prime) - self.vbar * self.vbar * sum
    }
}

/// Solved eigensystem: sorted eigenfrequencies with the squared overlap of
/// each eigenvector onto the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    spec: DiscreteSpectrum,
    omega_primes: Vec<f64>,
    weights: Vec<f64>,
}

impl EigenSolution {
    /// Eigenfrequencies `ω′_j`, sorted ascending, `2m+2` of them.
    pub fn omega_primes(&self) -> &[f64] {
        &self.omega_primes
    }

    /// Squared overlaps `a_j²` with the initial state, ordered like the
    /// eigenfrequencies; they sum to 1.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The ladder this solution belongs to.
    pub fn spec(&self) -> &DiscreteSpectrum {
        &self.spec
    }

    /// Ladder-level coefficients `b_k^j = v̄·a_j/(ω′_j − ω_k)` of each
    /// eigenvector (row `j`, column indexed `k = −m..m`), computed on
    /// demand; the amplitude itself needs only the weights.
    ///
    /// Uses the positive square root for `a_j`; eigenvectors are defined up
    /// to overall sign, so this fixes the convention.
    pub fn b_coefficients(&self) -> Vec<Vec<f64>> {
        let m = self.spec.m as i64;
        self.omega_primes
            .iter()
            .zip(&self.weights)
            .map(|(&wp, &wsq)| {
                let a = wsq.sqrt();
                (-m..=m)
                    .map(|k| self.spec.vbar * a / (wp - self.spec.omega_k(k)))
                    .collect()
            })
            .collect()
    }
}

/// Bisection for the unique root of the (strictly decreasing) secular
/// function in `(lo, hi)`, given `f(lo) > 0 > f(hi)`.
fn bisect_decreasing(spec: &DiscreteSpectrum, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        if spec.secular(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Nudges a bracket endpoint off its pole until the secular function has the
/// sign interlacing requires there (`want_positive` just above a pole,
/// negative just below the next).
fn offset_from_pole(
    spec: &DiscreteSpectrum,
    pole: f64,
    direction: f64,
    want_positive: bool,
) -> Result<f64, DiscreteError> {
    let mut xi = spec.epsilon * 1e-9;
    for _ in 0..60 {
        let x = pole + direction * xi;
        let f = spec.secular(x);
        if (f > 0.0) == want_positive && f != 0.0 {
            return Ok(x);
        }
        xi *= 0.5;
        if xi == 0.0 {
            break;
        }
    }
    Err(DiscreteError::BracketFailure { lo: pole, hi: pole + direction * spec.epsilon })
}

/// Finds all `2m+2` eigenfrequencies of the arrowhead Hamiltonian by
/// bisection in the interlacing brackets, and the squared overlap weights
/// from the exact finite normalization
/// `a_j² = 1/(1 + v̄²·Σ_k (ω_k − ω′_j)⁻²)`.
///
/// `v̄ = 0` is the uncoupled case: eigenfrequencies are the unperturbed
/// `{ω_s} ∪ {ω_k}` (sorted, with the duplicate at `ω_s = ω_0` kept) and all
/// weight sits on the initial state.
pub fn solve_eigensystem(spec: &DiscreteSpectrum) -> Result<EigenSolution, DiscreteError> {
    let expected = spec.state_count();
    if spec.vbar == 0.0 {
        let mut omega_primes: Vec<f64> = Vec::with_capacity(expected);
        let mut weights = vec![0.0; expected];
        omega_primes.push(spec.omega_s);
        for k in -(spec.m as i64)..=(spec.m as i64) {
            omega_primes.push(spec.omega_k(k));
        }
        omega_primes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // All overlap stays on the uncoupled initial state; with the k = 0
        // level degenerate at ω_s, assign the weight to the first of the pair.
        let s_index = omega_primes.iter().position(|&w| w == spec.omega_s).unwrap();
        weights[s_index] = 1.0;
        return Ok(EigenSolution { spec: *spec, omega_primes, weights });
    }

    let m = spec.m as i64;
    let vbar_sq = spec.vbar * spec.vbar;
    let mut omega_primes = Vec::with_capacity(expected);

    // Root below the lowest pole: f → +∞ as ω′ → −∞ and → −∞ at the pole.
    let lowest = spec.omega_k(-m);
    let mut lo = lowest - vbar_sq * expected as f64 / spec.epsilon - 1.0;
    for _ in 0..200 {
        if spec.secular(lo) > 0.0 {
            break;
        }
        lo = lowest - 2.0 * (lowest - lo);
    }
    if spec.secular(lo) <= 0.0 {
        return Err(DiscreteError::BracketFailure { lo, hi: lowest });
    }
    let hi = offset_from_pole(spec, lowest, -1.0, false)?;
    omega_primes.push(bisect_decreasing(spec, lo, hi));

    // One root strictly inside each gap (ω_k, ω_{k+1}).
    for k in -m..m {
        let lo = offset_from_pole(spec, spec.omega_k(k), 1.0, true)?;
        let hi = offset_from_pole(spec, spec.omega_k(k + 1), -1.0, false)?;
        omega_primes.push(bisect_decreasing(spec, lo, hi));
    }

    // Root above the highest pole: f → +∞ at the pole and → −∞ as ω′ → +∞.
    let highest = spec.omega_k(m);
    let lo = offset_from_pole(spec, highest, 1.0, true)?;
    let mut hi = highest + vbar_sq * expected as f64 / spec.epsilon + 1.0;
    for _ in 0..200 {
        if spec.secular(hi) < 0.0 {
            break;
        }
        hi = highest + 2.0 * (hi - highest);
    }
    if spec.secular(hi) >= 0.0 {
        return Err(DiscreteError::BracketFailure { lo: highest, hi });
    }
    omega_primes.push(bisect_decreasing(spec, lo, hi));

    if omega_primes.len() != expected {
        return Err(DiscreteError::RootCountMismatch { expected, found: omega_primes.len() });
    }

    let weights = omega_primes
        .iter()
        .map(|&wp| {
            let mut sum = 0.0;
            for k in -m..=m {
                let gap = spec.omega_k(k) - wp;
                sum += 1.0 / (gap * gap);
            }
            1.0 / (1.0 + vbar_sq * sum)
        })
        .collect();

    Ok(EigenSolution { spec: *spec, omega_primes, weights })
}

/// The infinite-ladder approximation to the overlap weights,
/// `a_j² ≈ v̄²/(v̄² + (ω_s − ω′_j)² + (πv̄²/ε)²)` — a Lorentzian in the
/// eigenfrequency offset, for comparison with the exact weights.
pub fn weights_lorentzian_approx(eig: &EigenSolution) -> Vec<f64> {
    let spec = eig.spec();
    let vbar_sq = spec.vbar * spec.vbar;
    let width = std::f64::consts::PI * vbar_sq / spec.epsilon;
    eig.omega_primes()
        .iter()
        .map(|&wp| {
            let off = spec.omega_s - wp;
            vbar_sq / (vbar_sq + off * off + width * width)
        })
        .collect()
}

/// Survival amplitude of the initial state on the solved ladder:
/// `A_s(t) = Σ_j a_j²·e^{−iω′_j t}`; `A_s(0) = 1` and `|A_s(t)| ≤ 1`.
pub fn survival_amplitude_discrete(t: f64, eig: &EigenSolution) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&wp, &wsq) in eig.omega_primes().iter().zip(eig.weights()) {
        acc += wsq * Complex64::from_polar(1.0, -wp * t);
    }
    acc
}
