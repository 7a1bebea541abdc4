//! Shared configuration types: network geometry and threshold, the duplex-mode
//! mix, and the residual self-interference model.
//!
//! All thresholds are linear (not dB) at this layer; any dB conversion belongs
//! to front ends. Types validate their invariants at construction.

use thiserror::Error;

/// Speed of light in vacuum \[m/s\], used when building the propagation
/// constant from antenna parameters.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Errors from configuration validation and analytic evaluation.
#[derive(Debug, Error)]
pub enum ModelError {
    /// A parameter failed validation.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    /// Numerical quadrature failed.
    #[error(transparent)]
    Quadrature(#[from] crate::quadrature::QuadratureError),
    /// A root bracket failed to straddle its target, even after expansion.
    #[error("bracket [{lo:e}, {hi:e}] does not straddle the target {target:e}")]
    Bracket { lo: f64, hi: f64, target: f64 },
}

fn require(ok: bool, name: &'static str, reason: &str) -> Result<(), ModelError> {
    if ok {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            reason: reason.to_string(),
        })
    }
}

/// Which conditional success probability a computation refers to: the typical
/// link transmits half-duplex, full-duplex, or its mode is itself random.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkClass {
    Hd,
    Fd,
    Unconditional,
}

/// Network configuration: node density, SIR threshold, link distance, and
/// path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// Link density λ (links per unit area).
    pub lambda: f64,
    /// SIR threshold θ, linear.
    pub theta: f64,
    /// Distance R between each transmitter and its receiver.
    pub link_distance: f64,
    /// Path-loss exponent α; must exceed 2 for total interference to be finite.
    pub alpha: f64,
}

impl NetworkConfig {
    /// Validates and builds a configuration. θ, λ, R must be positive and
    /// finite; α must exceed 2.
    pub fn new(
        lambda: f64,
        theta: f64,
        link_distance: f64,
        alpha: f64,
    ) -> Result<Self, ModelError> {
        require(
            lambda.is_finite() && lambda > 0.0,
            "lambda",
            "must be a positive finite density",
        )?;
        require(
            theta.is_finite() && theta > 0.0,
            "theta",
            "must be a positive finite linear SIR threshold",
        )?;
        require(
            link_distance.is_finite() && link_distance > 0.0,
            "link_distance",
            "must be a positive finite length",
        )?;
        require(
            alpha.is_finite() && alpha > 2.0,
            "alpha",
            "path-loss exponent must exceed 2",
        )?;
        Ok(Self {
            lambda,
            theta,
            link_distance,
            alpha,
        })
    }

    /// Characteristic exponent δ = 2/α ∈ (0, 1).
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    /// Normalized threshold s = θ·R^α taken by the interference functionals.
    pub fn normalized_threshold(&self) -> f64 {
        self.theta * self.link_distance.powf(self.alpha)
    }

    /// Copy of this configuration with a different threshold (for curves
    /// parameterized by θ).
    pub fn with_theta(&self, theta: f64) -> Result<Self, ModelError> {
        Self::new(self.lambda, theta, self.link_distance, self.alpha)
    }
}

/// Per-slot link-state probabilities: silent (p0), half-duplex (p1),
/// full-duplex (p2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuplexMix {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
}

impl DuplexMix {
    /// Probabilities must each lie in [0, 1] and sum to 1 (within 1e-9).
    pub fn new(p0: f64, p1: f64, p2: f64) -> Result<Self, ModelError> {
        for (name, p) in [("p0", p0), ("p1", p1), ("p2", p2)] {
            require(
                p.is_finite() && (0.0..=1.0).contains(&p),
                match name {
                    "p0" => "p0",
                    "p1" => "p1",
                    _ => "p2",
                },
                "probability must lie in [0, 1]",
            )?;
        }
        require(
            (p0 + p1 + p2 - 1.0).abs() <= 1e-9,
            "duplex mix",
            "probabilities must sum to 1",
        )?;
        Ok(Self { p0, p1, p2 })
    }

    /// Builds a mix from the active probabilities, deriving p0 = 1 − p1 − p2.
    pub fn from_active(p1: f64, p2: f64) -> Result<Self, ModelError> {
        require(
            p1.is_finite() && p2.is_finite() && p1 >= 0.0 && p2 >= 0.0 && p1 + p2 <= 1.0 + 1e-12,
            "duplex mix",
            "active probabilities must be nonnegative with p1 + p2 <= 1",
        )?;
        let p0 = (1.0 - p1 - p2).max(0.0);
        Ok(Self { p0, p1, p2 })
    }

    /// Every active link transmits half-duplex.
    pub fn hd_only() -> Self {
        Self {
            p0: 0.0,
            p1: 1.0,
            p2: 0.0,
        }
    }

    /// Every active link transmits full-duplex.
    pub fn fd_only() -> Self {
        Self {
            p0: 0.0,
            p1: 0.0,
            p2: 1.0,
        }
    }

    /// Probability the typical link is active at all.
    pub fn active(&self) -> f64 {
        self.p1 + self.p2
    }
}

/// Residual self-interference: the self-interference-to-power ratio β left
/// after cancellation, and the propagation constant K relating transmit power
/// to received power at the reference geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfInterferenceModel {
    /// Residual self-interference-to-power ratio; 0 means perfect cancellation.
    pub beta: f64,
    /// Propagation constant K > 0.
    pub k: f64,
}

impl SelfInterferenceModel {
    pub fn new(beta: f64, k: f64) -> Result<Self, ModelError> {
        require(
            beta.is_finite() && (0.0..=1.0).contains(&beta),
            "beta",
            "residual self-interference ratio must lie in [0, 1]",
        )?;
        require(
            k.is_finite() && k > 0.0,
            "k",
            "propagation constant must be positive and finite",
        )?;
        Ok(Self { beta, k })
    }

    /// Perfect cancellation (β = 0) with the given propagation constant.
    pub fn perfect(k: f64) -> Result<Self, ModelError> {
        Self::new(0.0, k)
    }

    /// Builds the propagation constant from antenna gains and carrier
    /// frequency: K = G_tx·G_rx·(c/(4π·f_c))².
    pub fn from_antenna(
        beta: f64,
        g_tx: f64,
        g_rx: f64,
        carrier_hz: f64,
    ) -> Result<Self, ModelError> {
        require(
            g_tx.is_finite() && g_tx > 0.0 && g_rx.is_finite() && g_rx > 0.0,
            "antenna gain",
            "gains must be positive and finite",
        )?;
        require(
            carrier_hz.is_finite() && carrier_hz > 0.0,
            "carrier_hz",
            "carrier frequency must be positive and finite",
        )?;
        let wavelength_factor = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * carrier_hz);
        Self::new(beta, g_tx * g_rx * wavelength_factor * wavelength_factor)
    }
}
