//! Area throughput of a mixed half-/full-duplex network and its maximization
//! over the two deployment densities: closed-form optima per duplex regime,
//! the regime decision itself, the critical residual-interference level at
//! which full duplex stops paying off, and the full-vs-half throughput gain.

use std::f64::consts::E;

use crate::analytic::{kappa, pair_f, spectral_h, DEFAULT_PAIR_REL_TOL};
use crate::model::{ModelError, NetworkConfig, SelfInterferenceModel};

/// Relative tolerance on |F − 2κH| below which the two duplex regimes are
/// declared exactly tied.
pub const BREAK_EVEN_REL_TOL: f64 = 1e-9;

/// Deployment densities: λ₁ half-duplex links and λ₂ full-duplex pairs per
/// unit area (each pair carries two directed links).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkDensities {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl LinkDensities {
    /// Validates that both densities are finite and nonnegative.
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self, ModelError> {
        for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ModelError::InvalidParameter {
                    name,
                    reason: "density must be nonnegative and finite".into(),
                });
            }
        }
        Ok(Self { lambda1, lambda2 })
    }
}

/// Which deployment mix maximizes throughput.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalRegime {
    /// Half-duplex links only: F > 2κH strictly.
    HdOnly,
    /// Full-duplex pairs only: F < 2κH strictly.
    FdOnly,
    /// F = 2κH within [`BREAK_EVEN_REL_TOL`]: a whole segment of mixes ties.
    BreakEven,
}

/// The tie set at break-even: every (λ₁, λ₂) with λ₁ + slope·λ₂ = intercept
/// (and both nonnegative) achieves the maximum throughput.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakEvenLine {
    /// Coefficient of λ₂, equal to 2κ.
    pub slope: f64,
    /// Common value of λ₁ + slope·λ₂ along the line, equal to 1/H.
    pub intercept: f64,
}

impl BreakEvenLine {
    /// The λ₂ that pairs with a given λ₁ on the line.
    pub fn lambda2_at(&self, lambda1: f64) -> f64 {
        (self.intercept - lambda1) / self.slope
    }

    /// Largest λ₁ on the line (its λ₂ = 0 endpoint).
    pub fn max_lambda1(&self) -> f64 {
        self.intercept
    }
}

/// Result of maximizing throughput over both densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputOptimum {
    pub regime: OptimalRegime,
    /// A maximizer; at break-even, the representative (1/H, 0) endpoint.
    pub densities: LinkDensities,
    pub value: f64,
    /// The full tie set, present only at break-even.
    pub line: Option<BreakEvenLine>,
}

/// Area throughput (nats per unit area) of a deployment with λ₁ half-duplex
/// links and λ₂ full-duplex pairs: (λ₁ + 2κλ₂)·e^{−λ₁H−λ₂F}·ln(1+θ).
///
/// Densities come from `densities`; `cfg` supplies θ, R, α (its own λ field is
/// not read here).
pub fn throughput(
    densities: &LinkDensities,
    cfg: &NetworkConfig,
    si: &SelfInterferenceModel,
) -> Result<f64, ModelError> {
    let densities = LinkDensities::new(densities.lambda1, densities.lambda2)?;
    let s = cfg.normalized_threshold();
    let h = spectral_h(s, cfg.alpha)?;
    let f = if densities.lambda2 > 0.0 {
        pair_f(s, cfg.alpha, cfg.link_distance, DEFAULT_PAIR_REL_TOL)?
    } else {
        0.0
    };
    let attempts = densities.lambda1 + 2.0 * kappa(cfg, si) * densities.lambda2;
    let suppression = (-densities.lambda1 * h - densities.lambda2 * f).exp();
    Ok(attempts * suppression * (1.0 + cfg.theta).ln())
}

/// Optimal half-duplex-only deployment: density 1/H and throughput
/// ln(1+θ)/(e·H).
pub fn t_hd_max(cfg: &NetworkConfig) -> Result<(f64, f64), ModelError> {
    let h = spectral_h(cfg.normalized_threshold(), cfg.alpha)?;
    Ok((1.0 / h, (1.0 + cfg.theta).ln() / (E * h)))
}

/// Optimal full-duplex-only deployment: pair density 1/F and throughput
/// 2κ·ln(1+θ)/(e·F).
pub fn t_fd_max(cfg: &NetworkConfig, si: &SelfInterferenceModel) -> Result<(f64, f64), ModelError> {
    let f = pair_f(
        cfg.normalized_threshold(),
        cfg.alpha,
        cfg.link_distance,
        DEFAULT_PAIR_REL_TOL,
    )?;
    Ok((
        1.0 / f,
        2.0 * kappa(cfg, si) * (1.0 + cfg.theta).ln() / (E * f),
    ))
}

/// Global throughput maximum over (λ₁, λ₂) ≥ 0. Mixing never beats the better
/// pure regime; the sign of F − 2κH decides which one wins, and when the two
/// tie the maximizers form the line λ₁ + 2κλ₂ = 1/H.
pub fn t_max(
    cfg: &NetworkConfig,
    si: &SelfInterferenceModel,
) -> Result<ThroughputOptimum, ModelError> {
    let s = cfg.normalized_threshold();
    let h = spectral_h(s, cfg.alpha)?;
    let f = pair_f(s, cfg.alpha, cfg.link_distance, DEFAULT_PAIR_REL_TOL)?;
    let kap = kappa(cfg, si);
    let rate = (1.0 + cfg.theta).ln();
    let diff = f - 2.0 * kap * h;
    if diff.abs() <= BREAK_EVEN_REL_TOL * f {
        Ok(ThroughputOptimum {
            regime: OptimalRegime::BreakEven,
            densities: LinkDensities {
                lambda1: 1.0 / h,
                lambda2: 0.0,
            },
            value: rate / (E * h),
            line: Some(BreakEvenLine {
                slope: 2.0 * kap,
                intercept: 1.0 / h,
            }),
        })
    } else if diff > 0.0 {
        Ok(ThroughputOptimum {
            regime: OptimalRegime::HdOnly,
            densities: LinkDensities {
                lambda1: 1.0 / h,
                lambda2: 0.0,
            },
            value: rate / (E * h),
            line: None,
        })
    } else {
        Ok(ThroughputOptimum {
            regime: OptimalRegime::FdOnly,
            densities: LinkDensities {
                lambda1: 0.0,
                lambda2: 1.0 / f,
            },
            value: 2.0 * kap * rate / (E * f),
            line: None,
        })
    }
}

/// Residual self-interference level β at which the optimal full-duplex and
/// half-duplex throughputs tie: β_c = K·ln(2H/F)/(θR^α). Scales exactly as
/// R^{−α} because H/F does not depend on R.
pub fn critical_beta(cfg: &NetworkConfig, k: f64) -> Result<f64, ModelError> {
    if !(k.is_finite() && k > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "k",
            reason: "cancellation constant must be positive and finite".into(),
        });
    }
    let s = cfg.normalized_threshold();
    let h = spectral_h(s, cfg.alpha)?;
    let f = pair_f(s, cfg.alpha, cfg.link_distance, DEFAULT_PAIR_REL_TOL)?;
    Ok(k * (2.0 * h / f).ln() / s)
}

/// Ratio of the optimal full-duplex-only throughput to the optimal
/// half-duplex-only one: TG = 2κH/F ∈ (κ, 2κ/(1+δ)); with perfect
/// cancellation the ceiling is 2α/(α+2).
pub fn throughput_gain(cfg: &NetworkConfig, si: &SelfInterferenceModel) -> Result<f64, ModelError> {
    let s = cfg.normalized_threshold();
    let h = spectral_h(s, cfg.alpha)?;
    let f = pair_f(s, cfg.alpha, cfg.link_distance, DEFAULT_PAIR_REL_TOL)?;
    Ok(2.0 * kappa(cfg, si) * h / f)
}
