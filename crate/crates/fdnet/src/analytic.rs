//! Closed-form and quadrature-backed success-probability quantities:
//! interference functionals H and F, the residual self-interference factor κ,
//! conditional/unconditional success probabilities with bounds, horizontal
//! gaps between SIR distributions, and the FD-vs-HD SIR loss.
//!
//! Everything here is deterministic; the Monte Carlo counterpart lives in
//! [`crate::simulator`]. Thresholds are linear throughout.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::model::{DuplexMix, LinkClass, ModelError, NetworkConfig, SelfInterferenceModel};
use crate::quadrature::{integrate_finite, QuadratureError, QuadratureOptions};

/// Default relative tolerance for evaluating the pair functional F. Downstream
/// quantities take logs and ratios of F, which amplifies error, so the default
/// is tight.
pub const DEFAULT_PAIR_REL_TOL: f64 = 1e-9;

/// Tolerance (in log-threshold space) for numeric inversion of success curves.
const INVERSION_LOG_TOL: f64 = 1e-10;

/// Lower and upper bounds on a success probability, optionally with the exact
/// value in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessBounds {
    pub lower: f64,
    /// Exact value, present when its (quadrature-backed) evaluation was
    /// requested.
    pub exact: Option<f64>,
    pub upper: f64,
}

/// Spectral interference functional H(s, α) = π²·δ·s^δ / sin(πδ) with
/// δ = 2/α. Strictly increasing in s, with H(0, ·) = 0.
pub fn spectral_h(s: f64, alpha: f64) -> Result<f64, ModelError> {
    if !(alpha.is_finite() && alpha > 2.0) {
        return Err(ModelError::InvalidParameter {
            name: "alpha",
            reason: "path-loss exponent must exceed 2".into(),
        });
    }
    if !(s.is_finite() && s >= 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "s",
            reason: "normalized threshold must be nonnegative and finite".into(),
        });
    }
    let delta = 2.0 / alpha;
    Ok(PI * PI * delta * s.powf(delta) / (PI * delta).sin())
}

/// Pair interference functional F(s, α, R): the analogue of H for a point
/// process of transmitting pairs at separation R.
///
/// Internally R is factored out: F(s, α, R) = R²·F(s/R^α, α, 1), so one cached
/// integral per (normalized threshold, α) serves every R. Use
/// [`pair_f_direct`] to evaluate the unnormalized double integral as a
/// cross-check of that identity.
pub fn pair_f(s: f64, alpha: f64, link_distance: f64, rel_tol: f64) -> Result<f64, ModelError> {
    if !(link_distance.is_finite() && link_distance > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "link_distance",
            reason: "must be a positive finite length".into(),
        });
    }
    if !(s.is_finite() && s >= 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "s",
            reason: "normalized threshold must be nonnegative and finite".into(),
        });
    }
    let theta = s / link_distance.powf(alpha);
    Ok(link_distance * link_distance * pair_f_normalized(theta, alpha, rel_tol)?)
}

/// Evaluates the pair functional's double integral directly at link distance
/// R, without the R-normalization shortcut. Slower and uncached; exists so the
/// scale identity F(θR^α, α, R) = R²·F(θ, α, 1) can be verified against an
/// independent evaluation path.
pub fn pair_f_direct(
    s: f64,
    alpha: f64,
    link_distance: f64,
    rel_tol: f64,
) -> Result<f64, ModelError> {
    if !(link_distance.is_finite() && link_distance > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "link_distance",
            reason: "must be a positive finite length".into(),
        });
    }
    compute_pair_integral(s, alpha, link_distance, rel_tol)
}

type PairCache = Mutex<HashMap<(u64, u64, u64), f64>>;

fn pair_cache() -> &'static PairCache {
    static CACHE: OnceLock<PairCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized F(θ, α, 1). Keys compare the exact bit patterns of (θ, α,
/// rel_tol); sweeps re-evaluate identical integrals thousands of times.
fn pair_f_normalized(theta: f64, alpha: f64, rel_tol: f64) -> Result<f64, ModelError> {
    let key = (theta.to_bits(), alpha.to_bits(), rel_tol.to_bits());
    if let Some(&v) = pair_cache().lock().unwrap().get(&key) {
        return Ok(v);
    }
    let value = compute_pair_integral(theta, alpha, 1.0, rel_tol)?;
    pair_cache().lock().unwrap().insert(key, value);
    Ok(value)
}

/// The double integral behind F: over interferer positions in polar form,
/// where each transmitting pair contributes its primary node at radius r and
/// its partner at distance R from it with uniform angle.
///
/// Numerically this uses two reformulations of the textbook form
/// ∫₀^∞ (2π − I(r)/(1+s·r^{−α})) r dr:
///
/// * the bracket is expanded to r·(2π/(1+B) + J/(1+A)) with A = s·r^{−α},
///   B = 1/A and J = ∫₀^{2π} dφ/(1 + d^α/s), which is a sum of positive terms
///   — the original subtraction cancels catastrophically in the tail where
///   both operands approach 2π;
/// * the radial variable is mapped by r = R·(1−v²)/v², i.e. the standard
///   u = r/(R+r) tail compactification composed with u = 1−v². The square
///   root damps the (1−u)^{α−3} endpoint behavior of the compactified
///   integrand into v^{2α−5}, which is bounded for every α > 2 instead of
///   singular for α < 3.
fn compute_pair_integral(
    s: f64,
    alpha: f64,
    link_distance: f64,
    rel_tol: f64,
) -> Result<f64, ModelError> {
    if !(alpha.is_finite() && alpha > 2.0) {
        return Err(ModelError::InvalidParameter {
            name: "alpha",
            reason: "path-loss exponent must exceed 2".into(),
        });
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "rel_tol",
            reason: "must be positive and finite".into(),
        });
    }
    if s == 0.0 {
        return Ok(0.0);
    }

    let r_link = link_distance;
    let half_alpha = 0.5 * alpha;
    let inner_opts = QuadratureOptions::with_rel_tol((rel_tol * 0.1).max(1e-13));
    let outer_opts = QuadratureOptions::with_rel_tol(rel_tol);

    // Inner quadrature failures cannot cross the real-valued integrand
    // signature, so they are parked here and re-raised afterwards.
    let inner_failure: std::cell::RefCell<Option<QuadratureError>> = std::cell::RefCell::new(None);

    let radial = |v: f64| -> f64 {
        if v <= 0.0 || v >= 1.0 {
            return 0.0;
        }
        let r = r_link * (1.0 - v * v) / (v * v);
        if !r.is_finite() {
            return 0.0;
        }
        let a_term = s * r.powf(-alpha);
        // J(r) = ∫₀^{2π} dφ / (1 + d^α/s) with d the distance from the origin
        // to the partner node; symmetric about φ = π.
        let angular = integrate_finite(
            |phi: f64| {
                let d2 = r * r + r_link * r_link + 2.0 * r * r_link * phi.cos();
                if d2 <= 0.0 {
                    return 1.0;
                }
                1.0 / (1.0 + d2.powf(half_alpha) / s)
            },
            0.0,
            PI,
            &inner_opts,
        );
        let j = match angular {
            Ok(res) => 2.0 * res.value,
            Err(e) => {
                *inner_failure.borrow_mut() = Some(e);
                return f64::NAN;
            }
        };
        let bracket = 2.0 * PI / (1.0 + a_term.recip()) + j / (1.0 + a_term);
        // Jacobian of r = R(1−v²)/v²: dr = −2R/v³ dv.
        bracket * r * 2.0 * r_link / (v * v * v)
    };

    match integrate_finite(radial, 0.0, 1.0, &outer_opts) {
        Ok(res) => Ok(res.value),
        Err(outer_err) => Err(inner_failure.take().unwrap_or(outer_err).into()),
    }
}

/// Success-probability penalty from residual self-interference:
/// κ = exp(−θ·R^α·β/K) ∈ (0, 1], equal to 1 iff β = 0.
pub fn kappa(cfg: &NetworkConfig, si: &SelfInterferenceModel) -> f64 {
    (-cfg.normalized_threshold() * si.beta / si.k).exp()
}

/// Success probability of the typical link given it transmits half-duplex:
/// exp(−λp₁H)·exp(−λp₂F).
pub fn ps_hd(cfg: &NetworkConfig, mix: &DuplexMix) -> Result<f64, ModelError> {
    let s = cfg.normalized_threshold();
    let h = spectral_h(s, cfg.alpha)?;
    let f = if mix.p2 > 0.0 {
        pair_f(s, cfg.alpha, cfg.link_distance, DEFAULT_PAIR_REL_TOL)?
    } else {
        0.0
    };
    Ok((-cfg.lambda * (mix.p1 * h + mix.p2 * f)).exp())
}

/// Success probability given the typical link transmits full-duplex:
/// κ·ps_hd, always ≤ ps_hd with equality iff β = 0.
pub fn ps_fd(
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    si: &SelfInterferenceModel,
) -> Result<f64, ModelError> {
    Ok(kappa(cfg, si) * ps_hd(cfg, mix)?)
}

/// Unconditional success probability p₁·ps_hd + p₂·ps_fd (a silent link never
/// succeeds), algebraically (p₁+κp₂)·e^{−λp₁H}·e^{−λp₂F}.
pub fn ps_unconditional(
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    si: &SelfInterferenceModel,
) -> Result<f64, ModelError> {
    let hd = ps_hd(cfg, mix)?;
    Ok(mix.p1 * hd + mix.p2 * kappa(cfg, si) * hd)
}

/// Closed-form lower/upper bounds on the chosen success probability:
/// exp(−λ(p₁+2p₂)H) ≤ p_s^HD ≤ exp(−λ(p₁+p₂(1+δ))H), with the FD variant
/// scaled by κ and the unconditional one by (p₁+κp₂). No quadrature is
/// involved unless the exact value is requested too.
pub fn ps_bounds(
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    si: &SelfInterferenceModel,
    which: LinkClass,
    include_exact: bool,
) -> Result<SuccessBounds, ModelError> {
    let s = cfg.normalized_threshold();
    let h = spectral_h(s, cfg.alpha)?;
    let delta = cfg.delta();
    let lower_hd = (-cfg.lambda * (mix.p1 + 2.0 * mix.p2) * h).exp();
    let upper_hd = (-cfg.lambda * (mix.p1 + mix.p2 * (1.0 + delta)) * h).exp();
    let scale = match which {
        LinkClass::Hd => 1.0,
        LinkClass::Fd => kappa(cfg, si),
        LinkClass::Unconditional => mix.p1 + kappa(cfg, si) * mix.p2,
    };
    let exact = if include_exact {
        Some(match which {
            LinkClass::Hd => ps_hd(cfg, mix)?,
            LinkClass::Fd => ps_fd(cfg, mix, si)?,
            LinkClass::Unconditional => ps_unconditional(cfg, mix, si)?,
        })
    } else {
        None
    };
    Ok(SuccessBounds {
        lower: scale * lower_hd,
        exact,
        upper: scale * upper_hd,
    })
}

/// Closed-form horizontal gap between the success-probability bound curves:
/// G = ((p₁+2p₂)/(p₁+p₂(1+δ)))^{1/δ}. The gap is a constant θ-axis ratio —
/// the two bounds are horizontal translates of each other on a dB axis.
pub fn gap_closed_form(mix: &DuplexMix, alpha: f64) -> Result<f64, ModelError> {
    if !(alpha.is_finite() && alpha > 2.0) {
        return Err(ModelError::InvalidParameter {
            name: "alpha",
            reason: "path-loss exponent must exceed 2".into(),
        });
    }
    if mix.p1 + mix.p2 <= 0.0 {
        return Err(ModelError::InvalidParameter {
            name: "duplex mix",
            reason: "horizontal gap needs at least one active link class".into(),
        });
    }
    let delta = 2.0 / alpha;
    Ok(((mix.p1 + 2.0 * mix.p2) / (mix.p1 + mix.p2 * (1.0 + delta))).powf(1.0 / delta))
}

/// Inverts a strictly decreasing success curve θ ↦ p_s(θ) at the target
/// probability `p` by bisection on ln θ. The bracket is doubled outward (up to
/// 60 times per side) until it straddles the target.
pub fn sir_inverse<C>(curve: C, p: f64, bracket: (f64, f64)) -> Result<f64, ModelError>
where
    C: Fn(f64) -> Result<f64, ModelError>,
{
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(ModelError::InvalidParameter {
            name: "p",
            reason: "target probability must lie strictly inside (0, 1)".into(),
        });
    }
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(ModelError::InvalidParameter {
            name: "bracket",
            reason: "need finite 0 < lo < hi".into(),
        });
    }
    // The curve decreases in θ, so curve(lo) must exceed p and curve(hi) must
    // fall below it; expand each side geometrically until that holds.
    let mut expansions = 0;
    while curve(lo)? <= p {
        lo *= 0.5;
        expansions += 1;
        if expansions > 60 {
            return Err(ModelError::Bracket { lo, hi, target: p });
        }
    }
    expansions = 0;
    while curve(hi)? >= p {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return Err(ModelError::Bracket { lo, hi, target: p });
        }
    }
    let mut log_lo = lo.ln();
    let mut log_hi = hi.ln();
    while log_hi - log_lo > INVERSION_LOG_TOL {
        let mid = 0.5 * (log_lo + log_hi);
        if curve(mid.exp())? > p {
            log_lo = mid;
        } else {
            log_hi = mid;
        }
    }
    Ok((0.5 * (log_lo + log_hi)).exp())
}

/// Horizontal gap between two success curves at probability `p`: the ratio of
/// the thresholds at which they cross it, θ₁(p)/θ₂(p).
pub fn gap_numeric<C1, C2>(curve1: C1, curve2: C2, p: f64) -> Result<f64, ModelError>
where
    C1: Fn(f64) -> Result<f64, ModelError>,
    C2: Fn(f64) -> Result<f64, ModelError>,
{
    let bracket = (1e-3, 1e3);
    let t1 = sir_inverse(curve1, p, bracket)?;
    let t2 = sir_inverse(curve2, p, bracket)?;
    Ok(t1 / t2)
}

/// Residual-self-interference correction entering the SIR-loss bounds:
/// γ(x) = x^{1−δ}·R^{α−2}·β·sin(πδ) / (λ·π²·δ·K). Zero iff β = 0.
fn gamma_factor(x: f64, cfg: &NetworkConfig, si: &SelfInterferenceModel) -> f64 {
    let delta = cfg.delta();
    x.powf(1.0 - delta) * cfg.link_distance.powf(cfg.alpha - 2.0) * si.beta * (PI * delta).sin()
        / (cfg.lambda * PI * PI * delta * si.k)
}

/// Bounds on the SIR loss of an FD-only network relative to an HD-only one at
/// target success probability `p`: ((1+δ+γ)^{1/δ}, (2+γ)^{1/δ}) where γ is
/// evaluated at the FD-only threshold θ_FD(p), found by numeric inversion.
/// With β = 0 the bounds are ((1+δ)^{1/δ}, 2^{1/δ}), independent of p, θ, R.
pub fn sir_loss_bounds(
    p: f64,
    cfg: &NetworkConfig,
    si: &SelfInterferenceModel,
) -> Result<(f64, f64), ModelError> {
    let fd_only = DuplexMix::fd_only();
    let curve =
        |theta: f64| -> Result<f64, ModelError> { ps_fd(&cfg.with_theta(theta)?, &fd_only, si) };
    let theta_fd = sir_inverse(curve, p, (1e-3, 1e3))?;
    let delta = cfg.delta();
    let gamma = gamma_factor(theta_fd, cfg, si);
    Ok((
        (1.0 + delta + gamma).powf(1.0 / delta),
        (2.0 + gamma).powf(1.0 / delta),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig_cfg(theta: f64) -> NetworkConfig {
        NetworkConfig::new(0.1, theta, 1.0, 4.0).unwrap()
    }

    fn even_mix() -> DuplexMix {
        DuplexMix::new(0.0, 0.5, 0.5).unwrap()
    }

    fn perfect_si() -> SelfInterferenceModel {
        SelfInterferenceModel::perfect(10f64.powf(-3.4)).unwrap()
    }

    #[test]
    fn spectral_h_closed_forms() {
        assert_eq!(spectral_h(0.0, 4.0).unwrap(), 0.0);
        assert_relative_eq!(
            spectral_h(1.0, 4.0).unwrap(),
            PI * PI / 2.0,
            max_relative = 1e-15
        );
        // s^δ scaling: 16^{1/2} = 4.
        assert_relative_eq!(
            spectral_h(16.0, 4.0).unwrap(),
            4.0 * spectral_h(1.0, 4.0).unwrap(),
            max_relative = 1e-14
        );
        assert!(spectral_h(1.0, 2.0).is_err());
        assert!(spectral_h(-1.0, 4.0).is_err());
    }

    #[test]
    fn spectral_h_strictly_increasing() {
        let mut prev = 0.0;
        for i in 1..=40 {
            let s = 10f64.powf(-2.0 + 0.2 * i as f64);
            let h = spectral_h(s, 3.0).unwrap();
            assert!(h > prev, "H must increase in s");
            prev = h;
        }
    }

    #[test]
    fn kappa_closed_forms() {
        let si0 = SelfInterferenceModel::perfect(1.0).unwrap();
        assert_eq!(kappa(&fig_cfg(1.0), &si0), 1.0);

        // θ=1, R=1, α=4, β=K gives exponent −1.
        let si = SelfInterferenceModel::new(0.5, 0.5).unwrap();
        assert_relative_eq!(
            kappa(&fig_cfg(1.0), &si),
            (-1.0f64).exp(),
            max_relative = 1e-15
        );

        // θ=1, R=10, α=4, β=10⁻⁸, K=10^{−3.4}: exponent −10^{−0.6}.
        let cfg = NetworkConfig::new(0.1, 1.0, 10.0, 4.0).unwrap();
        let si = SelfInterferenceModel::new(1e-8, 10f64.powf(-3.4)).unwrap();
        assert_relative_eq!(kappa(&cfg, &si), 0.777875616809845, max_relative = 1e-12);
    }

    #[test]
    fn ps_hd_no_interferer_limit() {
        // λ → 0: no interference, success almost surely.
        let cfg = NetworkConfig::new(1e-12, 1.0, 1.0, 4.0).unwrap();
        let ps = ps_hd(&cfg, &even_mix()).unwrap();
        assert!(ps > 0.999999, "ps = {ps}");
    }

    #[test]
    fn ps_hd_unit_exponent_construction() {
        // p2 = 0 and λp₁·H = 1 ⇒ ps_hd = e⁻¹.
        let h = spectral_h(1.0, 4.0).unwrap();
        let mix = DuplexMix::hd_only();
        let cfg = NetworkConfig::new(1.0 / h, 1.0, 1.0, 4.0).unwrap();
        assert_relative_eq!(
            ps_hd(&cfg, &mix).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn ps_fd_equals_ps_hd_iff_perfect_cancellation() {
        let cfg = fig_cfg(1.0);
        let mix = even_mix();
        let hd = ps_hd(&cfg, &mix).unwrap();
        assert_eq!(ps_fd(&cfg, &mix, &perfect_si()).unwrap(), hd);
        let si = SelfInterferenceModel::new(1e-4, 10f64.powf(-3.4)).unwrap();
        assert!(ps_fd(&cfg, &mix, &si).unwrap() < hd);
    }

    #[test]
    fn ps_unconditional_degenerate_mixes() {
        let cfg = fig_cfg(1.0);
        let si = perfect_si();
        let hd_only = DuplexMix::hd_only();
        assert_relative_eq!(
            ps_unconditional(&cfg, &hd_only, &si).unwrap(),
            ps_hd(&cfg, &hd_only).unwrap(),
            max_relative = 1e-15
        );
        let silent = DuplexMix::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(ps_unconditional(&cfg, &silent, &si).unwrap(), 0.0);
    }

    #[test]
    fn ps_unconditional_product_form_identity() {
        // p₁·ps_hd + p₂·ps_fd must equal (p₁+κp₂)·e^{−λp₁H−λp₂F}.
        for &theta in &[0.1, 1.0, 10.0] {
            let cfg = fig_cfg(theta);
            let mix = DuplexMix::new(0.2, 0.3, 0.5).unwrap();
            let si = SelfInterferenceModel::new(1e-5, 10f64.powf(-3.4)).unwrap();
            let direct = ps_unconditional(&cfg, &mix, &si).unwrap();
            let s = cfg.normalized_threshold();
            let h = spectral_h(s, cfg.alpha).unwrap();
            let f = pair_f(s, cfg.alpha, 1.0, DEFAULT_PAIR_REL_TOL).unwrap();
            let product = (mix.p1 + kappa(&cfg, &si) * mix.p2)
                * (-cfg.lambda * (mix.p1 * h + mix.p2 * f)).exp();
            assert_relative_eq!(direct, product, max_relative = 1e-12);
        }
    }

    #[test]
    fn bounds_collapse_without_fd_links() {
        let cfg = fig_cfg(1.0);
        let b = ps_bounds(
            &cfg,
            &DuplexMix::hd_only(),
            &perfect_si(),
            LinkClass::Hd,
            true,
        )
        .unwrap();
        assert_relative_eq!(b.lower, b.upper, max_relative = 1e-15);
        assert_relative_eq!(b.lower, b.exact.unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn upper_bound_matches_equal_distance_approximation() {
        // The upper bound's FD factor exp(−λp₂(1+δ)H) is exactly the
        // approximation obtained by placing both pair transmitters at equal
        // distance (Erlang-2 fading argument).
        let cfg = fig_cfg(2.0);
        let mix = even_mix();
        let b = ps_bounds(&cfg, &mix, &perfect_si(), LinkClass::Hd, false).unwrap();
        let s = cfg.normalized_threshold();
        let h = spectral_h(s, cfg.alpha).unwrap();
        let expected = (-cfg.lambda * (mix.p1 + mix.p2 * 1.5) * h).exp();
        assert_relative_eq!(b.upper, expected, max_relative = 1e-15);
    }

    #[test]
    fn gap_closed_form_values() {
        // p1 = p2 = 0.5, α = 4: ((0.5+1)/(0.5+0.75))² = (6/5)² = 36/25.
        let g = gap_closed_form(&even_mix(), 4.0).unwrap();
        assert_relative_eq!(g, 36.0 / 25.0, max_relative = 1e-15);
        // Without FD links the bounds coincide.
        assert_relative_eq!(
            gap_closed_form(&DuplexMix::hd_only(), 4.0).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        // α ↓ 2 pushes the gap to 1 for any mix.
        let g = gap_closed_form(&even_mix(), 2.0 + 1e-9).unwrap();
        assert_relative_eq!(g, 1.0, epsilon = 1e-6);
        // No active links is a domain error.
        let silent = DuplexMix::new(1.0, 0.0, 0.0).unwrap();
        assert!(gap_closed_form(&silent, 4.0).is_err());
    }

    #[test]
    fn sir_inverse_exponential_curve() {
        // exp(−c·θ^δ) crosses e^{−c} exactly at θ = 1.
        let c: f64 = 0.7;
        let curve = |theta: f64| Ok((-c * theta.powf(0.5)).exp());
        let t = sir_inverse(curve, (-c).exp(), (0.1, 10.0)).unwrap();
        assert_relative_eq!(t, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn sir_inverse_matches_closed_form_hd_inversion() {
        // HD-only: p_s = exp(−λH(θR^α, α)) inverts to
        // θ = (ln(1/p)·sin(πδ)/(λπ²δR²))^{1/δ}.
        let cfg = fig_cfg(1.0);
        let mix = DuplexMix::hd_only();
        let p = 0.5;
        let curve = |theta: f64| ps_hd(&cfg.with_theta(theta).unwrap(), &mix);
        let numeric = sir_inverse(curve, p, (1e-3, 1e3)).unwrap();
        let delta = cfg.delta();
        let closed = ((1.0 / p).ln() * (PI * delta).sin()
            / (cfg.lambda * PI * PI * delta * cfg.link_distance.powi(2)))
        .powf(1.0 / delta);
        assert_relative_eq!(numeric, closed, max_relative = 1e-8);
    }

    #[test]
    fn sir_inverse_round_trip() {
        let cfg = fig_cfg(1.0);
        let mix = DuplexMix::hd_only();
        for &p in &[0.2, 0.5, 0.9] {
            let curve = |theta: f64| ps_hd(&cfg.with_theta(theta).unwrap(), &mix);
            let t = sir_inverse(curve, p, (1e-3, 1e3)).unwrap();
            assert_relative_eq!(curve(t).unwrap(), p, epsilon = 1e-9);
        }
    }

    #[test]
    fn sir_inverse_rejects_bad_targets() {
        let curve = |theta: f64| Ok((-theta).exp());
        assert!(sir_inverse(curve, 1.5, (0.1, 10.0)).is_err());
        let curve2 = |theta: f64| Ok((-theta).exp());
        assert!(sir_inverse(curve2, 0.5, (-1.0, 10.0)).is_err());
    }

    #[test]
    fn gap_numeric_identical_curves_is_one() {
        let cfg = fig_cfg(1.0);
        let mix = DuplexMix::hd_only();
        let c1 = |theta: f64| ps_hd(&cfg.with_theta(theta).unwrap(), &mix);
        let c2 = |theta: f64| ps_hd(&cfg.with_theta(theta).unwrap(), &mix);
        let g = gap_numeric(c1, c2, 0.5).unwrap();
        assert_relative_eq!(g, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn gamma_factor_scalings() {
        let cfg = fig_cfg(1.0);
        let si = SelfInterferenceModel::new(1e-4, 1e-3).unwrap();
        // Vanishes under perfect cancellation.
        assert_eq!(gamma_factor(2.0, &cfg, &perfect_si()), 0.0);
        // Power law in x: γ(2x)/γ(x) = 2^{1−δ}.
        let ratio = gamma_factor(2.0, &cfg, &si) / gamma_factor(1.0, &cfg, &si);
        assert_relative_eq!(ratio, 2f64.powf(1.0 - cfg.delta()), max_relative = 1e-12);
        // Linear in β, inverse in λ and K.
        let si2 = SelfInterferenceModel::new(2e-4, 1e-3).unwrap();
        assert_relative_eq!(
            gamma_factor(1.0, &cfg, &si2),
            2.0 * gamma_factor(1.0, &cfg, &si),
            max_relative = 1e-12
        );
        let cfg2 = NetworkConfig::new(0.2, 1.0, 1.0, 4.0).unwrap();
        assert_relative_eq!(
            gamma_factor(1.0, &cfg2, &si),
            0.5 * gamma_factor(1.0, &cfg, &si),
            max_relative = 1e-12
        );
        // R^{α−2} growth.
        let cfg3 = NetworkConfig::new(0.1, 1.0, 2.0, 4.0).unwrap();
        assert_relative_eq!(
            gamma_factor(1.0, &cfg3, &si),
            4.0 * gamma_factor(1.0, &cfg, &si),
            max_relative = 1e-12
        );
    }

    #[test]
    fn sir_loss_bounds_perfect_cancellation() {
        // β = 0, α = 4: exactly ((1+δ)^{1/δ}, 2^{1/δ}) = (2.25, 4).
        let (lo, hi) = sir_loss_bounds(0.5, &fig_cfg(1.0), &perfect_si()).unwrap();
        assert_relative_eq!(lo, 2.25, max_relative = 1e-12);
        assert_relative_eq!(hi, 4.0, max_relative = 1e-12);
        // Independent of p, R for β = 0.
        let cfg_r = NetworkConfig::new(0.1, 1.0, 3.0, 4.0).unwrap();
        for &p in &[0.3, 0.7] {
            let (l2, h2) = sir_loss_bounds(p, &cfg_r, &perfect_si()).unwrap();
            assert_relative_eq!(l2, 2.25, max_relative = 1e-12);
            assert_relative_eq!(h2, 4.0, max_relative = 1e-12);
        }
    }
}
