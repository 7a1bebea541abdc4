//! Monte Carlo estimation of success probabilities and area throughput for
//! the marked-pair network: Poisson networks sampled in a certified finite
//! window, per-trial counter-based RNG substreams for schedule-independent
//! reproducibility, and Wilson-score confidence intervals on the estimates.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, Poisson};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::model::{DuplexMix, LinkClass, ModelError, NetworkConfig, SelfInterferenceModel};
use crate::throughput::LinkDensities;

/// Transmission state of a sampled link pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkState {
    Silent,
    HalfDuplex,
    FullDuplex,
}

/// One sampled link: primary node, its mark (the other pair end, at distance
/// R), and the pair's transmission state. In half-duplex only the primary
/// node transmits; in full-duplex both do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkedLink {
    pub position: [f64; 2],
    pub mark: [f64; 2],
    pub state: LinkState,
}

/// Duplex mode of the typical link whose SIR is being realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Duplex {
    Hd,
    Fd,
}

/// Monte Carlo run parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Certified bound on the neglected far-field interference (normalized by
    /// θR^α); drives [`window_radius`].
    pub truncation_epsilon: f64,
    /// Two-sided confidence level of the reported interval.
    pub confidence_level: f64,
}

impl SimConfig {
    /// Run parameters with the default window certification (10⁻³) and
    /// confidence level (0.99).
    pub fn new(trials: u64, seed: u64) -> Result<Self, ModelError> {
        let cfg = Self {
            trials,
            seed,
            truncation_epsilon: 1e-3,
            confidence_level: 0.99,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replaces the far-field truncation bound.
    pub fn with_truncation_epsilon(mut self, epsilon: f64) -> Result<Self, ModelError> {
        self.truncation_epsilon = epsilon;
        self.validate()?;
        Ok(self)
    }

    /// Replaces the confidence level.
    pub fn with_confidence_level(mut self, confidence: f64) -> Result<Self, ModelError> {
        self.confidence_level = confidence;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.trials == 0 {
            return Err(ModelError::InvalidParameter {
                name: "trials",
                reason: "at least one trial is required".into(),
            });
        }
        if !(self.truncation_epsilon.is_finite() && self.truncation_epsilon > 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "truncation_epsilon",
                reason: "must be positive and finite".into(),
            });
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(ModelError::InvalidParameter {
                name: "confidence_level",
                reason: "must lie strictly inside (0, 1)".into(),
            });
        }
        Ok(())
    }
}

/// Point estimate with its standard error and two-sided confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
}

/// Diagnostic knobs for [`estimate_ps_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct EstimateOptions {
    /// Overrides the certified window radius (for convergence studies).
    pub window_radius: Option<f64>,
    /// Silences the mark node of full-duplex interferer pairs, reducing the
    /// interference field to an independently thinned point process.
    pub ignore_mark_interference: bool,
}

const PHI: u64 = 0x9E37_79B9_7F4A_7C15;

/// Finalizer with full avalanche, used to derive independent substreams.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based per-trial generator: the same (seed, stream, trial) triple
/// yields the same stream under any parallel schedule.
fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mut state = mix64(seed ^ mix64(stream.wrapping_mul(PHI) ^ mix64(trial)));
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(PHI);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Radius beyond which the mean interference, normalized by θR^α, is
/// certifiably below `epsilon`: solves 2πλ(p₁+2p₂)·θR^α·r^{2−α}/(α−2) = ε.
/// Returns 0 when nothing transmits or the threshold is negligible.
pub fn window_radius(
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    epsilon: f64,
) -> Result<f64, ModelError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "epsilon",
            reason: "truncation bound must be positive and finite".into(),
        });
    }
    let weight = cfg.lambda * (mix.p1 + 2.0 * mix.p2) * cfg.normalized_threshold();
    if weight == 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 * PI * weight / ((cfg.alpha - 2.0) * epsilon)).powf(1.0 / (cfg.alpha - 2.0)))
}

fn uniform_in_disk(radius: f64, rng: &mut impl Rng) -> [f64; 2] {
    loop {
        let x: f64 = rng.gen::<f64>() * 2.0 - 1.0;
        let y: f64 = rng.gen::<f64>() * 2.0 - 1.0;
        if x * x + y * y <= 1.0 {
            return [x * radius, y * radius];
        }
    }
}

fn random_unit_vector(rng: &mut impl Rng) -> [f64; 2] {
    loop {
        let x: f64 = rng.gen::<f64>() * 2.0 - 1.0;
        let y: f64 = rng.gen::<f64>() * 2.0 - 1.0;
        let n2 = x * x + y * y;
        if n2 <= 1.0 && n2 > 1e-12 {
            let inv = 1.0 / n2.sqrt();
            return [x * inv, y * inv];
        }
    }
}

/// Draws a marked Poisson network on a disk of the given radius: Poisson
/// count, uniform positions, marks at distance R under uniform angles, and
/// independent states with probabilities (p₀, p₁, p₂).
pub fn sample_network(
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    radius: f64,
    rng: &mut impl Rng,
) -> Result<Vec<MarkedLink>, ModelError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(ModelError::InvalidParameter {
            name: "radius",
            reason: "sampling disk radius must be positive and finite".into(),
        });
    }
    let mut network = Vec::new();
    sample_network_core(&mut network, cfg, mix, radius, rng);
    Ok(network)
}

/// Allocation-free sampling core; `radius` must be positive and finite.
fn sample_network_core(
    buf: &mut Vec<MarkedLink>,
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    radius: f64,
    rng: &mut impl Rng,
) {
    buf.clear();
    let mean = cfg.lambda * PI * radius * radius;
    let count = rng.sample(Poisson::new(mean).expect("positive finite Poisson mean")) as u64;
    buf.reserve(count as usize);
    for _ in 0..count {
        let position = uniform_in_disk(radius, rng);
        let u: f64 = rng.gen();
        let state = if u < mix.p0 {
            LinkState::Silent
        } else if u < mix.p0 + mix.p1 {
            LinkState::HalfDuplex
        } else {
            LinkState::FullDuplex
        };
        let dir = random_unit_vector(rng);
        let mark = [
            position[0] + cfg.link_distance * dir[0],
            position[1] + cfg.link_distance * dir[1],
        ];
        buf.push(MarkedLink {
            position,
            mark,
            state,
        });
    }
}

#[inline]
fn pathloss(point: [f64; 2], alpha: f64) -> f64 {
    let d2 = point[0] * point[0] + point[1] * point[1];
    if alpha == 4.0 {
        1.0 / (d2 * d2)
    } else {
        d2.powf(-0.5 * alpha)
    }
}

/// Realizes one SIR draw at the typical receiver (origin): fresh unit-mean
/// exponential fading on the desired link and on every transmitting node;
/// full-duplex interferer pairs contribute both ends; mode FD adds the
/// residual self-interference β/K to the denominator. An interference-free
/// denominator yields the +∞ sentinel.
pub fn realize_sir(
    mode: Duplex,
    network: &[MarkedLink],
    cfg: &NetworkConfig,
    si: &SelfInterferenceModel,
    rng: &mut impl Rng,
) -> f64 {
    realize_sir_filtered(mode, network, cfg, si, false, rng)
}

fn realize_sir_filtered(
    mode: Duplex,
    network: &[MarkedLink],
    cfg: &NetworkConfig,
    si: &SelfInterferenceModel,
    ignore_marks: bool,
    rng: &mut impl Rng,
) -> f64 {
    let alpha = cfg.alpha;
    let mut interference = 0.0;
    for link in network {
        match link.state {
            LinkState::Silent => {}
            LinkState::HalfDuplex => {
                let fade: f64 = rng.sample(Exp1);
                interference += fade * pathloss(link.position, alpha);
            }
            LinkState::FullDuplex => {
                let fade: f64 = rng.sample(Exp1);
                interference += fade * pathloss(link.position, alpha);
                if !ignore_marks {
                    let fade: f64 = rng.sample(Exp1);
                    interference += fade * pathloss(link.mark, alpha);
                }
            }
        }
    }
    let h: f64 = rng.sample(Exp1);
    let signal = h * cfg.link_distance.powf(-alpha);
    let denominator = interference
        + match mode {
            Duplex::Fd => si.beta / si.k,
            Duplex::Hd => 0.0,
        };
    if denominator == 0.0 {
        return f64::INFINITY;
    }
    signal / denominator
}

/// Wilson-score interval around a Bernoulli proportion.
fn wilson(successes: u64, trials: u64, confidence: f64) -> EstimateWithCI {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = Normal::new(0.0, 1.0)
        .unwrap()
        .inverse_cdf(0.5 * (1.0 + confidence));
    let z2 = z * z;
    let shrink = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / shrink;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / shrink;
    EstimateWithCI {
        estimate: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
        trials,
    }
}

fn scaled(e: EstimateWithCI, factor: f64) -> EstimateWithCI {
    EstimateWithCI {
        estimate: factor * e.estimate,
        std_error: factor * e.std_error,
        ci_low: factor * e.ci_low,
        ci_high: factor * e.ci_high,
        trials: e.trials,
    }
}

/// Estimates the success probability of the typical link by Monte Carlo:
/// fresh network and fading per trial, strict SIR > θ success, Wilson CI.
///
/// Mode HD/FD conditions the typical link on that state; UNCONDITIONAL draws
/// the state from (p₁, p₂) renormalized over active states and weights the
/// conditional estimate by p₁+p₂ (a silent link never succeeds).
pub fn estimate_ps(
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    si: &SelfInterferenceModel,
    which: LinkClass,
    sim: &SimConfig,
) -> Result<EstimateWithCI, ModelError> {
    estimate_ps_with(cfg, mix, si, which, sim, &EstimateOptions::default())
}

/// [`estimate_ps`] with diagnostic overrides.
pub fn estimate_ps_with(
    cfg: &NetworkConfig,
    mix: &DuplexMix,
    si: &SelfInterferenceModel,
    which: LinkClass,
    sim: &SimConfig,
    options: &EstimateOptions,
) -> Result<EstimateWithCI, ModelError> {
    sim.validate()?;
    let window = match options.window_radius {
        Some(w) => {
            if !(w.is_finite() && w > 0.0) {
                return Err(ModelError::InvalidParameter {
                    name: "window_radius",
                    reason: "override must be positive and finite".into(),
                });
            }
            w
        }
        None => window_radius(cfg, mix, sim.truncation_epsilon)?,
    };
    // Sampling pair centers out to window + R guarantees every node within
    // the certified window is represented.
    let disk = window + cfg.link_distance;

    let active = mix.p1 + mix.p2;
    if which == LinkClass::Unconditional && active == 0.0 {
        return Ok(EstimateWithCI {
            estimate: 0.0,
            std_error: 0.0,
            ci_low: 0.0,
            ci_high: 0.0,
            trials: sim.trials,
        });
    }

    let theta = cfg.theta;
    let hd_share = if active > 0.0 { mix.p1 / active } else { 0.0 };
    let ignore_marks = options.ignore_mark_interference;
    let successes: u64 = (0..sim.trials)
        .into_par_iter()
        .map_init(Vec::new, |buf: &mut Vec<MarkedLink>, trial| -> u64 {
            let mut rng = trial_rng(sim.seed, 0, trial);
            let duplex = match which {
                LinkClass::Hd => Duplex::Hd,
                LinkClass::Fd => Duplex::Fd,
                LinkClass::Unconditional => {
                    if rng.gen::<f64>() < hd_share {
                        Duplex::Hd
                    } else {
                        Duplex::Fd
                    }
                }
            };
            sample_network_core(buf, cfg, mix, disk, &mut rng);
            let sir = realize_sir_filtered(duplex, buf, cfg, si, ignore_marks, &mut rng);
            (sir > theta) as u64
        })
        .sum();

    let conditional = wilson(successes, sim.trials, sim.confidence_level);
    Ok(match which {
        LinkClass::Unconditional => scaled(conditional, active),
        _ => conditional,
    })
}

/// Estimates area throughput λ₁·p̂ₛ^HD·ln(1+θ) + 2λ₂·p̂ₛ^FD·ln(1+θ) of a
/// deployment with the given densities. Each conditional success probability
/// is estimated in an environment whose total density and duplex mix match
/// the deployment, on an independent sub-seed; standard errors add in
/// quadrature and interval endpoints add conservatively.
pub fn estimate_throughput(
    densities: &LinkDensities,
    cfg: &NetworkConfig,
    si: &SelfInterferenceModel,
    sim: &SimConfig,
) -> Result<EstimateWithCI, ModelError> {
    sim.validate()?;
    let densities = LinkDensities::new(densities.lambda1, densities.lambda2)?;
    let total = densities.lambda1 + densities.lambda2;
    if total == 0.0 {
        return Ok(EstimateWithCI {
            estimate: 0.0,
            std_error: 0.0,
            ci_low: 0.0,
            ci_high: 0.0,
            trials: sim.trials,
        });
    }
    let environment = NetworkConfig::new(total, cfg.theta, cfg.link_distance, cfg.alpha)?;
    let mix = DuplexMix::from_active(densities.lambda1 / total, densities.lambda2 / total)?;
    let rate = (1.0 + cfg.theta).ln();

    let mut estimate = 0.0;
    let mut variance = 0.0;
    let mut ci_low = 0.0;
    let mut ci_high = 0.0;
    for (stream, weight, which) in [
        (1u64, densities.lambda1 * rate, LinkClass::Hd),
        (2u64, 2.0 * densities.lambda2 * rate, LinkClass::Fd),
    ] {
        if weight == 0.0 {
            continue;
        }
        let sub = SimConfig {
            seed: mix64(sim.seed ^ stream),
            ..*sim
        };
        let e = estimate_ps(&environment, &mix, si, which, &sub)?;
        estimate += weight * e.estimate;
        variance += (weight * e.std_error) * (weight * e.std_error);
        ci_low += weight * e.ci_low;
        ci_high += weight * e.ci_high;
    }
    Ok(EstimateWithCI {
        estimate,
        std_error: variance.sqrt(),
        ci_low,
        ci_high,
        trials: sim.trials,
    })
}
