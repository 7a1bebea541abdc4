//! Analytic-vs-Monte-Carlo validation: per-grid-point confidence-interval
//! containment, a binomial miss budget, a machine-readable CSV, and a
//! deterministic human summary.

use crate::config::{at_grid_point, Experiment};
use crate::error::CliError;
use crate::table::{num, row, write_csv};
use fdnet::analytic::{pair_f, ps_unconditional, DEFAULT_PAIR_REL_TOL};
use fdnet::model::LinkClass;
use fdnet::simulator::{estimate_ps, SimConfig};
use rayon::prelude::*;
use statrs::distribution::{Binomial, DiscreteCDF};

pub struct ValidationRow {
    pub value: f64,
    pub analytic: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub pass: bool,
}

pub struct ValidationOutcome {
    pub rows: Vec<ValidationRow>,
    pub misses: usize,
    pub budget: usize,
    pub passed: bool,
    pub report: String,
}

/// Largest miss count still consistent with the confidence level: the
/// smallest b with P(Binomial(n, 1−confidence) > b) ≤ 1%.
pub fn miss_budget(points: usize, confidence: f64) -> usize {
    let miss_p = 1.0 - confidence;
    let binom = Binomial::new(miss_p, points as u64).expect("valid binomial");
    // Tolerance keeps boundary cases (tail exactly 1%) inclusive despite
    // floating-point rounding in the CDF.
    (0..=points)
        .find(|&b| 1.0 - binom.cdf(b as u64) <= 0.01 + 1e-9)
        .unwrap_or(points)
}

fn check_point(
    exp: &Experiment,
    sim: &SimConfig,
    value: f64,
    inflate_pair_integral: bool,
) -> Result<ValidationRow, CliError> {
    let (cfg, mix, si) = at_grid_point(exp, value)?;
    let mut analytic = ps_unconditional(&cfg, &mix, &si)?;
    if inflate_pair_integral {
        // Debug negative control: report the analytic value as if the pair
        // interference integral were 10% larger.
        let f = pair_f(
            cfg.normalized_threshold(),
            cfg.alpha,
            cfg.link_distance,
            DEFAULT_PAIR_REL_TOL,
        )?;
        analytic *= (-0.1 * cfg.lambda * mix.p2 * f).exp();
    }
    let est = estimate_ps(&cfg, &mix, &si, LinkClass::Unconditional, sim)?;
    Ok(ValidationRow {
        value,
        analytic,
        estimate: est.estimate,
        std_error: est.std_error,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
        pass: est.ci_low <= analytic && analytic <= est.ci_high,
    })
}

pub fn run_validate(
    exp: &Experiment,
    inflate_pair_integral: bool,
) -> Result<ValidationOutcome, CliError> {
    let sim = exp.sim.as_ref().ok_or_else(|| {
        CliError::Config("validate requires a [sim] section in the spec".to_string())
    })?;
    let rows: Vec<ValidationRow> = exp
        .grid
        .par_iter()
        .map(|&v| check_point(exp, sim, v, inflate_pair_integral))
        .collect::<Result<_, _>>()?;

    let misses = rows.iter().filter(|r| !r.pass).count();
    let budget = miss_budget(rows.len(), sim.confidence_level);
    let passed = misses <= budget;

    let mut report = String::new();
    report.push_str(&format!(
        "validation: {} points, {} outside the {:.0}% confidence interval (budget {})\n",
        rows.len(),
        misses,
        100.0 * sim.confidence_level,
        budget
    ));
    if sim.trials < 1000 {
        report.push_str(&format!(
            "warning: only {} trials per point; intervals are wide and coverage \
             is unreliable below 1000 trials\n",
            sim.trials
        ));
    }
    for r in rows.iter().filter(|r| !r.pass) {
        report.push_str(&format!(
            "miss at {} = {}: analytic {} outside [{}, {}]\n",
            exp.variable.name(),
            num(r.value),
            num(r.analytic),
            num(r.ci_low),
            num(r.ci_high),
        ));
    }
    report.push_str(if passed {
        "result: PASS\n"
    } else {
        "result: FAIL\n"
    });

    Ok(ValidationOutcome {
        rows,
        misses,
        budget,
        passed,
        report,
    })
}

/// Writes the per-point CSV for a validation run; returns nothing beyond
/// errors because the caller already holds the outcome.
pub fn write_report_csv(exp: &Experiment, outcome: &ValidationOutcome) -> Result<(), CliError> {
    let rendered: Vec<String> = outcome
        .rows
        .iter()
        .map(|r| {
            row(&[
                num(r.value),
                num(r.analytic),
                num(r.estimate),
                num(r.std_error),
                num(r.ci_low),
                num(r.ci_high),
                if r.pass {
                    "1".to_string()
                } else {
                    "0".to_string()
                },
            ])
        })
        .collect();
    write_csv(
        &exp.output,
        &format!(
            "{},analytic_ps_unc,mc_ps_unc,mc_std_error,mc_ci_low,mc_ci_high,pass",
            exp.variable.name()
        ),
        &rendered,
    )
}
