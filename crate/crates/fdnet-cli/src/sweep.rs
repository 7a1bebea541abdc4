//! Parameter sweeps: analytic columns at every grid point, Monte Carlo
//! columns when simulation settings are present. Points are evaluated in
//! parallel; output rows stay in grid order.

use crate::config::{at_grid_point, Experiment};
use crate::error::CliError;
use crate::table::{num, row, write_csv};
use fdnet::analytic::{kappa, ps_bounds, ps_fd, ps_hd, ps_unconditional};
use fdnet::model::LinkClass;
use fdnet::simulator::estimate_ps;
use fdnet::throughput::throughput_gain;
use rayon::prelude::*;
use std::path::PathBuf;

pub struct SweepRow {
    pub value: f64,
    pub ps_hd: f64,
    pub ps_fd: f64,
    pub ps_unc: f64,
    pub ps_unc_lower: f64,
    pub ps_unc_upper: f64,
    pub tg: f64,
    pub tg_lower: f64,
    pub tg_upper: f64,
    pub mc: Option<McColumns>,
}

pub struct McColumns {
    pub estimate: f64,
    pub std_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// CSV header for a sweep over `variable`, with or without MC columns.
pub fn header(variable: &str, with_mc: bool) -> String {
    let mut h =
        format!("{variable},ps_hd,ps_fd,ps_unc,ps_unc_lower,ps_unc_upper,tg,tg_lower,tg_upper");
    if with_mc {
        h.push_str(",mc_ps_unc,mc_std_error,mc_ci_low,mc_ci_high");
    }
    h
}

/// Evaluates one grid point: all analytic columns, plus a Monte Carlo
/// estimate of the unconditional success probability when configured.
pub fn compute_row(exp: &Experiment, value: f64) -> Result<SweepRow, CliError> {
    let (cfg, mix, si) = at_grid_point(exp, value)?;
    let bounds = ps_bounds(&cfg, &mix, &si, LinkClass::Unconditional, false)?;
    let k = kappa(&cfg, &si);
    let mc = match &exp.sim {
        None => None,
        Some(sim) => {
            let est = estimate_ps(&cfg, &mix, &si, LinkClass::Unconditional, sim)?;
            Some(McColumns {
                estimate: est.estimate,
                std_error: est.std_error,
                ci_low: est.ci_low,
                ci_high: est.ci_high,
            })
        }
    };
    Ok(SweepRow {
        value,
        ps_hd: ps_hd(&cfg, &mix)?,
        ps_fd: ps_fd(&cfg, &mix, &si)?,
        ps_unc: ps_unconditional(&cfg, &mix, &si)?,
        ps_unc_lower: bounds.lower,
        ps_unc_upper: bounds.upper,
        tg: throughput_gain(&cfg, &si)?,
        tg_lower: k,
        tg_upper: 2.0 * k / (1.0 + cfg.delta()),
        mc,
    })
}

pub fn compute_rows(exp: &Experiment) -> Result<Vec<SweepRow>, CliError> {
    exp.grid.par_iter().map(|&v| compute_row(exp, v)).collect()
}

fn render(r: &SweepRow) -> String {
    let mut cells = vec![
        num(r.value),
        num(r.ps_hd),
        num(r.ps_fd),
        num(r.ps_unc),
        num(r.ps_unc_lower),
        num(r.ps_unc_upper),
        num(r.tg),
        num(r.tg_lower),
        num(r.tg_upper),
    ];
    if let Some(mc) = &r.mc {
        cells.extend([
            num(mc.estimate),
            num(mc.std_error),
            num(mc.ci_low),
            num(mc.ci_high),
        ]);
    }
    row(&cells)
}

/// Runs the sweep and writes its CSV; returns the output path.
pub fn run_sweep(exp: &Experiment) -> Result<PathBuf, CliError> {
    let rows = compute_rows(exp)?;
    let rendered: Vec<String> = rows.iter().map(render).collect();
    write_csv(
        &exp.output,
        &header(exp.variable.name(), exp.sim.is_some()),
        &rendered,
    )?;
    Ok(exp.output.clone())
}
