//! The five shipped figure datasets as CSV files with parameters baked in.
//! Grids default to 61 points per range; all curves here are analytic, so
//! the outputs are reproducible unconditionally.

use crate::config::{db_to_linear, linear_to_db, make_grid, K_PRESET_DB};
use crate::error::CliError;
use crate::table::{num, row, write_csv};
use fdnet::analytic::{kappa, ps_bounds, ps_fd, ps_hd};
use fdnet::model::{DuplexMix, LinkClass, NetworkConfig, SelfInterferenceModel};
use fdnet::throughput::{critical_beta, throughput_gain};
use std::path::{Path, PathBuf};

const GRID_POINTS: usize = 61;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

pub fn run_figure(id: FigureId, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    match id {
        FigureId::Fig1 => fig1(out_dir),
        FigureId::Fig2 => fig2(out_dir),
        FigureId::Fig3 => fig3(out_dir),
        FigureId::Fig4 => fig4(out_dir),
        FigureId::Fig5 => fig5(out_dir),
    }
}

fn k_preset() -> f64 {
    db_to_linear(K_PRESET_DB)
}

fn theta_db_grid(lo: f64, hi: f64) -> Vec<f64> {
    make_grid(lo, hi, GRID_POINTS, false)
}

/// Mixed network, even split, perfect cancellation: exact success
/// probability of the typical active link with its two closed-form bounds.
fn fig1(out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let base = NetworkConfig::new(0.1, 1.0, 1.0, 4.0)?;
    let mix = DuplexMix::new(0.0, 0.5, 0.5)?;
    let si = SelfInterferenceModel::perfect(k_preset())?;
    let mut rows = Vec::new();
    for theta_db in theta_db_grid(-10.0, 20.0) {
        let cfg = base.with_theta(db_to_linear(theta_db))?;
        let b = ps_bounds(&cfg, &mix, &si, LinkClass::Unconditional, true)?;
        rows.push(row(&[
            num(theta_db),
            num(b.exact.expect("exact requested")),
            num(b.lower),
            num(b.upper),
        ]));
    }
    let path = out_dir.join("fig1.csv");
    write_csv(&path, "theta_db,ps_exact,ps_lower,ps_upper", &rows)?;
    Ok(vec![path])
}

/// Full-duplex-only network with bounds, against a half-duplex-only
/// reference at the same density.
fn fig2(out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let base = NetworkConfig::new(0.1, 1.0, 1.0, 4.0)?;
    let fd_mix = DuplexMix::new(0.0, 0.0, 1.0)?;
    let hd_mix = DuplexMix::new(0.0, 1.0, 0.0)?;
    let si = SelfInterferenceModel::perfect(k_preset())?;
    let mut rows = Vec::new();
    for theta_db in theta_db_grid(-10.0, 20.0) {
        let cfg = base.with_theta(db_to_linear(theta_db))?;
        let b = ps_bounds(&cfg, &fd_mix, &si, LinkClass::Fd, true)?;
        rows.push(row(&[
            num(theta_db),
            num(b.exact.expect("exact requested")),
            num(b.lower),
            num(b.upper),
            num(ps_hd(&cfg, &hd_mix)?),
        ]));
    }
    let path = out_dir.join("fig2.csv");
    write_csv(
        &path,
        "theta_db,ps_fd,ps_fd_lower,ps_fd_upper,ps_hd_only",
        &rows,
    )?;
    Ok(vec![path])
}

/// Full-duplex-only success probability at perfect vs 40 dB cancellation.
fn fig3(out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let base = NetworkConfig::new(0.1, 1.0, 1.0, 4.0)?;
    let mix = DuplexMix::new(0.0, 0.0, 1.0)?;
    let perfect = SelfInterferenceModel::perfect(k_preset())?;
    let residual = SelfInterferenceModel::new(1e-4, k_preset())?;
    let mut rows = Vec::new();
    for theta_db in theta_db_grid(-10.0, 20.0) {
        let cfg = base.with_theta(db_to_linear(theta_db))?;
        rows.push(row(&[
            num(theta_db),
            num(ps_fd(&cfg, &mix, &perfect)?),
            num(ps_fd(&cfg, &mix, &residual)?),
        ]));
    }
    let path = out_dir.join("fig3.csv");
    write_csv(&path, "theta_db,ps_fd_perfect,ps_fd_cancel40db", &rows)?;
    Ok(vec![path])
}

/// Critical cancellation ratio against link distance, one file per
/// (α, θ) combination; linear in log-log with slope −1/α.
fn fig4(out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut paths = Vec::new();
    for (alpha, theta_db) in [(3.0, 0.0), (3.0, 10.0), (4.0, 0.0), (4.0, 10.0)] {
        let mut rows = Vec::new();
        for r in make_grid(1.0, 100.0, GRID_POINTS, true) {
            let cfg = NetworkConfig::new(0.1, db_to_linear(theta_db), r, alpha)?;
            let beta_c = critical_beta(&cfg, k_preset())?;
            rows.push(row(&[num(linear_to_db(beta_c)), num(r)]));
        }
        let path = out_dir.join(format!(
            "fig4_alpha{}_theta{}db.csv",
            alpha as u32, theta_db as i32
        ));
        write_csv(&path, "beta_c_db,R", &rows)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Throughput gain of the optimal full-duplex deployment over the optimal
/// half-duplex one, with its κ-based bracket, at three cancellation levels.
fn fig5(out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let base = NetworkConfig::new(0.1, 1.0, 1.0, 4.0)?;
    let mut paths = Vec::new();
    for (file, beta) in [
        ("fig5_cancel50db.csv", 1e-5),
        ("fig5_cancel70db.csv", 1e-7),
        ("fig5_perfect.csv", 0.0),
    ] {
        let si = SelfInterferenceModel::new(beta, k_preset())?;
        let mut rows = Vec::new();
        for theta_db in theta_db_grid(-10.0, 40.0) {
            let cfg = base.with_theta(db_to_linear(theta_db))?;
            let k = kappa(&cfg, &si);
            rows.push(row(&[
                num(theta_db),
                num(throughput_gain(&cfg, &si)?),
                num(k),
                num(2.0 * k / (1.0 + cfg.delta())),
            ]));
        }
        let path = out_dir.join(file);
        write_csv(&path, "theta_db,tg,tg_lower,tg_upper", &rows)?;
        paths.push(path);
    }
    Ok(paths)
}
