//! Data tables behind the four standard capacity/entropy panels and
//! their CSV rendering.
//!
//! All capacities are evaluated at mean input energy `E = 10` unless the
//! panel sweeps the energy itself:
//! - `fig2a`: thermal-family capacity over transmissivity and
//!   amplifier-family capacity over gain, environment photons
//!   `N in {0, 1, 5, 10, 20, 40, 100, 200}`.
//! - `fig2b`: covariant vs contravariant amplifier capacity over gain,
//!   `N in {0, 1, 5, 10}`.
//! - `fig2c`: minimum output entropy of the thermal, amplifier, and
//!   contravariant-amplifier families, `N in {0, 2, 5, 10, 20, 40}`.
//! - `fig2d`: additive-noise capacity over the added photon number for
//!   several energies, plus the family's minimum output entropy as an
//!   `smin` series.
//!
//! Grids are fixed and recorded in `#` comment lines ahead of the CSV
//! header, rows are ordered by series then by ascending `x`, and numbers
//! round-trip at 17 significant digits, so identical invocations emit
//! byte-identical files.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::capacity::{holevo_capacity, min_output_entropy};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::report::format_float;

/// Energy constraint used by the capacity panels that do not sweep it.
pub const PANEL_ENERGY: f64 = 10.0;

/// Points on every axis grid.
pub const GRID_POINTS: usize = 201;

const FIG2A_ENV: [f64; 8] = [0.0, 1.0, 5.0, 10.0, 20.0, 40.0, 100.0, 200.0];
const FIG2B_ENV: [f64; 4] = [0.0, 1.0, 5.0, 10.0];
const FIG2C_ENV: [f64; 6] = [0.0, 2.0, 5.0, 10.0, 20.0, 40.0];
const FIG2D_ENERGIES: [f64; 6] = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0];

/// Panel selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
}

impl Panel {
    pub const ALL: [Panel; 4] = [Panel::Fig2a, Panel::Fig2b, Panel::Fig2c, Panel::Fig2d];

    pub fn name(self) -> &'static str {
        match self {
            Panel::Fig2a => "fig2a",
            Panel::Fig2b => "fig2b",
            Panel::Fig2c => "fig2c",
            Panel::Fig2d => "fig2d",
        }
    }
}

impl FromStr for Panel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2a" => Ok(Panel::Fig2a),
            "fig2b" => Ok(Panel::Fig2b),
            "fig2c" => Ok(Panel::Fig2c),
            "fig2d" => Ok(Panel::Fig2d),
            other => Err(Error::InvalidGrid(format!(
                "unknown panel {other:?}, expected one of fig2a, fig2b, fig2c, fig2d"
            ))),
        }
    }
}

/// One data point: `series` labels the curve, `x` is the axis value.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRow {
    pub series: String,
    pub x: f64,
    pub value: f64,
}

fn eta_grid() -> Vec<f64> {
    (0..GRID_POINTS).map(|i| i as f64 / 200.0).collect()
}

/// Gain axis: the inverse gain is uniform on `[0.1, 1]`, which resolves
/// both the unit-gain and the strong-gain ends; `kappa` runs 1 to 10.
fn kappa_grid() -> Vec<f64> {
    (0..GRID_POINTS).map(|i| 1.0 / (0.1 + 0.9 * (200 - i) as f64 / 200.0)).collect()
}

fn noise_grid() -> Vec<f64> {
    (0..GRID_POINTS).map(|i| i as f64 / 20.0).collect()
}

fn env_label(prefix: &str, n_env: f64) -> String {
    format!("{prefix}_N{n_env}")
}

/// Rows of one panel, ordered by series then by ascending `x`.
pub fn panel_rows(panel: Panel) -> Result<Vec<PlotRow>> {
    let mut rows = Vec::new();
    match panel {
        Panel::Fig2a => {
            for &n_env in &FIG2A_ENV {
                for &eta in &eta_grid() {
                    let c = holevo_capacity(&Channel::thermal(eta, n_env)?, PANEL_ENERGY)?;
                    rows.push(PlotRow { series: env_label("thermal", n_env), x: eta, value: c });
                }
            }
            for &n_env in &FIG2A_ENV {
                for &kappa in &kappa_grid() {
                    let c = holevo_capacity(&Channel::amplifier(kappa, n_env)?, PANEL_ENERGY)?;
                    rows.push(PlotRow { series: env_label("amp", n_env), x: kappa, value: c });
                }
            }
        }
        Panel::Fig2b => {
            for &n_env in &FIG2B_ENV {
                for &kappa in &kappa_grid() {
                    let c = holevo_capacity(&Channel::amplifier(kappa, n_env)?, PANEL_ENERGY)?;
                    rows.push(PlotRow { series: env_label("amp", n_env), x: kappa, value: c });
                }
            }
            for &n_env in &FIG2B_ENV {
                for &kappa in &kappa_grid() {
                    let c =
                        holevo_capacity(&Channel::contra_amplifier(kappa, n_env)?, PANEL_ENERGY)?;
                    rows.push(PlotRow { series: env_label("contra", n_env), x: kappa, value: c });
                }
            }
        }
        Panel::Fig2c => {
            for &n_env in &FIG2C_ENV {
                for &eta in &eta_grid() {
                    let s = min_output_entropy(&Channel::thermal(eta, n_env)?);
                    rows.push(PlotRow { series: env_label("thermal", n_env), x: eta, value: s });
                }
            }
            for &n_env in &FIG2C_ENV {
                for &kappa in &kappa_grid() {
                    let s = min_output_entropy(&Channel::amplifier(kappa, n_env)?);
                    rows.push(PlotRow { series: env_label("amp", n_env), x: kappa, value: s });
                }
            }
            for &n_env in &FIG2C_ENV {
                for &kappa in &kappa_grid() {
                    let s = min_output_entropy(&Channel::contra_amplifier(kappa, n_env)?);
                    rows.push(PlotRow { series: env_label("contra", n_env), x: kappa, value: s });
                }
            }
        }
        Panel::Fig2d => {
            for &energy in &FIG2D_ENERGIES {
                for &n in &noise_grid() {
                    let c = holevo_capacity(&Channel::additive_noise(n)?, energy)?;
                    rows.push(PlotRow { series: format!("capacity_E{energy}"), x: n, value: c });
                }
            }
            for &n in &noise_grid() {
                let s = min_output_entropy(&Channel::additive_noise(n)?);
                rows.push(PlotRow { series: "smin".into(), x: n, value: s });
            }
        }
    }
    Ok(rows)
}

fn grid_comment(panel: Panel) -> &'static str {
    match panel {
        Panel::Fig2a => {
            "# capacity at energy E = 10\n\
             # thermal series: x = eta, 201 points uniform on [0, 1]\n\
             # amp series: x = kappa, 201 points with 1/kappa uniform on [0.1, 1]\n\
             # environment photons N in {0, 1, 5, 10, 20, 40, 100, 200}\n"
        }
        Panel::Fig2b => {
            "# capacity at energy E = 10\n\
             # amp and contra series: x = kappa, 201 points with 1/kappa uniform on [0.1, 1]\n\
             # environment photons N in {0, 1, 5, 10}\n"
        }
        Panel::Fig2c => {
            "# minimum output entropy\n\
             # thermal series: x = eta, 201 points uniform on [0, 1]\n\
             # amp and contra series: x = kappa, 201 points with 1/kappa uniform on [0.1, 1]\n\
             # environment photons N in {0, 2, 5, 10, 20, 40}\n"
        }
        Panel::Fig2d => {
            "# additive-noise capacity over the added photon number\n\
             # capacity_E series: x = n, 201 points uniform on [0, 10], energy E in {1, 2, 5, 10, 20, 50}\n\
             # smin series: minimum output entropy over the same x grid\n"
        }
    }
}

/// CSV text of one panel: `#` grid comments, a `panel,series,x,value`
/// header, then one row per data point with LF endings.
pub fn render_panel(panel: Panel) -> Result<String> {
    let rows = panel_rows(panel)?;
    let mut out = String::with_capacity(rows.len() * 64 + 256);
    out.push_str(grid_comment(panel));
    out.push_str("# rows ordered by series then by ascending x\n");
    out.push_str("panel,series,x,value\n");
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            panel.name(),
            r.series,
            format_float(r.x),
            format_float(r.value)
        );
    }
    Ok(out)
}
