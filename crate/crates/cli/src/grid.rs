//! Sampling grids for plotting and their CSV output.

use std::fmt::Write as _;

use defectfield::field_algebra::SingularField;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridSpec {
    /// `nx × ny` nodes on `[−half_width, half_width]²`, none closer than `guard` to O.
    Square {
        nx: usize,
        ny: usize,
        half_width: f64,
        guard: f64,
    },
    /// `points` equally spaced nodes on the circle of the given radius.
    Ring { points: usize, radius: f64 },
}

impl GridSpec {
    /// Nodes in row-major order (`y` outer, `x` inner).
    pub fn nodes(&self, domain_radius: f64) -> Result<Vec<(f64, f64)>, CliError> {
        let nodes = match *self {
            GridSpec::Square {
                nx,
                ny,
                half_width,
                guard,
            } => {
                if !(guard > 0.0) {
                    return Err(CliError::Grid(format!("guard radius must be positive, got {guard}")));
                }
                if nx == 0 || ny == 0 || !(half_width > 0.0) {
                    return Err(CliError::Grid("grid needs nx, ny ≥ 1 and a positive half width".into()));
                }
                let axis = |n: usize, i: usize| {
                    if n == 1 {
                        0.0
                    } else {
                        -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64
                    }
                };
                let mut out = Vec::with_capacity(nx * ny);
                for j in 0..ny {
                    for i in 0..nx {
                        let (x, y) = (axis(nx, i), axis(ny, j));
                        if x.hypot(y) < guard {
                            return Err(CliError::Grid(format!(
                                "node ({x}, {y}) lies within the guard radius {guard} of O"
                            )));
                        }
                        out.push((x, y));
                    }
                }
                out
            }
            GridSpec::Ring { points, radius } => {
                if points == 0 || !(radius > 0.0) {
                    return Err(CliError::Grid("ring needs points ≥ 1 and a positive radius".into()));
                }
                (0..points)
                    .map(|j| {
                        let th = 2.0 * std::f64::consts::PI * j as f64 / points as f64;
                        (radius * th.cos(), radius * th.sin())
                    })
                    .collect()
            }
        };
        if let Some((x, y)) = nodes.iter().find(|(x, y)| x.hypot(*y) >= domain_radius) {
            return Err(CliError::Grid(format!("node ({x}, {y}) lies outside the domain")));
        }
        Ok(nodes)
    }
}

fn header(f: &SingularField) -> String {
    let names: Vec<String> = match f.codomain().len() {
        1 => vec!["f".into()],
        2 => vec!["f1".into(), "f2".into()],
        _ => ["f11", "f12", "f21", "f22"].iter().map(|s| s.to_string()).collect(),
    };
    format!("x,y,{}\n", names.join(","))
}

/// CSV rows `x, y, components…` of the smooth part; the point part does not show.
pub fn render_grid(f: &SingularField, grid: &GridSpec) -> Result<String, CliError> {
    let mut out = header(f);
    for (x, y) in grid.nodes(f.domain_radius())? {
        let v = f.eval_xy(x, y).map_err(|e| CliError::Grid(e.to_string()))?;
        let _ = write!(out, "{x:.17e},{y:.17e}");
        for c in v {
            let _ = write!(out, ",{c:.17e}");
        }
        out.push('\n');
    }
    Ok(out)
}
