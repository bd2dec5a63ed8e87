//! Grids, tabulated functions, special functions, quadrature, stencil
//! differentiation and the Numerov stepper shared by every other module.

pub mod diff;
pub mod gamma;
pub mod ode;
pub mod quad;

pub use diff::{central_derivative, differentiate};
pub use gamma::regularized_lower_gamma;
pub use ode::{ode_integrate_schrodinger, Direction, OdeSolution};
pub use quad::{adaptive_quad, integrate_table};

use crate::error::{Error, Result};

/// Node placement scheme for a radial grid.
///
/// The default for eigenfunction work is [`GridScheme::LogThenUniform`]:
/// logarithmic from `r_min` up to 1 (eigenfunctions vary fastest near the
/// centrifugal singularity), uniform beyond. Eigensolvers re-sample onto
/// uniform grids themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GridScheme {
    Uniform,
    LogThenUniform,
}

/// A strictly increasing radial grid on `[r_min, r_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    scheme: GridScheme,
}

impl Grid {
    /// Build a grid with `n_points >= 16` nodes between `0 < r_min < r_max`.
    pub fn new(r_min: f64, r_max: f64, n_points: usize, scheme: GridScheme) -> Result<Grid> {
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::Domain(format!(
                "grid requires 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n_points < 16 {
            return Err(Error::GridTooCoarse {
                needed: 16,
                got: n_points,
            });
        }
        let nodes = match scheme {
            GridScheme::Uniform => uniform_nodes(r_min, r_max, n_points),
            GridScheme::LogThenUniform => log_then_uniform_nodes(r_min, r_max, n_points),
        };
        debug_assert!(nodes.windows(2).all(|w| w[1] > w[0]));
        Ok(Grid { nodes, scheme })
    }

    pub fn uniform(r_min: f64, r_max: f64, n_points: usize) -> Result<Grid> {
        Grid::new(r_min, r_max, n_points, GridScheme::Uniform)
    }

    pub fn log_then_uniform(r_min: f64, r_max: f64, n_points: usize) -> Result<Grid> {
        Grid::new(r_min, r_max, n_points, GridScheme::LogThenUniform)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn scheme(&self) -> GridScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Uniform spacing, if the whole grid is uniform to relative 1e-12.
    pub fn spacing_if_uniform(&self) -> Option<f64> {
        let h = self.nodes[1] - self.nodes[0];
        let ok = self
            .nodes
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * h.max(1.0));
        ok.then_some(h)
    }

    /// Index of the first node from which the remaining tail is uniformly
    /// spaced. For a fully uniform grid this is 0.
    pub fn uniform_tail_start(&self) -> usize {
        let n = self.nodes.len();
        let h_last = self.nodes[n - 1] - self.nodes[n - 2];
        let mut start = n - 2;
        while start > 0 {
            let h = self.nodes[start] - self.nodes[start - 1];
            if (h - h_last).abs() > 1e-10 * h_last.max(1e-300) {
                break;
            }
            start -= 1;
        }
        start
    }
}

fn uniform_nodes(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    let h = (r_max - r_min) / (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| r_min + i as f64 * h).collect();
    nodes[n - 1] = r_max;
    nodes
}

/// Log spacing below 1, uniform above, with the node count split so the local
/// spacing is continuous at the joint.
fn log_then_uniform_nodes(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    if r_max <= 1.0 {
        // pure log grid
        let ratio = (r_max / r_min).ln() / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| r_min * (i as f64 * ratio).exp()).collect();
        nodes[0] = r_min;
        nodes[n - 1] = r_max;
        return nodes;
    }
    if r_min >= 1.0 {
        return uniform_nodes(r_min, r_max, n);
    }
    let span_log = (1.0 / r_min).ln();
    let span_uni = r_max - 1.0;
    let intervals = (n - 1) as f64;
    let n_log = ((intervals * span_log / (span_log + span_uni)).round() as usize)
        .clamp(2, n - 3);
    let n_uni = n - 1 - n_log;
    let mut nodes = Vec::with_capacity(n);
    let step = span_log / n_log as f64;
    for i in 0..n_log {
        nodes.push(r_min * (i as f64 * step).exp());
    }
    let h = span_uni / n_uni as f64;
    for j in 0..=n_uni {
        nodes.push(1.0 + j as f64 * h);
    }
    nodes[0] = r_min;
    let n_total = nodes.len();
    nodes[n_total - 1] = r_max;
    nodes
}

/// Values of a scalar function on a [`Grid`], with optional tabulated first
/// and second derivatives.
#[derive(Debug, Clone)]
pub struct FunctionTable {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub d1: Option<Vec<f64>>,
    pub d2: Option<Vec<f64>>,
}

impl FunctionTable {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<FunctionTable> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!(
                "table length {} does not match grid length {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(FunctionTable {
            grid,
            values,
            d1: None,
            d2: None,
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> FunctionTable {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        FunctionTable {
            grid,
            values,
            d1: None,
            d2: None,
        }
    }

    pub fn with_d1(mut self, d1: Vec<f64>) -> Result<FunctionTable> {
        if d1.len() != self.grid.len() {
            return Err(Error::Domain("d1 length mismatch".into()));
        }
        self.d1 = Some(d1);
        Ok(self)
    }

    pub fn with_d2(mut self, d2: Vec<f64>) -> Result<FunctionTable> {
        if d2.len() != self.grid.len() {
            return Err(Error::Domain("d2 length mismatch".into()));
        }
        self.d2 = Some(d2);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Max of |values|, zero only for the zero table.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// L2 norm under the grid quadrature rule.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        integrate_table(self.grid.nodes(), &sq).sqrt()
    }

    /// Scale values (and derivatives, when present) in place.
    pub fn scale(&mut self, s: f64) {
        for v in &mut self.values {
            *v *= s;
        }
        if let Some(d) = &mut self.d1 {
            for v in d {
                *v *= s;
            }
        }
        if let Some(d) = &mut self.d2 {
            for v in d {
                *v *= s;
            }
        }
    }
}

/// Numerical tolerances shared across the crate.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ToleranceConfig {
    /// Absolute tolerance for adaptive quadrature.
    pub quad_tol: f64,
    /// Relative tolerance target for ODE integration and branch matching.
    pub ode_tol: f64,
    /// Ceiling for normalized operator residuals.
    pub residual_tol: f64,
    /// Relative step used by scalar finite-difference cross-checks.
    pub fd_step_scale: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            quad_tol: 1e-10,
            ode_tol: 1e-10,
            residual_tol: 1e-6,
            fd_step_scale: 1e-4,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all_pos = self.quad_tol > 0.0
            && self.ode_tol > 0.0
            && self.residual_tol > 0.0
            && self.fd_step_scale > 0.0;
        if !all_pos {
            return Err(Error::Domain("tolerances must be strictly positive".into()));
        }
        if self.quad_tol > 1e-6 {
            return Err(Error::Domain(format!(
                "quad_tol must be <= 1e-6, got {}",
                self.quad_tol
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_endpoints_exact() {
        let g = Grid::uniform(1e-4, 120.0, 12000).unwrap();
        assert_eq!(g.r_min(), 1e-4);
        assert_eq!(g.r_max(), 120.0);
        assert_eq!(g.len(), 12000);
        assert!(g.spacing_if_uniform().is_some());
    }

    #[test]
    fn log_then_uniform_is_increasing_and_spans() {
        let g = Grid::log_then_uniform(1e-6, 60.0, 4000).unwrap();
        assert_eq!(g.r_min(), 1e-6);
        assert_eq!(g.r_max(), 60.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        // tail above 1 is uniform
        let start = g.uniform_tail_start();
        assert!(g.nodes()[start] <= 1.0 + 1e-12);
    }

    #[test]
    fn grid_rejects_bad_domains() {
        assert!(Grid::uniform(0.0, 1.0, 100).is_err());
        assert!(Grid::uniform(2.0, 1.0, 100).is_err());
        assert!(matches!(
            Grid::uniform(1.0, 2.0, 8),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn table_length_checked() {
        let g = Grid::uniform(1.0, 2.0, 16).unwrap();
        assert!(FunctionTable::new(g.clone(), vec![0.0; 15]).is_err());
        assert!(FunctionTable::new(g, vec![0.0; 16]).is_ok());
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::default().validate().is_ok());
        let bad = ToleranceConfig {
            quad_tol: 1e-3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
