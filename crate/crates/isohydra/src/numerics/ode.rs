//! Numerov integration of `u'' = q(r) u` with overflow-guarded
//! renormalization and high-order dense output.
//!
//! The radial equations solved here have no first-derivative term, so the
//! three-term Numerov recursion gives fourth-order global accuracy at the
//! cost of one multiply-add pair per step.

use crate::error::{Error, Result};
use crate::numerics::diff::fornberg_weights;
use crate::numerics::{FunctionTable, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Renormalize the running solution once |u| exceeds this.
const RENORM_THRESHOLD: f64 = 1e250;

/// Numerov solution on a uniform grid.
///
/// Because bound-state integrations grow exponentially, the raw values are
/// renormalized whenever they exceed [`RENORM_THRESHOLD`]; `log_scale[i]`
/// records the accumulated factor so the true solution at node `i` is
/// `values[i] * exp(log_scale[i])`.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub log_scale: Vec<f64>,
}

impl OdeSolution {
    /// True (unscaled) value at node `i`; may overflow to infinity if the
    /// solution genuinely exceeds the f64 range.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i] * self.log_scale[i].exp()
    }

    /// Signed value reconstructed with an extra log-space prefactor:
    /// `sign(u_i) * exp(ln|u_i| + log_scale_i + ln_prefactor)`.
    pub fn value_with_log_prefactor(&self, i: usize, ln_prefactor: f64) -> f64 {
        let u = self.values[i];
        if u == 0.0 {
            return 0.0;
        }
        u.signum() * (u.abs().ln() + self.log_scale[i] + ln_prefactor).exp()
    }

    /// Convert to a plain table. Fails if any renormalized value cannot be
    /// represented as f64.
    pub fn into_table(self) -> Result<FunctionTable> {
        let mut values = Vec::with_capacity(self.values.len());
        for i in 0..self.values.len() {
            let v = self.value(i);
            if !v.is_finite() {
                return Err(Error::Domain(
                    "ODE solution exceeds f64 range; use the scaled accessors".into(),
                ));
            }
            values.push(v);
        }
        FunctionTable::new(self.grid, values)
    }
}

/// Core Numerov recursion for `u'' = q u` on a uniform mesh, given the first
/// two values. Returns renormalized values and per-node log scales.
pub fn numerov_recurse(q: &[f64], h: f64, u0: f64, u1: f64) -> (Vec<f64>, Vec<f64>) {
    let n = q.len();
    let h2_12 = h * h / 12.0;
    let mut u = vec![0.0; n];
    let mut ls = vec![0.0; n];
    u[0] = u0;
    if n == 1 {
        return (u, ls);
    }
    u[1] = u1;
    let mut cur_ls = 0.0;
    for i in 1..n - 1 {
        // (1 - h²q_{i+1}/12) u_{i+1} = 2 (1 + 5h²q_i/12) u_i - (1 - h²q_{i-1}/12) u_{i-1}
        let a = 1.0 - h2_12 * q[i + 1];
        let b = 2.0 * (1.0 + 5.0 * h2_12 * q[i]);
        let c = 1.0 - h2_12 * q[i - 1];
        u[i + 1] = (b * u[i] - c * u[i - 1]) / a;
        ls[i + 1] = cur_ls;
        if u[i + 1].abs() > RENORM_THRESHOLD {
            let s = u[i + 1].abs();
            u[i] /= s;
            u[i + 1] /= s;
            cur_ls += s.ln();
            // node i was rescaled with the window, so its record moves too
            ls[i] = cur_ls;
            ls[i + 1] = cur_ls;
        }
    }
    (u, ls)
}

/// Fourth-order Taylor step for the second starting value, using stencil
/// estimates of q' and q'' at the start node.
fn taylor_second_value(u0: f64, u0p: f64, h: f64, q: &[f64]) -> f64 {
    let q0 = q[0];
    let (q0p, q0pp) = if q.len() >= 5 {
        let xs: Vec<f64> = (0..5).map(|i| i as f64 * h).collect();
        let w = fornberg_weights(0.0, &xs, 2);
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for j in 0..5 {
            d1 += w[j][1] * q[j];
            d2 += w[j][2] * q[j];
        }
        (d1, d2)
    } else {
        (0.0, 0.0)
    };
    let u0pp = q0 * u0;
    let u0ppp = q0p * u0 + q0 * u0p;
    let u0pppp = q0pp * u0 + 2.0 * q0p * u0p + q0 * u0pp;
    u0 + h * u0p + h * h / 2.0 * u0pp + h.powi(3) / 6.0 * u0ppp + h.powi(4) / 24.0 * u0pppp
}

/// Numerov integration of the radial Schrödinger equation
/// `u'' = (V(r) - E) u` along the (uniform) grid of the potential table.
///
/// Initial value and slope are given at the first node (`Forward`) or the
/// last node (`Backward`). The running solution is renormalized on overflow
/// with the accumulated scale recorded in the result.
pub fn ode_integrate_schrodinger(
    v: &FunctionTable,
    energy: f64,
    init_value: f64,
    init_slope: f64,
    direction: Direction,
) -> Result<OdeSolution> {
    let h = v.grid.spacing_if_uniform().ok_or(Error::NonUniformGrid {
        context: "ode_integrate_schrodinger",
    })?;
    let q: Vec<f64> = v.values.iter().map(|&vv| vv - energy).collect();
    let (q_run, slope) = match direction {
        Direction::Forward => (q, init_slope),
        Direction::Backward => {
            let mut qr = q;
            qr.reverse();
            (qr, -init_slope)
        }
    };
    let stiff = h * h * q_run[0].abs() > 0.5;
    let u1 = if stiff {
        if init_value == 0.0 {
            // the start only fixes the scale of the regular discrete solution
            h * slope
        } else {
            return Err(Error::Domain(
                "ode_integrate_schrodinger: potential too stiff at the starting node for a series start".into(),
            ));
        }
    } else {
        taylor_second_value(init_value, slope, h, &q_run)
    };
    let (mut u, mut ls) = numerov_recurse(&q_run, h, init_value, u1);
    if direction == Direction::Backward {
        u.reverse();
        ls.reverse();
    }
    Ok(OdeSolution {
        grid: v.grid.clone(),
        values: u,
        log_scale: ls,
    })
}

/// Derivative of a renormalized Numerov solution at every node, by five-point
/// stencils applied to locally re-scaled values (so renormalization jumps do
/// not corrupt the windows). Fourth order in the mesh spacing.
pub fn solution_derivative(sol: &OdeSolution) -> Vec<f64> {
    let n = sol.values.len();
    let x = sol.grid.nodes();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let start = i.saturating_sub(2).min(n - 5);
        let xs = &x[start..start + 5];
        let w = fornberg_weights(x[i], xs, 1);
        let mut acc = 0.0;
        for j in 0..5 {
            let k = start + j;
            // rebase node k onto node i's scale
            let rebased = sol.values[k] * (sol.log_scale[k] - sol.log_scale[i]).exp();
            acc += w[j][1] * rebased;
        }
        out[i] = acc; // derivative on node i's scale
    }
    out
}

/// Quintic Hermite interpolation of `u` between two nodes where `u`, `u'`
/// and `u''` are known at both ends. `t` in [0, 1], `h` the node spacing.
#[allow(clippy::too_many_arguments)]
pub fn hermite5(
    t: f64,
    h: f64,
    u0: f64,
    u0p: f64,
    u0pp: f64,
    u1: f64,
    u1p: f64,
    u1pp: f64,
) -> f64 {
    // basis from the Taylor/boundary conditions at t=0 and t=1
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * t3 - t4 + 0.5 * t5;
    h00 * u0 + h10 * h * u0p + h20 * h * h * u0pp + h01 * u1 + h11 * h * u1p + h21 * h * h * u1pp
}

/// Derivative (d/dr) of the quintic Hermite interpolant above.
#[allow(clippy::too_many_arguments)]
pub fn hermite5_deriv(
    t: f64,
    h: f64,
    u0: f64,
    u0p: f64,
    u0pp: f64,
    u1: f64,
    u1p: f64,
    u1pp: f64,
) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let h00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let h10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let h20 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
    let h01 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    let h11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let h21 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
    (h00 * u0 + h10 * h * u0p + h20 * h * h * u0pp + h01 * u1 + h11 * h * u1p
        + h21 * h * h * u1pp)
        / h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn v_zero(n: usize, r0: f64, r1: f64) -> FunctionTable {
        FunctionTable::from_fn(Grid::uniform(r0, r1, n).unwrap(), |_| 0.0)
    }

    #[test]
    fn sinh_from_constant_coefficients() {
        // u'' = u with u(r0)=0, u'(r0)=1 -> sinh(r - r0)
        let r0 = 1e-9;
        let v = v_zero(4001, r0, 4.0);
        let sol = ode_integrate_schrodinger(&v, -1.0, 0.0, 1.0, Direction::Forward).unwrap();
        let r = sol.grid.nodes()[3000];
        // limited by recursion roundoff ~ L*eps/h^2, not truncation
        assert_relative_eq!(sol.value(3000), (r - r0).sinh(), max_relative = 1e-8);
    }

    #[test]
    fn linear_solution_at_zero_energy() {
        let r0 = 1e-9;
        let v = v_zero(1001, r0, 2.0);
        let sol = ode_integrate_schrodinger(&v, 0.0, 0.0, 1.0, Direction::Forward).unwrap();
        for i in [10, 500, 1000] {
            assert_relative_eq!(
                sol.value(i),
                sol.grid.nodes()[i] - r0,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn hydrogen_ground_state_ratio_constancy() {
        // V = -2/r at l=0; u = r e^{-r} solves u'' = (V + 1) u.
        // Forward over a moderate range: growing-mode contamination stays
        // below ~e^{span} * h^4.
        let grid = Grid::uniform(0.5, 6.0, 5501).unwrap();
        let v = FunctionTable::from_fn(grid, |r| -2.0 / r);
        let r0: f64 = 0.5;
        let sol = ode_integrate_schrodinger(
            &v,
            -1.0,
            r0 * (-r0).exp(),
            (1.0 - r0) * (-r0).exp(),
            Direction::Forward,
        )
        .unwrap();
        for i in [100, 3000, 5500] {
            let r = sol.grid.nodes()[i];
            assert_relative_eq!(sol.value(i), r * (-r).exp(), max_relative = 1e-8);
        }
        // Backward is the stable direction for a decaying state: the
        // logarithmic derivative must be reproduced on all of [0.5, 10].
        let grid = Grid::uniform(0.5, 10.0, 9501).unwrap();
        let v = FunctionTable::from_fn(grid, |r| -2.0 / r);
        let r1: f64 = 10.0;
        let sol = ode_integrate_schrodinger(
            &v,
            -1.0,
            r1 * (-r1).exp(),
            (1.0 - r1) * (-r1).exp(),
            Direction::Backward,
        )
        .unwrap();
        let d = solution_derivative(&sol);
        for i in (50..9450).step_by(700) {
            let r = sol.grid.nodes()[i];
            let logd = d[i] / sol.values[i];
            assert_abs_diff_eq!(logd, 1.0 / r - 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn backward_integration_matches_forward() {
        let v = v_zero(2001, 1e-9, 3.0);
        // u'' = 4u, u = e^{-2r} decays backward from the right end
        let r1: f64 = 3.0;
        let sol = ode_integrate_schrodinger(
            &v,
            -4.0,
            (-2.0 * r1).exp(),
            -2.0 * (-2.0 * r1).exp(),
            Direction::Backward,
        )
        .unwrap();
        for i in [0, 700, 1700] {
            let r = sol.grid.nodes()[i];
            assert_relative_eq!(sol.value(i), (-2.0 * r).exp(), max_relative = 1e-8);
        }
    }

    #[test]
    fn renormalization_keeps_growth_representable() {
        // u'' = u integrated to r = 800: sinh(800) overflows f64, the scaled
        // form must survive and local growth ratios must stay exact
        let v = v_zero(800_001, 1e-9, 800.0);
        let sol = ode_integrate_schrodinger(&v, -1.0, 0.0, 1.0, Direction::Forward).unwrap();
        let n = sol.values.len();
        assert!(sol.log_scale[n - 1] > 0.0, "renormalization must trigger");
        let ln_u_end = sol.values[n - 1].abs().ln() + sol.log_scale[n - 1];
        // sinh(800) ~ e^800 / 2
        assert_abs_diff_eq!(ln_u_end, 800.0 - std::f64::consts::LN_2, epsilon = 1e-6);
    }

    #[test]
    fn rejects_nonuniform_grid() {
        let grid = Grid::log_then_uniform(1e-4, 10.0, 200).unwrap();
        let v = FunctionTable::from_fn(grid, |_| 0.0);
        assert!(matches!(
            ode_integrate_schrodinger(&v, -1.0, 0.0, 1.0, Direction::Forward),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn hermite_reproduces_quintic_exactly() {
        // f(t) = t^5 on [0,1] with h=1
        let f = |t: f64| t.powi(5);
        let fp = |t: f64| 5.0 * t.powi(4);
        let fpp = |t: f64| 20.0 * t.powi(3);
        for t in [0.15, 0.5, 0.85] {
            let v = hermite5(t, 1.0, f(0.0), fp(0.0), fpp(0.0), f(1.0), fp(1.0), fpp(1.0));
            assert_abs_diff_eq!(v, f(t), epsilon = 1e-14);
            let d = hermite5_deriv(t, 1.0, f(0.0), fp(0.0), fpp(0.0), f(1.0), fp(1.0), fpp(1.0));
            assert_abs_diff_eq!(d, fp(t), epsilon = 1e-13);
        }
    }
}
