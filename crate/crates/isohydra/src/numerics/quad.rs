//! Adaptive quadrature (embedded Gauss 7 / Kronrod 15 pair) and composite
//! integration of tabulated functions.

use crate::error::{Error, Result};

// Kronrod-15 abscissae on [0, 1] side of the symmetric rule; odd entries are
// the embedded Gauss-7 points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss7/Kronrod15 panel on `[a, b]`. Returns `(kronrod, |k - g|)`.
pub fn gk15_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

const MAX_DEPTH: usize = 60;

/// Adaptive quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Bisects any panel whose embedded-pair error estimate exceeds its share of
/// the tolerance budget. Fails with [`Error::NonConvergence`] (reporting the
/// worst subinterval) when a panel needs more than 60 bisection levels.
pub fn adaptive_quad(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!(
            "quadrature requires a < b, got [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("quadrature tolerance must be positive".into()));
    }
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol, 0usize)];
    while let Some((lo, hi, budget, depth)) = stack.pop() {
        let (val, err) = gk15_panel(&f, lo, hi);
        // the relative floor (~100 ulp) stops subdivision once a panel is
        // at the attainable f64 accuracy
        if err <= budget || err <= 1e-14 * val.abs() {
            total += val;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Error::NonConvergence {
                a: lo,
                b: hi,
                estimate: err,
            });
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, 0.5 * budget, depth + 1));
        stack.push((mid, hi, 0.5 * budget, depth + 1));
    }
    Ok(total)
}

/// Composite integration of tabulated values over a (possibly non-uniform)
/// strictly increasing grid.
///
/// Integrates the local quadratic through each consecutive node triple
/// (generalized Simpson), so the rule is fourth order on smooth data for
/// both grid schemes. An odd interval at the end is handled with the
/// quadratic through the last three nodes.
pub fn integrate_table(nodes: &[f64], values: &[f64]) -> f64 {
    assert_eq!(nodes.len(), values.len());
    let n = nodes.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * (values[0] + values[1]) * (nodes[1] - nodes[0]);
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        total += quadratic_panel(
            nodes[i],
            nodes[i + 1],
            nodes[i + 2],
            values[i],
            values[i + 1],
            values[i + 2],
            nodes[i],
            nodes[i + 2],
        );
        i += 2;
    }
    if i + 1 < n {
        // one interval left: integrate the quadratic through the last three
        // nodes over it
        total += quadratic_panel(
            nodes[n - 3],
            nodes[n - 2],
            nodes[n - 1],
            values[n - 3],
            values[n - 2],
            values[n - 1],
            nodes[n - 2],
            nodes[n - 1],
        );
    }
    total
}

/// Exact integral over `[a, b]` of the quadratic interpolating
/// `(x0,f0), (x1,f1), (x2,f2)`. Works in coordinates centered on `x1` so the
/// primitive never cancels catastrophically far from the origin.
#[allow(clippy::too_many_arguments)]
fn quadratic_panel(x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64, a: f64, b: f64) -> f64 {
    let (t0, t2) = (x0 - x1, x2 - x1);
    let (ta, tb) = (a - x1, b - x1);
    let basis = |tj: f64, tk: f64, denom: f64| -> f64 {
        // ∫ (t-tj)(t-tk) dt / denom over [ta, tb]
        let prim = |t: f64| t * t * t / 3.0 - 0.5 * (tj + tk) * t * t + tj * tk * t;
        (prim(tb) - prim(ta)) / denom
    };
    f0 * basis(0.0, t2, t0 * (t0 - t2)) + f1 * basis(t0, t2, t0 * t2)
        + f2 * basis(t0, 0.0, (t2 - t0) * t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma::{factorial, regularized_lower_gamma};
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exactness() {
        let q = adaptive_quad(|x| x * x, 0.0, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(q, 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn exponential_tail() {
        // truncation at 60 leaves an error ~ 9e-27, far below tolerance
        let q = adaptive_quad(|x| (-x).exp(), 0.0, 60.0, 1e-10).unwrap();
        assert_abs_diff_eq!(q, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn cross_check_against_incomplete_gamma() {
        // ∫_0^2 x^4 e^{-x} dx = Γ(5) P(5, 2) = 4! P(5, 2); the closed form is
        // the oracle for the expected value.
        let expected = factorial(4) * regularized_lower_gamma(5, 2.0).unwrap();
        let q = adaptive_quad(|x| x.powi(4) * (-x).exp(), 0.0, 2.0, 1e-10).unwrap();
        assert_abs_diff_eq!(q, expected, epsilon = 1e-10);
        assert_abs_diff_eq!(expected, 1.2636725, epsilon = 1e-6);
    }

    #[test]
    fn seed_integral_matches_closed_form() {
        // ∫_0^r x^{2l} e^{-2x/l} dx = (l/2)^{2l+1} (2l)! P(2l+1, 2r/l)
        for l in [2u32, 3, 4] {
            for r in [1.0, 5.0, 20.0] {
                let lf = l as f64;
                let q = adaptive_quad(
                    |x| x.powi(2 * l as i32) * (-2.0 * x / lf).exp(),
                    0.0,
                    r,
                    1e-10,
                )
                .unwrap();
                let closed = (lf / 2.0).powi(2 * l as i32 + 1)
                    * factorial(2 * l)
                    * regularized_lower_gamma(2 * l + 1, 2.0 * r / lf).unwrap();
                assert!(
                    (q - closed).abs() <= 10.0 * 1e-10 * closed.max(1.0),
                    "l={l} r={r}: {q} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn nonconvergence_reports_worst_interval() {
        // 1/sqrt(|x|) is integrable but the panel error never meets an
        // impossible tolerance near 0
        let res = adaptive_quad(|x| 1.0 / x.abs().sqrt().max(1e-300), 0.0, 1.0, 1e-16);
        match res {
            Err(Error::NonConvergence { a, .. }) => assert!(a < 1e-10),
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn table_integration_fourth_order() {
        let nodes: Vec<f64> = (0..2001).map(|i| i as f64 * (5.0 / 2000.0)).collect();
        let vals: Vec<f64> = nodes.iter().map(|&x| (-x).exp()).collect();
        let q = integrate_table(&nodes, &vals);
        assert_abs_diff_eq!(q, 1.0 - (-5.0f64).exp(), epsilon = 1e-11);
    }

    #[test]
    fn table_integration_nonuniform() {
        let mut nodes: Vec<f64> = vec![0.0];
        let mut x: f64 = 0.0;
        let mut h: f64 = 1e-3;
        while x < 4.0 {
            x += h;
            h *= 1.002;
            nodes.push(x);
        }
        let vals: Vec<f64> = nodes.iter().map(|&x| x * (-x).exp()).collect();
        let q = integrate_table(&nodes, &vals);
        let exact = 1.0 - (-x).exp() * (1.0 + x);
        assert_abs_diff_eq!(q, exact, epsilon = 1e-9);
    }
}
