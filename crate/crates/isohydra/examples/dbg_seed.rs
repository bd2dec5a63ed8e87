use isohydra::hydrogen::v_eff;
use isohydra::numerics::{differentiate, Grid, ToleranceConfig};
use isohydra::seeds::*;

fn main() {
    let t = ToleranceConfig::default();
    let p = FamilyParams::two_param(3, -10.0, -10.0).unwrap();
    let grid = Grid::log_then_uniform(0.05, 40.0, 48000).unwrap();
    let pair = SeedPair::build(p, &grid, &t).unwrap();
    for (name, phi, eps) in [
        ("phi1", &pair.phi1, -1.0 / 9.0),
        ("phi2", &pair.phi2, -0.25),
    ] {
        let st = differentiate(phi, 2).unwrap();
        let d2 = st.d2.as_ref().unwrap();
        let scale = phi.sup_norm();
        let mut worst = (0.0f64, 0.0f64);
        for i in 4..grid.len() - 4 {
            let r = grid.nodes()[i];
            let res = (d2[i] - (v_eff(3, r) - eps) * phi.values[i]).abs();
            if res > worst.1 { worst = (r, res); }
        }
        println!("{name}: sup={:.3e} worst res {:.3e} at r={:.4} -> normalized {:.3e}",
                 scale, worst.1, worst.0, worst.1/scale);
    }
}
