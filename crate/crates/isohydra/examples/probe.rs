use isohydra::numerics::adaptive_quad;
fn main() {
    let q = adaptive_quad(|r: f64| r.powi(4) * (-r).exp(), 0.0, 88.0, 1.9e-12).unwrap();
    println!("quad = {:.15e}  (exact ~ 24)", q);
    let q2 = adaptive_quad(|r: f64| r.powi(4) * (-r).exp(), 0.0, 88.0, 1e-8).unwrap();
    println!("quad tol 1e-8 = {:.15e}", q2);
}
