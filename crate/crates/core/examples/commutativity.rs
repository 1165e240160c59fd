//! Sample points away from the poles and measure commutativity of the
//! matrices F_i = (∂_i∂_j∂_k F) for F4 on and off its relations.

use veelab::catalog::{build_named, Params};
use veelab::prepotential::{commutativity_residual, sample_points, third_derivative_tensor, Kernel};

fn worst(r: f64) -> veelab::error::Result<f64> {
    let cfg = build_named("F4+", &Params::new().with("r", r).with("q", 1.0))?;
    let mut worst = 0.0f64;
    for p in sample_points(&cfg, &Kernel::Trig, 20, 7)? {
        let t = third_derivative_tensor(&cfg, &Kernel::Trig, &p.point)?;
        worst = worst.max(commutativity_residual(&t));
    }
    Ok(worst)
}

fn main() -> veelab::error::Result<()> {
    for r in [-4.0, -2.0, -1.0, 1.0] {
        println!("F4 r = {r:>4}, q = 1: max commutator {:.3e}", worst(r)?);
    }
    Ok(())
}
