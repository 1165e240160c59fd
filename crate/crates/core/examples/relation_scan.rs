//! Locate the relations of G2 by scanning p, then refine a BCn point onto
//! its relation line with Newton.

use veelab::catalog::Params;
use veelab::solver::{newton_refine, relation_scan};

fn main() -> veelab::error::Result<()> {
    let scan = relation_scan("G2+", &Params::new().with("q", 1.0), "p", (-10.0, -1.0), 33)?;
    for root in &scan.roots {
        println!("p = {:.12} (residual {:.1e}, {:?})", root.value, root.residual, root.method);
    }

    let fixed = Params::new().with("n", 3.0).with("q", 1.0);
    let out = newton_refine("BCn", &fixed, &["r", "s"], &[-7.5, 0.7])?;
    println!("BC3: r = {:.10}, s = {:.10} after {} steps", out.values[0], out.values[1], out.iterations);
    Ok(())
}
