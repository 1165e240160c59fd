//! Condition (1) and (2) checks for G2 on and off its relation, plus the
//! alpha-strings they are built from.

use veelab::catalog::{build_named, Params};
use veelab::strings::alpha_strings;
use veelab::vee_check::{condition2_residual, euclidean_vee_residual, trig_vee_residual};

fn main() -> veelab::error::Result<()> {
    let cfg = build_named("G2+", &Params::new().with("p", -3.0).with("q", 1.0))?;
    for s in alpha_strings(&cfg, 0)? {
        println!("string through vector 0: {:?}", s.members);
    }
    for p in [-3.0, -9.0, 1.0] {
        let cfg = build_named("G2+", &Params::new().with("p", p).with("q", 1.0))?;
        let vee = euclidean_vee_residual(&cfg, 1e-10);
        let trig = trig_vee_residual(&cfg, 1e-10);
        println!(
            "p = {p:>4}: vee {:.2e} ({}), trig {:.2e}, condition 2 {:.2e}",
            vee.max_residual,
            if vee.pass { "ok" } else { "fails" },
            trig.max_residual,
            condition2_residual(&cfg)
        );
    }
    Ok(())
}
