//! Restrict F4 to the intersection of mirrors and compare the projected
//! system with a known one up to rescaling.

use veelab::catalog::{build_named, Params};
use veelab::geometry::Vector;
use veelab::restriction::{gram_equivalent, restrict, restricted_commutativity, subsystem};

fn main() -> veelab::error::Result<()> {
    let (r, q) = (-2.0, 1.0);
    let f4 = build_named("F4+", &Params::new().with("r", r).with("q", q))?;
    let b = subsystem(&f4, &[Vector::from_ints(&[0, 0, 1, 0]), Vector::from_ints(&[0, 0, 0, 1])])?;
    let frame = restrict(&f4, &b)?;
    println!("subsystem of {} vectors, restricted to dimension {}", b.len(), frame.dim());
    for (v, m) in frame.projected.vectors().iter().zip(frame.projected.multiplicities()) {
        println!("  {v}  mult {m}");
    }

    let bc2 = build_named("BCn", &Params::new().with("n", 2.0).with("r", 4.0 * r).with("q", r + 4.0 * q).with("s", q))?;
    match gram_equivalent(&frame.projected, &bc2, true, 1e-10) {
        Some(m) => println!("matches deformed BC2 with scale {}", m.scale),
        None => println!("no match"),
    }

    let report = restricted_commutativity(&f4, &b, 20, 7, 1e-8)?;
    print!("{}", report.human());
    Ok(())
}
