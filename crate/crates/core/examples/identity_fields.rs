//! Identity fields from maximal minors compared with the closed form,
//! then the constant-metric case on the polynomial prepotential.

use veelab::catalog::{build_named, Params, Poly2d};
use veelab::identity_field::{closed_form_identity, identity_for_metric, minor_identity_field, verify_identity_field, CaseTag, ClosedFormCase};
use veelab::geometry::C64;
use veelab::prepotential::{sample_points, third_derivative_tensor, Kernel};

fn main() -> veelab::error::Result<()> {
    let params = Params::new().with("p", -3.0).with("q", 1.0);
    let cfg = build_named("G2+", &params)?;
    let case = ClosedFormCase::new(CaseTag::G2PMinus3Q, "G2+", &params)?;
    for p in sample_points(&cfg, &Kernel::Trig, 3, 7)? {
        let t = third_derivative_tensor(&cfg, &Kernel::Trig, &p.point)?;
        let minors = minor_identity_field(&t, 0)?;
        let closed = closed_form_identity(&case, &p.point)?;
        let gap = minors.e.iter().zip(&closed.e).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        println!(
            "identity residual {:.1e}, minors vs closed {:.1e}, P rank {}",
            verify_identity_field(&t, &minors.e, None)?,
            gap,
            minors.p_rank
        );
    }

    let poly = Poly2d::from_params(&Params::new())?;
    let t = poly.tensor(&[C64::new(0.3, 0.1), C64::new(-0.2, 0.4)]);
    let m = identity_for_metric(&t, &poly.metric_upper(), None, 0)?;
    println!("poly2d: e = ({:.6}, {:.6}), residual {:.1e}", m.e[0].re, m.e[1].re, m.residual);
    Ok(())
}
