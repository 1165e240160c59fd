//! Walk the built-in catalog and build each family at a sample point.

use veelab::catalog::{build_named, list_catalog, Params};

fn main() -> veelab::error::Result<()> {
    for entry in list_catalog() {
        let dim = entry.dim.map_or("n".to_string(), |d| d.to_string());
        println!("{:<8} dim {dim:<2} {}", entry.name, entry.summary);
        for rel in &entry.relations {
            println!("         relation: {}", rel.text);
        }
    }

    let cfg = build_named("BCn", &Params::new().with("n", 3.0).with("r", -10.0).with("q", 1.0).with("s", 1.0))?;
    println!("\nBC3 has {} vectors in dimension {}:", cfg.len(), cfg.dim());
    for (v, m) in cfg.vectors().iter().zip(cfg.multiplicities()) {
        println!("  {v}  mult {m}");
    }
    Ok(())
}
