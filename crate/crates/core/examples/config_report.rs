//! Load a configuration from JSON text and run the default checks on it.

use veelab::cli::{parse_config_str, run_check, RunConfig, Verb};

// BC2 with q = s = 1, r = -8
const BC2: &str = r#"{
  "dim": 2,
  "vectors": [["1", "0"], ["0", "1"], ["2", "0"], ["0", "2"], ["1", "1"], ["1", "-1"]],
  "multiplicities": [-8, -8, 1, 1, 1, 1]
}"#;

fn main() -> veelab::error::Result<()> {
    let cfg = parse_config_str(BC2, "bc2.json")?;
    println!("parsed {} vectors ({:?} mode)", cfg.len(), cfg.mode());

    let dir = std::env::temp_dir().join("veelab-example");
    std::fs::create_dir_all(&dir).map_err(|e| veelab::error::Error::Io(e.to_string()))?;
    let path = dir.join("bc2.json");
    std::fs::write(&path, BC2).map_err(|e| veelab::error::Error::Io(e.to_string()))?;

    let report = run_check(&RunConfig::new(Verb::Check, path.to_string_lossy()))?;
    print!("{}", report.human());
    println!("exit code {}", report.verdict.exit_code());
    let json = report.to_json();
    println!("JSON report: {} bytes, {} sampled points", json.len(), report.points.len());
    Ok(())
}
