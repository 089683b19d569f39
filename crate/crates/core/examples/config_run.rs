//! Load a JSON run configuration and run one command, as the binary does.
//!
//! ```text
//! cargo run --example config_run -- path/to/run.json spectrum
//! ```

use std::io;

use squeezetrap::cli::{execute, Command};
use squeezetrap::config::{load_config, RunConfig};

const DEFAULT: &str = r#"{
    "trap": {"c2": -1.0, "b0": 2.0, "kind": "combined"},
    "drive": {"u0": -0.1, "v0": 0.0, "omega": 1.0},
    "particle": {"charge": 1.0, "mass": 1.0},
    "modes": {"k_a": 0.25, "m_a": 1, "l": 1, "m_r": 2},
    "initial_state": {"axial": {"z": [0.2, 0.0]}},
    "integration": {"t1": 2.0},
    "scales": {"dimensionless": true}
}"#;

fn main() {
    let mut args = std::env::args().skip(1);
    let config = match args.next() {
        Some(path) => load_config(path),
        None => RunConfig::parse(DEFAULT),
    };
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let cmd = match args.next().as_deref() {
        Some("equilibria") => Command::Equilibria,
        Some("spectrum") => Command::Spectrum,
        Some("stability") => Command::Stability,
        _ => Command::Simulate,
    };
    let code = execute(cmd, Some(&config), None, &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
