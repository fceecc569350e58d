//! Driving the computations from a JSON configuration, as the `relaynet`
//! binary does: parse → validate → run → CSV artifacts.
//!
//! Run with: cargo run --example config_driven_run

use relaynet::cli::{parse_config, run};
use relaynet::Result;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("relaynet_config_demo");
    std::fs::create_dir_all(&dir)?;

    let rate_doc = format!(
        r#"{{
            "command": "rate",
            "network": {{
                "n_relays": 1,
                "gains": [[[2.0, 0.0], [0.0, 0.0]],
                          [[1.0, 0.0], [1.5, 0.0]]],
                "power": [4.0, 4.0]
            }},
            "sweep": {{ "parameter": "source_power", "grid": [1.0, 4.0, 16.0] }},
            "out": {:?}
        }}"#,
        dir.join("rate.csv")
    );
    let outage_doc = format!(
        r#"{{
            "command": "outage",
            "model": {{ "family": "rayleigh", "p": 1.0, "p1": 1.0 }},
            "outage": {{ "r_grid": [0.5, 1.0, 1.5], "schemes": ["df", "scs_partial", "lower"] }},
            "mc": {{ "samples": 5000, "seed": 1 }},
            "out": {:?}
        }}"#,
        dir.join("outage.csv")
    );

    for doc in [rate_doc, outage_doc] {
        let cfg = parse_config(&doc)?;
        for path in run(&cfg)? {
            println!("=== {} ===", path.display());
            print!("{}", std::fs::read_to_string(&path)?);
            println!();
        }
    }

    // strict parsing: typos fail loudly instead of being ignored
    let bad = r#"{ "command": "rate", "netwrok": {} }"#;
    println!("misspelled block -> {}", parse_config(bad).unwrap_err());
    Ok(())
}
