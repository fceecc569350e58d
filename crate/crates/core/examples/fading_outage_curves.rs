//! Outage probability versus coding rate on the Rayleigh-fading relay channel.
//!
//! Compares pure decode-forward, pure compress-forward (with and without full
//! channel knowledge at the relay), the selective strategy that switches
//! between them on a decode-region threshold, and the information-theoretic
//! floor from the per-draw cut-set bound.
//!
//! Run with: cargo run --release --example fading_outage_curves

use relaynet::mc::MonteCarloConfig;
use relaynet::outage::{curve_error_vs_rate, CompositeModel};
use relaynet::Result;

fn main() -> Result<()> {
    let model = CompositeModel::rayleigh(1.0, 1.0)?;
    let cfg = MonteCarloConfig::new(40_000, 2024)?;
    let rates: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
    let rows = curve_error_vs_rate(&model, &rates, &cfg)?;

    println!("P = P1 = 1, unit Rayleigh fading, {} samples\n", cfg.samples);
    println!(
        "{:>5} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
        "r", "floor", "DF", "CF", "CF*", "SCS", "SCS*"
    );
    for row in &rows {
        println!(
            "{:>5.1} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            row.r,
            row.lower.p_hat,
            row.df.p_hat,
            row.cf_partial.p_hat,
            row.cf_full.p_hat,
            row.scs_partial.p_hat,
            row.scs_full.p_hat,
        );
    }
    println!("\n(* = relay adapts its compression noise to the full channel state)");
    println!("The selective strategy is never worse than the better pure scheme,");
    println!("and full channel knowledge closes part of the gap to the floor.");
    Ok(())
}
