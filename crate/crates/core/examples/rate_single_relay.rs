//! Achievable rates on the classic three-node relay channel.
//!
//! Compares decode-forward (with the β power split optimized), compress-forward
//! through the general engine, and the cut-set upper bound as the relay
//! position trades off the source-relay against the relay-destination link.
//!
//! Run with: cargo run --example rate_single_relay

use relaynet::model::{
    build_input_covariance, CompressionConfig, GaussianNetwork, StrategyAssignment, StrategyMode,
};
use relaynet::rate::{cb_single_opt, rate_df_single_opt, rate_mnnc};
use relaynet::sets::NodeSet;
use relaynet::Result;

fn main() -> Result<()> {
    let p = 10.0;
    println!("single relay, P = {p}, unit noise");
    println!("{:>6} {:>6} {:>10} {:>10} {:>10}", "g2", "g3", "DF", "CF", "cut-set");
    // g1 = 1 direct link; sweep the relay between source (large g2) and
    // destination (large g3)
    for (g2, g3) in [(4.0, 0.5), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.5, 4.0)] {
        let df = rate_df_single_opt(1.0, g2, g3, p, 1.0)?;
        let cb = cb_single_opt(1.0, g2, g3, p, 1.0)?;

        // compress-forward: relay 1 compresses, independent inputs
        let net = GaussianNetwork::real(
            1,
            vec![vec![g2, 0.0], vec![1.0, g3]],
            vec![p, p],
        )?;
        let strat = StrategyAssignment::new(1, NodeSet::full(1), StrategyMode::General)?;
        let inputs = build_input_covariance(&net, &strat, &[1.0])?;
        let mut best_cf = 0.0f64;
        for i in 0..40 {
            let nhat = 10f64.powf(-1.5 + 3.0 * i as f64 / 39.0);
            let r = rate_mnnc(&net, &inputs, &CompressionConfig::new(vec![nhat])?, &strat)?;
            best_cf = best_cf.max(r.rate);
        }
        println!("{g2:>6.1} {g3:>6.1} {df:>10.4} {best_cf:>10.4} {cb:>10.4}");
    }
    println!();
    println!("DF wins near the source, CF wins near the destination,");
    println!("and neither exceeds the cut-set bound.");
    Ok(())
}
