//! Mixed decode/compress relaying versus all-compress on a two-relay diamond.
//!
//! One relay sits close to the source (strong decode link) and the other close
//! to the destination. Letting the near relay decode and beam coherently while
//! the far relay compresses beats making both relays compress.
//!
//! Run with: cargo run --example mixed_vs_all_compress

use relaynet::model::{
    build_input_covariance, CompressionConfig, GaussianNetwork, StrategyAssignment, StrategyMode,
};
use relaynet::rate::{cutset_exact_search, rate_mnnc, rate_noncoop};
use relaynet::sets::{enumerate_subsets, NodeSet};
use relaynet::Result;

fn main() -> Result<()> {
    // receivers: relay 1, relay 2, destination; transmitters: source, r1, r2
    let net = GaussianNetwork::real(
        2,
        vec![
            vec![4.0, 0.0, 0.2], // relay 1 hears the source loudly
            vec![0.8, 0.3, 0.0], // relay 2 hears everyone faintly
            vec![1.0, 2.0, 1.5], // destination
        ],
        vec![5.0, 5.0, 5.0],
    )?;
    let compression = CompressionConfig::uniform(2, 1.0);

    println!("two-relay diamond, P = 5 per node\n");
    println!("{:<18} {:>10} {:>12}", "compressing set", "rate", "coop rate");
    let mut best = (f64::NEG_INFINITY, NodeSet::EMPTY);
    let all = NodeSet::full(2);
    for v in enumerate_subsets(all, NodeSet::EMPTY, all)? {
        let strat = StrategyAssignment::new(2, v, StrategyMode::General)?;
        // independent inputs
        let flat = build_input_covariance(&net, &strat, &vec![1.0; 1 + strat.df_set().len()])?;
        let plain = rate_mnnc(&net, &flat, &compression, &strat)?.rate;
        // coherent inputs: decoding relays ride a shared auxiliary
        let mut betas = vec![0.3; 1 + strat.df_set().len()];
        betas[0] = 0.5;
        let coherent = build_input_covariance(&net, &strat, &betas)?;
        let coop = rate_mnnc(&net, &coherent, &compression, &strat)?.rate;
        println!("{:<18} {:>10.4} {:>12.4}", format!("{v:?}"), plain, coop);
        if coop > best.0 {
            best = (coop, v);
        }
    }

    // successive (non-cooperative) decoding never beats joint decoding at the
    // same inputs
    let v = NodeSet::full(2);
    let strat = StrategyAssignment::new(2, v, StrategyMode::General)?;
    let inputs = build_input_covariance(&net, &strat, &[1.0])?;
    let joint = rate_mnnc(&net, &inputs, &compression, &strat)?.rate;
    let successive = rate_noncoop(&net, &inputs, &compression, v)?.rate;
    println!("\nall-compress joint decoding   : {joint:.4}");
    println!("all-compress successive       : {successive:.4}  (never larger)");

    let strat_best = StrategyAssignment::new(2, best.1, StrategyMode::General)?;
    let (bound, _) = cutset_exact_search(&net, &strat_best, 0.05)?;
    println!("\nbest assignment {:?} achieves {:.4}; cut-set bound {:.4}", best.1, best.0, bound);
    Ok(())
}
