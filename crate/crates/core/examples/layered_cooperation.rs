//! Layered cooperation among decoding relays.
//!
//! With several decoding relays, ordering them into layers (each layer decodes
//! the previous layers' messages and joins the coherent beam) interpolates
//! between fully non-cooperative and fully cooperative operation. This example
//! searches layerings of a three-relay line network.
//!
//! Run with: cargo run --example layered_cooperation

use relaynet::model::{CompressionConfig, GaussianNetwork};
use relaynet::rate::{rate_lmnnc, rate_lmnnc_search};
use relaynet::sets::NodeSet;
use relaynet::Result;

fn main() -> Result<()> {
    // a line: source -> r1 -> r2 -> r3 -> destination, with weak shortcuts
    let net = GaussianNetwork::real(
        3,
        vec![
            vec![3.0, 0.0, 0.1, 0.1],
            vec![0.5, 3.0, 0.0, 0.1],
            vec![0.2, 0.5, 3.0, 0.0],
            vec![0.1, 0.2, 0.5, 3.0],
        ],
        vec![4.0, 4.0, 4.0, 4.0],
    )?;
    let compression = CompressionConfig::uniform(3, 1.0);
    let v = NodeSet::EMPTY; // every relay decodes
    let betas = [0.4, 0.2, 0.2, 0.2];

    println!("three-relay line network, all relays decoding\n");
    let single: Vec<NodeSet> = vec![NodeSet::full(3)];
    let r1 = rate_lmnnc(&net, &inputs_for(&net, &single, &betas)?, &compression, v, &single)?;
    println!("one layer  {{1,2,3}}          : {:.4}", r1.rate);

    let chain: Vec<NodeSet> = (1..=3).map(NodeSet::singleton).collect();
    let r3 = rate_lmnnc(&net, &inputs_for(&net, &chain, &betas)?, &compression, v, &chain)?;
    println!("chain      {{1}},{{2}},{{3}}      : {:.4}", r3.rate);

    let best = rate_lmnnc_search(&net, &compression, v, &betas, 3)?;
    println!(
        "best of all layerings        : {:.4}  via {:?}",
        best.rate,
        best.chosen_layering.as_deref().unwrap_or_default()
    );
    Ok(())
}

fn inputs_for(
    net: &GaussianNetwork,
    layers: &[NodeSet],
    betas: &[f64],
) -> Result<relaynet::model::InputCovariance> {
    use relaynet::model::{
        build_input_covariance_layered, StrategyAssignment, StrategyMode,
    };
    let strat = StrategyAssignment::new(3, NodeSet::EMPTY, StrategyMode::General)?
        .with_layering(layers.to_vec())?;
    build_input_covariance_layered(net, &strat, betas)
}
