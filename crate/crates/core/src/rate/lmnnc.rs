//! Layered mixed scheme: decoding relays are organized into an ordered
//! sequence of layers; each relay gets coherent help from the layers above
//! its own, realized through per-layer auxiliaries in the input covariance.

use crate::error::{Error, Result};
use crate::model::{
    build_input_covariance_layered, CompressionConfig, GaussianNetwork, InputCovariance,
    StrategyAssignment, StrategyMode,
};
use crate::rate::terms::{EvalCtx, FEAS_TOL};
use crate::rate::{RateResult, ENUM_CAP};
use crate::sets::{enumerate_ordered_partitions, enumerate_subsets, NodeSet};

/// Rate of the layered scheme at a fixed layering (ordered partition of the
/// decoding set; `layers[0]` is the lowest layer, later layers help earlier
/// ones). `inputs` must carry one auxiliary per layer.
pub fn rate_lmnnc(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    v: NodeSet,
    layering: &[NodeSet],
) -> Result<RateResult> {
    let n = network.n_relays();
    if n > ENUM_CAP {
        return Err(Error::EnumerationCap(format!(
            "{n} relays exceed the exhaustive-search cap of {ENUM_CAP}"
        )));
    }
    let all = NodeSet::full(n);
    let vc = v.complement_in(all);
    let mut cover = NodeSet::EMPTY;
    for l in layering {
        if l.is_empty() {
            return Err(Error::config("layering", "layers must be nonempty"));
        }
        if !cover.intersection(*l).is_empty() {
            return Err(Error::config("layering", "layers must be disjoint"));
        }
        cover = cover.union(*l);
    }
    if cover != vc {
        return Err(Error::config(
            "layering",
            format!("layers cover {cover}, expected the decoding set {vc}"),
        ));
    }
    let expected_aux = if layering.len() <= 1 { 1 } else { layering.len() };
    if !vc.is_empty() && inputs.n_aux() != expected_aux {
        return Err(Error::config(
            "inputs",
            format!(
                "layered inputs carry {} auxiliaries, need {expected_aux}",
                inputs.n_aux()
            ),
        ));
    }
    let ctx = EvalCtx::new(network, inputs, compression)?;

    // Destination side, identical in shape to the partially-cooperative case.
    let mut t_candidates = Vec::new();
    for t in enumerate_subsets(v, NodeSet::EMPTY, v)? {
        let feasible = enumerate_subsets(t, NodeSet::EMPTY, t)?
            .into_iter()
            .map(|s| ctx.q_term_nc(vc, t, s))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|q| q >= -FEAS_TOL);
        if feasible {
            t_candidates.push(t);
        }
    }
    let mut dest_value = f64::NEG_INFINITY;
    let mut chosen_t = NodeSet::EMPTY;
    let mut binding = NodeSet::EMPTY;
    for &t in &t_candidates {
        let mut worst = f64::INFINITY;
        let mut worst_s = NodeSet::EMPTY;
        for s in enumerate_subsets(t, NodeSet::EMPTY, t)? {
            let r = ctx.r_term_nc(vc, t, s)?;
            if r < worst {
                worst = r;
                worst_s = s;
            }
        }
        if worst > dest_value {
            dest_value = worst;
            chosen_t = t;
            binding = worst_s;
        }
    }

    // Relay side: layer-aware first term, feasibility as in the
    // partially-cooperative scheme.
    let mut raw = dest_value;
    let mut breakdown = vec![("dest".to_string(), dest_value)];
    let mut chosen_relay_t = Vec::new();
    for (t_idx, layer) in layering.iter().enumerate() {
        for k in layer.iter() {
            let scope = v.without(k);
            let mut best_k = f64::NEG_INFINITY;
            let mut best_tk = NodeSet::EMPTY;
            let mut best_s = NodeSet::EMPTY;
            for tk in enumerate_subsets(scope, NodeSet::EMPTY, scope)? {
                let feasible = enumerate_subsets(tk, NodeSet::EMPTY, tk)?
                    .into_iter()
                    .map(|s| ctx.q_term_relay_pc(vc, k, tk, s))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|q| q >= -FEAS_TOL);
                if !feasible {
                    continue;
                }
                let mut worst = f64::INFINITY;
                let mut worst_s = NodeSet::EMPTY;
                for s in enumerate_subsets(tk, NodeSet::EMPTY, tk)? {
                    let r = ctx.relay_term_layered(layering, t_idx, k, tk, s)?;
                    if r < worst {
                        worst = r;
                        worst_s = s;
                    }
                }
                if worst > best_k {
                    best_k = worst;
                    best_tk = tk;
                    best_s = worst_s;
                }
            }
            breakdown.push((format!("relay_{k}"), best_k));
            chosen_relay_t.push((k, best_tk));
            if best_k < raw {
                raw = best_k;
                binding = best_s;
            }
        }
    }
    if raw < 0.0 {
        breakdown.push(("raw_min".to_string(), raw));
    }
    Ok(RateResult {
        rate: raw.max(0.0),
        binding_subset: binding,
        chosen_t,
        chosen_relay_t,
        chosen_v: v,
        chosen_layering: Some(layering.to_vec()),
        term_breakdown: breakdown,
        feasible: true,
    })
}

/// Maximizes the layered rate over every ordered partition of the decoding
/// set with at most `max_layers` layers, rebuilding the layered input
/// covariance for each candidate.
pub fn rate_lmnnc_search(
    network: &GaussianNetwork,
    compression: &CompressionConfig,
    v: NodeSet,
    betas: &[f64],
    max_layers: usize,
) -> Result<RateResult> {
    let n = network.n_relays();
    let vc = v.complement_in(NodeSet::full(n));
    let mut best: Option<RateResult> = None;
    for layering in enumerate_ordered_partitions(vc, max_layers)? {
        let strat = StrategyAssignment::new(n, v, StrategyMode::General)?;
        let strat = if layering.is_empty() {
            strat
        } else {
            strat.with_layering(layering.clone())?
        };
        let inputs = build_input_covariance_layered(network, &strat, betas)?;
        let r = rate_lmnnc(network, &inputs, compression, v, &layering)?;
        if best.as_ref().map_or(true, |b| r.rate > b.rate) {
            best = Some(r);
        }
    }
    best.ok_or_else(|| Error::Infeasible("no admissible layering".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_input_covariance;
    use crate::rate::mnnc::rate_mnnc;
    use crate::rate::testutil::random_net;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_layer_equals_partially_cooperative() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..10 {
            let net = random_net(&mut rng, 2);
            let v = NodeSet::singleton(2);
            let vc = NodeSet::singleton(1);
            let strat =
                StrategyAssignment::new(2, v, StrategyMode::PartiallyCooperative).unwrap();
            let betas = [0.6, 0.3];
            let inputs = build_input_covariance(&net, &strat, &betas).unwrap();
            let comp = CompressionConfig::uniform(2, 1.0);
            let pc = rate_mnnc(&net, &inputs, &comp, &strat).unwrap();
            let layered = rate_lmnnc(&net, &inputs, &comp, v, &[vc]).unwrap();
            assert!(
                (pc.rate - layered.rate).abs() < 1e-9,
                "pc {} vs single-layer {}",
                pc.rate,
                layered.rate
            );
        }
    }

    #[test]
    fn no_decode_relays_equals_nnc() {
        let mut rng = ChaCha8Rng::seed_from_u64(103);
        for _ in 0..5 {
            let net = random_net(&mut rng, 2);
            let v = NodeSet::full(2);
            let strat = StrategyAssignment::new(2, v, StrategyMode::General).unwrap();
            let inputs = build_input_covariance(&net, &strat, &[1.0]).unwrap();
            let comp = CompressionConfig::uniform(2, 1.0);
            let layered = rate_lmnnc(&net, &inputs, &comp, v, &[]).unwrap();
            let nnc = crate::rate::nnc::rate_nnc(&net, &inputs, &comp).unwrap();
            assert!(
                (layered.rate - nnc.rate).abs() < 1e-9,
                "layered {} vs nnc {}",
                layered.rate,
                nnc.rate
            );
        }
    }

    #[test]
    fn line_network_prefers_strong_relay_in_higher_layer() {
        // source → relay 1 strong, relay 1 → relay 2 strong, source → relay 2
        // weak: relay 1 should sit in the higher (helping) layer.
        let net = GaussianNetwork::real(
            2,
            vec![
                vec![4.0, 0.0, 0.1],
                vec![0.3, 4.0, 0.0],
                vec![0.3, 0.5, 1.0],
            ],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let comp = CompressionConfig::uniform(2, 1.0);
        let v = NodeSet::EMPTY;
        let betas = [0.5, 0.5, 0.5];
        let value = |layers: &[NodeSet]| -> f64 {
            let strat = StrategyAssignment::new(2, v, StrategyMode::General)
                .unwrap()
                .with_layering(layers.to_vec())
                .unwrap();
            let inputs = build_input_covariance_layered(&net, &strat, &betas).unwrap();
            rate_lmnnc(&net, &inputs, &comp, v, layers).unwrap().rate
        };
        let strong_high = value(&[NodeSet::singleton(2), NodeSet::singleton(1)]);
        let strong_low = value(&[NodeSet::singleton(1), NodeSet::singleton(2)]);
        assert!(
            strong_high >= strong_low - 1e-9,
            "helping order {strong_high} < reversed {strong_low}"
        );
        // and the exhaustive search returns the better of all orderings
        let search = rate_lmnnc_search(&net, &comp, v, &betas, 2).unwrap();
        assert!(search.rate >= strong_high - 1e-9);
    }
}
