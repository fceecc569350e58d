//! Two-relay network: relay 1 decodes (correlated with the source), relay 2
//! compresses independently; the destination either exploits relay 2's
//! description or treats its signal as interference.

use crate::error::{Error, Result};
use crate::gauss::VarLabel;
use crate::model::{CompressionConfig, GaussianNetwork, InputCovariance};
use crate::rate::terms::{EvalCtx, FEAS_TOL};
use crate::rate::RateResult;
use crate::sets::NodeSet;

/// min{ I(X;Y₁|X₁), max{ I(XX₁;Y), min[ I(XX₁;Ŷ₂Y|X₂),
/// I(XX₁X₂;Y) − I(Y₂;Ŷ₂|YXX₁X₂) ] } }. Records whether the
/// description-decodability condition I(X₂;Y|XX₁) ≥ I(Y₂;Ŷ₂|YXX₁X₂) held.
pub fn rate_two_relay(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
) -> Result<RateResult> {
    if network.n_relays() != 2 {
        return Err(Error::config(
            "n_relays",
            format!("two-relay evaluation needs N = 2, got {}", network.n_relays()),
        ));
    }
    if inputs.sigma()[(0, 2)].abs() > 1e-12 || inputs.sigma()[(1, 2)].abs() > 1e-12 {
        return Err(Error::config(
            "inputs",
            "relay 2 must transmit independently of the source and relay 1",
        ));
    }
    let ctx = EvalCtx::new(network, inputs, compression)?;
    let vs = |ls: &[VarLabel]| crate::gauss::VariableSet::new(ls.to_vec()).unwrap();
    let x = VarLabel::X(0);
    let x1 = VarLabel::X(1);
    let x2 = VarLabel::X(2);
    let y1 = VarLabel::Y(1);
    let y2 = VarLabel::Y(2);
    let y = VarLabel::Y(3);
    let yh2 = VarLabel::YHat(2);

    let decode = ctx.mi(&vs(&[x]), &vs(&[y1]), &vs(&[x1]))?;
    let interference = ctx.mi(&vs(&[x, x1]), &vs(&[y]), &vs(&[]))?;
    let cf_a = ctx.mi(&vs(&[x, x1]), &vs(&[yh2, y]), &vs(&[x2]))?;
    let penalty = ctx.mi(&vs(&[y2]), &vs(&[yh2]), &vs(&[y, x, x1, x2]))?;
    let cf_b = ctx.mi(&vs(&[x, x1, x2]), &vs(&[y]), &vs(&[]))? - penalty;
    let cf_branch = cf_a.min(cf_b);
    let dest = interference.max(cf_branch);
    let rate_raw = decode.min(dest);

    let cf_condition =
        ctx.mi(&vs(&[x2]), &vs(&[y]), &vs(&[x, x1]))? - penalty;
    let cf_used = cf_branch > interference;

    Ok(RateResult {
        rate: rate_raw.max(0.0),
        binding_subset: if decode <= dest {
            NodeSet::EMPTY
        } else if cf_used {
            NodeSet::singleton(2)
        } else {
            NodeSet::EMPTY
        },
        chosen_t: if cf_used {
            NodeSet::singleton(2)
        } else {
            NodeSet::EMPTY
        },
        chosen_relay_t: vec![(1, NodeSet::EMPTY)],
        chosen_v: NodeSet::singleton(2),
        chosen_layering: None,
        term_breakdown: vec![
            ("relay_decode".to_string(), decode),
            ("interference".to_string(), interference),
            ("cf_first".to_string(), cf_a),
            ("cf_second".to_string(), cf_b),
            ("cf_condition".to_string(), cf_condition),
        ],
        feasible: cf_condition >= -FEAS_TOL || !cf_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_input_covariance, StrategyAssignment, StrategyMode};

    fn symmetric_net() -> GaussianNetwork {
        GaussianNetwork::real(
            2,
            vec![
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
                vec![1.0, 1.0, 1.0],
            ],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap()
    }

    fn inputs_for(net: &GaussianNetwork, beta0: f64, beta1: f64) -> InputCovariance {
        let strat =
            StrategyAssignment::new(2, NodeSet::singleton(2), StrategyMode::General).unwrap();
        build_input_covariance(net, &strat, &[beta0, beta1]).unwrap()
    }

    #[test]
    fn overly_fine_description_selects_interference_branch() {
        // A too-fine description carries more bits than the relay 2 →
        // destination link supports: the decoding penalty blows up, the
        // compress branch collapses, and the destination falls back to
        // treating relay 2 as interference.
        let net = symmetric_net();
        let inputs = inputs_for(&net, 0.8, 0.8);
        let comp = CompressionConfig::new(vec![1.0, 1e-6]).unwrap();
        let r = rate_two_relay(&net, &inputs, &comp).unwrap();
        let interference = r.term("interference").unwrap();
        let cf = r.term("cf_first").unwrap().min(r.term("cf_second").unwrap());
        assert!(cf < interference, "cf branch {cf} should collapse");
        assert_eq!(r.chosen_t, NodeSet::EMPTY);
        // a coarse description is harmless: the index is decodable for free
        // and relay 2's interference can be stripped
        let coarse = CompressionConfig::new(vec![1.0, 1e6]).unwrap();
        let rc = rate_two_relay(&net, &inputs, &coarse).unwrap();
        assert!(rc.term("cf_condition").unwrap() >= -FEAS_TOL);
        let cfc = rc.term("cf_first").unwrap().min(rc.term("cf_second").unwrap());
        assert!(cfc >= rc.term("interference").unwrap() - 1e-9);
    }

    #[test]
    fn dead_decode_link_gives_zero() {
        let net = GaussianNetwork::real(
            2,
            vec![
                vec![0.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
                vec![1.0, 1.0, 1.0],
            ],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let inputs = inputs_for(&net, 1.0, 1.0);
        let r = rate_two_relay(&net, &inputs, &CompressionConfig::uniform(2, 1.0)).unwrap();
        assert!(r.rate.abs() < 1e-12);
        assert!(r.term("relay_decode").unwrap().abs() < 1e-12);
    }

    #[test]
    fn matches_general_engine_at_independent_inputs() {
        // Zero correlation (all-private splits): the general mixed evaluation
        // with 𝒱 = {2} and relay 1's description disabled agrees.
        let net = symmetric_net();
        let inputs = inputs_for(&net, 1.0, 1.0);
        let comp = CompressionConfig::new(vec![1e12, 1.0]).unwrap();
        let two = rate_two_relay(&net, &inputs, &comp).unwrap();
        let strat =
            StrategyAssignment::new(2, NodeSet::singleton(2), StrategyMode::General).unwrap();
        let general = crate::rate::mnnc::rate_mnnc(&net, &inputs, &comp, &strat).unwrap();
        assert!(
            (two.rate - general.rate).abs() < 1e-6,
            "two-relay {} vs general {}",
            two.rate,
            general.rate
        );
    }
}
