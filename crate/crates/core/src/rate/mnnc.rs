//! Mixed decode-/compress-forward rate evaluation with exhaustive subset
//! search, plus the non-cooperative variant.

use crate::error::{Error, Result};
use crate::model::{CompressionConfig, GaussianNetwork, InputCovariance, StrategyAssignment,
                   StrategyMode};
use crate::rate::terms::{EvalCtx, FEAS_TOL};
use crate::rate::{RateResult, ENUM_CAP};
use crate::sets::{enumerate_subsets, NodeSet};

fn check_cap(n: usize) -> Result<()> {
    if n > ENUM_CAP {
        return Err(Error::EnumerationCap(format!(
            "{n} relays exceed the exhaustive-search cap of {ENUM_CAP}"
        )));
    }
    Ok(())
}

/// Minimum of `term` over the subsets `lower ⊆ 𝒮 ⊆ upper`, with the
/// lexicographically smallest minimizer.
fn min_over(
    lower: NodeSet,
    upper: NodeSet,
    mut term: impl FnMut(NodeSet) -> Result<f64>,
) -> Result<(f64, NodeSet)> {
    let mut best = f64::INFINITY;
    let mut arg = lower;
    for s in enumerate_subsets(upper, lower, upper)? {
        let v = term(s)?;
        if v < best {
            best = v;
            arg = s;
        }
    }
    Ok((best, arg))
}

fn all_feasible(
    t: NodeSet,
    mut q: impl FnMut(NodeSet) -> Result<f64>,
) -> Result<std::result::Result<(), (NodeSet, f64)>> {
    for s in enumerate_subsets(t, NodeSet::EMPTY, t)? {
        let v = q(s)?;
        if v < -FEAS_TOL {
            return Ok(Err((s, v)));
        }
    }
    Ok(Ok(()))
}

struct SideOutcome {
    value: f64,
    chosen: NodeSet,
    binding: NodeSet,
}

/// Best destination value: max over candidate 𝒯 of the min over 𝒮.
fn best_side(
    candidates: &[NodeSet],
    mut lower_of: impl FnMut(NodeSet) -> NodeSet,
    mut term: impl FnMut(NodeSet, NodeSet) -> Result<f64>,
) -> Result<SideOutcome> {
    let mut out = SideOutcome {
        value: f64::NEG_INFINITY,
        chosen: NodeSet::EMPTY,
        binding: NodeSet::EMPTY,
    };
    for &t in candidates {
        let (v, s) = min_over(lower_of(t), t, |s| term(t, s))?;
        if v > out.value {
            out.value = v;
            out.chosen = t;
            out.binding = s;
        }
    }
    Ok(out)
}

/// Achievable rate of the mixed scheme for the given strategy. The
/// destination set 𝒯 and relay sets 𝒯_k are searched when not fixed; fixed
/// sets are feasibility-checked and rejected with the violating pair.
pub fn rate_mnnc(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    strategy: &StrategyAssignment,
) -> Result<RateResult> {
    match strategy.mode() {
        StrategyMode::General | StrategyMode::FullyCooperative => {
            rate_general(network, inputs, compression, strategy)
        }
        StrategyMode::PartiallyCooperative => {
            rate_partially_cooperative(network, inputs, compression, strategy)
        }
        StrategyMode::NonCooperative => {
            rate_noncoop(network, inputs, compression, strategy.cf_set())
        }
        StrategyMode::ForwardDecoding => {
            crate::rate::nnc::rate_fd_nnc(network, inputs, compression)
        }
    }
}

fn rate_general(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    strategy: &StrategyAssignment,
) -> Result<RateResult> {
    let n = network.n_relays();
    check_cap(n)?;
    let ctx = EvalCtx::new(network, inputs, compression)?;
    let all = NodeSet::full(n);
    let vc = strategy.df_set();
    let fully = strategy.mode() == StrategyMode::FullyCooperative;

    // Destination side. The search may range over every 𝒯 ⊇ 𝒱^c (so the
    // 𝒮-range is nonempty); a fixed 𝒯 must additionally be admissible.
    let fixed_t = if fully {
        Some(all)
    } else {
        strategy.dest_decode()
    };
    let t_candidates: Vec<NodeSet> = match fixed_t {
        Some(t) => {
            if !vc.is_subset(t) {
                return Err(Error::config(
                    "dest_decode",
                    format!("{t} must contain every decoding relay in {vc}"),
                ));
            }
            if let Err((s, q)) = all_feasible(t, |s| ctx.q_term(t, s))? {
                return Err(Error::Infeasible(format!(
                    "destination set {t}: feasibility value {q:.6} < 0 at subset {s}"
                )));
            }
            vec![t]
        }
        None => enumerate_subsets(all, vc, all)?,
    };
    let dest = best_side(&t_candidates, |_| vc, |t, s| ctx.r_term(t, s))?;

    // Relay side: each decoding relay k maximizes over admissible 𝒯_k.
    let mut relay_outcomes: Vec<(usize, SideOutcome)> = Vec::new();
    for k in vc.iter() {
        let others = all.without(k);
        let fixed_tk = if fully {
            Some(others)
        } else {
            strategy.relay_decode(k)
        };
        let candidates: Vec<NodeSet> = match fixed_tk {
            Some(tk) => {
                if let Err((s, q)) = all_feasible(tk, |s| ctx.q_term_relay(k, tk, s))? {
                    return Err(Error::Infeasible(format!(
                        "relay {k} set {tk}: feasibility value {q:.6} < 0 at subset {s}"
                    )));
                }
                vec![tk]
            }
            None => {
                let mut ok = Vec::new();
                for tk in enumerate_subsets(others, NodeSet::EMPTY, others)? {
                    if all_feasible(tk, |s| ctx.q_term_relay(k, tk, s))?.is_ok() {
                        ok.push(tk);
                    }
                }
                ok
            }
        };
        let outcome = best_side(&candidates, |_| NodeSet::EMPTY, |tk, s| {
            ctx.relay_term(k, tk, s)
        })?;
        relay_outcomes.push((k, outcome));
    }

    Ok(assemble_result(
        strategy.cf_set(),
        dest,
        relay_outcomes,
        None,
    ))
}

fn rate_partially_cooperative(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    strategy: &StrategyAssignment,
) -> Result<RateResult> {
    let n = network.n_relays();
    check_cap(n)?;
    let ctx = EvalCtx::new(network, inputs, compression)?;
    let v = strategy.cf_set();
    let vc = strategy.df_set();

    let t_candidates: Vec<NodeSet> = match strategy.dest_decode() {
        Some(t) => {
            if let Err((s, q)) = all_feasible(t, |s| ctx.q_term_nc(vc, t, s))? {
                return Err(Error::Infeasible(format!(
                    "destination set {t}: feasibility value {q:.6} < 0 at subset {s}"
                )));
            }
            vec![t]
        }
        None => {
            let mut ok = Vec::new();
            for t in enumerate_subsets(v, NodeSet::EMPTY, v)? {
                if all_feasible(t, |s| ctx.q_term_nc(vc, t, s))?.is_ok() {
                    ok.push(t);
                }
            }
            ok
        }
    };
    let dest = best_side(&t_candidates, |_| NodeSet::EMPTY, |t, s| {
        ctx.r_term_nc(vc, t, s)
    })?;

    let mut relay_outcomes = Vec::new();
    for k in vc.iter() {
        let candidates: Vec<NodeSet> = match strategy.relay_decode(k) {
            Some(tk) => {
                if let Err((s, q)) = all_feasible(tk, |s| ctx.q_term_relay_pc(vc, k, tk, s))? {
                    return Err(Error::Infeasible(format!(
                        "relay {k} set {tk}: feasibility value {q:.6} < 0 at subset {s}"
                    )));
                }
                vec![tk]
            }
            None => {
                let scope = v.without(k);
                let mut ok = Vec::new();
                for tk in enumerate_subsets(scope, NodeSet::EMPTY, scope)? {
                    if all_feasible(tk, |s| ctx.q_term_relay_pc(vc, k, tk, s))?.is_ok() {
                        ok.push(tk);
                    }
                }
                ok
            }
        };
        let outcome = best_side(&candidates, |_| NodeSet::EMPTY, |tk, s| {
            ctx.relay_term_pc(vc, k, tk, s)
        })?;
        relay_outcomes.push((k, outcome));
    }

    Ok(assemble_result(v, dest, relay_outcomes, None))
}

/// Rate of the scheme where decoding relays work stand-alone (no description
/// exchange); the empty decoding set yields the +∞ convention.
pub fn rate_noncoop(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    v: NodeSet,
) -> Result<RateResult> {
    let n = network.n_relays();
    check_cap(n)?;
    if !v.is_subset(NodeSet::full(n)) {
        return Err(Error::config("cf_set", format!("{v} exceeds the relay set")));
    }
    let ctx = EvalCtx::new(network, inputs, compression)?;
    let vc = v.complement_in(NodeSet::full(n));

    let mut t_candidates = Vec::new();
    for t in enumerate_subsets(v, NodeSet::EMPTY, v)? {
        if all_feasible(t, |s| ctx.q_term_nc(vc, t, s))?.is_ok() {
            t_candidates.push(t);
        }
    }
    let dest = best_side(&t_candidates, |_| NodeSet::EMPTY, |t, s| {
        ctx.r_term_nc(vc, t, s)
    })?;

    let mut relay_outcomes = Vec::new();
    for i in vc.iter() {
        let value = ctx.df_decode(vc, i)?;
        relay_outcomes.push((
            i,
            SideOutcome {
                value,
                chosen: NodeSet::EMPTY,
                binding: NodeSet::EMPTY,
            },
        ));
    }

    Ok(assemble_result(v, dest, relay_outcomes, None))
}

fn assemble_result(
    v: NodeSet,
    dest: SideOutcome,
    relays: Vec<(usize, SideOutcome)>,
    layering: Option<Vec<NodeSet>>,
) -> RateResult {
    let mut raw = dest.value;
    let mut binding = dest.binding;
    let mut breakdown = vec![("dest".to_string(), dest.value)];
    for (k, o) in &relays {
        breakdown.push((format!("relay_{k}"), o.value));
        if o.value < raw {
            raw = o.value;
            binding = o.binding;
        }
    }
    if raw < 0.0 {
        breakdown.push(("raw_min".to_string(), raw));
    }
    RateResult {
        rate: raw.max(0.0),
        binding_subset: binding,
        chosen_t: dest.chosen,
        chosen_relay_t: relays.iter().map(|(k, o)| (*k, o.chosen)).collect(),
        chosen_v: v,
        chosen_layering: layering,
        term_breakdown: breakdown,
        feasible: true,
    }
}
