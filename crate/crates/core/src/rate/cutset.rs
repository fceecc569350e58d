//! Cut-set upper bounds: the exact max-min form at a concrete input
//! covariance, a β-grid search wrapper, and the relaxed closed-form bound
//! with its additive slack term.

use crate::error::{Error, Result};
use crate::gauss::{assemble_covariance, conditional_mi, VarLabel, VariableSet};
use crate::model::{
    build_input_covariance, CompressionConfig, GaussianNetwork, InputCovariance,
    StrategyAssignment,
};
use crate::sets::{enumerate_subsets, NodeSet};
use nalgebra::DMatrix;

/// min over cuts 𝒮 ⊆ 𝒩 of I(X X_𝒮; Y_{𝒮^c} Y | X_{𝒮^c}) at the given inputs.
pub fn cutset_exact(network: &GaussianNetwork, inputs: &InputCovariance) -> Result<f64> {
    Ok(cutset_exact_detail(network, inputs)?.0)
}

pub fn cutset_exact_detail(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
) -> Result<(f64, NodeSet)> {
    let n = network.n_relays();
    // Descriptions play no role in the cut MI; any valid noise works.
    let cov = assemble_covariance(network, inputs, &CompressionConfig::uniform(n, 1.0))?;
    let all = NodeSet::full(n);
    let mut best = f64::INFINITY;
    let mut arg = NodeSet::EMPTY;
    for s in enumerate_subsets(all, NodeSet::EMPTY, all)? {
        let sc = s.complement_in(all);
        let a: VariableSet = std::iter::once(VarLabel::X(0))
            .chain(s.iter().map(VarLabel::X))
            .collect();
        let b: VariableSet = sc
            .iter()
            .map(VarLabel::Y)
            .chain(std::iter::once(VarLabel::Y(n + 1)))
            .collect();
        let c: VariableSet = sc.iter().map(VarLabel::X).collect();
        let v = conditional_mi(&cov, &a, &b, &c)?;
        if v < best {
            best = v;
            arg = s;
        }
    }
    Ok((best, arg))
}

/// Deterministic maximization of `objective` over per-node fractions in
/// [0,1]^dim: full 0.01 grid for ≤ 2 free parameters, coordinate ascent with
/// fixed restarts above.
pub(crate) fn maximize_over_betas(
    dim: usize,
    step: f64,
    mut objective: impl FnMut(&[f64]) -> Result<f64>,
) -> Result<(f64, Vec<f64>)> {
    let steps = (1.0 / step).round() as usize;
    let grid = |i: usize| i as f64 * step;
    if dim == 0 {
        return Ok((objective(&[])?, Vec::new()));
    }
    if dim <= 2 {
        let mut best = f64::NEG_INFINITY;
        let mut arg = vec![0.0; dim];
        let mut point = vec![0.0; dim];
        if dim == 1 {
            for i in 0..=steps {
                point[0] = grid(i);
                let v = objective(&point)?;
                if v > best {
                    best = v;
                    arg = point.clone();
                }
            }
        } else {
            for i in 0..=steps {
                for j in 0..=steps {
                    point[0] = grid(i);
                    point[1] = grid(j);
                    let v = objective(&point)?;
                    if v > best {
                        best = v;
                        arg = point.clone();
                    }
                }
            }
        }
        return Ok((best, arg));
    }
    // Coordinate ascent from fixed deterministic restarts.
    let restarts: [f64; 5] = [0.5, 0.0, 1.0, 0.25, 0.75];
    let mut best = f64::NEG_INFINITY;
    let mut arg = vec![0.5; dim];
    for &start in &restarts {
        let mut point = vec![start; dim];
        let mut value = objective(&point)?;
        for _sweep in 0..20 {
            let mut improved = false;
            for d in 0..dim {
                let mut local_best = value;
                let mut local_arg = point[d];
                for i in 0..=steps {
                    point[d] = grid(i);
                    let v = objective(&point)?;
                    if v > local_best + 1e-12 {
                        local_best = v;
                        local_arg = point[d];
                    }
                }
                point[d] = local_arg;
                if local_best > value + 1e-12 {
                    value = local_best;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if value > best {
            best = value;
            arg = point;
        }
    }
    Ok((best, arg))
}

/// Exact cut-set bound maximized over the superposition splits implied by the
/// strategy's decoding set (source + each decoding relay).
pub fn cutset_exact_search(
    network: &GaussianNetwork,
    strategy: &StrategyAssignment,
    step: f64,
) -> Result<(f64, Vec<f64>)> {
    let dim = 1 + strategy.df_set().len();
    maximize_over_betas(dim, step, |betas| {
        let inputs = build_input_covariance(network, strategy, betas)?;
        cutset_exact(network, &inputs)
    })
}

/// The relaxed closed-form upper bound for a given compressing set 𝒱:
/// min over 𝒱^c ⊆ 𝒮 ⊆ 𝒩 of
/// ½·log₂|I + ½·G·blkdiag(Σ({0}∪𝒱^c), P·I(𝒮∩𝒱))·Gᵀ|
/// + (1+min{|𝒮^c|,|𝒮|})/2 · log₂(4·max(1,|𝒮∩𝒱|)),
/// maximized over the correlation structure of Σ({0}∪𝒱^c) on a β grid.
pub fn cutset_bound_relaxed(network: &GaussianNetwork, v: NodeSet) -> Result<f64> {
    Ok(cutset_bound_relaxed_detail(network, v)?.0)
}

/// As [`cutset_bound_relaxed`], additionally returning the maximizing grid
/// point (β for the source followed by each node of 𝒱^c in ascending order).
pub fn cutset_bound_relaxed_detail(
    network: &GaussianNetwork,
    v: NodeSet,
) -> Result<(f64, Vec<f64>)> {
    if network.is_complex() {
        return Err(Error::Unsupported(
            "the relaxed cut-set bound is defined for real channels".into(),
        ));
    }
    let n = network.n_relays();
    let all = NodeSet::full(n);
    if !v.is_subset(all) {
        return Err(Error::config("cf_set", format!("{v} exceeds the relay set")));
    }
    let vc = v.complement_in(all);
    let dim = 1 + vc.len();
    maximize_over_betas(dim, 0.01, |betas| relaxed_at_betas(network, v, betas))
}

fn relaxed_at_betas(network: &GaussianNetwork, v: NodeSet, betas: &[f64]) -> Result<f64> {
    let n = network.n_relays();
    let all = NodeSet::full(n);
    let vc = v.complement_in(all);
    // Correlated transmitters {0} ∪ 𝒱^c with pairwise coherent components.
    let coh_nodes: Vec<usize> = std::iter::once(0).chain(vc.iter()).collect();
    let m = coh_nodes.len();
    let mut sigma = DMatrix::<f64>::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let (pa, pb) = (network.power(coh_nodes[a]), network.power(coh_nodes[b]));
            sigma[(a, b)] = if a == b {
                pa
            } else {
                ((1.0 - betas[a]) * (1.0 - betas[b]) * pa * pb).sqrt()
            };
        }
    }

    let mut worst = f64::INFINITY;
    for s in enumerate_subsets(all, vc, all)? {
        let sc = s.complement_in(all);
        let s_cf = s.intersection(v);
        let receivers: Vec<usize> = sc.iter().chain(std::iter::once(n + 1)).collect();
        let transmitters: Vec<usize> = coh_nodes.iter().copied().chain(s_cf.iter()).collect();
        let g = DMatrix::from_fn(receivers.len(), transmitters.len(), |r, t| {
            network.gain(receivers[r], transmitters[t]).re
        });
        let mut block = DMatrix::<f64>::zeros(transmitters.len(), transmitters.len());
        block.view_mut((0, 0), (m, m)).copy_from(&sigma);
        for (i, k) in s_cf.iter().enumerate() {
            block[(m + i, m + i)] = network.power(k);
        }
        let inner = DMatrix::identity(receivers.len(), receivers.len())
            + 0.5 * &g * block * g.transpose();
        let det = inner.determinant();
        if det <= 0.0 {
            return Err(Error::DegenerateCovariance(
                "relaxed bound determinant is not positive".into(),
            ));
        }
        let slack = (1 + sc.len().min(s.len())) as f64 / 2.0
            * (4.0 * 1.0f64.max(s_cf.len() as f64)).log2();
        let value = 0.5 * det.log2() + slack;
        worst = worst.min(value);
    }
    Ok(worst)
}
