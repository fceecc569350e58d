//! Mutual-information building blocks of the rate expressions.
//!
//! All terms are evaluated on one assembled joint covariance. Conventions:
//! X is the source input, Y the destination output, Ŷ_k relay k's description,
//! V the shared superposition auxiliary (absent for explicit input
//! covariances). Empty index sets contribute empty variable sets, and an MI
//! with an empty side is 0.

use crate::error::{Error, Result};
use crate::gauss::{assemble_covariance, conditional_mi, JointCovariance, VarLabel, VariableSet};
use crate::model::{CompressionConfig, GaussianNetwork, InputCovariance, StrategyAssignment};
use crate::sets::NodeSet;

/// Feasibility tolerance: a constraint value down to −1e-9 still counts as
/// satisfied (log-det roundoff).
pub const FEAS_TOL: f64 = 1e-9;

/// Pre-assembled covariance plus cached label sets.
pub struct EvalCtx {
    cov: JointCovariance,
    n: usize,
    aux: VariableSet,
}

fn labels(set: NodeSet, f: impl Fn(usize) -> VarLabel) -> VariableSet {
    set.iter().map(f).collect()
}

impl EvalCtx {
    pub fn new(
        network: &GaussianNetwork,
        inputs: &InputCovariance,
        compression: &CompressionConfig,
    ) -> Result<Self> {
        let cov = assemble_covariance(network, inputs, compression)?;
        let aux = (1..=inputs.n_aux()).map(VarLabel::Aux).collect();
        Ok(EvalCtx {
            cov,
            n: network.n_relays(),
            aux,
        })
    }

    pub fn cov(&self) -> &JointCovariance {
        &self.cov
    }

    pub fn n_relays(&self) -> usize {
        self.n
    }

    fn x0(&self) -> VariableSet {
        VariableSet::new(vec![VarLabel::X(0)]).unwrap()
    }

    fn y_dest(&self) -> VariableSet {
        VariableSet::new(vec![VarLabel::Y(self.n + 1)]).unwrap()
    }

    fn xs(&self, s: NodeSet) -> VariableSet {
        labels(s, VarLabel::X)
    }

    fn ys(&self, s: NodeSet) -> VariableSet {
        labels(s, VarLabel::Y)
    }

    fn yhats(&self, s: NodeSet) -> VariableSet {
        labels(s, VarLabel::YHat)
    }

    fn one(&self, l: VarLabel) -> VariableSet {
        VariableSet::new(vec![l]).unwrap()
    }

    /// All auxiliaries (the shared V, or every layer auxiliary).
    fn v_all(&self) -> VariableSet {
        self.aux.clone()
    }

    pub fn mi(&self, a: &VariableSet, b: &VariableSet, c: &VariableSet) -> Result<f64> {
        conditional_mi(&self.cov, a, b, c)
    }

    /// Destination term: I(X X_𝒮; Ŷ_{𝒮^c} Y | X_{𝒮^c}) −
    /// I(Ŷ_𝒮; Y_𝒮 | X X_𝒯 Ŷ_{𝒮^c} Y), with 𝒮^c = 𝒯 − 𝒮.
    pub fn r_term(&self, t: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, t)?;
        let sc = t.difference(s);
        let first = self.mi(
            &self.x0().union(&self.xs(s)),
            &self.yhats(sc).union(&self.y_dest()),
            &self.xs(sc),
        )?;
        let second = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self
                .x0()
                .union(&self.xs(t))
                .union(&self.yhats(sc))
                .union(&self.y_dest()),
        )?;
        Ok(first - second)
    }

    /// Destination feasibility value Q_𝒯(𝒮) = I(X_𝒮; Ŷ_{𝒮^c} Y | V X X_{𝒮^c})
    /// − I(Ŷ_𝒮; Y_𝒮 | V X X_𝒯 Ŷ_{𝒮^c} Y).
    pub fn q_term(&self, t: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, t)?;
        let sc = t.difference(s);
        let vx = self.v_all().union(&self.x0());
        let first = self.mi(
            &self.xs(s),
            &self.yhats(sc).union(&self.y_dest()),
            &vx.union(&self.xs(sc)),
        )?;
        let second = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &vx.union(&self.xs(t))
                .union(&self.yhats(sc))
                .union(&self.y_dest()),
        )?;
        Ok(first - second)
    }

    /// Decoding-relay term R^(k)_{𝒯_k}(𝒮) = I(X; Ŷ_{𝒯_k} Y_k | V X_k X_{𝒯_k})
    /// + I(X_𝒮; Y_k | V X_k X_{𝒮^c}) − I(Ŷ_𝒮; Y_𝒮 | V X_k X_{𝒯_k} Ŷ_{𝒮^c} Y_k),
    /// with 𝒮^c = 𝒯_k − 𝒮.
    pub fn relay_term(&self, k: usize, tk: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, tk)?;
        if tk.contains(k) {
            return Err(Error::InvalidParameter(format!(
                "decoding set of relay {k} contains itself"
            )));
        }
        let sc = tk.difference(s);
        let yk = self.one(VarLabel::Y(k));
        let vxk = self.v_all().union(&self.one(VarLabel::X(k)));
        let first = self.mi(
            &self.x0(),
            &self.yhats(tk).union(&yk),
            &vxk.union(&self.xs(tk)),
        )?;
        let second = self.mi(&self.xs(s), &yk, &vxk.union(&self.xs(sc)))?;
        let third = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &vxk.union(&self.xs(tk)).union(&self.yhats(sc)).union(&yk),
        )?;
        Ok(first + second - third)
    }

    /// Relay feasibility value Q^(k)_𝒯(𝒮) = I(X_𝒮; Y_k | V X_k X_{𝒮^c}) −
    /// I(Ŷ_𝒮; Y_𝒮 | V X X_k X_𝒯 Ŷ_{𝒮^c} Y_k).
    pub fn q_term_relay(&self, k: usize, tk: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, tk)?;
        let sc = tk.difference(s);
        let yk = self.one(VarLabel::Y(k));
        let first = self.mi(
            &self.xs(s),
            &yk,
            &self
                .v_all()
                .union(&self.one(VarLabel::X(k)))
                .union(&self.xs(sc)),
        )?;
        let second = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self
                .v_all()
                .union(&self.x0())
                .union(&self.one(VarLabel::X(k)))
                .union(&self.xs(tk))
                .union(&self.yhats(sc))
                .union(&yk),
        )?;
        Ok(first - second)
    }

    /// Destination term when decoding relays act without description exchange:
    /// I(X X_{𝒱^c} X_𝒮; Ŷ_{𝒮^c} Y | X_{𝒮^c}) −
    /// I(Y_𝒮; Ŷ_𝒮 | X X_{𝒯∪𝒱^c} Ŷ_{𝒮^c} Y); 𝒮 ⊆ 𝒯 ⊆ 𝒱.
    pub fn r_term_nc(&self, vc: NodeSet, t: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, t)?;
        let sc = t.difference(s);
        let first = self.mi(
            &self.x0().union(&self.xs(vc)).union(&self.xs(s)),
            &self.yhats(sc).union(&self.y_dest()),
            &self.xs(sc),
        )?;
        let second = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self
                .x0()
                .union(&self.xs(t.union(vc)))
                .union(&self.yhats(sc))
                .union(&self.y_dest()),
        )?;
        Ok(first - second)
    }

    /// Feasibility value for the non-/partially-cooperative destination:
    /// I(X_𝒮; Ŷ_{𝒮^c} Y | X X_{𝒮^c ∪ 𝒱^c}) −
    /// I(Y_𝒮; Ŷ_𝒮 | X X_{𝒯∪𝒱^c} Ŷ_{𝒮^c} Y).
    pub fn q_term_nc(&self, vc: NodeSet, t: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, t)?;
        let sc = t.difference(s);
        let first = self.mi(
            &self.xs(s),
            &self.yhats(sc).union(&self.y_dest()),
            &self.x0().union(&self.xs(sc.union(vc))),
        )?;
        let second = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self
                .x0()
                .union(&self.xs(t.union(vc)))
                .union(&self.yhats(sc))
                .union(&self.y_dest()),
        )?;
        Ok(first - second)
    }

    /// Stand-alone decode constraint of relay i: I(X; Y_i | X_{𝒱^c}).
    pub fn df_decode(&self, vc: NodeSet, i: usize) -> Result<f64> {
        self.mi(&self.x0(), &self.one(VarLabel::Y(i)), &self.xs(vc))
    }

    /// Partially-cooperative relay term: I(X; Ŷ_{𝒯_k} Y_k | X_{𝒱^c} X_{𝒯_k})
    /// + I(X_𝒮; Y_k | X_{𝒱^c ∪ 𝒮^c}) − I(Ŷ_𝒮; Y_𝒮 | X_{𝒱^c ∪ 𝒯_k} Ŷ_{𝒮^c} Y_k);
    /// 𝒮 ⊆ 𝒯_k ⊆ 𝒱.
    pub fn relay_term_pc(&self, vc: NodeSet, k: usize, tk: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, tk)?;
        let sc = tk.difference(s);
        let yk = self.one(VarLabel::Y(k));
        let first = self.mi(
            &self.x0(),
            &self.yhats(tk).union(&yk),
            &self.xs(vc.union(tk)),
        )?;
        let second = self.mi(&self.xs(s), &yk, &self.xs(vc.union(sc)))?;
        let third = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self.xs(vc.union(tk)).union(&self.yhats(sc)).union(&yk),
        )?;
        Ok(first + second - third)
    }

    /// Partially-cooperative relay feasibility: I(X_𝒮; Y_k | X_{𝒱^c ∪ 𝒮^c}) −
    /// I(Ŷ_𝒮; Y_𝒮 | X X_{𝒱^c ∪ 𝒯_k} Ŷ_{𝒮^c} Y_k).
    pub fn q_term_relay_pc(&self, vc: NodeSet, k: usize, tk: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, tk)?;
        let sc = tk.difference(s);
        let yk = self.one(VarLabel::Y(k));
        let first = self.mi(&self.xs(s), &yk, &self.xs(vc.union(sc)))?;
        let second = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self
                .x0()
                .union(&self.xs(vc.union(tk)))
                .union(&self.yhats(sc))
                .union(&yk),
        )?;
        Ok(first - second)
    }

    /// Forward-decoding destination term: I(X; Ŷ_𝒯 Y | X_𝒯) +
    /// I(X_𝒮; Y | X_{𝒮^c}) − I(Ŷ_𝒮; Y_𝒮 | X_𝒯 Ŷ_{𝒮^c} Y).
    pub fn r_term_fd(&self, t: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, t)?;
        let sc = t.difference(s);
        let first = self.mi(
            &self.x0(),
            &self.yhats(t).union(&self.y_dest()),
            &self.xs(t),
        )?;
        let second = self.mi(&self.xs(s), &self.y_dest(), &self.xs(sc))?;
        let third = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self.xs(t).union(&self.yhats(sc)).union(&self.y_dest()),
        )?;
        Ok(first + second - third)
    }

    /// Forward-decoding feasibility: I(X_𝒮; Y | X_{𝒮^c}) −
    /// I(Ŷ_𝒮; Y_𝒮 | X X_𝒯 Ŷ_{𝒮^c} Y).
    pub fn q_term_fd(&self, t: NodeSet, s: NodeSet) -> Result<f64> {
        require_subset(s, t)?;
        let sc = t.difference(s);
        let first = self.mi(&self.xs(s), &self.y_dest(), &self.xs(sc))?;
        let second = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self
                .x0()
                .union(&self.xs(t))
                .union(&self.yhats(sc))
                .union(&self.y_dest()),
        )?;
        Ok(first - second)
    }

    /// Layered relay term for k in layer index `t_idx` (0-based) of `layers`:
    /// the first MI gains the higher layers' auxiliaries and inputs,
    /// I(X V_{>t} X_{ℒ_{>t}}; Ŷ_{𝒯_k} Y_k | X_{ℒ_{≤t}} X_{𝒯_k}), while the
    /// remaining terms match the partially-cooperative relay term.
    pub fn relay_term_layered(
        &self,
        layers: &[NodeSet],
        t_idx: usize,
        k: usize,
        tk: NodeSet,
        s: NodeSet,
    ) -> Result<f64> {
        require_subset(s, tk)?;
        let vc = layers
            .iter()
            .fold(NodeSet::EMPTY, |acc, &l| acc.union(l));
        let sc = tk.difference(s);
        let yk = self.one(VarLabel::Y(k));
        let higher_aux: VariableSet = (t_idx + 1..layers.len())
            .map(|j| VarLabel::Aux(j + 1))
            .collect();
        let higher_x = layers[t_idx + 1..]
            .iter()
            .fold(NodeSet::EMPTY, |acc, &l| acc.union(l));
        let lower_x = layers[..=t_idx]
            .iter()
            .fold(NodeSet::EMPTY, |acc, &l| acc.union(l));
        let first = self.mi(
            &self.x0().union(&higher_aux).union(&self.xs(higher_x)),
            &self.yhats(tk).union(&yk),
            &self.xs(lower_x.union(tk)),
        )?;
        let second = self.mi(&self.xs(s), &yk, &self.xs(vc.union(sc)))?;
        let third = self.mi(
            &self.yhats(s),
            &self.ys(s),
            &self.xs(vc.union(tk)).union(&self.yhats(sc)).union(&yk),
        )?;
        Ok(first + second - third)
    }
}

fn require_subset(s: NodeSet, t: NodeSet) -> Result<()> {
    if !s.is_subset(t) {
        return Err(Error::InvalidParameter(format!(
            "set {s} is not contained in the decoding set {t}"
        )));
    }
    Ok(())
}

/// Destination term R_𝒯(𝒮) for the strategy's fixed destination set.
pub fn r_term(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    strategy: &StrategyAssignment,
    s: NodeSet,
) -> Result<f64> {
    let t = strategy
        .dest_decode()
        .ok_or_else(|| Error::config("dest_decode", "a fixed destination set is required"))?;
    EvalCtx::new(network, inputs, compression)?.r_term(t, s)
}

/// Feasibility value Q_𝒯(𝒮), or Q^(k)_{𝒯_k}(𝒮) when `at_relay` is given.
pub fn q_term(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    strategy: &StrategyAssignment,
    s: NodeSet,
    at_relay: Option<usize>,
) -> Result<f64> {
    let ctx = EvalCtx::new(network, inputs, compression)?;
    match at_relay {
        None => {
            let t = strategy.dest_decode().ok_or_else(|| {
                Error::config("dest_decode", "a fixed destination set is required")
            })?;
            ctx.q_term(t, s)
        }
        Some(k) => {
            let tk = strategy.relay_decode(k).ok_or_else(|| {
                Error::config("relay_decode", format!("no fixed set for relay {k}"))
            })?;
            ctx.q_term_relay(k, tk, s)
        }
    }
}

/// Relay term R^(k)_{𝒯_k}(𝒮) for the strategy's fixed set 𝒯_k.
pub fn relay_rate_term(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
    strategy: &StrategyAssignment,
    k: usize,
    s: NodeSet,
) -> Result<f64> {
    let tk = strategy
        .relay_decode(k)
        .ok_or_else(|| Error::config("relay_decode", format!("no fixed set for relay {k}")))?;
    EvalCtx::new(network, inputs, compression)?.relay_term(k, tk, s)
}
