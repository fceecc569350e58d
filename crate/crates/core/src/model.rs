//! Network description, input-distribution parameterizations, and strategy
//! assignments.
//!
//! Node numbering: the source is node 0, relays are 1..=N, and the destination
//! observes output Y_{N+1}. Channel noise is unit variance at every receiver;
//! SNRs live entirely in the gains and power budgets.

use crate::error::{Error, Result};
use crate::sets::{NodeSet, MAX_RELAYS};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;

/// A memoryless Gaussian relay network with N relays.
#[derive(Clone, Debug)]
pub struct GaussianNetwork {
    n: usize,
    /// gains[d-1][t] = channel gain from transmitter t ∈ 0..=N to receiver
    /// d ∈ 1..=N+1 (receiver N+1 is the destination).
    gains: Vec<Vec<Complex64>>,
    power: Vec<f64>,
    complex: bool,
}

impl GaussianNetwork {
    pub fn new(
        n: usize,
        gains: Vec<Vec<Complex64>>,
        power: Vec<f64>,
        complex: bool,
    ) -> Result<Self> {
        if n > MAX_RELAYS {
            return Err(Error::config(
                "n_relays",
                format!("at most {MAX_RELAYS} relays supported, got {n}"),
            ));
        }
        if gains.len() != n + 1 {
            return Err(Error::config(
                "gains",
                format!("need {} receiver rows, got {}", n + 1, gains.len()),
            ));
        }
        for (r, row) in gains.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::config(
                    format!("gains[{r}]"),
                    format!("need {} transmitter columns, got {}", n + 1, row.len()),
                ));
            }
            for (t, g) in row.iter().enumerate() {
                if !g.re.is_finite() || !g.im.is_finite() {
                    return Err(Error::config(
                        format!("gains[{r}][{t}]"),
                        "gain must be finite".to_string(),
                    ));
                }
            }
        }
        // A relay both transmits and receives; its self-gain is fixed to zero.
        for k in 1..=n {
            if gains[k - 1][k].norm_sqr() != 0.0 {
                return Err(Error::config(
                    format!("gains[{}][{}]", k - 1, k),
                    format!("self-gain of relay {k} must be 0"),
                ));
            }
        }
        if power.len() != n + 1 {
            return Err(Error::config(
                "power",
                format!("need {} budgets, got {}", n + 1, power.len()),
            ));
        }
        for (i, &p) in power.iter().enumerate() {
            if !(p > 0.0) || !p.is_finite() {
                return Err(Error::config(
                    format!("power[{i}]"),
                    format!("power budget must be strictly positive and finite, got {p}"),
                ));
            }
        }
        Ok(GaussianNetwork {
            n,
            gains,
            power,
            complex,
        })
    }

    /// All-real gains convenience constructor.
    pub fn real(n: usize, gains: Vec<Vec<f64>>, power: Vec<f64>) -> Result<Self> {
        let g = gains
            .into_iter()
            .map(|row| row.into_iter().map(Complex64::from).collect())
            .collect();
        GaussianNetwork::new(n, g, power, false)
    }

    pub fn n_relays(&self) -> usize {
        self.n
    }

    pub fn relays(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    /// Gain from transmitter t ∈ 0..=N to receiver d ∈ 1..=N+1.
    pub fn gain(&self, d: usize, t: usize) -> Complex64 {
        self.gains[d - 1][t]
    }

    pub fn power(&self, i: usize) -> f64 {
        self.power[i]
    }

    pub fn powers(&self) -> &[f64] {
        &self.power
    }

    pub fn is_complex(&self) -> bool {
        self.complex
    }
}

/// Raw network record as it appears in configuration files.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNetwork {
    pub n_relays: usize,
    /// Rows indexed by receiver 1..=N+1, columns by transmitter 0..=N.
    pub gains: Vec<Vec<f64>>,
    /// Imaginary parts, same shape as `gains`; requires `complex: true`.
    #[serde(default)]
    pub gains_im: Option<Vec<Vec<f64>>>,
    pub power: Vec<f64>,
    #[serde(default)]
    pub complex: bool,
}

pub fn validate_network(raw: &RawNetwork) -> Result<GaussianNetwork> {
    if raw.gains_im.is_some() && !raw.complex {
        return Err(Error::config(
            "gains_im",
            "imaginary parts given but `complex` is false",
        ));
    }
    let gains: Vec<Vec<Complex64>> = raw
        .gains
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(t, &re)| {
                    let im = raw
                        .gains_im
                        .as_ref()
                        .and_then(|m| m.get(r))
                        .and_then(|mr| mr.get(t))
                        .copied()
                        .unwrap_or(0.0);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    if let Some(im) = &raw.gains_im {
        if im.len() != raw.gains.len()
            || im
                .iter()
                .zip(&raw.gains)
                .any(|(a, b)| a.len() != b.len())
        {
            return Err(Error::config("gains_im", "shape differs from `gains`"));
        }
    }
    GaussianNetwork::new(raw.n_relays, gains, raw.power.clone(), raw.complex)
}

/// Which relays compress (CF) and which decode (DF), plus optional fixed
/// decoding sets and layering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyMode {
    General,
    FullyCooperative,
    PartiallyCooperative,
    NonCooperative,
    ForwardDecoding,
}

#[derive(Clone, Debug)]
pub struct StrategyAssignment {
    n: usize,
    cf_set: NodeSet,
    mode: StrategyMode,
    /// Fixed destination decoding set 𝒯; `None` means optimize over it.
    dest_decode: Option<NodeSet>,
    /// Fixed per-DF-relay decoding sets 𝒯_k; `None` means optimize.
    relay_decode: Option<Vec<(usize, NodeSet)>>,
    /// Ordered layering of the DF set, outermost decoded first.
    layering: Option<Vec<NodeSet>>,
}

impl StrategyAssignment {
    pub fn new(n: usize, cf_set: NodeSet, mode: StrategyMode) -> Result<Self> {
        if !cf_set.is_subset(NodeSet::full(n)) {
            return Err(Error::config(
                "cf_set",
                format!("{cf_set} is not a subset of the relay set {}", NodeSet::full(n)),
            ));
        }
        match mode {
            StrategyMode::NonCooperative | StrategyMode::PartiallyCooperative => {}
            StrategyMode::ForwardDecoding => {
                if cf_set != NodeSet::full(n) {
                    return Err(Error::config(
                        "cf_set",
                        "forward decoding requires every relay to compress",
                    ));
                }
            }
            _ => {}
        }
        Ok(StrategyAssignment {
            n,
            cf_set,
            mode,
            dest_decode: None,
            relay_decode: None,
            layering: None,
        })
    }

    pub fn with_dest_decode(mut self, t: NodeSet) -> Result<Self> {
        self.check_dest(t)?;
        self.dest_decode = Some(t);
        Ok(self)
    }

    pub fn with_relay_decode(mut self, sets: Vec<(usize, NodeSet)>) -> Result<Self> {
        let dfs = self.df_set();
        for &(k, tk) in &sets {
            if !dfs.contains(k) {
                return Err(Error::config(
                    "relay_decode",
                    format!("relay {k} is not a decoding relay"),
                ));
            }
            self.check_relay(k, tk)?;
        }
        let mut seen: Vec<usize> = sets.iter().map(|&(k, _)| k).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != sets.len() {
            return Err(Error::config("relay_decode", "duplicate relay entries"));
        }
        self.relay_decode = Some(sets);
        Ok(self)
    }

    pub fn with_layering(mut self, layers: Vec<NodeSet>) -> Result<Self> {
        let dfs = self.df_set();
        let mut cover = NodeSet::EMPTY;
        for l in &layers {
            if l.is_empty() {
                return Err(Error::config("layering", "layers must be nonempty"));
            }
            if !cover.intersection(*l).is_empty() {
                return Err(Error::config("layering", "layers must be disjoint"));
            }
            cover = cover.union(*l);
        }
        if cover != dfs {
            return Err(Error::config(
                "layering",
                format!("layers cover {cover}, expected the decoding set {dfs}"),
            ));
        }
        self.layering = Some(layers);
        Ok(self)
    }

    fn check_dest(&self, t: NodeSet) -> Result<()> {
        let all = NodeSet::full(self.n);
        if !t.is_subset(all) {
            return Err(Error::config("dest_decode", format!("{t} exceeds the relay set")));
        }
        match self.mode {
            StrategyMode::FullyCooperative if t != all => Err(Error::config(
                "dest_decode",
                "fully cooperative mode fixes the destination set to all relays",
            )),
            StrategyMode::PartiallyCooperative | StrategyMode::NonCooperative
                if !t.is_subset(self.cf_set) =>
            {
                Err(Error::config(
                    "dest_decode",
                    format!("{t} must contain compressing relays only"),
                ))
            }
            _ => Ok(()),
        }
    }

    fn check_relay(&self, k: usize, tk: NodeSet) -> Result<()> {
        let all = NodeSet::full(self.n);
        if tk.contains(k) || !tk.is_subset(all) {
            return Err(Error::config(
                "relay_decode",
                format!("set {tk} for relay {k} must exclude {k} and stay within the relay set"),
            ));
        }
        match self.mode {
            StrategyMode::FullyCooperative if tk != all.without(k) => Err(Error::config(
                "relay_decode",
                "fully cooperative mode fixes each relay set to all other relays",
            )),
            StrategyMode::PartiallyCooperative if !tk.is_subset(self.cf_set) => {
                Err(Error::config(
                    "relay_decode",
                    format!("{tk} must contain compressing relays only"),
                ))
            }
            _ => Ok(()),
        }
    }

    pub fn n_relays(&self) -> usize {
        self.n
    }

    pub fn cf_set(&self) -> NodeSet {
        self.cf_set
    }

    pub fn df_set(&self) -> NodeSet {
        self.cf_set.complement_in(NodeSet::full(self.n))
    }

    pub fn mode(&self) -> StrategyMode {
        self.mode
    }

    pub fn dest_decode(&self) -> Option<NodeSet> {
        self.dest_decode
    }

    pub fn relay_decode(&self, k: usize) -> Option<NodeSet> {
        self.relay_decode
            .as_ref()
            .and_then(|v| v.iter().find(|&&(r, _)| r == k).map(|&(_, t)| t))
    }

    pub fn layering(&self) -> Option<&[NodeSet]> {
        self.layering.as_deref()
    }
}

/// How each relay's received signal is quantized: description noise variances.
#[derive(Clone, Debug)]
pub struct CompressionConfig {
    nhat: Vec<f64>,
}

impl CompressionConfig {
    pub fn new(nhat: Vec<f64>) -> Result<Self> {
        for (k, &v) in nhat.iter().enumerate() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(
                    format!("nhat[{k}]"),
                    format!("description noise must be strictly positive and finite, got {v}"),
                ));
            }
        }
        Ok(CompressionConfig { nhat })
    }

    pub fn uniform(n: usize, value: f64) -> Self {
        CompressionConfig::new(vec![value; n]).expect("uniform noise must be positive")
    }

    pub fn nhat(&self) -> &[f64] {
        &self.nhat
    }
}

/// Input covariance over (X_0, X_1..X_N) plus the factor realizing it through
/// independent generators (private parts first, shared auxiliaries last).
#[derive(Clone, Debug)]
pub struct InputCovariance {
    sigma: DMatrix<f64>,
    factor: DMatrix<f64>,
    n_aux: usize,
}

impl InputCovariance {
    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    pub fn n_aux(&self) -> usize {
        self.n_aux
    }

    /// Explicit PSD covariance; realized through its symmetric square root, no
    /// shared auxiliaries.
    pub fn explicit(sigma: DMatrix<f64>, network: &GaussianNetwork) -> Result<Self> {
        let n = network.n_relays();
        if sigma.nrows() != n + 1 || sigma.ncols() != n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "input covariance must be {}x{}",
                n + 1,
                n + 1
            )));
        }
        for i in 0..=n {
            if sigma[(i, i)] > network.power(i) * (1.0 + 1e-12) {
                return Err(Error::config(
                    format!("sigma[{i}][{i}]"),
                    format!(
                        "exceeds the power budget {} of node {i}",
                        network.power(i)
                    ),
                ));
            }
        }
        let eig = sigma.clone().symmetric_eigen();
        let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
        if eig.eigenvalues.iter().any(|&l| l < -1e-9 * lmax.max(1.0)) {
            return Err(Error::NotPsd("explicit input covariance".into()));
        }
        let sqrt_vals = nalgebra::DVector::from_iterator(
            n + 1,
            eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()),
        );
        let factor = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals);
        Ok(InputCovariance {
            sigma,
            factor,
            n_aux: 0,
        })
    }
}

/// Superposition input: the source and each decoding relay split power between
/// a private part and a shared auxiliary V, X_i = √(β_i P_i)·X̃_i +
/// √((1−β_i) P_i)·V, while compressing relays transmit independently at full
/// power. `betas` lists β_0 followed by β_k for k in the decoding set, in
/// increasing relay order.
pub fn build_input_covariance(
    network: &GaussianNetwork,
    strategy: &StrategyAssignment,
    betas: &[f64],
) -> Result<InputCovariance> {
    let n = network.n_relays();
    let dfs = strategy.df_set();
    if betas.len() != 1 + dfs.len() {
        return Err(Error::config(
            "betas",
            format!(
                "need one fraction for the source and each of {} decoding relays, got {}",
                dfs.len(),
                betas.len()
            ),
        ));
    }
    for &b in betas {
        if !(0.0..=1.0).contains(&b) || !b.is_finite() {
            return Err(Error::config("betas", format!("fraction {b} outside [0,1]")));
        }
    }
    let beta_of = |i: usize| -> Option<f64> {
        if i == 0 {
            Some(betas[0])
        } else if dfs.contains(i) {
            let pos = dfs.iter().position(|k| k == i).unwrap();
            Some(betas[1 + pos])
        } else {
            None
        }
    };

    // Generators: X̃_0..X̃_N private, then one shared V.
    let n_aux = 1usize;
    let mut factor = DMatrix::<f64>::zeros(n + 1, n + 1 + n_aux);
    for i in 0..=n {
        let p = network.power(i);
        match beta_of(i) {
            Some(b) => {
                factor[(i, i)] = (b * p).sqrt();
                factor[(i, n + 1)] = ((1.0 - b) * p).sqrt();
            }
            None => {
                factor[(i, i)] = p.sqrt();
            }
        }
    }
    let sigma = &factor * factor.transpose();
    Ok(InputCovariance {
        sigma,
        factor,
        n_aux,
    })
}

/// Layered superposition: one auxiliary V_t per layer; a decoding relay in
/// layer t rides on V_t, and the source splits its coherent power evenly over
/// all layers. With a single layer this coincides with
/// [`build_input_covariance`].
pub fn build_input_covariance_layered(
    network: &GaussianNetwork,
    strategy: &StrategyAssignment,
    betas: &[f64],
) -> Result<InputCovariance> {
    let layers: Vec<NodeSet> = match strategy.layering() {
        Some(l) => l.to_vec(),
        None => {
            if strategy.df_set().is_empty() {
                Vec::new()
            } else {
                vec![strategy.df_set()]
            }
        }
    };
    if layers.len() <= 1 {
        return build_input_covariance(network, strategy, betas);
    }
    let n = network.n_relays();
    let dfs = strategy.df_set();
    if betas.len() != 1 + dfs.len() {
        return Err(Error::config(
            "betas",
            format!("need {} fractions, got {}", 1 + dfs.len(), betas.len()),
        ));
    }
    for &b in betas {
        if !(0.0..=1.0).contains(&b) || !b.is_finite() {
            return Err(Error::config("betas", format!("fraction {b} outside [0,1]")));
        }
    }
    let t_layers = layers.len();
    let n_aux = t_layers;
    let mut factor = DMatrix::<f64>::zeros(n + 1, n + 1 + n_aux);
    // Source: private part plus an even split of the coherent power.
    let p0 = network.power(0);
    factor[(0, 0)] = (betas[0] * p0).sqrt();
    let coh = (1.0 - betas[0]) * p0 / t_layers as f64;
    for t in 0..t_layers {
        factor[(0, n + 1 + t)] = coh.sqrt();
    }
    for k in 1..=n {
        let p = network.power(k);
        if let Some(pos) = dfs.iter().position(|j| j == k) {
            let b = betas[1 + pos];
            let t = layers
                .iter()
                .position(|l| l.contains(k))
                .expect("layering covers the decoding set");
            factor[(k, k)] = (b * p).sqrt();
            factor[(k, n + 1 + t)] = ((1.0 - b) * p).sqrt();
        } else {
            factor[(k, k)] = p.sqrt();
        }
    }
    let sigma = &factor * factor.transpose();
    Ok(InputCovariance {
        sigma,
        factor,
        n_aux,
    })
}
