//! Noisy-network-coding rates for independent inputs.
//!
//! `rate_nnc` is deliberately implemented through its own covariance assembly
//! and a four-determinant mutual-information formula, so it can serve as an
//! independent cross-check for the general engine specialized to an
//! all-compress strategy.

use crate::error::{Error, Result};
use crate::model::{CompressionConfig, GaussianNetwork, InputCovariance};
use crate::rate::terms::{EvalCtx, FEAS_TOL};
use crate::rate::{RateResult, ENUM_CAP};
use crate::sets::{enumerate_subsets, NodeSet};
use nalgebra::DMatrix;

fn check_independent(inputs: &InputCovariance) -> Result<()> {
    let s = inputs.sigma();
    for i in 0..s.nrows() {
        for j in 0..s.ncols() {
            if i != j && s[(i, j)].abs() > 1e-12 {
                return Err(Error::config(
                    "inputs",
                    format!("inputs must be independent; Σ[{i}][{j}] = {}", s[(i, j)]),
                ));
            }
        }
    }
    Ok(())
}

/// Variable row indices in the directly-built covariance:
/// X_0..X_N, then Y_1..Y_{N+1}, then Ŷ_1..Ŷ_N, each of width w.
struct DirectCov {
    m: DMatrix<f64>,
    n: usize,
    w: usize,
}

impl DirectCov {
    fn build(
        network: &GaussianNetwork,
        inputs: &InputCovariance,
        compression: &CompressionConfig,
    ) -> Self {
        let n = network.n_relays();
        let w = if network.is_complex() { 2 } else { 1 };
        let dim = (3 * n + 2) * w;
        let mut m = DMatrix::<f64>::zeros(dim, dim);
        let wf = w as f64;
        // Per-dimension powers.
        let p: Vec<f64> = (0..=n).map(|i| inputs.sigma()[(i, i)] / wf).collect();
        for i in 0..=n {
            for d in 0..w {
                m[(i * w + d, i * w + d)] = p[i];
            }
        }
        // Real 2x2 block of a complex gain.
        let gblk = |d: usize, t: usize| -> [[f64; 2]; 2] {
            let g = network.gain(d, t);
            [[g.re, -g.im], [g.im, g.re]]
        };
        let y_row = |d: usize| (n + 1 + (d - 1)) * w;
        let yh_row = |k: usize| (2 * n + 2 + (k - 1)) * w;
        // Cov(Y_d, X_t) = g_{td} · Var(X_t); Cov(Y_d, Y_e) = Σ_t g_td g*_te P_t
        // (+ unit noise when d = e), everything expanded into real blocks.
        for d in 1..=n + 1 {
            for t in 0..=n {
                let g = gblk(d, t);
                for a in 0..w {
                    for b in 0..w {
                        m[(y_row(d) + a, t * w + b)] = g[a][b] * p[t];
                        m[(t * w + b, y_row(d) + a)] = g[a][b] * p[t];
                    }
                }
            }
            for e in 1..=n + 1 {
                for t in 0..=n {
                    let gd = gblk(d, t);
                    let ge = gblk(e, t);
                    // (G_d G_e^T)_{ab} scaled by P_t
                    for a in 0..w {
                        for b in 0..w {
                            let mut acc = 0.0;
                            for c in 0..w {
                                acc += gd[a][c] * ge[b][c];
                            }
                            m[(y_row(d) + a, y_row(e) + b)] += acc * p[t];
                        }
                    }
                }
                if d == e {
                    for a in 0..w {
                        m[(y_row(d) + a, y_row(d) + a)] += 1.0 / wf;
                    }
                }
            }
        }
        // Descriptions copy Y_k's correlations and add their own noise.
        for k in 1..=n {
            for a in 0..w {
                for col in 0..dim {
                    m[(yh_row(k) + a, col)] = m[(y_row(k) + a, col)];
                }
            }
            for a in 0..w {
                for row in 0..dim {
                    m[(row, yh_row(k) + a)] = m[(row, y_row(k) + a)];
                }
            }
            for a in 0..w {
                for b in 0..w {
                    m[(yh_row(k) + a, yh_row(k) + b)] = m[(y_row(k) + a, y_row(k) + b)];
                }
                m[(yh_row(k) + a, yh_row(k) + a)] += compression.nhat()[k - 1] / wf;
            }
        }
        DirectCov { m, n, w }
    }

    fn x_rows(&self, with_source: bool, s: NodeSet, out: &mut Vec<usize>) {
        if with_source {
            out.extend(0..self.w);
        }
        for k in s.iter() {
            out.extend(k * self.w..(k + 1) * self.w);
        }
    }

    fn y_rows(&self, s: NodeSet, dest: bool, out: &mut Vec<usize>) {
        for k in s.iter() {
            let r = (self.n + 1 + (k - 1)) * self.w;
            out.extend(r..r + self.w);
        }
        if dest {
            let r = (self.n + 1 + self.n) * self.w;
            out.extend(r..r + self.w);
        }
    }

    fn yh_rows(&self, s: NodeSet, out: &mut Vec<usize>) {
        for k in s.iter() {
            let r = (2 * self.n + 2 + (k - 1)) * self.w;
            out.extend(r..r + self.w);
        }
    }

    fn det_of(&self, rows: &[usize]) -> f64 {
        if rows.is_empty() {
            return 1.0;
        }
        DMatrix::from_fn(rows.len(), rows.len(), |i, j| self.m[(rows[i], rows[j])])
            .determinant()
    }

    /// I(A;B|C) = ½·log₂( det Σ_{A∪C} · det Σ_{B∪C} / (det Σ_C · det Σ_{A∪B∪C}) ).
    fn mi4(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let mut ac = c.to_vec();
        ac.extend_from_slice(a);
        let mut bc = c.to_vec();
        bc.extend_from_slice(b);
        let mut abc = ac.clone();
        abc.extend_from_slice(b);
        0.5 * ((self.det_of(&ac) * self.det_of(&bc)) / (self.det_of(c) * self.det_of(&abc)))
            .log2()
    }

    /// R_𝒯(𝒮) with independent inputs (no decode-forward relays).
    fn r_term(&self, t: NodeSet, s: NodeSet) -> f64 {
        let sc = t.difference(s);
        let mut a = Vec::new();
        self.x_rows(true, s, &mut a);
        let mut b = Vec::new();
        self.yh_rows(sc, &mut b);
        self.y_rows(NodeSet::EMPTY, true, &mut b);
        let mut c = Vec::new();
        self.x_rows(false, sc, &mut c);
        let first = self.mi4(&a, &b, &c);

        let mut a2 = Vec::new();
        self.yh_rows(s, &mut a2);
        let mut b2 = Vec::new();
        self.y_rows(s, false, &mut b2);
        let second = if s.is_empty() { 0.0 } else { self.mi4_restrict(&a2, &b2, t, sc) };
        first - second
    }

    /// Second term with conditioning X X_𝒯 Ŷ_{𝒮^c} Y exactly as stated.
    fn mi4_restrict(&self, a: &[usize], b: &[usize], t: NodeSet, sc: NodeSet) -> f64 {
        let mut c = Vec::new();
        self.x_rows(true, t, &mut c);
        self.yh_rows(sc, &mut c);
        self.y_rows(NodeSet::EMPTY, true, &mut c);
        self.mi4(a, b, &c)
    }
}

/// NNC rate: all relays compress, the destination selects the best subset 𝒯
/// and the worst cut 𝒮 ⊆ 𝒯 binds. Inputs must be independent.
pub fn rate_nnc(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
) -> Result<RateResult> {
    let n = network.n_relays();
    if n > ENUM_CAP {
        return Err(Error::EnumerationCap(format!(
            "{n} relays exceed the exhaustive-search cap of {ENUM_CAP}"
        )));
    }
    check_independent(inputs)?;
    let dc = DirectCov::build(network, inputs, compression);
    let all = NodeSet::full(n);
    let mut best = f64::NEG_INFINITY;
    let mut chosen_t = NodeSet::EMPTY;
    let mut binding = NodeSet::EMPTY;
    for t in enumerate_subsets(all, NodeSet::EMPTY, all)? {
        let mut worst = f64::INFINITY;
        let mut worst_s = NodeSet::EMPTY;
        for s in enumerate_subsets(t, NodeSet::EMPTY, t)? {
            let v = dc.r_term(t, s);
            if v < worst {
                worst = v;
                worst_s = s;
            }
        }
        if worst > best {
            best = worst;
            chosen_t = t;
            binding = worst_s;
        }
    }
    Ok(RateResult {
        rate: best.max(0.0),
        binding_subset: binding,
        chosen_t,
        chosen_relay_t: Vec::new(),
        chosen_v: all,
        chosen_layering: None,
        term_breakdown: vec![("dest".to_string(), best)],
        feasible: true,
    })
}

/// Forward-decoding variant: the destination decodes like a relay would,
/// which constrains 𝒯 to the feasible family and changes the term shape.
pub fn rate_fd_nnc(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
) -> Result<RateResult> {
    let n = network.n_relays();
    if n > ENUM_CAP {
        return Err(Error::EnumerationCap(format!(
            "{n} relays exceed the exhaustive-search cap of {ENUM_CAP}"
        )));
    }
    check_independent(inputs)?;
    let ctx = EvalCtx::new(network, inputs, compression)?;
    let all = NodeSet::full(n);
    let mut best = f64::NEG_INFINITY;
    let mut chosen_t = NodeSet::EMPTY;
    let mut binding = NodeSet::EMPTY;
    for t in enumerate_subsets(all, NodeSet::EMPTY, all)? {
        let mut feasible = true;
        for s in enumerate_subsets(t, NodeSet::EMPTY, t)? {
            if ctx.q_term_fd(t, s)? < -FEAS_TOL {
                feasible = false;
                break;
            }
        }
        if !feasible {
            continue;
        }
        let mut worst = f64::INFINITY;
        let mut worst_s = NodeSet::EMPTY;
        for s in enumerate_subsets(t, NodeSet::EMPTY, t)? {
            let v = ctx.r_term_fd(t, s)?;
            if v < worst {
                worst = v;
                worst_s = s;
            }
        }
        if worst > best {
            best = worst;
            chosen_t = t;
            binding = worst_s;
        }
    }
    Ok(RateResult {
        rate: best.max(0.0),
        binding_subset: binding,
        chosen_t,
        chosen_relay_t: Vec::new(),
        chosen_v: all,
        chosen_layering: None,
        term_breakdown: vec![("dest".to_string(), best)],
        feasible: true,
    })
}
