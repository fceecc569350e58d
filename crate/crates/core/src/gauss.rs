//! Joint Gaussian covariance assembly and conditional mutual information.
//!
//! Every network variable (inputs X_0..X_N, outputs Y_1..Y_{N+1}, descriptions
//! Ŷ_1..Ŷ_N, and any shared auxiliaries) is a linear map of independent unit
//! generators, so the joint covariance is Σ = F·Fᵀ for a factor matrix F and is
//! positive semidefinite by construction. Complex circularly-symmetric channels
//! are represented by two real dimensions per variable (a complex gain g acts
//! as the rotation-scaling block [[Re g, -Im g], [Im g, Re g]], and every
//! variance is split evenly over the two dimensions); the real ½·log₂
//! determinant formula then evaluates to the complex (log₂) convention
//! automatically.
//!
//! All mutual informations are in bits.

use crate::error::{Error, Result};
use crate::model::{CompressionConfig, GaussianNetwork, InputCovariance};
use nalgebra::{DMatrix, DVector};
use std::fmt;

/// Label of one (scalar or complex) variable in the joint covariance.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VarLabel {
    /// Channel input of node i; X(0) is the source.
    X(usize),
    /// Channel output of receiver d ∈ {1..N+1}; Y(N+1) is the destination.
    Y(usize),
    /// Compressed description of relay k ∈ {1..N}.
    YHat(usize),
    /// Shared auxiliary (superposition layer) t ∈ {1..T}.
    Aux(usize),
}

impl fmt::Display for VarLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarLabel::X(i) => write!(f, "X{i}"),
            VarLabel::Y(d) => write!(f, "Y{d}"),
            VarLabel::YHat(k) => write!(f, "Yh{k}"),
            VarLabel::Aux(t) => write!(f, "V{t}"),
        }
    }
}

/// Ordered duplicate-free collection of variable labels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VariableSet {
    labels: Vec<VarLabel>,
}

impl VariableSet {
    pub fn new(labels: Vec<VarLabel>) -> Result<Self> {
        let mut seen = labels.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::InvalidParameter(
                "duplicate labels in variable set".into(),
            ));
        }
        Ok(VariableSet { labels })
    }

    pub fn empty() -> Self {
        VariableSet { labels: Vec::new() }
    }

    pub fn labels(&self) -> &[VarLabel] {
        &self.labels
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, l: VarLabel) -> bool {
        self.labels.contains(&l)
    }

    /// Union preserving order of `self`, then new labels of `other`.
    pub fn union(&self, other: &VariableSet) -> VariableSet {
        let mut labels = self.labels.clone();
        for &l in &other.labels {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        VariableSet { labels }
    }

    pub fn difference(&self, other: &VariableSet) -> VariableSet {
        VariableSet {
            labels: self
                .labels
                .iter()
                .copied()
                .filter(|l| !other.contains(*l))
                .collect(),
        }
    }

    pub fn intersection(&self, other: &VariableSet) -> VariableSet {
        VariableSet {
            labels: self
                .labels
                .iter()
                .copied()
                .filter(|l| other.contains(*l))
                .collect(),
        }
    }
}

impl FromIterator<VarLabel> for VariableSet {
    fn from_iter<T: IntoIterator<Item = VarLabel>>(iter: T) -> Self {
        let mut labels = Vec::new();
        for l in iter {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        VariableSet { labels }
    }
}

/// Joint covariance of all network variables with a label → row-range map.
#[derive(Clone, Debug)]
pub struct JointCovariance {
    dim: usize,
    matrix: DMatrix<f64>,
    /// (label, first row, width in real dimensions)
    index_map: Vec<(VarLabel, usize, usize)>,
}

const SYM_RTOL: f64 = 1e-12;
const JITTER_REL: f64 = 1e-12;
/// Relative eigenvalue cutoff for the pseudo-inverse of conditioning blocks.
const PINV_RTOL: f64 = 1e-11;

impl JointCovariance {
    /// Validates symmetry and positive semidefiniteness (one jitter retry of
    /// `1e-12·trace`) and records the label map.
    pub fn new(matrix: DMatrix<f64>, index_map: Vec<(VarLabel, usize, usize)>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "covariance is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.amax().max(1.0);
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > SYM_RTOL * scale {
                    return Err(Error::NotPsd(format!(
                        "asymmetry at ({i},{j}): {} vs {}",
                        matrix[(i, j)],
                        matrix[(j, i)]
                    )));
                }
            }
        }
        let mut claimed = vec![false; dim];
        for &(label, start, width) in &index_map {
            if width == 0 || start + width > dim {
                return Err(Error::DimensionMismatch(format!(
                    "label {label} maps outside the matrix"
                )));
            }
            for r in start..start + width {
                if claimed[r] {
                    return Err(Error::DimensionMismatch(format!(
                        "label {label} overlaps another label at row {r}"
                    )));
                }
                claimed[r] = true;
            }
        }
        if !psd_check(&matrix) {
            return Err(Error::NotPsd(
                "factorization failed even after jitter".into(),
            ));
        }
        Ok(JointCovariance {
            dim,
            matrix,
            index_map,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn labels(&self) -> impl Iterator<Item = VarLabel> + '_ {
        self.index_map.iter().map(|&(l, _, _)| l)
    }

    fn rows_of(&self, label: VarLabel) -> Result<(usize, usize)> {
        self.index_map
            .iter()
            .find(|&&(l, _, _)| l == label)
            .map(|&(_, s, w)| (s, w))
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn resolve(&self, set: &VariableSet) -> Result<Vec<usize>> {
        let mut rows = Vec::new();
        for &l in set.labels() {
            let (s, w) = self.rows_of(l)?;
            rows.extend(s..s + w);
        }
        Ok(rows)
    }

    fn block(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.matrix[(rows[i], cols[j])]
        })
    }
}

/// Checks PSD by Cholesky with one jitter retry of `1e-12·trace`.
fn psd_check(m: &DMatrix<f64>) -> bool {
    if m.nrows() == 0 {
        return true;
    }
    if m.clone().cholesky().is_some() {
        return true;
    }
    let jitter = JITTER_REL * m.trace().abs().max(1.0);
    let jittered = m + DMatrix::identity(m.nrows(), m.nrows()) * jitter;
    jittered.cholesky().is_some()
}

/// log(det M) (natural log) of a symmetric positive definite matrix, with one
/// jitter retry. Errors if the matrix stays indefinite or singular.
fn logdet_spd(m: &DMatrix<f64>, what: &str) -> Result<f64> {
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    if let Some(chol) = m.clone().cholesky() {
        let ld = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        if ld.is_finite() {
            return Ok(ld);
        }
    }
    let jitter = JITTER_REL * m.trace().abs().max(1.0);
    let jittered = m + DMatrix::identity(m.nrows(), m.nrows()) * jitter;
    if let Some(chol) = jittered.cholesky() {
        let ld = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        if ld.is_finite() {
            return Ok(ld);
        }
    }
    Err(Error::DegenerateCovariance(format!(
        "conditional covariance of {what} is singular"
    )))
}

/// Pseudo-inverse of a symmetric PSD matrix via eigendecomposition.
///
/// The matrix is diagonally rescaled to unit variances first so that
/// coordinates with wildly different scales (e.g. a near-disabled description
/// with huge noise next to unit-power inputs) do not push genuine
/// eigen-directions below the rank-truncation tolerance.
fn sym_pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    if n == 0 {
        return m.clone();
    }
    let dinv = DVector::from_iterator(
        n,
        (0..n).map(|i| {
            let d = m[(i, i)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        }),
    );
    let scaled = DMatrix::from_fn(n, n, |i, j| m[(i, j)] * dinv[i] * dinv[j]);
    let eig = scaled.symmetric_eigen();
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let tol = lmax * PINV_RTOL;
    let inv_vals = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| if l > tol { 1.0 / l } else { 0.0 }),
    );
    let pinv_scaled =
        &eig.eigenvectors * DMatrix::from_diagonal(&inv_vals) * eig.eigenvectors.transpose();
    DMatrix::from_fn(n, n, |i, j| pinv_scaled[(i, j)] * dinv[i] * dinv[j])
}

impl JointCovariance {
    /// Σ_{B|W} = Σ_BB − Σ_BW·Σ_WW⁺·Σ_WB (pseudo-inverse tolerates singular
    /// conditioning blocks, e.g. fully correlated superposition inputs).
    fn conditional_cov(&self, b: &[usize], w: &[usize]) -> DMatrix<f64> {
        let sbb = self.block(b, b);
        if w.is_empty() {
            return sbb;
        }
        let sbw = self.block(b, w);
        let sww = self.block(w, w);
        &sbb - &sbw * sym_pinv(&sww) * sbw.transpose()
    }

    /// Total variance of the rows `v` left unexplained by conditioning on `w`.
    fn residual_trace(&self, v: &[usize], w: &[usize]) -> f64 {
        self.conditional_cov(v, w).trace()
    }
}

/// Conditional mutual information I(A;B|C) in bits.
///
/// Evaluated as ½·[log det Σ_{B|C} − log det Σ_{B|A∪C}]/ln 2, which equals the
/// four-determinant form det Σ_{A∪C}·det Σ_{B∪C}/(det Σ_C·det Σ_{A∪B∪C}) with
/// the convention det Σ_∅ = 1, but stays finite when conditioning blocks are
/// singular. Labels shared between A and C (or B and C) are dropped from A
/// (resp. B); labels shared between A and B are moved into C, which is exact
/// only when they carry no residual randomness given C and is otherwise
/// rejected as degenerate.
pub fn conditional_mi(
    cov: &JointCovariance,
    a: &VariableSet,
    b: &VariableSet,
    c: &VariableSet,
) -> Result<f64> {
    let mut a = a.difference(c);
    let mut b = b.difference(c);
    let mut c = c.clone();
    let shared = a.intersection(&b);
    if !shared.is_empty() {
        let sh_rows = cov.resolve(&shared)?;
        let c_rows = cov.resolve(&c)?;
        let resid = cov.residual_trace(&sh_rows, &c_rows);
        let scale = cov.matrix().trace().max(1.0);
        if resid > 1e-9 * scale {
            return Err(Error::DegenerateCovariance(format!(
                "labels shared between both sides are not determined by the conditioning set \
                 (residual variance {resid:.3e})"
            )));
        }
        c = c.union(&shared);
        a = a.difference(&shared);
        b = b.difference(&shared);
    }
    if a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    let a_rows = cov.resolve(&a)?;
    let b_rows = cov.resolve(&b)?;
    let c_rows = cov.resolve(&c)?;
    let mut ac_rows = c_rows.clone();
    ac_rows.extend_from_slice(&a_rows);

    let s_b_c = cov.conditional_cov(&b_rows, &c_rows);
    let s_b_ac = cov.conditional_cov(&b_rows, &ac_rows);
    let ld1 = logdet_spd(&s_b_c, "B given C")?;
    let ld2 = logdet_spd(&s_b_ac, "B given A,C")?;
    Ok(0.5 * (ld1 - ld2) / std::f64::consts::LN_2)
}

/// 𝒞(x): ½·log₂(1+x) for real channels, log₂(1+x) for complex ones.
pub fn gauss_cap(x: f64, complex_channel: bool) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gauss_cap requires x >= 0, got {x}"
        )));
    }
    let half = 0.5 * (1.0 + x).log2();
    Ok(if complex_channel { 2.0 * half } else { half })
}

/// Assembles the joint covariance of
/// {X_0..X_N, Y_1..Y_{N+1}, Ŷ_1..Ŷ_N, auxiliaries} for a network with unit
/// channel noise and descriptions Ŷ_k = Y_k + V̂_k, Var(V̂_k) = N̂_k.
pub fn assemble_covariance(
    network: &GaussianNetwork,
    inputs: &InputCovariance,
    compression: &CompressionConfig,
) -> Result<JointCovariance> {
    let n = network.n_relays();
    if inputs.dim() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "input covariance is for {} transmitters, network has {}",
            inputs.dim(),
            n + 1
        )));
    }
    if compression.nhat().len() != n {
        return Err(Error::DimensionMismatch(format!(
            "compression config has {} relays, network has {}",
            compression.nhat().len(),
            n
        )));
    }
    for (k, &nh) in compression.nhat().iter().enumerate() {
        if !(nh > 0.0) || !nh.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "compression noise for relay {} must be positive and finite, got {nh}",
                k + 1
            )));
        }
    }

    let w = if network.is_complex() { 2 } else { 1 };
    let n_aux = inputs.n_aux();
    let n_in_gen = n + 1 + n_aux; // private parts + auxiliaries
    let n_gen = n_in_gen + (n + 1) + n; // + channel noises + compression noises
    let n_var = (n + 1) + (n + 1) + n + n_aux;

    let mut index_map = Vec::with_capacity(n_var);
    let mut next = 0usize;
    let mut push = |label: VarLabel, next: &mut usize| {
        index_map.push((label, *next, w));
        *next += w;
    };
    for i in 0..=n {
        push(VarLabel::X(i), &mut next);
    }
    for d in 1..=n + 1 {
        push(VarLabel::Y(d), &mut next);
    }
    for k in 1..=n {
        push(VarLabel::YHat(k), &mut next);
    }
    for t in 1..=n_aux {
        push(VarLabel::Aux(t), &mut next);
    }
    let dim = next;

    let mut f = DMatrix::<f64>::zeros(dim, n_gen * w);
    let sw = (w as f64).sqrt();
    let factor = inputs.factor(); // (N+1) x (N+1+n_aux), Σ_in = factor·factorᵀ

    let x_row = |i: usize| i * w;
    let y_row = |d: usize| (n + 1) * w + (d - 1) * w;
    let yhat_row = |k: usize| (2 * n + 2) * w + (k - 1) * w;
    let aux_row = |t: usize| (3 * n + 2) * w + (t - 1) * w;
    let gen_col = |g: usize| g * w;

    // Inputs: per-dimension coefficient factor[i][j]/√w keeps total power.
    for i in 0..=n {
        for j in 0..n_in_gen {
            let coef = factor[(i, j)] / sw;
            for d in 0..w {
                f[(x_row(i) + d, gen_col(j) + d)] = coef;
            }
        }
    }
    // Auxiliaries are their own unit-variance generators.
    for t in 1..=n_aux {
        for d in 0..w {
            f[(aux_row(t) + d, gen_col(n + t) + d)] = 1.0 / sw;
        }
    }
    // Outputs: Y_d = Σ_j g_{jd}·X_j + noise_d.
    for d in 1..=n + 1 {
        for j in 0..=n {
            let g = network.gain(d, j);
            if g.norm_sqr() == 0.0 {
                continue;
            }
            for col in 0..n_in_gen * w {
                let re = f[(x_row(j), col)];
                if w == 1 {
                    f[(y_row(d), col)] += g.re * re;
                } else {
                    let im = f[(x_row(j) + 1, col)];
                    f[(y_row(d), col)] += g.re * re - g.im * im;
                    f[(y_row(d) + 1, col)] += g.im * re + g.re * im;
                }
            }
        }
        let noise_gen = n_in_gen + (d - 1);
        for dd in 0..w {
            f[(y_row(d) + dd, gen_col(noise_gen) + dd)] = 1.0 / sw;
        }
    }
    // Descriptions: Ŷ_k = Y_k + compression noise.
    for k in 1..=n {
        for col in 0..n_gen * w {
            for dd in 0..w {
                f[(yhat_row(k) + dd, col)] = f[(y_row(k) + dd, col)];
            }
        }
        let comp_gen = n_in_gen + (n + 1) + (k - 1);
        let coef = (compression.nhat()[k - 1] / w as f64).sqrt();
        for dd in 0..w {
            f[(yhat_row(k) + dd, gen_col(comp_gen) + dd)] = coef;
        }
    }

    let sigma = &f * f.transpose();
    JointCovariance::new(sigma, index_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GaussianNetwork, StrategyAssignment, StrategyMode};
    use crate::sets::NodeSet;
    use nalgebra::dmatrix;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn vs(labels: &[VarLabel]) -> VariableSet {
        VariableSet::new(labels.to_vec()).unwrap()
    }

    fn point_to_point(g: f64, p: f64) -> JointCovariance {
        let net = GaussianNetwork::new(0, vec![vec![g.into()]], vec![p], false).unwrap();
        let strat = StrategyAssignment::new(0, NodeSet::EMPTY, StrategyMode::General).unwrap();
        let inputs = crate::model::build_input_covariance(&net, &strat, &[1.0]).unwrap();
        assemble_covariance(&net, &inputs, &CompressionConfig::uniform(0, 1.0)).unwrap()
    }

    #[test]
    fn point_to_point_covariance_entries() {
        // Y = X + noise with Var(X) = 3: Σ = [[3,3],[3,4]].
        let cov = point_to_point(1.0, 3.0);
        let m = cov.matrix();
        // rows: X0, Y1, plus one auxiliary
        assert!((m[(0, 0)] - 3.0).abs() < 1e-12);
        assert!((m[(0, 1)] - 3.0).abs() < 1e-12);
        assert!((m[(1, 1)] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_relay_variances() {
        // N=1, gains g1 (source->relay) = 1, others 0, P = 1, N̂ = 1:
        // Var(Y_1) = 2, Var(Ŷ_1) = 3.
        let net = GaussianNetwork::new(
            1,
            vec![
                vec![1.0.into(), 0.0.into()],
                vec![0.0.into(), 0.0.into()],
            ],
            vec![1.0, 1.0],
            false,
        )
        .unwrap();
        let strat = StrategyAssignment::new(1, NodeSet::full(1), StrategyMode::General).unwrap();
        let inputs = crate::model::build_input_covariance(&net, &strat, &[1.0]).unwrap();
        let cov = assemble_covariance(&net, &inputs, &CompressionConfig::uniform(1, 1.0)).unwrap();
        let m = cov.matrix();
        let y1 = 2; // rows: X0, X1, Y1, Y2, Yh1, V1
        let yh1 = 4;
        assert!((m[(y1, y1)] - 2.0).abs() < 1e-12);
        assert!((m[(yh1, yh1)] - 3.0).abs() < 1e-12);
        // Cov(Ŷ_1, Z) = Cov(Y_1, Z) for every other variable.
        for z in [0, 1, 3] {
            assert!((m[(yh1, z)] - m[(y1, z)]).abs() < 1e-12);
        }
    }

    #[test]
    fn point_to_point_capacity() {
        let cov = point_to_point(1.0, 3.0);
        let mi = conditional_mi(
            &cov,
            &vs(&[VarLabel::X(0)]),
            &vs(&[VarLabel::Y(1)]),
            &VariableSet::empty(),
        )
        .unwrap();
        assert!((mi - 1.0).abs() < 1e-12, "I(X;Y) = {mi}");
        assert_eq!(gauss_cap(3.0, false).unwrap(), 1.0);
        assert_eq!(gauss_cap(0.0, false).unwrap(), 0.0);
        assert_eq!(gauss_cap(1.0, true).unwrap(), 1.0);
    }

    #[test]
    fn conditioning_on_a_side_gives_zero() {
        let cov = point_to_point(1.0, 3.0);
        let x = vs(&[VarLabel::X(0)]);
        let y = vs(&[VarLabel::Y(1)]);
        let mi = conditional_mi(&cov, &x, &y, &x).unwrap();
        assert!(mi.abs() < 1e-12);
    }

    fn random_network(rng: &mut ChaCha8Rng, n: usize) -> (GaussianNetwork, JointCovariance) {
        let gains: Vec<Vec<num_complex::Complex64>> = (1..=n + 1)
            .map(|d| {
                (0..=n)
                    .map(|t| {
                        if d == t {
                            0.0.into()
                        } else {
                            let g: f64 = rand_distr::StandardNormal.sample(rng);
                            g.into()
                        }
                    })
                    .collect::<Vec<num_complex::Complex64>>()
            })
            .collect();
        let net = GaussianNetwork::new(n, gains, vec![1.0; n + 1], false).unwrap();
        let strat = StrategyAssignment::new(n, NodeSet::full(n), StrategyMode::General).unwrap();
        let inputs = crate::model::build_input_covariance(&net, &strat, &[1.0]).unwrap();
        let cov = assemble_covariance(&net, &inputs, &CompressionConfig::uniform(n, 1.0)).unwrap();
        (net, cov)
    }

    #[test]
    fn schur_complement_oracle_two_by_two() {
        // I(X; Y1,Y | X1) on a random N=1 network, cross-checked against a
        // direct Schur-complement computation on the assembled matrix.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (_, cov) = random_network(&mut rng, 1);
            let mi = conditional_mi(
                &cov,
                &vs(&[VarLabel::X(0)]),
                &vs(&[VarLabel::Y(1), VarLabel::Y(2)]),
                &vs(&[VarLabel::X(1)]),
            )
            .unwrap();

            // Oracle: h(B|C) - h(B|A,C) from explicit 2x2 conditional
            // covariances, inverted by hand.
            let m = cov.matrix();
            let idx = |l: VarLabel| {
                [
                    (VarLabel::X(0), 0usize),
                    (VarLabel::X(1), 1),
                    (VarLabel::Y(1), 2),
                    (VarLabel::Y(2), 3),
                ]
                .iter()
                .find(|&&(ll, _)| ll == l)
                .unwrap()
                .1
            };
            let b = [idx(VarLabel::Y(1)), idx(VarLabel::Y(2))];
            let cond_det = |w: &[usize]| -> f64 {
                let sbb = dmatrix![m[(b[0],b[0])], m[(b[0],b[1])]; m[(b[1],b[0])], m[(b[1],b[1])]];
                let sww = DMatrix::from_fn(w.len(), w.len(), |i, j| m[(w[i], w[j])]);
                let sbw = DMatrix::from_fn(2, w.len(), |i, j| m[(b[i], w[j])]);
                let cond = &sbb - &sbw * sww.try_inverse().unwrap() * sbw.transpose();
                cond.determinant()
            };
            let oracle = 0.5
                * (cond_det(&[idx(VarLabel::X(1))])
                    / cond_det(&[idx(VarLabel::X(1)), idx(VarLabel::X(0))]))
                .log2();
            assert!((mi - oracle).abs() < 1e-9, "mi={mi} oracle={oracle}");
        }
    }

    #[test]
    fn sampling_oracle_matches_assembled_covariance() {
        // N=2 random gains, independent unit-power inputs: the assembled matrix
        // equals the empirical covariance of sampled realizations within 3σ.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (net, cov) = random_network(&mut rng, 2);
        let n_samp = 200_000usize;
        let dim = 8; // X0 X1 X2 Y1 Y2 Y3 (skip descriptions) + 2 extra slots
        let mut acc = DMatrix::<f64>::zeros(dim, dim);
        for _ in 0..n_samp {
            let x: Vec<f64> = (0..3).map(|_| rand_distr::StandardNormal.sample(&mut rng)).collect();
            let mut v = vec![0.0; dim];
            v[..3].copy_from_slice(&x);
            for d in 1..=3usize {
                let noise: f64 = rand_distr::StandardNormal.sample(&mut rng);
                v[2 + d] = (0..3).map(|t| net.gain(d, t).re * x[t]).sum::<f64>() + noise;
            }
            for i in 0..6 {
                for j in 0..6 {
                    acc[(i, j)] += v[i] * v[j];
                }
            }
        }
        acc /= n_samp as f64;
        // map sampled rows to assembled rows: X0,X1,X2 -> 0..2, Y1..Y3 -> 3..5
        for i in 0..6 {
            for j in 0..6 {
                let expected = cov.matrix()[(i, j)];
                // rough bound on the std error of a second-moment estimate
                let var_i = cov.matrix()[(i, i)];
                let var_j = cov.matrix()[(j, j)];
                let se = ((var_i * var_j + expected * expected) / n_samp as f64).sqrt();
                assert!(
                    (acc[(i, j)] - expected).abs() < 3.0 * se + 1e-3,
                    "entry ({i},{j}): sampled {} vs {}",
                    acc[(i, j)],
                    expected
                );
            }
        }
    }

    #[test]
    fn chain_rule_and_nonnegativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let (_, cov) = random_network(&mut rng, 2);
            let a = vs(&[VarLabel::X(0)]);
            let b = vs(&[VarLabel::X(1)]);
            let c = vs(&[VarLabel::Y(3)]);
            let d = vs(&[VarLabel::Y(1)]);
            let ab = a.union(&b);
            let joint = conditional_mi(&cov, &ab, &c, &d).unwrap();
            let first = conditional_mi(&cov, &a, &c, &d).unwrap();
            let second = conditional_mi(&cov, &b, &c, &a.union(&d)).unwrap();
            assert!(joint >= -1e-9 && first >= -1e-9 && second >= -1e-9);
            assert!(
                (joint - first - second).abs() < 1e-9,
                "chain rule: {joint} vs {first}+{second}"
            );
        }
    }

    #[test]
    fn data_processing_through_compression() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let (_, cov) = random_network(&mut rng, 2);
            for k in 1..=2 {
                let lhs = conditional_mi(
                    &cov,
                    &vs(&[VarLabel::X(0)]),
                    &vs(&[VarLabel::YHat(k)]),
                    &vs(&[VarLabel::X(1), VarLabel::X(2)]),
                )
                .unwrap();
                let rhs = conditional_mi(
                    &cov,
                    &vs(&[VarLabel::X(0)]),
                    &vs(&[VarLabel::Y(k)]),
                    &vs(&[VarLabel::X(1), VarLabel::X(2)]),
                )
                .unwrap();
                assert!(lhs <= rhs + 1e-9, "I(X;Ŷ{k}) = {lhs} > I(X;Y{k}) = {rhs}");
            }
        }
    }

    #[test]
    fn label_permutation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (_, cov) = random_network(&mut rng, 2);
        // Build a permuted copy: swap the X-block and Y-block positions.
        let m = cov.matrix();
        let dim = cov.dim();
        let perm: Vec<usize> = (0..dim).rev().collect();
        let pm = DMatrix::from_fn(dim, dim, |i, j| m[(perm[i], perm[j])]);
        let mut index_map: Vec<(VarLabel, usize, usize)> = Vec::new();
        for l in cov.labels() {
            let (s, w) = cov.rows_of(l).unwrap();
            assert_eq!(w, 1);
            index_map.push((l, perm.iter().position(|&p| p == s).unwrap(), 1));
        }
        let cov2 = JointCovariance::new(pm, index_map).unwrap();
        let a = vs(&[VarLabel::X(0), VarLabel::X(1)]);
        let b = vs(&[VarLabel::Y(3), VarLabel::YHat(2)]);
        let c = vs(&[VarLabel::X(2)]);
        let m1 = conditional_mi(&cov, &a, &b, &c).unwrap();
        let m2 = conditional_mi(&cov2, &a, &b, &c).unwrap();
        assert!((m1 - m2).abs() < 1e-12);
    }

    #[test]
    fn complex_channel_doubles_the_rate() {
        // A complex point-to-point link with |g|² = 1 and power P = 1 carries
        // log₂(1+1) = 1 bit under the complex convention.
        let g = num_complex::Complex64::new(0.6, 0.8);
        let net = GaussianNetwork::new(0, vec![vec![g]], vec![1.0], true).unwrap();
        let strat = StrategyAssignment::new(0, NodeSet::EMPTY, StrategyMode::General).unwrap();
        let inputs = crate::model::build_input_covariance(&net, &strat, &[1.0]).unwrap();
        let cov = assemble_covariance(&net, &inputs, &CompressionConfig::uniform(0, 1.0)).unwrap();
        let mi = conditional_mi(
            &cov,
            &vs(&[VarLabel::X(0)]),
            &vs(&[VarLabel::Y(1)]),
            &VariableSet::empty(),
        )
        .unwrap();
        assert!((mi - 1.0).abs() < 1e-12, "complex I(X;Y) = {mi}");
    }

    #[test]
    fn rejects_bad_matrices() {
        let asym = dmatrix![1.0, 0.5; 0.4, 1.0];
        assert!(JointCovariance::new(asym, vec![(VarLabel::X(0), 0, 1), (VarLabel::Y(1), 1, 1)])
            .is_err());
        let indef = dmatrix![1.0, 2.0; 2.0, 1.0];
        assert!(JointCovariance::new(indef, vec![(VarLabel::X(0), 0, 1), (VarLabel::Y(1), 1, 1)])
            .is_err());
    }
}
