//! Closed-form single-relay decode-forward rate and cut-set bound.
//!
//! Geometry: `g1` source→relay, `g2` relay→destination, `g3`
//! source→destination; power `p`, receiver noise variance `noise`, power
//! split `beta` (fraction of fresh information at the source; 1−β rides the
//! coherent component). Real-channel convention C(x) = ½·log₂(1+x).

use crate::error::{Error, Result};

fn c(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in [0,1], got {beta}"
        )));
    }
    Ok(())
}

/// Decode-forward rate at a fixed power split:
/// min{ C(g₁²βP/N), C((g₃²P + g₂²P + 2√(β̄ g₂² g₃²)·P)/N) }.
pub fn rate_df_single(
    g1: f64,
    g2: f64,
    g3: f64,
    p: f64,
    noise: f64,
    beta: f64,
) -> Result<f64> {
    check_beta(beta)?;
    let bbar = 1.0 - beta;
    let decode = c(g1 * g1 * beta * p / noise);
    let combine = c((g3 * g3 * p + g2 * g2 * p + 2.0 * (bbar * g2 * g2 * g3 * g3).sqrt() * p)
        / noise);
    Ok(decode.min(combine))
}

/// Cut-set bound at a fixed split: the broadcast cut gains the direct link,
/// min{ C((g₁²+g₃²)βP/N), C((g₃²P + g₂²P + 2√(β̄ g₂² g₃²)·P)/N) }.
pub fn cb_single(g1: f64, g2: f64, g3: f64, p: f64, noise: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let bbar = 1.0 - beta;
    let broadcast = c((g1 * g1 + g3 * g3) * beta * p / noise);
    let combine = c((g3 * g3 * p + g2 * g2 * p + 2.0 * (bbar * g2 * g2 * g3 * g3).sqrt() * p)
        / noise);
    Ok(broadcast.min(combine))
}

const BETA_STEPS: usize = 1000;

fn grid_opt(f: impl Fn(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let mut best = f64::NEG_INFINITY;
    let mut best_beta = 0.0;
    for i in 0..=BETA_STEPS {
        let beta = i as f64 / BETA_STEPS as f64;
        let v = f(beta)?;
        if v > best {
            // strict improvement keeps the smallest maximizing β
            best = v;
            best_beta = beta;
        }
    }
    Ok((best, best_beta))
}

/// Decode-forward rate maximized over a β grid of step 1e-3 (ties broken
/// toward smaller β).
pub fn rate_df_single_opt(g1: f64, g2: f64, g3: f64, p: f64, noise: f64) -> Result<f64> {
    Ok(grid_opt(|b| rate_df_single(g1, g2, g3, p, noise, b))?.0)
}

/// Cut-set bound maximized over the same β grid.
pub fn cb_single_opt(g1: f64, g2: f64, g3: f64, p: f64, noise: f64) -> Result<f64> {
    Ok(grid_opt(|b| cb_single(g1, g2, g3, p, noise, b))?.0)
}
