//! Complex fading relay-channel expressions.
//!
//! Geometry and convention: destination output Y = g₁X + g₃X₁ + Z,
//! relay output Y₁ = g₂X + Z₁, all noises unit complex Gaussian, and the
//! complex-channel capacity function C(x) = log₂(1+x) (no ½). The gains are
//! a per-transmission draw; the relay observes g₂ only, the destination
//! everything.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// One realization of the three channel gains, pinned to the complex-channel
/// convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingDraw {
    /// Source → destination.
    pub g1: Complex64,
    /// Source → relay.
    pub g2: Complex64,
    /// Relay → destination.
    pub g3: Complex64,
    /// Always true: rates below use C(x) = log₂(1+x).
    pub complex_convention: bool,
}

impl FadingDraw {
    pub fn new(g1: Complex64, g2: Complex64, g3: Complex64) -> Result<Self> {
        for (name, g) in [("g1", g1), ("g2", g2), ("g3", g3)] {
            if !g.re.is_finite() || !g.im.is_finite() {
                return Err(Error::InvalidParameter(format!("gain {name} is not finite")));
            }
        }
        Ok(FadingDraw {
            g1,
            g2,
            g3,
            complex_convention: true,
        })
    }

    pub fn real(g1: f64, g2: f64, g3: f64) -> Result<Self> {
        Self::new(g1.into(), g2.into(), g3.into())
    }
}

/// C(x) = log₂(1+x), the complex-channel capacity function.
pub fn cc(x: f64) -> f64 {
    (1.0 + x).log2()
}

/// One unit-variance circularly-symmetric complex Gaussian draw.
pub fn sample_cn(rng: &mut ChaCha8Rng) -> Complex64 {
    let half = Normal::new(0.0, (0.5f64).sqrt()).unwrap();
    Complex64::new(half.sample(rng), half.sample(rng))
}

/// An i.i.d. Rayleigh-fading draw of all three gains.
pub fn sample_draw(rng: &mut ChaCha8Rng) -> FadingDraw {
    FadingDraw {
        g1: sample_cn(rng),
        g2: sample_cn(rng),
        g3: sample_cn(rng),
        complex_convention: true,
    }
}

fn check_powers(p: f64, p1: f64) -> Result<()> {
    if !(p > 0.0) || !(p1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "powers must be positive, got P={p}, P1={p1}"
        )));
    }
    Ok(())
}

/// Decode-forward rate for one draw:
/// min{ C(β|g₂|²P), C(|g₁|²P + |g₃|²P₁ + 2√(β̄PP₁)·Re{g₁g₃*}) }.
/// β is the fresh-information fraction at the source; the relay transmits the
/// coherent component at full power.
pub fn i_df_fading(draw: &FadingDraw, beta: f64, p: f64, p1: f64) -> Result<f64> {
    check_powers(p, p1)?;
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in [0,1], got {beta}"
        )));
    }
    let bbar = 1.0 - beta;
    let decode = cc(beta * draw.g2.norm_sqr() * p);
    let combine = cc(draw.g1.norm_sqr() * p
        + draw.g3.norm_sqr() * p1
        + 2.0 * (bbar * p * p1).sqrt() * (draw.g1 * draw.g3.conj()).re);
    Ok(decode.min(combine))
}

/// Compression noise equalizing the two compress-forward branches:
/// N̂₂ = (P(|g₁|²+|g₂|²)+1)/(|g₃|²P₁). Returns +∞ when the relay-destination
/// link is dead (no description can be forwarded).
pub fn nhat_opt(draw: &FadingDraw, p: f64, p1: f64) -> Result<f64> {
    check_powers(p, p1)?;
    let denom = draw.g3.norm_sqr() * p1;
    if denom == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((p * (draw.g1.norm_sqr() + draw.g2.norm_sqr()) + 1.0) / denom)
}

/// Compress-forward main branch pair:
/// I'_CF = min{ C(|g₁|²P + |g₂|²P/(N̂₂+1)), C(|g₁|²P+|g₃|²P₁) − C(1/N̂₂) }.
/// `nhat = ∞` degenerates to C(|g₁|²P) (the description carries nothing).
pub fn i_cf_prime(draw: &FadingDraw, p: f64, p1: f64, nhat: f64) -> Result<f64> {
    check_powers(p, p1)?;
    if !(nhat > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "compression noise must be positive, got {nhat}"
        )));
    }
    let s1 = draw.g1.norm_sqr() * p;
    if nhat.is_infinite() {
        return Ok(cc(s1));
    }
    let a = cc(s1 + draw.g2.norm_sqr() * p / (nhat + 1.0));
    let b = cc(s1 + draw.g3.norm_sqr() * p1) - cc(1.0 / nhat);
    Ok(a.min(b))
}

/// Interference branch: the destination ignores the description and treats
/// the relay transmission as noise, C(|g₁|²P/(|g₃|²P₁+1)).
pub fn i_interference(draw: &FadingDraw, p: f64, p1: f64) -> Result<f64> {
    check_powers(p, p1)?;
    Ok(cc(draw.g1.norm_sqr() * p / (draw.g3.norm_sqr() * p1 + 1.0)))
}

/// Compress-forward rate with the interference fallback:
/// I_CF = max{ I'_CF, C(|g₁|²P/(|g₃|²P₁+1)) }.
pub fn i_cf_fading(draw: &FadingDraw, p: f64, p1: f64, nhat: f64) -> Result<f64> {
    Ok(i_cf_prime(draw, p, p1, nhat)?.max(i_interference(draw, p, p1)?))
}

/// Per-draw cut-set bound, maximized over the source power split on a 0.01
/// grid with phase-aligned coherent combining:
/// max_β min{ C(βP(|g₁|²+|g₂|²)), C(|g₁|²P + |g₃|²P₁ + 2√(β̄PP₁)|g₁||g₃|) }.
pub fn cb_fading(draw: &FadingDraw, p: f64, p1: f64) -> Result<f64> {
    check_powers(p, p1)?;
    let (a1, a2, a3) = (draw.g1.norm_sqr(), draw.g2.norm_sqr(), draw.g3.norm_sqr());
    let mut best = f64::NEG_INFINITY;
    for i in 0..=100 {
        let beta = i as f64 / 100.0;
        let broadcast = cc(beta * p * (a1 + a2));
        let combine = cc(a1 * p + a3 * p1 + 2.0 * ((1.0 - beta) * p * p1 * a1 * a3).sqrt());
        best = best.max(broadcast.min(combine));
    }
    Ok(best)
}

/// Uniform draw in [0,1) shaped like the gain sampling (used for finite
/// tables so that table models consume one value per sample).
pub fn sample_uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn unit_draw() -> FadingDraw {
        FadingDraw::real(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn df_hand_values() {
        // dead source-relay link
        let d = FadingDraw::real(1.0, 0.0, 1.0).unwrap();
        assert_eq!(i_df_fading(&d, 1.0, 1.0, 1.0).unwrap(), 0.0);

        // β=1, g3=0: min(C(|g2|²), C(1))
        let d = FadingDraw::real(1.0, 2.0, 0.0).unwrap();
        let v = i_df_fading(&d, 1.0, 1.0, 1.0).unwrap();
        assert!((v - 1.0f64.min(cc(4.0))).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);

        // β=0, unit real gains: the coherent branch is log₂5
        let v = i_df_fading(&unit_draw(), 0.0, 1.0, 1.0).unwrap();
        let coherent = cc(1.0 + 1.0 + 2.0);
        assert!((coherent - 5.0f64.log2()).abs() < 1e-12);
        assert!((v - 0.0f64).abs() < 1e-12, "decode branch pins β=0 to zero");

        assert!(i_df_fading(&unit_draw(), 1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn df_phase_invariance() {
        // common rotation of (g1, g3) preserves Re{g1 g3*} and both branches
        let d = FadingDraw::new(
            Complex64::new(0.6, 0.8),
            Complex64::new(1.2, -0.3),
            Complex64::new(-0.4, 0.9),
        )
        .unwrap();
        let rot = Complex64::from_polar(1.0, 1.234);
        let d2 = FadingDraw::new(d.g1 * rot, d.g2, d.g3 * rot).unwrap();
        let a = i_df_fading(&d, 0.4, 1.0, 2.0).unwrap();
        let b = i_df_fading(&d2, 0.4, 1.0, 2.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn nhat_opt_equalizes_branches() {
        // unit magnitudes, P=P1=1: N̂₂ = 3 and both branches equal log₂(2.25)
        let d = unit_draw();
        let n = nhat_opt(&d, 1.0, 1.0).unwrap();
        assert!((n - 3.0).abs() < 1e-12);
        let a = cc(1.0 + 1.0 / (n + 1.0));
        let b = cc(2.0) - cc(1.0 / n);
        assert!((a - 2.25f64.log2()).abs() < 1e-12);
        assert!((a - b).abs() < 1e-12);
        let prime = i_cf_prime(&d, 1.0, 1.0, n).unwrap();
        assert!((prime - a).abs() < 1e-12);
    }

    #[test]
    fn nhat_opt_is_argmax_on_random_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let d = sample_draw(&mut rng);
            if d.g3.norm_sqr() == 0.0 {
                continue;
            }
            let n = nhat_opt(&d, 1.0, 1.0).unwrap();
            let at_opt = i_cf_prime(&d, 1.0, 1.0, n).unwrap();
            // branches equalize at the optimum
            let a = cc(d.g1.norm_sqr() + d.g2.norm_sqr() / (n + 1.0));
            let b = cc(d.g1.norm_sqr() + d.g3.norm_sqr()) - cc(1.0 / n);
            assert!((a - b).abs() < 1e-9, "branches {a} vs {b}");
            for i in 0..32 {
                let grid = n / 10.0 * (100.0f64).powf(i as f64 / 31.0);
                let v = i_cf_prime(&d, 1.0, 1.0, grid).unwrap();
                assert!(at_opt >= v - 1e-9, "opt {at_opt} < grid {v}");
            }
        }
    }

    #[test]
    fn cf_limits() {
        let d = unit_draw();
        // N̂→∞: the description carries nothing
        let v = i_cf_prime(&d, 1.0, 1.0, f64::INFINITY).unwrap();
        assert!((v - cc(1.0)).abs() < 1e-12);
        let big = i_cf_prime(&d, 1.0, 1.0, 1e12).unwrap();
        assert!((big - cc(1.0)).abs() < 1e-6);
        // g2=0: the max reduces to direct-vs-interference comparison
        let d0 = FadingDraw::real(1.0, 0.0, 1.0).unwrap();
        let full = i_cf_fading(&d0, 1.0, 1.0, 1.0).unwrap();
        let expect = (cc(2.0) - 1.0).max(cc(0.5));
        assert!((full - expect).abs() < 1e-12);
        assert!(i_cf_prime(&d, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn cutset_dominates_both_schemes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let d = sample_draw(&mut rng);
            let cb = cb_fading(&d, 1.0, 1.0).unwrap();
            for ib in 0..=10 {
                let beta = ib as f64 / 10.0;
                assert!(i_df_fading(&d, beta, 1.0, 1.0).unwrap() <= cb + 1e-9);
            }
            let n = nhat_opt(&d, 1.0, 1.0).unwrap();
            assert!(i_cf_fading(&d, 1.0, 1.0, n.max(1e-12)).unwrap() <= cb + 1e-9);
        }
    }

    #[test]
    fn sampling_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 100_000;
        let mut acc = 0.0;
        for _ in 0..m {
            acc += sample_cn(&mut rng).norm_sqr();
        }
        let mean = acc / m as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean |g|^2 = {mean}");
    }
}
