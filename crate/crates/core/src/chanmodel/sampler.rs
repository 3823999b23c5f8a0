//! Drawing channel realizations and conditional branch statistics.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{CorrelationSpec, SystemConfig};
use crate::error::{domain, Result};
use crate::specfun::{marcum_p, Precision};

/// Gains seen from one transmit antenna. A TAS draw is `N_t` of these with
/// independent shared components.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChannelDraw {
    /// Legitimate gains, unit average power.
    pub h_b: Vec<Complex64>,
    /// Eavesdropper gains, unit average power.
    pub h_e: Vec<Complex64>,
    /// `|Z|^2` of the shared component.
    pub t: f64,
}

/// Precomputed mixing weights for repeated draws.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    m: usize,
    n_t: usize,
    n_e: usize,
    // (private, shared) amplitude pairs
    main: Vec<(f64, f64)>,
    eve: (f64, f64),
}

const HALF_SQRT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// CN(0, 1): real and imaginary parts N(0, 1/2).
#[inline]
fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * HALF_SQRT, im * HALF_SQRT)
}

impl ChannelSampler {
    pub fn new(spec: &CorrelationSpec, cfg: &SystemConfig) -> Result<Self> {
        cfg.validate()?;
        spec.validate_for(cfg)?;
        let mix = |c: f64| ((1.0 - c * c).max(0.0).sqrt(), c);
        Ok(ChannelSampler {
            m: cfg.m as usize,
            n_t: cfg.n_t as usize,
            n_e: cfg.n_e as usize,
            main: spec.effective_eta().into_iter().map(mix).collect(),
            eve: mix(spec.effective_lambda()),
        })
    }

    /// Draws the gains of one transmit antenna.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelDraw {
        let mut out = ChannelDraw::default();
        self.draw_into(rng, &mut out);
        out
    }

    /// Like [`draw`](Self::draw), reusing the buffers of `out`.
    pub fn draw_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut ChannelDraw) {
        let z = cn01(rng);
        out.t = z.norm_sqr();
        self.draw_main_given(rng, z, &mut out.h_b);
        out.h_e.clear();
        for _ in 0..self.n_e {
            out.h_e.push(cn01(rng) * self.eve.0 + z * self.eve.1);
        }
    }

    /// Legitimate gains for a fixed shared component `z`.
    pub fn draw_main_given<R: Rng + ?Sized>(&self, rng: &mut R, z: Complex64, out: &mut Vec<Complex64>) {
        out.clear();
        for &(p, c) in &self.main {
            out.push(cn01(rng) * p + z * c);
        }
    }

    /// Unit-power branch gains `|h|^2` for all `N_t` transmit antennas, written
    /// into `b` (`M N_t` entries) and `e` (`N_E N_t` entries), antenna-major.
    #[inline]
    pub fn draw_powers<R: Rng + ?Sized>(&self, rng: &mut R, b: &mut [f64], e: &mut [f64]) {
        debug_assert_eq!(b.len(), self.m * self.n_t);
        debug_assert_eq!(e.len(), self.n_e * self.n_t);
        for (bn, en) in b.chunks_exact_mut(self.m).zip(e.chunks_exact_mut(self.n_e)) {
            let z = cn01(rng);
            for (slot, &(p, c)) in bn.iter_mut().zip(&self.main) {
                *slot = (cn01(rng) * p + z * c).norm_sqr();
            }
            let zc = z * self.eve.1;
            for slot in en {
                *slot = (cn01(rng) * self.eve.0 + zc).norm_sqr();
            }
        }
    }

    /// `(M, N_t, N_E)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n_t, self.n_e)
    }
}

/// Draws the gains of one transmit antenna. Prefer [`ChannelSampler`] in loops.
pub fn sample_channel<R: Rng + ?Sized>(
    spec: &CorrelationSpec,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<ChannelDraw> {
    Ok(ChannelSampler::new(spec, cfg)?.draw(rng))
}

/// CDF of one branch SNR given `T = t`:
/// `1 - Q_1(sqrt(2 eta^2 t / (1 - eta^2)), sqrt(2 x / (gamma_b (1 - eta^2))))`.
pub fn conditional_branch_cdf(x: f64, t: f64, eta: f64, gamma_b: f64, prec: &Precision) -> Result<f64> {
    conditional_mrc_cdf(x, t, 1, eta, gamma_b, prec)
}

/// CDF of the MRC output of `m` branches sharing the coefficient `eta`, given `T = t`.
pub fn conditional_mrc_cdf(
    x: f64,
    t: f64,
    m: u32,
    eta: f64,
    gamma_b: f64,
    prec: &Precision,
) -> Result<f64> {
    if !(eta.abs() < 1.0) {
        return domain(format!("conditional CDF needs |eta| < 1, got {eta}"));
    }
    if !(t >= 0.0) || !(gamma_b > 0.0) {
        return domain("conditional CDF needs t >= 0 and a positive average SNR");
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    let private = 1.0 - eta * eta;
    let a = (2.0 * m as f64 * eta * eta * t / private).sqrt();
    let b = (2.0 * x / (gamma_b * private)).sqrt();
    marcum_p(m, a, b, prec)
}
