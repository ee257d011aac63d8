//! Seeded random numbers with a fully specified algorithm, so samples can be
//! reproduced from the seed by any implementation:
//!
//! - state: xoshiro256++ seeded from the 64-bit seed through SplitMix64
//!   (the `seed_from_u64` expansion of `rand_xoshiro`);
//! - uniforms: `(next_u64 >> 11) · 2⁻⁵³`, in `[0, 1)`;
//! - Gaussians: Box–Muller on `u₁ = 1 - uniform()`, `u₂ = uniform()`,
//!   yielding `√(-2 ln u₁)·cos(2πu₂)` then `√(-2 ln u₁)·sin(2πu₂)` from
//!   the same pair;
//! - standard complex Gaussians: real part then imaginary part, each an
//!   independent `N(0, 1)` draw.

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: Xoshiro256PlusPlus,
    spare: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let re = self.gaussian();
        let im = self.gaussian();
        Complex64::new(re, im)
    }
}
