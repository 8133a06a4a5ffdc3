#![allow(dead_code)]

use optoelectro::entanglement::rng::symmetric_uniform;
use optoelectro::stability::is_stable_eig;
use optoelectro::SystemParams;
use std::f64::consts::PI;

/// Deterministic parameter draws spanning the physically interesting box.
pub struct Draws {
    seed: u64,
    counter: u64,
}

impl Draws {
    pub fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = 0.5 * (symmetric_uniform(self.seed, self.counter) + 1.0);
        self.counter += 1;
        lo + (hi - lo) * u
    }

    pub fn params(&mut self) -> SystemParams {
        SystemParams {
            kappa_a: self.uniform(0.5, 5.0),
            kappa_c: self.uniform(0.5, 5.0),
            kappa_d: self.uniform(0.5, 5.0),
            gamma_m: 10f64.powf(self.uniform(-4.0, -1.0)),
            g_a: self.uniform(0.0, 3.0),
            g_c: self.uniform(0.0, 3.0),
            g_x: self.uniform(0.0, 3.0),
            g_d_mag: self.uniform(0.0, 3.0),
            phi: self.uniform(-PI, PI),
            n_th: self.uniform(0.0, 50.0),
        }
    }

    /// Next draw whose slowest eigenvalue decays at least at rate `margin`.
    pub fn stable_params(&mut self, margin: f64) -> SystemParams {
        loop {
            let p = self.params();
            if is_stable_eig(&p).map(|v| v.max_re < -margin).unwrap_or(false) {
                return p;
            }
        }
    }
}
