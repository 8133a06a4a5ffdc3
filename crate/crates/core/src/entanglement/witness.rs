//! Variance-product witness for genuine tripartite entanglement of the
//! outputs `(a, c, d)`.
//!
//! With `u = h·X` and `v = g·P`, every biseparable state obeys
//! `Δu Δv ≥ min{|g₃h₃| + |h₁g₁ + h₂g₂|, |g₂h₂| + |h₁g₁ + h₃g₃|, |g₁h₁| + |g₂h₂ + h₃g₃|}`
//! where `Δu`, `Δv` are read as standard deviations `sqrt(hᵀV_XX h)` and
//! `sqrt(gᵀV_PP g)`. The bound is used exactly as stated, without rescaling
//! for the vacuum variance of `1/2`. `ΔE` is the left side minus the right;
//! `ΔE < 0` for some weights witnesses genuine tripartite entanglement.

use super::rng::symmetric_uniform;
use crate::error::{Error, Result};
use crate::moments::CovarianceMatrix;
use crate::scalar::Real;

/// Sample count used for the published witness statistics.
pub const DEFAULT_SAMPLES: usize = 50_000;

const X_INDICES: [usize; 3] = [0, 2, 4];
const P_INDICES: [usize; 3] = [1, 3, 5];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector<T: Real> {
    pub h: [T; 3],
    pub g: [T; 3],
}

impl<T: Real> WeightVector<T> {
    pub fn new(h: [T; 3], g: [T; 3]) -> Result<Self> {
        for (field, x) in ["h1", "h2", "h3"].into_iter().zip(h).chain(["g1", "g2", "g3"].into_iter().zip(g)) {
            if !(x.abs() <= T::one()) {
                return Err(Error::InvalidParameter { field, reason: format!("{x} is outside [-1, 1]") });
            }
        }
        Ok(Self { h, g })
    }

    pub fn zero() -> Self {
        Self { h: [T::zero(); 3], g: [T::zero(); 3] }
    }

    /// Weights for sample `index`: draws `6·index .. 6·index + 5` of the
    /// counter-based stream, in the order `h₁ h₂ h₃ g₁ g₂ g₃`.
    pub fn sample(seed: u64, index: u64) -> Self {
        let w = |k: u64| T::lit(symmetric_uniform(seed, 6 * index + k));
        Self { h: [w(0), w(1), w(2)], g: [w(3), w(4), w(5)] }
    }

    fn to_array(self) -> [T; 6] {
        [self.h[0], self.h[1], self.h[2], self.g[0], self.g[1], self.g[2]]
    }

    fn from_array(a: [T; 6]) -> Self {
        Self { h: [a[0], a[1], a[2]], g: [a[3], a[4], a[5]] }
    }
}

/// Right-hand side of the biseparability inequality.
pub fn biseparable_bound<T: Real>(w: &WeightVector<T>) -> T {
    let [h1, h2, h3] = w.h;
    let [g1, g2, g3] = w.g;
    let b1 = (g3 * h3).abs() + (h1 * g1 + h2 * g2).abs();
    let b2 = (g2 * h2).abs() + (h1 * g1 + h3 * g3).abs();
    let b3 = (g1 * h1).abs() + (g2 * h2 + h3 * g3).abs();
    b1.min(b2).min(b3)
}

fn quadratic_form<T: Real>(v: &CovarianceMatrix<T>, idx: [usize; 3], w: [T; 3]) -> T {
    let mut acc = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            acc = acc + w[i] * v.matrix[(idx[i], idx[j])] * w[j];
        }
    }
    acc.max(T::zero())
}

/// `ΔE = Δu·Δv − bound`.
pub fn delta_e<T: Real>(v: &CovarianceMatrix<T>, w: &WeightVector<T>) -> T {
    let du = quadratic_form(v, X_INDICES, w.h).sqrt();
    let dv = quadratic_form(v, P_INDICES, w.g).sqrt();
    du * dv - biseparable_bound(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripartiteWitness<T: Real> {
    pub n_samples: usize,
    pub seed: u64,
    pub min: T,
    pub max: T,
    pub mean: T,
    pub fraction_negative: T,
    pub argmin: WeightVector<T>,
    /// Some sampled weight choice violates the bound.
    pub witnessed: bool,
    /// Every sampled weight choice violates the bound.
    pub all_negative: bool,
}

/// Samples `n_samples` weight vectors uniformly from `[-1, 1]⁶`.
pub fn tripartite_witness<T: Real>(v: &CovarianceMatrix<T>, n_samples: usize, seed: u64) -> Result<TripartiteWitness<T>> {
    if n_samples == 0 {
        return Err(Error::NoSamples);
    }
    let mut min = T::infinity();
    let mut max = T::neg_infinity();
    let mut sum = T::zero();
    let mut negative = 0usize;
    let mut argmin = WeightVector::zero();
    for i in 0..n_samples {
        let w = WeightVector::sample(seed, i as u64);
        let de = delta_e(v, &w);
        if de < min {
            min = de;
            argmin = w;
        }
        max = max.max(de);
        sum = sum + de;
        negative += usize::from(de < T::zero());
    }
    let n = T::lit(n_samples as f64);
    Ok(TripartiteWitness {
        n_samples,
        seed,
        min,
        max,
        mean: sum / n,
        fraction_negative: T::lit(negative as f64) / n,
        argmin,
        witnessed: min < T::zero(),
        all_negative: negative == n_samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizedWitness<T: Real> {
    pub weights: WeightVector<T>,
    pub delta_e: T,
    pub sampled_min: T,
}

/// Compass search over `[-1, 1]⁶` started from the best sampled weights.
/// Only improving moves are accepted, so the result never exceeds the
/// sampled minimum.
pub fn tripartite_optimize<T: Real>(v: &CovarianceMatrix<T>, start: &TripartiteWitness<T>) -> OptimizedWitness<T> {
    let mut x = start.argmin.to_array();
    let mut best = delta_e(v, &start.argmin);
    let mut step = T::lit(0.25);
    let min_step = T::lit(1e-10);
    let mut iterations = 0;
    while step > min_step && iterations < 20_000 {
        iterations += 1;
        let mut improved = false;
        for k in 0..6 {
            for dir in [T::one(), -T::one()] {
                let mut trial = x;
                trial[k] = (x[k] + dir * step).max(-T::one()).min(T::one());
                let val = delta_e(v, &WeightVector::from_array(trial));
                if val < best {
                    best = val;
                    x = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step = step / T::two();
        }
    }
    OptimizedWitness { weights: WeightVector::from_array(x), delta_e: best, sampled_min: start.min }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemParams;
    use crate::moments::output_covariance;
    use crate::numerics::Matrix;

    fn vacuum() -> CovarianceMatrix<f64> {
        CovarianceMatrix { matrix: Matrix::identity().scale(0.5), omega: 0.0, n_th: 0.0 }
    }

    #[test]
    fn zero_weights_give_zero() {
        let v = output_covariance(&SystemParams::reference(), 0.0).unwrap();
        assert_eq!(delta_e(&v, &WeightVector::zero()), 0.0);
    }

    #[test]
    fn vacuum_single_mode_weights() {
        let w = WeightVector::new([1.0, 0.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(biseparable_bound(&w), 1.0);
        assert!((delta_e(&vacuum(), &w) + 0.5).abs() < 1e-15);
        let w = WeightVector::new([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]).unwrap();
        assert!((delta_e(&vacuum(), &w) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weights_outside_box_rejected() {
        assert!(WeightVector::new([1.5, 0.0, 0.0], [0.0; 3]).is_err());
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(matches!(tripartite_witness(&vacuum(), 0, 1), Err(Error::NoSamples)));
    }

    #[test]
    fn statistics_are_deterministic() {
        let v = output_covariance(&SystemParams::reference().with_phi(0.0), 0.0).unwrap();
        let a = tripartite_witness(&v, 2000, 99).unwrap();
        let b = tripartite_witness(&v, 2000, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.min <= a.mean && a.mean <= a.max);
        assert!((0.0..=1.0).contains(&a.fraction_negative));
    }

    #[test]
    fn optimizer_never_worse_than_samples() {
        let v = output_covariance(&SystemParams::reference().with_phi(0.0), 0.0).unwrap();
        let w = tripartite_witness(&v, 500, 3).unwrap();
        let o = tripartite_optimize(&v, &w);
        assert!(o.delta_e <= w.min);
        assert!(o.weights.to_array().iter().all(|x: &f64| x.abs() <= 1.0));
    }
}
