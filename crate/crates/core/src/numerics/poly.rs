//! Characteristic polynomials and polynomial root finding.

use num_traits::{One, Zero};

use super::matrix::{Entry, Matrix};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Iteration cap for the simultaneous root iteration.
pub const MAX_ROOT_ITERATIONS: usize = 10_000;

/// Residual bound relative to the largest coefficient modulus.
pub const ROOT_RESIDUAL: f64 = 1e-8;

/// Coefficients of `det(x I - m)`, highest degree first (leading entry is 1).
///
/// Faddeev-LeVerrier recursion; exact in exact arithmetic and adequate for
/// the 4x4 and 6x6 matrices this crate works with.
pub fn char_poly<E: Entry, const N: usize>(m: &Matrix<E, N>) -> Vec<E> {
    let mut coeffs = Vec::with_capacity(N + 1);
    coeffs.push(E::one());
    let mut aux = Matrix::<E, N>::zeros();
    let mut c = E::one();
    for k in 1..=N {
        aux = *m * aux + Matrix::identity().scale(c);
        let k_e = E::from_real(<E::Real as Real>::lit(k as f64));
        c = -((*m * aux).trace()) / k_e;
        coeffs.push(c);
    }
    coeffs
}

/// Horner evaluation; coefficients highest degree first.
pub fn eval<T: Real>(coeffs: &[Cplx<T>], z: Cplx<T>) -> Cplx<T> {
    coeffs.iter().fold(Cplx::zero(), |acc, &c| acc * z + c)
}

fn eval_with_derivative<T: Real>(coeffs: &[Cplx<T>], z: Cplx<T>) -> (Cplx<T>, Cplx<T>) {
    let mut p = Cplx::zero();
    let mut dp = Cplx::zero();
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Product of two polynomials, highest degree first.
pub fn poly_mul<E: Entry>(a: &[E], b: &[E]) -> Vec<E> {
    let mut out = vec![E::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

fn residual_tolerance<T: Real>() -> T {
    T::lit(ROOT_RESIDUAL).max(T::epsilon() * T::lit(1e4))
}

/// All roots of a polynomial (highest degree first) by Aberth-Ehrlich
/// iteration followed by Newton polishing.
///
/// Fails with [`Error::NoConvergence`] rather than returning roots whose
/// residual exceeds [`ROOT_RESIDUAL`] times the largest coefficient.
pub fn roots<T: Real>(coeffs: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
    let lead = *coeffs.first().ok_or(Error::DegeneratePolynomial)?;
    if lead.norm().is_zero() {
        return Err(Error::DegeneratePolynomial);
    }
    let monic: Vec<Cplx<T>> = coeffs.iter().map(|&c| c / lead).collect();
    let n = monic.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }

    // Cauchy bound on root moduli.
    let bound = T::one() + monic[1..].iter().fold(T::zero(), |acc, c| acc.max(c.norm()));
    let radius = bound * T::half();
    let mut z: Vec<Cplx<T>> = (0..n)
        .map(|k| {
            let angle = T::lit(0.4) + T::TAU() * T::lit(k as f64) / T::lit(n as f64);
            Cplx::from_polar(radius, angle)
        })
        .collect();

    let eps = T::epsilon();
    let mut converged = false;
    for _ in 0..MAX_ROOT_ITERATIONS {
        let mut max_step = T::zero();
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm().is_zero() {
                continue;
            }
            let newton = p / dp;
            let repulsion = (0..n)
                .filter(|&j| j != i)
                .fold(Cplx::<T>::zero(), |acc, j| acc + (z[i] - z[j]).inv());
            let step: Cplx<T> = newton / (Cplx::<T>::one() - newton * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[i] = z[i] - step;
            max_step = max_step.max(step.norm() / (T::one() + z[i].norm()));
        }
        if max_step <= eps * T::lit(4.0) {
            converged = true;
            break;
        }
    }

    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&monic, *zi);
            if dp.norm().is_zero() {
                break;
            }
            let cand = *zi - p / dp;
            if eval(&monic, cand).norm() < p.norm() {
                *zi = cand;
            } else {
                break;
            }
        }
    }

    let scale = monic.iter().fold(T::zero(), |acc, c| acc.max(c.norm()));
    let worst = z.iter().fold(T::zero(), |acc, &zi| acc.max(eval(&monic, zi).norm()));
    if worst > residual_tolerance::<T>() * scale || (!converged && worst > eps * scale) {
        return Err(Error::NoConvergence { iterations: MAX_ROOT_ITERATIONS, residual: worst.as_f64() });
    }
    Ok(z)
}

/// Roots of a quartic with their residuals `|p(root)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticRoots<T: Real> {
    pub roots: [Cplx<T>; 4],
    pub residuals: [T; 4],
}

impl<T: Real> QuarticRoots<T> {
    pub fn max_real_part(&self) -> T {
        self.roots.iter().fold(T::neg_infinity(), |acc, r| acc.max(r.re))
    }
}

/// Solves `c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0 = 0`.
pub fn quartic_roots<T: Real>(
    c4: Cplx<T>,
    c3: Cplx<T>,
    c2: Cplx<T>,
    c1: Cplx<T>,
    c0: Cplx<T>,
) -> Result<QuarticRoots<T>> {
    let coeffs = [c4, c3, c2, c1, c0];
    let found = roots(&coeffs)?;
    let roots: [Cplx<T>; 4] = std::array::from_fn(|i| found[i]);
    let residuals = std::array::from_fn(|i| eval(&coeffs, roots[i]).norm());
    Ok(QuarticRoots { roots, residuals })
}
