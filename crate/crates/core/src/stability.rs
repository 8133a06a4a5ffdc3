//! Stability of the linearized dynamics: Routh-Hurwitz sign conditions on the
//! characteristic polynomial of `M`, checked against its roots.

use std::fmt;


use crate::error::Result;
use crate::model::{cooperativity, dynamic_matrix, Cavity, SystemParams};
use crate::numerics::poly::poly_mul;
use crate::numerics::{char_poly, quartic_roots, QuarticRoots};
use crate::scalar::{Cplx, Real};

/// Eigenvalues with `max Re(λ)` above `-STABILITY_MARGIN` count as unstable.
pub const STABILITY_MARGIN: f64 = 1e-9;

/// Imaginary coefficient parts below this fraction of the coefficient scale
/// are treated as zero.
pub const REAL_COEFF_TOLERANCE: f64 = 1e-10;

/// Coefficients of `λ⁴ + s3 λ³ + s2 λ² + s1 λ + s0 = det(λI - M)`.
///
/// `s0..s3` hold the real parts. The loop `b-c-d` adds the purely imaginary
/// contributions `s1_im = -2 G_c |G_d| G_x cos φ` and
/// `s0_im = -κ_a G_c |G_d| G_x cos φ`, which vanish at `φ = ±π/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharCoeffs<T: Real> {
    pub s3: T,
    pub s2: T,
    pub s1: T,
    pub s0: T,
    pub s1_im: T,
    pub s0_im: T,
}

impl<T: Real> CharCoeffs<T> {
    /// Coefficients highest degree first, including the leading 1.
    pub fn complex_coeffs(&self) -> [Cplx<T>; 5] {
        [
            Cplx::new(T::one(), T::zero()),
            Cplx::new(self.s3, T::zero()),
            Cplx::new(self.s2, T::zero()),
            Cplx::new(self.s1, self.s1_im),
            Cplx::new(self.s0, self.s0_im),
        ]
    }

    fn scale(&self) -> T {
        [self.s3, self.s2, self.s1, self.s0]
            .into_iter()
            .fold(T::one(), |acc, s| acc.max(s.abs()))
    }

    /// True when the polynomial has real coefficients to working precision.
    pub fn is_real(&self) -> bool {
        let tol = T::lit(REAL_COEFF_TOLERANCE) * self.scale();
        self.s1_im.abs() <= tol && self.s0_im.abs() <= tol
    }
}

pub fn char_coeffs<T: Real>(p: &SystemParams<T>) -> CharCoeffs<T> {
    let (ka, kc, kd, gm) = (p.kappa_a, p.kappa_c, p.kappa_d, p.gamma_m);
    let ga2 = p.g_a * p.g_a;
    let gc2 = p.g_c * p.g_c;
    let gd2 = p.g_d_mag * p.g_d_mag;
    let gx2 = p.g_x * p.g_x;
    let two = T::two();
    let four = T::lit(4.0);
    let eight = T::lit(8.0);
    let sixteen = T::lit(16.0);

    let s3 = (ka + kc + kd + gm) / two;
    let s2 = (ka * kc + ka * kd + kc * kd + gm * (ka + kc + kd)) / four + gx2 + gc2 + gd2 - ga2;
    let s1 = (gm * (ka * kc + ka * kd + kc * kd) + ka * kc * kd) / eight
        + (ka + gm) * gx2 / two
        + (ka + kd) * gc2 / two
        + (ka + kc) * gd2 / two
        - (kc + kd) * ga2 / two;
    let s0 = ka * gm * kc * kd / sixteen + ka * gm * gx2 / four + ka * kd * gc2 / four + ka * kc * gd2 / four
        - kc * kd * ga2 / four
        - ga2 * gx2;

    let loop_amp = p.g_c * p.g_d_mag * p.g_x * p.phi.cos();
    CharCoeffs { s3, s2, s1, s0, s1_im: -two * loop_amp, s0_im: -ka * loop_amp }
}

/// The Routh-Hurwitz condition that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhRelation {
    /// All of `s0..s3` positive.
    PositiveCoefficients,
    /// `s3 s2 - s1 > 0`.
    SecondDeterminant,
    /// `s3 s2 s1 - s1² - s0 s3² > 0`.
    ThirdDeterminant,
    /// Complex coefficients: Routh array of the real polynomial `p(λ) p̄(λ)`
    /// has a non-positive first-column entry in this row.
    ConjugateProductRow(usize),
}

impl fmt::Display for RhRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhRelation::PositiveCoefficients => f.write_str("all s_i > 0"),
            RhRelation::SecondDeterminant => f.write_str("s3 s2 - s1 > 0"),
            RhRelation::ThirdDeterminant => f.write_str("s3 s2 s1 - s1^2 - s0 s3^2 > 0"),
            RhRelation::ConjugateProductRow(r) => write!(f, "Routh row {r} of p*conj(p) > 0"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhVerdict<T: Real> {
    pub stable: bool,
    pub failing: Option<RhRelation>,
    pub coeffs: CharCoeffs<T>,
}

pub fn is_stable_rh<T: Real>(p: &SystemParams<T>) -> RhVerdict<T> {
    let coeffs = char_coeffs(p);
    let failing = if coeffs.is_real() {
        real_quartic_failure(&coeffs)
    } else {
        let c = coeffs.complex_coeffs();
        let conj: Vec<Cplx<T>> = c.iter().map(|z| z.conj()).collect();
        let product: Vec<T> = poly_mul(&c, &conj).into_iter().map(|z| z.re).collect();
        routh_first_failure(&product).map(RhRelation::ConjugateProductRow)
    };
    RhVerdict { stable: failing.is_none(), failing, coeffs }
}

fn real_quartic_failure<T: Real>(c: &CharCoeffs<T>) -> Option<RhRelation> {
    let CharCoeffs { s3, s2, s1, s0, .. } = *c;
    let zero = T::zero();
    if !(s3 > zero && s2 > zero && s1 > zero && s0 > zero) {
        Some(RhRelation::PositiveCoefficients)
    } else if !(s3 * s2 - s1 > zero) {
        Some(RhRelation::SecondDeterminant)
    } else if !(s3 * s2 * s1 - s1 * s1 - s0 * s3 * s3 > zero) {
        Some(RhRelation::ThirdDeterminant)
    } else {
        None
    }
}

/// First row of the Routh array whose leading entry is not positive, for a
/// real polynomial given highest degree first with positive leading term.
pub fn routh_first_failure<T: Real>(coeffs: &[T]) -> Option<usize> {
    let n = coeffs.len() - 1;
    let width = n / 2 + 1;
    let mut prev: Vec<T> = (0..width).map(|j| coeffs.get(2 * j).copied().unwrap_or(T::zero())).collect();
    let mut cur: Vec<T> = (0..width).map(|j| coeffs.get(2 * j + 1).copied().unwrap_or(T::zero())).collect();
    if !(prev[0] > T::zero()) {
        return Some(0);
    }
    for row in 1..=n {
        if !(cur[0] > T::zero()) {
            return Some(row);
        }
        let next: Vec<T> = (0..width)
            .map(|j| {
                let a = prev.get(j + 1).copied().unwrap_or(T::zero());
                let b = cur.get(j + 1).copied().unwrap_or(T::zero());
                (cur[0] * a - prev[0] * b) / cur[0]
            })
            .collect();
        prev = cur;
        cur = next;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigVerdict<T: Real> {
    pub stable: bool,
    pub max_re: T,
    pub roots: QuarticRoots<T>,
}

/// Eigenvalues of `M` as roots of `det(λI - M)`, with the polynomial built
/// numerically from the matrix itself.
pub fn eigenvalues<T: Real>(p: &SystemParams<T>) -> Result<QuarticRoots<T>> {
    let c = char_poly(&dynamic_matrix(p));
    quartic_roots(c[0], c[1], c[2], c[3], c[4])
}

pub fn is_stable_eig<T: Real>(p: &SystemParams<T>) -> Result<EigVerdict<T>> {
    let roots = eigenvalues(p)?;
    let max_re = roots.max_real_part();
    Ok(EigVerdict { stable: max_re < -T::lit(STABILITY_MARGIN), max_re, roots })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxVerdict {
    pub stable: bool,
    /// Preconditions of the approximation that fail by more than a factor 0.1.
    pub warnings: Vec<String>,
}

/// Weak-damping, impedance-matched approximation: stable iff `Γ_{c,d} > Γ_a`.
pub fn approx_condition<T: Real>(p: &SystemParams<T>) -> ApproxVerdict {
    let ga = cooperativity(p, Cavity::A);
    let gc = cooperativity(p, Cavity::C);
    let gd = cooperativity(p, Cavity::D);
    let tenth = T::lit(0.1);
    let mut warnings = Vec::new();
    let smallest = [p.kappa_a, p.kappa_c, p.kappa_d, p.g_a, p.g_c, p.g_d_mag]
        .into_iter()
        .filter(|x| *x > T::zero())
        .fold(T::infinity(), T::min);
    if p.gamma_m > tenth * smallest {
        warnings.push(format!("gamma_m = {} is not << kappa, G (smallest {})", p.gamma_m, smallest));
    }
    let mismatch = (gc - gd).abs();
    if mismatch > tenth * gc.max(gd) {
        warnings.push(format!("not impedance matched: Gamma_c = {gc}, Gamma_d = {gd}"));
    }
    // Without blue-sideband gain the network is passive.
    let stable = ga.is_zero() || gc.min(gd) > ga;
    ApproxVerdict { stable, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sweet_spot, Branch};

    type P = SystemParams<f64>;

    fn decoupled() -> P {
        P { g_a: 0.0, g_c: 0.0, g_x: 0.0, g_d_mag: 0.0, ..P::reference() }
    }

    #[test]
    fn decoupled_coefficients_are_pole_products() {
        let p = decoupled();
        let c = char_coeffs(&p);
        assert!((c.s3 - (2.0 + 3.0 + 3.0 + 0.01) / 2.0).abs() < 1e-14);
        assert!((c.s0 - 2.0 * 0.01 * 3.0 * 3.0 / 16.0).abs() < 1e-15);
        let mut re: Vec<f64> = eigenvalues(&p).unwrap().roots.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [-1.5, -1.5, -1.0, -0.005];
        for (a, b) in re.iter().zip(want) {
            assert!((a - b).abs() < 1e-7, "{re:?}");
        }
    }

    #[test]
    fn closed_form_matches_numeric_polynomial() {
        for phi in [0.0, 0.4, std::f64::consts::FRAC_PI_2, -2.0, std::f64::consts::PI] {
            let p = P::reference().with_phi(phi);
            let c = char_coeffs(&p).complex_coeffs();
            let numeric = char_poly(&dynamic_matrix(&p));
            for (a, b) in c.iter().zip(&numeric) {
                assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "phi={phi}: {a} vs {b}");
            }
        }
        assert!(char_coeffs(&P::reference()).is_real());
        assert!(!char_coeffs(&P::reference().with_phi(0.0)).is_real());
    }

    #[test]
    fn reference_point_is_stable() {
        let p = P::reference();
        assert!(is_stable_rh(&p).stable);
        let e = is_stable_eig(&p).unwrap();
        assert!(e.stable && e.max_re < 0.0);
        assert!(approx_condition(&p).stable);
    }

    #[test]
    fn strong_gain_is_unstable() {
        let p = P { g_a: 2.5, ..P::reference() };
        let rh = is_stable_rh(&p);
        assert!(!rh.stable);
        assert!(!is_stable_eig(&p).unwrap().stable);
        assert!(!approx_condition(&p).stable);
    }

    #[test]
    fn s0_sign_flip_fails_first_relation() {
        let base = P::reference();
        let mut g_a = 0.0;
        while char_coeffs(&P { g_a, ..base }).s0 > 0.0 {
            g_a += 0.01;
        }
        let p = P { g_a, ..base };
        assert_eq!(is_stable_rh(&p).failing, Some(RhRelation::PositiveCoefficients));
        assert!(is_stable_eig(&p).unwrap().max_re > 0.0);
    }

    #[test]
    fn passive_configurations_are_stable() {
        for phi in [-3.0, -1.0, 0.0, 0.5, 2.5] {
            let p = P { g_a: 0.0, ..P::reference() }.with_phi(phi);
            assert!(is_stable_rh(&p).stable, "phi={phi}");
            assert!(is_stable_eig(&p).unwrap().stable);
        }
        assert!(approx_condition(&P { g_a: 0.0, ..P::reference() }).stable);
    }

    #[test]
    fn approximate_boundary_is_unstable() {
        let p = P::reference();
        // Γ_a = Γ_c exactly
        let g_a = (p.kappa_a / p.kappa_c).sqrt() * p.g_c;
        assert!(!approx_condition(&P { g_a, ..p }).stable);
        let w = approx_condition(&P { gamma_m: 1.0, ..p }).warnings;
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn onset_along_g_a_is_single_and_at_matched_rates() {
        let base = sweet_spot(&P::reference(), Branch::Plus);
        let step = 0.001;
        let verdicts: Vec<bool> = (0..=3000).map(|k| is_stable_rh(&P { g_a: k as f64 * step, ..base }).stable).collect();
        let flips: Vec<usize> = (1..verdicts.len()).filter(|&k| verdicts[k] != verdicts[k - 1]).collect();
        assert_eq!(flips.len(), 1);
        let onset = flips[0] as f64 * step;
        let g_a_match = (base.kappa_a / base.kappa_c).sqrt() * base.g_c;
        // γ_m shifts the exact onset to Γ_a = Γ_c + γ_m.
        let g_a_exact = ((16.0 / 3.0 + 0.01) * base.kappa_a / 4.0f64).sqrt();
        assert!((onset - g_a_exact).abs() <= step);
        assert!((onset - g_a_match).abs() <= 0.01);
    }

    #[test]
    fn routh_array_known_cases() {
        // (x+1)(x+2)(x+3)
        assert_eq!(routh_first_failure(&[1.0, 6.0, 11.0, 6.0]), None);
        // (x-1)(x+2)(x+3)
        assert!(routh_first_failure(&[1.0, 4.0, 1.0, -6.0]).is_some());
        // x^2 + 1 is marginal
        assert!(routh_first_failure(&[1.0, 0.0, 1.0]).is_some());
    }
}
