//! Input-output scattering: `v_out(ω) = T(ω) v_in(ω)` with
//! `T(ω) = I - i √K (ωI - iM)^{-1} √K`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{
    cooperativity, damping_matrix, dynamic_matrix, raw_dynamic_matrix, Branch, Cavity, RawCouplings, Rates,
    SystemParams,
};
use crate::numerics::{invert, ComplexMatrix, Matrix, RealMatrix};
use crate::scalar::{imag_unit, re, Cplx, Real};

/// Tolerance used when checking that parameters sit on a decoupling point.
pub const SWEET_SPOT_TOLERANCE: f64 = 1e-9;

/// Scattering matrix at one probe frequency. `T_ij` is the amplitude of input
/// mode `j` in output mode `i`, both in the order `(a†, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionMatrix<T: Real> {
    pub matrix: ComplexMatrix<T, 4>,
    pub omega: T,
    pub params: SystemParams<T>,
}

impl<T: Real> TransmissionMatrix<T> {
    /// Element with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.matrix[(i, j)]
    }

    /// `|T_ij|²` with zero-based indices.
    pub fn probability(&self, i: usize, j: usize) -> T {
        self.matrix[(i, j)].norm_sqr()
    }

    /// `max |T Σ T† - Σ|` with `Σ = diag(-1, 1, 1, 1)`.
    pub fn quasi_unitarity_defect(&self) -> T {
        let sigma = bosonic_metric::<T>();
        (self.matrix * sigma * self.matrix.adjoint()).max_abs_diff(&sigma)
    }
}

/// Commutator metric of `(a†, b, c, d)`.
pub fn bosonic_metric<T: Real>() -> ComplexMatrix<T, 4> {
    Matrix::from_diagonal([re(-T::one()), re(T::one()), re(T::one()), re(T::one())])
}

fn scatter<T: Real>(drift: &ComplexMatrix<T, 4>, sqrt_k: &RealMatrix<T, 4>, omega: T) -> Result<ComplexMatrix<T, 4>> {
    let i = imag_unit::<T>();
    let resolvent = invert(&(Matrix::identity().scale(re(omega)) - drift.scale(i)))?;
    let k = sqrt_k.to_complex();
    Ok(Matrix::identity() - (k * resolvent * k).scale(i))
}

/// `T(ω)` for a canonical operating point.
pub fn transmission<T: Real>(p: &SystemParams<T>, omega: T) -> Result<TransmissionMatrix<T>> {
    let matrix = scatter(&dynamic_matrix(p), &damping_matrix(p), omega)?;
    Ok(TransmissionMatrix { matrix, omega, params: *p })
}

/// `T(ω)` from couplings that have not been gauge reduced.
pub fn raw_transmission<T: Real>(raw: &RawCouplings<T>, rates: &Rates<T>, omega: T) -> Result<ComplexMatrix<T, 4>> {
    let sqrt_k = Matrix::from_diagonal([
        rates.kappa_a.sqrt(),
        rates.gamma_m.sqrt(),
        rates.kappa_c.sqrt(),
        rates.kappa_d.sqrt(),
    ]);
    scatter(&raw_dynamic_matrix(raw, rates), &sqrt_k, omega)
}

/// Confirms `p` sits on the decoupling point of `branch`, naming the first
/// violated condition otherwise.
pub fn check_sweet_spot<T: Real>(p: &SystemParams<T>, branch: Branch) -> Result<()> {
    let tol = T::lit(SWEET_SPOT_TOLERANCE);
    let target_phi: T = branch.phase();
    let g_x = (p.kappa_c * p.kappa_d).sqrt() / T::two();
    let g_d = match branch {
        Branch::Plus => T::two() * p.g_c * p.g_x / p.kappa_c,
        Branch::Minus => p.g_c * p.kappa_d / (T::two() * p.g_x),
    };
    let checks = [
        (p.phi, target_phi, format!("phi = {target_phi}")),
        (p.g_x, g_x, "g_x = sqrt(kappa_c kappa_d)/2".to_string()),
        (
            p.g_d_mag,
            g_d,
            match branch {
                Branch::Plus => "|g_d| = 2 g_c g_x / kappa_c".to_string(),
                Branch::Minus => "|g_d| = g_c kappa_d / (2 g_x)".to_string(),
            },
        ),
    ];
    for (actual, target, condition) in checks {
        if !((actual - target).abs() <= tol * (T::one() + target.abs())) {
            return Err(Error::SweetSpotViolation { condition });
        }
    }
    Ok(())
}

/// Resonant (`ω = 0`) scattering matrix at a decoupling point written in
/// terms of `Γ_a`, `Γ_c` and `γ_m`.
pub fn closed_form<T: Real>(p: &SystemParams<T>, branch: Branch) -> Result<TransmissionMatrix<T>> {
    check_sweet_spot(p, branch)?;
    let ga = cooperativity(p, Cavity::A);
    let gc = cooperativity(p, Cavity::C);
    let gm = p.gamma_m;
    let den = gc - ga + gm;
    if den.is_zero() {
        return Err(Error::Singular { column: 0, pivot: 0.0 });
    }
    let two = T::two();
    let i = imag_unit::<T>();
    let z = Cplx::zero();
    let t11 = re(-(gc + ga + gm) / den);
    let t12 = -i * (two * (ga * gm).sqrt() / den);
    let t21 = i * (two * (ga * gm).sqrt() / den);
    let t22 = re((gc - ga - gm) / den);
    let amp = two * (ga * gc).sqrt() / den;
    let mech = two * (gc * gm).sqrt() / den;
    let through = -i * ((gc + ga - gm) / den);

    let matrix = match branch {
        Branch::Plus => Matrix::from_rows([
            [t11, t12, z, i * amp],
            [t21, t22, z, re(mech)],
            [re(amp), i * mech, z, through],
            [z, z, i, z],
        ]),
        Branch::Minus => Matrix::from_rows([
            [t11, t12, re(-amp), z],
            [t21, t22, i * mech, z],
            [z, z, z, i],
            [-i * amp, re(mech), through, z],
        ]),
    };
    Ok(TransmissionMatrix { matrix, omega: T::zero(), params: *p })
}

/// Two-mode Bogoliubov coefficients `(u, v)` relating the entangled output
/// pair to its inputs in the `γ_m -> 0` limit; `u² - v² = 1`.
pub fn bogoliubov<T: Real>(p: &SystemParams<T>, _branch: Branch) -> Result<(T, T)> {
    let ga = cooperativity(p, Cavity::A);
    let gc = cooperativity(p, Cavity::C);
    if !(gc > ga) {
        return Err(Error::GainExceedsCooling { gamma_a: ga.as_f64(), gamma_c: gc.as_f64() });
    }
    let den = gc - ga;
    Ok(((gc + ga) / den, T::two() * (ga * gc).sqrt() / den))
}

/// Order-of-magnitude spectral halfwidth `min(κ_α, Γ_α)` over the three cavities.
pub fn halfwidth_estimate<T: Real>(p: &SystemParams<T>) -> T {
    [
        p.kappa_a,
        p.kappa_c,
        p.kappa_d,
        cooperativity(p, Cavity::A),
        cooperativity(p, Cavity::C),
        cooperativity(p, Cavity::D),
    ]
    .into_iter()
    .fold(T::infinity(), T::min)
}

/// Frequency-dependent denominator `A(ω)` shared by the scattering elements.
/// Equals `det(ωI - iM)` whenever `cos φ = 0`.
pub fn resonance_denominator<T: Real>(p: &SystemParams<T>, omega: T) -> Cplx<T> {
    let h = T::half();
    let shifted = |rate: T| Cplx::new(omega, rate * h);
    let (wa, wm, wc, wd) = (shifted(p.kappa_a), shifted(p.gamma_m), shifted(p.kappa_c), shifted(p.kappa_d));
    let gx2 = p.g_x * p.g_x;
    wa * wm * wc * wd - wa * (wm * gx2 + wd * (p.g_c * p.g_c) + wc * (p.g_d_mag * p.g_d_mag))
        + (wc * wd - gx2) * (p.g_a * p.g_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sweet_spot;
    use std::f64::consts::FRAC_PI_2;

    type P = SystemParams<f64>;

    fn decoupled() -> P {
        P { g_a: 0.0, g_c: 0.0, g_x: 0.0, g_d_mag: 0.0, ..P::reference() }
    }

    #[test]
    fn decoupled_ports_reflect() {
        let t = transmission(&decoupled(), 0.0).unwrap();
        let want = Matrix::from_diagonal([re(-1.0); 4]);
        assert!(t.matrix.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn far_detuned_is_transparent() {
        let p = P::reference();
        for omega in [-1e6 * 3.0, 1e6 * 3.0] {
            let t = transmission(&p, omega).unwrap();
            assert!(t.matrix.max_abs_diff(&Matrix::identity()) < 1e-4);
        }
    }

    #[test]
    fn reference_point_routes_c_to_d() {
        let t = transmission(&P::reference(), 0.0).unwrap();
        assert!((t.probability(3, 2) - 1.0).abs() < 1e-12);
        assert!(t.probability(0, 2) <= 1e-20);
        assert!(t.probability(0, 0) > 1.0 && t.probability(2, 0) > 1.0);
    }

    #[test]
    fn closed_form_reference_values() {
        let t = closed_form(&P::reference(), Branch::Plus).unwrap();
        let want_t11 = -(16.0 / 3.0 + 4.5 + 0.01) / (16.0 / 3.0 - 4.5 + 0.01);
        assert!((t.get(0, 0).re - want_t11).abs() < 1e-12);
        assert!((want_t11 + 11.672).abs() < 1e-3);
        assert_eq!(t.get(2, 2), re(0.0));
        assert_eq!(t.get(3, 2), Cplx::new(0.0, 1.0));
    }

    #[test]
    fn closed_form_passive_limit() {
        let p = sweet_spot(&P { gamma_m: 0.0, g_a: 0.0, ..P::reference() }, Branch::Plus);
        let t = closed_form(&p, Branch::Plus).unwrap();
        assert_eq!(t.get(0, 0), re(-1.0));
        assert_eq!(t.get(2, 0), re(0.0));
    }

    #[test]
    fn closed_form_rejects_off_sweet_spot() {
        let err = closed_form(&P::reference().with_phi(0.2), Branch::Plus).unwrap_err();
        assert!(matches!(err, Error::SweetSpotViolation { ref condition } if condition.starts_with("phi")));
        let err = closed_form(&P { g_x: 1.4, ..P::reference() }, Branch::Plus).unwrap_err();
        assert!(matches!(err, Error::SweetSpotViolation { ref condition } if condition.starts_with("g_x")));
        assert!(closed_form(&P::reference(), Branch::Minus).is_err());
    }

    #[test]
    fn closed_form_matches_resolvent_both_branches() {
        for (kc, kd) in [(3.0, 3.0), (2.0, 5.0)] {
            for branch in [Branch::Plus, Branch::Minus] {
                let p = sweet_spot(&P { kappa_c: kc, kappa_d: kd, ..P::reference() }, branch);
                let a = transmission(&p, 0.0).unwrap();
                let b = closed_form(&p, branch).unwrap();
                assert!(a.matrix.max_abs_diff(&b.matrix) < 1e-9, "{kc} {kd} {branch:?}");
            }
        }
    }

    #[test]
    fn ratio_identities_at_plus_point() {
        let p = P::reference();
        let t = transmission(&p, 0.0).unwrap();
        let t31 = t.get(2, 0);
        let (ga, gc) = (cooperativity(&p, Cavity::A), cooperativity(&p, Cavity::C));
        assert!((t.get(3, 0) / t31).norm() < 1e-12);
        assert!((t.get(2, 2) / t31).norm() < 1e-12);
        let i = imag_unit::<f64>();
        let r21 = i * ((p.gamma_m * p.kappa_c).sqrt() / (2.0 * p.g_c));
        assert!((t.get(1, 0) / t31 - r21).norm() < 1e-12);
        let r32 = i * ((p.gamma_m * p.kappa_a).sqrt() / (2.0 * p.g_a));
        assert!((t.get(2, 1) / t31 - r32).norm() < 1e-12);
        let r11 = -(ga + gc + p.gamma_m) / (2.0 * (ga * gc).sqrt());
        assert!((t.get(0, 0) / t31 - re(r11)).norm() < 1e-12);
    }

    #[test]
    fn bogoliubov_coefficients() {
        let (u, v) = bogoliubov(&P::reference(), Branch::Plus).unwrap();
        assert!((u - 11.8).abs() < 1e-12);
        assert!((v - 11.757_550_765).abs() < 1e-8);
        assert!((u * u - v * v - 1.0).abs() < 1e-10);
        let (u, v) = bogoliubov(&P { g_a: 0.0, ..P::reference() }, Branch::Plus).unwrap();
        assert_eq!((u, v), (1.0, 0.0));
        assert!(matches!(
            bogoliubov(&P { g_a: 2.5, ..P::reference() }, Branch::Minus),
            Err(Error::GainExceedsCooling { .. })
        ));
    }

    #[test]
    fn halfwidth_reference() {
        assert_eq!(halfwidth_estimate(&P::reference()), 2.0);
        let p = P { kappa_a: 0.5, kappa_c: 0.5, kappa_d: 0.5, ..P::reference() };
        assert_eq!(halfwidth_estimate(&p), 0.5);
    }

    #[test]
    fn denominator_is_resolvent_determinant_on_quarter_turn() {
        for phi in [FRAC_PI_2, -FRAC_PI_2] {
            let p = P::reference().with_phi(phi);
            for omega in [-1.3, 0.0, 0.37, 2.0] {
                let a = resonance_denominator(&p, omega);
                let m = Matrix::identity().scale(re(omega)) - dynamic_matrix(&p).scale(imag_unit());
                let det = crate::numerics::char_poly(&m)[4];
                assert!((a - det).norm() < 1e-12 * (1.0 + a.norm()), "{a} vs {det}");
            }
        }
    }

    #[test]
    fn single_precision_pipeline() {
        let p = SystemParams::<f32>::reference();
        let t = transmission(&p, 0.0).unwrap();
        assert!((t.probability(3, 2) - 1.0).abs() < 1e-4);
        assert!(t.quasi_unitarity_defect() < 1e-3);
    }
}
