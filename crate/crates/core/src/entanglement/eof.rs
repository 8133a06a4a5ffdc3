use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::moments::{output_covariance, reduce_pair, standard_form, CorrelationKind, Pair, ReducedCovariance, StandardFormCov, PHYSICALITY_SLACK};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EofResult<T: Real> {
    /// Minimal two-mode squeezing needed to prepare the state.
    pub r0: T,
    /// Entanglement of formation in ebits.
    pub e_f: T,
    pub kappa_inv: T,
    pub lambda_plus: T,
    pub lambda_minus: T,
}

/// `cosh²r log₂cosh²r − sinh²r log₂sinh²r`, evaluated as
/// `log₂(1+x) + x log₂(1+1/x)` with `x = sinh²r` to avoid cancellation.
pub fn entropy_of_squeezing<T: Real>(r: T) -> T {
    if !(r > T::zero()) {
        return T::zero();
    }
    let x = r.sinh().powi(2);
    (x.ln_1p() + x * x.recip().ln_1p()) / T::LN_2()
}

/// Entanglement of formation of a two-mode Gaussian state in standard form.
///
/// States certified separable by the partial-transpose test are assigned
/// `r0 = 0` outright so round-off in the closed form cannot leak through.
pub fn eof<T: Real>(s: &StandardFormCov<T>) -> Result<EofResult<T>> {
    let inv = s.invariants();
    let slack = T::lit(PHYSICALITY_SLACK);
    if !inv.is_physical(slack) {
        return Err(Error::Unphysical { nu: inv.nu_minus().as_f64() });
    }
    let (a, b, c) = (s.v_aa, s.v_cc, s.correlation);
    let four = T::lit(4.0);
    let d = a * b - c * c;
    let e = (a - b).powi(2);
    let kappa = T::two() * (T::lit(16.0) * d * d + T::one()) - four * e;
    let lambda_plus = four * (a + b + T::two() * c).powi(2);
    let lambda_minus = four * (a + b - T::two() * c).powi(2);
    let mut out = EofResult { r0: T::zero(), e_f: T::zero(), kappa_inv: kappa, lambda_plus, lambda_minus };

    let separable = s.kind == CorrelationKind::BeamSplitter || inv.nu_minus_transposed() >= T::half() - slack;
    if separable || !(lambda_minus > T::zero()) {
        return Ok(out);
    }
    // κ² − λ₊λ₋ factors as 4(4D+1)²[(4D−1)² − 4(a−b)²]. The bracket is 16x the
    // uncertainty margin, so it vanishes whenever one symplectic eigenvalue
    // sits at the vacuum value (pure states, reductions of pure states). Its
    // square root is then pure round-off noise, so values within a few ulps
    // of the working scale are snapped to zero.
    let inner = (four * d - T::one()).powi(2) - four * e;
    let noise = T::lit(64.0) * T::epsilon() * ((four * d + T::one()).powi(2) + four * e + T::lit(16.0) * a * b);
    let inner = if inner <= noise { T::zero() } else { inner };
    let root = T::two() * (four * d + T::one()) * inner.sqrt();
    let r0 = ((kappa - root) / lambda_minus).ln() / four;
    if r0 > T::zero() && r0.is_finite() {
        out.r0 = r0;
        out.e_f = entropy_of_squeezing(r0);
    }
    Ok(out)
}

/// Output covariance → pair reduction → standard form → EOF.
pub fn eof_pair<T: Real>(p: &SystemParams<T>, omega_n: T, pair: Pair) -> Result<EofResult<T>> {
    let v = output_covariance(p, omega_n)?;
    eof(&standard_form(&reduce_pair(&v, pair))?)
}

/// Logarithmic negativity `max(0, −log₂ 2ν̃₋)`.
pub fn log_negativity<T: Real>(r: &ReducedCovariance<T>) -> Result<T> {
    r.check_physical()?;
    let nu_t = r.invariants().nu_minus_transposed();
    Ok((-(T::two() * nu_t).log2()).max(T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::CorrelationKind::*;
    use std::f64::consts::{FRAC_PI_2, LOG2_E};

    fn tmsv(r: f64) -> StandardFormCov<f64> {
        StandardFormCov::new((2.0 * r).cosh() / 2.0, (2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0, Squeezing)
    }

    fn naive_entropy(r: f64) -> f64 {
        let (c2, s2) = (r.cosh().powi(2), r.sinh().powi(2));
        c2 * c2.log2() - s2 * s2.log2()
    }

    #[test]
    fn vacuum_is_separable() {
        let res = eof(&StandardFormCov::new(0.5, 0.5, 0.0, Squeezing)).unwrap();
        assert_eq!((res.r0, res.e_f), (0.0, 0.0));
    }

    #[test]
    fn pure_two_mode_squeezing() {
        for r in [0.05, 0.5, 1.0, 2.0] {
            let res = eof(&tmsv(r)).unwrap();
            assert!((res.r0 - r).abs() < 1e-12, "r={r}: {}", res.r0);
            assert!((res.e_f - naive_entropy(r)).abs() < 1e-11);
        }
    }

    #[test]
    fn entropy_is_increasing() {
        let mut last = 0.0;
        for k in 1..200 {
            let e = entropy_of_squeezing(k as f64 * 0.02);
            assert!(e > last);
            last = e;
        }
        assert_eq!(entropy_of_squeezing(0.0), 0.0);
    }

    #[test]
    fn beam_splitter_correlations_never_entangle() {
        let res = eof(&StandardFormCov::new(1.0, 1.0, 0.4, BeamSplitter)).unwrap();
        assert_eq!(res.e_f, 0.0);
    }

    #[test]
    fn unphysical_state_rejected() {
        assert!(matches!(eof(&StandardFormCov::new(0.3, 0.3, 0.0, Squeezing)), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn thermal_mixture_below_pure_value() {
        // Adding thermal noise to TMSV(1) lowers the EOF but keeps it positive.
        let pure = tmsv(1.0);
        let noisy = StandardFormCov::new(pure.v_aa + 0.2, pure.v_cc + 0.2, pure.correlation, Squeezing);
        let (e_p, e_n) = (eof(&pure).unwrap().e_f, eof(&noisy).unwrap().e_f);
        assert!(e_n > 0.0 && e_n < e_p);
    }

    #[test]
    fn log_negativity_of_tmsv() {
        for r in [0.1, 1.0] {
            let s = tmsv(r);
            let red = ReducedCovariance { matrix: s.matrix, pair: Pair::Ac };
            assert!((log_negativity(&red).unwrap() - 2.0 * r * LOG2_E).abs() < 1e-9);
        }
        let vac = StandardFormCov::new(0.5, 0.5, 0.0, Squeezing);
        assert_eq!(log_negativity(&ReducedCovariance { matrix: vac.matrix, pair: Pair::Ac }).unwrap(), 0.0);
    }

    #[test]
    fn reference_point_values() {
        let p = SystemParams::<f64>::reference();
        let ac = eof_pair(&p, 0.0, Pair::Ac).unwrap().e_f;
        assert!((ac - 8.2).abs() < 0.1, "{ac}");
        assert!(eof_pair(&p, 0.0, Pair::Ad).unwrap().e_f < 1e-8);
        let p0 = p.with_phi(0.0);
        let (x, y) = (eof_pair(&p0, 0.0, Pair::Ac).unwrap().e_f, eof_pair(&p0, 0.0, Pair::Ad).unwrap().e_f);
        assert!((x - y).abs() < 1e-9 && x > 1.0, "{x} {y}");
        assert_eq!(eof_pair(&p.with_phi(FRAC_PI_2 / 3.0), 0.4, Pair::Cd).unwrap().e_f, 0.0);
    }
}
