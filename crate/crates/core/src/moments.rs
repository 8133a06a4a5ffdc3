//! Second moments of the filtered output modes.
//!
//! Quadratures are `X = (o + o†)/√2`, `P = (o - o†)/(√2 i)`, so the vacuum
//! variance is `1/2`. The 6x6 covariance is ordered
//! `(X_a, P_a, X_c, P_c, X_d, P_d)` and evaluated with `T` at the bin centre
//! `ω_n`; the filter width never enters.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::numerics::{cholesky, symmetric_eigenvalues, Matrix, RealMatrix};
use crate::scalar::{Cplx, Real};
use crate::scattering::{transmission, TransmissionMatrix};
use crate::stability::{is_stable_eig, is_stable_rh};

/// Slack allowed below the vacuum bound when testing physicality.
pub const PHYSICALITY_SLACK: f64 = 1e-9;

/// Tolerated departure from the expected two-mode block structure, relative
/// to the largest entry.
pub const STRUCTURE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix<T: Real> {
    pub matrix: RealMatrix<T, 6>,
    pub omega: T,
    pub n_th: T,
}

/// Complex second-moment coefficients `v_αβ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCoefficients<T: Real> {
    pub v_aa: T,
    pub v_cc: T,
    pub v_dd: T,
    pub v_ac: Cplx<T>,
    pub v_ad: Cplx<T>,
    pub v_cd: Cplx<T>,
}

impl<T: Real> MomentCoefficients<T> {
    pub fn from_transmission(t: &TransmissionMatrix<T>, n_th: T) -> Self {
        let weights = [T::one(), T::two() * n_th + T::one(), T::one(), T::one()];
        let v = |i: usize, j: usize| {
            (0..4).fold(Cplx::zero(), |acc: Cplx<T>, k| acc + t.get(i, k) * t.get(j, k).conj() * weights[k])
                * T::half()
        };
        Self {
            v_aa: v(0, 0).re,
            v_cc: v(2, 2).re,
            v_dd: v(3, 3).re,
            v_ac: v(0, 2),
            v_ad: v(0, 3),
            v_cd: v(2, 3),
        }
    }

    /// Assembles the 6x6 covariance.
    ///
    /// Output `a` enters `T` through `a†`, so its correlations with `c` and `d`
    /// are of two-mode-squeezing type `[[Re v, -Im v], [-Im v, -Re v]]`. The
    /// `c-d` correlation links two annihilation operators and takes the
    /// beam-splitter form `[[Re v, -Im v], [Im v, Re v]]`.
    pub fn assemble(&self) -> RealMatrix<T, 6> {
        let squeeze = |v: Cplx<T>| [[v.re, -v.im], [-v.im, -v.re]];
        let mix = |v: Cplx<T>| [[v.re, -v.im], [v.im, v.re]];
        let mut m = Matrix::<T, 6>::zeros();
        for (k, d) in [self.v_aa, self.v_cc, self.v_dd].into_iter().enumerate() {
            m[(2 * k, 2 * k)] = d;
            m[(2 * k + 1, 2 * k + 1)] = d;
        }
        for (bi, bj, block) in [(0, 1, squeeze(self.v_ac)), (0, 2, squeeze(self.v_ad)), (1, 2, mix(self.v_cd))] {
            for r in 0..2 {
                for c in 0..2 {
                    m[(2 * bi + r, 2 * bj + c)] = block[r][c];
                    m[(2 * bj + c, 2 * bi + r)] = block[r][c];
                }
            }
        }
        m
    }
}

/// Stationary output covariance at `omega_n`. Unstable operating points are
/// rejected because no stationary state exists there.
pub fn output_covariance<T: Real>(p: &SystemParams<T>, omega_n: T) -> Result<CovarianceMatrix<T>> {
    if !is_stable_rh(p).stable {
        let max_re = is_stable_eig(p).map(|e| e.max_re.as_f64()).unwrap_or(f64::NAN);
        return Err(Error::Unstable { max_re });
    }
    let t = transmission(p, omega_n)?;
    let coeffs = MomentCoefficients::from_transmission(&t, p.n_th);
    Ok(CovarianceMatrix { matrix: coeffs.assemble(), omega: omega_n, n_th: p.n_th })
}

impl<T: Real> CovarianceMatrix<T> {
    pub fn symplectic_eigenvalues(&self) -> Result<[T; 3]> {
        let nu = symplectic_spectrum(&self.matrix)?;
        Ok([nu[0], nu[2], nu[4]])
    }

    /// Fails with [`Error::Unphysical`] when some symplectic eigenvalue is
    /// below `1/2 - PHYSICALITY_SLACK`.
    pub fn check_physical(&self) -> Result<()> {
        let nu = self.symplectic_eigenvalues()?;
        check_bound(nu[0])
    }
}

fn check_bound<T: Real>(nu_min: T) -> Result<()> {
    if nu_min < T::half() - T::lit(PHYSICALITY_SLACK) {
        Err(Error::Unphysical { nu: nu_min.as_f64() })
    } else {
        Ok(())
    }
}

/// Symplectic spectrum (each value repeated twice, ascending) of a real
/// symmetric `N x N` covariance with `N = 2 x modes`.
pub fn symplectic_spectrum<T: Real, const N: usize>(v: &RealMatrix<T, N>) -> Result<[T; N]> {
    // V = L Lᵀ makes Lᵀ Ω L antisymmetric and similar to Ω V; its singular
    // values are the symplectic eigenvalues.
    let l = cholesky(v).ok_or(Error::Unphysical { nu: 0.0 })?;
    let omega = symplectic_form::<T, N>();
    let s = l.transpose() * omega * l;
    let sq = s.transpose() * s;
    Ok(symmetric_eigenvalues(&sq).map(|x| x.max(T::zero()).sqrt()))
}

pub fn symplectic_form<T: Real, const N: usize>() -> RealMatrix<T, N> {
    Matrix::from_fn(|i, j| {
        if i % 2 == 0 && j == i + 1 {
            T::one()
        } else if i % 2 == 1 && j + 1 == i {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// Bipartition of the three output cavities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    Ac,
    Ad,
    Cd,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::Ac, Pair::Ad, Pair::Cd];

    fn quadrature_indices(self) -> [usize; 4] {
        match self {
            Pair::Ac => [0, 1, 2, 3],
            Pair::Ad => [0, 1, 4, 5],
            Pair::Cd => [2, 3, 4, 5],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::Ac => "ac",
            Pair::Ad => "ad",
            Pair::Cd => "cd",
        }
    }
}

impl FromStr for Pair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ac" | "ca" => Ok(Pair::Ac),
            "ad" | "da" => Ok(Pair::Ad),
            "cd" | "dc" => Ok(Pair::Cd),
            other => Err(Error::InvalidPair(other.to_string())),
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Two-mode covariance `[[A, C], [Cᵀ, B]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCovariance<T: Real> {
    pub matrix: RealMatrix<T, 4>,
    pub pair: Pair,
}

pub fn reduce_pair<T: Real>(v: &CovarianceMatrix<T>, pair: Pair) -> ReducedCovariance<T> {
    ReducedCovariance { matrix: v.matrix.submatrix(pair.quadrature_indices()), pair }
}

fn det2<T: Real>(m: &RealMatrix<T, 4>, r: usize, c: usize) -> T {
    m[(r, c)] * m[(r + 1, c + 1)] - m[(r, c + 1)] * m[(r + 1, c)]
}

fn det4<T: Real>(m: &RealMatrix<T, 4>) -> T {
    let mut lu = *m;
    let mut det = T::one();
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&a, &b| lu[(a, col)].abs().partial_cmp(&lu[(b, col)].abs()).unwrap())
            .unwrap();
        if lu[(piv, col)].is_zero() {
            return T::zero();
        }
        if piv != col {
            for j in 0..4 {
                let t = lu[(piv, j)];
                lu[(piv, j)] = lu[(col, j)];
                lu[(col, j)] = t;
            }
            det = -det;
        }
        det = det * lu[(col, col)];
        for r in (col + 1)..4 {
            let f = lu[(r, col)] / lu[(col, col)];
            for j in col..4 {
                lu[(r, j)] = lu[(r, j)] - f * lu[(col, j)];
            }
        }
    }
    det
}

/// Local symplectic invariants of a two-mode covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeInvariants<T: Real> {
    pub det_a: T,
    pub det_b: T,
    pub det_c: T,
    pub det_v: T,
}

impl<T: Real> TwoModeInvariants<T> {
    pub fn of(m: &RealMatrix<T, 4>) -> Self {
        Self { det_a: det2(m, 0, 0), det_b: det2(m, 2, 2), det_c: det2(m, 0, 2), det_v: det4(m) }
    }

    /// Smaller symplectic eigenvalue.
    pub fn nu_minus(&self) -> T {
        smaller_root(self.det_a + self.det_b + T::two() * self.det_c, self.det_v)
    }

    /// `det V − Δ/4 + 1/16`, the product `(ν₋² − ¼)(ν₊² − ¼)`; it stays
    /// linear in round-off where `ν₋` itself is square-root sensitive (pure
    /// states have `ν₋ = ν₊`).
    pub fn uncertainty_margin(&self) -> T {
        let delta = self.det_a + self.det_b + T::two() * self.det_c;
        self.det_v - delta / T::lit(4.0) + T::lit(0.0625)
    }

    /// Heisenberg condition `ν₋ ≥ 1/2` up to `slack`.
    pub fn is_physical(&self, slack: T) -> bool {
        let delta = self.det_a + self.det_b + T::two() * self.det_c;
        // det V is a quartic in the entries; its round-off scales like Δ².
        let scale = T::one() + delta * delta;
        let by_margin = self.uncertainty_margin() >= -slack * scale && delta >= T::half() - slack;
        by_margin || self.nu_minus() >= T::half() - slack
    }

    /// Smaller symplectic eigenvalue of the partial transpose.
    pub fn nu_minus_transposed(&self) -> T {
        smaller_root(self.det_a + self.det_b - T::two() * self.det_c, self.det_v)
    }
}

/// `sqrt` of the smaller root of `x² - Δ x + det = 0`, computed without cancellation.
fn smaller_root<T: Real>(delta: T, det: T) -> T {
    let disc = (delta * delta - T::lit(4.0) * det).max(T::zero()).sqrt();
    let large = (delta + disc) / T::two();
    if large <= T::zero() {
        return T::zero();
    }
    (det.max(T::zero()) / large).sqrt()
}

impl<T: Real> ReducedCovariance<T> {
    pub fn invariants(&self) -> TwoModeInvariants<T> {
        TwoModeInvariants::of(&self.matrix)
    }

    pub fn check_physical(&self) -> Result<()> {
        let inv = self.invariants();
        if inv.is_physical(T::lit(PHYSICALITY_SLACK)) {
            Ok(())
        } else {
            Err(Error::Unphysical { nu: inv.nu_minus().as_f64() })
        }
    }

    /// Embeds the pair back into a 6x6 matrix that is zero elsewhere.
    pub fn embed(&self) -> RealMatrix<T, 6> {
        let idx = self.pair.quadrature_indices();
        let mut out = Matrix::<T, 6>::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out[(idx[i], idx[j])] = self.matrix[(i, j)];
            }
        }
        out
    }
}

/// Kind of inter-mode correlation after local rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationKind {
    /// Correlation block `diag(|v|, -|v|)`: two-mode squeezing type.
    Squeezing,
    /// Correlation block `diag(|v|, |v|)`: beam-splitter type, always separable.
    BeamSplitter,
}

/// Two-mode covariance with diagonal blocks `v_aa I`, `v_cc I` and a diagonal
/// correlation block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormCov<T: Real> {
    pub v_aa: T,
    pub v_cc: T,
    /// `|v_ac|`.
    pub correlation: T,
    pub kind: CorrelationKind,
    /// Phase rotation applied to the second mode.
    pub rotation: T,
    pub matrix: RealMatrix<T, 4>,
}

impl<T: Real> StandardFormCov<T> {
    /// Builds a standard-form state directly from its entries.
    pub fn new(v_aa: T, v_cc: T, correlation: T, kind: CorrelationKind) -> Self {
        let c = correlation.abs();
        let cp = match kind {
            CorrelationKind::Squeezing => -c,
            CorrelationKind::BeamSplitter => c,
        };
        let z = T::zero();
        let matrix = Matrix::from_rows([[v_aa, z, c, z], [z, v_aa, z, cp], [c, z, v_cc, z], [z, cp, z, v_cc]]);
        Self { v_aa, v_cc, correlation: c, kind, rotation: T::zero(), matrix }
    }

    pub fn invariants(&self) -> TwoModeInvariants<T> {
        TwoModeInvariants::of(&self.matrix)
    }
}

/// Rotates the second mode so the correlation block becomes diagonal.
pub fn standard_form<T: Real>(r: &ReducedCovariance<T>) -> Result<StandardFormCov<T>> {
    let m = &r.matrix;
    let scale = m.max_abs().max(T::one());
    let tol = T::lit(STRUCTURE_TOLERANCE) * scale;
    let diag_dev = [(0usize, 0usize), (2, 2)]
        .into_iter()
        .map(|(i, _)| (m[(i, i)] - m[(i + 1, i + 1)]).abs().max(m[(i, i + 1)].abs()).max(m[(i + 1, i)].abs()))
        .fold(T::zero(), T::max);
    let asym = m.asymmetry();
    if diag_dev > tol || asym > tol {
        return Err(Error::Structure { deviation: diag_dev.max(asym).as_f64() });
    }
    let (c11, c12, c21, c22) = (m[(0, 2)], m[(0, 3)], m[(1, 2)], m[(1, 3)]);
    // Squeezing type [[x, y], [y, -x]]; beam-splitter type [[x, -y], [y, x]].
    let squeeze_dev = (c12 - c21).abs().max((c11 + c22).abs());
    let mix_dev = (c12 + c21).abs().max((c11 - c22).abs());
    let kind = if squeeze_dev <= mix_dev { CorrelationKind::Squeezing } else { CorrelationKind::BeamSplitter };
    if squeeze_dev.min(mix_dev) > tol {
        return Err(Error::Structure { deviation: squeeze_dev.min(mix_dev).as_f64() });
    }
    // Both forms are |v| times a rotation/reflection with angle atan2(-c12, c11).
    let angle = (-c12).atan2(c11);
    let (s, c) = angle.sin_cos();
    let z = T::zero();
    let o = T::one();
    let local = Matrix::from_rows([[o, z, z, z], [z, o, z, z], [z, z, c, -s], [z, z, s, c]]);
    let matrix = local * *m * local.transpose();
    let v_aa = (m[(0, 0)] + m[(1, 1)]) / T::two();
    let v_cc = (m[(2, 2)] + m[(3, 3)]) / T::two();
    let correlation = c11.hypot(c12);
    Ok(StandardFormCov { v_aa, v_cc, correlation, kind, rotation: angle, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sweet_spot, Branch};
    use std::f64::consts::FRAC_PI_2;

    type P = SystemParams<f64>;

    fn decoupled() -> P {
        P { g_a: 0.0, g_c: 0.0, g_x: 0.0, g_d_mag: 0.0, ..P::reference() }
    }

    #[test]
    fn decoupled_outputs_are_vacuum() {
        for n_th in [0.0, 7.0] {
            let v = output_covariance(&decoupled().with_n_th(n_th), 0.0).unwrap();
            assert!(v.matrix.max_abs_diff(&Matrix::identity().scale(0.5)) < 1e-14);
        }
    }

    #[test]
    fn passive_network_maps_vacuum_to_vacuum() {
        let p = sweet_spot(&P { g_a: 0.0, ..P::reference() }, Branch::Plus);
        for omega in [0.0, 0.7] {
            let v = output_covariance(&p, omega).unwrap();
            assert!(v.matrix.max_abs_diff(&Matrix::identity().scale(0.5)) < 1e-12);
        }
    }

    #[test]
    fn quarter_turn_decouples_d() {
        let v = output_covariance(&P::reference(), 0.0).unwrap();
        for (i, j) in [(0, 4), (0, 5), (1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5)] {
            assert!(v.matrix[(i, j)].abs() < 1e-10);
        }
        let ac = reduce_pair(&v, Pair::Ac);
        assert!(ac.matrix[(0, 2)].abs() + ac.matrix[(0, 3)].abs() > 1.0);
        // Mirror image at -π/2.
        let v = output_covariance(&P::reference().with_phi(-FRAC_PI_2), 0.0).unwrap();
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 5)] {
            assert!(v.matrix[(i, j)].abs() < 1e-10);
        }
    }

    #[test]
    fn covariance_is_symmetric_and_physical() {
        for phi in [-2.0, 0.0, 0.4, FRAC_PI_2, 3.0] {
            let v = output_covariance(&P::reference().with_phi(phi).with_n_th(3.0), 0.3).unwrap();
            assert!(v.matrix.asymmetry() < 1e-12);
            v.check_physical().unwrap();
        }
    }

    #[test]
    fn unstable_point_rejected() {
        let err = output_covariance(&P { g_a: 2.5, ..P::reference() }, 0.0).unwrap_err();
        assert!(matches!(err, Error::Unstable { max_re } if max_re > 0.0));
    }

    #[test]
    fn local_variances_grow_with_bath() {
        let p = P::reference().with_phi(0.3);
        let mut last = [0.0; 3];
        for n in [0.0, 1.0, 10.0, 100.0] {
            let v = output_covariance(&p.with_n_th(n), 0.2).unwrap();
            let cur = [v.matrix[(0, 0)], v.matrix[(2, 2)], v.matrix[(4, 4)]];
            for k in 0..3 {
                assert!(cur[k] >= last[k]);
            }
            last = cur;
        }
    }

    #[test]
    fn block_diagonal_pair_has_no_correlation() {
        let v = CovarianceMatrix { matrix: Matrix::identity().scale(0.7), omega: 0.0, n_th: 0.0 };
        let r = reduce_pair(&v, Pair::Ac);
        assert_eq!(r.matrix.submatrix([0, 1]), Matrix::identity().scale(0.7));
        assert_eq!(r.matrix[(0, 2)], 0.0);
        let again = reduce_pair(&CovarianceMatrix { matrix: r.embed(), ..v }, Pair::Ac);
        assert_eq!(again, r);
        assert!("ab".parse::<Pair>().is_err());
    }

    #[test]
    fn standard_form_leaves_standard_input_alone() {
        let s = StandardFormCov::new(2.0, 1.5, 1.2, CorrelationKind::Squeezing);
        let r = ReducedCovariance { matrix: s.matrix, pair: Pair::Ac };
        let out = standard_form(&r).unwrap();
        assert!(out.matrix.max_abs_diff(&s.matrix) < 1e-15);
        assert_eq!(out.kind, CorrelationKind::Squeezing);
    }

    #[test]
    fn imaginary_correlation_rotates_to_diagonal() {
        // v_ac = i 0.8: block [[0, -0.8], [-0.8, 0]]
        let v = MomentCoefficients {
            v_aa: 1.0,
            v_cc: 1.0,
            v_dd: 0.5,
            v_ac: Cplx::new(0.0, 0.8),
            v_ad: Cplx::zero(),
            v_cd: Cplx::zero(),
        };
        let cov = CovarianceMatrix { matrix: v.assemble(), omega: 0.0, n_th: 0.0 };
        let s = standard_form(&reduce_pair(&cov, Pair::Ac)).unwrap();
        assert!((s.rotation - FRAC_PI_2).abs() < 1e-15);
        let want = StandardFormCov::new(1.0, 1.0, 0.8, CorrelationKind::Squeezing);
        assert!(s.matrix.max_abs_diff(&want.matrix) < 1e-15);
    }

    #[test]
    fn structure_violation_reported() {
        let mut m = Matrix::<f64, 4>::identity();
        m[(0, 0)] = 2.0;
        assert!(matches!(standard_form(&ReducedCovariance { matrix: m, pair: Pair::Ac }), Err(Error::Structure { .. })));
    }

    #[test]
    fn symplectic_spectrum_of_thermal_state() {
        let v = Matrix::<f64, 6>::from_diagonal([0.5, 0.5, 1.5, 1.5, 3.0, 3.0]);
        let nu = symplectic_spectrum(&v).unwrap();
        for (a, b) in nu.iter().zip([0.5, 0.5, 1.5, 1.5, 3.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
