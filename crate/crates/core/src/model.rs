//! Operating point of the three-cavity interface and the linear dynamics it
//! induces.
//!
//! Modes are ordered `(a†, b, c, d)` everywhere: cavity `a` enters through its
//! creation operator because it is driven on the blue sideband. All rates and
//! couplings are stored as the `x/2π` values in MHz; no factor of 2π is ever
//! applied because every quantity computed downstream depends only on ratios of
//! these rates (or is a sign condition).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, Matrix, RealMatrix};
use crate::scalar::{imag_unit, re, Cplx, Real};

/// Planck constant (J s), exact in the 2018 CODATA adjustment.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Boltzmann constant (J/K), exact in the 2018 CODATA adjustment.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Wraps an angle into `(-π, π]`.
pub fn normalize_phase<T: Real>(phi: T) -> T {
    let tau = T::TAU();
    let mut x = phi % tau;
    if x > T::PI() {
        x = x - tau;
    } else if x <= -T::PI() {
        x = x + tau;
    }
    x
}

/// Canonical operating point: `G_a`, `G_c`, `G_x` real and non-negative,
/// `G_d = |G_d| e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T: Real> {
    pub kappa_a: T,
    pub kappa_c: T,
    pub kappa_d: T,
    pub gamma_m: T,
    pub g_a: T,
    pub g_c: T,
    pub g_x: T,
    pub g_d_mag: T,
    /// Gauge phase of the `b-c-d` loop, in `(-π, π]`.
    pub phi: T,
    pub n_th: T,
}

impl<T: Real> SystemParams<T> {
    /// Operating point of the two-cavity-symmetric reference configuration:
    /// `κ_a = 2`, `κ_c = κ_d = 3`, `γ_m = 0.01`, `G_a = 1.5`, `G_c = 2` (MHz),
    /// impedance matched with `G_x = √(κ_c κ_d)/2`, `|G_d| = G_c √(κ_d/κ_c)`,
    /// at `φ = π/2` and zero thermal occupancy.
    pub fn reference() -> Self {
        let kappa_c = T::lit(3.0);
        let kappa_d = T::lit(3.0);
        let g_c = T::lit(2.0);
        Self {
            kappa_a: T::lit(2.0),
            kappa_c,
            kappa_d,
            gamma_m: T::lit(0.01),
            g_a: T::lit(1.5),
            g_c,
            g_x: (kappa_c * kappa_d).sqrt() / T::two(),
            g_d_mag: g_c * (kappa_d / kappa_c).sqrt(),
            phi: T::FRAC_PI_2(),
            n_th: T::zero(),
        }
    }

    /// Checks the invariants and normalizes `phi`.
    pub fn validated(mut self) -> Result<Self> {
        for (field, v) in self.named_fields() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { field, reason: "must be finite".into() });
            }
        }
        for (field, v) in [("kappa_a", self.kappa_a), ("kappa_c", self.kappa_c), ("kappa_d", self.kappa_d)] {
            if !(v > T::zero()) {
                return Err(Error::InvalidParameter { field, reason: format!("must be > 0 (got {v})") });
            }
        }
        for (field, v) in [
            ("gamma_m", self.gamma_m),
            ("g_a", self.g_a),
            ("g_c", self.g_c),
            ("g_x", self.g_x),
            ("g_d_mag", self.g_d_mag),
            ("n_th", self.n_th),
        ] {
            if v < T::zero() {
                return Err(Error::InvalidParameter { field, reason: format!("must be >= 0 (got {v})") });
            }
        }
        self.phi = normalize_phase(self.phi);
        Ok(self)
    }

    pub fn named_fields(&self) -> [(&'static str, T); 10] {
        [
            ("kappa_a", self.kappa_a),
            ("kappa_c", self.kappa_c),
            ("kappa_d", self.kappa_d),
            ("gamma_m", self.gamma_m),
            ("g_a", self.g_a),
            ("g_c", self.g_c),
            ("g_x", self.g_x),
            ("g_d_mag", self.g_d_mag),
            ("phi", self.phi),
            ("n_th", self.n_th),
        ]
    }

    /// Complex `G_d = |G_d| e^{iφ}`.
    pub fn g_d(&self) -> Cplx<T> {
        Cplx::from_polar(self.g_d_mag, self.phi)
    }

    pub fn with_phi(mut self, phi: T) -> Self {
        self.phi = normalize_phase(phi);
        self
    }

    pub fn with_n_th(mut self, n_th: T) -> Self {
        self.n_th = n_th;
        self
    }

    pub fn rates(&self) -> Rates<T> {
        Rates {
            kappa_a: self.kappa_a,
            kappa_c: self.kappa_c,
            kappa_d: self.kappa_d,
            gamma_m: self.gamma_m,
            n_th: self.n_th,
        }
    }
}

/// Damping rates and bath occupancy, shared by the raw and canonical descriptions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates<T: Real> {
    pub kappa_a: T,
    pub kappa_c: T,
    pub kappa_d: T,
    pub gamma_m: T,
    pub n_th: T,
}

/// Couplings with arbitrary phases, before gauge reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCouplings<T: Real> {
    pub g_a: Cplx<T>,
    pub g_c: Cplx<T>,
    pub g_d: Cplx<T>,
    pub g_x: Cplx<T>,
}

impl<T: Real> RawCouplings<T> {
    /// The couplings of a canonical operating point.
    pub fn from_params(p: &SystemParams<T>) -> Self {
        Self { g_a: re(p.g_a), g_c: re(p.g_c), g_d: p.g_d(), g_x: re(p.g_x) }
    }
}

/// Phases absorbed into each mode operator, `o -> o e^{iθ_o}`, during gauge reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugePhases<T: Real> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

/// Absorbs the coupling phases into the mode operators, leaving only the loop
/// phase `φ = φ_d + φ_x - φ_c` on `G_d`.
pub fn canonicalize<T: Real>(raw: &RawCouplings<T>, rates: &Rates<T>) -> (SystemParams<T>, GaugePhases<T>) {
    let (phi_a, phi_c, phi_d, phi_x) = (raw.g_a.arg(), raw.g_c.arg(), raw.g_d.arg(), raw.g_x.arg());
    let params = SystemParams {
        kappa_a: rates.kappa_a,
        kappa_c: rates.kappa_c,
        kappa_d: rates.kappa_d,
        gamma_m: rates.gamma_m,
        g_a: raw.g_a.norm(),
        g_c: raw.g_c.norm(),
        g_x: raw.g_x.norm(),
        g_d_mag: raw.g_d.norm(),
        phi: normalize_phase(phi_d + phi_x - phi_c),
        n_th: rates.n_th,
    };
    let phases = GaugePhases {
        a: T::zero(),
        b: normalize_phase(-phi_a),
        c: normalize_phase(phi_c - phi_a),
        d: normalize_phase(-phi_x + phi_c - phi_a),
    };
    (params, phases)
}

/// Dynamic matrix for arbitrary complex couplings.
pub fn raw_dynamic_matrix<T: Real>(raw: &RawCouplings<T>, rates: &Rates<T>) -> ComplexMatrix<T, 4> {
    let i = imag_unit::<T>();
    let z = Cplx::new(T::zero(), T::zero());
    let h = T::half();
    let RawCouplings { g_a, g_c, g_d, g_x } = *raw;
    Matrix::from_rows([
        [re(-rates.kappa_a * h), i * g_a, z, z],
        [-i * g_a.conj(), re(-rates.gamma_m * h), -i * g_c.conj(), -i * g_d.conj()],
        [z, -i * g_c, re(-rates.kappa_c * h), -i * g_x],
        [z, -i * g_d, -i * g_x.conj(), re(-rates.kappa_d * h)],
    ])
}

/// Drift matrix `M` of the Langevin equation `dv/dt = M v + √K v_in`.
pub fn dynamic_matrix<T: Real>(p: &SystemParams<T>) -> ComplexMatrix<T, 4> {
    raw_dynamic_matrix(&RawCouplings::from_params(p), &p.rates())
}

/// `√K = diag(√κ_a, √γ_m, √κ_c, √κ_d)`.
pub fn damping_matrix<T: Real>(p: &SystemParams<T>) -> RealMatrix<T, 4> {
    Matrix::from_diagonal([p.kappa_a.sqrt(), p.gamma_m.sqrt(), p.kappa_c.sqrt(), p.kappa_d.sqrt()])
}

/// Cavity label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cavity {
    A,
    C,
    D,
}

impl FromStr for Cavity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(Cavity::A),
            "c" | "C" => Ok(Cavity::C),
            "d" | "D" => Ok(Cavity::D),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for Cavity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cavity::A => "a",
            Cavity::C => "c",
            Cavity::D => "d",
        })
    }
}

/// Mechanical heating (cavity `a`) or cooling (`c`, `d`) rate `Γ = 4G²/κ`.
pub fn cooperativity<T: Real>(p: &SystemParams<T>, cavity: Cavity) -> T {
    let four = T::lit(4.0);
    match cavity {
        Cavity::A => four * p.g_a * p.g_a / p.kappa_a,
        Cavity::C => four * p.g_c * p.g_c / p.kappa_c,
        Cavity::D => four * p.g_d_mag * p.g_d_mag / p.kappa_d,
    }
}

/// Which of the two decoupling operating points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `φ = π/2`: outputs `a` and `c` entangled, `d` decoupled.
    Plus,
    /// `φ = -π/2`: outputs `a` and `d` entangled, `c` decoupled.
    Minus,
}

impl Branch {
    pub fn phase<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::FRAC_PI_2(),
            Branch::Minus => -T::FRAC_PI_2(),
        }
    }
}

/// Moves `p` onto the requested decoupling point: `G_x = √(κ_c κ_d)/2`,
/// `φ = ±π/2`, and `|G_d| = 2 G_c G_x / κ_c` (plus) or `G_c κ_d / (2 G_x)`
/// (minus). Both choices reduce to `|G_d| = G_c √(κ_d/κ_c)`, i.e. `Γ_c = Γ_d`.
pub fn sweet_spot<T: Real>(p: &SystemParams<T>, branch: Branch) -> SystemParams<T> {
    let g_x = (p.kappa_c * p.kappa_d).sqrt() / T::two();
    let g_d_mag = match branch {
        Branch::Plus => T::two() * p.g_c * g_x / p.kappa_c,
        Branch::Minus => p.g_c * p.kappa_d / (T::two() * g_x),
    };
    SystemParams { g_x, g_d_mag, phi: branch.phase(), ..*p }
}

/// Bose-Einstein occupancy of a mode at `omega_mhz` (ω/2π in MHz) and
/// temperature `temperature_k`.
pub fn thermal_occupancy<T: Real>(omega_mhz: T, temperature_k: T) -> Result<T> {
    if !(omega_mhz > T::zero()) {
        return Err(Error::InvalidParameter { field: "omega_m", reason: "must be > 0".into() });
    }
    if !(temperature_k > T::zero()) {
        return Err(Error::InvalidParameter { field: "temperature", reason: "must be > 0".into() });
    }
    let x = PLANCK * omega_mhz.as_f64() * 1e6 / (BOLTZMANN * temperature_k.as_f64());
    Ok(T::lit(1.0 / x.exp_m1()))
}
