//! Fixed-size dense square matrices over real or complex entries.

use std::fmt::Debug;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{Num, Zero};

use crate::scalar::{Cplx, Real};

/// Matrix entry: a real scalar or a complex number over one.
pub trait Entry: Copy + Num + Neg<Output = Self> + Debug + Send + Sync {
    type Real: Real;
    fn modulus(self) -> Self::Real;
    fn conjugate(self) -> Self;
    fn from_real(x: Self::Real) -> Self;
    fn is_finite_entry(self) -> bool;
}

impl<T: Real> Entry for T {
    type Real = T;
    fn modulus(self) -> T {
        self.abs()
    }
    fn conjugate(self) -> T {
        self
    }
    fn from_real(x: T) -> T {
        x
    }
    fn is_finite_entry(self) -> bool {
        self.is_finite()
    }
}

impl<T: Real> Entry for Cplx<T> {
    type Real = T;
    fn modulus(self) -> T {
        self.norm()
    }
    fn conjugate(self) -> Self {
        self.conj()
    }
    fn from_real(x: T) -> Self {
        Cplx::new(x, T::zero())
    }
    fn is_finite_entry(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Row-major `N x N` matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix<E, const N: usize> {
    rows: [[E; N]; N],
}

pub type ComplexMatrix<T, const N: usize> = Matrix<Cplx<T>, N>;
pub type RealMatrix<T, const N: usize> = Matrix<T, N>;

impl<E: Entry, const N: usize> Matrix<E, N> {
    pub fn zeros() -> Self {
        Self { rows: [[E::zero(); N]; N] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.rows[i][i] = E::one();
        }
        m
    }

    pub fn from_rows(rows: [[E; N]; N]) -> Self {
        Self { rows }
    }

    pub fn from_diagonal(diag: [E; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.rows[i][i] = d;
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.rows[i][j] = f(i, j);
            }
        }
        m
    }

    pub const fn dim(&self) -> usize {
        N
    }

    pub fn rows(&self) -> &[[E; N]; N] {
        &self.rows
    }

    pub fn diagonal(&self) -> [E; N] {
        std::array::from_fn(|i| self.rows[i][i])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.rows[j][i].conjugate())
    }

    pub fn map<F: Entry>(&self, f: impl Fn(E) -> F) -> Matrix<F, N> {
        Matrix::from_fn(|i, j| f(self.rows[i][j]))
    }

    pub fn scale(&self, s: E) -> Self {
        self.map(|x| x * s)
    }

    pub fn trace(&self) -> E {
        (0..N).fold(E::zero(), |acc, i| acc + self.rows[i][i])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> E::Real {
        self.rows
            .iter()
            .flatten()
            .fold(E::Real::zero(), |acc, x| num_traits::Float::max(acc, x.modulus()))
    }

    /// `max |a_ij - b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> E::Real {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_finite_entry())
    }

    /// Principal submatrix on the listed indices.
    pub fn submatrix<const M: usize>(&self, idx: [usize; M]) -> Matrix<E, M> {
        Matrix::from_fn(|i, j| self.rows[idx[i]][idx[j]])
    }
}

impl<E: Entry, const N: usize> Index<(usize, usize)> for Matrix<E, N> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.rows[i][j]
    }
}

impl<E: Entry, const N: usize> IndexMut<(usize, usize)> for Matrix<E, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.rows[i][j]
    }
}

impl<E: Entry, const N: usize> Add for Matrix<E, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j] + rhs.rows[i][j])
    }
}

impl<E: Entry, const N: usize> Sub for Matrix<E, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.rows[i][j] - rhs.rows[i][j])
    }
}

impl<E: Entry, const N: usize> Neg for Matrix<E, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<E: Entry, const N: usize> Mul for Matrix<E, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| {
            (0..N).fold(E::zero(), |acc, k| acc + self.rows[i][k] * rhs.rows[k][j])
        })
    }
}

impl<E: Entry, const N: usize> Mul<[E; N]> for Matrix<E, N> {
    type Output = [E; N];
    fn mul(self, v: [E; N]) -> [E; N] {
        std::array::from_fn(|i| (0..N).fold(E::zero(), |acc, k| acc + self.rows[i][k] * v[k]))
    }
}

impl<E: Entry, const N: usize> Debug for Matrix<E, N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

impl<T: Real, const N: usize> Matrix<T, N> {
    /// Lift a real matrix to complex entries.
    pub fn to_complex(&self) -> ComplexMatrix<T, N> {
        self.map(|x| Cplx::new(x, T::zero()))
    }

    /// `max |a_ij - a_ji|`.
    pub fn asymmetry(&self) -> T {
        (*self - self.transpose()).max_abs()
    }
}
