//! Gauss-Jordan inversion with partial pivoting.

use num_traits::Zero;

use super::matrix::{Entry, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pivots smaller than this fraction of their row's largest entry count as zero.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-14;

/// Inverts `a` by Gauss-Jordan elimination with partial pivoting.
///
/// A pivot whose modulus falls below [`SINGULAR_PIVOT_RATIO`] times the
/// largest modulus of its originating row is reported as [`Error::Singular`].
pub fn invert<E: Entry, const N: usize>(a: &Matrix<E, N>) -> Result<Matrix<E, N>> {
    let ratio = <E::Real as Real>::lit(SINGULAR_PIVOT_RATIO);
    let mut work = *a;
    let mut inv = Matrix::<E, N>::identity();
    let mut scale: [E::Real; N] = std::array::from_fn(|i| {
        (0..N).fold(E::Real::zero(), |acc, j| num_traits::Float::max(acc, a[(i, j)].modulus()))
    });

    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&r, &s| {
                work[(r, col)]
                    .modulus()
                    .partial_cmp(&work[(s, col)].modulus())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        let pivot = work[(pivot_row, col)];
        let pivot_mod = pivot.modulus();
        if !(pivot_mod > ratio * scale[pivot_row]) || pivot_mod.is_zero() {
            return Err(Error::Singular { column: col, pivot: pivot_mod.as_f64() });
        }
        if pivot_row != col {
            swap_rows(&mut work, pivot_row, col);
            swap_rows(&mut inv, pivot_row, col);
            scale.swap(pivot_row, col);
        }

        let inv_pivot = E::one() / pivot;
        for j in 0..N {
            work[(col, j)] = work[(col, j)] * inv_pivot;
            inv[(col, j)] = inv[(col, j)] * inv_pivot;
        }
        for r in 0..N {
            if r == col {
                continue;
            }
            let factor = work[(r, col)];
            if factor.is_zero() {
                continue;
            }
            for j in 0..N {
                work[(r, j)] = work[(r, j)] - factor * work[(col, j)];
                inv[(r, j)] = inv[(r, j)] - factor * inv[(col, j)];
            }
        }
    }
    Ok(inv)
}

fn swap_rows<E: Entry, const N: usize>(m: &mut Matrix<E, N>, a: usize, b: usize) {
    for j in 0..N {
        let t = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = t;
    }
}
