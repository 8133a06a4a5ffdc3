//! Real symmetric eigenvalues (cyclic Jacobi) and Cholesky factorization.


use super::matrix::Matrix;
use crate::scalar::Real;

const JACOBI_SWEEPS: usize = 64;

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues<T: Real, const N: usize>(m: &Matrix<T, N>) -> [T; N] {
    let mut a = *m;
    for _ in 0..JACOBI_SWEEPS {
        let off = off_diagonal_norm(&a);
        let diag = a.diagonal().iter().fold(T::zero(), |acc, d| acc + *d * *d).sqrt();
        if off <= T::epsilon() * diag || off.is_zero() {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, p, q);
            }
        }
    }
    let mut eig = a.diagonal();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    eig
}

fn off_diagonal_norm<T: Real, const N: usize>(a: &Matrix<T, N>) -> T {
    let mut s = T::zero();
    for i in 0..N {
        for j in 0..N {
            if i != j {
                s = s + a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn rotate<T: Real, const N: usize>(a: &mut Matrix<T, N>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq.is_zero() {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (T::two() * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    for k in 0..N {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..N {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
}

/// Lower-triangular `L` with `L L^T = m`; `None` unless `m` is positive definite.
pub fn cholesky<T: Real, const N: usize>(m: &Matrix<T, N>) -> Option<Matrix<T, N>> {
    let mut l = Matrix::<T, N>::zeros();
    for j in 0..N {
        let mut d = m[(j, j)];
        for k in 0..j {
            d = d - l[(j, k)] * l[(j, k)];
        }
        if !(d > T::zero()) {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..N {
            let mut s = m[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}
