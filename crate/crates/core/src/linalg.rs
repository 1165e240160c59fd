//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::C64;

pub type CMatrix = DMatrix<C64>;

pub fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn frob(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Determinant by LU with partial pivoting; the 0x0 determinant is 1.
pub fn det(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with relative threshold `rel` against the largest singular value.
pub fn rank(m: &CMatrix, rel: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&x| x > rel * smax).count(),
        _ => 0,
    }
}

/// Inverse with a conditioning guard: fails when `σ_min < rel·σ_max`.
pub fn guarded_inverse(m: &CMatrix, rel: f64) -> Result<CMatrix> {
    let s = singular_values(m);
    let (smax, smin) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
    if smax == 0.0 || smin < rel * smax {
        return Err(Error::SingularMetric { ratio: if smax == 0.0 { 0.0 } else { smin / smax } });
    }
    m.clone().try_inverse().ok_or(Error::SingularMetric { ratio: smin / smax })
}

/// Orthonormal (Hermitian) basis of the column span, via SVD.
pub fn column_span_basis(m: &CMatrix, rel: f64) -> CMatrix {
    if m.ncols() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| smax > 0.0 && svd.singular_values[i] > rel * smax).collect();
    CMatrix::from_fn(m.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Takagi factorization of a complex symmetric matrix: `A = U Σ Uᵀ` with
/// `U` unitary and `Σ` real nonnegative (returned in decreasing order).
///
/// Uses the real symmetric embedding `[[Re A, Im A], [Im A, -Re A]]`, whose
/// eigenpairs with eigenvalue `σ ≥ 0` are `[x; y]` with `A conj(u) = σ u`
/// for `u = x + i y`.
pub fn takagi(a: &CMatrix) -> Result<(CMatrix, Vec<f64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.ncols() });
    }
    let asym = frob(&(a - a.transpose()));
    if asym > 1e-12 * (1.0 + frob(a)) {
        return Err(Error::FactorizationFailure(format!("matrix is not symmetric (defect {asym:e})")));
    }
    let big = DMatrix::<f64>::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        let z = a[(i % n, j % n)];
        match (bi, bj) {
            (0, 0) => z.re,
            (1, 1) => -z.re,
            _ => z.im,
        }
    });
    let eig = big.symmetric_eigen();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let chosen = &order[..n];
    let u = CMatrix::from_fn(n, n, |i, k| {
        let col = chosen[k];
        C64::new(eig.eigenvectors[(i, col)], eig.eigenvectors[(i + n, col)])
    });
    let sigma: Vec<f64> = chosen.iter().map(|&k| eig.eigenvalues[k].max(0.0)).collect();
    // a zero singular value pairs with its mirror; the choice above may then
    // mix a u with i*u, so verify before returning
    let recon = &u * CMatrix::from_diagonal(&DVector::from_iterator(n, sigma.iter().map(|&s| C64::new(s, 0.0)))) * u.transpose();
    let defect = frob(&(recon - a));
    if defect > 1e-9 * (1.0 + frob(a)) {
        return Err(Error::FactorizationFailure(format!("Takagi reconstruction defect {defect:e}")));
    }
    Ok((u, sigma))
}

/// `Ĉ` with `Ĉ G Ĉᵀ = I` for a complex symmetric invertible `G`, built
/// from the Takagi factors as `Σ^{-1/2} Uᴴ`.
pub fn symmetric_normalizer(g: &CMatrix) -> Result<CMatrix> {
    let sv = singular_values(g);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smin < 1e-12 * smax {
        return Err(Error::SingularMetric { ratio: if smax == 0.0 { 0.0 } else { smin / smax } });
    }
    let (mut u, sigma) = takagi(g)?;
    // columns are fixed up to sign; pick the one that makes the largest
    // entry point into the right half-plane
    for k in 0..u.ncols() {
        let big = (0..u.nrows()).map(|i| u[(i, k)]).max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
        if big.re < 0.0 || (big.re == 0.0 && big.im < 0.0) {
            u.column_mut(k).neg_mut();
        }
    }
    let n = g.nrows();
    Ok(CMatrix::from_fn(n, n, |i, j| u[(j, i)].conj() / sigma[i].sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn det_of_empty_and_small() {
        assert_eq!(det(&CMatrix::zeros(0, 0)), c(1.0, 0.0));
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        assert!((det(&m) - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn takagi_reconstructs() {
        let cases = [
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
            CMatrix::from_row_slice(2, 2, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            CMatrix::from_row_slice(3, 3, &[
                c(1.0, 2.0), c(0.5, -1.0), c(0.0, 0.3),
                c(0.5, -1.0), c(-2.0, 0.1), c(1.0, 1.0),
                c(0.0, 0.3), c(1.0, 1.0), c(0.7, 0.0),
            ]),
        ];
        for a in cases {
            let (u, s) = takagi(&a).unwrap();
            let uh_u = u.adjoint() * &u;
            assert!(frob(&(uh_u - CMatrix::identity(a.nrows(), a.nrows()))) < 1e-12);
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn takagi_rejects_nonsymmetric() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(takagi(&a), Err(Error::FactorizationFailure(_))));
    }

    #[test]
    fn normalizer_of_diagonal_and_swap() {
        let d = CMatrix::from_row_slice(2, 2, &[c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let n = symmetric_normalizer(&d).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(frob(&(n - want)) < 1e-14);
        let s = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let n = symmetric_normalizer(&s).unwrap();
        assert!(frob(&(&n * &s * n.transpose() - CMatrix::identity(2, 2))) < 1e-12);
        let z = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(symmetric_normalizer(&z), Err(Error::SingularMetric { .. })));
    }
}
