//! Semisimple operators with integer eigenvalues: exact eigenspace
//! decompositions and real powers `λ^{αA}`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{GaussianRational, Rat};
use num_traits::ToPrimitive;
use crate::subspace::Subspace;

type S = GaussianRational;

/// Integer eigenvalues with their eigenspaces; errors unless the
/// eigenspaces of integer eigenvalues span.
pub fn integer_eigenspaces(a: &Matrix) -> Result<Vec<(i64, Subspace)>> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    // Gershgorin bound on |λ|, rounded up.
    let mut bound = 0f64;
    for r in 0..n {
        let row_sum: f64 = (0..n).map(|c| a[(r, c)].abs_f64()).sum();
        bound = bound.max(row_sum);
    }
    let reach = bound.ceil() as i64 + 1;
    let mut out = Vec::new();
    let mut total = 0usize;
    for k in -reach..=reach {
        let shifted = &(a.clone()) - &Matrix::identity(n).scale(&S::from_int(k));
        let ker = shifted.kernel();
        if ker.rows() > 0 {
            total += ker.rows();
            out.push((k, Subspace::from_span(&ker)));
        }
    }
    if total != n {
        return Err(Error::InvalidSl2Data(
            "operator is not semisimple with integer eigenvalues".into(),
        ));
    }
    Ok(out)
}

/// `base^{α·A}` for a semisimple `A` with integer eigenvalues: acts as
/// `base^{α·k}` on the `k`-eigenspace.
///
/// Only one scalar is taken from floating point — the `q`-th root of the
/// base for `α = p/q` — and every eigenvalue scaling is an exact integer
/// power of it. The result is therefore exactly a point of the
/// one-parameter group at a base within 2^{−52} of the request, so closed
/// conditions (flag orthogonality, form compatibility) survive exactly.
pub fn semisimple_power(a: &Matrix, base: f64, alpha: &Rat) -> Result<Matrix> {
    if !(base > 0.0) {
        return Err(Error::InvalidSl2Data("power of a nonpositive base".into()));
    }
    let eig = integer_eigenspaces(a)?;
    let p = alpha
        .numer()
        .to_i64()
        .ok_or_else(|| Error::InvalidSl2Data("exponent too large".into()))?;
    let q = alpha
        .denom()
        .to_i64()
        .ok_or_else(|| Error::InvalidSl2Data("exponent too large".into()))?;
    let root = S::from_f64(base.powf(1.0 / q as f64), 0.0);
    scaled_eigen_operator(a.rows(), &eig, |k| {
        let e = p * k;
        let mut acc = S::one();
        let b = if e >= 0 { root.clone() } else { root.inv() };
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &b;
        }
        acc
    })
}

/// Assemble the operator acting as `phi(k)` on the `k`-eigenspace.
pub fn scaled_eigen_operator(
    n: usize,
    eigenspaces: &[(i64, Subspace)],
    phi: impl Fn(i64) -> S,
) -> Result<Matrix> {
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut scales = Vec::with_capacity(n);
    for (k, s) in eigenspaces {
        for v in s.basis_vectors() {
            rows.push(v);
            scales.push(phi(*k));
        }
    }
    if rows.len() != n {
        return Err(Error::InvalidSl2Data(
            "eigenspaces do not span the ambient space".into(),
        ));
    }
    let basis = Matrix::from_rows(rows);
    let from = basis.transpose();
    let to = from.inverse().map_err(|_| {
        Error::InvalidSl2Data("eigenspaces are linearly dependent".into())
    })?;
    let mut d = Matrix::zeros(n, n);
    for (i, s) in scales.into_iter().enumerate() {
        d[(i, i)] = s;
    }
    Ok(&(&from * &d) * &to)
}

/// A grading of an increasing filtration: semisimple real `Y` whose
/// `k`-eigenspace complements `W_{k−1}` inside `W_k` for every `k`.
pub fn grades_filtration(y: &Matrix, w: &crate::filtration::IncFiltration) -> bool {
    if !y.is_real() {
        return false;
    }
    let Ok(eig) = integer_eigenspaces(y) else {
        return false;
    };
    let n = y.rows();
    for (k, e) in &eig {
        if !w.at(*k).contains(e) {
            return false;
        }
        let sum = match w.at(*k - 1).sum(e) {
            Ok(s) => s,
            Err(_) => return false,
        };
        if sum != *w.at(*k) {
            return false;
        }
    }
    let total: usize = eig.iter().map(|(_, e)| e.dim()).sum();
    total == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn eigen_decomposition_of_diagonalizable() {
        // A = g·diag(2,−1)·g^{-1}
        let g = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        let d = Matrix::from_int_rows(&[&[2, 0], &[0, -1]]);
        let a = &(&g * &d) * &g.inverse().unwrap();
        let eig = integer_eigenspaces(&a).unwrap();
        let ks: Vec<i64> = eig.iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![-1, 2]);
    }

    #[test]
    fn power_is_exact_for_perfect_squares() {
        let y = Matrix::from_int_rows(&[&[0, 0], &[0, -2]]);
        let half = Rat::new(BigInt::from(1), BigInt::from(2));
        // 4^{Y/2} = 2^Y acts as 1 and 1/4
        let p = semisimple_power(&y, 4.0, &half).unwrap();
        assert_eq!(p[(0, 0)], S::one());
        assert_eq!(p[(1, 1)], S::from_frac(1, 4));
        // group law is exact here: 4^{Y/2}·4^{Y/2} = 16^{Y/2}
        let p2 = semisimple_power(&y, 16.0, &half).unwrap();
        assert_eq!(&p * &p, p2);
    }

    #[test]
    fn rejects_non_semisimple() {
        let n = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        assert!(integer_eigenspaces(&n).is_err());
    }
}
