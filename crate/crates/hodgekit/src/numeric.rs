//! Floating-point helpers used at the numerical boundary: hermitian
//! eigenvalues, composite Simpson quadrature and least-squares fits.

/// Eigenvalues of a hermitian matrix given as `(re, im)` entry pairs,
/// by the classical two-sided Jacobi iteration. Deterministic; adequate
/// for the desk-scale matrices (n ≤ ~16) this crate produces.
pub fn hermitian_eigenvalues(entries: &[Vec<(f64, f64)>]) -> Vec<f64> {
    let n = entries.len();
    if n == 0 {
        return vec![];
    }
    // Work on the real symmetric embedding [[Re, -Im], [Im, Re]]:
    // each eigenvalue of the hermitian matrix appears twice.
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let (re, im) = entries[i][j];
            a[i][j] = re;
            a[i][n + j] = -im;
            a[n + i][j] = im;
            a[n + i][n + j] = re;
        }
    }
    // Jacobi sweeps on the symmetric matrix.
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Keep one copy of each doubled eigenvalue.
    (0..n).map(|i| eigs[2 * i]).collect()
}

/// Composite Simpson rule with `panels` subintervals (forced even ≥ 2).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Ordinary least squares `y ≈ X·beta` via normal equations; columns of
/// `x` are the regressors (include a constant column for an intercept).
pub fn least_squares(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    assert!(n > 0 && n == y.len());
    let p = x[0].len();
    let mut xtx = vec![vec![0.0f64; p]; p];
    let mut xty = vec![0.0f64; p];
    for (row, &yi) in x.iter().zip(y) {
        for i in 0..p {
            xty[i] += row[i] * yi;
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    solve_dense(&mut xtx, &mut xty)
}

fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        if d.abs() < 1e-300 {
            continue; // rank deficient: leave coordinate at zero
        }
        for r in 0..n {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col] / d;
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    (0..n)
        .map(|i| {
            if a[i][i].abs() < 1e-300 {
                0.0
            } else {
                b[i] / a[i][i]
            }
        })
        .collect()
}

/// Slope of the best-fit line `y = a + b·x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let rows: Vec<Vec<f64>> = x.iter().map(|&v| vec![1.0, v]).collect();
    least_squares(&rows, y)[1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_eigenvalues_of_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = vec![
            vec![(2.0, 0.0), (0.0, 1.0)],
            vec![(0.0, -1.0), (2.0, 0.0)],
        ];
        let e = hermitian_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-10);
        assert!((e[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        let v = simpson(|t| t * t * t, 0.0, 1.0, 64);
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn least_squares_recovers_plane() {
        let x: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![1.0, i as f64, (i * i) as f64])
            .collect();
        let y: Vec<f64> = x.iter().map(|r| 3.0 - 2.0 * r[1] + 0.5 * r[2]).collect();
        let beta = least_squares(&x, &y);
        assert!((beta[0] - 3.0).abs() < 1e-8);
        assert!((beta[1] + 2.0).abs() < 1e-8);
        assert!((beta[2] - 0.5).abs() < 1e-8);
    }
}
