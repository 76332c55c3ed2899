//! Tiny dense solvers used by the fitting and extraction routines.

use crate::error::{Error, Result};

/// Solve A x = b by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for (row, rhs) in a.iter().zip(&b) {
        debug_assert_eq!(row.len(), n);
        let _ = rhs;
    }
    for col in 0..n {
        let (piv, pmax) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pmax == 0.0 || !pmax.is_finite() {
            return Err(Error::Validation(format!(
                "singular or non-finite linear system at column {col}"
            )));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s -= a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Ok(x)
}

/// Linear least squares via normal equations: rows[i] dot x ~= y[i].
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    assert_eq!(rows.len(), y.len());
    assert!(!rows.is_empty());
    let n = rows[0].len();
    let mut ata = vec![vec![0.0; n]; n];
    let mut aty = vec![0.0; n];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..n {
            for j in 0..n {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * yi;
        }
    }
    solve_dense(ata, aty)
}

/// Slope of the least-squares line through (x, y) points.
pub fn fit_line_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 1.0]).collect();
    Ok(least_squares(&rows, ys)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [[2,1],[1,3]] x = [5,10] -> x = (1, 3)  [TRIVIAL]
        let x = solve_dense(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn least_squares_exact_fit() {
        // y = 2x + 1 sampled exactly is recovered  [TRIVIAL]
        let xs = [0.0, 1.0, 2.0, 5.0];
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, 1.0]).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 * x + 1.0).collect();
        let c = least_squares(&rows, &ys).unwrap();
        assert!((c[0] - 2.0).abs() < 1e-10 && (c[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn singular_system_rejected() {
        assert!(solve_dense(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_err());
    }
}
