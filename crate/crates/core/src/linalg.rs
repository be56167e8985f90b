//! Thin helpers over `nalgebra` for the dense matrices used throughout.

use nalgebra::{DMatrix, DVector};

/// Matrix whose rows are the given slices (all of length `cols`).
pub fn matrix_from_rows<R: AsRef<[f64]>>(rows: &[R], cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j])
}

/// Matrix whose columns are the given slices (all of length `rows`).
pub fn matrix_from_columns<C: AsRef<[f64]>>(columns: &[C], rows: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, columns.len(), |i, j| columns[j].as_ref()[i])
}

pub fn singular_values(m: &DMatrix<f64>) -> DVector<f64> {
    if m.is_empty() {
        return DVector::zeros(0);
    }
    m.clone().svd(false, false).singular_values
}

/// Largest singular value, i.e. the `l^2 -> l^2` operator norm.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).iter().fold(0.0_f64, |a, &b| a.max(b))
}

/// Ratio of extreme singular values of a square matrix; `inf` when singular.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = singular_values(m);
    let max = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    let min = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Numerical rank with relative threshold `rel_tol * sigma_max`.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let max = sv.iter().fold(0.0_f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn max_abs_entry(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |a, &b| a.max(b.abs()))
}

/// `max_j sum_i |m_ij|`, the `l^1 -> l^1` norm.
pub fn max_column_sum(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|t| t.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `max_i sum_j |m_ij|`, the `l^inf -> l^inf` norm.
pub fn max_row_sum(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|t| t.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_norm_of_stacked_rows() {
        let m = matrix_from_rows(&[[1.0, 0.0], [1.0, 0.0]], 2);
        assert!((spectral_norm(&m) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rank_and_condition() {
        let m = matrix_from_columns(&[[1.0, 0.0], [1.0, 1.0]], 2);
        assert_eq!(rank(&m, 1e-12), 2);
        assert!(condition_number(&m).is_finite());
        let s = matrix_from_rows(&[[1.0, 2.0], [2.0, 4.0]], 2);
        assert_eq!(rank(&s, 1e-12), 1);
    }

    #[test]
    fn row_and_column_sums() {
        let m = matrix_from_rows(&[[1.0, -2.0], [3.0, 0.5]], 2);
        assert_eq!(max_column_sum(&m), 4.0);
        assert_eq!(max_row_sum(&m), 3.5);
    }
}
