//! Thin complex singular value decomposition backed by `faer`.

use faer::Mat;

use super::matrix::ComplexMatrix;

#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x k` with `k = min(m, n)`; column `j` is the left singular vector
    /// for `singular_values[j]`.
    pub u: ComplexMatrix,
    /// Non-increasing, length `k`.
    pub singular_values: Vec<f64>,
    /// `n x k` with orthonormal columns.
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Svd {
            u: ComplexMatrix::zeros(m, 0),
            singular_values: Vec::new(),
            v: ComplexMatrix::zeros(n, 0),
        };
    }
    let data = a.as_slice();
    let mat = Mat::from_fn(m, n, |i, j| data[i * n + j]);
    let d = mat.thin_svd().expect("SVD of a finite matrix converges");
    let (u, s, v) = (d.U(), d.S().column_vector(), d.V());
    let mut order: Vec<usize> = (0..k).collect();
    // stable sort keeps ties reproducible whatever order the backend uses
    order.sort_by(|&i, &j| s[j].re.total_cmp(&s[i].re));
    Svd {
        u: ComplexMatrix::from_fn(m, k, |i, j| u[(i, order[j])]),
        singular_values: order.iter().map(|&j| s[j].re).collect(),
        v: ComplexMatrix::from_fn(n, k, |i, j| v[(i, order[j])]),
    }
}

impl ComplexMatrix {
    pub fn svd(&self) -> Svd {
        svd(self)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        svd(self).singular_values
    }

    /// Operator 2-norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reconstructs_complex_rectangular_matrix() {
        let a = ComplexMatrix::new(
            3,
            2,
            vec![
                c(1.0, 2.0),
                c(0.5, -1.0),
                c(0.0, 1.0),
                c(3.0, 0.0),
                c(-2.0, 0.5),
                c(1.0, 1.0),
            ],
        )
        .unwrap();
        let d = svd(&a);
        let sigma = ComplexMatrix::from_diagonal(
            &d.singular_values
                .iter()
                .map(|s| c(*s, 0.0))
                .collect::<Vec<_>>(),
        );
        let rebuilt = &(&d.u * &sigma) * &d.v.adjoint();
        assert!((&rebuilt - &a).frobenius_norm() < 1e-12);
        let vv = &d.v.adjoint() * &d.v;
        assert!((&vv - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-12);
        assert!(d.singular_values[0] >= d.singular_values[1]);
    }

    #[test]
    fn rank_one_projection_has_values_one_and_zero() {
        let e = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let s = e.singular_values();
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14);
    }

    #[test]
    fn wide_matrix() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        let s = a.singular_values();
        assert_eq!(s.len(), 2);
        assert!((s[0] - (70.0f64).sqrt()).abs() < 1e-12);
        assert!(s[1].abs() < 1e-12);
    }
}
