//! Finite Jacobi matrices: symmetric tridiagonal with strictly positive
//! off-diagonal entries. The one carrier type every ensemble samples into and
//! every spectral routine consumes.

use crate::error::{Error, Result};

/// A finite symmetric tridiagonal matrix with diagonal `a_1..a_n` and
/// strictly positive off-diagonal `b_1..b_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl JacobiMatrix {
    /// Validates the defining invariants: `n >= 1`, `offdiag.len() == n - 1`,
    /// all entries finite, every off-diagonal entry `> 0`.
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::parameter("Jacobi matrix must have size >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::parameter(format!(
                "off-diagonal length {} does not match size {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if let Some(a) = diag.iter().find(|a| !a.is_finite()) {
            return Err(Error::parameter(format!("non-finite diagonal entry {a}")));
        }
        if let Some(b) = offdiag.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
            return Err(Error::parameter(format!(
                "off-diagonal entries must be finite and positive, got {b}"
            )));
        }
        Ok(JacobiMatrix { diag, offdiag })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `y = J x` without materializing the matrix.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.size();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// The matrix with the top row and left-most column removed.
    pub fn truncate_top(&self) -> Result<JacobiMatrix> {
        if self.size() < 2 {
            return Err(Error::domain(
                "cannot truncate a 1x1 Jacobi matrix".to_string(),
            ));
        }
        Ok(JacobiMatrix {
            diag: self.diag[1..].to_vec(),
            offdiag: self.offdiag[1..].to_vec(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_invariants() {
        assert!(JacobiMatrix::new(vec![], vec![]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, 2.0], vec![-0.5]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, f64::NAN], vec![0.5]).is_err());
        assert!(JacobiMatrix::new(vec![1.0, 2.0], vec![0.5]).is_ok());
        assert!(JacobiMatrix::new(vec![3.0], vec![]).is_ok());
    }

    #[test]
    fn truncate_top_shifts_indices() {
        let j = JacobiMatrix::new(vec![1.0, 2.0, 3.0], vec![4.0, 5.0]).unwrap();
        let j1 = j.truncate_top().unwrap();
        assert_eq!(j1.diag(), &[2.0, 3.0]);
        assert_eq!(j1.offdiag(), &[5.0]);
    }

    #[test]
    fn truncate_to_scalar_by_induction() {
        let mut j = JacobiMatrix::new(vec![1.0, 2.0, 3.0, 4.0], vec![1.0, 1.0, 1.0]).unwrap();
        for _ in 0..3 {
            j = j.truncate_top().unwrap();
        }
        assert_eq!(j.diag(), &[4.0]);
        assert!(j.truncate_top().is_err());
    }

    #[test]
    fn matvec_matches_dense_product() {
        let j = JacobiMatrix::new(vec![1.0, -2.0, 0.5], vec![3.0, 0.25]).unwrap();
        let x = [1.0, 2.0, -1.0];
        let mut y = [0.0; 3];
        j.matvec(&x, &mut y);
        assert_eq!(y[0], 1.0 + 3.0 * 2.0);
        assert_eq!(y[1], 3.0 - 2.0 * 2.0 - 0.25);
        assert_eq!(y[2], 0.25 * 2.0 - 0.5);
    }
}
