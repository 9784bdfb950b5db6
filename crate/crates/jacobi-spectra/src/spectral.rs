//! Spectral measures of finite Jacobi matrices.
//!
//! The eigensolver is an implicit-shift QL iteration specialized to symmetric
//! tridiagonal matrices. It accumulates only the first row of the eigenvector
//! matrix: the spectral measure of `(J, e_1)` needs exactly the eigenvalues
//! and the squared first eigenvector components, so the full vector matrix is
//! never formed. O(n^2) time, O(n) memory.
//!
//! [`moment_oracle`] computes `J^k(1,1)` by iterated tridiagonal mat-vec
//! products and shares no code with the eigensolver. It is the independent
//! route against which every spectral-measure moment is checked.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::JacobiMatrix;

/// Sweep cap per eigenvalue; exceeding it is a hard error, not silent
/// acceptance.
const MAX_SWEEPS: usize = 50;

/// Finite atomic probability measure: atoms `(lambda, weight)` sorted
/// ascending, weights positive and summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMeasure {
    atoms: Vec<(f64, f64)>,
    tie_adjustments: usize,
}

impl SpectralMeasure {
    /// Builds a measure from raw atoms: sorts, validates distinctness and
    /// weight positivity, renormalizes the weights to sum to 1.
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::parameter("spectral measure needs at least one atom"));
        }
        if atoms.iter().any(|(l, w)| !l.is_finite() || !w.is_finite()) {
            return Err(Error::parameter("non-finite atom in spectral measure"));
        }
        if atoms.iter().any(|&(_, w)| w <= 0.0) {
            return Err(Error::parameter(
                "spectral measure weights must be positive",
            ));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|p| p[0].0 >= p[1].0) {
            return Err(Error::parameter("spectral measure atoms must be distinct"));
        }
        let sum: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::parameter(format!(
                "spectral measure weights sum to {sum}, expected 1"
            )));
        }
        for a in &mut atoms {
            a.1 /= sum;
        }
        Ok(SpectralMeasure {
            atoms,
            tie_adjustments: 0,
        })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Number of eigenvalue ties the solver had to perturb apart (0 in all
    /// but pathological rounding cases).
    pub fn tie_adjustments(&self) -> usize {
        self.tie_adjustments
    }

    /// k-th moment `sum w_i lambda_i^k` straight from the atoms. `k = 0` is
    /// 1 exactly: the measure is a probability measure by construction.
    pub fn moment(&self, k: u32) -> f64 {
        if k == 0 {
            return 1.0;
        }
        self.atoms.iter().map(|&(l, w)| w * l.powi(k as i32)).sum()
    }

    /// Linear eigenvalue statistic `<mu, f>`.
    pub fn linear_statistic(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(l, w)| w * f(l)).sum()
    }
}

/// Uniform atomic measure on the eigenvalues (weights implicitly `1/n`).
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure {
    points: Vec<f64>,
}

impl EmpiricalMeasure {
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::parameter(
                "empirical measure needs at least one point",
            ));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::parameter("non-finite point in empirical measure"));
        }
        points.sort_by(f64::total_cmp);
        Ok(EmpiricalMeasure { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn moment(&self, k: u32) -> f64 {
        let n = self.points.len() as f64;
        self.points.iter().map(|&l| l.powi(k as i32)).sum::<f64>() / n
    }

    pub fn linear_statistic(&self, f: impl Fn(f64) -> f64) -> f64 {
        let n = self.points.len() as f64;
        self.points.iter().map(|&l| f(l)).sum::<f64>() / n
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and receives the eigenvalues; `e` holds the
/// sub-diagonal in `e[0..n-1]` with `e[n-1]` used as scratch. When
/// `first_row` is `Some`, it must be initialized to `e_1` and receives the
/// first row of the accumulated orthogonal transform, i.e. `v_j(1)` per
/// eigenvalue slot.
fn tridiag_ql(d: &mut [f64], e: &mut [f64], mut first_row: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    if n <= 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // first negligible sub-diagonal at or after l splits the matrix
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence { size: n, index: l });
            }

            // implicit shift from the 2x2 block at l
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut deflated = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = first_row.as_deref_mut() {
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Perturbs bitwise-equal adjacent eigenvalues apart by one ulp so the atom
/// distinctness invariant survives rounding. Returns the number of
/// adjustments.
fn separate_ties(values: &mut [f64]) -> usize {
    let mut adjustments = 0;
    for i in 1..values.len() {
        if values[i] <= values[i - 1] {
            values[i] = values[i - 1].next_up();
            adjustments += 1;
        }
    }
    adjustments
}

/// Spectral measure of `(J, e_1)`: eigenvalues with squared first eigenvector
/// components as weights, sorted ascending, weights renormalized to sum
/// exactly to the computed total.
pub fn spectral_measure(j: &JacobiMatrix) -> Result<SpectralMeasure> {
    let n = j.size();
    let mut d = j.diag().to_vec();
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(j.offdiag());
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tridiag_ql(&mut d, &mut e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let mut lambdas: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut weights: Vec<f64> = order.iter().map(|&i| z[i] * z[i]).collect();

    let mut adjustments = separate_ties(&mut lambdas);
    // an exactly-zero first component is the weight-space analogue of a tie
    for w in &mut weights {
        if *w == 0.0 {
            *w = f64::MIN_POSITIVE;
            adjustments += 1;
        }
    }
    // division keeps each weight's error relative to itself; shifting the
    // rounding onto one weight would be amplified by lambda^k in high moments
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }

    Ok(SpectralMeasure {
        atoms: lambdas.into_iter().zip(weights).collect(),
        tie_adjustments: adjustments,
    })
}

/// Eigenvalues only, skipping the eigenvector accumulation.
pub fn empirical_measure(j: &JacobiMatrix) -> Result<EmpiricalMeasure> {
    let n = j.size();
    let mut d = j.diag().to_vec();
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(j.offdiag());
    e.push(0.0);
    tridiag_ql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    separate_ties(&mut d);
    Ok(EmpiricalMeasure { points: d })
}

/// `J^k(1,1)` by `k` successive tridiagonal mat-vec products. O(nk) time, no
/// eigendecomposition anywhere near it.
pub fn moment_oracle(j: &JacobiMatrix, k: u32) -> f64 {
    let n = j.size();
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    let mut scratch = vec![0.0; n];
    for _ in 0..k {
        j.matvec(&v, &mut scratch);
        std::mem::swap(&mut v, &mut scratch);
    }
    v[0]
}

/// `<p(J) e_1, e_1>` for a polynomial given by ascending coefficients:
/// `<mu, p>` evaluated without an eigendecomposition, as a function of the
/// matrix entries alone. O(n deg).
pub fn polynomial_statistic(j: &JacobiMatrix, coeffs: &[f64]) -> f64 {
    let n = j.size();
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    let mut scratch = vec![0.0; n];
    let mut acc = match coeffs.first() {
        Some(&c0) => c0,
        None => return 0.0,
    };
    for &c in &coeffs[1..] {
        j.matvec(&v, &mut scratch);
        std::mem::swap(&mut v, &mut scratch);
        acc += c * v[0];
    }
    acc
}

/// Stieltjes transform `sum w_i / (lambda_i - z)` of a finite atomic measure.
pub fn discrete_m_function(mu: &SpectralMeasure, z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::domain(format!(
            "m-function requires Im z != 0, got z = {z}"
        )));
    }
    Ok(mu
        .atoms
        .iter()
        .map(|&(l, w)| w / (Complex64::new(l, 0.0) - z))
        .sum())
}

/// Re-export of [`JacobiMatrix::truncate_top`] as a free function.
pub fn truncate_top(j: &JacobiMatrix) -> Result<JacobiMatrix> {
    j.truncate_top()
}

/// Size-`n` truncation of the free Jacobi matrix (zero diagonal, unit
/// off-diagonal); its eigenvalues are `2 cos(j pi / (n+1))`.
pub fn free_truncation(n: usize) -> JacobiMatrix {
    JacobiMatrix::new(vec![0.0; n], vec![1.0; n.saturating_sub(1)])
        .expect("free truncation entries are valid")
}
