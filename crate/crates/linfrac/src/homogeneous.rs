//! Homogeneous-coordinate primitives and the system matrix.
//!
//! An n-dimensional rational system whose components share a denominator,
//!
//! ```text
//! F_i(X) = (a_i1 x_1 + ... + a_in x_n + c_i) / (b_1 x_1 + ... + b_n x_n + d),
//! ```
//!
//! factors through homogeneous coordinates as `F = q . A . l`, where `l`
//! appends a trailing 1, `q` divides by the last component, and `A` is the
//! order-(n+1) matrix holding the coefficients in blocks
//! `[[A1, C^T], [B, d]]`. This module provides `l`, `q`, the block wrapper
//! around `A`, determinant normalization and single-step evaluation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

/// Last component of a homogeneous vector (the projection denominator).
#[inline]
pub fn pr(u: &DVector<f64>) -> f64 {
    u[u.len() - 1]
}

/// Homogeneous lift: appends a trailing 1 to `x`.
pub fn lift(x: &DVector<f64>) -> DVector<f64> {
    let mut u = DVector::zeros(x.len() + 1);
    u.rows_mut(0, x.len()).copy_from(x);
    u[x.len()] = 1.0;
    u
}

/// Projection `q`: divides the leading components by the last one.
///
/// Fails with [`Error::ForbiddenProjection`] when the last component is
/// negligible against `||u||_inf`, i.e. the vector lies in the hyperplane
/// `U_0` within tolerance.
pub fn project(u: &DVector<f64>, tol_pr: f64) -> Result<DVector<f64>> {
    let n = u.len() - 1;
    let denom = u[n];
    let scale = u.amax();
    if denom.abs() <= tol_pr * scale {
        return Err(Error::ForbiddenProjection {
            pr: denom,
            threshold: tol_pr * scale,
        });
    }
    Ok(u.rows(0, n) / denom)
}

/// One step of the rational map `q . A . l` on a raw square matrix.
///
/// This is the workhorse behind [`SystemMatrix::evaluate`]; it does not
/// require `a` to be invertible.
pub fn fractional_step(a: &DMatrix<f64>, x: &DVector<f64>, tol_pr: f64) -> Result<DVector<f64>> {
    let u = a * lift(x);
    project(&u, tol_pr).map_err(|_| Error::ForbiddenPoint {
        denominator: pr(&u),
    })
}

/// The order-(n+1) coefficient matrix of a rational system, with cached
/// spectral metadata and the tolerance set used to validate it.
///
/// Invariants enforced at construction: the matrix is square of order
/// `n + 1 >= 3`, and its smallest singular value exceeds
/// `tol.sing * sigma_max` (numerically singular input is rejected; reducing a
/// singular system to lower dimension is out of scope).
#[derive(Debug, Clone)]
pub struct SystemMatrix {
    n: usize,
    a: DMatrix<f64>,
    det: f64,
    norm2: f64,
    sigma_min: f64,
    tol: Tolerances,
}

impl SystemMatrix {
    /// Wraps a full `(n+1) x (n+1)` matrix.
    pub fn new(a: DMatrix<f64>, tol: Tolerances) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "system matrix must be square, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if a.nrows() < 3 {
            return Err(Error::DimensionMismatch(format!(
                "system matrix must have order n+1 >= 3, got {}",
                a.nrows()
            )));
        }
        let svd = a
            .clone()
            .try_svd(false, false, f64::EPSILON, 10_000)
            .ok_or(Error::ConvergenceFailure("svd of system matrix"))?;
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        let norm2 = sv[0];
        let sigma_min = *sv.last().unwrap();
        if norm2 == 0.0 || sigma_min <= tol.sing * norm2 {
            return Err(Error::SingularMatrix {
                ratio: if norm2 == 0.0 { 0.0 } else { sigma_min / norm2 },
                threshold: tol.sing,
            });
        }
        let det = a.determinant();
        Ok(Self {
            n: a.nrows() - 1,
            a,
            det,
            norm2,
            sigma_min,
            tol,
        })
    }

    /// Assembles the matrix from the blocks `(A1, B, C, d)` of the fractional
    /// formula: numerator rows `A1 x + C`, shared denominator `B x + d`.
    pub fn from_blocks(
        a1: &DMatrix<f64>,
        b: &DVector<f64>,
        c: &DVector<f64>,
        d: f64,
        tol: Tolerances,
    ) -> Result<Self> {
        let n = a1.nrows();
        if a1.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A1 must be square, got {}x{}",
                a1.nrows(),
                a1.ncols()
            )));
        }
        if b.len() != n || c.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "B and C must have length {n}, got {} and {}",
                b.len(),
                c.len()
            )));
        }
        let mut a = DMatrix::zeros(n + 1, n + 1);
        a.view_mut((0, 0), (n, n)).copy_from(a1);
        a.view_mut((0, n), (n, 1)).copy_from(c);
        a.view_mut((n, 0), (1, n)).copy_from(&b.transpose());
        a[(n, n)] = d;
        Self::new(a, tol)
    }

    /// State-space dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The full homogeneous matrix of order `n + 1`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// Upper-left `n x n` block (linear part of the numerators).
    pub fn a1(&self) -> DMatrix<f64> {
        self.a.view((0, 0), (self.n, self.n)).into()
    }

    /// Denominator coefficients `B` (bottom row, first `n` entries).
    pub fn b(&self) -> DVector<f64> {
        DVector::from_fn(self.n, |j, _| self.a[(self.n, j)])
    }

    /// Constant numerator terms `C` (right column, first `n` entries).
    pub fn c(&self) -> DVector<f64> {
        DVector::from_fn(self.n, |i, _| self.a[(i, self.n)])
    }

    /// Constant denominator term `d`.
    pub fn d(&self) -> f64 {
        self.a[(self.n, self.n)]
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// Spectral norm `||A||_2`.
    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Rescales to `lambda A` with `lambda = |det A|^{-1/(n+1)}`, so that
    /// `|det| = 1`. The induced rational map is unchanged.
    pub fn normalize(&self) -> Self {
        let order = (self.n + 1) as f64;
        let scale = self.det.abs().powf(-1.0 / order);
        let det = self.det * scale.powi(self.n as i32 + 1);
        debug_assert!((det.abs() - 1.0).abs() <= self.tol.det);
        Self {
            n: self.n,
            a: &self.a * scale,
            det,
            norm2: self.norm2 * scale,
            sigma_min: self.sigma_min * scale,
            tol: self.tol,
        }
    }

    /// Shared denominator `B . x + d` of the fractional formula at `x`.
    pub fn denominator(&self, x: &DVector<f64>) -> f64 {
        pr(&(&self.a * lift(x)))
    }

    /// Whether `x` lies on the principal forbidden hyperplane within tolerance.
    pub fn in_forbidden_hyperplane(&self, x: &DVector<f64>) -> bool {
        let u = &self.a * lift(x);
        pr(&u).abs() <= self.tol.pr * u.amax()
    }

    /// One step of the rational map, `F(x) = q(A l(x))`.
    pub fn evaluate(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has dimension {}, system expects {}",
                x.len(),
                self.n
            )));
        }
        fractional_step(&self.a, x, self.tol.pr)
    }
}

/// On-disk JSON description of a system: either the full matrix or its blocks.
///
/// ```json
/// {"n": 2, "A": [[0,0,1],[0,1,0],[1,0,0]]}
/// {"A1": [[0,0],[0,1]], "B": [1,0], "C": [1,0], "d": 0.0}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemInput {
    Full {
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
    },
    Blocks {
        #[serde(rename = "A1")]
        a1: Vec<Vec<f64>>,
        #[serde(rename = "B")]
        b: Vec<f64>,
        #[serde(rename = "C")]
        c: Vec<f64>,
        d: f64,
    },
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(
            "matrix rows must be non-empty and of equal length".into(),
        ));
    }
    Ok(DMatrix::from_row_iterator(
        nrows,
        ncols,
        rows.iter().flatten().copied(),
    ))
}

impl SystemInput {
    /// Validates the input and builds the internal representation. Both
    /// formats normalize to the same full matrix.
    pub fn into_system(self, tol: Tolerances) -> Result<SystemMatrix> {
        match self {
            SystemInput::Full { n, a } => {
                let m = matrix_from_rows(&a)?;
                if let Some(n) = n {
                    if m.nrows() != n + 1 {
                        return Err(Error::DimensionMismatch(format!(
                            "declared n = {n} but matrix has order {}",
                            m.nrows()
                        )));
                    }
                }
                SystemMatrix::new(m, tol)
            }
            SystemInput::Blocks { a1, b, c, d } => {
                let a1 = matrix_from_rows(&a1)?;
                SystemMatrix::from_blocks(&a1, &DVector::from_vec(b), &DVector::from_vec(c), d, tol)
            }
        }
    }

    /// Full-matrix form of a system, for serialization.
    pub fn from_system(s: &SystemMatrix) -> Self {
        let a = s.matrix();
        SystemInput::Full {
            n: Some(s.n()),
            a: (0..a.nrows())
                .map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn lift_appends_one() {
        assert_eq!(lift(&dvector![0.0, 0.0]), dvector![0.0, 0.0, 1.0]);
        assert_eq!(lift(&dvector![2.0, 3.0]), dvector![2.0, 3.0, 1.0]);
        assert_eq!(
            lift(&dvector![1.0, -1.0, 5.0]),
            dvector![1.0, -1.0, 5.0, 1.0]
        );
    }

    #[test]
    fn project_divides_by_last() {
        let x = project(&dvector![2.0, 4.0, 2.0], 1e-12).unwrap();
        assert_eq!(x, dvector![1.0, 2.0]);
        assert_eq!(
            project(&dvector![0.0, 0.0, 1.0], 1e-12).unwrap(),
            dvector![0.0, 0.0]
        );
    }

    #[test]
    fn project_rejects_u0() {
        let err = project(&dvector![3.0, -6.0, 0.0], 1e-12).unwrap_err();
        assert!(matches!(err, Error::ForbiddenProjection { .. }));
    }

    #[test]
    fn project_lift_is_identity() {
        let x = dvector![1.5, -2.25, 0.0, 7.0];
        assert_eq!(project(&lift(&x), 1e-12).unwrap(), x);
    }

    #[test]
    fn normalize_scalar_matrix() {
        let s = SystemMatrix::new(DMatrix::identity(3, 3) * 2.0, tol()).unwrap();
        let ns = s.normalize();
        assert!((ns.matrix() - DMatrix::identity(3, 3)).amax() < 1e-14);
        assert!((ns.det().abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_diagonal() {
        let s = SystemMatrix::new(DMatrix::from_diagonal(&dvector![4.0, 1.0, 1.0]), tol()).unwrap();
        let ns = s.normalize();
        let scale = 4.0_f64.powf(-1.0 / 3.0);
        assert!((ns.matrix()[(0, 0)] - 4.0 * scale).abs() < 1e-14);
        assert!((ns.matrix()[(1, 1)] - scale).abs() < 1e-14);
    }

    #[test]
    fn normalize_unimodular_is_identity_map() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5, 1.0]);
        let s = SystemMatrix::new(a.clone(), tol()).unwrap();
        let ns = s.normalize();
        assert!((ns.matrix() - &a).amax() < 1e-14);
    }

    #[test]
    fn singular_input_rejected() {
        let a = dmatrix![1.0, 0.0, 0.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0];
        assert!(matches!(
            SystemMatrix::new(a, tol()),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn evaluate_permutation_map() {
        let a = dmatrix![0.0, 0.0, 1.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0];
        let s = SystemMatrix::new(a, tol()).unwrap();
        let y = s.evaluate(&dvector![2.0, 3.0]).unwrap();
        assert!((y - dvector![0.5, 1.5]).amax() < 1e-15);
    }

    #[test]
    fn evaluate_identity_map() {
        let s = SystemMatrix::new(DMatrix::identity(4, 4), tol()).unwrap();
        let x = dvector![3.0, -1.0, 0.25];
        assert_eq!(s.evaluate(&x).unwrap(), x);
    }

    #[test]
    fn forbidden_point_detected_on_raw_matrix() {
        // Denominator row selects x_1; the matrix itself is singular, which the
        // raw stepper tolerates.
        let a = dmatrix![1.0, 0.0, 0.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0];
        let err = fractional_step(&a, &dvector![0.0, 5.0], 1e-12).unwrap_err();
        assert!(matches!(err, Error::ForbiddenPoint { .. }));
    }

    #[test]
    fn forbidden_point_detected_on_system() {
        // Invertible permutation with the same denominator row x_1.
        let a = dmatrix![0.0, 1.0, 0.0; 0.0, 0.0, 1.0; 1.0, 0.0, 0.0];
        let s = SystemMatrix::new(a, tol()).unwrap();
        assert!(s.in_forbidden_hyperplane(&dvector![0.0, 5.0]));
        assert!(matches!(
            s.evaluate(&dvector![0.0, 5.0]),
            Err(Error::ForbiddenPoint { .. })
        ));
    }

    #[test]
    fn evaluate_matches_fractional_formula() {
        let a = dmatrix![1.0, 2.0, -1.0; 0.5, -1.0, 3.0; 2.0, 1.0, 4.0];
        let s = SystemMatrix::new(a, tol()).unwrap();
        let x = dvector![0.7, -1.3];
        let denom = 2.0 * x[0] + 1.0 * x[1] + 4.0;
        let expect = dvector![
            (1.0 * x[0] + 2.0 * x[1] - 1.0) / denom,
            (0.5 * x[0] - 1.0 * x[1] + 3.0) / denom
        ];
        assert!((s.evaluate(&x).unwrap() - expect).amax() < 1e-15);
        assert!((s.denominator(&x) - denom).abs() < 1e-15);
    }

    #[test]
    fn evaluate_unchanged_by_normalize() {
        let a = dmatrix![3.0, 1.0, 0.0; 0.0, 2.0, 1.0; 1.0, 0.0, 5.0];
        let s = SystemMatrix::new(a, tol()).unwrap();
        let ns = s.normalize();
        let x = dvector![0.3, -2.0];
        let before = s.evaluate(&x).unwrap();
        let after = ns.evaluate(&x).unwrap();
        assert!((before - after).amax() < 1e-13);
    }

    #[test]
    fn blocks_and_full_agree() {
        let a1 = dmatrix![1.0, 2.0; 0.5, -1.0];
        let b = dvector![2.0, 1.0];
        let c = dvector![-1.0, 3.0];
        let s = SystemMatrix::from_blocks(&a1, &b, &c, 4.0, tol()).unwrap();
        let full = dmatrix![1.0, 2.0, -1.0; 0.5, -1.0, 3.0; 2.0, 1.0, 4.0];
        assert_eq!(s.matrix(), &full);
        assert_eq!(s.a1(), a1);
        assert_eq!(s.b(), b);
        assert_eq!(s.c(), c);
        assert_eq!(s.d(), 4.0);
    }

    #[test]
    fn json_formats_parse() {
        let full: SystemInput =
            serde_json::from_str(r#"{"n": 2, "A": [[0,0,1],[0,1,0],[1,0,0]]}"#).unwrap();
        let s1 = full.into_system(tol()).unwrap();
        let blocks: SystemInput =
            serde_json::from_str(r#"{"A1": [[0,0],[0,1]], "B": [1,0], "C": [1,0], "d": 0.0}"#)
                .unwrap();
        let s2 = blocks.into_system(tol()).unwrap();
        assert_eq!(s1.matrix(), s2.matrix());
    }

    #[test]
    fn json_rejects_wrong_n() {
        let bad: SystemInput =
            serde_json::from_str(r#"{"n": 3, "A": [[0,0,1],[0,1,0],[1,0,0]]}"#).unwrap();
        assert!(bad.into_system(tol()).is_err());
    }
}
