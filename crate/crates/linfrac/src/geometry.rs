//! Quadrics and invariant affine varieties as geometric objects.
//!
//! A quadric is the zero set `Q(M) = {X : l(X)^T M l(X) = 0}` of a symmetric
//! matrix of order `n+1`; an affine variety is the `q`-image of a subspace
//! `U` of homogeneous space not contained in `U_0`. The operations here test
//! membership, verify invariance of a quadric under the rational map (the
//! congruence condition `A^T M A = mu M`), and enumerate the invariant
//! varieties, fixed points and invariant lines that the eigenstructure of
//! the system matrix induces.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homogeneous::{lift, pr, project, SystemMatrix};
use crate::spectral::{Epsilon, SpectralDecomposition};
use crate::tolerances::Tolerances;

/// A quadric `Q(M)` with inertia metadata.
///
/// The matrix is stored exactly symmetric; `signature` counts the positive,
/// negative and numerically-zero eigenvalues of `M`.
#[derive(Debug, Clone)]
pub struct Quadric {
    m: DMatrix<f64>,
    signature: (usize, usize, usize),
    norm2: f64,
    sigma_min: f64,
}

impl Quadric {
    /// Symmetrizes and classifies the input matrix.
    pub fn new(m: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "quadric matrix must be square of order >= 2, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let sym = (&m + m.transpose()) * 0.5;
        let eig = nalgebra::SymmetricEigen::new(sym.clone());
        let norm2 = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let sigma_min = eig
            .eigenvalues
            .iter()
            .map(|x| x.abs())
            .fold(f64::INFINITY, f64::min);
        let threshold = tol.sing * norm2;
        let mut p = 0;
        let mut q = 0;
        let mut z = 0;
        for &lam in eig.eigenvalues.iter() {
            if lam.abs() <= threshold {
                z += 1;
            } else if lam > 0.0 {
                p += 1;
            } else {
                q += 1;
            }
        }
        Ok(Self {
            m: sym,
            signature: (p, q, z),
            norm2,
            sigma_min,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    /// `(p, q, z)`: positive, negative and zero eigenvalue counts.
    pub fn signature(&self) -> (usize, usize, usize) {
        self.signature
    }

    pub fn is_degenerate(&self) -> bool {
        self.signature.2 > 0
    }

    pub fn is_indefinite(&self) -> bool {
        self.signature.0 >= 1 && self.signature.1 >= 1
    }

    /// Spectral norm of `M`.
    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    pub fn order(&self) -> usize {
        self.m.nrows()
    }

    /// Relative quadratic-form residual of a point:
    /// `|l(x)^T M l(x)| / (||M||_2 ||l(x)||^2)`.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        let u = lift(x);
        self.homogeneous_residual(&u)
    }

    /// Residual of a homogeneous vector against the quadric.
    pub fn homogeneous_residual(&self, u: &DVector<f64>) -> f64 {
        let value = (u.transpose() * &self.m * u)[(0, 0)];
        value.abs() / (self.norm2 * u.norm_squared())
    }

    /// Membership of a point within the relative tolerance `tol_mem`.
    pub fn contains(&self, x: &DVector<f64>, tol_mem: f64) -> bool {
        self.residual(x) <= tol_mem
    }

    /// Rescales so that `||M||_F = 1` and the entry of largest magnitude is
    /// positive. Output of the constructions is normalized this way so that
    /// reruns are byte-identical.
    pub fn normalized(&self) -> Self {
        let norm = self.m.norm();
        let mut scale = 1.0 / norm;
        let mut lead = 0.0_f64;
        for &v in self.m.iter() {
            if v.abs() > lead.abs() {
                lead = v;
            }
        }
        if lead < 0.0 {
            scale = -scale;
        }
        Self {
            m: &self.m * scale,
            signature: if scale < 0.0 {
                (self.signature.1, self.signature.0, self.signature.2)
            } else {
                self.signature
            },
            norm2: self.norm2 * scale.abs(),
            sigma_min: self.sigma_min * scale.abs(),
        }
    }
}

/// Serialized form of a quadric: matrix plus signature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadricJson {
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<[usize; 3]>,
}

impl QuadricJson {
    pub fn from_quadric(q: &Quadric) -> Self {
        let m = q.matrix();
        Self {
            m: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect(),
            signature: Some([q.signature.0, q.signature.1, q.signature.2]),
        }
    }

    pub fn into_quadric(self, tol: &Tolerances) -> Result<Quadric> {
        let nrows = self.m.len();
        let ncols = self.m.first().map_or(0, Vec::len);
        if nrows == 0 || self.m.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged quadric matrix".into()));
        }
        let m = DMatrix::from_row_iterator(nrows, ncols, self.m.iter().flatten().copied());
        Quadric::new(m, tol)
    }
}

/// Outcome of the invariance check for a quadric.
#[derive(Debug, Clone)]
pub enum InvarianceCheck {
    Invariant {
        /// The scalar with `A^T M A = mu M`.
        mu: f64,
        /// Set when `M` is degenerate, definite, or of rank <= 2: the
        /// algebraic condition is verified, but the geometric equivalence
        /// with F-invariance only goes both ways for indefinite matrices of
        /// rank greater than two (definite `M` has an empty real quadric).
        converse_caveat: bool,
    },
    NotInvariant {
        /// Relative residual of the best proportionality fit.
        residual: f64,
    },
}

/// Tests whether `A^T M A = mu M` for some scalar, returning the Frobenius
/// least-squares fit `mu* = <A^T M A, M> / ||M||^2` when the residual is
/// within `tol.null`.
pub fn verify_invariance(q: &Quadric, s: &SystemMatrix) -> InvarianceCheck {
    let tol = s.tolerances();
    let a = s.matrix();
    let m = q.matrix();
    let image = a.transpose() * m * a;
    let mu = image.dot(m) / m.norm_squared();
    let residual = (&image - m * mu).norm() / m.norm();
    if residual <= tol.null && mu.abs() > tol.null {
        let rank = q.order() - q.signature.2;
        InvarianceCheck::Invariant {
            mu,
            converse_caveat: q.is_degenerate() || !q.is_indefinite() || rank <= 2,
        }
    } else {
        InvarianceCheck::NotInvariant { residual }
    }
}

/// An affine variety `S_U`, stored as a base point and independent direction
/// vectors; `dim` is the number of directions.
#[derive(Debug, Clone)]
pub struct AffineVariety {
    base: DVector<f64>,
    directions: Vec<DVector<f64>>,
    /// Orthonormal spanning matrix of the direction space, for distance
    /// computations.
    frame: DMatrix<f64>,
}

impl AffineVariety {
    pub fn new(base: DVector<f64>, directions: Vec<DVector<f64>>) -> Result<Self> {
        let n = base.len();
        if directions.iter().any(|d| d.len() != n) {
            return Err(Error::DimensionMismatch(
                "direction vectors must match the base dimension".into(),
            ));
        }
        let frame = orthonormal_frame(n, &directions, 1e-12)?;
        if frame.ncols() != directions.len() {
            return Err(Error::DimensionMismatch(
                "direction vectors must be linearly independent".into(),
            ));
        }
        Ok(Self {
            base,
            directions,
            frame,
        })
    }

    pub fn base(&self) -> &DVector<f64> {
        &self.base
    }

    pub fn directions(&self) -> &[DVector<f64>] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Euclidean distance from `x` to the variety.
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        let v = x - &self.base;
        let coeffs = self.frame.transpose() * &v;
        (v - &self.frame * coeffs).norm()
    }

    /// Membership within a relative tolerance.
    pub fn contains(&self, x: &DVector<f64>, tol_mem: f64) -> bool {
        self.distance(x) <= tol_mem * (1.0 + x.norm())
    }

    /// A deterministic pseudo-random point of the variety.
    pub fn sample<R: Rng>(&self, rng: &mut R, scale: f64) -> DVector<f64> {
        let mut x = self.base.clone();
        for d in &self.directions {
            x += d * rng.gen_range(-scale..scale);
        }
        x
    }

    /// Builds the variety from real spanning vectors of a homogeneous
    /// subspace `U`. Returns [`Error::NotApplicable`] when `U` lies inside
    /// `U_0` (all last components vanish within `tol.pr`).
    ///
    /// The homogeneous basis is normalized so the pivot vector has last
    /// component 1 and the remaining ones have last component 0; the variety
    /// is the projection of that basis.
    pub fn from_homogeneous_span(span: &[DVector<f64>], tol: &Tolerances) -> Result<Self> {
        if span.is_empty() {
            return Err(Error::DimensionMismatch("empty spanning set".into()));
        }
        let order = span[0].len();
        let n = order - 1;
        // Orthonormalize first so the pr test is scale-free.
        let basis = orthonormal_frame(order, span, 1e-12)?;
        let k = basis.ncols();
        let pivot = (0..k)
            .max_by(|&i, &j| {
                basis[(order - 1, i)]
                    .abs()
                    .total_cmp(&basis[(order - 1, j)].abs())
            })
            .unwrap();
        let pivot_pr = basis[(order - 1, pivot)];
        if pivot_pr.abs() <= tol.pr {
            return Err(Error::NotApplicable("subspace is contained in U_0".into()));
        }
        let u1: DVector<f64> = DVector::from_fn(order, |i, _| basis[(i, pivot)]) / pivot_pr;
        let base = u1.rows(0, n).into_owned();
        let mut reduced: Vec<DVector<f64>> = Vec::with_capacity(k - 1);
        for c in 0..k {
            if c == pivot {
                continue;
            }
            let w: DVector<f64> = DVector::from_fn(order, |i, _| basis[(i, c)]);
            let adjusted = &w - &u1 * w[order - 1];
            reduced.push(adjusted.rows(0, n).into_owned());
        }
        let frame = orthonormal_frame(n, &reduced, 1e-10)?;
        let directions: Vec<DVector<f64>> = (0..frame.ncols())
            .map(|c| frame.column(c).into_owned())
            .collect();
        Self::new(base, directions)
    }
}

/// Orthonormal basis of the span of the given vectors, dropping numerically
/// dependent ones at the relative threshold.
fn orthonormal_frame(dim: usize, vectors: &[DVector<f64>], rel_tol: f64) -> Result<DMatrix<f64>> {
    if vectors.is_empty() {
        return Ok(DMatrix::zeros(dim, 0));
    }
    let mut m = DMatrix::zeros(dim, vectors.len());
    for (c, v) in vectors.iter().enumerate() {
        m.set_column(c, v);
    }
    let svd = m
        .try_svd(true, false, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("svd of spanning set"))?;
    let u = svd.u.as_ref().unwrap();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let top = svd.singular_values[idx[0]];
    let rank = idx
        .iter()
        .filter(|&&i| svd.singular_values[i] > rel_tol.max(f64::EPSILON) * top)
        .count();
    let mut frame = DMatrix::zeros(dim, rank);
    for (c, &i) in idx.iter().take(rank).enumerate() {
        frame.set_column(c, &u.column(i));
    }
    Ok(frame)
}

/// Serialized form of an affine variety.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarietyJson {
    pub base: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
}

impl VarietyJson {
    pub fn from_variety(v: &AffineVariety) -> Self {
        Self {
            base: v.base.iter().copied().collect(),
            directions: v
                .directions
                .iter()
                .map(|d| d.iter().copied().collect())
                .collect(),
        }
    }

    pub fn into_variety(self) -> Result<AffineVariety> {
        AffineVariety::new(
            DVector::from_vec(self.base),
            self.directions.into_iter().map(DVector::from_vec).collect(),
        )
    }
}

/// A fixed point of the rational map, together with the eigenvalue of the
/// eigenvector it projects from.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub point: DVector<f64>,
    pub lambda: f64,
}

/// Fixed points induced by real eigenvectors outside `U_0`: for every real
/// eigenvector `v` with `pr(v)` significant, `q(v)` is a fixed point.
pub fn fixed_points(s: &SystemMatrix, sd: &SpectralDecomposition) -> Vec<FixedPoint> {
    let tol = s.tolerances();
    let mut out = Vec::new();
    for c in sd.clusters() {
        if !c.is_real {
            continue;
        }
        for col in 0..c.vectors.ncols() {
            let v: DVector<f64> = DVector::from_fn(sd.order(), |i, _| c.vectors[(i, col)].re);
            if pr(&v).abs() > tol.pr * v.amax() {
                if let Ok(point) = project(&v, tol.pr) {
                    out.push(FixedPoint {
                        point,
                        lambda: c.value.re,
                    });
                }
            }
        }
    }
    out
}

/// Real spanning vectors of the invariant subspace attached to a set of
/// clusters: real eigenvectors contribute themselves, conjugate pairs
/// contribute real and imaginary parts (taken once, from the upper-half
/// member).
fn real_span_of_clusters(sd: &SpectralDecomposition, indices: &[usize]) -> Vec<DVector<f64>> {
    let order = sd.order();
    let mut span = Vec::new();
    for &i in indices {
        let c = &sd.clusters()[i];
        if c.is_real {
            for col in 0..c.vectors.ncols() {
                span.push(DVector::from_fn(order, |r, _| c.vectors[(r, col)].re));
            }
        } else if c.value.im > 0.0 {
            for col in 0..c.vectors.ncols() {
                span.push(DVector::from_fn(order, |r, _| c.vectors[(r, col)].re));
                span.push(DVector::from_fn(order, |r, _| c.vectors[(r, col)].im));
            }
        }
    }
    span
}

/// Enumerates invariant affine varieties from conjugation-closed sets of
/// eigenvalue clusters whose real invariant subspace is not inside `U_0`.
///
/// Proper subsets of up to `cap` conjugation-closed units are enumerated,
/// plus every codimension-one invariant subspace; the full space is skipped.
pub fn invariant_affine_varieties(
    s: &SystemMatrix,
    sd: &SpectralDecomposition,
    cap: usize,
) -> Result<Vec<AffineVariety>> {
    if !sd.is_semisimple() {
        return Err(Error::NotSemisimple(
            "variety enumeration requires a semisimple matrix".into(),
        ));
    }
    let tol = s.tolerances();
    // Conjugation-closed units: a real cluster alone, or a conjugate pair.
    let mut units: Vec<Vec<usize>> = Vec::new();
    for (i, c) in sd.clusters().iter().enumerate() {
        if c.is_real {
            units.push(vec![i]);
        } else if c.value.im > 0.0 {
            let conj = sd
                .clusters()
                .iter()
                .position(|q| (q.value - c.value.conj()).norm() < 1e-14 * (1.0 + c.value.norm()))
                .ok_or(Error::PairingAmbiguity {
                    re: c.value.re,
                    im: c.value.im,
                })?;
            units.push(vec![i, conj]);
        }
    }
    let k = units.len();
    let mut chosen: std::collections::BTreeSet<Vec<usize>> = Default::default();
    // All subsets of at most `cap` units (proper, non-empty).
    let small_cap = cap.min(k.saturating_sub(1));
    for mask in 1u64..(1u64 << k) {
        let size = mask.count_ones() as usize;
        if size > small_cap {
            continue;
        }
        let mut subset: Vec<usize> = Vec::new();
        for (u, unit) in units.iter().enumerate() {
            if mask & (1 << u) != 0 {
                subset.extend_from_slice(unit);
            }
        }
        subset.sort_unstable();
        chosen.insert(subset);
    }
    // Codimension-one subspaces: drop one real multiplicity-one unit.
    for (u, unit) in units.iter().enumerate() {
        if unit.len() == 1 && sd.clusters()[unit[0]].algebraic == 1 && k > 1 {
            let mut subset: Vec<usize> = Vec::new();
            for (v, other) in units.iter().enumerate() {
                if v != u {
                    subset.extend_from_slice(other);
                }
            }
            subset.sort_unstable();
            chosen.insert(subset);
        }
    }
    let mut out = Vec::new();
    for subset in chosen {
        let span = real_span_of_clusters(sd, &subset);
        if span.is_empty() {
            continue;
        }
        match AffineVariety::from_homogeneous_span(&span, tol) {
            Ok(v) => out.push(v),
            Err(Error::NotApplicable(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// The invariant line defined by a complex eigenvector pair: the projection
/// of `span{v + conj(v), i(v - conj(v))}`.
///
/// Preconditions follow the membership result this line feeds: the
/// eigenvalue must be genuinely complex, and away from the locus where the
/// quadric-membership argument degenerates (`|lambda| = 1` for `eps = +1`,
/// `lambda^2 = -1` for `eps = -1`).
pub fn invariant_line_for_pair(
    s: &SystemMatrix,
    lambda: Complex<f64>,
    v: &DVector<Complex<f64>>,
    eps: Epsilon,
) -> Result<AffineVariety> {
    let tol = s.tolerances();
    if lambda.im.abs() <= tol.pair * (1.0 + lambda.norm()) {
        return Err(Error::NotApplicable("eigenvalue must not be real".into()));
    }
    match eps {
        Epsilon::Plus => {
            if (lambda.norm() - 1.0).abs() <= tol.unit {
                return Err(Error::NotApplicable(
                    "unit-modulus eigenvalue: line membership is not guaranteed".into(),
                ));
            }
        }
        Epsilon::Minus => {
            if (lambda * lambda + Complex::new(1.0, 0.0)).norm() <= tol.pair {
                return Err(Error::NotApplicable(
                    "lambda^2 = -1: line membership is not guaranteed".into(),
                ));
            }
        }
    }
    let re: DVector<f64> = v.map(|z| z.re);
    let im: DVector<f64> = v.map(|z| z.im);
    AffineVariety::from_homogeneous_span(&[re, im], tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::decompose;
    use nalgebra::{dmatrix, dvector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn system(a: DMatrix<f64>) -> SystemMatrix {
        SystemMatrix::new(a, tol()).unwrap()
    }

    #[test]
    fn unit_circle_membership() {
        let q = Quadric::new(DMatrix::from_diagonal(&dvector![1.0, 1.0, -1.0]), &tol()).unwrap();
        assert!(q.contains(&dvector![1.0, 0.0], 1e-12));
        assert!(!q.contains(&dvector![2.0, 0.0], 1e-12));
        assert_eq!(q.signature(), (2, 1, 0));
        assert!(!q.is_degenerate());
        assert!(q.is_indefinite());
    }

    #[test]
    fn antidiagonal_quadric_contains_origin() {
        let m = dmatrix![0.0, 0.0, 1.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0];
        let q = Quadric::new(m, &tol()).unwrap();
        assert!(q.contains(&dvector![0.0, 0.0], 1e-14));
    }

    #[test]
    fn rotation_preserves_circle() {
        let t = std::f64::consts::FRAC_PI_3;
        let a = dmatrix![t.cos(), -t.sin(), 0.0; t.sin(), t.cos(), 0.0; 0.0, 0.0, 1.0];
        let s = system(a);
        let q = Quadric::new(DMatrix::from_diagonal(&dvector![1.0, 1.0, -1.0]), &tol()).unwrap();
        match verify_invariance(&q, &s) {
            InvarianceCheck::Invariant {
                mu,
                converse_caveat,
            } => {
                assert!((mu - 1.0).abs() < 1e-12);
                assert!(!converse_caveat);
            }
            other => panic!("expected invariant, got {other:?}"),
        }
    }

    #[test]
    fn antidiagonal_invariant_under_reciprocal_diag() {
        let s = system(DMatrix::from_diagonal(&dvector![2.0, 1.0, 0.5]));
        let m = dmatrix![0.0, 0.0, 1.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0];
        let q = Quadric::new(m, &tol()).unwrap();
        match verify_invariance(&q, &s) {
            InvarianceCheck::Invariant { mu, .. } => assert!((mu - 1.0).abs() < 1e-12),
            other => panic!("expected invariant, got {other:?}"),
        }
    }

    #[test]
    fn definite_form_not_invariant_under_stretch() {
        let s = system(DMatrix::from_diagonal(&dvector![2.0, 1.0, 0.5]));
        let q = Quadric::new(DMatrix::identity(3, 3), &tol()).unwrap();
        assert!(matches!(
            verify_invariance(&q, &s),
            InvarianceCheck::NotInvariant { .. }
        ));
    }

    #[test]
    fn fixed_point_of_diagonal_system() {
        let s = system(DMatrix::from_diagonal(&dvector![2.0, 1.0, 0.5]));
        let sd = decompose(&s).unwrap();
        let fps = fixed_points(&s, &sd);
        // Only e3 projects: fixed point (0,0) with lambda = 1/2.
        assert_eq!(fps.len(), 1);
        assert!(fps[0].point.norm() < 1e-12);
        assert!((fps[0].lambda - 0.5).abs() < 1e-10);
        let image = s.evaluate(&fps[0].point).unwrap();
        assert!((image - &fps[0].point).norm() < 1e-12);
    }

    #[test]
    fn identity_reports_origin_fixed_point() {
        let s = system(DMatrix::identity(3, 3));
        let sd = decompose(&s).unwrap();
        let fps = fixed_points(&s, &sd);
        assert!(fps.iter().any(|f| f.point.norm() < 1e-10));
        for f in &fps {
            let image = s.evaluate(&f.point).unwrap();
            assert!((image - &f.point).norm() < 1e-10);
        }
    }

    #[test]
    fn rotation_block_fixed_point() {
        let t = std::f64::consts::FRAC_PI_3;
        let a = dmatrix![t.cos(), -t.sin(), 0.0; t.sin(), t.cos(), 0.0; 0.0, 0.0, 1.0];
        let s = system(a);
        let sd = decompose(&s).unwrap();
        let fps = fixed_points(&s, &sd);
        assert_eq!(fps.len(), 1);
        assert!(fps[0].point.norm() < 1e-12);
        assert!((fps[0].lambda - 1.0).abs() < 1e-10);
    }

    #[test]
    fn varieties_of_diagonal_system() {
        let s = system(DMatrix::from_diagonal(&dvector![2.0, 1.0, 0.5]));
        let sd = decompose(&s).unwrap();
        let vars = invariant_affine_varieties(&s, &sd, 3).unwrap();
        // Subsets containing e3: {e3}, {e1,e3}, {e2,e3}; subsets inside U_0
        // are skipped.
        assert_eq!(vars.len(), 3);
        assert!(vars.iter().any(|v| v.dim() == 0));
        let axis = vars
            .iter()
            .find(|v| v.dim() == 1 && v.directions()[0][0].abs() > 0.9)
            .expect("x-axis variety");
        assert!(axis.base().norm() < 1e-12);
        // F-invariance: points on the x-axis map into the x-axis.
        let x = dvector![3.0, 0.0];
        let fx = s.evaluate(&x).unwrap();
        assert!(axis.contains(&fx, 1e-10));
    }

    #[test]
    fn rotation_pair_line_rejected_on_unit_circle() {
        let t = std::f64::consts::FRAC_PI_3;
        let a = dmatrix![t.cos(), -t.sin(), 0.0; t.sin(), t.cos(), 0.0; 0.0, 0.0, 1.0];
        let s = system(a);
        let sd = decompose(&s).unwrap();
        let c = sd
            .clusters()
            .iter()
            .find(|c| c.value.im > 0.0)
            .expect("complex cluster");
        let v: DVector<Complex<f64>> = c.vectors.column(0).into_owned();
        assert!(matches!(
            invariant_line_for_pair(&s, c.value, &v, Epsilon::Plus),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn span_inside_u0_is_rejected() {
        let span = vec![dvector![1.0, 0.0, 0.0], dvector![0.0, 1.0, 0.0]];
        assert!(matches!(
            AffineVariety::from_homogeneous_span(&span, &tol()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn variety_distance_and_sampling() {
        let v = AffineVariety::new(dvector![1.0, 2.0], vec![dvector![1.0, 0.0]]).unwrap();
        assert!(v.distance(&dvector![5.0, 2.0]) < 1e-14);
        assert!((v.distance(&dvector![5.0, 3.5]) - 1.5).abs() < 1e-14);
        let mut rng = rand::rngs::mock::StepRng::new(0, 1);
        let p = v.sample(&mut rng, 2.0);
        assert!(v.contains(&p, 1e-12));
    }

    #[test]
    fn quadric_json_round_trip() {
        let q = Quadric::new(
            dmatrix![0.0, 0.0, -0.5; 0.0, 1.0, 0.0; -0.5, 0.0, 0.0],
            &tol(),
        )
        .unwrap();
        let json = serde_json::to_string(&QuadricJson::from_quadric(&q)).unwrap();
        let back: QuadricJson = serde_json::from_str(&json).unwrap();
        let q2 = back.into_quadric(&tol()).unwrap();
        assert_eq!(q.matrix(), q2.matrix());
        assert_eq!(q.signature(), q2.signature());
    }
}
