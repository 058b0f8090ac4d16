//! Solving the congruence equation `A^T M A = mu M` over symmetric matrices.
//!
//! The operator `M -> A^T M A - mu M` is materialized on an orthonormal basis
//! of the symmetric matrices (dimension `(n+1)(n+2)/2`), so symmetry is
//! enforced structurally rather than by symmetrizing afterwards; its
//! nullspace, extracted by singular-value thresholding, is the solution
//! space. On top of that sit the dimension formula for semisimple matrices
//! similar to `eps A^{-1}`, and the search for an invertible member of the
//! solution space (or a certificate that none exists).

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::homogeneous::SystemMatrix;
use crate::spectral::{Epsilon, SpectralDecomposition};
use crate::tolerances::Tolerances;

/// Orthonormal basis of symmetric matrices of the given order, under the
/// Frobenius inner product: `E_ii` and `(E_ij + E_ji)/sqrt(2)` for `i < j`.
fn sym_basis_len(order: usize) -> usize {
    order * (order + 1) / 2
}

fn sym_index_pairs(order: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(sym_basis_len(order));
    for i in 0..order {
        pairs.push((i, i));
    }
    for i in 0..order {
        for j in (i + 1)..order {
            pairs.push((i, j));
        }
    }
    pairs
}

fn sym_to_coords(m: &DMatrix<f64>, pairs: &[(usize, usize)]) -> DVector<f64> {
    let sqrt2 = std::f64::consts::SQRT_2;
    DVector::from_iterator(
        pairs.len(),
        pairs
            .iter()
            .map(|&(i, j)| if i == j { m[(i, i)] } else { sqrt2 * m[(i, j)] }),
    )
}

fn coords_to_sym(v: &DVector<f64>, pairs: &[(usize, usize)], order: usize) -> DMatrix<f64> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::zeros(order, order);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if i == j {
            m[(i, i)] = v[k];
        } else {
            m[(i, j)] = inv_sqrt2 * v[k];
            m[(j, i)] = inv_sqrt2 * v[k];
        }
    }
    m
}

/// Matrix of `M -> A^T M A - mu M` on the symmetric coordinate basis.
fn congruence_operator(a: &DMatrix<f64>, mu: f64) -> DMatrix<f64> {
    let order = a.nrows();
    let pairs = sym_index_pairs(order);
    let n = pairs.len();
    let at = a.transpose();
    let mut op = DMatrix::zeros(n, n);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let mut b = DMatrix::zeros(order, order);
        if i == j {
            b[(i, i)] = 1.0;
        } else {
            b[(i, j)] = std::f64::consts::FRAC_1_SQRT_2;
            b[(j, i)] = std::f64::consts::FRAC_1_SQRT_2;
        }
        let image = &at * &b * a - &b * mu;
        op.set_column(k, &sym_to_coords(&image, &pairs));
    }
    op
}

/// Rank cut on a descending singular-value list: prefer the largest relative
/// gap inside the plausibly-zero tail (values below `sqrt(tol.null)` of the
/// top) when it exceeds `tol.gap`; otherwise the fixed relative threshold
/// `tol.null`. Returns the nullity.
///
/// `scale` is the natural size of the operator (`||A||_F^2 + |mu|` for the
/// congruence map): when even the top singular value is negligible against
/// it, the operator is the zero map up to rounding and the whole space is
/// null. Without the floor, conjugation noise on `A = T (lambda I) T^{-1}`
/// with `lambda^2 = mu` would be mistaken for a rank-full operator.
fn nullity_by_gap(sv: &[f64], tol: &Tolerances, scale: f64) -> usize {
    let n = sv.len();
    let top = sv[0];
    if top <= tol.null * scale {
        return n;
    }
    // Values at rounding level are indistinguishable from zero; flooring them
    // keeps the gap scan from seeing spurious ratios inside the zero tail.
    let floor = f64::EPSILON * top;
    let coarse = top * tol.null.sqrt();
    let mut best: Option<(usize, f64)> = None;
    for i in 0..n - 1 {
        if sv[i + 1] <= coarse {
            let ratio = sv[i].max(floor) / sv[i + 1].max(floor);
            if best.is_none_or(|(_, br)| ratio > br) {
                best = Some((i, ratio));
            }
        }
    }
    match best {
        Some((i, ratio)) if ratio > tol.gap => n - 1 - i,
        _ => sv.iter().filter(|&&s| s <= tol.null * top).count(),
    }
}

/// A basis of real symmetric solutions to `A^T M A = mu M`.
#[derive(Debug, Clone)]
pub struct SymmetricSolutionSpace {
    /// The scalar on the right-hand side (`eps` in the invariant-quadric case).
    pub mu: f64,
    /// Solution matrices, orthonormal under the Frobenius inner product.
    pub basis: Vec<DMatrix<f64>>,
    /// Dimension predicted by the eigenvalue formula, when applicable.
    pub predicted_dim: Option<usize>,
    /// Largest relative equation residual over the basis.
    pub max_residual: f64,
}

impl SymmetricSolutionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Real linear combination of the basis.
    pub fn combine(&self, coeffs: &[f64]) -> DMatrix<f64> {
        let order = self.basis[0].nrows();
        let mut m = DMatrix::zeros(order, order);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            m += b * *c;
        }
        m
    }
}

/// Solves `A^T M A = mu M` over real symmetric `M` for any `mu != 0`.
///
/// An empty basis is a valid result. The basis is orthonormal in the
/// Frobenius inner product and every element is exactly symmetric.
pub fn solve_congruence_matrix(
    a: &DMatrix<f64>,
    mu: f64,
    tol: &Tolerances,
) -> Result<SymmetricSolutionSpace> {
    if mu == 0.0 {
        return Err(Error::NotApplicable(
            "congruence equation requires mu != 0".into(),
        ));
    }
    if a.nrows() != a.ncols() || a.nrows() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "congruence equation needs a square matrix of order >= 2, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let order = a.nrows();
    let pairs = sym_index_pairs(order);
    let op = congruence_operator(a, mu);
    let svd = op
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("svd of congruence operator"))?;
    let vt = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let scale = a.norm_squared() + mu.abs();
    let dim = nullity_by_gap(&sv, tol, scale);

    let at = a.transpose();
    let mut basis = Vec::with_capacity(dim);
    let mut max_residual: f64 = 0.0;
    for &i in idx.iter().rev().take(dim) {
        let coords = vt.row(i).transpose();
        let m = coords_to_sym(&coords, &pairs, order);
        let residual = (&at * &m * a - &m * mu).norm() / m.norm();
        max_residual = max_residual.max(residual);
        basis.push(m);
    }
    basis.reverse();
    Ok(SymmetricSolutionSpace {
        mu,
        basis,
        predicted_dim: None,
        max_residual,
    })
}

/// Solves the congruence equation for a system matrix (see
/// [`solve_congruence_matrix`]).
pub fn solve_congruence(s: &SystemMatrix, mu: f64) -> Result<SymmetricSolutionSpace> {
    solve_congruence_matrix(s.matrix(), mu, s.tolerances())
}

/// Dimension of the solution space predicted from the eigenvalues:
/// `(m(q)^2 + m(q) + m(-q)^2 + m(-q))/2 + sum m(lambda)^2` over
/// `sigma_epsilon`, with `q = sqrt(eps)`.
#[derive(Debug, Clone, Copy)]
pub struct PredictedDimension {
    pub dim: usize,
    /// Set when `eps = -1` with odd order, where no invertible symmetric
    /// solution can exist and the formula is reported as zero.
    pub parity_blocked: bool,
}

pub fn predicted_dimension(sd: &SpectralDecomposition, eps: Epsilon) -> Result<PredictedDimension> {
    if !sd.check_inverse_similarity(eps)? {
        return Err(Error::NotApplicable(format!(
            "spectrum is not closed under lambda -> {}/lambda",
            eps.value()
        )));
    }
    if eps == Epsilon::Minus && sd.order() % 2 == 1 {
        return Ok(PredictedDimension {
            dim: 0,
            parity_blocked: true,
        });
    }
    let sigma = crate::spectral::sigma_epsilon(sd, eps)?;
    let (r, s) = (sigma.r, sigma.s);
    let dim =
        (r * r + r + s * s + s) / 2 + sigma.members.iter().map(|&(_, _, m)| m * m).sum::<usize>();
    Ok(PredictedDimension {
        dim,
        parity_blocked: false,
    })
}

/// Outcome of the invertible-member search.
#[derive(Debug, Clone)]
pub enum InvertibleSearch {
    /// An invertible combination, with its smallest relative singular value.
    Found {
        matrix: DMatrix<f64>,
        coeffs: Vec<f64>,
        sigma_min_rel: f64,
    },
    /// All basis elements annihilate a common vector, so every combination is
    /// singular. This is a proof, not a sampling statement.
    CertifiedSingular { kernel: DVector<f64> },
    /// Budget exhausted without finding an invertible member or a certificate.
    /// Inconclusive; `det_samples` holds the |det| of the seeded random trials.
    NoneFound { det_samples: Vec<f64> },
}

fn relative_sigma_min(m: &DMatrix<f64>) -> f64 {
    let svd = match m.clone().try_svd(false, false, f64::EPSILON, 10_000) {
        Some(svd) => svd,
        None => return 0.0,
    };
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv[0] == 0.0 {
        0.0
    } else {
        sv[sv.len() - 1] / sv[0]
    }
}

/// Searches `span(basis)` for an invertible matrix: first the basis elements,
/// then deterministic small-integer combinations, then `budget` seeded random
/// combinations. Before searching, the stacked basis is tested for a common
/// kernel vector, which certifies that every combination is singular.
pub fn invertible_member_of(
    basis: &[DMatrix<f64>],
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<InvertibleSearch> {
    if basis.is_empty() {
        return Err(Error::EmptySpace);
    }
    let order = basis[0].nrows();
    let d = basis.len();

    // Common-kernel certificate: nullspace of the stacked basis action.
    let mut stacked = DMatrix::zeros(order * d, order);
    for (k, b) in basis.iter().enumerate() {
        stacked
            .view_mut((k * order, 0), (order, order))
            .copy_from(b);
    }
    let svd = stacked
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("svd of stacked basis"))?;
    let vt = svd.v_t.as_ref().unwrap();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let top = svd.singular_values[idx[0]];
    let smallest = idx[idx.len() - 1];
    if top == 0.0 || svd.singular_values[smallest] <= tol.sing * top {
        return Ok(InvertibleSearch::CertifiedSingular {
            kernel: vt.row(smallest).transpose(),
        });
    }

    // Quality target: prefer comfortably invertible members; fall back to the
    // best candidate above the singularity threshold.
    let target = 1e-6_f64.max(100.0 * tol.sing);
    let mut best: Option<(DMatrix<f64>, Vec<f64>, f64)> = None;
    let consider = |coeffs: Vec<f64>, best: &mut Option<(DMatrix<f64>, Vec<f64>, f64)>| {
        let mut m = DMatrix::zeros(order, order);
        for (c, b) in coeffs.iter().zip(basis) {
            m += b * *c;
        }
        let norm = m.norm();
        if norm == 0.0 {
            return false;
        }
        let rel = relative_sigma_min(&m);
        if best.as_ref().is_none_or(|(_, _, b)| rel > *b) {
            *best = Some((m, coeffs, rel));
        }
        rel > target
    };

    // Basis elements.
    for k in 0..d {
        let mut c = vec![0.0; d];
        c[k] = 1.0;
        if consider(c, &mut best) {
            let (matrix, coeffs, sigma_min_rel) = best.unwrap();
            return Ok(InvertibleSearch::Found {
                matrix,
                coeffs,
                sigma_min_rel,
            });
        }
    }
    // Deterministic small-integer combinations.
    let deterministic: Vec<Vec<f64>> = vec![
        vec![1.0; d],
        (0..d)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
        (0..d).map(|k| (k + 1) as f64).collect(),
        (0..d).map(|k| 2f64.powi((k % 16) as i32)).collect(),
    ];
    for c in deterministic {
        if consider(c, &mut best) {
            let (matrix, coeffs, sigma_min_rel) = best.unwrap();
            return Ok(InvertibleSearch::Found {
                matrix,
                coeffs,
                sigma_min_rel,
            });
        }
    }
    // Seeded random combinations.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut det_samples = Vec::with_capacity(budget);
    for _ in 0..budget {
        let coeffs: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut m = DMatrix::zeros(order, order);
        for (c, b) in coeffs.iter().zip(basis) {
            m += b * *c;
        }
        det_samples.push(m.determinant().abs());
        if consider(coeffs, &mut best) {
            let (matrix, coeffs, sigma_min_rel) = best.unwrap();
            return Ok(InvertibleSearch::Found {
                matrix,
                coeffs,
                sigma_min_rel,
            });
        }
    }
    match best {
        Some((matrix, coeffs, rel)) if rel > tol.sing => Ok(InvertibleSearch::Found {
            matrix,
            coeffs,
            sigma_min_rel: rel,
        }),
        _ => Ok(InvertibleSearch::NoneFound { det_samples }),
    }
}

/// Invertible-member search over a solution space (see
/// [`invertible_member_of`]).
pub fn invertible_member(
    space: &SymmetricSolutionSpace,
    budget: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<InvertibleSearch> {
    invertible_member_of(&space.basis, budget, seed, tol)
}

/// Dimension of the complex symmetric solution space of `A^T N A = mu N`,
/// computed in complex arithmetic.
pub fn complex_symmetric_dimension(a: &DMatrix<f64>, mu: f64, tol: &Tolerances) -> Result<usize> {
    let op = congruence_operator(a, mu);
    let opc: DMatrix<Complex<f64>> = op.map(|x| Complex::new(x, 0.0));
    let svd = opc.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(nullity_by_gap(&sv, tol, a.norm_squared() + mu.abs()))
}

/// Cross-check that the real and complex symmetric solution spaces have the
/// same dimension (they must, since the complex space is the complexification
/// of the real one).
pub fn real_dim_equals_complex_dim(a: &DMatrix<f64>, mu: f64, tol: &Tolerances) -> Result<bool> {
    let real = solve_congruence_matrix(a, mu, tol)?.dim();
    let complex = complex_symmetric_dimension(a, mu, tol)?;
    Ok(real == complex)
}

/// System-level form of [`real_dim_equals_complex_dim`].
pub fn real_dim_equals_complex_dim_check(s: &SystemMatrix, eps: Epsilon) -> Result<bool> {
    real_dim_equals_complex_dim(s.matrix(), eps.value(), s.tolerances())
}

/// Kronecker product, used to materialize the congruence operator on the full
/// (not necessarily symmetric) matrix space.
fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (p, q) = (a.nrows(), a.ncols());
    let (r, s) = (b.nrows(), b.ncols());
    let mut k = DMatrix::zeros(p * r, q * s);
    for i in 0..p {
        for j in 0..q {
            k.view_mut((i * r, j * s), (r, s))
                .copy_from(&(b * a[(i, j)]));
        }
    }
    k
}

/// Basis of the full (not necessarily symmetric) solution space of
/// `A^T Y A = mu Y`, via the Kronecker form `(A^T (x) A^T - mu I) vec(Y) = 0`.
pub fn general_solution_space(
    a: &DMatrix<f64>,
    mu: f64,
    tol: &Tolerances,
) -> Result<Vec<DMatrix<f64>>> {
    let order = a.nrows();
    let at = a.transpose();
    let mut op = kron(&at, &at);
    for i in 0..op.nrows() {
        op[(i, i)] -= mu;
    }
    let svd = op
        .try_svd(false, true, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("svd of kronecker operator"))?;
    let vt = svd.v_t.as_ref().unwrap();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let dim = nullity_by_gap(&sv, tol, a.norm_squared() + mu.abs());
    let mut basis = Vec::with_capacity(dim);
    for &i in idx.iter().rev().take(dim) {
        // Column-major vec: entry (row, col) sits at col * order + row.
        let coords = vt.row(i);
        let m = DMatrix::from_fn(order, order, |r, c| coords[c * order + r]);
        basis.push(m);
    }
    basis.reverse();
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::decompose_matrix;
    use nalgebra::{dmatrix, dvector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_gives_full_space() {
        let a = DMatrix::identity(3, 3);
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 6);
        assert!(space.max_residual < 1e-12);
    }

    #[test]
    fn jordan_counterexample_dim_three() {
        let a = dmatrix![1.0, 0.0, 0.0; 1.0, 1.0, 0.0; 0.0, 0.0, 1.0];
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 3);
        // Every solution has the form [[alpha, 0, beta], [0,0,0], [beta, 0, gamma]]:
        // zero middle row and column.
        for m in &space.basis {
            for k in 0..3 {
                assert!(m[(1, k)].abs() < 1e-10, "middle row must vanish");
                assert!(m[(k, 1)].abs() < 1e-10, "middle column must vanish");
            }
        }
    }

    #[test]
    fn reciprocal_diagonal_pair_gives_k_block() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5]);
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 1);
        let m = &space.basis[0];
        assert!(m[(0, 0)].abs() < 1e-12);
        assert!(m[(1, 1)].abs() < 1e-12);
        assert!(m[(0, 1)].abs() > 0.5);
    }

    #[test]
    fn predicted_dimension_identity() {
        let sd = decompose_matrix(&DMatrix::identity(3, 3), &tol()).unwrap();
        let p = predicted_dimension(&sd, Epsilon::Plus).unwrap();
        assert_eq!(p.dim, 6);
        assert!(!p.parity_blocked);
    }

    #[test]
    fn predicted_dimension_matches_nullspace() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5, 1.0, -1.0]);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        let p = predicted_dimension(&sd, Epsilon::Plus).unwrap();
        assert_eq!(p.dim, 3);
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 3);
    }

    #[test]
    fn predicted_dimension_rotation() {
        let theta = std::f64::consts::FRAC_PI_3;
        let a = dmatrix![theta.cos(), -theta.sin(); theta.sin(), theta.cos()];
        let sd = decompose_matrix(&a, &tol()).unwrap();
        let p = predicted_dimension(&sd, Epsilon::Plus).unwrap();
        assert_eq!(p.dim, 1);
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 1);
    }

    #[test]
    fn parity_blocks_minus_on_odd_order() {
        // diag(2, -1/2, i-pair) cannot exist at odd order; use a spectrum
        // that is (-1)-closed at order 4 and check the odd-order guard with a
        // synthetic decomposition at order 3 is unreachable: instead verify
        // the guard directly on an order-3 (-1)-closed spectrum, which cannot
        // exist for real invertible matrices; the nearest exercise is that
        // predicted_dimension(-1) on such a matrix errors as not-applicable.
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5, 1.0]);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        assert!(matches!(
            predicted_dimension(&sd, Epsilon::Minus),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn invertible_member_found_for_k_block() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5]);
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        match invertible_member(&space, 32, 7, &tol()).unwrap() {
            InvertibleSearch::Found { matrix, .. } => {
                assert!(matrix[(0, 1)].abs() > 0.5);
            }
            other => panic!("expected Found, got {other:?}"),
        }
    }

    #[test]
    fn jordan_counterexample_certified_singular() {
        let a = dmatrix![1.0, 0.0, 0.0; 1.0, 1.0, 0.0; 0.0, 0.0, 1.0];
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        match invertible_member(&space, 32, 7, &tol()).unwrap() {
            InvertibleSearch::CertifiedSingular { kernel } => {
                // Common kernel is e_2.
                assert!(kernel[0].abs() < 1e-8);
                assert!(kernel[1].abs() > 0.99);
                assert!(kernel[2].abs() < 1e-8);
            }
            other => panic!("expected CertifiedSingular, got {other:?}"),
        }
    }

    #[test]
    fn empty_space_errors() {
        assert!(matches!(
            invertible_member_of(&[], 8, 0, &tol()),
            Err(Error::EmptySpace)
        ));
    }

    #[test]
    fn real_and_complex_dims_agree() {
        for a in [
            DMatrix::identity(3, 3),
            DMatrix::from_diagonal(&dvector![2.0, 0.5, 1.0, -1.0]),
        ] {
            assert!(real_dim_equals_complex_dim(&a, 1.0, &tol()).unwrap());
        }
    }

    #[test]
    fn general_space_contains_symmetric_space() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5]);
        let general = general_solution_space(&a, 1.0, &tol()).unwrap();
        // For diag(2, 1/2): Y entries scale by d_i d_j, so (1,2) and (2,1)
        // are free: dimension 2, containing the symmetric K-block.
        assert_eq!(general.len(), 2);
        for y in &general {
            let residual = (a.transpose() * y * &a - y).norm() / y.norm();
            assert!(residual < 1e-10);
        }
    }

    #[test]
    fn block_splitting_for_disjoint_spectra() {
        // A = diag(A1, A2) with Sp(A1) = {2, 1/2} and Sp(A2) = {3, 1/3}:
        // spectra of A1 and eps/A2 are disjoint, so solutions split.
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5, 3.0, 1.0 / 3.0]);
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 2);
        for m in &space.basis {
            let off = m.view((0, 2), (2, 2)).norm();
            assert!(off < 1e-10 * m.norm(), "cross blocks must vanish");
        }
    }

    #[test]
    fn lambda_squared_equals_eps_gives_everything() {
        let a = DMatrix::from_diagonal(&dvector![-1.0, -1.0, -1.0, -1.0]);
        let space = solve_congruence_matrix(&a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 10);
    }

    #[test]
    fn signature_of_minus_members_is_balanced() {
        let a = DMatrix::from_diagonal(&dvector![2.0, -0.5]);
        let space = solve_congruence_matrix(&a, -1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 1);
        match invertible_member(&space, 32, 3, &tol()).unwrap() {
            InvertibleSearch::Found { matrix, .. } => {
                let eig = nalgebra::SymmetricEigen::new(matrix);
                let pos = eig.eigenvalues.iter().filter(|&&x| x > 0.0).count();
                let neg = eig.eigenvalues.iter().filter(|&&x| x < 0.0).count();
                assert_eq!((pos, neg), (1, 1));
            }
            other => panic!("expected Found, got {other:?}"),
        }
    }
}
