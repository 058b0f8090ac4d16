//! Complex eigenstructure of the system matrix.
//!
//! Provides clustered eigenvalues with algebraic/geometric multiplicities, a
//! semisimplicity check, closure of the spectrum under the pairing
//! `lambda -> epsilon / lambda`, the transversal `sigma_epsilon`, and the
//! ordered diagonalization `D = P A P^{-1}` whose diagonal interleaves each
//! paired eigenvalue with its partner.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::homogeneous::SystemMatrix;
use crate::tolerances::Tolerances;

type CMatrix = DMatrix<Complex<f64>>;
type CVector = DVector<Complex<f64>>;

/// Sign in the congruence equation `A^T M A = epsilon M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn value(self) -> f64 {
        match self {
            Epsilon::Plus => 1.0,
            Epsilon::Minus => -1.0,
        }
    }

    /// The principal square root of epsilon: `1` or `i`.
    pub fn sqrt(self) -> Complex<f64> {
        match self {
            Epsilon::Plus => Complex::new(1.0, 0.0),
            Epsilon::Minus => Complex::new(0.0, 1.0),
        }
    }

    /// Pairing partner `epsilon / lambda` of an eigenvalue.
    pub fn partner(self, lambda: Complex<f64>) -> Complex<f64> {
        Complex::new(self.value(), 0.0) / lambda
    }

    pub const BOTH: [Epsilon; 2] = [Epsilon::Plus, Epsilon::Minus];
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:+}", self.value() as i64)
    }
}

/// One clustered eigenvalue with its eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    /// Representative value (exactly real when `is_real`).
    pub value: Complex<f64>,
    /// Number of raw eigenvalues merged into this cluster.
    pub algebraic: usize,
    /// Numerical nullity of `A - value * I`.
    pub geometric: usize,
    /// Unit-norm eigenvectors as columns, `(n+1) x geometric`.
    pub vectors: CMatrix,
    pub is_real: bool,
}

/// Clustered eigenstructure of a real square matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    order: usize,
    norm2: f64,
    norm_f: f64,
    clusters: Vec<EigenCluster>,
    semisimple: bool,
    cond_v: Option<f64>,
    residual: f64,
    eps_flags: [bool; 2],
    tol: Tolerances,
}

impl SpectralDecomposition {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn norm2(&self) -> f64 {
        self.norm2
    }

    pub fn clusters(&self) -> &[EigenCluster] {
        &self.clusters
    }

    /// Distinct eigenvalues with algebraic multiplicities.
    pub fn eigenvalues(&self) -> Vec<(Complex<f64>, usize)> {
        self.clusters
            .iter()
            .map(|c| (c.value, c.algebraic))
            .collect()
    }

    /// Whether the matrix is diagonalizable over the complex numbers.
    pub fn is_semisimple(&self) -> bool {
        self.semisimple
    }

    /// Condition number of the eigenvector matrix, when it is square.
    pub fn cond_v(&self) -> Option<f64> {
        self.cond_v
    }

    /// `||A V - V D||_F / ||A||_F` over the computed eigenvectors.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Whether the spectrum is closed under `lambda -> epsilon/lambda` with
    /// matching multiplicities. This is a multiset statement; it implies
    /// similarity to `epsilon A^{-1}` only for semisimple matrices.
    pub fn epsilon_flag(&self, eps: Epsilon) -> bool {
        match eps {
            Epsilon::Plus => self.eps_flags[0],
            Epsilon::Minus => self.eps_flags[1],
        }
    }

    /// Similarity of `A` to `epsilon A^{-1}`, decided spectrally.
    ///
    /// Errors with [`Error::NotSemisimple`] when the decomposition is not
    /// semisimple, since the multiset test is inconclusive there (Jordan
    /// structures would have to match as well).
    pub fn check_inverse_similarity(&self, eps: Epsilon) -> Result<bool> {
        if !self.semisimple {
            return Err(Error::NotSemisimple(
                "inverse-similarity check requires a semisimple matrix".into(),
            ));
        }
        Ok(self.epsilon_flag(eps))
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    fn find_cluster(&self, target: Complex<f64>, tol_pair: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in self.clusters.iter().enumerate() {
            let d = (c.value - target).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.and_then(|(i, d)| (d <= tol_pair * (1.0 + target.norm())).then_some(i))
    }
}

fn sorted_singular_values(
    svd: &nalgebra::SVD<Complex<f64>, nalgebra::Dyn, nalgebra::Dyn>,
) -> Vec<f64> {
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Nullspace basis of `m` at the given absolute singular-value threshold,
/// together with the number of vectors found.
fn complex_nullspace(m: &CMatrix, threshold: f64) -> (CMatrix, usize) {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let null_idx: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    let n = m.ncols();
    let mut basis = CMatrix::zeros(n, null_idx.len());
    for (k, &i) in null_idx.iter().enumerate() {
        // Rows of v_t are the adjoints of the right singular vectors.
        for c in 0..n {
            basis[(c, k)] = vt[(i, c)].conj();
        }
    }
    (basis, null_idx.len())
}

/// Fix the phase of each column: unit norm, first significant component
/// real and positive. Keeps the ordering deterministic.
fn normalize_columns(m: &mut CMatrix) {
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= Complex::new(norm, 0.0);
        }
        let max_abs = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(lead) = col.iter().position(|z| z.norm() > 1e-8 * max_abs) {
            let z = col[lead];
            if z.norm() > 0.0 {
                let phase = z.conj() / Complex::new(z.norm(), 0.0);
                col *= phase;
            }
        }
    }
}

fn to_complex(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex::new(x, 0.0))
}

/// Real nullspace basis at the given absolute threshold. Used for real
/// eigenvalue clusters so their eigenvectors are exactly real even when the
/// eigenspace has dimension greater than one.
fn real_nullspace(m: &DMatrix<f64>, threshold: f64) -> (DMatrix<f64>, usize) {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let null_idx: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| svd.singular_values[i] <= threshold)
        .collect();
    let n = m.ncols();
    let mut basis = DMatrix::zeros(n, null_idx.len());
    for (k, &i) in null_idx.iter().enumerate() {
        basis.set_column(k, &vt.row(i).transpose());
    }
    (basis, null_idx.len())
}

/// One pass of shifted inverse iteration on a cluster's eigenvector block,
/// followed by re-orthonormalization. Tightens eigenvector residuals well
/// below the rank-decision threshold; a failed solve leaves the block as is.
fn refine_cluster(a: &CMatrix, value: &mut Complex<f64>, vectors: &mut CMatrix, keep_real: bool) {
    let n = a.nrows();
    let shifted = a - CMatrix::identity(n, n) * *value;
    let lu = shifted.clone().lu();
    let mut refined = vectors.clone();
    for k in 0..vectors.ncols() {
        let col: CVector = vectors.column(k).into();
        if let Some(w) = lu.solve(&col) {
            let norm = w.norm();
            if norm.is_finite() && norm > 0.0 {
                refined.set_column(k, &(w / Complex::new(norm, 0.0)));
            }
        }
    }
    // Orthonormalize within the eigenspace; any orthonormal basis of the
    // nullspace of A - lambda I is again an eigenbasis.
    let qr = refined.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let ok = (0..refined.ncols()).all(|k| r[(k, k)].norm() > 1e-8);
    if ok {
        refined = q.columns(0, vectors.ncols()).into();
    }
    // Rayleigh-quotient update of the cluster value.
    let mut rq = Complex::new(0.0, 0.0);
    for k in 0..refined.ncols() {
        let v: CVector = refined.column(k).into();
        let av = a * &v;
        rq += v.dotc(&av) / v.dotc(&v);
    }
    let mut new_value = rq / Complex::new(refined.ncols() as f64, 0.0);
    if keep_real {
        new_value.im = 0.0;
        refined = refined.map(|z| Complex::new(z.re, 0.0));
    }
    if new_value.is_finite() {
        *value = new_value;
    }
    *vectors = refined;
    normalize_columns(vectors);
}

/// Eigenvalue clustering and eigenvector extraction for a real square matrix
/// of order at least 2.
///
/// Raw eigenvalues within `tol.cluster * ||A||_2` of each other are merged
/// (union-find, transitively) and the cluster size is the algebraic
/// multiplicity. The decomposition is flagged semisimple when every cluster's
/// geometric multiplicity, read off the numerical rank of `A - lambda I`,
/// equals its algebraic multiplicity.
pub fn decompose_matrix(a: &DMatrix<f64>, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let order = a.nrows();
    if order != a.ncols() || order < 2 {
        return Err(Error::DimensionMismatch(format!(
            "eigenanalysis needs a square matrix of order >= 2, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let svd = a
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("svd of input matrix"))?;
    let sv = {
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        sv
    };
    let norm2 = sv[0];
    if norm2 == 0.0 || sv[order - 1] <= tol.sing * norm2 {
        return Err(Error::SingularMatrix {
            ratio: if norm2 == 0.0 {
                0.0
            } else {
                sv[order - 1] / norm2
            },
            threshold: tol.sing,
        });
    }

    // The QR iteration occasionally stalls at machine-epsilon deflation
    // thresholds; retrying with a looser threshold keeps eigenvalues far
    // more accurate than the clustering radius cares about.
    let schur = [f64::EPSILON, 1e2 * f64::EPSILON, 1e4 * f64::EPSILON]
        .into_iter()
        .find_map(|eps| nalgebra::linalg::Schur::try_new(a.clone(), eps, 75_000))
        .ok_or(Error::ConvergenceFailure("schur decomposition"))?;
    let raw: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();

    // Union-find clustering on pairwise distance.
    let radius = tol.cluster * norm2;
    let mut parent: Vec<usize> = (0..order).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..order {
        for j in (i + 1)..order {
            if (raw[i] - raw[j]).norm() <= radius {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..order {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    struct ProtoCluster {
        value: Complex<f64>,
        algebraic: usize,
    }
    let mut protos: Vec<ProtoCluster> = groups
        .values()
        .map(|members| {
            let mean = members.iter().map(|&i| raw[i]).sum::<Complex<f64>>()
                / Complex::new(members.len() as f64, 0.0);
            ProtoCluster {
                value: mean,
                algebraic: members.len(),
            }
        })
        .collect();

    // Enforce exact conjugation symmetry: realify near-real clusters and
    // average complex clusters with their conjugate partners.
    for p in protos.iter_mut() {
        if p.value.im.abs() <= radius {
            p.value.im = 0.0;
        }
    }
    let k = protos.len();
    let mut paired = vec![false; k];
    for i in 0..k {
        if paired[i] || protos[i].value.im == 0.0 {
            continue;
        }
        let target = protos[i].value.conj();
        let mut best: Option<(usize, f64)> = None;
        for (j, q) in protos.iter().enumerate() {
            if j == i || paired[j] {
                continue;
            }
            let d = (q.value - target).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= 2.0 * radius + tol.pair * (1.0 + target.norm()) => {
                let w = (protos[i].value + protos[j].value.conj()) / Complex::new(2.0, 0.0);
                protos[i].value = w;
                protos[j].value = w.conj();
                paired[i] = true;
                paired[j] = true;
            }
            _ => {
                return Err(Error::PairingAmbiguity {
                    re: protos[i].value.re,
                    im: protos[i].value.im,
                });
            }
        }
    }

    // Deterministic ordering: by modulus, then argument in [0, 2pi).
    protos.sort_by(|x, y| {
        let kx = (x.value.norm(), arg_2pi(x.value));
        let ky = (y.value.norm(), arg_2pi(y.value));
        kx.partial_cmp(&ky).unwrap()
    });

    // Eigenvectors per cluster; conjugate clusters reuse conjugated vectors.
    let ac = to_complex(a);
    let mut clusters: Vec<EigenCluster> = Vec::with_capacity(k);
    for p in &protos {
        if p.value.im < 0.0 {
            // Filled in from the conjugate cluster below.
            clusters.push(EigenCluster {
                value: p.value,
                algebraic: p.algebraic,
                geometric: 0,
                vectors: CMatrix::zeros(order, 0),
                is_real: false,
            });
            continue;
        }
        let threshold = tol.rank * (norm2 + p.value.norm());
        let is_real = p.value.im == 0.0;
        let (mut vectors, geometric) = if is_real {
            let shifted = a - DMatrix::identity(order, order) * p.value.re;
            let (basis, g) = real_nullspace(&shifted, threshold);
            (to_complex(&basis), g)
        } else {
            let shifted = &ac - CMatrix::identity(order, order) * p.value;
            complex_nullspace(&shifted, threshold)
        };
        normalize_columns(&mut vectors);
        let mut value = p.value;
        if geometric == p.algebraic && geometric > 0 {
            refine_cluster(&ac, &mut value, &mut vectors, is_real);
        }
        clusters.push(EigenCluster {
            value,
            algebraic: p.algebraic,
            geometric,
            vectors,
            is_real,
        });
    }
    // Mirror conjugate clusters.
    for i in 0..k {
        if clusters[i].value.im < 0.0 && clusters[i].geometric == 0 {
            let target = clusters[i].value.conj();
            let src = (0..k)
                .filter(|&j| clusters[j].value.im > 0.0)
                .min_by(|&x, &y| {
                    (clusters[x].value - target)
                        .norm()
                        .total_cmp(&(clusters[y].value - target).norm())
                })
                .ok_or(Error::PairingAmbiguity {
                    re: clusters[i].value.re,
                    im: clusters[i].value.im,
                })?;
            clusters[i].value = clusters[src].value.conj();
            clusters[i].geometric = clusters[src].geometric;
            clusters[i].vectors = clusters[src].vectors.map(|z| z.conj());
        }
    }

    let semisimple = clusters.iter().all(|c| c.geometric == c.algebraic)
        && clusters.iter().map(|c| c.geometric).sum::<usize>() == order;

    // Residual ||A V - V D||_F / ||A||_F over whatever vectors were found.
    let total_vecs: usize = clusters.iter().map(|c| c.geometric).sum();
    let mut v = CMatrix::zeros(order, total_vecs);
    let mut d_raw = CVector::zeros(total_vecs);
    let mut col = 0;
    for c in &clusters {
        for t in 0..c.geometric {
            v.set_column(col, &c.vectors.column(t));
            d_raw[col] = c.value;
            col += 1;
        }
    }
    let norm_f = a.norm();
    let residual = if total_vecs > 0 {
        let av = &ac * &v;
        let vd = {
            let mut vd = v.clone();
            for (c, mut colv) in vd.column_iter_mut().enumerate() {
                colv *= d_raw[c];
            }
            vd
        };
        (av - vd).norm() / norm_f
    } else {
        0.0
    };

    if semisimple && residual > 10.0 * tol.eig {
        // Rank detection accepted vectors the eigen-equation rejects; refuse
        // to hand them downstream as a diagonalization.
        return Err(Error::ConvergenceFailure("eigenvector residual too large"));
    }
    let cond_v = if semisimple && total_vecs == order {
        let vsvd = v.clone().svd(false, false);
        let vsv = sorted_singular_values(&vsvd);
        let c = vsv[0] / vsv[order - 1];
        if c > tol.cond_cap {
            return Err(Error::IllConditionedEigenbasis {
                cond: c,
                cap: tol.cond_cap,
            });
        }
        Some(c)
    } else {
        None
    };

    let eps_flags = [
        multiset_closed(&clusters, Epsilon::Plus, tol),
        multiset_closed(&clusters, Epsilon::Minus, tol),
    ];

    Ok(SpectralDecomposition {
        order,
        norm2,
        norm_f,
        clusters,
        semisimple,
        cond_v,
        residual,
        eps_flags,
        tol: *tol,
    })
}

/// Eigenanalysis of a system matrix (see [`decompose_matrix`]).
pub fn decompose(s: &SystemMatrix) -> Result<SpectralDecomposition> {
    decompose_matrix(s.matrix(), s.tolerances())
}

fn arg_2pi(z: Complex<f64>) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + 2.0 * std::f64::consts::PI
    } else {
        a
    }
}

fn multiset_closed(clusters: &[EigenCluster], eps: Epsilon, tol: &Tolerances) -> bool {
    clusters.iter().all(|c| {
        let target = eps.partner(c.value);
        clusters.iter().any(|q| {
            (q.value - target).norm() <= tol.pair * (1.0 + target.norm())
                && q.algebraic == c.algebraic
        })
    })
}

/// The transversal `sigma_epsilon` of the eigenvalue pairing, together with
/// the multiplicities of the roots of epsilon.
#[derive(Debug, Clone)]
pub struct SigmaEpsilon {
    pub eps: Epsilon,
    /// `(cluster index, value, algebraic multiplicity)` of the selected
    /// eigenvalues: all with modulus < 1, plus the chosen half of the unit
    /// circle (positive imaginary part for epsilon = +1, positive real part
    /// for epsilon = -1), excluding the roots of epsilon.
    pub members: Vec<(usize, Complex<f64>, usize)>,
    /// Multiplicity of `sqrt(epsilon)` and the cluster holding it.
    pub r: usize,
    pub plus_root: Option<usize>,
    /// Multiplicity of `-sqrt(epsilon)` and the cluster holding it.
    pub s: usize,
    pub minus_root: Option<usize>,
}

/// Selects the representative set `sigma_epsilon(A)`.
///
/// Requires a semisimple decomposition whose spectrum is closed under the
/// pairing; eigenvalues too close to the unit circle to classify produce
/// [`Error::PairingAmbiguity`].
pub fn sigma_epsilon(sd: &SpectralDecomposition, eps: Epsilon) -> Result<SigmaEpsilon> {
    if !sd.check_inverse_similarity(eps)? {
        return Err(Error::NotEpsilonSimilar {
            epsilon: eps.value(),
        });
    }
    let tol = &sd.tol;
    let mut out = SigmaEpsilon {
        eps,
        members: Vec::new(),
        r: 0,
        plus_root: None,
        s: 0,
        minus_root: None,
    };
    let sqrt_eps = eps.sqrt();
    for (i, c) in sd.clusters.iter().enumerate() {
        let modulus = c.value.norm();
        if modulus < 1.0 - tol.unit {
            out.members.push((i, c.value, c.algebraic));
        } else if modulus > 1.0 + tol.unit {
            continue;
        } else if (c.value - sqrt_eps).norm() <= 2.0 * tol.pair {
            out.r = c.algebraic;
            out.plus_root = Some(i);
        } else if (c.value + sqrt_eps).norm() <= 2.0 * tol.pair {
            out.s = c.algebraic;
            out.minus_root = Some(i);
        } else {
            // Unit-circle half selection: on the circle the partner of
            // lambda is eps * conj(lambda), so Im > 0 (for +1) respectively
            // Re > 0 (for -1) picks exactly one of each pair.
            let h = match eps {
                Epsilon::Plus => c.value.im,
                Epsilon::Minus => c.value.re,
            };
            if h > tol.pair {
                out.members.push((i, c.value, c.algebraic));
            } else if h < -tol.pair {
                continue;
            } else {
                return Err(Error::PairingAmbiguity {
                    re: c.value.re,
                    im: c.value.im,
                });
            }
        }
    }
    let paired: usize = out.members.iter().map(|&(_, _, m)| m).sum();
    if 2 * paired + out.r + out.s != sd.order {
        return Err(Error::NotApplicable(format!(
            "pairing bookkeeping failed: 2*{} + {} + {} != {}",
            paired, out.r, out.s, sd.order
        )));
    }
    Ok(out)
}

/// The diagonalization `D = P A P^{-1}` with the diagonal ordered as
/// `diag(D(lambda_1), ..., D(lambda_j), sqrt(eps) I_r, -sqrt(eps) I_s)`,
/// where `D(lambda) = diag(lambda, eps/lambda)` and the `lambda_i` run
/// through `sigma_epsilon` repeated by multiplicity.
#[derive(Debug, Clone)]
pub struct OrderedDiagonalization {
    pub eps: Epsilon,
    /// Diagonal entries of `D`.
    pub d: CVector,
    /// `P`, with `D = P A P^{-1}`.
    pub p: CMatrix,
    /// `P^{-1}`: eigenvectors as columns, in block order.
    pub w: CMatrix,
    /// Number of 2x2 pair blocks.
    pub j: usize,
    /// Multiplicities of `sqrt(eps)` and `-sqrt(eps)`.
    pub r: usize,
    pub s: usize,
    pub cond_p: f64,
    /// `||P A - D P||_F / ||A||_F`.
    pub residual: f64,
}

/// Builds the ordered diagonalization for a semisimple, epsilon-similar
/// decomposition. Within a pair block the `sigma_epsilon` member comes first
/// and its partner `eps/lambda` second.
pub fn ordered_diagonalization(
    sd: &SpectralDecomposition,
    eps: Epsilon,
    a: &DMatrix<f64>,
) -> Result<OrderedDiagonalization> {
    let sigma = sigma_epsilon(sd, eps)?;
    let order = sd.order;
    let tol = &sd.tol;
    let mut w = CMatrix::zeros(order, order);
    let mut d = CVector::zeros(order);
    let mut col = 0;
    let mut j = 0;
    for &(idx, value, mult) in &sigma.members {
        let partner_target = eps.partner(value);
        let pidx = sd
            .find_cluster(partner_target, tol.pair)
            .ok_or(Error::PairingAmbiguity {
                re: partner_target.re,
                im: partner_target.im,
            })?;
        let c = &sd.clusters[idx];
        let p = &sd.clusters[pidx];
        if p.algebraic != mult {
            return Err(Error::PairingAmbiguity {
                re: partner_target.re,
                im: partner_target.im,
            });
        }
        for t in 0..mult {
            w.set_column(col, &c.vectors.column(t));
            d[col] = c.value;
            w.set_column(col + 1, &p.vectors.column(t));
            d[col + 1] = p.value;
            col += 2;
            j += 1;
        }
    }
    for (root_idx, _count) in [(sigma.plus_root, sigma.r), (sigma.minus_root, sigma.s)] {
        if let Some(idx) = root_idx {
            let c = &sd.clusters[idx];
            for t in 0..c.geometric {
                w.set_column(col, &c.vectors.column(t));
                d[col] = c.value;
                col += 1;
            }
        }
    }
    debug_assert_eq!(col, order);

    let lu = w.clone().lu();
    let p = lu
        .try_inverse()
        .ok_or(Error::ConvergenceFailure("inversion of eigenvector matrix"))?;
    let wsvd = w.clone().svd(false, false);
    let sv = sorted_singular_values(&wsvd);
    let cond_p = sv[0] / sv[order - 1];

    let ac = to_complex(a);
    let pa = &p * &ac;
    let mut dp = p.clone();
    for (row, mut r) in dp.row_iter_mut().enumerate() {
        r *= d[row];
    }
    let residual = (pa - dp).norm() / sd.norm_f;
    if residual > 10.0 * tol.eig * cond_p {
        return Err(Error::ConvergenceFailure(
            "ordered diagonalization residual too large",
        ));
    }

    Ok(OrderedDiagonalization {
        eps,
        d,
        p,
        w,
        j,
        r: sigma.r,
        s: sigma.s,
        cond_p,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn rotation2(theta: f64) -> DMatrix<f64> {
        dmatrix![theta.cos(), -theta.sin(); theta.sin(), theta.cos()]
    }

    #[test]
    fn identity_is_semisimple_single_cluster() {
        let sd = decompose_matrix(&DMatrix::identity(3, 3), &tol()).unwrap();
        assert!(sd.is_semisimple());
        assert_eq!(sd.eigenvalues(), vec![(Complex::new(1.0, 0.0), 3)]);
        assert_eq!(sd.clusters()[0].geometric, 3);
    }

    #[test]
    fn jordan_counterexample_not_semisimple() {
        let a = dmatrix![1.0, 0.0, 0.0; 1.0, 1.0, 0.0; 0.0, 0.0, 1.0];
        let sd = decompose_matrix(&a, &tol()).unwrap();
        assert_eq!(sd.eigenvalues(), vec![(Complex::new(1.0, 0.0), 3)]);
        assert!(!sd.is_semisimple());
        assert_eq!(sd.clusters()[0].geometric, 2);
    }

    #[test]
    fn diagonal_clusters_are_distinct() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5, 1.0]);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        assert!(sd.is_semisimple());
        let vals = sd.eigenvalues();
        assert_eq!(vals.len(), 3);
        assert_eq!(vals[0].0, Complex::new(0.5, 0.0));
        assert_eq!(vals[1].0, Complex::new(1.0, 0.0));
        assert_eq!(vals[2].0, Complex::new(2.0, 0.0));
    }

    #[test]
    fn inverse_similarity_flags() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5, 1.0]);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        assert!(sd.check_inverse_similarity(Epsilon::Plus).unwrap());
        assert!(!sd.check_inverse_similarity(Epsilon::Minus).unwrap());

        let b = DMatrix::from_diagonal(&dvector![2.0, 3.0, 1.0]);
        let sdb = decompose_matrix(&b, &tol()).unwrap();
        assert!(!sdb.check_inverse_similarity(Epsilon::Plus).unwrap());
    }

    #[test]
    fn rotation_similar_to_minus_inverse() {
        let sd = decompose_matrix(&rotation2(std::f64::consts::FRAC_PI_2), &tol()).unwrap();
        // Spectrum {i, -i}: each value satisfies -1/lambda = lambda.
        assert!(sd.check_inverse_similarity(Epsilon::Minus).unwrap());
        assert!(sd.check_inverse_similarity(Epsilon::Plus).unwrap());
    }

    #[test]
    fn not_semisimple_check_errors() {
        let a = dmatrix![1.0, 0.0, 0.0; 1.0, 1.0, 0.0; 0.0, 0.0, 1.0];
        let sd = decompose_matrix(&a, &tol()).unwrap();
        assert!(matches!(
            sd.check_inverse_similarity(Epsilon::Plus),
            Err(Error::NotSemisimple(_))
        ));
    }

    #[test]
    fn sigma_of_real_pair_with_roots() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5, 1.0, -1.0]);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        let sig = sigma_epsilon(&sd, Epsilon::Plus).unwrap();
        assert_eq!(sig.members.len(), 1);
        assert_eq!(sig.members[0].1, Complex::new(0.5, 0.0));
        assert_eq!((sig.r, sig.s), (1, 1));
    }

    #[test]
    fn sigma_selects_upper_unit_half() {
        let sd = decompose_matrix(&rotation2(std::f64::consts::FRAC_PI_3), &tol()).unwrap();
        let sig = sigma_epsilon(&sd, Epsilon::Plus).unwrap();
        assert_eq!(sig.members.len(), 1);
        let lam = sig.members[0].1;
        assert!((lam - Complex::new(0.5, 0.75_f64.sqrt())).norm() < 1e-10);
        assert_eq!((sig.r, sig.s), (0, 0));
    }

    #[test]
    fn sigma_of_identity_is_empty() {
        let sd = decompose_matrix(&DMatrix::identity(3, 3), &tol()).unwrap();
        let sig = sigma_epsilon(&sd, Epsilon::Plus).unwrap();
        assert!(sig.members.is_empty());
        assert_eq!((sig.r, sig.s), (3, 0));
    }

    #[test]
    fn ordered_diagonalization_diag_pair() {
        let a = DMatrix::from_diagonal(&dvector![2.0, 0.5]);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        let od = ordered_diagonalization(&sd, Epsilon::Plus, &a).unwrap();
        assert_eq!(od.j, 1);
        assert_eq!((od.r, od.s), (0, 0));
        // sigma member 0.5 first, partner 2 second.
        assert!((od.d[0] - Complex::new(0.5, 0.0)).norm() < 1e-12);
        assert!((od.d[1] - Complex::new(2.0, 0.0)).norm() < 1e-12);
        assert!(od.residual < 1e-12);
    }

    #[test]
    fn ordered_diagonalization_rotation() {
        let a = rotation2(std::f64::consts::FRAC_PI_2);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        let od = ordered_diagonalization(&sd, Epsilon::Plus, &a).unwrap();
        assert_eq!(od.j, 1);
        // D = diag(i, -i); pair product is epsilon.
        assert!((od.d[0] * od.d[1] - Complex::new(1.0, 0.0)).norm() < 1e-10);
        assert!((od.d[0] - Complex::new(0.0, 1.0)).norm() < 1e-10);
        assert!(od.residual < 1e-10);
        // Eigenvector for i is proportional to (1, -i).
        let v = od.w.column(0);
        let ratio = v[1] / v[0];
        assert!((ratio - Complex::new(0.0, -1.0)).norm() < 1e-10);
    }

    #[test]
    fn pair_products_equal_epsilon() {
        let a = DMatrix::from_diagonal(&dvector![3.0, 1.0 / 3.0, 2.0, 0.5, 1.0, -1.0]);
        let sd = decompose_matrix(&a, &tol()).unwrap();
        let od = ordered_diagonalization(&sd, Epsilon::Plus, &a).unwrap();
        assert_eq!(od.j, 2);
        assert_eq!((od.r, od.s), (1, 1));
        for b in 0..od.j {
            let prod = od.d[2 * b] * od.d[2 * b + 1];
            assert!((prod - Complex::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn reconstruction_residual_small() {
        // Conjugated instance: rotation block plus a real pair.
        let theta = 0.7;
        let mut core = DMatrix::identity(4, 4);
        core.view_mut((0, 0), (2, 2)).copy_from(&rotation2(theta));
        core[(2, 2)] = 2.0;
        core[(3, 3)] = 0.5;
        let t = dmatrix![
            1.0, 0.2, -0.1, 0.3;
            0.0, 1.1, 0.4, -0.2;
            0.3, 0.0, 0.9, 0.1;
            -0.2, 0.1, 0.0, 1.2
        ];
        let a = &t * core * t.try_inverse().unwrap();
        let sd = decompose_matrix(&a, &tol()).unwrap();
        assert!(sd.is_semisimple());
        let od = ordered_diagonalization(&sd, Epsilon::Plus, &a).unwrap();
        // A = W D P reconstruction.
        let ac = a.map(|x| Complex::new(x, 0.0));
        let mut dp = od.p.clone();
        for (row, mut r) in dp.row_iter_mut().enumerate() {
            r *= od.d[row];
        }
        let recon = &od.w * dp;
        assert!((recon - ac).norm() / a.norm() < 1e-9 * od.cond_p);
    }
}
