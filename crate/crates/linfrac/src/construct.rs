//! Construction of a non-degenerate invariant quadric through a given point.
//!
//! In the eigenbasis that pairs each eigenvalue with its partner, the
//! diagonal-plus-K form `S = diag(alpha_1 K, ..., alpha_j K, alpha_{j+1},
//! ..., alpha_{n+1})` satisfies `D S D = eps S`, so `R = P^T S P` solves the
//! congruence equation for any coefficients. Choosing the coefficients so
//! that the quadratic form vanishes on the initial point, and then mixing
//! the real and imaginary parts of `R` into an invertible real matrix,
//! yields a non-degenerate invariant quadric containing the whole orbit.
//! When fewer than two of the point's quadratic coefficients are nonzero the
//! construction degenerates, and the invariant affine variety spanned by the
//! eigenvectors supporting the point takes over.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::congruence::SymmetricSolutionSpace;
use crate::error::{Error, Result};
use crate::geometry::{AffineVariety, Quadric, QuadricJson, VarietyJson};
use crate::homogeneous::{lift, SystemMatrix};
use crate::spectral::{decompose, ordered_diagonalization, Epsilon, OrderedDiagonalization};
use crate::tolerances::Tolerances;

type CMatrix = DMatrix<Complex<f64>>;
type CVector = DVector<Complex<f64>>;

/// Coordinates of a lifted point in the ordered eigenbasis, and the
/// per-block quadratic coefficients they induce.
#[derive(Debug, Clone)]
pub struct EigenCoordinates {
    /// `P l(x0)`, ordered as `(a_1, b_1, ..., a_j, b_j, a_{j+1}, ...)`.
    pub coords: CVector,
    /// `c_t = 2 a_t b_t` for pair blocks, `c_u = a_u^2` for singletons.
    pub c: Vec<Complex<f64>>,
    /// Indices of `c` above the relative zero threshold.
    pub nonzero: Vec<usize>,
    /// Number of pair blocks (the first `j` entries of `c`).
    pub j: usize,
}

/// Computes the eigen-coordinates of `l(x0)` for an ordered diagonalization.
pub fn eigencoordinates(
    od: &OrderedDiagonalization,
    x0: &DVector<f64>,
    tol: &Tolerances,
) -> EigenCoordinates {
    let l: CVector = lift(x0).map(|v| Complex::new(v, 0.0));
    let coords = &od.p * l;
    let blocks = od.j + od.r + od.s;
    let mut c = Vec::with_capacity(blocks);
    for t in 0..od.j {
        c.push(coords[2 * t] * coords[2 * t + 1] * Complex::new(2.0, 0.0));
    }
    for u in 0..(od.r + od.s) {
        let a = coords[2 * od.j + u];
        c.push(a * a);
    }
    let scale = coords.norm_squared();
    let nonzero = c
        .iter()
        .enumerate()
        .filter(|(_, ci)| ci.norm() > tol.c_zero * scale)
        .map(|(i, _)| i)
        .collect();
    EigenCoordinates {
        coords,
        c,
        nonzero,
        j: od.j,
    }
}

/// Chooses nonzero block coefficients with `sum alpha_i c_i = 0`.
///
/// The largest `|c_i|` takes the solved coefficient for numerical headroom;
/// everything else starts at 1. If the solved coefficient degenerates, the
/// second-largest entry is perturbed through a small deterministic ladder
/// and then seeded random draws, keeping the best candidate seen.
pub fn choose_alphas(ec: &EigenCoordinates, seed: u64) -> Result<Vec<Complex<f64>>> {
    let blocks = ec.c.len();
    if ec.nonzero.len() < 2 {
        return Err(Error::InsufficientSupport {
            nonzero: ec.nonzero.len(),
        });
    }
    let i1 = *ec
        .nonzero
        .iter()
        .max_by(|&&a, &&b| ec.c[a].norm().total_cmp(&ec.c[b].norm()))
        .unwrap();
    let i2 = *ec
        .nonzero
        .iter()
        .filter(|&&i| i != i1)
        .max_by(|&&a, &&b| ec.c[a].norm().total_cmp(&ec.c[b].norm()))
        .unwrap();

    let solve = |alphas: &mut Vec<Complex<f64>>| -> Complex<f64> {
        let sum: Complex<f64> = (0..blocks)
            .filter(|&i| i != i1)
            .map(|i| alphas[i] * ec.c[i])
            .sum();
        let a1 = -sum / ec.c[i1];
        alphas[i1] = a1;
        a1
    };

    let headroom = 1e-8;
    let one = Complex::new(1.0, 0.0);
    let mut best: Option<(Vec<Complex<f64>>, f64)> = None;
    let attempt = |alphas: Vec<Complex<f64>>,
                   best: &mut Option<(Vec<Complex<f64>>, f64)>|
     -> Option<Vec<Complex<f64>>> {
        let mut alphas = alphas;
        let a1 = solve(&mut alphas);
        let quality = a1.norm();
        if best.as_ref().is_none_or(|(_, q)| quality > *q) {
            *best = Some((alphas.clone(), quality));
        }
        (quality > headroom).then_some(alphas)
    };

    if let Some(a) = attempt(vec![one; blocks], &mut best) {
        return Ok(a);
    }
    for t in 2..=9 {
        let mut alphas = vec![one; blocks];
        alphas[i2] = Complex::new(t as f64, 0.0);
        if let Some(a) = attempt(alphas, &mut best) {
            return Ok(a);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let alphas: Vec<Complex<f64>> = (0..blocks)
            .map(|_| {
                let r = rng.gen_range(0.5..1.5);
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex::from_polar(r, phi)
            })
            .collect();
        if let Some(a) = attempt(alphas, &mut best) {
            return Ok(a);
        }
    }
    match best {
        Some((alphas, quality)) if quality > 0.0 => Ok(alphas),
        _ => Err(Error::InsufficientSupport {
            nonzero: ec.nonzero.len(),
        }),
    }
}

/// An invariant quadric produced by the eigenbasis construction, with its
/// diagnostics.
#[derive(Debug, Clone)]
pub struct ConstructedQuadric {
    pub quadric: Quadric,
    /// Mixing coefficient in `M = Re(R) + mu0 Im(R)`.
    pub mu0: f64,
    /// Relative equation residual `||A^T M A - eps M||_F / ||M||_F`.
    pub eq_residual: f64,
    /// Relative value of the quadratic form at the initial point.
    pub point_residual: f64,
}

fn assemble_block_form(od: &OrderedDiagonalization, alphas: &[Complex<f64>]) -> CMatrix {
    let order = od.d.len();
    let mut s = CMatrix::zeros(order, order);
    for t in 0..od.j {
        s[(2 * t, 2 * t + 1)] = alphas[t];
        s[(2 * t + 1, 2 * t)] = alphas[t];
    }
    for u in 0..(od.r + od.s) {
        s[(2 * od.j + u, 2 * od.j + u)] = alphas[od.j + u];
    }
    s
}

/// Builds `R = P^T S P`, splits it into real and imaginary parts, and scans
/// mixing coefficients until the real combination is invertible.
pub fn build_invariant_form(
    s: &SystemMatrix,
    od: &OrderedDiagonalization,
    x0: &DVector<f64>,
    alphas: &[Complex<f64>],
    seed: u64,
) -> Result<ConstructedQuadric> {
    let tol = s.tolerances();
    let sb = assemble_block_form(od, alphas);
    let r = od.p.transpose() * sb * &od.p;
    let m1: DMatrix<f64> = r.map(|z| z.re);
    let m2: DMatrix<f64> = r.map(|z| z.im);

    let grid = [0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 5.0, -5.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d75_3030);
    let draws: Vec<f64> = (0..32).map(|_| rng.gen_range(-10.0..10.0)).collect();
    let strong = 1e-6_f64.max(100.0 * tol.sing);
    let budget = grid.len() + draws.len();

    let mut best: Option<(f64, f64)> = None; // (mu0, rel sigma_min)
    for mu0 in grid.into_iter().chain(draws) {
        let m = &m1 + &m2 * mu0;
        let norm = m.norm();
        if norm == 0.0 {
            continue;
        }
        let svd = match m.clone().try_svd(false, false, f64::EPSILON, 10_000) {
            Some(svd) => svd,
            None => continue,
        };
        let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let rel = if sv[0] == 0.0 {
            0.0
        } else {
            sv[sv.len() - 1] / sv[0]
        };
        if best.is_none_or(|(_, b)| rel > b) {
            best = Some((mu0, rel));
        }
        if rel > strong {
            break;
        }
    }
    let (mu0, rel) = best.ok_or(Error::NoInvertibleCombination { budget })?;
    if rel <= tol.sing {
        return Err(Error::NoInvertibleCombination { budget });
    }
    let m = &m1 + &m2 * mu0;
    let quadric = Quadric::new(m, tol)?.normalized();
    let a = s.matrix();
    let mm = quadric.matrix();
    let eq_residual = (a.transpose() * mm * a - mm * od.eps.value()).norm() / mm.norm();
    let point_residual = quadric.residual(x0);
    Ok(ConstructedQuadric {
        quadric,
        mu0,
        eq_residual,
        point_residual,
    })
}

/// Result of [`quadric_through_point`]: either a non-degenerate invariant
/// quadric through the point, or the invariant affine variety that contains
/// its orbit when the quadric construction does not apply.
#[derive(Debug, Clone)]
pub enum InvariantSet {
    Quadric(ConstructedQuadric),
    Variety(AffineVariety),
}

/// Serialized result: `{"kind": "quadric", ...}` or `{"kind": "variety", ...}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvariantSetJson {
    Quadric {
        #[serde(flatten)]
        quadric: QuadricJson,
        mu: f64,
        mu0: f64,
        eq_residual: f64,
        point_residual: f64,
    },
    Variety {
        #[serde(flatten)]
        variety: VarietyJson,
    },
}

impl InvariantSet {
    pub fn to_json(&self, eps: Epsilon) -> InvariantSetJson {
        match self {
            InvariantSet::Quadric(cq) => InvariantSetJson::Quadric {
                quadric: QuadricJson::from_quadric(&cq.quadric),
                mu: eps.value(),
                mu0: cq.mu0,
                eq_residual: cq.eq_residual,
                point_residual: cq.point_residual,
            },
            InvariantSet::Variety(v) => InvariantSetJson::Variety {
                variety: VarietyJson::from_variety(v),
            },
        }
    }
}

/// The invariant affine variety spanned by the eigenvectors that actually
/// carry the point: the projection of `span{ w_i : coord_i != 0 }`.
fn support_variety(
    od: &OrderedDiagonalization,
    ec: &EigenCoordinates,
    tol: &Tolerances,
) -> Result<AffineVariety> {
    let order = od.d.len();
    let scale = ec.coords.norm();
    let mut span: Vec<DVector<f64>> = Vec::new();
    for i in 0..order {
        if ec.coords[i].norm() > tol.coord_zero * scale {
            let col = od.w.column(i);
            span.push(DVector::from_fn(order, |r, _| col[r].re));
            span.push(DVector::from_fn(order, |r, _| col[r].im));
        }
    }
    AffineVariety::from_homogeneous_span(&span, tol)
}

/// Constructs an invariant quadric (or the fallback invariant affine
/// variety) containing the whole orbit of `x0`.
///
/// Requires a semisimple system matrix similar to `eps A^{-1}` and an
/// initial point off the principal forbidden hyperplane. The quadric path is
/// taken when at least two quadratic coefficients are nonzero; otherwise, or
/// when no invertible real combination turns up, the orbit lies on the
/// support variety and that is returned instead.
pub fn quadric_through_point(
    s: &SystemMatrix,
    x0: &DVector<f64>,
    eps: Epsilon,
    seed: u64,
) -> Result<InvariantSet> {
    if s.in_forbidden_hyperplane(x0) {
        return Err(Error::ForbiddenPoint {
            denominator: s.denominator(x0),
        });
    }
    let sd = decompose(s)?;
    if !sd.check_inverse_similarity(eps)? {
        return Err(Error::NotEpsilonSimilar {
            epsilon: eps.value(),
        });
    }
    let od = ordered_diagonalization(&sd, eps, s.matrix())?;
    let ec = eigencoordinates(&od, x0, s.tolerances());
    if ec.nonzero.len() >= 2 {
        let alphas = choose_alphas(&ec, seed)?;
        match build_invariant_form(s, &od, x0, &alphas, seed) {
            Ok(cq) => Ok(InvariantSet::Quadric(cq)),
            Err(Error::NoInvertibleCombination { .. })
                if ec
                    .coords
                    .iter()
                    .any(|z| z.norm() <= s.tolerances().coord_zero * ec.coords.norm()) =>
            {
                // Some eigen-coordinate vanishes, so the point sits on a
                // proper invariant variety; fall back to it.
                Ok(InvariantSet::Variety(support_variety(
                    &od,
                    &ec,
                    s.tolerances(),
                )?))
            }
            Err(e) => Err(e),
        }
    } else {
        Ok(InvariantSet::Variety(support_variety(
            &od,
            &ec,
            s.tolerances(),
        )?))
    }
}

/// Basis of the invariant quadrics through a point: the subspace of the
/// symmetric solution space on which the quadratic form at `l(x0)` vanishes.
///
/// This is the direct linear-algebra route (nullspace plus one linear
/// constraint); it serves as an independent cross-check of
/// [`quadric_through_point`], whose output must lie in this span.
pub fn all_quadrics_through_point(
    space: &SymmetricSolutionSpace,
    x0: &DVector<f64>,
    tol: &Tolerances,
) -> Result<Vec<Quadric>> {
    if space.dim() == 0 {
        return Ok(Vec::new());
    }
    let l = lift(x0);
    let d = space.dim();
    let values = DVector::from_iterator(
        d,
        space.basis.iter().map(|m| (l.transpose() * m * &l)[(0, 0)]),
    );
    let scale = l.norm_squared();
    if values.amax() <= tol.null * scale {
        // The constraint is vacuous at this point: every solution vanishes.
        return space
            .basis
            .iter()
            .map(|m| Quadric::new(m.clone(), tol))
            .collect();
    }
    if d == 1 {
        return Ok(Vec::new());
    }
    // Householder frame orthogonal to the value vector.
    let mut v = values.normalize();
    let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign;
    let v = v.normalize();
    let reflect = DMatrix::identity(d, d) - &v * v.transpose() * 2.0;
    let mut out = Vec::with_capacity(d - 1);
    for col in 1..d {
        let coeffs: Vec<f64> = (0..d).map(|k| reflect[(k, col)]).collect();
        out.push(Quadric::new(space.combine(&coeffs), tol)?);
    }
    Ok(out)
}
