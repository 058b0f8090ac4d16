//! Ground-truth instance generation for tests and verification suites.
//!
//! An instance spec lists spectral building blocks (reciprocal real pairs,
//! unit-circle rotation pairs, off-circle complex quadruples, and roots of
//! epsilon); the generator realizes them as a real block-diagonal core,
//! conjugates by a seeded random matrix of bounded condition number, and
//! reports the expected `sigma_epsilon` and solution-space dimension
//! computed from the spec itself, independently of any numerics downstream.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homogeneous::SystemMatrix;
use crate::spectral::Epsilon;
use crate::tolerances::Tolerances;

/// Minimal separation of distinct eigenvalues, and distance kept from the
/// unit circle and from zero. Keeps generated instances away from every
/// tolerance band used by the analysis.
const MARGIN: f64 = 1e-3;

/// One spectral building block.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Block {
    /// Eigenvalues `lambda` and `eps / lambda`, both real.
    RealPair { lambda: f64 },
    /// Rotation by `theta`: eigenvalues `exp(+-i theta)` on the unit circle.
    /// Only meaningful for `eps = +1` (closure under `-1/lambda` would leave
    /// the pair).
    UnitComplexPair { theta: f64 },
    /// The four eigenvalues `lambda, conj(lambda), eps/lambda,
    /// eps/conj(lambda)` for a complex `lambda` off the unit circle.
    ComplexQuadruple { re: f64, im: f64 },
    /// `count` copies of `sqrt(eps)`.
    PlusRoot { count: usize },
    /// `count` copies of `-sqrt(eps)`.
    MinusRoot { count: usize },
}

impl Block {
    fn size(&self, eps: Epsilon) -> usize {
        match self {
            Block::RealPair { .. } | Block::UnitComplexPair { .. } => 2,
            Block::ComplexQuadruple { .. } => 4,
            Block::PlusRoot { count } | Block::MinusRoot { count } => {
                let _ = eps;
                *count
            }
        }
    }
}

/// Specification of a generated instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub epsilon: i8,
    pub blocks: Vec<Block>,
    #[serde(default = "default_cond_cap")]
    pub cond_cap: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_cond_cap() -> f64 {
    1e3
}

impl InstanceSpec {
    pub fn eps(&self) -> Result<Epsilon> {
        match self.epsilon {
            1 => Ok(Epsilon::Plus),
            -1 => Ok(Epsilon::Minus),
            other => Err(Error::InvalidSpec(format!(
                "epsilon must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// A generated instance with its spec-derived ground truth.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    /// The conjugated matrix of order `n + 1`, with `|det| = 1`.
    pub a: DMatrix<f64>,
    pub eps: Epsilon,
    /// Expected `sigma_epsilon` as `(value, multiplicity)` pairs.
    pub expected_sigma: Vec<(Complex<f64>, usize)>,
    /// Expected multiplicities of `sqrt(eps)` and `-sqrt(eps)`.
    pub expected_r: usize,
    pub expected_s: usize,
    /// Expected dimension of the symmetric solution space.
    pub expected_dim: usize,
}

impl GeneratedInstance {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Wraps the matrix as a system when the state dimension allows it
    /// (`order >= 3`).
    pub fn system(&self, tol: Tolerances) -> Result<SystemMatrix> {
        SystemMatrix::new(self.a.clone(), tol)
    }
}

fn rotation(theta: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

/// Real 2x2 representation of multiplication by a complex scalar.
fn complex_scalar_block(z: Complex<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[z.re, -z.im, z.im, z.re])
}

fn validate(spec: &InstanceSpec) -> Result<Epsilon> {
    let eps = spec.eps()?;
    let total: usize = spec.blocks.iter().map(|b| b.size(eps)).sum();
    if total != spec.n + 1 {
        return Err(Error::InvalidSpec(format!(
            "block sizes sum to {total}, expected n + 1 = {}",
            spec.n + 1
        )));
    }
    if spec.cond_cap < 1.0 {
        return Err(Error::InvalidSpec("cond_cap must be at least 1".into()));
    }
    let mut plus = 0usize;
    let mut minus = 0usize;
    for b in &spec.blocks {
        match *b {
            Block::RealPair { lambda } => {
                if lambda.abs() < MARGIN {
                    return Err(Error::InvalidSpec("real pair too close to zero".into()));
                }
                if (lambda.abs() - 1.0).abs() < MARGIN {
                    return Err(Error::InvalidSpec(
                        "real pair too close to the unit circle".into(),
                    ));
                }
            }
            Block::UnitComplexPair { theta } => {
                if eps == Epsilon::Minus {
                    return Err(Error::InvalidSpec(
                        "a single unit rotation pair is not closed under lambda -> -1/lambda; \
                         use plus/minus roots (theta = pi/2) or a complex quadruple"
                            .into(),
                    ));
                }
                if !(MARGIN..=std::f64::consts::PI - MARGIN).contains(&theta) {
                    return Err(Error::InvalidSpec(
                        "rotation angle must stay away from 0 and pi".into(),
                    ));
                }
            }
            Block::ComplexQuadruple { re, im } => {
                let z = Complex::new(re, im);
                if im.abs() < MARGIN * (1.0 + z.norm()) {
                    return Err(Error::InvalidSpec(
                        "complex quadruple must be genuinely complex".into(),
                    ));
                }
                if (z.norm() - 1.0).abs() < MARGIN || z.norm() < MARGIN {
                    return Err(Error::InvalidSpec(
                        "complex quadruple must stay off the unit circle and away from zero".into(),
                    ));
                }
            }
            Block::PlusRoot { count } => plus += count,
            Block::MinusRoot { count } => minus += count,
        }
    }
    if eps == Epsilon::Minus && plus != minus {
        return Err(Error::InvalidSpec(format!(
            "for epsilon = -1 the roots +-i come in conjugate pairs: \
             plus count {plus} must equal minus count {minus}"
        )));
    }
    Ok(eps)
}

/// The full expected spectrum (value, multiplicity), merged exactly.
fn expected_spectrum(spec: &InstanceSpec, eps: Epsilon) -> Vec<(Complex<f64>, usize)> {
    let mut values: Vec<Complex<f64>> = Vec::new();
    for b in &spec.blocks {
        match *b {
            Block::RealPair { lambda } => {
                values.push(Complex::new(lambda, 0.0));
                values.push(Complex::new(eps.value() / lambda, 0.0));
            }
            Block::UnitComplexPair { theta } => {
                values.push(Complex::from_polar(1.0, theta));
                values.push(Complex::from_polar(1.0, -theta));
            }
            Block::ComplexQuadruple { re, im } => {
                let z = Complex::new(re, im);
                values.push(z);
                values.push(z.conj());
                values.push(eps.partner(z));
                values.push(eps.partner(z).conj());
            }
            Block::PlusRoot { count } => {
                for _ in 0..count {
                    values.push(eps.sqrt());
                }
            }
            Block::MinusRoot { count } => {
                for _ in 0..count {
                    values.push(-eps.sqrt());
                }
            }
        }
    }
    let mut merged: Vec<(Complex<f64>, usize)> = Vec::new();
    'outer: for v in values {
        for (w, m) in merged.iter_mut() {
            if (v - *w).norm() <= 1e-12 * (1.0 + w.norm()) {
                *m += 1;
                continue 'outer;
            }
        }
        merged.push((v, 1));
    }
    merged
}

/// Condition number of a real square matrix.
fn cond(m: &DMatrix<f64>) -> f64 {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv[sv.len() - 1] == 0.0 {
        f64::INFINITY
    } else {
        sv[0] / sv[sv.len() - 1]
    }
}

/// Realizes the spec: block-diagonal core, seeded conjugation with condition
/// number at most `cond_cap` (enforced by resampling), determinant already
/// of modulus one by the pairing structure.
pub fn generate(spec: &InstanceSpec) -> Result<GeneratedInstance> {
    let eps = validate(spec)?;
    let order = spec.n + 1;
    let mut core = DMatrix::zeros(order, order);
    let mut at = 0usize;
    let mut place = |block: DMatrix<f64>, at: &mut usize| {
        let k = block.nrows();
        core.view_mut((*at, *at), (k, k)).copy_from(&block);
        *at += k;
    };
    let mut minus_roots_pending = 0usize;
    for b in &spec.blocks {
        match *b {
            Block::RealPair { lambda } => place(
                DMatrix::from_partial_diagonal(2, 2, &[lambda, eps.value() / lambda]),
                &mut at,
            ),
            Block::UnitComplexPair { theta } => place(rotation(theta), &mut at),
            Block::ComplexQuadruple { re, im } => {
                let z = Complex::new(re, im);
                let mut block = DMatrix::zeros(4, 4);
                block
                    .view_mut((0, 0), (2, 2))
                    .copy_from(&complex_scalar_block(z));
                block
                    .view_mut((2, 2), (2, 2))
                    .copy_from(&complex_scalar_block(eps.partner(z)));
                place(block, &mut at);
            }
            Block::PlusRoot { count } => match eps {
                Epsilon::Plus => {
                    place(DMatrix::identity(count, count), &mut at);
                }
                Epsilon::Minus => {
                    // Realized jointly with the matching minus roots as
                    // rotation-by-pi/2 blocks (eigenvalues +-i).
                    for _ in 0..count {
                        place(rotation(std::f64::consts::FRAC_PI_2), &mut at);
                    }
                    minus_roots_pending += count;
                }
            },
            Block::MinusRoot { count } => match eps {
                Epsilon::Plus => {
                    place(-DMatrix::identity(count, count), &mut at);
                }
                Epsilon::Minus => {
                    let consumed = count.min(minus_roots_pending);
                    minus_roots_pending -= consumed;
                    for _ in 0..(count - consumed) {
                        place(rotation(std::f64::consts::FRAC_PI_2), &mut at);
                        minus_roots_pending += 1;
                    }
                    minus_roots_pending -= count - consumed;
                }
            },
        }
    }
    debug_assert_eq!(at, order);

    let a = if spec.cond_cap <= 1.0 + 1e-9 {
        core
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut transform = None;
        for _ in 0..200 {
            let t = DMatrix::from_fn(order, order, |_, _| {
                // Box-Muller normal draw.
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (-2.0 * u1.ln()).sqrt() * u2.cos()
            });
            if cond(&t) <= spec.cond_cap {
                transform = Some(t);
                break;
            }
        }
        let t = transform.ok_or(Error::InvalidSpec(format!(
            "could not sample a conjugation with condition number <= {}",
            spec.cond_cap
        )))?;
        let t_inv = t
            .clone()
            .try_inverse()
            .ok_or(Error::ConvergenceFailure("inversion of conjugation"))?;
        &t * core * t_inv
    };

    // Ground truth from the spec alone.
    let spectrum = expected_spectrum(spec, eps);
    let sqrt_eps = eps.sqrt();
    let mut expected_r = 0;
    let mut expected_s = 0;
    let mut expected_sigma: Vec<(Complex<f64>, usize)> = Vec::new();
    for &(v, m) in &spectrum {
        if (v - sqrt_eps).norm() <= 1e-9 {
            expected_r = m;
        } else if (v + sqrt_eps).norm() <= 1e-9 {
            expected_s = m;
        } else if v.norm() < 1.0 - 1e-9 {
            expected_sigma.push((v, m));
        } else if (v.norm() - 1.0).abs() <= 1e-9 {
            let h = match eps {
                Epsilon::Plus => v.im,
                Epsilon::Minus => v.re,
            };
            if h > 0.0 {
                expected_sigma.push((v, m));
            }
        }
    }
    let expected_dim =
        (expected_r * expected_r + expected_r + expected_s * expected_s + expected_s) / 2
            + expected_sigma.iter().map(|&(_, m)| m * m).sum::<usize>();

    Ok(GeneratedInstance {
        a,
        eps,
        expected_sigma,
        expected_r,
        expected_s,
        expected_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::solve_congruence_matrix;
    use crate::spectral::decompose_matrix;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_conjugation_real_pair() {
        let spec = InstanceSpec {
            n: 1,
            epsilon: 1,
            blocks: vec![Block::RealPair { lambda: 2.0 }],
            cond_cap: 1.0,
            seed: 0,
        };
        let inst = generate(&spec).unwrap();
        assert_eq!(inst.a, DMatrix::from_partial_diagonal(2, 2, &[2.0, 0.5]));
        assert_eq!(inst.expected_dim, 1);
    }

    #[test]
    fn spec_example_real_pair_with_roots() {
        let spec = InstanceSpec {
            n: 3,
            epsilon: 1,
            blocks: vec![
                Block::RealPair { lambda: 2.0 },
                Block::PlusRoot { count: 1 },
                Block::MinusRoot { count: 1 },
            ],
            cond_cap: 100.0,
            seed: 42,
        };
        let inst = generate(&spec).unwrap();
        assert_eq!(inst.order(), 4);
        assert_eq!(inst.expected_dim, 3);
        assert_eq!((inst.expected_r, inst.expected_s), (1, 1));
        assert!((inst.a.determinant().abs() - 1.0).abs() < 1e-10);
        // Numerical routes agree.
        let sd = decompose_matrix(&inst.a, &tol()).unwrap();
        assert!(sd.is_semisimple());
        assert!(sd.check_inverse_similarity(Epsilon::Plus).unwrap());
        let space = solve_congruence_matrix(&inst.a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 3);
    }

    #[test]
    fn unit_rotation_pair_order_two() {
        let spec = InstanceSpec {
            n: 1,
            epsilon: 1,
            blocks: vec![Block::UnitComplexPair {
                theta: std::f64::consts::FRAC_PI_3,
            }],
            cond_cap: 50.0,
            seed: 7,
        };
        let inst = generate(&spec).unwrap();
        assert_eq!(inst.expected_dim, 1);
        let space = solve_congruence_matrix(&inst.a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 1);
    }

    #[test]
    fn minus_epsilon_instance() {
        let spec = InstanceSpec {
            n: 3,
            epsilon: -1,
            blocks: vec![
                Block::RealPair { lambda: 2.0 },
                Block::PlusRoot { count: 1 },
                Block::MinusRoot { count: 1 },
            ],
            cond_cap: 100.0,
            seed: 3,
        };
        let inst = generate(&spec).unwrap();
        // Spectrum {2, -1/2, i, -i}; sigma = {-1/2}; r = s = 1; dim = 2 + 1 = 3.
        assert_eq!(inst.expected_dim, 3);
        let sd = decompose_matrix(&inst.a, &tol()).unwrap();
        assert!(sd.check_inverse_similarity(Epsilon::Minus).unwrap());
        let space = solve_congruence_matrix(&inst.a, -1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 3);
    }

    #[test]
    fn quadruple_contributes_two_sigma_values() {
        let spec = InstanceSpec {
            n: 3,
            epsilon: 1,
            blocks: vec![Block::ComplexQuadruple { re: 0.3, im: 0.4 }],
            cond_cap: 100.0,
            seed: 9,
        };
        let inst = generate(&spec).unwrap();
        assert_eq!(inst.expected_sigma.len(), 2);
        assert_eq!(inst.expected_dim, 2);
        let space = solve_congruence_matrix(&inst.a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 2);
    }

    #[test]
    fn repeated_blocks_aggregate_multiplicities() {
        let spec = InstanceSpec {
            n: 3,
            epsilon: 1,
            blocks: vec![
                Block::RealPair { lambda: 2.0 },
                Block::RealPair { lambda: 2.0 },
            ],
            cond_cap: 100.0,
            seed: 5,
        };
        let inst = generate(&spec).unwrap();
        // m(1/2) = 2 in sigma: dim = 4.
        assert_eq!(inst.expected_dim, 4);
        let space = solve_congruence_matrix(&inst.a, 1.0, &tol()).unwrap();
        assert_eq!(space.dim(), 4);
    }

    #[test]
    fn size_mismatch_rejected() {
        let spec = InstanceSpec {
            n: 3,
            epsilon: 1,
            blocks: vec![Block::RealPair { lambda: 2.0 }],
            cond_cap: 10.0,
            seed: 0,
        };
        assert!(matches!(generate(&spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn minus_epsilon_rejects_unit_pairs_and_unbalanced_roots() {
        let spec = InstanceSpec {
            n: 1,
            epsilon: -1,
            blocks: vec![Block::UnitComplexPair { theta: 1.0 }],
            cond_cap: 10.0,
            seed: 0,
        };
        assert!(matches!(generate(&spec), Err(Error::InvalidSpec(_))));
        let spec = InstanceSpec {
            n: 2,
            epsilon: -1,
            blocks: vec![Block::PlusRoot { count: 2 }, Block::MinusRoot { count: 1 }],
            cond_cap: 10.0,
            seed: 0,
        };
        assert!(matches!(generate(&spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{
            "n": 3,
            "epsilon": 1,
            "blocks": [
                {"kind": "real_pair", "lambda": 2.0},
                {"kind": "plus_root", "count": 1},
                {"kind": "minus_root", "count": 1}
            ],
            "seed": 42
        }"#;
        let spec: InstanceSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.cond_cap, 1e3);
        assert_eq!(spec.blocks.len(), 3);
        let inst = generate(&spec).unwrap();
        assert_eq!(inst.order(), 4);
    }
}
