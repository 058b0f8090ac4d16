//! Full analysis report for a system: spectrum, similarity flags, solution
//! spaces for both signs, invertible members or certificates, fixed points
//! and invariant varieties. This is what the `analyze` command prints.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::congruence::{
    general_solution_space, invertible_member, invertible_member_of, predicted_dimension,
    solve_congruence, InvertibleSearch,
};
use crate::error::Result;
use crate::geometry::{fixed_points, invariant_affine_varieties, VarietyJson};
use crate::homogeneous::SystemMatrix;
use crate::spectral::{decompose, sigma_epsilon, Epsilon};

/// Options for [`analyze`].
#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    /// Restrict the congruence analysis to one sign; both are tried (in the
    /// order +1, -1) when unset.
    pub epsilon: Option<Epsilon>,
    /// Random-combination budget for the invertible-member search.
    pub budget: usize,
    pub seed: u64,
    /// Unit cap for the variety enumeration.
    pub variety_cap: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            epsilon: None,
            budget: 64,
            seed: 0,
            variety_cap: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub re: f64,
    pub im: f64,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Outcome of the invertible-member search, in serializable form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum InvertibleReport {
    Found {
        matrix: Vec<Vec<f64>>,
        sigma_min_rel: f64,
        signature: [usize; 3],
    },
    CertifiedSingular {
        kernel: Vec<f64>,
    },
    NoneFound {
        samples: usize,
        max_abs_det: f64,
    },
    EmptySpace,
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl InvertibleReport {
    fn from_search(search: &InvertibleSearch) -> Self {
        match search {
            InvertibleSearch::Found {
                matrix,
                sigma_min_rel,
                ..
            } => {
                let eig = nalgebra::SymmetricEigen::new((matrix + matrix.transpose()) * 0.5);
                let top = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
                let mut sig = [0usize; 3];
                for &lam in eig.eigenvalues.iter() {
                    if lam.abs() <= 1e-10 * top {
                        sig[2] += 1;
                    } else if lam > 0.0 {
                        sig[0] += 1;
                    } else {
                        sig[1] += 1;
                    }
                }
                InvertibleReport::Found {
                    matrix: matrix_rows(matrix),
                    sigma_min_rel: *sigma_min_rel,
                    signature: sig,
                }
            }
            InvertibleSearch::CertifiedSingular { kernel } => InvertibleReport::CertifiedSingular {
                kernel: kernel.iter().copied().collect(),
            },
            InvertibleSearch::NoneFound { det_samples } => InvertibleReport::NoneFound {
                samples: det_samples.len(),
                max_abs_det: det_samples.iter().copied().fold(0.0, f64::max),
            },
        }
    }
}

/// Congruence analysis for one sign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpsilonReport {
    pub epsilon: i8,
    /// Spectrum closed under `lambda -> epsilon/lambda` (multiset test).
    pub spectrum_closed: bool,
    /// Similarity to `epsilon A^{-1}`; only decidable for semisimple input.
    pub similar: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<SigmaEntry>>,
    pub r: usize,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted_dim: Option<usize>,
    pub parity_blocked: bool,
    pub computed_dim: usize,
    pub max_residual: f64,
    pub invertible: InvertibleReport,
    /// Dimension of the full (non-symmetric) solution space, and whether it
    /// has an invertible member; diagnostic for the symmetric-vs-general gap.
    pub general_dim: usize,
    pub general_invertible: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub point: Vec<f64>,
    pub lambda: f64,
}

/// The full analysis report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub order: usize,
    /// Determinant of the input before normalization.
    pub input_det: f64,
    /// The analysis runs on the normalized matrix with `|det| = 1`.
    pub normalized_det: f64,
    pub norm2: f64,
    pub semisimple: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond_eigenbasis: Option<f64>,
    pub eigen_residual: f64,
    pub spectrum: Vec<SpectrumEntry>,
    /// Sign order tried: +1 first, then -1; the first similar one is chosen.
    pub chosen_epsilon: Option<i8>,
    pub epsilon_reports: Vec<EpsilonReport>,
    pub fixed_points: Vec<FixedPointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_varieties: Option<Vec<VarietyJson>>,
}

/// Runs the whole pipeline on a system (normalizing it first).
pub fn analyze(s: &SystemMatrix, options: &AnalyzeOptions) -> Result<AnalysisReport> {
    let input_det = s.det();
    let s = s.normalize();
    let sd = decompose(&s)?;
    let spectrum = sd
        .clusters()
        .iter()
        .map(|c| SpectrumEntry {
            re: c.value.re,
            im: c.value.im,
            algebraic: c.algebraic,
            geometric: c.geometric,
        })
        .collect();

    let signs: Vec<Epsilon> = match options.epsilon {
        Some(eps) => vec![eps],
        None => Epsilon::BOTH.to_vec(),
    };
    let mut chosen = None;
    let mut epsilon_reports = Vec::new();
    for eps in signs {
        let spectrum_closed = sd.epsilon_flag(eps);
        let similar = sd.is_semisimple().then_some(spectrum_closed);
        if chosen.is_none() && similar == Some(true) {
            chosen = Some(eps.value() as i8);
        }
        let (sigma, r, s_count) = if similar == Some(true) {
            match sigma_epsilon(&sd, eps) {
                Ok(sig) => (
                    Some(
                        sig.members
                            .iter()
                            .map(|&(_, v, m)| SigmaEntry {
                                re: v.re,
                                im: v.im,
                                multiplicity: m,
                            })
                            .collect(),
                    ),
                    sig.r,
                    sig.s,
                ),
                Err(_) => (None, 0, 0),
            }
        } else {
            (None, 0, 0)
        };
        let (predicted_dim, parity_blocked) = if similar == Some(true) {
            match predicted_dimension(&sd, eps) {
                Ok(p) => (Some(p.dim), p.parity_blocked),
                Err(_) => (None, false),
            }
        } else {
            (None, false)
        };
        let space = solve_congruence(&s, eps.value())?;
        let invertible = if space.dim() == 0 {
            InvertibleReport::EmptySpace
        } else {
            InvertibleReport::from_search(&invertible_member(
                &space,
                options.budget,
                options.seed,
                s.tolerances(),
            )?)
        };
        let general = general_solution_space(s.matrix(), eps.value(), s.tolerances())?;
        let general_invertible = if general.is_empty() {
            None
        } else {
            Some(matches!(
                invertible_member_of(&general, options.budget, options.seed, s.tolerances())?,
                InvertibleSearch::Found { .. }
            ))
        };
        epsilon_reports.push(EpsilonReport {
            epsilon: eps.value() as i8,
            spectrum_closed,
            similar,
            sigma,
            r,
            s: s_count,
            predicted_dim,
            parity_blocked,
            computed_dim: space.dim(),
            max_residual: space.max_residual,
            invertible,
            general_dim: general.len(),
            general_invertible,
        });
    }

    let fixed = fixed_points(&s, &sd)
        .into_iter()
        .map(|f| FixedPointReport {
            point: f.point.iter().copied().collect(),
            lambda: f.lambda,
        })
        .collect();
    let invariant_varieties = if sd.is_semisimple() {
        Some(
            invariant_affine_varieties(&s, &sd, options.variety_cap)?
                .iter()
                .map(VarietyJson::from_variety)
                .collect(),
        )
    } else {
        None
    };

    Ok(AnalysisReport {
        n: s.n(),
        order: s.n() + 1,
        input_det,
        normalized_det: s.det(),
        norm2: s.norm2(),
        semisimple: sd.is_semisimple(),
        cond_eigenbasis: sd.cond_v(),
        eigen_residual: sd.residual(),
        spectrum,
        chosen_epsilon: chosen,
        epsilon_reports,
        fixed_points: fixed,
        invariant_varieties,
    })
}
