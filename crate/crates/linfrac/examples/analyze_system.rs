//! Full analysis of a rational system: spectrum, similarity to eps*A^{-1},
//! solution-space dimensions and an invertible representative.
//!
//! Run with: cargo run --example analyze_system

use linfrac::homogeneous::SystemMatrix;
use linfrac::report::{analyze, AnalyzeOptions, InvertibleReport};
use linfrac::Tolerances;
use nalgebra::{dmatrix, DMatrix};

fn describe(title: &str, a: DMatrix<f64>) -> linfrac::Result<()> {
    println!("== {title} ==");
    let system = SystemMatrix::new(a, Tolerances::default())?;
    let report = analyze(&system, &AnalyzeOptions::default())?;

    println!(
        "order {} system, |det| = {:.3}",
        report.order,
        report.input_det.abs()
    );
    println!("semisimple: {}", report.semisimple);
    println!("spectrum:");
    for e in &report.spectrum {
        println!(
            "  {:+.6} {:+.6}i  (algebraic {}, geometric {})",
            e.re, e.im, e.algebraic, e.geometric
        );
    }
    match report.chosen_epsilon {
        Some(eps) => println!("similar to {eps:+} * A^(-1)"),
        None => println!("not similar to +A^(-1) or -A^(-1); no invariant quadrics"),
    }
    for er in &report.epsilon_reports {
        println!(
            "eps = {:+}: solution space dim {} (predicted {:?}), residual {:.2e}",
            er.epsilon, er.computed_dim, er.predicted_dim, er.max_residual
        );
        match &er.invertible {
            InvertibleReport::Found {
                sigma_min_rel,
                signature,
                ..
            } => println!(
                "  invertible member found: sigma_min/||M|| = {sigma_min_rel:.2e}, signature {signature:?}"
            ),
            InvertibleReport::CertifiedSingular { .. } => {
                println!("  every symmetric solution is singular (common kernel)")
            }
            InvertibleReport::NoneFound { samples, .. } => {
                println!("  no invertible member found in {samples} random samples")
            }
            InvertibleReport::EmptySpace => println!("  no symmetric solutions"),
        }
    }
    println!("fixed points:");
    for fp in &report.fixed_points {
        println!("  {:?} (eigenvalue {:+.6})", fp.point, fp.lambda);
    }
    println!();
    Ok(())
}

fn main() -> linfrac::Result<()> {
    // F(x, y) = ((x - y + 1) / (x + 1), (y + 1) / (x + 1)): the matrix holds
    // the numerator rows and the shared denominator in its last row. Its
    // spectrum is not closed under reciprocals, so no invariant quadric
    // exists.
    describe(
        "generic fractional map",
        dmatrix![
            1.0, -1.0, 1.0;
            0.0, 1.0, 1.0;
            1.0, 0.0, 1.0
        ],
    )?;

    // F(x, y) = (x / (x + y - 1), y / (x + y - 1)): an involution (A^2 = I),
    // hence similar to its inverse, with a two-dimensional space of
    // invariant quadrics.
    describe(
        "involution with invariant quadrics",
        dmatrix![
            1.0, 0.0, 0.0;
            0.0, 1.0, 0.0;
            1.0, 1.0, -1.0
        ],
    )
}
