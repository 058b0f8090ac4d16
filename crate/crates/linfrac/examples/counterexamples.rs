//! Two matrices showing where invertible symmetric solutions fail to exist:
//! a unipotent 3x3 whose symmetric solutions share a kernel, and a 4x4 with
//! invertible non-symmetric solutions to A^T Y A = -Y but none symmetric.
//!
//! Run with: cargo run --example counterexamples

use linfrac::congruence::{
    general_solution_space, invertible_member, invertible_member_of, solve_congruence_matrix,
    InvertibleSearch,
};
use linfrac::spectral::decompose_matrix;
use linfrac::Tolerances;
use nalgebra::dmatrix;

fn main() -> linfrac::Result<()> {
    let tol = Tolerances::default();

    let a3 = dmatrix![1.0, 0.0, 0.0; 1.0, 1.0, 0.0; 0.0, 0.0, 1.0];
    let sd = decompose_matrix(&a3, &tol)?;
    println!("unipotent 3x3: semisimple = {}", sd.is_semisimple());
    let space = solve_congruence_matrix(&a3, 1.0, &tol)?;
    println!(
        "symmetric solutions of A^T M A = M: dimension {}",
        space.dim()
    );
    match invertible_member(&space, 64, 1, &tol)? {
        InvertibleSearch::CertifiedSingular { kernel } => {
            println!(
                "every member is singular; common kernel ({:+.3}, {:+.3}, {:+.3})",
                kernel[0], kernel[1], kernel[2]
            );
        }
        other => println!("{other:?}"),
    }

    let a4 = dmatrix![
        0.0, 1.0, 0.0, 0.0;
        -1.0, 0.0, 0.0, 0.0;
        1.0, 0.0, 0.0, 1.0;
        0.0, 1.0, -1.0, 0.0
    ];
    let sd = decompose_matrix(&a4, &tol)?;
    println!(
        "\n4x4 with spectrum {{i, i, -i, -i}}: semisimple = {}",
        sd.is_semisimple()
    );
    let general = general_solution_space(&a4, -1.0, &tol)?;
    println!(
        "general solutions of A^T Y A = -Y: dimension {}",
        general.len()
    );
    if let InvertibleSearch::Found { sigma_min_rel, .. } =
        invertible_member_of(&general, 64, 1, &tol)?
    {
        println!("  an invertible (non-symmetric) solution exists: sigma_min/||Y|| = {sigma_min_rel:.2e}");
    }
    let sym = solve_congruence_matrix(&a4, -1.0, &tol)?;
    println!("symmetric subspace: dimension {}", sym.dim());
    match invertible_member(&sym, 64, 1, &tol)? {
        InvertibleSearch::CertifiedSingular { .. } => {
            println!("  but every symmetric solution is singular (common kernel)");
        }
        InvertibleSearch::NoneFound { det_samples } => {
            let max = det_samples.iter().copied().fold(0.0, f64::max);
            println!(
                "  no invertible symmetric member in {} samples (max |det| = {max:.2e})",
                det_samples.len()
            );
        }
        InvertibleSearch::Found { .. } => println!("  unexpected invertible symmetric member"),
    }
    Ok(())
}
