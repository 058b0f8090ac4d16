//! Solving A^T M A = eps M over symmetric matrices: nullspace basis,
//! dimension formula, and extraction of an invertible representative.
//!
//! Run with: cargo run --example congruence_space

use linfrac::congruence::{
    invertible_member, predicted_dimension, solve_congruence_matrix, InvertibleSearch,
};
use linfrac::spectral::{decompose_matrix, Epsilon};
use linfrac::Tolerances;
use nalgebra::{dvector, DMatrix};

fn main() -> linfrac::Result<()> {
    let tol = Tolerances::default();

    // Reciprocal spectrum {3, 1/3, 1, -1}.
    let a = DMatrix::from_diagonal(&dvector![3.0, 1.0 / 3.0, 1.0, -1.0]);
    let sd = decompose_matrix(&a, &tol)?;
    let predicted = predicted_dimension(&sd, Epsilon::Plus)?;
    let space = solve_congruence_matrix(&a, 1.0, &tol)?;
    println!("spectrum {{3, 1/3, 1, -1}}, eps = +1:");
    println!(
        "  dimension: formula {}, nullspace {}",
        predicted.dim,
        space.dim()
    );
    println!(
        "  max equation residual over the basis: {:.2e}",
        space.max_residual
    );
    match invertible_member(&space, 64, 0, &tol)? {
        InvertibleSearch::Found {
            matrix,
            sigma_min_rel,
            ..
        } => {
            println!("  invertible member (sigma_min/||M|| = {sigma_min_rel:.2e}):");
            for i in 0..4 {
                println!(
                    "    [{:+.3} {:+.3} {:+.3} {:+.3}]",
                    matrix[(i, 0)],
                    matrix[(i, 1)],
                    matrix[(i, 2)],
                    matrix[(i, 3)]
                );
            }
        }
        other => println!("  {other:?}"),
    }

    // eps = -1 needs even order and balances the signature.
    let b = DMatrix::from_diagonal(&dvector![2.0, -0.5]);
    let space = solve_congruence_matrix(&b, -1.0, &tol)?;
    println!(
        "\nspectrum {{2, -1/2}}, eps = -1: dimension {}",
        space.dim()
    );
    if let InvertibleSearch::Found { matrix, .. } = invertible_member(&space, 64, 0, &tol)? {
        let eig = nalgebra::SymmetricEigen::new(matrix);
        let pos = eig.eigenvalues.iter().filter(|&&x| x > 0.0).count();
        let neg = eig.eigenvalues.iter().filter(|&&x| x < 0.0).count();
        println!("  invertible member signature: ({pos}, {neg})");
    }

    // General mu beyond +-1 is allowed too.
    let c = DMatrix::from_diagonal(&dvector![2.0, 1.0]);
    let space = solve_congruence_matrix(&c, 4.0, &tol)?;
    println!("\nspectrum {{2, 1}}, mu = 4: dimension {}", space.dim());
    Ok(())
}
