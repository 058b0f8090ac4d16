//! Fixed points and invariant affine varieties from the eigenstructure.
//!
//! Run with: cargo run --example invariant_varieties

use linfrac::geometry::{fixed_points, invariant_affine_varieties};
use linfrac::homogeneous::SystemMatrix;
use linfrac::spectral::decompose;
use linfrac::Tolerances;
use nalgebra::{dmatrix, dvector};

fn main() -> linfrac::Result<()> {
    // Rotation block plus a contracting direction: one real fixed point, a
    // rotation-invariant plane section and a line.
    let a = dmatrix![
        0.6, -0.8, 0.0, 0.0;
        0.8, 0.6, 0.0, 0.0;
        0.0, 0.0, 2.0, 0.0;
        0.0, 0.0, 0.0, 0.5
    ];
    let system = SystemMatrix::new(a, Tolerances::default())?.normalize();
    let sd = decompose(&system)?;
    println!("semisimple: {}", sd.is_semisimple());
    println!("eigenvalues:");
    for (v, m) in sd.eigenvalues() {
        println!("  {:+.4} {:+.4}i (multiplicity {m})", v.re, v.im);
    }

    println!("\nfixed points (projections of real eigenvectors off U_0):");
    for fp in fixed_points(&system, &sd) {
        println!(
            "  ({:+.4}, {:+.4}, {:+.4})  from eigenvalue {:+.4}",
            fp.point[0], fp.point[1], fp.point[2], fp.lambda
        );
        let image = system.evaluate(&fp.point)?;
        println!("    |F(x) - x| = {:.2e}", (image - &fp.point).norm());
    }

    println!("\ninvariant affine varieties (from invariant subspaces):");
    for v in invariant_affine_varieties(&system, &sd, 3)? {
        println!(
            "  dim {}: base ({:+.3}, {:+.3}, {:+.3})",
            v.dim(),
            v.base()[0],
            v.base()[1],
            v.base()[2]
        );
        // Spot-check forward invariance at a sample point.
        let mut rng = rand::thread_rng();
        let z = v.sample(&mut rng, 1.0);
        if !system.in_forbidden_hyperplane(&z) {
            let fz = system.evaluate(&z)?;
            println!(
                "    sample maps within {:.2e} of the variety",
                v.distance(&fz)
            );
        }
    }

    // A second system where the invariant line of a 2-periodic orbit shows
    // up directly: connect x0 and F(x0).
    let swap = SystemMatrix::new(
        dmatrix![0.0, 0.0, 1.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0],
        Tolerances::default(),
    )?;
    let x0 = dvector![2.0, 3.0];
    let x1 = swap.evaluate(&x0)?;
    println!(
        "\n2-periodic pair: ({}, {}) <-> ({}, {})",
        x0[0], x0[1], x1[0], x1[1]
    );
    Ok(())
}
