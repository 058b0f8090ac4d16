//! Construct a non-degenerate invariant quadric through a chosen starting
//! point, then watch the whole orbit stay on it.
//!
//! Run with: cargo run --example quadric_through_point

use linfrac::construct::{quadric_through_point, InvariantSet};
use linfrac::dynamics::{iterate, residuals_along_orbit};
use linfrac::homogeneous::SystemMatrix;
use linfrac::spectral::Epsilon;
use linfrac::Tolerances;
use nalgebra::{dvector, DMatrix};

fn main() -> linfrac::Result<()> {
    // F(x, y) = (4x, 2y): eigenvalues 2, 1, 1/2 pair up under
    // lambda -> 1/lambda, so invariant quadrics exist.
    let system = SystemMatrix::new(
        DMatrix::from_diagonal(&dvector![2.0, 1.0, 0.5]),
        Tolerances::default(),
    )?
    .normalize();

    let x0 = dvector![1.0, 1.0];
    match quadric_through_point(&system, &x0, Epsilon::Plus, 0)? {
        InvariantSet::Quadric(cq) => {
            println!("invariant quadric through (1, 1):");
            let m = cq.quadric.matrix();
            for i in 0..3 {
                println!("  [{:+.4} {:+.4} {:+.4}]", m[(i, 0)], m[(i, 1)], m[(i, 2)]);
            }
            println!("signature {:?}", cq.quadric.signature());
            println!("equation residual {:.2e}", cq.eq_residual);

            let orbit = iterate(&system, &x0, 15);
            let res = residuals_along_orbit(&orbit, &cq.quadric);
            println!("orbit points (diverging) and their quadric residuals:");
            for (k, p) in orbit.points.iter().enumerate().take(6) {
                println!(
                    "  step {k}: ({:>8.1}, {:>6.1})   residual {:.2e}",
                    p[0], p[1], res.per_step[k]
                );
            }
            println!(
                "max residual along {} steps: {:.2e}",
                orbit.points.len(),
                res.max
            );
        }
        InvariantSet::Variety(_) => unreachable!("(1,1) has full support"),
    }

    // A point with a vanishing eigen-coordinate falls back to the invariant
    // affine variety that carries it (here: the x-axis).
    match quadric_through_point(&system, &dvector![1.0, 0.0], Epsilon::Plus, 0)? {
        InvariantSet::Variety(v) => {
            println!("\nfallback for (1, 0): affine variety");
            println!("  base {:?}", v.base().as_slice());
            println!(
                "  directions {:?}",
                v.directions()
                    .iter()
                    .map(|d| d.as_slice())
                    .collect::<Vec<_>>()
            );
        }
        InvariantSet::Quadric(_) => unreachable!("(1,0) has a single nonzero coefficient"),
    }
    Ok(())
}
