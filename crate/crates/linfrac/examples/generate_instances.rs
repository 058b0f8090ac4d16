//! Generating test systems with prescribed spectral structure and known
//! ground truth, then checking the numerics against it.
//!
//! Run with: cargo run --example generate_instances

use linfrac::congruence::{predicted_dimension, solve_congruence_matrix};
use linfrac::genlab::{generate, Block, InstanceSpec};
use linfrac::spectral::{decompose_matrix, Epsilon};
use linfrac::Tolerances;

fn main() -> linfrac::Result<()> {
    let tol = Tolerances::default();

    let spec = InstanceSpec {
        n: 4,
        epsilon: 1,
        blocks: vec![
            Block::RealPair { lambda: 2.0 },
            Block::UnitComplexPair { theta: 1.1 },
            Block::PlusRoot { count: 1 },
        ],
        cond_cap: 100.0,
        seed: 42,
    };
    let inst = generate(&spec)?;
    println!(
        "generated order-{} system, |det| = {:.6}",
        inst.order(),
        inst.a.determinant().abs()
    );
    println!("expected sigma:");
    for &(v, m) in &inst.expected_sigma {
        println!("  {:+.4} {:+.4}i (multiplicity {m})", v.re, v.im);
    }
    println!(
        "expected roots: r = {}, s = {}; expected dimension {}",
        inst.expected_r, inst.expected_s, inst.expected_dim
    );

    // The numerics recover the ground truth.
    let sd = decompose_matrix(&inst.a, &tol)?;
    let predicted = predicted_dimension(&sd, Epsilon::Plus)?;
    let space = solve_congruence_matrix(&inst.a, 1.0, &tol)?;
    println!(
        "recovered: formula {}, nullspace {} (residual {:.2e})",
        predicted.dim,
        space.dim(),
        space.max_residual
    );

    // An eps = -1 instance: roots come in +-i pairs.
    let spec = InstanceSpec {
        n: 3,
        epsilon: -1,
        blocks: vec![
            Block::RealPair { lambda: -3.0 },
            Block::PlusRoot { count: 1 },
            Block::MinusRoot { count: 1 },
        ],
        cond_cap: 100.0,
        seed: 7,
    };
    let inst = generate(&spec)?;
    let space = solve_congruence_matrix(&inst.a, -1.0, &tol)?;
    println!(
        "\neps = -1 instance: expected dim {}, computed {}",
        inst.expected_dim,
        space.dim()
    );
    Ok(())
}
