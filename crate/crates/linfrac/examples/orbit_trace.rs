//! Orbit iteration in homogeneous coordinates: periodicity detection,
//! forbidden-set crossings, and CSV traces.
//!
//! Run with: cargo run --example orbit_trace

use linfrac::dynamics::iterate;
use linfrac::homogeneous::SystemMatrix;
use linfrac::Tolerances;
use nalgebra::{dmatrix, dvector};

fn main() -> linfrac::Result<()> {
    // An involution: A^2 = I, so the map is globally 2-periodic.
    let swap = SystemMatrix::new(
        dmatrix![0.0, 0.0, 1.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0],
        Tolerances::default(),
    )?;
    let orbit = iterate(&swap, &dvector![2.0, 3.0], 10);
    println!("involution orbit from (2, 3): {:?}", orbit.status);
    for (k, p) in orbit.points.iter().enumerate() {
        println!("  step {k}: ({:+.4}, {:+.4})", p[0], p[1]);
    }
    println!("detected period: {:?}", orbit.detect_period(1e-9));

    // A quarter rotation gives period four.
    let rot = SystemMatrix::new(
        dmatrix![0.0, -1.0, 0.0; 1.0, 0.0, 0.0; 0.0, 0.0, 1.0],
        Tolerances::default(),
    )?;
    let orbit = iterate(&rot, &dvector![1.0, 0.0], 12);
    println!("\nquarter-rotation orbit from (1, 0): {:?}", orbit.status);

    // A map with denominator x: the orbit of (1, 2) hits the forbidden
    // hyperplane after one step lands on x = 0.
    let fractional = SystemMatrix::new(
        dmatrix![-1.0, 0.0, 1.0; 0.0, 1.0, 0.0; 1.0, 0.0, 0.0],
        Tolerances::default(),
    )?;
    let orbit = iterate(&fractional, &dvector![1.0, 2.0], 10);
    println!("\nF(x,y) = ((1-x)/x, y/x) from (1, 2): {:?}", orbit.status);
    println!("\nCSV trace:");
    let mut csv = Vec::new();
    orbit.write_csv(&mut csv, None)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
