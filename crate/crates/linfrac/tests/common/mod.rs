//! Shared helpers for the integration suites: seeded random instance specs
//! covering every block type, with eigenvalues kept away from tolerance
//! bands.

use linfrac::genlab::{Block, InstanceSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random spec of the given order: real pairs (repeated ones force
/// multiplicities), unit rotation pairs (plus sign only), complex
/// quadruples, and roots of epsilon.
pub fn random_spec(order: usize, epsilon: i8, cond_cap: f64, rng: &mut ChaCha8Rng) -> InstanceSpec {
    let mut blocks: Vec<Block> = Vec::new();
    let mut remaining = order;
    while remaining > 0 {
        match rng.gen_range(0..5) {
            0 if remaining >= 2 => {
                let mag = if rng.gen_bool(0.5) {
                    rng.gen_range(0.2..0.8)
                } else {
                    rng.gen_range(1.3..3.0)
                };
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                blocks.push(Block::RealPair { lambda: sign * mag });
                remaining -= 2;
            }
            1 if remaining >= 2 && epsilon == 1 => {
                blocks.push(Block::UnitComplexPair {
                    theta: rng.gen_range(0.3..2.8),
                });
                remaining -= 2;
            }
            2 if remaining >= 4 => {
                let mag = if rng.gen_bool(0.5) {
                    rng.gen_range(0.25..0.8)
                } else {
                    rng.gen_range(1.3..2.5)
                };
                let phi = rng.gen_range(0.3..std::f64::consts::PI - 0.3);
                blocks.push(Block::ComplexQuadruple {
                    re: mag * phi.cos(),
                    im: mag * phi.sin(),
                });
                remaining -= 4;
            }
            3 if remaining >= 2 => {
                // Duplicate an earlier real pair so multiplicities above one
                // show up in the dimension formula.
                if let Some(Block::RealPair { lambda }) = blocks
                    .iter()
                    .find(|b| matches!(b, Block::RealPair { .. }))
                    .copied()
                {
                    blocks.push(Block::RealPair { lambda });
                    remaining -= 2;
                }
            }
            _ => {
                if epsilon == 1 {
                    if rng.gen_bool(0.5) {
                        blocks.push(Block::PlusRoot { count: 1 });
                    } else {
                        blocks.push(Block::MinusRoot { count: 1 });
                    }
                    remaining -= 1;
                } else if remaining >= 2 {
                    blocks.push(Block::PlusRoot { count: 1 });
                    blocks.push(Block::MinusRoot { count: 1 });
                    remaining -= 2;
                }
            }
        }
    }
    InstanceSpec {
        n: order - 1,
        epsilon,
        blocks,
        cond_cap,
        seed: rng.gen(),
    }
}
