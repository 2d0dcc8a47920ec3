// Central-window mean of the descendant-count configuration grows with the
// box, while an i.i.d. control stays put.
//
// ```text
// cargo run --release --example divergence
// ```

use escapeflow::analysis::{divergence_probe, iid_control_probe};
use escapeflow::forest::RootPolicy;
use escapeflow::init::IidDistribution;

pub fn run_example() -> escapeflow::Result<()> {
    let sides = [16, 32, 64];
    let seeds: Vec<u64> = (0..30).collect();
    let tree = divergence_probe(&sides, &seeds, RootPolicy::NearestBoundary)?;
    let control = iid_control_probe(
        &sides,
        &seeds,
        &IidDistribution::Uniform {
            low: 0.0,
            high: 1.0,
        },
    )?;
    for (t, c) in tree.points.iter().zip(&control.points) {
        println!(
            "L = {:>2}: tree median {:>7.2}   uniform median {:.3}",
            t.side, t.median, c.median
        );
    }
    println!(
        "tree strictly increasing: {}, control spread {:.1}%",
        tree.strictly_increasing(),
        100.0 * control.relative_spread()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
