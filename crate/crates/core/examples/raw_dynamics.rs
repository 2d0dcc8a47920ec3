// The clustering rule on a torus from i.i.d. uniform data: every positive
// site pushes its mass to the largest value in its closed neighbourhood
// until the configuration freezes.
//
// ```text
// cargo run --example raw_dynamics
// ```

use escapeflow::dynamics::{Process, StopRule};
use escapeflow::init::{iid_init, IidDistribution};
use escapeflow::lattice::{LatticeSpec, Topology};
use escapeflow::seeds::{self, streams};
use escapeflow::ResourceField;

pub fn run_example() -> escapeflow::Result<()> {
    let spec = LatticeSpec::cube(2, 32, Topology::Torus)?;
    let seed = 7;
    let dist = IidDistribution::Uniform {
        low: 0.0,
        high: 1.0,
    };
    let field: ResourceField<f64> = iid_init(&spec, &dist, seeds::substream(seed, streams::INIT))?;

    let trace = Process::new(seeds::substream(seed, streams::TIES)).run(
        field,
        320,
        StopRule::Fixation,
        |_| Ok(()),
    )?;
    for r in &trace.records {
        println!(
            "step {:>2}: total {:.6} on {:>4} sites",
            r.step, r.total, r.positive
        );
    }
    println!("{:?} at step {}", trace.outcome.reason, trace.outcome.step);

    // a fixed point is a set of pairwise non-adjacent sites
    let pos = trace.final_field.positive_indices();
    let touching = pos
        .iter()
        .any(|&u| pos.iter().any(|&v| u < v && spec.are_adjacent(u, v)));
    println!(
        "surviving sites: {}, any adjacent pair: {touching}",
        pos.len()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
