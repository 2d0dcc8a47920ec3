// Minimum spanning tree on a box, the cycle rule, and the scaled forest
// that closes the gaps between lattice neighbours.
//
// ```text
// cargo run --example msf_forest
// ```

use escapeflow::forest::{
    build_msf, build_scaled_msf, cycle_rule_violations, orient_components, sample_weights, stats,
    verify_property_ii, RootPolicy, ShiftMode,
};
use escapeflow::lattice::{LatticeSpec, Topology};

pub fn run_example() -> escapeflow::Result<()> {
    let spec = LatticeSpec::cube(2, 16, Topology::BoxSink)?;
    let weights = sample_weights(&spec, 42);
    let tree = build_msf(&spec, &weights)?;
    println!(
        "{} vertices, {} lattice edges, {} tree edges",
        spec.len(),
        weights.len(),
        tree.edges().len()
    );

    // indices of the kept edges, for the cycle rule check
    let kept: Vec<usize> = (0..weights.len())
        .filter(|&i| tree.edges().contains(&weights.edges()[i]))
        .collect();
    println!(
        "cycle rule violations: {}",
        cycle_rule_violations(spec.len(), weights.edges(), weights.weights(), &kept).len()
    );

    let rooted = orient_components(&tree, RootPolicy::NearestBoundary);
    let st = stats(&rooted);
    println!(
        "root {} height {}",
        spec.vertex(rooted.roots()[0]),
        st.max_height()
    );
    println!(
        "lattice edges between members missing from the tree: {}",
        verify_property_ii(&rooted).violations.len()
    );

    let base = LatticeSpec::cube(2, 8, Topology::BoxZero)?;
    let (scaled, shift) = build_scaled_msf(
        &base,
        42,
        RootPolicy::NearestBoundary,
        &ShiftMode::Random,
        Topology::BoxSink,
    )?;
    println!(
        "scaled: {} members on a {}x{} box, shift {shift}, every neighbouring pair linked: {}",
        scaled.member_count(),
        scaled.spec().sides()[0],
        scaled.spec().sides()[1],
        verify_property_ii(&scaled).holds
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
