// Three-dimensional forest made of one planar spanning tree per layer.
// Without the scaling step neighbouring vertices need not be linked, so
// the raw dynamics can leave the tree structure.
//
// ```text
// cargo run --example layered_forest
// ```

use escapeflow::analysis::escape_run;
use escapeflow::forest::{layer_embed, orient_components, stats, verify_property_ii, RootPolicy};
use escapeflow::lattice::{LatticeSpec, Topology};

pub fn run_example() -> escapeflow::Result<()> {
    let spec = LatticeSpec::new(vec![12, 12, 4], Topology::BoxSink)?;
    let t = layer_embed(&spec, 5)?;
    let f = orient_components(&t, RootPolicy::NearestBoundary);
    let st = stats(&f);
    println!(
        "{} components, tallest {}",
        t.components().len(),
        st.max_height()
    );
    println!(
        "neighbouring pairs not linked: {}",
        verify_property_ii(&f).violations.len()
    );

    let s = escape_run::<u64>(&f, 10_000, 5)?;
    match s.extinction_step {
        Some(n) => println!(
            "raw run: all {} units in the sink after {n} steps",
            s.initial_total
        ),
        None => println!(
            "raw run: {} of {} in the sink, {} still on the lattice",
            s.sink_total, s.initial_total, s.final_total
        ),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
