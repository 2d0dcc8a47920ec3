// Descendant counts on a scaled spanning tree, run with a sink above the
// root: all mass leaves the box and the interior ends empty.
//
// ```text
// cargo run --example escape
// ```

use escapeflow::analysis::escape_run;
use escapeflow::forest::{build_scaled_msf, RootPolicy, ShiftMode};
use escapeflow::lattice::{LatticeSpec, Topology};
use num_bigint::BigUint;

pub fn run_example() -> escapeflow::Result<()> {
    for side in [8, 16, 32] {
        let base = LatticeSpec::cube(2, side, Topology::BoxZero)?;
        let (f, _) = build_scaled_msf(
            &base,
            3,
            RootPolicy::NearestBoundary,
            &ShiftMode::Random,
            Topology::BoxSink,
        )?;
        let s = escape_run::<BigUint>(&f, 100_000, 3)?;
        println!(
            "L = {:>2}: interior mean {:>7.2} -> {}, sink {} of {}, empty after {:?} steps",
            2 * side,
            s.initial_interior_mean,
            s.final_interior_mean,
            s.sink_total,
            s.initial_total,
            s.extinction_step
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
