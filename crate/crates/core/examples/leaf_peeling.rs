// The closed form: on a scaled tree every vertex forwards its children's
// mass to its parent while leaves peel off one layer per step. Checked
// in lockstep against the raw dynamics.
//
// ```text
// cargo run --example leaf_peeling
// ```

use escapeflow::analysis::equivalence_check;
use escapeflow::closed_form::run_closed_form;
use escapeflow::forest::{build_scaled_msf, stats, RootPolicy, ShiftMode};
use escapeflow::init::descendant_init;
use escapeflow::lattice::{LatticeSpec, Topology};
use escapeflow::ResourceField;

pub fn run_example() -> escapeflow::Result<()> {
    let base = LatticeSpec::cube(2, 6, Topology::BoxZero)?;
    let (f, _) = build_scaled_msf(
        &base,
        11,
        RootPolicy::NearestBoundary,
        &ShiftMode::Random,
        Topology::BoxSink,
    )?;
    let c0: ResourceField<u64> = descendant_init(&f, f.spec())?;
    let (records, _) = run_closed_form(c0, &f)?;
    println!("tree height {}", stats(&f).max_height());
    for r in records.iter().step_by(4) {
        println!(
            "n = {:>2}: {:>2} alive, {:>3} on the lattice, {:>3} in the sink, strict {}",
            r.step, r.alive, r.total, r.sink, r.flux_stab
        );
    }

    let report = equivalence_check::<u64>(&f, 1000, 11)?;
    println!(
        "raw vs closed form over {} steps: {:?} (ties {}, first mismatch {:?})",
        report.steps_compared, report.verdict, report.ties, report.first_mismatch
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
