// Writes a trace CSV and a PGM snapshot every few steps to a directory
// (first argument, default a fresh temp dir).
//
// ```text
// cargo run --example snapshots -- /tmp/escape-frames
// ```

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use escapeflow::dynamics::{Process, SinkLinks, StopRule};
use escapeflow::forest::{build_scaled_msf, RootPolicy, ShiftMode};
use escapeflow::init::descendant_init;
use escapeflow::lattice::{LatticeSpec, Topology};
use escapeflow::output::{digest, write_pgm, write_trace_csv};
use escapeflow::quantity::Quantity;
use escapeflow::ResourceField;

pub fn run_example() -> escapeflow::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            std::env::temp_dir().join(format!("escapeflow-snapshots-{}", std::process::id()))
        });
    fs::create_dir_all(&dir)?;

    let base = LatticeSpec::cube(2, 24, Topology::BoxZero)?;
    let (f, _) = build_scaled_msf(
        &base,
        1,
        RootPolicy::NearestBoundary,
        &ShiftMode::Random,
        Topology::BoxSink,
    )?;
    let c0: ResourceField<u64> = descendant_init(&f, f.spec())?;
    // fixed gray scale so frames are comparable
    let scale = c0.max_value().to_f64();
    let tag = digest(&("snapshots example", 24, 1))?;

    let mut frames = 0;
    let trace = Process::new(1).with_sinks(SinkLinks::roots_of(&f)).run(
        c0,
        10_000,
        StopRule::Empty,
        |field| {
            if field.step() % 20 == 0 {
                write_pgm(
                    BufWriter::new(File::create(
                        dir.join(format!("step_{:06}.pgm", field.step())),
                    )?),
                    &tag,
                    field,
                    scale,
                )?;
                frames += 1;
            }
            Ok(())
        },
    )?;
    write_trace_csv(
        BufWriter::new(File::create(dir.join("trace.csv"))?),
        &tag,
        &trace.records,
    )?;
    println!(
        "{frames} frames and trace.csv in {}, empty at step {}",
        dir.display(),
        trace.outcome.step
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
