// Finite speed of propagation: after n steps a window only depends on data
// within distance 2n, so a box and a larger box around it agree there.
//
// ```text
// cargo run --example light_cone
// ```

use escapeflow::analysis::light_cone_check;

pub fn run_example() -> escapeflow::Result<()> {
    for seed in 0..5 {
        let r = light_cone_check(32, 4, 2, 3, seed)?;
        println!(
            "seed {seed}: L={} vs L={}, {} window sites over {} steps: {:?} ({} mismatches)",
            r.small_side, r.large_side, r.window_vertices, r.steps, r.verdict, r.mismatches
        );
    }
    // asking for more steps than the small box can absorb is refused
    match light_cone_check(16, 4, 2, 4, 0) {
        Err(e) => println!("refused: {e}"),
        Ok(r) => println!("unexpectedly ran: {r:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> escapeflow::Result<()> {
    run_example()
}
