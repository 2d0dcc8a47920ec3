//! Cross-checks between the raw dynamics and the forest description, and
//! the escape, fixation and divergence experiments built on them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{check_flux_stab, parent_forward_step, peel, PeelState};
use crate::dynamics::{self, Process, SinkLinks, StopReason, StopRule};
use crate::error::{Error, Result};
use crate::field::ResourceField;
use crate::forest::{build_scaled_msf, verify_property_ii, Forest, RootPolicy, ShiftMode};
use crate::init::{descendant_init, iid_init, IidDistribution};
use crate::lattice::{LatticeSpec, Topology};
use crate::quantity::Quantity;
use crate::seeds::{self, streams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotRun,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// Before/after amounts of one descendant-initialized run. Exact amounts
/// are kept as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeSummary {
    pub initial_total: String,
    pub final_total: String,
    pub sink_total: String,
    pub interior_vertices: usize,
    pub initial_interior_mean: f64,
    pub final_interior_mean: f64,
    /// Step at which the lattice emptied, if it did within budget.
    pub extinction_step: Option<u64>,
    /// Lattice total plus sink unchanged, compared exactly.
    pub conserved: bool,
    /// Every lattice value is exactly zero at the end.
    pub extinct: bool,
}

impl EscapeSummary {
    fn of<Q: Quantity>(
        initial: &ResourceField<Q>,
        last: &ResourceField<Q>,
        extinction_step: Option<u64>,
    ) -> Result<Self> {
        let interior = initial.spec().interior_indices();
        Ok(EscapeSummary {
            initial_total: initial.grand_total()?.to_string(),
            final_total: last.total()?.to_string(),
            sink_total: last.sink().to_string(),
            interior_vertices: interior.len(),
            initial_interior_mean: initial.mean_over(&interior),
            final_interior_mean: last.mean_over(&interior),
            extinction_step,
            conserved: initial.grand_total()? == last.grand_total()?,
            extinct: last.is_empty(),
        })
    }
}

/// Outcome of running the raw process and parent forwarding side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub members: usize,
    /// Steps compared, the initial configuration included.
    pub steps_compared: u64,
    pub first_mismatch: Option<u64>,
    pub ties: usize,
    pub flux_stab_holds: bool,
    pub truncated: bool,
    pub escape: EscapeSummary,
}

/// Runs the raw dynamics from descendant-count initialization on `f` (with
/// the sink above its roots) and the closed-form forwarding in lockstep.
///
/// Passes iff the two fields agree exactly at every step until
/// extinction, no tie ever occurs, and the strict inequality holds
/// throughout.
pub fn equivalence_check<Q: Quantity>(
    f: &Forest,
    budget: u64,
    tie_seed: u64,
) -> Result<EquivalenceReport> {
    if !Q::EXACT {
        return Err(Error::Precondition(
            "equivalence is checked in exact-integer mode".into(),
        ));
    }
    let report = verify_property_ii(f);
    if !report.holds {
        return Err(Error::Precondition(format!(
            "forest misses {} lattice edge(s) between members, e.g. {} - {}",
            report.violations.len(),
            report.violations[0].0,
            report.violations[0].1
        )));
    }
    let f = if f.spec().topology() == Topology::BoxSink {
        f.clone()
    } else {
        f.with_topology(Topology::BoxSink)
    };
    let spec = f.spec().clone();
    let initial: ResourceField<Q> = descendant_init(&f, &spec)?;
    let process = Process::new(tie_seed).with_sinks(SinkLinks::roots_of(&f));

    let mut raw = initial.clone();
    let mut closed = initial.clone();
    let mut state = PeelState::new(&f);
    let mut ties = 0;
    let mut flux_ok = true;
    let mut first_mismatch = None;
    let mut extinction = None;
    loop {
        let n = raw.step();
        flux_ok &= check_flux_stab(&closed, &f, &state)?.holds;
        if first_mismatch.is_none()
            && (raw.values() != closed.values() || raw.sink() != closed.sink())
        {
            first_mismatch = Some(n);
        }
        if state.is_extinct() && raw.is_empty() {
            extinction = Some(n);
            break;
        }
        if n >= budget {
            break;
        }
        let decision = process.route(&raw)?;
        ties += decision.tie_count();
        raw = dynamics::step(&raw, &decision)?;
        closed = parent_forward_step(&closed, &f, &state)?;
        state = peel(&state, &f);
    }
    let truncated = extinction.is_none();
    let verdict =
        Verdict::from_bool(first_mismatch.is_none() && ties == 0 && flux_ok && !truncated);
    Ok(EquivalenceReport {
        verdict,
        members: f.member_count(),
        steps_compared: raw.step() + 1,
        first_mismatch,
        ties,
        flux_stab_holds: flux_ok,
        truncated,
        escape: EscapeSummary::of(&initial, &raw, extinction)?,
    })
}

/// Raw dynamics only, from descendant-count initialization, until the
/// lattice is empty or `budget` steps have run.
pub fn escape_run<Q: Quantity>(f: &Forest, budget: u64, tie_seed: u64) -> Result<EscapeSummary> {
    let f = f.with_topology(Topology::BoxSink);
    let initial: ResourceField<Q> = descendant_init(&f, f.spec())?;
    let trace = Process::new(tie_seed)
        .with_sinks(SinkLinks::roots_of(&f))
        .run(initial.clone(), budget, StopRule::Empty, |_| Ok(()))?;
    let extinction = (trace.outcome.reason == StopReason::Empty).then_some(trace.outcome.step);
    EscapeSummary::of(&initial, &trace.final_field, extinction)
}

/// Aggregate over many escape runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeReport {
    pub runs: usize,
    pub completed: usize,
    pub truncated: usize,
    pub mean_initial_interior: f64,
    pub mean_final_interior: f64,
    /// Every completed run ends with an exactly empty lattice.
    pub all_extinct: bool,
    /// Every completed run has its whole initial mass in the sink.
    pub all_in_sink: bool,
    /// Final interior mean strictly below the initial one in every
    /// completed run.
    pub strict_gap: bool,
}

pub fn escape_report(runs: &[EscapeSummary]) -> EscapeReport {
    let done: Vec<&EscapeSummary> = runs
        .iter()
        .filter(|r| r.extinction_step.is_some())
        .collect();
    let mean = |g: &dyn Fn(&EscapeSummary) -> f64| {
        if done.is_empty() {
            0.0
        } else {
            done.iter().map(|r| g(r)).sum::<f64>() / done.len() as f64
        }
    };
    EscapeReport {
        runs: runs.len(),
        completed: done.len(),
        truncated: runs.len() - done.len(),
        mean_initial_interior: mean(&|r| r.initial_interior_mean),
        mean_final_interior: mean(&|r| r.final_interior_mean),
        all_extinct: done.iter().all(|r| r.extinct && r.final_total == "0"),
        all_in_sink: done
            .iter()
            .all(|r| r.conserved && r.sink_total == r.initial_total),
        strict_gap: done.iter().all(|r| {
            r.final_interior_mean == 0.0 && r.final_interior_mean < r.initial_interior_mean
        }),
    }
}

/// Median central-window mean of `C_0` for one box side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergencePoint {
    pub side: usize,
    pub median: f64,
    pub means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSeries {
    pub points: Vec<DivergencePoint>,
}

impl DivergenceSeries {
    pub fn strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].median < w[1].median)
    }

    /// `(max - min) / mean` of the medians.
    pub fn relative_spread(&self) -> f64 {
        let m: Vec<f64> = self.points.iter().map(|p| p.median).collect();
        let max = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = m.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = m.iter().sum::<f64>() / m.len() as f64;
        (max - min) / mean
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn probe<F>(sides: &[usize], seeds: &[u64], central_mean: F) -> Result<DivergenceSeries>
where
    F: Fn(usize, u64) -> Result<f64> + Sync,
{
    let points = sides
        .iter()
        .map(|&side| {
            let means = seeds
                .par_iter()
                .map(|&s| central_mean(side, s))
                .collect::<Result<Vec<f64>>>()?;
            Ok(DivergencePoint {
                side,
                median: median(&means),
                means,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DivergenceSeries { points })
}

/// Mean of the descendant-count configuration over the central window of
/// scaled planar spanning trees of side `L`, for each `L` in `sides`.
pub fn divergence_probe(
    sides: &[usize],
    seeds: &[u64],
    policy: RootPolicy,
) -> Result<DivergenceSeries> {
    if let Some(odd) = sides.iter().find(|&&l| l % 2 == 1 || l < 4) {
        return Err(Error::Domain(format!(
            "side {odd} must be even and at least 4"
        )));
    }
    probe(sides, seeds, |side, seed| {
        let base = LatticeSpec::cube(2, side / 2, Topology::BoxZero)?;
        let (f, _) = build_scaled_msf(&base, seed, policy, &ShiftMode::Random, Topology::BoxSink)?;
        let c0: ResourceField<u64> = descendant_init(&f, f.spec())?;
        Ok(c0.mean_over(&f.spec().interior_indices()))
    })
}

/// The same central-window statistic for an i.i.d. control law.
pub fn iid_control_probe(
    sides: &[usize],
    seeds: &[u64],
    dist: &IidDistribution,
) -> Result<DivergenceSeries> {
    probe(sides, seeds, |side, seed| {
        let spec = LatticeSpec::cube(2, side, Topology::BoxSink)?;
        let c0: ResourceField<f64> = iid_init(&spec, dist, seeds::substream(seed, streams::INIT))?;
        Ok(c0.mean_over(&spec.interior_indices()))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixationSummary {
    pub runs: usize,
    pub fixed: usize,
    pub fraction: f64,
    /// Fixation step of each run that fixed, in seed order.
    pub times: Vec<u64>,
    pub median_time: Option<f64>,
    pub max_time: Option<u64>,
}

/// Runs the raw process from `make(seed)` for every seed until fixation or
/// `budget` steps. Tie streams come from each seed's `ties` substream.
pub fn fixation_stats<Q, F>(seeds: &[u64], budget: u64, make: F) -> Result<FixationSummary>
where
    Q: Quantity,
    F: Fn(u64) -> Result<ResourceField<Q>> + Sync,
{
    let outcomes = seeds
        .par_iter()
        .map(|&seed| {
            let field = make(seed)?;
            let trace = Process::new(seeds::substream(seed, streams::TIES)).run(
                field,
                budget,
                StopRule::Fixation,
                |_| Ok(()),
            )?;
            Ok((trace.outcome.reason == StopReason::Fixation).then_some(trace.outcome.step))
        })
        .collect::<Result<Vec<Option<u64>>>>()?;
    let times: Vec<u64> = outcomes.iter().flatten().copied().collect();
    let as_f: Vec<f64> = times.iter().map(|&t| t as f64).collect();
    Ok(FixationSummary {
        runs: seeds.len(),
        fixed: times.len(),
        fraction: if seeds.is_empty() {
            0.0
        } else {
            times.len() as f64 / seeds.len() as f64
        },
        median_time: (!times.is_empty()).then(|| median(&as_f)),
        max_time: times.iter().copied().max(),
        times,
    })
}

/// Fixation statistics for i.i.d. float initial configurations on `spec`.
pub fn fixation_stats_iid(
    spec: &LatticeSpec,
    dist: &IidDistribution,
    seeds: &[u64],
    budget: u64,
) -> Result<FixationSummary> {
    fixation_stats::<f64, _>(seeds, budget, |seed| {
        iid_init(spec, dist, seeds::substream(seed, streams::INIT))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightConeReport {
    pub verdict: Verdict,
    pub small_side: usize,
    pub large_side: usize,
    pub radius: usize,
    pub steps: u64,
    pub window_vertices: usize,
    /// Window values that differed, summed over all compared steps.
    pub mismatches: usize,
    /// Ties that occurred inside the region able to influence the window.
    pub ties_in_cone: usize,
}

/// Runs descendant-count initial data on a box of side `small + 2*margin`
/// and on its central sub-box of side `small`, both without a sink, and
/// compares the radius-`radius` window around the common center after
/// every step up to `steps`.
///
/// Requires the ball of radius `radius + 2*steps` around the center to lie
/// inside the small box, since each step widens the dependence region by 2.
pub fn light_cone_check(
    small: usize,
    margin: usize,
    radius: usize,
    steps: u64,
    seed: u64,
) -> Result<LightConeReport> {
    let large = small + 2 * margin;
    if large % 2 == 1 {
        return Err(Error::Domain(format!("large side {large} must be even")));
    }
    let small_spec = LatticeSpec::cube(2, small, Topology::BoxZero)?;
    let large_spec = LatticeSpec::cube(2, large, Topology::BoxZero)?;
    let center_small = small_spec.index(&small_spec.center())?;
    let reach = radius + 2 * steps as usize;
    let room = small_spec
        .boundary_distance(center_small)
        .expect("box lattice");
    if reach >= room {
        return Err(Error::Precondition(format!(
            "radius {radius} + 2 x {steps} steps reaches the small box boundary ({room} steps away)"
        )));
    }
    let base = LatticeSpec::cube(2, large / 2, Topology::BoxZero)?;
    let (f, _) = build_scaled_msf(
        &base,
        seed,
        RootPolicy::NearestBoundary,
        &ShiftMode::Random,
        Topology::BoxZero,
    )?;
    let big: ResourceField<u64> = descendant_init(&f, &large_spec)?;
    let to_large = |i: usize| -> usize {
        let c = small_spec.coords_of(i);
        (c[0] + margin) * large + c[1] + margin
    };
    let small_values = (0..small_spec.len())
        .map(|i| *big.get(to_large(i)))
        .collect();
    let mut fields = (big, ResourceField::from_values(&small_spec, small_values)?);
    let center_large = to_large(center_small);
    let process = Process::new(seeds::substream(seed, streams::TIES));
    let window = small_spec.window_indices(center_small, radius);
    let mismatched = |fields: &(ResourceField<u64>, ResourceField<u64>)| {
        window
            .iter()
            .filter(|&&i| fields.1.get(i) != fields.0.get(to_large(i)))
            .count()
    };
    let mut ties_in_cone = 0;
    let mut mismatches = mismatched(&fields);
    for k in 0..steps {
        let cone = radius + 2 * (steps - k) as usize;
        let dl = process.route(&fields.0)?;
        let ds = process.route(&fields.1)?;
        ties_in_cone += dl
            .tied()
            .iter()
            .filter(|&&x| large_spec.distance(center_large, x) <= cone)
            .count();
        ties_in_cone += ds
            .tied()
            .iter()
            .filter(|&&x| small_spec.distance(center_small, x) <= cone)
            .count();
        fields = (
            dynamics::step(&fields.0, &dl)?,
            dynamics::step(&fields.1, &ds)?,
        );
        mismatches += mismatched(&fields);
    }
    let verdict = if ties_in_cone > 0 {
        Verdict::NotRun
    } else {
        Verdict::from_bool(mismatches == 0)
    };
    Ok(LightConeReport {
        verdict,
        small_side: small,
        large_side: large,
        radius,
        steps,
        window_vertices: window.len(),
        mismatches,
        ties_in_cone,
    })
}
