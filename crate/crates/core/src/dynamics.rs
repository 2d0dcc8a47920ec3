//! The clustering process itself: every vertex holding resource sends all of
//! it to a richest member of its closed neighbourhood, ties broken
//! uniformly, and arriving amounts add up.
//!
//! Tie choices are drawn from a stream keyed by `(tie seed, step, vertex)`,
//! so a run is reproducible no matter how the work is split across threads.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ResourceField;
use crate::forest::Forest;
use crate::lattice::Topology;
use crate::quantity::Quantity;
use crate::seeds;

/// Positive-vertex count above which routing is split across workers.
const PARALLEL_MIN: usize = 4096;

/// Where a vertex sends its resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Vertex(usize),
    Sink,
}

/// Vertices whose virtual parent is the sink (forest roots in a
/// `box-sink` lattice).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinkLinks(Vec<bool>);

impl SinkLinks {
    pub fn roots_of(f: &Forest) -> Self {
        let mut mask = vec![false; f.spec().len()];
        for &r in f.roots() {
            mask[r] = true;
        }
        SinkLinks(mask)
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        SinkLinks(mask)
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.0[idx]
    }
}

/// `M_n` and `a_n` for one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingDecision {
    step: u64,
    targets: Vec<Target>,
    argmax: Vec<Vec<usize>>,
    tied: Vec<usize>,
}

impl RoutingDecision {
    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn target(&self, idx: usize) -> Target {
        self.targets[idx]
    }

    pub fn targets(&self) -> &[Target] {
        &self.targets
    }

    /// The maximizers of the field over `N(x)`, ascending. Recorded only
    /// for vertices that actually route resource on the lattice; empty for
    /// zero vertices and for roots draining into the sink.
    pub fn argmax(&self, idx: usize) -> &[usize] {
        &self.argmax[idx]
    }

    pub fn tie_count(&self) -> usize {
        self.tied.len()
    }

    /// Positive vertices whose maximizer set had more than one element.
    pub fn tied(&self) -> &[usize] {
        &self.tied
    }

    /// Every positive vertex is its own unique maximizer, hence keeps its
    /// resource, and nothing flows into it; the configuration is then
    /// constant forever.
    pub fn is_fixed<Q: Quantity>(&self, field: &ResourceField<Q>) -> bool {
        let mut inflow = vec![false; self.targets.len()];
        for (y, t) in self.targets.iter().enumerate() {
            if field.get(y).is_zero() {
                continue;
            }
            match *t {
                Target::Vertex(x) if x == y => {}
                Target::Vertex(x) => inflow[x] = true,
                Target::Sink => return false,
            }
        }
        field
            .positive_indices()
            .into_iter()
            .all(|x| !inflow[x] && self.targets[x] == Target::Vertex(x) && self.argmax[x] == [x])
    }
}

/// Routing rule with its tie-breaking stream and optional sink links.
#[derive(Debug, Clone)]
pub struct Process {
    tie_seed: u64,
    sinks: Option<SinkLinks>,
}

impl Process {
    pub fn new(tie_seed: u64) -> Self {
        Process {
            tie_seed,
            sinks: None,
        }
    }

    /// Attaches a sink above the given vertices; needs a `box-sink` lattice.
    pub fn with_sinks(mut self, sinks: SinkLinks) -> Self {
        self.sinks = Some(sinks);
        self
    }

    pub fn tie_seed(&self) -> u64 {
        self.tie_seed
    }

    pub fn route<Q: Quantity>(&self, field: &ResourceField<Q>) -> Result<RoutingDecision> {
        let spec = field.spec();
        if let Some(s) = &self.sinks {
            if spec.topology() != Topology::BoxSink {
                return Err(Error::Precondition(format!(
                    "sink links need a box-sink lattice, not {}",
                    spec.topology()
                )));
            }
            if s.0.len() != spec.len() {
                return Err(Error::Domain("sink mask does not match lattice".into()));
            }
        }
        let n = field.step();
        let positive = field.positive_indices();
        let decide = |x: usize, buf: &mut Vec<usize>| -> (Target, Vec<usize>) {
            if self.sinks.as_ref().is_some_and(|s| s.contains(x)) {
                return (Target::Sink, Vec::new());
            }
            spec.neighbor_indices(x, buf);
            let mut best: Vec<usize> = Vec::with_capacity(1);
            let mut max = field.get(x);
            for &y in buf.iter() {
                let v = field.get(y);
                if v > max {
                    max = v;
                    best.clear();
                    best.push(y);
                } else if v == max {
                    best.push(y);
                }
            }
            let pick = if best.len() == 1 {
                best[0]
            } else {
                let mut rng = seeds::rng(seeds::keyed(self.tie_seed, &[n, x as u64]));
                best[rng.random_range(0..best.len())]
            };
            (Target::Vertex(pick), best)
        };
        let decided: Vec<(Target, Vec<usize>)> = if positive.len() >= PARALLEL_MIN {
            positive
                .par_iter()
                .with_min_len(1024)
                .map_init(Vec::new, |buf, &x| decide(x, buf))
                .collect()
        } else {
            let mut buf = Vec::new();
            positive.iter().map(|&x| decide(x, &mut buf)).collect()
        };
        let mut targets: Vec<Target> = (0..spec.len()).map(Target::Vertex).collect();
        let mut argmax = vec![Vec::new(); spec.len()];
        let mut tied = Vec::new();
        for (&x, (t, m)) in positive.iter().zip(decided) {
            targets[x] = t;
            if m.len() > 1 {
                tied.push(x);
            }
            argmax[x] = m;
        }
        Ok(RoutingDecision {
            step: n,
            targets,
            argmax,
            tied,
        })
    }

    /// Iterates route and step from `field` until `stop` triggers or
    /// `budget` steps have been applied. `observe` sees every visited
    /// configuration, the initial one included.
    pub fn run<Q: Quantity>(
        &self,
        field: ResourceField<Q>,
        budget: u64,
        stop: StopRule,
        mut observe: impl FnMut(&ResourceField<Q>) -> Result<()>,
    ) -> Result<RunTrace<Q>> {
        let mut field = field;
        let mut records = Vec::new();
        let start = field.step();
        let outcome = loop {
            observe(&field)?;
            let decision = self.route(&field)?;
            records.push(StepRecord::of(&field, decision.tie_count())?);
            let applied = field.step() - start;
            match stop {
                StopRule::Fixation if decision.is_fixed(&field) => {
                    break Outcome {
                        reason: StopReason::Fixation,
                        step: field.step(),
                        truncated: false,
                    };
                }
                StopRule::Empty if field.is_empty() => {
                    break Outcome {
                        reason: StopReason::Empty,
                        step: field.step(),
                        truncated: false,
                    };
                }
                _ => {}
            }
            if applied >= budget {
                break Outcome {
                    reason: StopReason::Budget,
                    step: field.step(),
                    truncated: stop != StopRule::Budget,
                };
            }
            field = step(&field, &decision)?;
        };
        Ok(RunTrace {
            records,
            final_field: field,
            outcome,
        })
    }
}

/// `C_{n+1}(x)`: the sum of `C_n(y)` over all `y` routed to `x`, added in
/// ascending order of `y`. Mass routed to the sink accumulates there.
pub fn step<Q: Quantity>(
    field: &ResourceField<Q>,
    decision: &RoutingDecision,
) -> Result<ResourceField<Q>> {
    if decision.step != field.step() || decision.targets.len() != field.spec().len() {
        return Err(Error::Consistency(format!(
            "routing decision for step {} applied to field at step {}",
            decision.step,
            field.step()
        )));
    }
    let mut values = vec![Q::zero(); field.spec().len()];
    let mut sink = field.sink().clone();
    for (y, v) in field.values().iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        match decision.targets[y] {
            Target::Vertex(x) => values[x].accumulate(v)?,
            Target::Sink => sink.accumulate(v)?,
        }
    }
    Ok(ResourceField::from_parts(
        field.spec().clone(),
        values,
        sink,
        field.step() + 1,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    /// Stop once the configuration can no longer change.
    Fixation,
    /// Stop once no vertex holds resource.
    Empty,
    /// Always run the full budget.
    Budget,
}

impl std::str::FromStr for StopRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixation" => Ok(StopRule::Fixation),
            "empty" => Ok(StopRule::Empty),
            "budget" => Ok(StopRule::Budget),
            other => Err(Error::Config(format!("unknown stop rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Fixation,
    Empty,
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub reason: StopReason,
    /// Step index of the final configuration.
    pub step: u64,
    /// The budget ran out before the requested stop condition was met.
    pub truncated: bool,
}

/// One row of a trace: the configuration at `step` and the number of ties
/// met when routing it.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord<Q> {
    pub step: u64,
    pub total: Q,
    pub sink: Q,
    pub positive: usize,
    pub ties: usize,
}

impl<Q: Quantity> StepRecord<Q> {
    pub fn of(field: &ResourceField<Q>, ties: usize) -> Result<Self> {
        Ok(StepRecord {
            step: field.step(),
            total: field.total()?,
            sink: field.sink().clone(),
            positive: field.positive_count(),
            ties,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunTrace<Q> {
    pub records: Vec<StepRecord<Q>>,
    pub final_field: ResourceField<Q>,
    pub outcome: Outcome,
}

impl<Q: Quantity> RunTrace<Q> {
    pub fn total_ties(&self) -> usize {
        self.records.iter().map(|r| r.ties).sum()
    }
}
