//! Forest-intrinsic description of the dynamics under descendant-count
//! initialization.
//!
//! `T_0` is the forest and `T_{n+1}` is `T_n` with all leaves deleted. A
//! root keeps its link to the sink, so it only becomes a leaf once its last
//! child is gone. On such a forest each step moves every amount one link
//! toward the root: the new value at `x` is the sum of its children's old
//! values, and the roots empty into the sink.

use crate::error::{Error, Result};
use crate::field::ResourceField;
use crate::forest::{Forest, ForestStats};
use crate::lattice::Vertex;
use crate::quantity::Quantity;

/// Membership of the peeled forest `T_n` and the removal index of every
/// vertex already peeled off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelState {
    alive: Vec<bool>,
    n: u32,
    removed_at: Vec<Option<u32>>,
}

impl PeelState {
    /// `T_0`: every forest member.
    pub fn new(f: &Forest) -> Self {
        let len = f.spec().len();
        PeelState {
            alive: (0..len).map(|x| f.is_member(x)).collect(),
            n: 0,
            removed_at: vec![None; len],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_alive(&self, idx: usize) -> bool {
        self.alive[idx]
    }

    pub fn alive(&self) -> Vec<usize> {
        (0..self.alive.len()).filter(|&i| self.alive[i]).collect()
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn is_extinct(&self) -> bool {
        !self.alive.iter().any(|&a| a)
    }

    /// First `n` with the vertex outside `T_n`, once it has been peeled.
    pub fn removed_at(&self, idx: usize) -> Option<u32> {
        self.removed_at[idx]
    }
}

/// One application of leaf deletion.
pub fn peel(state: &PeelState, f: &Forest) -> PeelState {
    let mut next = state.clone();
    next.n += 1;
    for x in 0..state.alive.len() {
        if !state.alive[x] {
            continue;
        }
        let up = match f.parent(x) {
            Some(p) => usize::from(state.alive[p]),
            // the sink link
            None => 1,
        };
        let down = f.children(x).iter().filter(|&&y| state.alive[y]).count();
        if up + down == 1 {
            next.alive[x] = false;
            next.removed_at[x] = Some(next.n);
        }
    }
    next
}

/// Peels until nothing is left; returns every state `T_0, T_1, ...`
/// including the empty one.
pub fn peel_all(f: &Forest) -> Vec<PeelState> {
    let mut states = vec![PeelState::new(f)];
    while !states.last().expect("non-empty").is_extinct() {
        let next = peel(states.last().expect("non-empty"), f);
        states.push(next);
    }
    states
}

/// `T_n` read off the subtree heights: `{x : height(x) >= n}`.
pub fn membership_by_height(f: &Forest, stats: &ForestStats, n: u32) -> Vec<usize> {
    f.members().filter(|&x| stats.height(x) >= n).collect()
}

/// Moves every amount one link toward the root; roots drain into the sink.
///
/// The field must vanish off `T_n`.
pub fn parent_forward_step<Q: Quantity>(
    field: &ResourceField<Q>,
    f: &Forest,
    state: &PeelState,
) -> Result<ResourceField<Q>> {
    if let Some(x) = (0..state.alive.len()).find(|&x| !state.alive[x] && !field.get(x).is_zero()) {
        return Err(Error::Consistency(format!(
            "field holds {} at {} outside T_{}",
            field.get(x),
            f.spec().vertex(x),
            state.n
        )));
    }
    let mut values = vec![Q::zero(); field.spec().len()];
    for x in f.members() {
        for &y in f.children(x) {
            values[x].accumulate(field.get(y))?;
        }
    }
    let mut sink = field.sink().clone();
    for &r in f.roots() {
        sink.accumulate(field.get(r))?;
    }
    Ok(ResourceField::from_parts(
        field.spec().clone(),
        values,
        sink,
        field.step() + 1,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxReport {
    pub holds: bool,
    /// Alive vertices not strictly richer than their children combined.
    pub weak: Vec<Vertex>,
    /// Vertices outside `T_n` holding resource.
    pub leaked: Vec<Vertex>,
}

/// Every vertex of `T_n` holds strictly more than all of its children
/// together, and nothing outside `T_n` holds anything.
pub fn check_flux_stab<Q: Quantity>(
    field: &ResourceField<Q>,
    f: &Forest,
    state: &PeelState,
) -> Result<FluxReport> {
    if !Q::EXACT {
        return Err(Error::Precondition(
            "strict comparison needs exact-integer amounts".into(),
        ));
    }
    let spec = f.spec();
    let mut weak = Vec::new();
    let mut leaked = Vec::new();
    for x in 0..state.alive.len() {
        if state.alive[x] {
            let mut below = Q::zero();
            for &y in f.children(x) {
                below.accumulate(field.get(y))?;
            }
            if field.get(x) <= &below {
                weak.push(spec.vertex(x));
            }
        } else if !field.get(x).is_zero() {
            leaked.push(spec.vertex(x));
        }
    }
    Ok(FluxReport {
        holds: weak.is_empty() && leaked.is_empty(),
        weak,
        leaked,
    })
}

/// How the parent/child membership law behaves on a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerRecursionReport {
    /// `x ∈ T_{n+1}` iff some child of `x` is in `T_n`, for all `x`, `n`.
    pub existential_holds: bool,
    /// `y ∈ T_n` implies `parent(y) ∈ T_{n+1}`, for all `y`, `n`.
    pub forward_holds: bool,
    /// `(child, parent, n)` where `parent ∈ T_{n+1}` but `child ∉ T_n`:
    /// counterexamples to the single-child biconditional.
    pub biconditional_failures: Vec<(Vertex, Vertex, u32)>,
}

pub fn layer_recursion_check(f: &Forest, stats: &ForestStats) -> LayerRecursionReport {
    let top = stats.max_height() + 1;
    let in_t = |x: usize, n: u32| f.is_member(x) && stats.height(x) >= n;
    let spec = f.spec();
    let mut existential_holds = true;
    let mut forward_holds = true;
    let mut biconditional_failures = Vec::new();
    for n in 0..=top {
        for x in f.members() {
            let some_child = f.children(x).iter().any(|&y| in_t(y, n));
            if in_t(x, n + 1) != some_child {
                existential_holds = false;
            }
            for &y in f.children(x) {
                if in_t(y, n) && !in_t(x, n + 1) {
                    forward_holds = false;
                }
                if in_t(x, n + 1) && !in_t(y, n) {
                    biconditional_failures.push((spec.vertex(y), spec.vertex(x), n));
                }
            }
        }
    }
    LayerRecursionReport {
        existential_holds,
        forward_holds,
        biconditional_failures,
    }
}

/// One row of a closed-form trace.
#[derive(Debug, Clone, PartialEq)]
pub struct PeelRecord<Q> {
    pub step: u32,
    pub alive: usize,
    pub total: Q,
    pub sink: Q,
    pub flux_stab: bool,
}

/// Runs parent forwarding alongside peeling from `field` until `T_n` is
/// empty, checking the strict inequality at every step.
pub fn run_closed_form<Q: Quantity>(
    field: ResourceField<Q>,
    f: &Forest,
) -> Result<(Vec<PeelRecord<Q>>, ResourceField<Q>)> {
    let mut state = PeelState::new(f);
    let mut field = field;
    let mut records = Vec::new();
    loop {
        let flux = check_flux_stab(&field, f, &state)?;
        records.push(PeelRecord {
            step: state.n,
            alive: state.alive_count(),
            total: field.total()?,
            sink: field.sink().clone(),
            flux_stab: flux.holds,
        });
        if state.is_extinct() {
            break;
        }
        field = parent_forward_step(&field, f, &state)?;
        state = peel(&state, f);
    }
    Ok((records, field))
}
