//! Random rooted forests embedded in a finite lattice.
//!
//! The pipeline is: uniform edge weights, minimum-weight spanning forest
//! (which on a finite connected graph is what remains after deleting the
//! heaviest edge of every cycle), an orientation toward one root per
//! component, and optionally the factor-2 scaling with a random parity
//! shift that makes lattice-adjacent members always forest-adjacent.
//!
//! A root stands for the unique end of an infinite one-ended tree: mass at a
//! root leaves through a virtual sink above it.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Topology, Vertex};
use crate::seeds::{self, streams};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// One weight in `[0, 1)` per lattice edge, pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights {
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
}

impl EdgeWeights {
    /// Wraps explicit weights; `edges` must be `(lo, hi)` index pairs.
    pub fn new(edges: Vec<(usize, usize)>, weights: Vec<f64>) -> Result<Self> {
        if edges.len() != weights.len() {
            return Err(Error::Domain(format!(
                "{} edges but {} weights",
                edges.len(),
                weights.len()
            )));
        }
        Ok(EdgeWeights { edges, weights })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight_of(&self, u: usize, v: usize) -> Option<f64> {
        let key = (u.min(v), u.max(v));
        self.edges
            .iter()
            .position(|&e| e == key)
            .map(|i| self.weights[i])
    }
}

/// Draws i.i.d. uniform weights for every edge of `spec`, re-drawing on the
/// (measure-zero) event of a collision.
pub fn sample_weights(spec: &LatticeSpec, seed: u64) -> EdgeWeights {
    let edges = spec.edges();
    let mut rng = seeds::rng(seed);
    let mut seen = HashSet::with_capacity(edges.len());
    let weights = edges
        .iter()
        .map(|_| loop {
            let w: f64 = rng.random();
            if seen.insert(w.to_bits()) {
                break w;
            }
        })
        .collect();
    EdgeWeights { edges, weights }
}

/// Kruskal on an arbitrary graph. Returns the indices (into `edges`) of the
/// minimum-weight spanning forest, in ascending weight order.
pub fn minimum_spanning_forest(
    vertex_count: usize,
    edges: &[(usize, usize)],
    weights: &[f64],
) -> Result<Vec<usize>> {
    if edges.len() != weights.len() {
        return Err(Error::Domain("edge and weight counts differ".into()));
    }
    if let Some(&(u, v)) = edges
        .iter()
        .find(|&&(u, v)| u >= vertex_count || v >= vertex_count)
    {
        return Err(Error::Domain(format!(
            "edge ({u},{v}) leaves the vertex range"
        )));
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]));
    if let Some(w) = order.windows(2).find(|w| weights[w[0]] == weights[w[1]]) {
        return Err(Error::Precondition(format!(
            "duplicate edge weight {}",
            weights[w[0]]
        )));
    }
    let mut uf = UnionFind::new(vertex_count);
    Ok(order
        .into_iter()
        .filter(|&i| uf.union(edges[i].0, edges[i].1))
        .collect())
}

/// Non-tree edges that are not the strict maximum on the cycle they close
/// with `tree` (or that close no cycle at all, so the forest is not maximal).
pub fn cycle_rule_violations(
    vertex_count: usize,
    edges: &[(usize, usize)],
    weights: &[f64],
    tree: &[usize],
) -> Vec<usize> {
    let mut adj = vec![Vec::new(); vertex_count];
    for &i in tree {
        let (u, v) = edges[i];
        adj[u].push((v, weights[i]));
        adj[v].push((u, weights[i]));
    }
    let in_tree: HashSet<usize> = tree.iter().copied().collect();
    (0..edges.len())
        .filter(|i| !in_tree.contains(i))
        .filter(|&i| {
            let (u, v) = edges[i];
            match max_on_path(&adj, u, v) {
                Some(m) => m >= weights[i],
                None => true,
            }
        })
        .collect()
}

fn max_on_path(adj: &[Vec<(usize, f64)>], from: usize, to: usize) -> Option<f64> {
    // BFS recording the heaviest edge seen on the path to each vertex
    let mut best = vec![None; adj.len()];
    best[from] = Some(f64::NEG_INFINITY);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        let here = best[u].expect("visited");
        for &(v, w) in &adj[u] {
            if best[v].is_none() {
                best[v] = Some(f64::max(here, w));
                queue.push_back(v);
            }
        }
    }
    best[to]
}

/// Acyclic edge set on a lattice, without an orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct UnrootedForest {
    spec: LatticeSpec,
    member: Vec<bool>,
    edges: Vec<(usize, usize)>,
}

impl UnrootedForest {
    /// Spanning forest with the given edges; rejects cycles and non-edges.
    pub fn spanning(spec: &LatticeSpec, edges: Vec<(usize, usize)>) -> Result<Self> {
        UnrootedForest::new(spec, vec![true; spec.len()], edges)
    }

    pub fn new(spec: &LatticeSpec, member: Vec<bool>, edges: Vec<(usize, usize)>) -> Result<Self> {
        if member.len() != spec.len() {
            return Err(Error::Domain(
                "membership mask does not match lattice".into(),
            ));
        }
        let mut uf = UnionFind::new(spec.len());
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= spec.len() || v >= spec.len() || !spec.are_adjacent(u, v) {
                return Err(Error::Domain(format!("({u},{v}) is not a lattice edge")));
            }
            if !member[u] || !member[v] {
                return Err(Error::Domain(format!(
                    "edge ({u},{v}) touches a non-member"
                )));
            }
            if !uf.union(u, v) {
                return Err(Error::Precondition(format!(
                    "edge ({u},{v}) closes a cycle"
                )));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        Ok(UnrootedForest {
            spec: spec.clone(),
            member,
            edges: normalized,
        })
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_member(&self, idx: usize) -> bool {
        self.member[idx]
    }

    pub fn member_count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.spec.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Connected components of the members, each sorted ascending, ordered
    /// by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.spec.len()];
        let mut out = Vec::new();
        for start in 0..self.spec.len() {
            if !self.member[start] || seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &v in &adj[comp[i]] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Minimum-weight spanning forest of the lattice under `weights`.
pub fn build_msf(spec: &LatticeSpec, weights: &EdgeWeights) -> Result<UnrootedForest> {
    let kept = minimum_spanning_forest(spec.len(), &weights.edges, &weights.weights)?;
    let edges = kept.into_iter().map(|i| weights.edges[i]).collect();
    UnrootedForest::spanning(spec, edges)
}

/// How the root of each component is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootPolicy {
    /// Member closest to the box boundary, ties broken lexicographically.
    /// Falls back to the lexicographic minimum on a torus.
    #[default]
    NearestBoundary,
    LexicographicMin,
}

impl RootPolicy {
    fn pick(self, spec: &LatticeSpec, component: &[usize]) -> usize {
        match self {
            RootPolicy::LexicographicMin => component[0],
            RootPolicy::NearestBoundary => *component
                .iter()
                .min_by_key(|&&v| (spec.boundary_distance(v).unwrap_or(0), v))
                .expect("components are non-empty"),
        }
    }
}

impl std::str::FromStr for RootPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nearest-boundary" => Ok(RootPolicy::NearestBoundary),
            "lexicographic-min" => Ok(RootPolicy::LexicographicMin),
            other => Err(Error::Config(format!("unknown root policy `{other}`"))),
        }
    }
}

/// Forest with every non-root member pointing at its parent.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    spec: LatticeSpec,
    member: Vec<bool>,
    parent: Vec<Option<usize>>,
    roots: Vec<usize>,
    child_start: Vec<usize>,
    child_list: Vec<usize>,
}

impl Forest {
    /// Builds a forest from explicit parent links; every parent must be a
    /// member and parent chains must end at a root.
    pub fn from_parents(
        spec: &LatticeSpec,
        member: Vec<bool>,
        parent: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n = spec.len();
        if member.len() != n || parent.len() != n {
            return Err(Error::Domain(
                "forest arrays do not match lattice size".into(),
            ));
        }
        for (x, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if !member[x] || p >= n || !member[p] {
                    return Err(Error::Consistency(format!(
                        "parent link {} -> {} leaves the member set",
                        spec.vertex(x),
                        if p < n {
                            spec.vertex(p).to_string()
                        } else {
                            p.to_string()
                        }
                    )));
                }
            }
        }
        // cycle detection: 0 unvisited, 1 on stack, 2 reaches a root
        let mut state = vec![0u8; n];
        let mut path = Vec::new();
        for start in (0..n).filter(|&i| member[i]) {
            let mut x = start;
            while state[x] == 0 {
                state[x] = 1;
                path.push(x);
                match parent[x] {
                    Some(p) => x = p,
                    None => break,
                }
            }
            if state[x] == 1 && parent[x].is_some() {
                return Err(Error::Consistency(format!(
                    "parent links form a cycle through {}",
                    spec.vertex(x)
                )));
            }
            for v in path.drain(..) {
                state[v] = 2;
            }
        }
        let roots = (0..n)
            .filter(|&x| member[x] && parent[x].is_none())
            .collect();
        let mut counts = vec![0usize; n + 1];
        for p in parent.iter().flatten() {
            counts[*p + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let child_start = counts.clone();
        let mut child_list = vec![0; child_start[n]];
        let mut fill = counts;
        for (x, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                child_list[fill[p]] = x;
                fill[p] += 1;
            }
        }
        Ok(Forest {
            spec: spec.clone(),
            member,
            parent,
            roots,
            child_start,
            child_list,
        })
    }

    /// A forest with no members.
    pub fn empty(spec: &LatticeSpec) -> Self {
        Forest::from_parents(spec, vec![false; spec.len()], vec![None; spec.len()])
            .expect("empty forest is valid")
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn is_member(&self, idx: usize) -> bool {
        self.member[idx]
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.member.len()).filter(move |&i| self.member[i])
    }

    pub fn member_count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn parent(&self, idx: usize) -> Option<usize> {
        self.parent[idx]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_root(&self, idx: usize) -> bool {
        self.member[idx] && self.parent[idx].is_none()
    }

    /// Children in ascending order.
    pub fn children(&self, idx: usize) -> &[usize] {
        &self.child_list[self.child_start[idx]..self.child_start[idx + 1]]
    }

    /// `(child, parent)` pairs in ascending child order.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c, p)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.parent[u] == Some(v) || self.parent[v] == Some(u)
    }

    /// Members ordered so that every child precedes its parent.
    pub fn bottom_up_order(&self) -> Vec<usize> {
        let mut order = self.roots.clone();
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(self.children(order[i]));
            i += 1;
        }
        order.reverse();
        order
    }

    /// Forgets the orientation.
    pub fn unrooted(&self) -> UnrootedForest {
        UnrootedForest::new(&self.spec, self.member.clone(), self.links().collect())
            .expect("oriented forest edges are acyclic lattice edges")
    }

    /// The same forest on a lattice with different boundary rule.
    pub fn with_topology(&self, topology: Topology) -> Self {
        Forest {
            spec: self.spec.with_topology(topology),
            ..self.clone()
        }
    }
}

/// Orients a single tree toward `root`.
pub fn orient(t: &UnrootedForest, root: &Vertex) -> Result<Forest> {
    let r = t.spec.index(root)?;
    if !t.member[r] {
        return Err(Error::Precondition(format!(
            "root {root} is not a vertex of the tree"
        )));
    }
    let comps = t.components();
    if comps.len() > 1 {
        return Err(Error::Precondition(format!(
            "edge set has {} components; orient each with its own root",
            comps.len()
        )));
    }
    orient_from_roots(t, &[r])
}

/// Orients every component toward the root selected by `policy`.
pub fn orient_components(t: &UnrootedForest, policy: RootPolicy) -> Forest {
    let roots: Vec<usize> = t
        .components()
        .iter()
        .map(|c| policy.pick(&t.spec, c))
        .collect();
    orient_from_roots(t, &roots).expect("one root per component")
}

fn orient_from_roots(t: &UnrootedForest, roots: &[usize]) -> Result<Forest> {
    let adj = t.adjacency();
    let n = t.spec.len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &r in roots {
        seen[r] = true;
        queue.push_back(r);
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    Forest::from_parents(&t.spec, t.member.clone(), parent)
}

/// Independent planar minimum spanning forests, one per layer
/// `Z^2 x {z}` of a lattice of dimension at least 3.
pub fn layer_embed(spec: &LatticeSpec, seed: u64) -> Result<UnrootedForest> {
    if spec.dim() < 3 {
        return Err(Error::Domain(format!(
            "layered embedding needs dimension >= 3, got {}",
            spec.dim()
        )));
    }
    let sides = spec.sides();
    let plane = LatticeSpec::new(vec![sides[0], sides[1]], spec.topology())?;
    let layer_len = plane.len();
    let layers = spec.len() / layer_len;
    let mut edges = Vec::with_capacity(layers * (layer_len - 1));
    for z in 0..layers {
        let w = sample_weights(&plane, seeds::keyed(seed, &[z as u64]));
        let layer = build_msf(&plane, &w)?;
        // a planar index (a, b) sits at a * L1 * layers + b * layers + z
        let lift = |i: usize| {
            let a = i / sides[1];
            let b = i % sides[1];
            (a * sides[1] + b) * layers + z
        };
        edges.extend(layer.edges().iter().map(|&(u, v)| (lift(u), lift(v))));
    }
    UnrootedForest::spanning(spec, edges)
}

/// Factor-2 scaling of an oriented forest, translated by `shift` in
/// `{0,1}^d`: each link `x -> p` becomes `2x+W -> x+p+W -> 2p+W`.
pub fn scale_up(h: &Forest, shift: &Vertex, target: &LatticeSpec) -> Result<Forest> {
    let d = h.spec.dim();
    if shift.dim() != d || shift.coords().iter().any(|&c| c != 0 && c != 1) {
        return Err(Error::Domain(format!(
            "shift {shift} is not in {{0,1}}^{d}"
        )));
    }
    if target.dim() != d {
        return Err(Error::Domain(
            "target lattice has a different dimension".into(),
        ));
    }
    let coords =
        |i: usize| -> Vec<i64> { h.spec.coords_of(i).into_iter().map(|c| c as i64).collect() };
    let place = |c: Vec<i64>| -> Result<usize> {
        let v = Vertex(c);
        if !target.contains(&v) {
            return Err(Error::Domain(format!(
                "scaled vertex {v} does not fit the target lattice"
            )));
        }
        target.index(&v)
    };
    let w = shift.coords();
    let n = target.len();
    let mut member = vec![false; n];
    let mut parent = vec![None; n];
    for x in h.members() {
        let cx = coords(x);
        let image = place(cx.iter().zip(w).map(|(&a, &s)| 2 * a + s).collect())?;
        member[image] = true;
        if let Some(p) = h.parent(x) {
            let cp = coords(p);
            if cx.iter().zip(&cp).map(|(a, b)| a.abs_diff(*b)).sum::<u64>() != 1 {
                return Err(Error::Precondition(format!(
                    "link {} -> {} wraps around the torus and cannot be scaled",
                    h.spec.vertex(x),
                    h.spec.vertex(p)
                )));
            }
            let mid = place(
                cx.iter()
                    .zip(&cp)
                    .zip(w)
                    .map(|((&a, &b), &s)| a + b + s)
                    .collect(),
            )?;
            let pimage = place(cp.iter().zip(w).map(|(&a, &s)| 2 * a + s).collect())?;
            member[mid] = true;
            parent[image] = Some(mid);
            parent[mid] = Some(pimage);
        }
    }
    Forest::from_parents(target, member, parent)
}

/// The lattice with doubled sides, large enough for any shift.
pub fn scaled_spec(base: &LatticeSpec, topology: Topology) -> LatticeSpec {
    LatticeSpec::new(
        base.sides().iter().map(|&l| 2 * l).collect::<Vec<_>>(),
        topology,
    )
    .expect("doubled sides are valid")
}

/// Uniform element of `{0,1}^d`.
pub fn random_shift(d: usize, seed: u64) -> Vertex {
    let mut rng = seeds::rng(seed);
    Vertex((0..d).map(|_| i64::from(rng.random::<bool>())).collect())
}

/// How the parity shift of a scaled forest is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftMode {
    Random,
    Fixed(Vec<i64>),
}

/// Planar minimum spanning tree on `base` (sides halved relative to the
/// result), oriented by `policy`, scaled by 2 and shifted.
///
/// Randomness comes from the `weights` and `shift` substreams of `seed`.
pub fn build_scaled_msf(
    base: &LatticeSpec,
    seed: u64,
    policy: RootPolicy,
    shift: &ShiftMode,
    topology: Topology,
) -> Result<(Forest, Vertex)> {
    let weights = sample_weights(base, seeds::substream(seed, streams::WEIGHTS));
    let tree = orient_components(&build_msf(base, &weights)?, policy);
    let w = match shift {
        ShiftMode::Random => random_shift(base.dim(), seeds::substream(seed, streams::SHIFT)),
        ShiftMode::Fixed(c) => Vertex(c.clone()),
    };
    let target = scaled_spec(base, topology);
    Ok((scale_up(&tree, &w, &target)?, w))
}

/// Per-member subtree height and descendant count (self included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestStats {
    height: Vec<u32>,
    desc: Vec<u64>,
}

impl ForestStats {
    pub fn height(&self, idx: usize) -> u32 {
        self.height[idx]
    }

    /// Number of descendants including `idx`; 0 for non-members.
    pub fn desc(&self, idx: usize) -> u64 {
        self.desc[idx]
    }

    pub fn max_height(&self) -> u32 {
        self.height.iter().copied().max().unwrap_or(0)
    }
}

pub fn stats(f: &Forest) -> ForestStats {
    let n = f.spec.len();
    let mut height = vec![0u32; n];
    let mut desc = vec![0u64; n];
    for x in f.bottom_up_order() {
        desc[x] += 1;
        if let Some(p) = f.parent(x) {
            desc[p] += desc[x];
            height[p] = height[p].max(height[x] + 1);
        }
    }
    ForestStats { height, desc }
}

/// Result of the lattice-adjacency closure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub holds: bool,
    pub violations: Vec<(Vertex, Vertex)>,
}

/// Checks that every lattice edge with both endpoints in the forest is a
/// forest edge.
pub fn verify_property_ii(f: &Forest) -> PropertyReport {
    let violations: Vec<(Vertex, Vertex)> = f
        .spec
        .edges()
        .into_iter()
        .filter(|&(u, v)| f.member[u] && f.member[v] && !f.has_edge(u, v))
        .map(|(u, v)| (f.spec.vertex(u), f.spec.vertex(v)))
        .collect();
    PropertyReport {
        holds: violations.is_empty(),
        violations,
    }
}

/// JSON form of an oriented forest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestJson {
    pub d: usize,
    pub sides: Vec<usize>,
    pub roots: Vec<Vertex>,
    pub parents: Vec<(Vertex, Vertex)>,
}

impl ForestJson {
    pub fn from_forest(f: &Forest) -> Self {
        ForestJson {
            d: f.spec.dim(),
            sides: f.spec.sides().to_vec(),
            roots: f.roots.iter().map(|&r| f.spec.vertex(r)).collect(),
            parents: f
                .links()
                .map(|(c, p)| (f.spec.vertex(c), f.spec.vertex(p)))
                .collect(),
        }
    }

    pub fn to_forest(&self, topology: Topology) -> Result<Forest> {
        if self.sides.len() != self.d {
            return Err(Error::Config("`d` does not match `sides`".into()));
        }
        let spec = LatticeSpec::new(self.sides.clone(), topology)?;
        let mut member = vec![false; spec.len()];
        let mut parent = vec![None; spec.len()];
        for r in &self.roots {
            member[spec.index(r)?] = true;
        }
        for (c, p) in &self.parents {
            let (c, p) = (spec.index(c)?, spec.index(p)?);
            if parent[c].is_some() {
                return Err(Error::Config(format!("{} has two parents", spec.vertex(c))));
            }
            member[c] = true;
            member[p] = true;
            parent[c] = Some(p);
        }
        let f = Forest::from_parents(&spec, member, parent)?;
        if f.roots.len() != self.roots.len() {
            return Err(Error::Config(
                "declared roots do not match the parent links".into(),
            ));
        }
        Ok(f)
    }
}
