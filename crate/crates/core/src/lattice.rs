//! Finite pieces of the integer lattice: boxes and tori with the closed
//! von Neumann neighbourhood.
//!
//! Vertices are stored row-major with the first coordinate most significant,
//! so ascending vertex index coincides with ascending lexicographic order of
//! coordinates. Everything downstream that needs a canonical order (tie
//! breaking, summation order, serialization) relies on this.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary handling of a finite lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// Periodic in every coordinate.
    Torus,
    /// Box; positions outside are absent and behave as permanently empty.
    BoxZero,
    /// Box with a virtual sink attached to forest roots.
    BoxSink,
}

impl Topology {
    pub fn is_box(self) -> bool {
        !matches!(self, Topology::Torus)
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Torus => "torus",
            Topology::BoxZero => "box-zero",
            Topology::BoxSink => "box-sink",
        })
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Topology::Torus),
            "box-zero" => Ok(Topology::BoxZero),
            "box-sink" => Ok(Topology::BoxSink),
            other => Err(Error::Config(format!("unknown topology `{other}`"))),
        }
    }
}

/// A lattice point given by its integer coordinates.
///
/// Ordering is lexicographic on the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub Vec<i64>);

impl Vertex {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Vertex(coords.into())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<const N: usize> From<[i64; N]> for Vertex {
    fn from(c: [i64; N]) -> Self {
        Vertex(c.to_vec())
    }
}

/// Dimension, side lengths and topology of a finite lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct LatticeSpec {
    sides: Vec<usize>,
    topology: Topology,
    #[serde(skip)]
    strides: Vec<usize>,
}

impl LatticeSpec {
    pub fn new(sides: impl Into<Vec<usize>>, topology: Topology) -> Result<Self> {
        let sides = sides.into();
        if sides.is_empty() {
            return Err(Error::Domain("lattice dimension must be at least 1".into()));
        }
        if let Some(bad) = sides.iter().find(|&&l| l < 2) {
            return Err(Error::Domain(format!("side length {bad} is below 2")));
        }
        let strides = strides_for(&sides);
        Ok(LatticeSpec {
            sides,
            topology,
            strides,
        })
    }

    /// A cube with `d` equal sides.
    pub fn cube(d: usize, side: usize, topology: Topology) -> Result<Self> {
        LatticeSpec::new(vec![side; d], topology)
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Same geometry under a different boundary rule.
    pub fn with_topology(&self, topology: Topology) -> Self {
        LatticeSpec {
            topology,
            ..self.clone()
        }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.sides.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &Vertex) -> bool {
        x.dim() == self.dim()
            && x.coords()
                .iter()
                .zip(&self.sides)
                .all(|(&c, &l)| c >= 0 && (c as usize) < l)
    }

    /// Index of an in-lattice vertex. On a torus, coordinates are wrapped first.
    pub fn index(&self, x: &Vertex) -> Result<usize> {
        let x = self.canonicalize(x)?;
        Ok(x.coords()
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum())
    }

    /// Wraps torus coordinates into range; rejects out-of-box vertices.
    pub fn canonicalize(&self, x: &Vertex) -> Result<Vertex> {
        if x.dim() != self.dim() {
            return Err(Error::Domain(format!(
                "vertex {x} has dimension {}, lattice has {}",
                x.dim(),
                self.dim()
            )));
        }
        match self.topology {
            Topology::Torus => Ok(Vertex(
                x.coords()
                    .iter()
                    .zip(&self.sides)
                    .map(|(&c, &l)| c.rem_euclid(l as i64))
                    .collect(),
            )),
            _ if self.contains(x) => Ok(x.clone()),
            _ => Err(Error::Domain(format!(
                "vertex {x} lies outside the box {:?}",
                self.sides
            ))),
        }
    }

    pub fn vertex(&self, idx: usize) -> Vertex {
        Vertex(self.coords_of(idx).into_iter().map(|c| c as i64).collect())
    }

    pub fn coords_of(&self, idx: usize) -> Vec<usize> {
        debug_assert!(idx < self.len());
        self.strides
            .iter()
            .zip(&self.sides)
            .map(|(&s, &l)| (idx / s) % l)
            .collect()
    }

    /// Indices of the closed neighbourhood N(x), ascending (= lexicographic).
    pub fn neighbor_indices(&self, idx: usize, out: &mut Vec<usize>) {
        out.clear();
        out.push(idx);
        for (&l, &s) in self.sides.iter().zip(&self.strides) {
            let c = (idx / s) % l;
            if c > 0 {
                out.push(idx - s);
            } else if self.topology == Topology::Torus {
                out.push(idx + (l - 1) * s);
            }
            if c + 1 < l {
                out.push(idx + s);
            } else if self.topology == Topology::Torus {
                out.push(idx - (l - 1) * s);
            }
        }
        out.sort_unstable();
        out.dedup();
    }

    /// The closed neighbourhood N(x) = {y : |x - y| <= 1} in lexicographic order.
    pub fn neighbors(&self, x: &Vertex) -> Result<Vec<Vertex>> {
        let idx = self.index(x)?;
        let mut buf = Vec::with_capacity(2 * self.dim() + 1);
        self.neighbor_indices(idx, &mut buf);
        Ok(buf.into_iter().map(|i| self.vertex(i)).collect())
    }

    /// Every nearest-neighbour edge once, as `(lo, hi)` index pairs in
    /// ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.len() * self.dim());
        let mut buf = Vec::new();
        for u in 0..self.len() {
            self.neighbor_indices(u, &mut buf);
            edges.extend(buf.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        edges
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.distance(u, v) == 1
    }

    /// 1-norm distance, measured around the torus where applicable.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        let mut total = 0;
        for (&l, &s) in self.sides.iter().zip(&self.strides) {
            let a = (u / s) % l;
            let b = (v / s) % l;
            let delta = a.abs_diff(b);
            total += match self.topology {
                Topology::Torus => delta.min(l - delta),
                _ => delta,
            };
        }
        total
    }

    /// Number of unit steps from `idx` to the nearest position outside the
    /// box. `None` on a torus.
    pub fn boundary_distance(&self, idx: usize) -> Option<usize> {
        if self.topology == Topology::Torus {
            return None;
        }
        self.sides
            .iter()
            .zip(&self.strides)
            .map(|(&l, &s)| {
                let c = (idx / s) % l;
                (c + 1).min(l - c)
            })
            .min()
    }

    /// All in-lattice vertices within 1-norm distance `radius` of `center`.
    pub fn window(&self, center: &Vertex, radius: usize) -> Result<Vec<Vertex>> {
        Ok(self
            .window_indices(self.index(center)?, radius)
            .into_iter()
            .map(|i| self.vertex(i))
            .collect())
    }

    pub fn window_indices(&self, center: usize, radius: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.distance(center, v) <= radius)
            .collect()
    }

    /// The central vertex (coordinates `L_i / 2`).
    pub fn center(&self) -> Vertex {
        Vertex(self.sides.iter().map(|&l| (l / 2) as i64).collect())
    }

    /// Vertices whose box distance to the boundary is at least a quarter of
    /// the shortest side. On a torus every vertex is interior.
    pub fn interior_indices(&self) -> Vec<usize> {
        let min_side = *self.sides.iter().min().expect("non-empty sides");
        let margin = min_side / 4;
        (0..self.len())
            .filter(|&v| match self.topology {
                Topology::Torus => true,
                _ => self.sides.iter().zip(&self.strides).all(|(&l, &s)| {
                    let c = (v / s) % l;
                    c >= margin && l - 1 - c >= margin
                }),
            })
            .collect()
    }
}

fn strides_for(sides: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; sides.len()];
    for i in (0..sides.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sides[i + 1];
    }
    strides
}

// Strides are derived data; rebuild them after deserialization.
#[derive(Deserialize)]
struct RawSpec {
    sides: Vec<usize>,
    topology: Topology,
}

impl TryFrom<RawSpec> for LatticeSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        LatticeSpec::new(raw.sides, raw.topology)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(list: &[[i64; 2]]) -> Vec<Vertex> {
        list.iter().map(|&c| Vertex::from(c)).collect()
    }

    #[test]
    fn interior_neighbourhood_is_sorted_von_neumann_plus_self() {
        let spec = LatticeSpec::cube(2, 5, Topology::BoxZero).unwrap();
        let n = spec.neighbors(&Vertex::from([2, 2])).unwrap();
        assert_eq!(n, vs(&[[1, 2], [2, 1], [2, 2], [2, 3], [3, 2]]));
    }

    #[test]
    fn torus_wraps() {
        let spec = LatticeSpec::cube(2, 4, Topology::Torus).unwrap();
        let n = spec.neighbors(&Vertex::from([0, 0])).unwrap();
        assert_eq!(n, vs(&[[0, 0], [0, 1], [0, 3], [1, 0], [3, 0]]));
    }

    #[test]
    fn box_corner_is_truncated() {
        for topo in [Topology::BoxZero, Topology::BoxSink] {
            let spec = LatticeSpec::cube(2, 5, topo).unwrap();
            let n = spec.neighbors(&Vertex::from([0, 0])).unwrap();
            assert_eq!(n, vs(&[[0, 0], [0, 1], [1, 0]]));
        }
    }

    #[test]
    fn out_of_lattice_vertex_is_a_domain_error() {
        let spec = LatticeSpec::cube(2, 5, Topology::BoxZero).unwrap();
        assert!(matches!(
            spec.neighbors(&Vertex::from([5, 0])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            spec.neighbors(&Vertex::from([0, 0, 0])),
            Err(Error::Domain(_))
        ));
        // the torus canonicalizes instead
        let torus = spec.with_topology(Topology::Torus);
        assert_eq!(
            torus.index(&Vertex::from([5, -1])).unwrap(),
            torus.index(&Vertex::from([0, 4])).unwrap()
        );
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(LatticeSpec::new(vec![], Topology::Torus).is_err());
        assert!(LatticeSpec::new(vec![4, 1], Topology::Torus).is_err());
    }

    #[test]
    fn window_sizes() {
        let spec = LatticeSpec::cube(2, 9, Topology::BoxZero).unwrap();
        let c = Vertex::from([4, 4]);
        assert_eq!(spec.window(&c, 0).unwrap(), vec![c.clone()]);
        let w1 = spec.window(&c, 1).unwrap();
        assert_eq!(w1, spec.neighbors(&c).unwrap());
        // 1-norm ball of radius 2 in Z^2, counted by enumerating offsets
        let expected = (-2i64..=2)
            .flat_map(|a| (-2i64..=2).map(move |b| (a, b)))
            .filter(|(a, b)| a.abs() + b.abs() <= 2)
            .count();
        assert_eq!(expected, 13);
        assert_eq!(spec.window(&c, 2).unwrap().len(), expected);
    }

    #[test]
    fn index_order_is_lexicographic() {
        let spec = LatticeSpec::new(vec![3, 4, 2], Topology::BoxZero).unwrap();
        let verts: Vec<Vertex> = (0..spec.len()).map(|i| spec.vertex(i)).collect();
        let mut sorted = verts.clone();
        sorted.sort();
        assert_eq!(verts, sorted);
        for (i, v) in verts.iter().enumerate() {
            assert_eq!(spec.index(v).unwrap(), i);
        }
    }

    #[test]
    fn edge_counts() {
        let b = LatticeSpec::cube(2, 2, Topology::BoxZero).unwrap();
        assert_eq!(b.edges().len(), 4);
        let b = LatticeSpec::new(vec![2, 3], Topology::BoxZero).unwrap();
        assert_eq!(b.edges().len(), 7);
        let t = LatticeSpec::cube(2, 4, Topology::Torus).unwrap();
        assert_eq!(t.edges().len(), 32);
    }

    #[test]
    fn boundary_distance_in_box() {
        let spec = LatticeSpec::cube(2, 6, Topology::BoxSink).unwrap();
        assert_eq!(
            spec.boundary_distance(spec.index(&Vertex::from([0, 3])).unwrap()),
            Some(1)
        );
        assert_eq!(
            spec.boundary_distance(spec.index(&Vertex::from([2, 3])).unwrap()),
            Some(3)
        );
        assert_eq!(
            spec.with_topology(Topology::Torus).boundary_distance(0),
            None
        );
    }

    #[test]
    fn serde_roundtrip_rebuilds_strides() {
        let spec = LatticeSpec::new(vec![3, 5], Topology::BoxSink).unwrap();
        let json = serde_json::to_value(&spec).unwrap();
        let back: LatticeSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.index(&Vertex::from([2, 4])).unwrap(), 14);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn spec_strategy() -> impl Strategy<Value = LatticeSpec> {
            (
                prop::collection::vec(2usize..6, 1..4),
                prop_oneof![
                    Just(Topology::Torus),
                    Just(Topology::BoxZero),
                    Just(Topology::BoxSink)
                ],
            )
                .prop_map(|(sides, t)| LatticeSpec::new(sides, t).unwrap())
        }

        proptest! {
            #[test]
            fn neighbourhood_laws(spec in spec_strategy(), seed in any::<u64>()) {
                let x = (seed as usize) % spec.len();
                let mut nx = Vec::new();
                spec.neighbor_indices(x, &mut nx);
                prop_assert!(nx.contains(&x));
                prop_assert!(nx.len() <= 2 * spec.dim() + 1);
                prop_assert!(nx.windows(2).all(|w| w[0] < w[1]));
                let interior = spec.topology() == Topology::Torus && spec.sides().iter().all(|&l| l >= 3)
                    || spec.boundary_distance(x).is_some_and(|b| b >= 2);
                if interior {
                    prop_assert_eq!(nx.len(), 2 * spec.dim() + 1);
                }
                let mut ny = Vec::new();
                for &y in &nx {
                    spec.neighbor_indices(y, &mut ny);
                    prop_assert!(ny.contains(&x));
                }
            }
        }
    }
}
