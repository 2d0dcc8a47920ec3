//! Initial configurations `C_0`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ResourceField;
use crate::forest::{stats, Forest};
use crate::lattice::{LatticeSpec, Vertex};
use crate::quantity::Quantity;
use crate::seeds;

/// Number representation used for a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueMode {
    #[default]
    ExactInteger,
    Float,
}

/// Independent per-vertex laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum IidDistribution {
    Uniform {
        low: f64,
        high: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Uniform on the integers `low..=high`.
    Integer {
        low: i64,
        high: i64,
    },
}

impl IidDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            IidDistribution::Uniform { low, high } => {
                if !(low.is_finite() && high.is_finite()) || low > high {
                    return Err(Error::Domain(format!(
                        "invalid uniform range [{low}, {high})"
                    )));
                }
                if low < 0.0 {
                    return Err(Error::Domain("uniform law has negative support".into()));
                }
            }
            IidDistribution::Exponential { rate } => {
                if !(rate.is_finite() && rate > 0.0) {
                    return Err(Error::Domain(format!(
                        "exponential rate {rate} must be positive"
                    )));
                }
            }
            IidDistribution::Integer { low, high } => {
                if low > high {
                    return Err(Error::Domain(format!("empty integer range {low}..={high}")));
                }
                if low < 0 {
                    return Err(Error::Domain("integer law has negative support".into()));
                }
            }
        }
        Ok(())
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            IidDistribution::Uniform { low, high } if low == high => low,
            IidDistribution::Uniform { low, high } => rng.random_range(low..high),
            IidDistribution::Exponential { rate } => {
                Exp::new(rate).expect("validated rate").sample(rng)
            }
            IidDistribution::Integer { low, high } => rng.random_range(low..=high) as f64,
        }
    }
}

/// Which initial configuration a run starts from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitSpec {
    /// Number of forest descendants on members, zero elsewhere.
    Descendants,
    Iid(IidDistribution),
    /// CSV rows `x_1,...,x_d,value`; unlisted vertices hold 0.
    File {
        path: PathBuf,
    },
}

/// `C_0(x)` = number of descendants of `x` (itself included) for forest
/// members, 0 for every other vertex.
pub fn descendant_init<Q: Quantity>(f: &Forest, spec: &LatticeSpec) -> Result<ResourceField<Q>> {
    if f.spec().sides() != spec.sides() {
        return Err(Error::Domain(format!(
            "forest lives on {:?}, lattice is {:?}",
            f.spec().sides(),
            spec.sides()
        )));
    }
    let s = stats(f);
    let values = (0..spec.len())
        .map(|x| {
            if f.is_member(x) {
                Q::from_u64(s.desc(x))
            } else {
                Q::zero()
            }
        })
        .collect();
    ResourceField::from_values(spec, values)
}

/// Independent draws from `dist` at every vertex, in index order, from the
/// stream seeded by `seed`.
pub fn iid_init<Q: Quantity>(
    spec: &LatticeSpec,
    dist: &IidDistribution,
    seed: u64,
) -> Result<ResourceField<Q>> {
    dist.validate()?;
    let mut rng = seeds::rng(seed);
    let values = (0..spec.len())
        .map(|_| Q::from_f64(dist.sample(&mut rng)))
        .collect::<Result<Vec<Q>>>()?;
    ResourceField::from_values(spec, values)
}

/// Reads `x_1,...,x_d,value` rows. A non-numeric first row is taken as a
/// header; lines starting with `#` are comments.
pub fn file_init<Q: Quantity>(spec: &LatticeSpec, path: &Path) -> Result<ResourceField<Q>> {
    let file = std::fs::File::open(path)?;
    read_field_csv(spec, file)
}

pub fn read_field_csv<Q: Quantity, R: std::io::Read>(
    spec: &LatticeSpec,
    reader: R,
) -> Result<ResourceField<Q>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let d = spec.dim();
    let mut values = vec![Q::zero(); spec.len()];
    let mut seen = HashSet::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != d + 1 {
            return Err(Error::Config(format!(
                "row {}: expected {} columns, found {}",
                row + 1,
                d + 1,
                record.len()
            )));
        }
        let coords: std::result::Result<Vec<i64>, _> =
            record.iter().take(d).map(str::parse).collect();
        let coords = match coords {
            Ok(c) => c,
            Err(_) if row == 0 => continue,
            Err(e) => {
                return Err(Error::Config(format!(
                    "row {}: bad coordinate: {e}",
                    row + 1
                )))
            }
        };
        let v = Vertex(coords);
        if !spec.contains(&v) {
            return Err(Error::Domain(format!(
                "row {}: vertex {v} lies outside the lattice",
                row + 1
            )));
        }
        let idx = spec.index(&v)?;
        if !seen.insert(idx) {
            return Err(Error::Config(format!(
                "row {}: vertex {v} listed twice",
                row + 1
            )));
        }
        values[idx] = Q::parse(&record[d])?;
    }
    ResourceField::from_values(spec, values)
}

/// Builds `C_0` for an [`InitSpec`]. `forest` is required for
/// [`InitSpec::Descendants`].
pub fn initial_field<Q: Quantity>(
    spec: &LatticeSpec,
    init: &InitSpec,
    forest: Option<&Forest>,
    seed: u64,
) -> Result<ResourceField<Q>> {
    match init {
        InitSpec::Descendants => {
            if !Q::EXACT {
                return Err(Error::Config(
                    "descendant initialization requires exact-integer mode".into(),
                ));
            }
            let f = forest
                .ok_or_else(|| Error::Config("descendant initialization needs a forest".into()))?;
            descendant_init(f, spec)
        }
        InitSpec::Iid(dist) => iid_init(spec, dist, seed),
        InitSpec::File { path } => file_init(spec, path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{orient, UnrootedForest};
    use crate::lattice::Topology;

    fn star() -> Forest {
        let spec = LatticeSpec::cube(2, 3, Topology::BoxSink).unwrap();
        let member = vec![false, true, false, true, true, true, false, true, false];
        let t = UnrootedForest::new(&spec, member, vec![(1, 4), (3, 4), (4, 5), (4, 7)]).unwrap();
        orient(&t, &Vertex::from([1, 1])).unwrap()
    }

    #[test]
    fn descendant_counts_on_star() {
        let f = star();
        let c: ResourceField<u64> = descendant_init(&f, f.spec()).unwrap();
        assert_eq!(c.values(), &[0, 1, 0, 1, 5, 1, 0, 1, 0]);
        assert_eq!(*c.sink(), 0);
        for x in f.members() {
            let child_sum: u64 = f.children(x).iter().map(|&y| c.get(y)).sum();
            assert_eq!(child_sum, c.get(x) - 1);
        }
    }

    #[test]
    fn descendant_counts_on_path() {
        let spec = LatticeSpec::new(vec![3], Topology::BoxSink).unwrap();
        let t = UnrootedForest::spanning(&spec, vec![(0, 1), (1, 2)]).unwrap();
        let f = orient(&t, &Vertex::from([2])).unwrap();
        let c: ResourceField<num_bigint::BigUint> = descendant_init(&f, &spec).unwrap();
        let got: Vec<String> = c.values().iter().map(|v| v.to_string()).collect();
        assert_eq!(got, ["1", "2", "3"]);
    }

    #[test]
    fn iid_integer_over_zero_is_empty() {
        let spec = LatticeSpec::cube(2, 8, Topology::Torus).unwrap();
        let c: ResourceField<u64> =
            iid_init(&spec, &IidDistribution::Integer { low: 0, high: 0 }, 5).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn iid_is_deterministic() {
        let spec = LatticeSpec::cube(2, 8, Topology::Torus).unwrap();
        let d = IidDistribution::Exponential { rate: 2.0 };
        let a: ResourceField<f64> = iid_init(&spec, &d, 5).unwrap();
        let b: ResourceField<f64> = iid_init(&spec, &d, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_mean_on_64_square() {
        // sd of the mean is 1/sqrt(12 * 4096) ~ 0.0045, tolerance ~4.4 sd
        let spec = LatticeSpec::cube(2, 64, Topology::Torus).unwrap();
        let c: ResourceField<f64> = iid_init(
            &spec,
            &IidDistribution::Uniform {
                low: 0.0,
                high: 1.0,
            },
            17,
        )
        .unwrap();
        let all: Vec<usize> = (0..spec.len()).collect();
        assert!((c.mean_over(&all) - 0.5).abs() < 0.02);
    }

    #[test]
    fn negative_support_is_rejected() {
        let spec = LatticeSpec::cube(1, 4, Topology::Torus).unwrap();
        let bad = IidDistribution::Uniform {
            low: -1.0,
            high: 1.0,
        };
        assert!(iid_init::<f64>(&spec, &bad, 0).is_err());
        let bad = IidDistribution::Integer { low: -2, high: 3 };
        assert!(iid_init::<u64>(&spec, &bad, 0).is_err());
        assert!(iid_init::<f64>(&spec, &IidDistribution::Exponential { rate: 0.0 }, 0).is_err());
    }

    #[test]
    fn csv_input() {
        let spec = LatticeSpec::cube(2, 3, Topology::BoxZero).unwrap();
        let text = "x,y,value\n0,1,4\n# comment\n2,2,7\n";
        let c: ResourceField<u64> = read_field_csv(&spec, text.as_bytes()).unwrap();
        assert_eq!(c.values(), &[0, 4, 0, 0, 0, 0, 0, 0, 7]);
        assert!(read_field_csv::<u64, _>(&spec, "3,0,1\n".as_bytes()).is_err());
        assert!(read_field_csv::<u64, _>(&spec, "0,0,1\n0,0,2\n".as_bytes()).is_err());
        assert!(read_field_csv::<f64, _>(&spec, "0,0,inf\n".as_bytes()).is_err());
        assert!(read_field_csv::<f64, _>(&spec, "0,0,-2\n".as_bytes()).is_err());
    }

    #[test]
    fn descendants_refuse_float_mode() {
        let f = star();
        let spec = f.spec().clone();
        assert!(initial_field::<f64>(&spec, &InitSpec::Descendants, Some(&f), 0).is_err());
        assert!(initial_field::<u64>(&spec, &InitSpec::Descendants, None, 0).is_err());
    }
}
