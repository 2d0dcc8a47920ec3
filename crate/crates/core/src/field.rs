use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Vertex};
use crate::quantity::Quantity;

/// The configuration `C_n`: one amount per lattice vertex plus the mass
/// collected by the sink so far.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceField<Q> {
    spec: LatticeSpec,
    values: Vec<Q>,
    sink: Q,
    step: u64,
}

impl<Q: Quantity> ResourceField<Q> {
    pub fn zeros(spec: &LatticeSpec) -> Self {
        ResourceField {
            spec: spec.clone(),
            values: vec![Q::zero(); spec.len()],
            sink: Q::zero(),
            step: 0,
        }
    }

    /// Wraps values given in vertex-index order. Float values must be
    /// finite and nonnegative.
    pub fn from_values(spec: &LatticeSpec, values: Vec<Q>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Domain(format!(
                "{} values for a lattice of {} vertices",
                values.len(),
                spec.len()
            )));
        }
        if !Q::EXACT {
            if let Some(v) = values
                .iter()
                .find(|v| !v.to_f64().is_finite() || v.to_f64() < 0.0)
            {
                return Err(Error::Domain(format!(
                    "resource amount {v} is not finite and nonnegative"
                )));
            }
        }
        Ok(ResourceField {
            spec: spec.clone(),
            values,
            sink: Q::zero(),
            step: 0,
        })
    }

    pub(crate) fn from_parts(spec: LatticeSpec, values: Vec<Q>, sink: Q, step: u64) -> Self {
        ResourceField {
            spec,
            values,
            sink,
            step,
        }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn get(&self, idx: usize) -> &Q {
        &self.values[idx]
    }

    pub fn at(&self, x: &Vertex) -> Result<&Q> {
        Ok(&self.values[self.spec.index(x)?])
    }

    pub fn set(&mut self, idx: usize, value: Q) {
        self.values[idx] = value;
    }

    pub fn sink(&self) -> &Q {
        &self.sink
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    /// Sum over lattice vertices, excluding the sink.
    pub fn total(&self) -> Result<Q> {
        self.values
            .iter()
            .try_fold(Q::zero(), |acc, v| acc.checked_sum(v))
    }

    /// Lattice total plus sink; conserved by the dynamics.
    pub fn grand_total(&self) -> Result<Q> {
        self.total()?.checked_sum(&self.sink)
    }

    pub fn positive_count(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn positive_indices(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| !self.values[i].is_zero())
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Mean over the given vertices, as a float.
    pub fn mean_over(&self, indices: &[usize]) -> f64 {
        if indices.is_empty() {
            return 0.0;
        }
        indices
            .iter()
            .map(|&i| self.values[i].to_f64())
            .sum::<f64>()
            / indices.len() as f64
    }

    pub fn max_value(&self) -> Q {
        self.values
            .iter()
            .fold(Q::zero(), |m, v| if *v > m { v.clone() } else { m })
    }
}
