//! Domain types for dynamic multi-resource allocation.
//!
//! Agents and resources are indexed from zero throughout the Rust API. A
//! step `k` counts the agents present, so it runs from `1` to `n`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("demand of agent {agent} for resource {resource} is not positive")]
    NonPositiveDemand { agent: usize, resource: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("instance declares {n} agents but lists {found} demand vectors")]
    LengthMismatch { n: usize, found: usize },
    #[error("instance has no agents")]
    NoAgents,
    #[error("demand vectors must cover at least one resource")]
    NoResources,
    #[error("demand vector of agent {agent} is not normalized (largest coordinate must be exactly 1)")]
    NotNormalized { agent: usize },
    #[error("demand vector of agent {agent} records dominant resource {recorded}, canonical is {expected}")]
    WrongDominant {
        agent: usize,
        recorded: usize,
        expected: usize,
    },
    #[error("step {step} is outside 1..={n}")]
    StepOutOfRange { step: usize, n: usize },
    #[error("share vector for step {step} has {found} entries")]
    ShareLengthMismatch { step: usize, found: usize },
    #[error("resource {resource} is allocated beyond its step-{step} capacity")]
    CapacityExceeded { step: usize, resource: usize },
}

/// Unnormalized per-task demands `D_ir`, each a fraction of total capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDemandMatrix {
    rows: Vec<Vec<Rational>>,
}

impl RawDemandMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, ModelError> {
        let width = rows.first().map_or(0, Vec::len);
        if !rows.is_empty() && width == 0 {
            return Err(ModelError::NoResources);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(ModelError::RaggedMatrix {
                    row: i,
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(r) = row.iter().position(|v| !v.is_positive()) {
                return Err(ModelError::NonPositiveDemand { agent: i, resource: r });
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }
}

/// A normalized demand vector: every coordinate lies in `(0, 1]` and the
/// dominant coordinate is exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DemandVector {
    coords: Vec<Rational>,
    dominant: usize,
}

impl DemandVector {
    /// Accepts an already normalized vector.
    pub fn new(coords: Vec<Rational>) -> Result<Self, ModelError> {
        let v = Self::unchecked(coords);
        v.check(0)?;
        Ok(v)
    }

    /// Builds a vector without checking it; `Instance::validate` reports
    /// anything wrong.
    pub fn unchecked(coords: Vec<Rational>) -> Self {
        let dominant = dominant_index(&coords);
        Self { coords, dominant }
    }

    /// Scales `raw` so its largest coordinate becomes one.
    pub fn normalize(raw: &[Rational]) -> Result<Self, ModelError> {
        if raw.is_empty() {
            return Err(ModelError::NoResources);
        }
        if let Some(r) = raw.iter().position(|v| !v.is_positive()) {
            return Err(ModelError::NonPositiveDemand { agent: 0, resource: r });
        }
        let dominant = dominant_index(raw);
        let peak = raw[dominant].clone();
        let coords = raw.iter().map(|v| v / &peak).collect();
        Ok(Self { coords, dominant })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dominant(&self) -> usize {
        self.dominant
    }

    pub fn resources(&self) -> usize {
        self.coords.len()
    }

    fn check(&self, agent: usize) -> Result<(), ModelError> {
        if self.coords.is_empty() {
            return Err(ModelError::NoResources);
        }
        if let Some(r) = self.coords.iter().position(|v| !v.is_positive()) {
            return Err(ModelError::NonPositiveDemand { agent, resource: r });
        }
        let expected = dominant_index(&self.coords);
        if !self.coords[expected].is_one() {
            return Err(ModelError::NotNormalized { agent });
        }
        if self.dominant != expected {
            return Err(ModelError::WrongDominant {
                agent,
                recorded: self.dominant,
                expected,
            });
        }
        Ok(())
    }
}

// Smallest index achieving the maximum.
fn dominant_index(coords: &[Rational]) -> usize {
    let mut best = 0;
    for (r, v) in coords.iter().enumerate().skip(1) {
        if *v > coords[best] {
            best = r;
        }
    }
    best
}

/// Normalizes every row of `raw`, dividing by the row's dominant demand.
pub fn normalize(raw: &RawDemandMatrix) -> Result<Vec<DemandVector>, ModelError> {
    raw.rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            DemandVector::normalize(row).map_err(|e| match e {
                ModelError::NonPositiveDemand { resource, .. } => {
                    ModelError::NonPositiveDemand { agent: i, resource }
                }
                other => other,
            })
        })
        .collect()
}

/// The arrival sequence: agent `i` arrives at step `i + 1`, and capacity
/// released at step `k` is `k/n` of every resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    demands: Vec<DemandVector>,
}

impl Instance {
    pub fn new(n: usize, demands: Vec<DemandVector>) -> Result<Self, ModelError> {
        let instance = Self { n, demands };
        instance.validate()?;
        Ok(instance)
    }

    /// Normalizes raw rows and builds an instance with `n = rows.len()`.
    pub fn from_raw(raw: &RawDemandMatrix) -> Result<Self, ModelError> {
        let demands = normalize(raw)?;
        Self::new(demands.len(), demands)
    }

    /// Builds an instance from rows given as `(numerator, denominator)`.
    pub fn from_fractions(rows: &[Vec<(i64, i64)>]) -> Result<Self, ModelError> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|&(p, q)| crate::rational::ratio(p, q)).collect())
            .collect();
        Self::from_raw(&RawDemandMatrix::new(rows)?)
    }

    #[cfg(test)]
    pub(crate) fn unchecked(n: usize, demands: Vec<DemandVector>) -> Self {
        Self { n, demands }
    }

    /// Reports the first broken invariant, scanning agents in arrival order.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::NoAgents);
        }
        if self.demands.len() != self.n {
            return Err(ModelError::LengthMismatch {
                n: self.n,
                found: self.demands.len(),
            });
        }
        let m = self.demands[0].resources();
        for (i, d) in self.demands.iter().enumerate() {
            if d.resources() != m {
                return Err(ModelError::RaggedMatrix {
                    row: i,
                    expected: m,
                    found: d.resources(),
                });
            }
            d.check(i)?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.demands[0].resources()
    }

    pub fn demands(&self) -> &[DemandVector] {
        &self.demands
    }

    pub fn demand(&self, agent: usize) -> &DemandVector {
        &self.demands[agent]
    }

    /// Capacity `k/n` released at step `k`.
    pub fn capacity(&self, k: usize) -> Rational {
        crate::rational::ratio(k as i64, self.n as i64)
    }

    pub fn check_step(&self, k: usize) -> Result<(), ModelError> {
        if k == 0 || k > self.n {
            return Err(ModelError::StepOutOfRange { step: k, n: self.n });
        }
        Ok(())
    }
}

/// Dominant shares `x_1..x_k` of the agents present at step `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShareVector {
    step: usize,
    shares: Vec<Rational>,
}

impl ShareVector {
    pub fn new(step: usize, shares: Vec<Rational>) -> Result<Self, ModelError> {
        if shares.len() != step {
            return Err(ModelError::ShareLengthMismatch {
                step,
                found: shares.len(),
            });
        }
        Ok(Self { step, shares })
    }

    /// The empty vector preceding step one.
    pub fn initial() -> Self {
        Self {
            step: 0,
            shares: Vec::new(),
        }
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn shares(&self) -> &[Rational] {
        &self.shares
    }

    pub fn share(&self, agent: usize) -> &Rational {
        &self.shares[agent]
    }

    pub fn into_shares(self) -> Vec<Rational> {
        self.shares
    }

    pub fn sum(&self) -> Rational {
        self.shares.iter().fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Per-agent, per-resource amounts `A_ir = x_i * d_ir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    step: usize,
    entries: Vec<Vec<Rational>>,
}

impl Allocation {
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// Total amount of resource `r` handed out.
    pub fn column_sum(&self, r: usize) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, row| acc + &row[r])
    }
}

/// Expands dominant shares into a non-wasteful allocation and checks that
/// no resource exceeds the capacity released at that step.
pub fn allocation_from_shares(
    instance: &Instance,
    shares: &ShareVector,
) -> Result<Allocation, ModelError> {
    let k = shares.step();
    instance.check_step(k)?;
    let entries: Vec<Vec<Rational>> = shares
        .shares()
        .iter()
        .zip(instance.demands())
        .map(|(x, d)| d.coords().iter().map(|c| x * c).collect())
        .collect();
    let alloc = Allocation { step: k, entries };
    let cap = instance.capacity(k);
    for r in 0..instance.m() {
        if alloc.column_sum(r) > cap {
            return Err(ModelError::CapacityExceeded { step: k, resource: r });
        }
    }
    Ok(alloc)
}

/// Amount of resource `r` consumed by `shares` (agents beyond the vector's
/// length consume nothing).
pub fn resource_usage(instance: &Instance, shares: &[Rational], r: usize) -> Rational {
    shares
        .iter()
        .zip(instance.demands())
        .fold(Rational::zero(), |acc, (x, d)| acc + x * &d.coords()[r])
}
