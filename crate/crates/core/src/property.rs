//! Property checks on step solutions.

use std::fmt;

use num_traits::Zero;

use crate::dynamic::StepSolution;
use crate::model::{resource_usage, Instance, ShareVector};
use crate::rational::{exact_string, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// Every present agent holds at least `1/n`.
    SharingIncentives,
    /// Some resource is allocated to exactly `k/n`.
    ParetoSaturation,
    /// No resource exceeds `k/n`.
    Capacity,
    /// Shares never decrease between steps.
    Irrevocability,
    /// Earlier arrivals hold at least as much as later ones.
    Monotonicity,
    /// `x_i = max(M, previous x_i)` and the split is canonical.
    Closure,
    /// Bisection, naive scan and LP return identical steps.
    OracleEquivalence,
    /// Offline maxsum objective is at most `m k / n`.
    MaxsumBound,
    /// Online objective does not beat the offline optimum.
    RatioUpper,
    /// Online-to-offline ratio is at least `1/m`.
    RatioLower,
    /// The smallest share belongs to the newest agent.
    LastAgentMinimum,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::SharingIncentives => "sharing-incentives",
            Property::ParetoSaturation => "pareto-saturation",
            Property::Capacity => "capacity",
            Property::Irrevocability => "irrevocability",
            Property::Monotonicity => "monotonicity",
            Property::Closure => "closure",
            Property::OracleEquivalence => "oracle-equivalence",
            Property::MaxsumBound => "maxsum-bound",
            Property::RatioUpper => "ratio-upper-bound",
            Property::RatioLower => "ratio-lower-bound",
            Property::LastAgentMinimum => "last-agent-minimum",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed property, located by step and, where meaningful, by agent or
/// resource (zero-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: Property,
    pub step: usize,
    pub agent: Option<usize>,
    pub resource: Option<usize>,
    pub detail: String,
}

impl Violation {
    pub fn new(property: Property, step: usize, detail: impl Into<String>) -> Self {
        Self {
            property,
            step,
            agent: None,
            resource: None,
            detail: detail.into(),
        }
    }

    pub fn agent(mut self, agent: usize) -> Self {
        self.agent = Some(agent);
        self
    }

    pub fn resource(mut self, resource: usize) -> Self {
        self.resource = Some(resource);
        self
    }
}

// Messages use one-based agent and resource numbers.
impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at step {}", self.property, self.step)?;
        if let Some(a) = self.agent {
            write!(f, ", agent {}", a + 1)?;
        }
        if let Some(r) = self.resource {
            write!(f, ", resource {}", r + 1)?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

impl std::error::Error for Violation {}

/// Resources whose usage equals `k/n` exactly.
pub fn saturated_resources(instance: &Instance, shares: &ShareVector) -> Vec<usize> {
    let cap = instance.capacity(shares.step());
    (0..instance.m())
        .filter(|&r| resource_usage(instance, shares.shares(), r) == cap)
        .collect()
}

/// Checks one step against its predecessor: sharing incentives, capacity,
/// irrevocability, monotonicity, saturation and the max-closure form.
pub fn check_step(
    instance: &Instance,
    prev: &ShareVector,
    sol: &StepSolution,
) -> Result<(), Violation> {
    let k = sol.step();
    let x = sol.shares.shares();
    if prev.step() + 1 != k || x.len() != k {
        return Err(Violation::new(
            Property::Closure,
            k,
            format!("step {k} does not follow step {}", prev.step()),
        ));
    }
    let floor = instance.capacity(1);
    if let Some(i) = x.iter().position(|v| *v < floor) {
        return Err(Violation::new(
            Property::SharingIncentives,
            k,
            format!("share {} below 1/n", exact_string(&x[i])),
        )
        .agent(i));
    }
    let cap = instance.capacity(k);
    let mut saturated = false;
    for r in 0..instance.m() {
        let used = resource_usage(instance, x, r);
        if used > cap {
            return Err(Violation::new(
                Property::Capacity,
                k,
                format!("usage {} exceeds {}", exact_string(&used), exact_string(&cap)),
            )
            .resource(r));
        }
        saturated |= used == cap;
    }
    if let Some(i) = (0..prev.step()).find(|&i| x[i] < *prev.share(i)) {
        return Err(Violation::new(Property::Irrevocability, k, "share decreased").agent(i));
    }
    if let Some(i) = (1..k).find(|&i| x[i] > x[i - 1]) {
        return Err(Violation::new(
            Property::Monotonicity,
            k,
            "later arrival holds more than its predecessor",
        )
        .agent(i));
    }
    if !saturated {
        return Err(Violation::new(
            Property::ParetoSaturation,
            k,
            "no resource is allocated to its released capacity",
        ));
    }
    let zero = Rational::zero();
    let level = &sol.water_level;
    for (i, xi) in x.iter().enumerate() {
        let before = prev.shares().get(i).unwrap_or(&zero);
        let expected = if before > level { before } else { level };
        if xi != expected {
            return Err(Violation::new(
                Property::Closure,
                k,
                format!(
                    "share {} differs from max(M, previous) = {}",
                    exact_string(xi),
                    exact_string(expected)
                ),
            )
            .agent(i));
        }
    }
    let canonical = (0..k)
        .find(|&i| prev.shares().get(i).unwrap_or(&zero) <= level)
        .unwrap_or(k);
    if sol.split != canonical {
        return Err(Violation::new(
            Property::Closure,
            k,
            format!("split {} is not canonical ({canonical})", sol.split),
        ));
    }
    Ok(())
}

/// Checks a full sequence of steps `1..=n`.
pub fn check_steps(instance: &Instance, steps: &[StepSolution]) -> Result<(), Violation> {
    if steps.len() != instance.n() {
        return Err(Violation::new(
            Property::Closure,
            steps.len(),
            format!("run has {} steps, instance has {} agents", steps.len(), instance.n()),
        ));
    }
    let mut prev = ShareVector::initial();
    for sol in steps {
        check_step(instance, &prev, sol)?;
        prev = sol.shares.clone();
    }
    Ok(())
}
