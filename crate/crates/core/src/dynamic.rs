//! The dynamic DRF mechanism.
//!
//! At step `k` the present agents are raised synchronously from their
//! previous dominant shares until some resource reaches its released
//! capacity `k/n`. The result has a split structure: the first `split`
//! agents keep their previous shares, every later agent sits at the common
//! water level `M`. [`step_update_bisect`] locates the split with a
//! bisection whose window sums are maintained incrementally, giving `O(k)`
//! demand reads per step. [`step_update_naive`] scans every split and
//! [`step_update_lp`] solves the step's linear program directly; both exist
//! to cross-check the bisection.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::lp::{self, LinearProgram, LpOutcome};
use crate::model::{Instance, ModelError, ShareVector};
use crate::property::{self, Violation};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DrfError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("previous shares belong to step {found}, expected step {expected}")]
    PreviousStep { expected: usize, found: usize },
    #[error("internal inconsistency at step {step}: {detail}")]
    InternalInconsistency { step: usize, detail: String },
    #[error(transparent)]
    Violation(#[from] Violation),
}

/// Solution of one step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepSolution {
    pub shares: ShareVector,
    /// Common share `M` of agents `split..k`.
    pub water_level: Rational,
    /// Number of leading agents that keep their previous share; the first
    /// agent raised to the water level has zero-based index `split`.
    pub split: usize,
}

impl StepSolution {
    pub fn step(&self) -> usize {
        self.shares.step()
    }
}

/// Which routine computes each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Algorithm {
    #[default]
    Bisect,
    Naive,
    Lp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Bisect, Algorithm::Naive, Algorithm::Lp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bisect => "bisect",
            Algorithm::Naive => "naive",
            Algorithm::Lp => "lp",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected bisect, naive or lp)"))
    }
}

/// Step one: the first agent receives an equal split `1/n`.
pub fn step_one(instance: &Instance) -> StepSolution {
    let share = instance.capacity(1);
    StepSolution {
        shares: ShareVector::new(1, vec![share.clone()]).expect("one share"),
        water_level: share,
        split: 0,
    }
}

// Previous share of agent i at step k; the arriving agent starts from zero.
fn prev_share<'a>(prev: &'a ShareVector, i: usize, zero: &'a Rational) -> &'a Rational {
    prev.shares().get(i).unwrap_or(zero)
}

fn check_pre(instance: &Instance, prev: &ShareVector, k: usize) -> Result<(), DrfError> {
    instance.check_step(k)?;
    if prev.step() + 1 != k {
        return Err(DrfError::PreviousStep {
            expected: k - 1,
            found: prev.step(),
        });
    }
    Ok(())
}

/// Water level when agents `split..k` share a common level and earlier
/// agents keep their previous shares:
/// `min_r (k/n - sum_{i<split} d_ir x_i) / sum_{split<=i<k} d_ir`.
pub fn water_level_for_split(
    instance: &Instance,
    prev: &ShareVector,
    k: usize,
    split: usize,
) -> Rational {
    assert!(split < k, "split {split} must be below step {k}");
    let cap = instance.capacity(k);
    (0..instance.m())
        .map(|r| {
            let mut fixed = Rational::zero();
            let mut raised = Rational::zero();
            for (i, d) in instance.demands()[..k].iter().enumerate() {
                if i < split {
                    fixed += &d.coords()[r] * prev.share(i);
                } else {
                    raised += &d.coords()[r];
                }
            }
            (&cap - fixed) / raised
        })
        .min()
        .expect("at least one resource")
}

fn assemble(prev: &ShareVector, k: usize, split: usize, level: Rational) -> StepSolution {
    let mut shares: Vec<Rational> = prev.shares()[..split].to_vec();
    shares.resize(k, level.clone());
    StepSolution {
        shares: ShareVector::new(k, shares).expect("k shares"),
        water_level: level,
        split,
    }
}

/// Scans every split in order and returns the first whose water level is
/// consistent with it. Quadratic in `k`; used as a reference.
pub fn step_update_naive(
    instance: &Instance,
    prev: &ShareVector,
    k: usize,
) -> Result<StepSolution, DrfError> {
    check_pre(instance, prev, k)?;
    let zero = Rational::zero();
    for split in 0..k {
        let level = water_level_for_split(instance, prev, k, split);
        let above = split == 0 || *prev_share(prev, split - 1, &zero) > level;
        let covers = level >= *prev_share(prev, split, &zero);
        if above && covers {
            return Ok(assemble(prev, k, split, level));
        }
    }
    Err(DrfError::InternalInconsistency {
        step: k,
        detail: "no split index is consistent with its water level".into(),
    })
}

/// Bisection window with sums kept for the current probe `l` (one-based):
/// `alpha_r = sum_{i<l} d_ir x_i` and `beta_r = sum_{l<=i<=k} d_ir`.
///
/// The split `tau` (one-based) lies in `(lb, ub]`; probe `ub = k` is always
/// feasible because the arriving agent starts from zero.
#[derive(Debug, Clone)]
pub struct BisectState {
    pub lb: usize,
    pub ub: usize,
    pub probe: usize,
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
    reads: u64,
}

impl BisectState {
    fn new(instance: &Instance, prev: &ShareVector, k: usize) -> Self {
        let m = instance.m();
        let mut state = Self {
            lb: 0,
            ub: k,
            probe: k.div_ceil(2),
            alpha: vec![Rational::zero(); m],
            beta: vec![Rational::zero(); m],
            reads: 0,
        };
        for (i, d) in instance.demands()[..k].iter().enumerate() {
            state.reads += m as u64;
            for (r, c) in d.coords().iter().enumerate() {
                if i + 1 < state.probe {
                    state.alpha[r] += c * prev.share(i);
                } else {
                    state.beta[r] += c;
                }
            }
        }
        state
    }

    // Slides the probe, touching only the agents between old and new probe.
    fn move_to(&mut self, instance: &Instance, prev: &ShareVector, target: usize) {
        let m = instance.m() as u64;
        while self.probe > target {
            self.probe -= 1;
            let i = self.probe - 1;
            self.reads += m;
            for (r, c) in instance.demand(i).coords().iter().enumerate() {
                self.alpha[r] -= c * prev.share(i);
                self.beta[r] += c;
            }
        }
        while self.probe < target {
            let i = self.probe - 1;
            self.reads += m;
            for (r, c) in instance.demand(i).coords().iter().enumerate() {
                self.alpha[r] += c * prev.share(i);
                self.beta[r] -= c;
            }
            self.probe += 1;
        }
    }

    // Raising agents probe..k to the probe's previous share fits in capacity.
    fn probe_fits(&self, level: &Rational, cap: &Rational) -> bool {
        self.alpha
            .iter()
            .zip(&self.beta)
            .all(|(a, b)| a + level * b <= *cap)
    }

    fn water_level(&self, cap: &Rational) -> Rational {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| (cap - a) / b)
            .min()
            .expect("at least one resource")
    }

    /// Demand coordinates read so far.
    pub fn reads(&self) -> u64 {
        self.reads
    }
}

/// Linear-time step update; also returns the number of demand coordinates
/// read.
pub fn step_update_bisect_counted(
    instance: &Instance,
    prev: &ShareVector,
    k: usize,
) -> Result<(StepSolution, u64), DrfError> {
    check_pre(instance, prev, k)?;
    let cap = instance.capacity(k);
    let zero = Rational::zero();
    let mut state = BisectState::new(instance, prev, k);
    while state.ub - state.lb > 1 {
        let probe = (state.lb + state.ub).div_ceil(2);
        state.move_to(instance, prev, probe);
        if state.probe_fits(prev_share(prev, probe - 1, &zero), &cap) {
            state.ub = probe;
        } else {
            state.lb = probe;
        }
    }
    let tau = state.ub;
    state.move_to(instance, prev, tau);
    let level = state.water_level(&cap);
    Ok((assemble(prev, k, tau - 1, level), state.reads))
}

pub fn step_update_bisect(
    instance: &Instance,
    prev: &ShareVector,
    k: usize,
) -> Result<StepSolution, DrfError> {
    step_update_bisect_counted(instance, prev, k).map(|(s, _)| s)
}

/// Builds the step-`k` program over `(M, y_1..y_k)` with `x_i = prev_i + y_i`:
/// maximize `M` subject to `M - y_i <= prev_i` and
/// `sum_i d_ir y_i <= k/n - sum_i d_ir prev_i`.
pub fn step_program(instance: &Instance, prev: &ShareVector, k: usize) -> LinearProgram {
    let zero = Rational::zero();
    let one = Rational::from_integer(1.into());
    let mut objective = vec![zero.clone(); k + 1];
    objective[0] = one.clone();
    let mut constraints = Vec::with_capacity(k + instance.m());
    let mut bounds = Vec::with_capacity(k + instance.m());
    for i in 0..k {
        let mut row = vec![zero.clone(); k + 1];
        row[0] = one.clone();
        row[i + 1] = -one.clone();
        constraints.push(row);
        bounds.push(prev_share(prev, i, &zero).clone());
    }
    let cap = instance.capacity(k);
    for r in 0..instance.m() {
        let mut row = vec![zero.clone()];
        row.extend(instance.demands()[..k].iter().map(|d| d.coords()[r].clone()));
        constraints.push(row);
        bounds.push(cap.clone() - crate::model::resource_usage(instance, prev.shares(), r));
    }
    LinearProgram::new(objective, constraints, bounds).expect("consistent dimensions")
}

/// Solves the step program with the exact simplex solver.
pub fn step_update_lp(
    instance: &Instance,
    prev: &ShareVector,
    k: usize,
) -> Result<StepSolution, DrfError> {
    check_pre(instance, prev, k)?;
    let program = step_program(instance, prev, k);
    let solution = match lp::solve_max(&program) {
        LpOutcome::Optimal(s) => s,
        other => {
            return Err(DrfError::InternalInconsistency {
                step: k,
                detail: format!("step program not solvable: {other:?}"),
            })
        }
    };
    let zero = Rational::zero();
    let level = solution.value;
    let shares: Vec<Rational> = (0..k)
        .map(|i| prev_share(prev, i, &zero) + &solution.primal[i + 1])
        .collect();
    let split = (0..k)
        .find(|&i| *prev_share(prev, i, &zero) <= level)
        .unwrap_or(k - 1);
    Ok(StepSolution {
        shares: ShareVector::new(k, shares)?,
        water_level: level,
        split,
    })
}

pub fn step_update(
    algorithm: Algorithm,
    instance: &Instance,
    prev: &ShareVector,
    k: usize,
) -> Result<StepSolution, DrfError> {
    if k == 1 && prev.step() == 0 {
        instance.check_step(1)?;
        return Ok(step_one(instance));
    }
    match algorithm {
        Algorithm::Bisect => step_update_bisect(instance, prev, k),
        Algorithm::Naive => step_update_naive(instance, prev, k),
        Algorithm::Lp => step_update_lp(instance, prev, k),
    }
}

/// Runs every step with the bisection routine.
pub fn run(instance: &Instance) -> Result<Vec<StepSolution>, DrfError> {
    run_with(instance, Algorithm::Bisect)
}

/// Runs every step `1..=n`, checking sharing incentives, Pareto
/// saturation, irrevocability and monotonicity after each one.
pub fn run_with(instance: &Instance, algorithm: Algorithm) -> Result<Vec<StepSolution>, DrfError> {
    instance.validate()?;
    let mut steps: Vec<StepSolution> = Vec::with_capacity(instance.n());
    let mut prev = ShareVector::initial();
    for k in 1..=instance.n() {
        let sol = step_update(algorithm, instance, &prev, k)?;
        property::check_step(instance, &prev, &sol)?;
        prev = sol.shares.clone();
        steps.push(sol);
    }
    Ok(steps)
}
