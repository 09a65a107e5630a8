//! Offline benchmarks that see all demands `1..k` at once.

use num_traits::Zero;

use crate::lp::{self, LinearProgram, LpOutcome};
use crate::model::{Instance, ModelError};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Maxsum,
    Maxmin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OfflineOptimum {
    pub step: usize,
    pub kind: Objective,
    pub shares: Vec<Rational>,
    pub objective: Rational,
    /// For maxmin, the smallest-index resource attaining the minimum.
    pub binding_resource: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OfflineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("offline program at step {step} is {outcome}")]
    Solver { step: usize, outcome: &'static str },
}

/// Equal-share optimum: every agent gets
/// `min_r (k/n) / sum_{i<=k} d_ir`.
pub fn maxmin_offline(instance: &Instance, k: usize) -> Result<OfflineOptimum, ModelError> {
    instance.check_step(k)?;
    let cap = instance.capacity(k);
    let mut best: Option<(usize, Rational)> = None;
    for r in 0..instance.m() {
        let column = instance.demands()[..k]
            .iter()
            .fold(Rational::zero(), |acc, d| acc + &d.coords()[r]);
        let level = &cap / column;
        if best.as_ref().is_none_or(|(_, b)| level < *b) {
            best = Some((r, level));
        }
    }
    let (r, level) = best.expect("at least one resource");
    Ok(OfflineOptimum {
        step: k,
        kind: Objective::Maxmin,
        shares: vec![level.clone(); k],
        objective: level,
        binding_resource: Some(r),
    })
}

/// Maximize `sum_i x_i` subject to `sum_i d_ir x_i <= k/n` for every `r`.
pub fn maxsum_program(instance: &Instance, k: usize) -> LinearProgram {
    let one = Rational::from_integer(1.into());
    let constraints = (0..instance.m())
        .map(|r| {
            instance.demands()[..k]
                .iter()
                .map(|d| d.coords()[r].clone())
                .collect()
        })
        .collect();
    LinearProgram::new(vec![one; k], constraints, vec![instance.capacity(k); instance.m()])
        .expect("consistent dimensions")
}

/// Sum-of-shares optimum via the exact simplex solver. Several vertices
/// may be optimal; the solver's deterministic choice is reported.
pub fn maxsum_offline(instance: &Instance, k: usize) -> Result<OfflineOptimum, OfflineError> {
    instance.check_step(k)?;
    let program = maxsum_program(instance, k);
    match lp::solve_max(&program) {
        LpOutcome::Optimal(s) => Ok(OfflineOptimum {
            step: k,
            kind: Objective::Maxsum,
            shares: s.primal,
            objective: s.value,
            binding_resource: None,
        }),
        LpOutcome::Unbounded => Err(OfflineError::Solver { step: k, outcome: "unbounded" }),
        LpOutcome::Infeasible => Err(OfflineError::Solver { step: k, outcome: "infeasible" }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_theorem1, gen_theorem2};
    use crate::rational::{int, ratio};

    fn micro() -> Instance {
        Instance::from_fractions(&[
            vec![(1, 1), (1, 10)],
            vec![(1, 10), (1, 1)],
            vec![(1, 1), (1, 1)],
        ])
        .unwrap()
    }

    #[test]
    fn maxmin_micro() {
        let o = maxmin_offline(&micro(), 3).unwrap();
        assert_eq!(o.objective, ratio(10, 21));
        assert_eq!(o.shares, vec![ratio(10, 21); 3]);
        assert_eq!(o.binding_resource, Some(0));
    }

    #[test]
    fn maxmin_theorem_two_last_step() {
        let i = gen_theorem2(3, &ratio(1, 100)).unwrap();
        assert_eq!(maxmin_offline(&i, 10).unwrap().objective, ratio(50, 203));
    }

    #[test]
    fn maxmin_single_agent() {
        assert_eq!(maxmin_offline(&micro(), 1).unwrap().objective, ratio(1, 3));
        assert!(maxmin_offline(&micro(), 4).is_err());
    }

    #[test]
    fn maxsum_micro() {
        let o = maxsum_offline(&micro(), 3).unwrap();
        assert_eq!(o.objective, ratio(20, 11));
        assert_eq!(o.shares, vec![ratio(10, 11), ratio(10, 11), int(0)]);
    }

    #[test]
    fn maxsum_theorem_one_last_step() {
        let eps = ratio(1, 10);
        let (m, n) = (2, 4);
        let i = gen_theorem1(m, n, &eps).unwrap();
        let expected = int(m as i64) / (int(1) + &eps * int(m as i64 - 1));
        assert_eq!(maxsum_offline(&i, n).unwrap().objective, expected);
    }

    #[test]
    fn maxsum_identical_agents() {
        let rows = vec![vec![(1, 1), (1, 1)]; 4];
        let i = Instance::from_fractions(&rows).unwrap();
        assert_eq!(maxsum_offline(&i, 4).unwrap().objective, int(1));
        assert_eq!(maxsum_offline(&i, 2).unwrap().objective, ratio(1, 2));
    }
}
