//! Competitive ratios of the online mechanism against the offline optima,
//! and the full verification battery.

use num_traits::{One, Zero};

use crate::dynamic::{self, Algorithm, DrfError, StepSolution};
use crate::model::{Instance, ShareVector};
use crate::offline::{self, OfflineError};
use crate::property::{self, Property, Violation};
use crate::rational::{exact_string, int, Rational};

/// Which offline objectives a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ObjectiveSet {
    Maxsum,
    Maxmin,
    #[default]
    Both,
}

impl ObjectiveSet {
    pub fn maxsum(self) -> bool {
        matches!(self, ObjectiveSet::Maxsum | ObjectiveSet::Both)
    }

    pub fn maxmin(self) -> bool {
        matches!(self, ObjectiveSet::Maxmin | ObjectiveSet::Both)
    }
}

impl std::str::FromStr for ObjectiveSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "maxsum" => Ok(ObjectiveSet::Maxsum),
            "maxmin" => Ok(ObjectiveSet::Maxmin),
            "both" => Ok(ObjectiveSet::Both),
            _ => Err(format!("unknown objective `{s}` (expected maxsum, maxmin or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRatio {
    pub k: usize,
    pub online_sum: Rational,
    pub offline_maxsum: Option<Rational>,
    pub ratio1: Option<Rational>,
    pub online_min: Rational,
    pub offline_maxmin: Option<Rational>,
    pub ratio2: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub per_step: Vec<StepRatio>,
    /// Minimum of `ratio1` over steps.
    pub cr1: Option<Rational>,
    /// Minimum of `ratio2` over steps.
    pub cr2: Option<Rational>,
}

impl RatioReport {
    pub fn step(&self, k: usize) -> &StepRatio {
        &self.per_step[k - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Drf(#[from] DrfError),
    #[error(transparent)]
    Offline(#[from] OfflineError),
    #[error(transparent)]
    Violation(#[from] Violation),
}

/// Ratios for an already computed run.
pub fn ratios_for_run(
    instance: &Instance,
    steps: &[StepSolution],
    objectives: ObjectiveSet,
) -> Result<RatioReport, HarnessError> {
    let mut per_step = Vec::with_capacity(steps.len());
    for sol in steps {
        let k = sol.step();
        let online_sum = sol.shares.sum();
        let online_min = sol
            .shares
            .shares()
            .iter()
            .min()
            .cloned()
            .unwrap_or_else(Rational::zero);
        let offline_maxsum = if objectives.maxsum() {
            Some(offline::maxsum_offline(instance, k)?.objective)
        } else {
            None
        };
        let offline_maxmin = if objectives.maxmin() {
            Some(
                offline::maxmin_offline(instance, k)
                    .map_err(OfflineError::from)?
                    .objective,
            )
        } else {
            None
        };
        per_step.push(StepRatio {
            k,
            ratio1: offline_maxsum.as_ref().map(|o| &online_sum / o),
            ratio2: offline_maxmin.as_ref().map(|o| &online_min / o),
            online_sum,
            offline_maxsum,
            online_min,
            offline_maxmin,
        });
    }
    let cr1 = per_step.iter().filter_map(|s| s.ratio1.clone()).min();
    let cr2 = per_step.iter().filter_map(|s| s.ratio2.clone()).min();
    Ok(RatioReport { per_step, cr1, cr2 })
}

pub fn ratio_report(instance: &Instance, objectives: ObjectiveSet) -> Result<RatioReport, HarnessError> {
    let steps = dynamic::run(instance)?;
    ratios_for_run(instance, &steps, objectives)
}

/// Per-step sum-of-shares ratios and their minimum `cr1`.
pub fn cr_maxsum(instance: &Instance) -> Result<RatioReport, HarnessError> {
    ratio_report(instance, ObjectiveSet::Maxsum)
}

/// Per-step minimum-share ratios and their minimum `cr2`.
pub fn cr_maxmin(instance: &Instance) -> Result<RatioReport, HarnessError> {
    ratio_report(instance, ObjectiveSet::Maxmin)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub steps: Vec<StepSolution>,
    pub ratios: RatioReport,
}

/// Runs the instance with the bisection routine and checks the whole
/// battery; see [`verify_steps`].
pub fn verify_run(instance: &Instance) -> Result<VerifyReport, HarnessError> {
    instance.validate().map_err(DrfError::from)?;
    let mut steps = Vec::with_capacity(instance.n());
    let mut prev = ShareVector::initial();
    for k in 1..=instance.n() {
        let sol = dynamic::step_update(Algorithm::Bisect, instance, &prev, k)?;
        prev = sol.shares.clone();
        steps.push(sol);
    }
    verify_steps(instance, steps)
}

/// Checks a claimed run: per-step properties, agreement of the bisection,
/// naive and LP routines, the `m k / n` bound on the offline maxsum, and
/// both ratios lying in `[1/m, 1]`.
pub fn verify_steps(
    instance: &Instance,
    steps: Vec<StepSolution>,
) -> Result<VerifyReport, HarnessError> {
    property::check_steps(instance, &steps)?;

    let mut prev = ShareVector::initial();
    for sol in &steps {
        let k = sol.step();
        for algorithm in Algorithm::ALL {
            let other = dynamic::step_update(algorithm, instance, &prev, k)?;
            if other != *sol {
                return Err(Violation::new(
                    Property::OracleEquivalence,
                    k,
                    format!("{algorithm} routine disagrees with the reported step"),
                )
                .into());
            }
        }
        prev = sol.shares.clone();
    }

    let ratios = ratios_for_run(instance, &steps, ObjectiveSet::Both)?;
    let m = instance.m();
    let floor = Rational::one() / int(m as i64);
    for (s, sol) in ratios.per_step.iter().zip(&steps) {
        let k = s.k;
        let newest = sol.shares.share(k - 1);
        if *newest != s.online_min {
            return Err(Violation::new(
                Property::LastAgentMinimum,
                k,
                format!("minimum share {} but newest agent holds {}", exact_string(&s.online_min), exact_string(newest)),
            )
            .agent(k - 1)
            .into());
        }
        let maxsum = s.offline_maxsum.as_ref().expect("both objectives");
        let bound = int((m * k) as i64) / int(instance.n() as i64);
        if *maxsum > bound {
            return Err(Violation::new(
                Property::MaxsumBound,
                k,
                format!("offline maxsum {} exceeds {}", exact_string(maxsum), exact_string(&bound)),
            )
            .into());
        }
        for (name, ratio) in [("maxsum", &s.ratio1), ("maxmin", &s.ratio2)] {
            let ratio = ratio.as_ref().expect("both objectives");
            if *ratio > Rational::one() {
                return Err(Violation::new(
                    Property::RatioUpper,
                    k,
                    format!("{name} ratio {} above 1", exact_string(ratio)),
                )
                .into());
            }
            if *ratio < floor {
                return Err(Violation::new(
                    Property::RatioLower,
                    k,
                    format!("{name} ratio {} below 1/{m}", exact_string(ratio)),
                )
                .into());
            }
        }
    }
    Ok(VerifyReport { steps, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_random, gen_theorem1, gen_theorem2};
    use crate::rational::ratio;

    fn micro() -> Instance {
        Instance::from_fractions(&[
            vec![(1, 1), (1, 10)],
            vec![(1, 10), (1, 1)],
            vec![(1, 1), (1, 1)],
        ])
        .unwrap()
    }

    #[test]
    fn micro_ratios() {
        let r = ratio_report(&micro(), ObjectiveSet::Both).unwrap();
        let s = r.step(3);
        assert_eq!(s.online_sum, ratio(17, 11));
        assert_eq!(s.offline_maxsum, Some(ratio(20, 11)));
        assert_eq!(s.ratio1, Some(ratio(17, 20)));
        assert_eq!(s.ratio2, Some(ratio(7, 10)));
        assert_eq!(r.cr1, r.per_step.iter().filter_map(|s| s.ratio1.clone()).min());
    }

    #[test]
    fn single_objective_reports() {
        let a = cr_maxsum(&micro()).unwrap();
        assert!(a.cr2.is_none() && a.cr1.is_some());
        let b = cr_maxmin(&micro()).unwrap();
        assert!(b.cr1.is_none());
        assert_eq!(b.step(1).ratio2, Some(int(1)));
    }

    #[test]
    fn identical_agents_ratio_one() {
        let i = Instance::from_fractions(&vec![vec![(1, 1), (1, 1)]; 5]).unwrap();
        let r = ratio_report(&i, ObjectiveSet::Both).unwrap();
        assert!(r.per_step.iter().all(|s| s.ratio1 == Some(int(1)) && s.ratio2 == Some(int(1))));
    }

    #[test]
    fn theorem1_exact_ratio() {
        let eps = ratio(1, 10);
        let (m, n) = (3usize, 7usize);
        let r = cr_maxsum(&gen_theorem1(m, n, &eps).unwrap()).unwrap();
        let e = &eps * int(m as i64 - 1);
        let expected = (int(n as i64) / (int((n - m + 1) as i64) + &e)) * ((int(1) + &e) / int(m as i64));
        assert_eq!(r.step(n).ratio1, Some(expected));
    }

    #[test]
    fn theorem2_ratio_bounded() {
        let r = cr_maxmin(&gen_theorem2(3, &ratio(1, 100)).unwrap()).unwrap();
        assert!(r.step(10).ratio2.clone().unwrap() <= ratio(1, 2));
    }

    #[test]
    fn verify_passes_on_random_instances() {
        for seed in 0..20 {
            let i = gen_random(8, 3, seed, 8).unwrap();
            verify_run(&i).unwrap();
        }
    }

    #[test]
    fn verify_catches_tampered_run() {
        let i = micro();
        let mut steps = dynamic::run(&i).unwrap();
        let mut x = steps[1].shares.shares().to_vec();
        x[1] -= ratio(1, 1000);
        steps[1].shares = ShareVector::new(2, x).unwrap();
        match verify_steps(&i, steps) {
            Err(HarnessError::Violation(v)) => {
                assert!(matches!(v.property, Property::ParetoSaturation | Property::Closure));
                assert_eq!(v.step, 2);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }
}
