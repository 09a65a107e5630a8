//! Instance generators: the two tight-bound families and seeded random
//! instances.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{DemandVector, Instance};
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("bad parameters: {0}")]
    BadParams(String),
}

fn bad(msg: impl Into<String>) -> GenError {
    GenError::BadParams(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// All-ones agents followed by `m` near-orthogonal agents.
    Theorem1,
    /// `m^2` near-orthogonal agents cycling over resources, then one
    /// all-ones agent.
    Theorem2,
    Random,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t1" => Ok(Family::Theorem1),
            "t2" => Ok(Family::Theorem2),
            "random" => Ok(Family::Random),
            _ => Err(format!("unknown family `{s}` (expected t1, t2 or random)")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Theorem1 => "t1",
            Family::Theorem2 => "t2",
            Family::Random => "random",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversarialParams {
    pub m: usize,
    pub n: usize,
    pub eps: Rational,
    pub seed: u64,
    pub denom_bound: u32,
}

impl AdversarialParams {
    pub fn generate(&self, family: Family) -> Result<Instance, GenError> {
        match family {
            Family::Theorem1 => gen_theorem1(self.m, self.n, &self.eps),
            Family::Theorem2 => gen_theorem2(self.m, &self.eps),
            Family::Random => gen_random(self.n, self.m, self.seed, self.denom_bound),
        }
    }
}

fn check_eps(eps: &Rational) -> Result<(), GenError> {
    if !eps.is_positive() || *eps >= Rational::one() {
        return Err(bad("epsilon must lie strictly between 0 and 1"));
    }
    Ok(())
}

// 1 at `hot`, eps elsewhere
fn spike(m: usize, hot: usize, eps: &Rational) -> DemandVector {
    let coords = (0..m)
        .map(|r| if r == hot { Rational::one() } else { eps.clone() })
        .collect();
    DemandVector::new(coords).expect("spike vector is normalized")
}

fn ones(m: usize) -> DemandVector {
    DemandVector::new(vec![Rational::one(); m]).expect("all-ones is normalized")
}

/// `n - m` all-ones agents, then agents whose demand is 1 on resource
/// `0, 1, .., m-1` respectively and `eps` elsewhere.
pub fn gen_theorem1(m: usize, n: usize, eps: &Rational) -> Result<Instance, GenError> {
    if m < 2 {
        return Err(bad("need at least two resources"));
    }
    if n <= m {
        return Err(bad(format!("need more agents than resources (n = {n}, m = {m})")));
    }
    check_eps(eps)?;
    let demands = (0..n - m)
        .map(|_| ones(m))
        .chain((0..m).map(|r| spike(m, r, eps)))
        .collect();
    Ok(Instance::new(n, demands).expect("generated instance is valid"))
}

/// `m^2 + 1` agents: agent `i` (zero-based, `i < m^2`) has demand 1 on
/// resource `i mod m` and `eps` elsewhere; the last agent demands all ones.
///
/// The tight ratio bound is only claimed for `m > 2`; see
/// [`theorem2_hypothesis_holds`].
pub fn gen_theorem2(m: usize, eps: &Rational) -> Result<Instance, GenError> {
    if m < 2 {
        return Err(bad("need at least two resources"));
    }
    check_eps(eps)?;
    let n = m * m + 1;
    let demands = (0..m * m)
        .map(|i| spike(m, i % m, eps))
        .chain(std::iter::once(ones(m)))
        .collect();
    Ok(Instance::new(n, demands).expect("generated instance is valid"))
}

pub fn theorem2_hypothesis_holds(m: usize) -> bool {
    m > 2
}

/// Seeded random instance. Each row draws integer weights in
/// `1..=denom_bound` and divides by the row maximum, so every coordinate is
/// positive with denominator at most `denom_bound`.
pub fn gen_random(n: usize, m: usize, seed: u64, denom_bound: u32) -> Result<Instance, GenError> {
    if n == 0 || m == 0 {
        return Err(bad("need at least one agent and one resource"));
    }
    if denom_bound < 2 {
        return Err(bad("denominator bound must be at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let demands = (0..n)
        .map(|_| {
            let weights: Vec<i64> = (0..m)
                .map(|_| rng.random_range(1..=denom_bound as i64))
                .collect();
            let peak = *weights.iter().max().expect("m >= 1");
            DemandVector::new(weights.iter().map(|&w| ratio(w, peak)).collect())
                .expect("row scaled by its maximum")
        })
        .collect();
    Ok(Instance::new(n, demands).expect("generated instance is valid"))
}

/// Exact share every agent holds after step `n` on the first family:
/// `1 / (n - m + 1 + eps (m - 1))`.
pub fn theorem1_final_share(m: usize, n: usize, eps: &Rational) -> Rational {
    Rational::one() / (int((n - m + 1) as i64) + eps * int(m as i64 - 1))
}

/// Exact shares after step `m^2` on the second family:
/// `m^2 / ((m + eps (m^2 - m)) (m^2 + 1))`.
pub fn theorem2_plateau_share(m: usize, eps: &Rational) -> Rational {
    let m = m as i64;
    int(m * m) / ((int(m) + eps * int(m * m - m)) * int(m * m + 1))
}

/// Offline maxmin share at the last step of the second family:
/// `1 / (m + 1 + eps (m^2 - m))`.
pub fn theorem2_final_maxmin(m: usize, eps: &Rational) -> Rational {
    let m = m as i64;
    Rational::one() / (int(m + 1) + eps * int(m * m - m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem1_small() {
        let i = gen_theorem1(2, 4, &ratio(1, 10)).unwrap();
        let rows: Vec<_> = i.demands().iter().map(|d| d.coords().to_vec()).collect();
        assert_eq!(
            rows,
            vec![
                vec![int(1), int(1)],
                vec![int(1), int(1)],
                vec![int(1), ratio(1, 10)],
                vec![ratio(1, 10), int(1)],
            ]
        );
    }

    #[test]
    fn theorem1_three_resources() {
        let eps = ratio(1, 100);
        let i = gen_theorem1(3, 5, &eps).unwrap();
        assert!(i.demands()[..2].iter().all(|d| d.coords() == [int(1), int(1), int(1)]));
        for (j, d) in i.demands()[2..].iter().enumerate() {
            assert_eq!(d.dominant(), j);
            assert_eq!(d.coords().iter().filter(|c| **c == eps).count(), 2);
        }
        let boundary = gen_theorem1(3, 4, &eps).unwrap();
        assert_eq!(boundary.demands().iter().filter(|d| d.coords()[1] == int(1) && d.coords()[0] == int(1)).count(), 1);
    }

    #[test]
    fn theorem1_rejects_bad_params() {
        assert!(gen_theorem1(3, 3, &ratio(1, 10)).is_err());
        assert!(gen_theorem1(1, 5, &ratio(1, 10)).is_err());
        assert!(gen_theorem1(2, 5, &int(1)).is_err());
        assert!(gen_theorem1(2, 5, &int(0)).is_err());
    }

    #[test]
    fn theorem2_cycles_residues() {
        let eps = ratio(1, 100);
        let i = gen_theorem2(3, &eps).unwrap();
        assert_eq!(i.n(), 10);
        for (a, d) in i.demands()[..9].iter().enumerate() {
            assert_eq!(d.dominant(), a % 3);
        }
        assert_eq!(i.demand(0).coords(), &[int(1), eps.clone(), eps.clone()]);
        assert_eq!(i.demand(4).coords(), &[eps.clone(), int(1), eps.clone()]);
        assert_eq!(i.demand(8).coords(), &[eps.clone(), eps.clone(), int(1)]);
        assert_eq!(i.demand(9).coords(), &[int(1), int(1), int(1)]);
        for r in 0..3 {
            assert_eq!(i.demands()[..9].iter().filter(|d| d.dominant() == r).count(), 3);
        }
    }

    #[test]
    fn theorem2_m2_is_flagged_but_built() {
        let i = gen_theorem2(2, &ratio(1, 10)).unwrap();
        assert_eq!(i.n(), 5);
        assert!(!theorem2_hypothesis_holds(2));
        assert!(theorem2_hypothesis_holds(3));
        assert!(gen_theorem2(1, &ratio(1, 10)).is_err());
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        let a = gen_random(12, 4, 7, 8).unwrap();
        let b = gen_random(12, 4, 7, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.validate(), Ok(()));
        assert_ne!(a, gen_random(12, 4, 8, 8).unwrap());
        for d in a.demands() {
            for c in d.coords() {
                assert!(c.is_positive() && *c <= int(1));
                assert!(*c.denom() <= 8.into());
            }
        }
        assert!(gen_random(3, 2, 0, 1).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(theorem1_final_share(2, 4, &ratio(1, 10)), ratio(10, 31));
        assert_eq!(theorem2_plateau_share(3, &ratio(1, 100)), ratio(15, 51));
        assert_eq!(theorem2_final_maxmin(3, &ratio(1, 100)), ratio(50, 203));
    }
}
