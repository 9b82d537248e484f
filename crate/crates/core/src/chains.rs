//! Chains of n >= 2 transitions that all share one energy difference.
//!
//! Two constructions live here: pairing every solution of a common conic with
//! the first one ([`build_chain`]), and Perondi's prime-partition family
//! ([`perondi_chain`]).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::conic::ConicSolution;
use crate::error::{Error, Result};
use crate::exact::{exact_div, gcd, lcm, to_int, ExactRational, Nat};
use crate::pairs::Transition;

/// Transitions sorted by descending `(upper, lower)`, all with difference `delta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquifreqChain {
    transitions: Vec<Transition>,
    delta: ExactRational,
}

impl EquifreqChain {
    pub fn new(mut transitions: Vec<Transition>) -> Result<Self> {
        if transitions.len() < 2 {
            return Err(Error::TooFewMembers(transitions.len()));
        }
        transitions.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(w) = transitions.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateTransition {
                upper: w[0].upper().clone(),
                lower: w[0].lower().clone(),
            });
        }
        let delta = transitions[0].delta();
        for t in &transitions[1..] {
            let other = t.delta();
            if other != delta {
                return Err(Error::SidesUnequal {
                    left: Box::new(delta),
                    right: Box::new(other),
                });
            }
        }
        Ok(EquifreqChain { transitions, delta })
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn delta(&self) -> &ExactRational {
        &self.delta
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

/// Puts every solution on a common energy difference.
///
/// `t1` is `k` times the lcm of `x_i y_i z1 / gcd(x1 y1 z_i, x_i y_i z1)` over
/// `i >= 2`; each `t_i` then follows from `x1 y1 t1 z_i = x_i y_i t_i z1`, and
/// member `i` is `x_i t_i -> y_i t_i`.
pub fn build_chain(solutions: &[ConicSolution], k: &Nat) -> Result<EquifreqChain> {
    let (first, rest) = match solutions {
        [first, rest @ ..] if !rest.is_empty() => (first, rest),
        _ => return Err(Error::TooFewMembers(solutions.len())),
    };
    if k.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    if let Some(bad) = rest.iter().find(|s| s.s() != first.s()) {
        return Err(Error::MismatchedConic {
            left: first.s().clone(),
            right: bad.s().clone(),
        });
    }

    let first_xy = first.xy();
    let mut t1 = Nat::one();
    for sol in rest {
        let left = &first_xy * sol.z();
        let right = sol.xy() * first.z();
        let g = gcd(&left, &right)?;
        t1 = lcm(&t1, &exact_div(&right, &g)?);
    }
    t1 *= k;

    let mut transitions = Vec::with_capacity(solutions.len());
    transitions.push(Transition::new(first.x() * &t1, first.y() * &t1)?);
    for sol in rest {
        let ti = exact_div(&(&first_xy * &t1 * sol.z()), &(sol.xy() * first.z()))?;
        transitions.push(Transition::new(sol.x() * &ti, sol.y() * &ti)?);
    }
    EquifreqChain::new(transitions)
}

/// A split of the prime indices `1..=k` into two sides `I` and `J`.
///
/// Indices are 1-based. Either side may be empty, in which case its product
/// is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Partition {
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Self {
        Partition { left, right }
    }

    /// Orientation-free form used to detect repeats.
    fn unordered_key(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let a: BTreeSet<_> = self.left.iter().copied().collect();
        let b: BTreeSet<_> = self.right.iter().copied().collect();
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}:{}", join(&self.left), join(&self.right))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// `"1,2:"` is `I = {1, 2}`, `J = {}`; `"1:2"` is `I = {1}`, `J = {2}`.
    fn from_str(s: &str) -> Result<Self> {
        let (l, r) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("partition {s:?} (expected I:J)")))?;
        let side = |t: &str| -> Result<Vec<usize>> {
            t.split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().map_err(|_| Error::Parse(format!("partition index {p:?}"))))
                .collect()
        };
        Ok(Partition::new(side(l)?, side(r)?))
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d <= n / d {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_primes(primes: &[u64]) -> Result<()> {
    if primes.len() < 2 {
        return Err(Error::TooFewPrimes(primes.len()));
    }
    let mut seen = BTreeSet::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !seen.insert(p) {
            return Err(Error::DuplicatePrime(p));
        }
    }
    Ok(())
}

/// `(gamma_I, gamma_J)`: the products of the primes on each side.
pub fn gamma_products(primes: &[u64], partition: &Partition) -> Result<(Nat, Nat)> {
    let k = primes.len();
    let mut seen = vec![false; k];
    for &i in partition.left.iter().chain(&partition.right) {
        if i == 0 || i > k {
            return Err(Error::InvalidPartition(format!("index {i} outside 1..={k}")));
        }
        if std::mem::replace(&mut seen[i - 1], true) {
            return Err(Error::InvalidPartition(format!("index {i} appears twice")));
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPartition(format!("index {} is not covered", missing + 1)));
    }
    let product = |side: &[usize]| side.iter().fold(Nat::one(), |acc, &i| acc * primes[i - 1]);
    Ok((product(&partition.left), product(&partition.right)))
}

/// Validated input for [`perondi_chain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerondiConfig {
    primes: Vec<u64>,
    partitions: Vec<Partition>,
    delta: Nat,
}

/// Per-partition `(|gamma_I - gamma_J|, gamma_I + gamma_J)`.
fn partition_divisors(primes: &[u64], partitions: &[Partition]) -> Result<Vec<(Nat, Nat)>> {
    check_primes(primes)?;
    if partitions.is_empty() {
        return Err(Error::TooFewMembers(0));
    }
    let mut keys = Vec::with_capacity(partitions.len());
    let mut out = Vec::with_capacity(partitions.len());
    for (idx, p) in partitions.iter().enumerate() {
        let (gi, gj) = gamma_products(primes, p)?;
        if gi == gj {
            return Err(Error::EqualGammas(idx + 1));
        }
        let key = p.unordered_key();
        if keys.contains(&key) {
            return Err(Error::DuplicatePartition(idx + 1));
        }
        keys.push(key);
        let diff = if gi > gj { &gi - &gj } else { &gj - &gi };
        out.push((diff, gi + gj));
    }
    Ok(out)
}

/// The smallest `Delta` divisible by `|gamma_I - gamma_J|` and
/// `gamma_I + gamma_J` for every partition.
pub fn minimal_delta(primes: &[u64], partitions: &[Partition]) -> Result<Nat> {
    let divisors = partition_divisors(primes, partitions)?;
    Ok(divisors.iter().fold(Nat::one(), |acc, (d, s)| lcm(&acc, &lcm(d, s))))
}

impl PerondiConfig {
    pub fn new(primes: Vec<u64>, partitions: Vec<Partition>, delta: Nat) -> Result<Self> {
        if delta.is_zero() {
            return Err(Error::ZeroMultiplier);
        }
        let divisors = partition_divisors(&primes, &partitions)?;
        for (idx, (d, s)) in divisors.iter().enumerate() {
            for divisor in [d, s] {
                if !delta.is_multiple_of(divisor) {
                    return Err(Error::DeltaNotDivisible {
                        delta: delta.clone(),
                        divisor: divisor.clone(),
                        partition: idx + 1,
                    });
                }
            }
        }
        Ok(PerondiConfig { primes, partitions, delta })
    }

    /// Same as [`PerondiConfig::new`] with `Delta` from [`minimal_delta`].
    pub fn with_minimal_delta(primes: Vec<u64>, partitions: Vec<Partition>) -> Result<Self> {
        let delta = minimal_delta(&primes, &partitions)?;
        PerondiConfig::new(primes, partitions, delta)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn delta(&self) -> &Nat {
        &self.delta
    }

    /// `4 * mu_1 * ... * mu_k / Delta^2`.
    pub fn shared_difference(&self) -> ExactRational {
        let product = self.primes.iter().fold(Nat::one(), |acc, &p| acc * p);
        ExactRational::new(to_int(&(product * 4u32)), to_int(&(&self.delta * &self.delta))).expect("delta is positive")
    }
}

/// One transition `Delta/|gamma_I - gamma_J| -> Delta/(gamma_I + gamma_J)` per
/// partition, all sharing `4 mu_1 ... mu_k / Delta^2`.
pub fn perondi_chain(config: &PerondiConfig) -> Result<EquifreqChain> {
    let product = config.primes.iter().fold(Nat::one(), |acc, &p| acc * p);
    let mut transitions = Vec::with_capacity(config.partitions.len());
    for p in &config.partitions {
        let (gi, gj) = gamma_products(&config.primes, p)?;
        let sum = &gi + &gj;
        let diff = if gi > gj { &gi - &gj } else { &gj - &gi };
        // (alpha + beta)^2 - (alpha - beta)^2 = 4 alpha beta, scaled by Delta.
        if &sum * &sum - &diff * &diff != Nat::from(4u32) * &product {
            return Err(Error::Internal(format!("partition {p} does not cover the prime set")));
        }
        let alpha = exact_div(&config.delta, &diff)?;
        let beta = exact_div(&config.delta, &sum)?;
        transitions.push(Transition::new(alpha, beta)?);
    }
    let chain = EquifreqChain::new(transitions)?;
    if chain.delta() != &config.shared_difference() {
        return Err(Error::Internal("chain difference differs from 4*prod/Delta^2".into()));
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::combine;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    fn sol(s: u64, x: u64, y: u64, z: u64) -> ConicSolution {
        ConicSolution::new(s, x, y, z).unwrap()
    }

    fn tr(u: u64, l: u64) -> Transition {
        Transition::new(u, l).unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn build_chain_pair() {
        let chain = build_chain(&[sol(24, 5, 1, 1), sol(24, 7, 5, 1)], &nat(1)).unwrap();
        assert_eq!(chain.transitions(), &[tr(35, 7), tr(7, 5)]);
        assert_eq!(chain.delta().to_string(), "24/1225");
    }

    #[test]
    fn build_chain_triple() {
        let sols = [sol(24, 5, 1, 1), sol(24, 7, 5, 1), sol(24, 199, 101, 35)];
        let chain = build_chain(&sols, &nat(1)).unwrap();
        assert_eq!(chain.transitions(), &[tr(703465, 140693), tr(243775, 123725), tr(140693, 100495)]);
        let expected = ExactRational::new(24, 25u64 * 140693 * 140693).unwrap();
        assert_eq!(chain.delta(), &expected);
        // Independently: each member by cross-multiplication against the first.
        let members = [(703465u128, 140693u128), (140693, 100495), (243775, 123725)];
        let (a, b) = members[0];
        for &(c, d) in &members[1..] {
            assert_eq!((a * a - b * b) * c * c * d * d, (c * c - d * d) * a * a * b * b);
        }
    }

    #[test]
    fn build_chain_with_two_matches_combine() {
        let sols = [sol(6, 995, 505, 350), sol(6, 49, 35, 14)];
        for k in 1..4u64 {
            let chain = build_chain(&sols, &nat(k)).unwrap();
            let (q, _) = combine(&sols[0], &sols[1], &nat(k)).unwrap();
            assert_eq!(chain.transitions(), &[q.first().clone(), q.second().clone()]);
        }
    }

    #[test]
    fn build_chain_errors() {
        assert_eq!(build_chain(&[sol(24, 5, 1, 1)], &nat(1)).unwrap_err(), Error::TooFewMembers(1));
        let err = build_chain(&[sol(24, 5, 1, 1), sol(3, 2, 1, 1)], &nat(1)).unwrap_err();
        assert!(matches!(err, Error::MismatchedConic { .. }));
        let err = build_chain(&[sol(24, 5, 1, 1), sol(24, 10, 2, 2)], &nat(1)).unwrap_err();
        assert!(matches!(err, Error::DuplicateTransition { .. }));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_products(&[2, 3], &part("1:2")).unwrap(), (nat(2), nat(3)));
        assert_eq!(gamma_products(&[2, 3], &part("1,2:")).unwrap(), (nat(6), nat(1)));
        assert_eq!(gamma_products(&[2, 5], &part("2:1")).unwrap(), (nat(5), nat(2)));
    }

    #[test]
    fn gamma_rejects_bad_partitions() {
        for bad in ["1:1", "1:", "1:3", "0:1,2", "1,2:2"] {
            let err = gamma_products(&[2, 3], &part(bad)).unwrap_err();
            assert!(matches!(err, Error::InvalidPartition(_)), "{bad}");
        }
    }

    #[test]
    fn perondi_examples() {
        let cfg = PerondiConfig::new(vec![2, 3], vec![part("1,2:"), part("1:2")], nat(35)).unwrap();
        let chain = perondi_chain(&cfg).unwrap();
        assert_eq!(chain.transitions(), &[tr(35, 7), tr(7, 5)]);
        assert_eq!(chain.delta().to_string(), "24/1225");
        assert_eq!(chain.delta(), &ExactRational::new(4 * 6, 35 * 35).unwrap());

        let cfg = PerondiConfig::new(vec![2, 5], vec![part("1,2:"), part("2:1")], nat(693)).unwrap();
        let chain = perondi_chain(&cfg).unwrap();
        assert_eq!(chain.transitions(), &[tr(231, 99), tr(77, 63)]);
        assert_eq!(chain.delta().to_string(), "40/480249");
    }

    #[test]
    fn perondi_errors() {
        let err = PerondiConfig::new(vec![2, 3], vec![part("1:2")], nat(7)).unwrap_err();
        assert!(matches!(err, Error::DeltaNotDivisible { .. }));
        let err = PerondiConfig::new(vec![2, 3], vec![part("1:2"), part("2:1")], nat(35)).unwrap_err();
        assert_eq!(err, Error::DuplicatePartition(2));
        assert_eq!(
            PerondiConfig::new(vec![2, 4], vec![part("1:2")], nat(6)).unwrap_err(),
            Error::NotPrime(4)
        );
        assert_eq!(
            PerondiConfig::new(vec![3, 3], vec![part("1:2")], nat(6)).unwrap_err(),
            Error::DuplicatePrime(3)
        );
        assert_eq!(
            PerondiConfig::new(vec![3], vec![part("1:")], nat(6)).unwrap_err(),
            Error::TooFewPrimes(1)
        );
    }

    #[test]
    fn minimal_delta_examples() {
        assert_eq!(minimal_delta(&[2, 3], &[part("1,2:"), part("1:2")]).unwrap(), nat(35));
        assert_eq!(minimal_delta(&[2, 5], &[part("1,2:"), part("2:1")]).unwrap(), nat(693));
    }

    #[test]
    fn trial_division() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }
}
