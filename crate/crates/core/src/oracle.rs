//! Brute-force ground truth: every transition up to a level bound, grouped by
//! its exact energy difference.
//!
//! Each transition `u -> l` is keyed by the reduced fraction
//! `(u'^2 - l'^2) / (g^2 u'^2 l'^2)` where `g = gcd(u, l)`, `u = g u'`,
//! `l = g l'`. Since `gcd(u'^2 - l'^2, u'^2 l'^2) = 1`, only `g^2` can share a
//! factor with the numerator, so the key is canonical after one small gcd and
//! fits in fixed-width integers for any `u32` bound. Entries are then sorted by
//! `(denominator, numerator, upper, lower)`; runs of equal keys are groups.
//! Sorting a total order of distinct entries gives the same result whatever
//! the thread count.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::ExactRational;
use crate::pairs::{decompose, Quadruple, Transition};

/// Bounds above this need `allow_large`.
pub const DEFAULT_BOUND_LIMIT: u64 = 100_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// A dedicated pool with this many workers. `Threads(1)` is sequential.
    Threads(usize),
    /// The global rayon pool, or sequential without the `parallel` feature.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateOptions {
    pub parallelism: Parallelism,
    /// Lift the [`DEFAULT_BOUND_LIMIT`] guard.
    pub allow_large: bool,
}

/// Canonical difference of one transition; ordered by denominator first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct DeltaKey {
    den: u128,
    num: u64,
}

impl DeltaKey {
    pub(crate) fn of(upper: u32, lower: u32) -> Self {
        debug_assert!(upper > lower && lower >= 1);
        let g = upper.gcd(&lower) as u64;
        let (u, l) = (upper as u64 / g, lower as u64 / g);
        let num = (u - l) * (u + l);
        let g2 = g * g;
        let d = num.gcd(&g2);
        let ul = (u * l) as u128;
        DeltaKey {
            den: (g2 / d) as u128 * ul * ul,
            num: num / d,
        }
    }

    fn to_rational(self) -> ExactRational {
        ExactRational::new(BigInt::from(self.num), BigInt::from(self.den)).expect("positive denominator")
    }
}

type Entry = (DeltaKey, u32, u32);

/// Transitions sharing one exact difference; members ascending by `(upper, lower)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub delta: ExactRational,
    pub members: Vec<Transition>,
}

impl Group {
    pub fn pair_count(&self) -> usize {
        self.members.len() * (self.members.len() - 1) / 2
    }
}

/// All groups of size >= 2 among transitions with `upper <= bound`, ordered
/// by `(denominator, numerator)` of their difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupIndex {
    pub bound: u32,
    pub groups: Vec<Group>,
}

impl GroupIndex {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn get(&self, delta: &ExactRational) -> Option<&Group> {
        self.groups
            .binary_search_by(|g| (g.delta.denom(), g.delta.numer()).cmp(&(delta.denom(), delta.numer())))
            .ok()
            .map(|i| &self.groups[i])
    }

    /// Whether both transitions of `q` are members of one group.
    pub fn contains_pair(&self, q: &Quadruple) -> bool {
        self.get(q.delta())
            .is_some_and(|g| g.members.binary_search(q.first()).is_ok() && g.members.binary_search(q.second()).is_ok())
    }
}

fn check_bound(bound: u64, allow_large: bool) -> Result<u32> {
    if bound < 2 {
        return Err(Error::BoundTooSmall(bound));
    }
    if bound > DEFAULT_BOUND_LIMIT && !allow_large {
        return Err(Error::BoundTooLarge {
            bound,
            limit: DEFAULT_BOUND_LIMIT,
        });
    }
    u32::try_from(bound).map_err(|_| Error::BoundTooLarge {
        bound,
        limit: u32::MAX as u64,
    })
}

fn entries_for(upper: u32) -> impl Iterator<Item = Entry> {
    (1..upper).map(move |lower| (DeltaKey::of(upper, lower), upper, lower))
}

fn collect_sorted_sequential(bound: u32) -> Vec<Entry> {
    let mut entries: Vec<Entry> = (2..=bound).flat_map(entries_for).collect();
    entries.sort_unstable();
    entries
}

#[cfg(feature = "parallel")]
fn collect_sorted_parallel(bound: u32) -> Vec<Entry> {
    use rayon::prelude::*;

    let mut entries: Vec<Entry> = (2..=bound).into_par_iter().flat_map_iter(entries_for).collect();
    entries.par_sort_unstable();
    entries
}

/// Runs `f` under the requested parallelism. Without the `parallel` feature
/// everything is sequential.
fn with_parallelism<T: Send>(
    parallelism: Parallelism,
    sequential: impl FnOnce() -> T,
    #[allow(unused_variables)] parallel: impl FnOnce() -> T + Send,
) -> T {
    match parallelism {
        Parallelism::Sequential | Parallelism::Threads(0 | 1) => sequential(),
        #[cfg(feature = "parallel")]
        Parallelism::Auto => parallel(),
        #[cfg(feature = "parallel")]
        Parallelism::Threads(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(parallel),
            Err(_) => sequential(),
        },
        #[cfg(not(feature = "parallel"))]
        _ => sequential(),
    }
}

fn group_runs(entries: &[Entry]) -> Vec<Group> {
    entries
        .chunk_by(|a, b| a.0 == b.0)
        .filter(|run| run.len() >= 2)
        .map(|run| Group {
            delta: run[0].0.to_rational(),
            members: run
                .iter()
                .map(|&(_, u, l)| Transition::new(u, l).expect("upper > lower >= 1"))
                .collect(),
        })
        .collect()
}

pub fn enumerate_groups(bound: u64) -> Result<GroupIndex> {
    enumerate_groups_with(bound, EnumerateOptions::default())
}

pub fn enumerate_groups_with(bound: u64, options: EnumerateOptions) -> Result<GroupIndex> {
    let bound = check_bound(bound, options.allow_large)?;
    #[cfg(feature = "parallel")]
    let parallel = move || collect_sorted_parallel(bound);
    #[cfg(not(feature = "parallel"))]
    let parallel = move || collect_sorted_sequential(bound);
    let entries = with_parallelism(options.parallelism, move || collect_sorted_sequential(bound), parallel);
    Ok(GroupIndex {
        bound,
        groups: group_runs(&entries),
    })
}

/// A pair from a group that failed to decompose and regenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditFailure {
    pub first: Transition,
    pub second: Transition,
    pub error: Error,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub bound: u32,
    pub groups: usize,
    pub pairs_checked: usize,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_pair(a: &Transition, b: &Transition) -> Result<()> {
    let q = Quadruple::new(a.clone(), b.clone())?;
    let w = decompose(&q)?;
    if !w.is_consistent() {
        return Err(Error::Internal("witness violates the product condition".into()));
    }
    if w.regenerate()? != q {
        return Err(Error::Internal("witness does not regenerate the quadruple".into()));
    }
    Ok(())
}

fn audit_group(group: &Group) -> Vec<AuditFailure> {
    let mut failures = Vec::new();
    for (i, a) in group.members.iter().enumerate() {
        for b in &group.members[i + 1..] {
            if let Err(error) = check_pair(a, b) {
                failures.push(AuditFailure {
                    first: a.clone(),
                    second: b.clone(),
                    error,
                });
            }
        }
    }
    failures
}

/// Decomposes every unordered pair of distinct members of every group.
pub fn audit_index(index: &GroupIndex, parallelism: Parallelism) -> AuditReport {
    let sequential = || index.groups.iter().flat_map(audit_group).collect::<Vec<_>>();
    #[cfg(feature = "parallel")]
    let parallel = || {
        use rayon::prelude::*;
        index.groups.par_iter().flat_map_iter(audit_group).collect::<Vec<_>>()
    };
    #[cfg(not(feature = "parallel"))]
    let parallel = sequential;
    let failures = with_parallelism(parallelism, sequential, parallel);
    AuditReport {
        bound: index.bound,
        groups: index.groups.len(),
        pairs_checked: index.groups.iter().map(Group::pair_count).sum(),
        failures,
    }
}

/// Enumerates up to `bound` and audits the result.
pub fn audit_completeness(bound: u64, options: EnumerateOptions) -> Result<AuditReport> {
    let index = enumerate_groups_with(bound, options)?;
    Ok(audit_index(&index, options.parallelism))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_matches_exact_difference() {
        for u in 2..=150u32 {
            for l in 1..u {
                let t = Transition::new(u, l).unwrap();
                assert_eq!(DeltaKey::of(u, l).to_rational(), t.delta(), "{u} -> {l}");
            }
        }
    }

    #[test]
    fn key_at_u32_extremes() {
        let (u, l) = (u32::MAX, u32::MAX - 1);
        let t = Transition::new(u, l).unwrap();
        assert_eq!(DeltaKey::of(u, l).to_rational(), t.delta());
        let (u, l) = (4_294_967_292u32, 2_147_483_646u32);
        let t = Transition::new(u, l).unwrap();
        assert_eq!(DeltaKey::of(u, l).to_rational(), t.delta());
    }

    #[test]
    fn small_bounds_are_empty() {
        assert!(enumerate_groups(2).unwrap().is_empty());
        assert!(enumerate_groups(4).unwrap().is_empty());
    }

    #[test]
    fn bound_guard() {
        assert_eq!(enumerate_groups(1), Err(Error::BoundTooSmall(1)));
        assert!(matches!(enumerate_groups(100_001), Err(Error::BoundTooLarge { .. })));
        let opts = EnumerateOptions {
            allow_large: true,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_groups_with(u32::MAX as u64 + 1, opts),
            Err(Error::BoundTooLarge { .. })
        ));
    }

    #[test]
    fn group_at_35() {
        let index = enumerate_groups(35).unwrap();
        let delta = ExactRational::new(24, 1225).unwrap();
        let group = index.get(&delta).unwrap();
        assert_eq!(
            group.members,
            [Transition::new(7u32, 5u32).unwrap(), Transition::new(35u32, 7u32).unwrap()]
        );
    }

    #[test]
    fn sequential_and_threaded_agree() {
        let seq = enumerate_groups_with(
            300,
            EnumerateOptions {
                parallelism: Parallelism::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        let par = enumerate_groups_with(
            300,
            EnumerateOptions {
                parallelism: Parallelism::Threads(3),
                ..Default::default()
            },
        )
        .unwrap();
        let auto = enumerate_groups(300).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq, auto);
    }

    #[test]
    fn audit_vacuous_and_small() {
        let r = audit_completeness(4, EnumerateOptions::default()).unwrap();
        assert!(r.passed());
        assert_eq!((r.groups, r.pairs_checked), (0, 0));
        let r = audit_completeness(35, EnumerateOptions::default()).unwrap();
        assert!(r.passed());
        assert!(r.pairs_checked >= 1);
    }
}
