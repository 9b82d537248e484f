//! Equal-frequency transition pairs.
//!
//! Two solutions of the same conic `x^2 - y^2 = s z^2` combine into a pair of
//! transitions with identical energy difference; conversely every such pair
//! splits back into two solutions of a common conic.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::conic::ConicSolution;
use crate::error::{Error, Result};
use crate::exact::{exact_div, gcd, gcd_nat, ExactRational, Nat};

/// A downward jump `upper -> lower`, with `upper > lower >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    upper: Nat,
    lower: Nat,
}

impl Transition {
    pub fn new(upper: impl Into<Nat>, lower: impl Into<Nat>) -> Result<Self> {
        let (upper, lower) = (upper.into(), lower.into());
        if upper.is_zero() || lower.is_zero() {
            return Err(Error::ZeroLevel);
        }
        if upper <= lower {
            return Err(Error::NonPositiveDifference { upper, lower });
        }
        Ok(Transition { upper, lower })
    }

    pub fn upper(&self) -> &Nat {
        &self.upper
    }

    pub fn lower(&self) -> &Nat {
        &self.lower
    }

    /// `1/lower^2 - 1/upper^2`, in units of the Rydberg energy.
    ///
    /// With `g = gcd(upper, lower)` this is `(u^2 - l^2) / (g^2 u^2 l^2)` for the
    /// coprime parts `u`, `l`; only `g^2` can share a factor with the numerator.
    pub fn delta(&self) -> ExactRational {
        self.delta_small().unwrap_or_else(|| self.delta_big())
    }

    fn delta_big(&self) -> ExactRational {
        let g = gcd_nat(&self.upper, &self.lower);
        let u = &self.upper / &g;
        let l = &self.lower / &g;
        let num = &u * &u - &l * &l;
        let g2 = &g * &g;
        let d = gcd_nat(&num, &g2);
        let ul = u * l;
        ExactRational::from_reduced(num / &d, g2 / &d * &ul * &ul)
    }

    /// Same formula in machine words; `None` if anything overflows.
    fn delta_small(&self) -> Option<ExactRational> {
        let (upper, lower) = (self.upper.to_u64()?, self.lower.to_u64()?);
        let g = upper.gcd(&lower);
        let (u, l) = ((upper / g) as u128, (lower / g) as u128);
        let num = u * u - l * l;
        let g2 = (g as u128) * (g as u128);
        let d = match u64::try_from(g2) {
            Ok(g2) => ((num % g2 as u128) as u64).gcd(&g2) as u128,
            Err(_) => num.gcd(&g2),
        };
        let ul = u * l;
        let den = (g2 / d).checked_mul(ul)?.checked_mul(ul)?;
        Some(ExactRational::from_reduced(Nat::from(num / d), Nat::from(den)))
    }

    pub fn scaled(&self, m: &Nat) -> Result<Self> {
        Transition::new(&self.upper * m, &self.lower * m)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.upper, self.lower)
    }
}

/// Two transitions with the same exact energy difference.
///
/// The transition with the larger `(upper, lower)` is always stored first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadruple {
    first: Transition,
    second: Transition,
    delta: ExactRational,
}

impl Quadruple {
    pub fn new(a: Transition, b: Transition) -> Result<Self> {
        let left = a.delta();
        let right = b.delta();
        if left != right {
            return Err(Error::SidesUnequal {
                left: Box::new(left),
                right: Box::new(right),
            });
        }
        let (first, second) = if a >= b { (a, b) } else { (b, a) };
        Ok(Quadruple {
            first,
            second,
            delta: left,
        })
    }

    /// From `(n1, n2, n3, n4)` meaning `n1 -> n2` and `n3 -> n4`.
    pub fn from_levels(levels: [Nat; 4]) -> Result<Self> {
        let [n1, n2, n3, n4] = levels;
        Quadruple::new(Transition::new(n1, n2)?, Transition::new(n3, n4)?)
    }

    pub fn first(&self) -> &Transition {
        &self.first
    }

    pub fn second(&self) -> &Transition {
        &self.second
    }

    pub fn delta(&self) -> &ExactRational {
        &self.delta
    }

    /// `n1 = n3` and `n2 = n4`: a single transition paired with itself.
    pub fn is_trivial(&self) -> bool {
        self.first == self.second
    }

    pub fn levels(&self) -> [&Nat; 4] {
        [&self.first.upper, &self.first.lower, &self.second.upper, &self.second.lower]
    }

    pub fn scaled(&self, m: &Nat) -> Result<Self> {
        Quadruple::new(self.first.scaled(m)?, self.second.scaled(m)?)
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Checks `1/n2^2 - 1/n1^2 = 1/n4^2 - 1/n3^2 > 0` and returns the common value.
pub fn verify_levels(levels: [Nat; 4]) -> Result<ExactRational> {
    Quadruple::from_levels(levels).map(|q| q.delta)
}

/// Recomputes both sides of a quadruple from scratch.
pub fn verify_quadruple(q: &Quadruple) -> Result<ExactRational> {
    let [n1, n2, n3, n4] = q.levels();
    verify_levels([n1.clone(), n2.clone(), n3.clone(), n4.clone()])
}

/// Generative certificate `(s, sol1, sol2, t1, t2)` for a quadruple
/// `(x1 t1 -> y1 t1, x2 t2 -> y2 t2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairWitness {
    pub s: Nat,
    pub sol1: ConicSolution,
    pub sol2: ConicSolution,
    pub t1: Nat,
    pub t2: Nat,
}

impl PairWitness {
    /// `x1 y1 t1 z2 == x2 y2 t2 z1`.
    pub fn product_condition_holds(&self) -> bool {
        self.sol1.xy() * &self.t1 * self.sol2.z() == self.sol2.xy() * &self.t2 * self.sol1.z()
    }

    pub fn is_consistent(&self) -> bool {
        self.sol1.s() == &self.s && self.sol2.s() == &self.s && !self.t1.is_zero() && !self.t2.is_zero() && self.product_condition_holds()
    }

    fn transitions(&self) -> Result<(Transition, Transition)> {
        Ok((
            Transition::new(self.sol1.x() * &self.t1, self.sol1.y() * &self.t1)?,
            Transition::new(self.sol2.x() * &self.t2, self.sol2.y() * &self.t2)?,
        ))
    }

    /// Rebuilds the quadruple this witness certifies.
    pub fn regenerate(&self) -> Result<Quadruple> {
        if !self.is_consistent() {
            return Err(Error::Internal("inconsistent witness".into()));
        }
        let (a, b) = self.transitions()?;
        Quadruple::new(a, b)
    }

    fn swapped(self) -> Self {
        PairWitness {
            s: self.s,
            sol1: self.sol2,
            sol2: self.sol1,
            t1: self.t2,
            t2: self.t1,
        }
    }
}

/// Pairs two solutions of one conic using the `k`-th multiple of the minimal
/// `(t1, t2) = (x2 y2 z1, x1 y1 z2) / gcd(x1 y1 z2, x2 y2 z1)`.
///
/// The returned witness follows the quadruple's ordering, so its `sol1` is
/// the input `sol2` whenever the second transition sorts first.
pub fn combine(sol1: &ConicSolution, sol2: &ConicSolution, k: &Nat) -> Result<(Quadruple, PairWitness)> {
    if sol1.s() != sol2.s() {
        return Err(Error::MismatchedConic {
            left: sol1.s().clone(),
            right: sol2.s().clone(),
        });
    }
    if k.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    let left = sol1.xy() * sol2.z();
    let right = sol2.xy() * sol1.z();
    let g = gcd(&left, &right)?;
    let witness = PairWitness {
        s: sol1.s().clone(),
        sol1: sol1.clone(),
        sol2: sol2.clone(),
        t1: k * exact_div(&right, &g)?,
        t2: k * exact_div(&left, &g)?,
    };
    let (a, b) = witness.transitions()?;
    let swap = a.cmp(&b) == Ordering::Less;
    let quad = Quadruple::new(a, b)?;
    let witness = if swap { witness.swapped() } else { witness };
    Ok((quad, witness))
}

/// The gcd-canonical witness of a valid quadruple.
///
/// Strips `t = gcd(n_upper, n_lower)` from each transition, reduces
/// `x1 y1 t1 / (x2 y2 t2)` to `z1 / z2`, and reads off the common `s`.
pub fn decompose(q: &Quadruple) -> Result<PairWitness> {
    verify_quadruple(q)?;
    let split = |t: &Transition| -> Result<(Nat, Nat, Nat)> {
        let g = gcd(&t.upper, &t.lower)?;
        Ok((&t.upper / &g, &t.lower / &g, g))
    };
    let (x1, y1, t1) = split(&q.first)?;
    let (x2, y2, t2) = split(&q.second)?;

    let num = &x1 * &y1 * &t1;
    let den = &x2 * &y2 * &t2;
    let g = gcd(&num, &den)?;
    let z1 = num / &g;
    let z2 = den / &g;

    let s = exact_div(&(&x1 * &x1 - &y1 * &y1), &(&z1 * &z1))?;
    if s.is_zero() || &x2 * &x2 - &y2 * &y2 != &s * &z2 * &z2 {
        return Err(Error::Internal(format!("{q} does not split over a common conic")));
    }
    let witness = PairWitness {
        sol1: ConicSolution::new(s.clone(), x1, y1, z1)?,
        sol2: ConicSolution::new(s.clone(), x2, y2, z2)?,
        s,
        t1,
        t2,
    };
    if witness.regenerate()? != *q {
        return Err(Error::Internal(format!("witness for {q} does not regenerate it")));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    fn sol(s: u64, x: u64, y: u64, z: u64) -> ConicSolution {
        ConicSolution::new(s, x, y, z).unwrap()
    }

    fn is_unit_witness(w: &PairWitness) -> bool {
        w.t1.is_one() && w.t2.is_one()
    }

    fn levels(n: [u64; 4]) -> [Nat; 4] {
        n.map(Nat::from)
    }

    fn quad(n: [u64; 4]) -> Quadruple {
        Quadruple::from_levels(n.map(Nat::from)).unwrap()
    }

    /// Cross-multiplied check of `1/b^2 - 1/a^2 == 1/d^2 - 1/c^2`, no rationals.
    fn cross_check(n: [u64; 4]) -> bool {
        let [a, b, c, d] = n.map(|v| Nat::from(v) * Nat::from(v));
        (&a - &b) * &c * &d == (&c - &d) * &a * &b
    }

    #[test]
    fn combine_fig3() {
        let (q, w) = combine(&sol(6, 995, 505, 350), &sol(6, 49, 35, 14), &nat(4)).unwrap();
        assert_eq!(q, quad([6825700, 3464300, 3939404, 2813860]));
        assert_eq!((w.t1.clone(), w.t2.clone()), (nat(6860), nat(80396)));
        assert_eq!(w.sol1, sol(6, 995, 505, 350));
        assert!(cross_check([6825700, 3464300, 3939404, 2813860]));
    }

    #[test]
    fn combine_trivial_and_s3() {
        let s = sol(1, 5, 4, 3);
        let (q, w) = combine(&s, &s, &nat(1)).unwrap();
        assert_eq!(q, quad([5, 4, 5, 4]));
        assert!(q.is_trivial());
        assert!(is_unit_witness(&w));

        let (q, w) = combine(&sol(3, 2, 1, 1), &sol(3, 13, 11, 4), &nat(1)).unwrap();
        assert_eq!(q, quad([286, 143, 104, 88]));
        assert_eq!((w.t1, w.t2), (nat(143), nat(8)));
        assert_eq!(q.delta().to_string(), "3/81796");
        assert!(cross_check([286, 143, 104, 88]));
    }

    #[test]
    fn combine_rejects_mismatched_s() {
        let err = combine(&sol(3, 2, 1, 1), &sol(24, 7, 5, 1), &nat(1)).unwrap_err();
        assert!(matches!(err, Error::MismatchedConic { .. }));
        assert_eq!(
            combine(&sol(3, 2, 1, 1), &sol(3, 2, 1, 1), &nat(0)).unwrap_err(),
            Error::ZeroMultiplier
        );
    }

    #[test]
    fn combine_orders_witness_with_quadruple() {
        let (q, w) = combine(&sol(24, 7, 5, 1), &sol(24, 5, 1, 1), &nat(1)).unwrap();
        assert_eq!(q, quad([35, 7, 7, 5]));
        assert_eq!(w.sol1, sol(24, 5, 1, 1));
        assert_eq!(w.regenerate().unwrap(), q);
    }

    #[test]
    fn verify_examples() {
        let d = verify_levels(levels([35, 7, 7, 5])).unwrap();
        assert_eq!(d.to_string(), "24/1225");
        let d = verify_levels(levels([5, 4, 5, 4])).unwrap();
        assert_eq!(d.to_string(), "9/400");
        match verify_levels(levels([3, 2, 4, 3])).unwrap_err() {
            Error::SidesUnequal { left, right } => {
                assert_eq!(left.to_string(), "5/36");
                assert_eq!(right.to_string(), "7/144");
            }
            e => panic!("{e}"),
        }
        assert!(!cross_check([3, 2, 4, 3]));
    }

    #[test]
    fn verify_error_kinds_are_distinct() {
        let e = verify_levels(levels([2, 3, 3, 2])).unwrap_err();
        assert!(matches!(e, Error::NonPositiveDifference { .. }));
        let e = verify_levels(levels([4, 4, 3, 2])).unwrap_err();
        assert!(matches!(e, Error::NonPositiveDifference { .. }));
        let e = verify_levels(levels([0, 1, 3, 2])).unwrap_err();
        assert_eq!(e, Error::ZeroLevel);
    }

    #[test]
    fn decompose_examples() {
        let w = decompose(&quad([35, 7, 7, 5])).unwrap();
        assert_eq!(w.s, nat(24));
        assert_eq!((w.sol1.clone(), w.sol2.clone()), (sol(24, 5, 1, 1), sol(24, 7, 5, 1)));
        assert_eq!((w.t1, w.t2), (nat(7), nat(1)));

        let w = decompose(&quad([6825700, 3464300, 3939404, 2813860])).unwrap();
        assert_eq!(w.s, nat(24));
        assert_eq!(w.sol1, sol(24, 199, 101, 35));
        assert_eq!(w.sol2, sol(24, 7, 5, 1));
        assert_eq!((w.t1.clone(), w.t2.clone()), (nat(34300), nat(562772)));
        assert!(w.product_condition_holds());

        let w = decompose(&quad([2, 1, 2, 1])).unwrap();
        assert_eq!(w.s, nat(3));
        assert_eq!(w.sol1, sol(3, 2, 1, 1));
        assert_eq!(w.sol2, sol(3, 2, 1, 1));
        assert!(is_unit_witness(&w));
    }

    #[test]
    fn decompose_differs_from_generating_witness_but_regenerates() {
        let (q, generating) = combine(&sol(6, 995, 505, 350), &sol(6, 49, 35, 14), &nat(4)).unwrap();
        let canonical = decompose(&q).unwrap();
        assert_ne!(canonical, generating);
        assert_eq!(canonical.regenerate().unwrap(), q);
        assert_eq!(generating.regenerate().unwrap(), q);
    }

    #[test]
    fn delta_matches_difference_of_inverse_squares() {
        for u in 2..120u64 {
            for l in 1..u {
                let t = Transition::new(u, l).unwrap();
                let direct = ExactRational::inverse_square(&nat(l)).unwrap() - ExactRational::inverse_square(&nat(u)).unwrap();
                assert_eq!(t.delta(), direct, "{u} -> {l}");
            }
        }
    }

    #[test]
    fn word_and_bigint_deltas_agree() {
        let big = u64::MAX / 3;
        let cases = [
            (2, 1),
            (35, 7),
            (6825700, 3464300),
            (big, big - 1),
            (u64::MAX, 1),
            (u64::MAX, u64::MAX - 2),
            (big * 2, big),
        ];
        for (u, l) in cases {
            let t = Transition::new(u, l).unwrap();
            if let Some(small) = t.delta_small() {
                assert_eq!(small, t.delta_big(), "{t}");
            }
            assert_eq!(t.delta(), t.delta_big());
        }
        // Coprime levels near 2^64 overflow the word denominator.
        assert!(Transition::new(u64::MAX, u64::MAX - 1).unwrap().delta_small().is_none());
    }

    #[test]
    fn scaling_divides_delta_by_square() {
        let q = quad([35, 7, 7, 5]);
        for m in 1..10u64 {
            let scaled = q.scaled(&nat(m)).unwrap();
            let expected = (q.delta() / &ExactRational::from_integer(m * m)).unwrap();
            assert_eq!(scaled.delta(), &expected);
        }
    }
}
