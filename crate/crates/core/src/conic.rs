//! Integer solutions of `x^2 - y^2 = s z^2` through rational points of the
//! conic `a^2 - 1 = s b^2`.
//!
//! A line of rational slope `q` through `(1, 0)` meets the conic in exactly
//! one more rational point, and every rational point arises this way. Clearing
//! denominators of that point gives the primitive integer triple; any nonzero
//! multiplier `l` scales it.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{exact_div, gcd, gcd_nat, normalize, to_int, Nat};

/// Rational slope `q1/q2` of a chord through `(1, 0)`.
///
/// Stored reduced with both parts positive. A negative slope only flips the
/// sign of the intersection point, so it is folded onto its absolute value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    q1: Nat,
    q2: Nat,
}

impl Slope {
    pub fn new(q1: impl Into<BigInt>, q2: impl Into<BigInt>) -> Result<Self> {
        let (q1, q2) = (q1.into(), q2.into());
        if q2.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if q1.is_zero() {
            return Err(Error::ZeroSlope);
        }
        let (q1, q2) = (q1.magnitude().clone(), q2.magnitude().clone());
        let g = gcd_nat(&q1, &q2);
        Ok(Slope { q1: q1 / &g, q2: q2 / &g })
    }

    pub fn q1(&self) -> &Nat {
        &self.q1
    }

    pub fn q2(&self) -> &Nat {
        &self.q2
    }

    fn is_degenerate_for(&self, s: &Nat) -> bool {
        s * &self.q1 * &self.q1 == &self.q2 * &self.q2
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.q1, self.q2)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("slope {s:?}")));
        match s.split_once('/') {
            Some((a, b)) => Slope::new(parse(a)?, parse(b)?),
            None => Slope::new(parse(s)?, 1),
        }
    }
}

/// The second intersection `(a, b) = (a1/a2, b1/b2)` of a chord with
/// `a^2 - 1 = s b^2`. Components are left unreduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub a1: BigInt,
    pub a2: BigInt,
    pub b1: BigInt,
    pub b2: BigInt,
}

impl RationalPoint {
    /// Checks `a^2 - 1 = s b^2` with denominators cleared.
    pub fn lies_on(&self, s: &Nat) -> bool {
        if self.a2.is_zero() || self.b2.is_zero() {
            return false;
        }
        let lhs = {
            let num = &self.a1 * &self.b2;
            let den = &self.a2 * &self.b2;
            &num * &num - &den * &den
        };
        let rhs = {
            let t = &self.a2 * &self.b1;
            to_int(s) * &t * &t
        };
        lhs == rhs
    }
}

/// A positive solution `(x, y, z)` of `x^2 - y^2 = s z^2`, tagged with its `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConicSolution {
    s: Nat,
    x: Nat,
    y: Nat,
    z: Nat,
}

impl ConicSolution {
    pub fn new(s: impl Into<Nat>, x: impl Into<Nat>, y: impl Into<Nat>, z: impl Into<Nat>) -> Result<Self> {
        let (s, x, y, z) = (s.into(), x.into(), y.into(), z.into());
        if s.is_zero() {
            return Err(Error::ZeroParameter);
        }
        if y.is_zero() || z.is_zero() || x <= y || !verify_conic(&s, &x, &y, &z) {
            return Err(Error::InvalidConicSolution { s, x, y, z });
        }
        Ok(ConicSolution { s, x, y, z })
    }

    pub fn s(&self) -> &Nat {
        &self.s
    }

    pub fn x(&self) -> &Nat {
        &self.x
    }

    pub fn y(&self) -> &Nat {
        &self.y
    }

    pub fn z(&self) -> &Nat {
        &self.z
    }

    /// `x * y`, the factor that recurs in the pairing condition.
    pub(crate) fn xy(&self) -> Nat {
        &self.x * &self.y
    }

    /// Multiplies every component by `m >= 1`.
    pub fn scaled(&self, m: &Nat) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::ZeroMultiplier);
        }
        Ok(ConicSolution {
            s: self.s.clone(),
            x: &self.x * m,
            y: &self.y * m,
            z: &self.z * m,
        })
    }

    /// Splits the solution into its primitive triple and the multiplier `l`.
    pub fn primitive(&self) -> (ConicSolution, Nat) {
        let g = gcd_nat(&gcd_nat(&self.x, &self.y), &self.z);
        let prim = ConicSolution {
            s: self.s.clone(),
            x: &self.x / &g,
            y: &self.y / &g,
            z: &self.z / &g,
        };
        (prim, g)
    }
}

impl fmt::Display for ConicSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}) [s = {}]", self.x, self.y, self.z, self.s)
    }
}

/// `x^2 - y^2 == s z^2`, exactly. Requires nothing of the inputs.
pub fn verify_conic(s: &Nat, x: &Nat, y: &Nat, z: &Nat) -> bool {
    x >= y && x * x - y * y == s * z * z
}

/// Intersection of the chord of slope `q` through `(1, 0)` with the conic:
/// `a1 = s q1^2 + q2^2`, `a2 = b2 = s q1^2 - q2^2`, `b1 = 2 q1 q2`.
pub fn rational_point(s: &Nat, q: &Slope) -> Result<RationalPoint> {
    if s.is_zero() {
        return Err(Error::ZeroParameter);
    }
    if q.is_degenerate_for(s) {
        return Err(Error::DegenerateSlope {
            s: s.clone(),
            q1: q.q1.clone(),
            q2: q.q2.clone(),
        });
    }
    let sq1 = to_int(&(s * &q.q1 * &q.q1));
    let q2sq = to_int(&(&q.q2 * &q.q2));
    let a2 = &sq1 - &q2sq;
    Ok(RationalPoint {
        a1: &sq1 + &q2sq,
        b1: to_int(&(BigUint::from(2u8) * &q.q1 * &q.q2)),
        b2: a2.clone(),
        a2,
    })
}

/// Integer triple `l * (a1 b2, a2 b2, a2 b1) / gcd(a2, b2)` built from the
/// chord of slope `q`, with `a` and `b` taken in lowest terms and signs
/// dropped so that `x > y > 0`, `z > 0`.
///
/// With `l = 1` this is the primitive solution on that chord.
pub fn integer_solution(s: &Nat, q: &Slope, l: &BigInt) -> Result<ConicSolution> {
    if l.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    let p = rational_point(s, q)?;
    let a = normalize(p.a1, p.a2)?;
    let b = normalize(p.b1, p.b2)?;
    let (a1, a2) = (a.numer(), a.denom());
    let (b1, b2) = (b.numer(), b.denom());
    let g2 = BigInt::from_biguint(Sign::Plus, gcd(a2.magnitude(), b2.magnitude())?);
    let x = l * a1 * b2 / &g2;
    let y = l * a2 * b2 / &g2;
    let z = l * a2 * b1 / &g2;
    ConicSolution::new(s.clone(), x.into_parts().1, y.into_parts().1, z.into_parts().1)
        .map_err(|e| Error::Internal(format!("chord construction produced a non-solution: {e}")))
}

/// The slope `z / (x - y)` of the chord through `(1, 0)` and `(x/y, z/y)`.
pub fn slope_from_solution(sol: &ConicSolution) -> Slope {
    let diff = &sol.x - &sol.y;
    Slope::new(to_int(&sol.z), to_int(&diff)).expect("x > y and z > 0 by construction")
}

/// Recovers `(q, l)` with `integer_solution(s, q, l) == sol`.
pub fn chord_parameters(sol: &ConicSolution) -> Result<(Slope, Nat)> {
    let q = slope_from_solution(sol);
    let prim = integer_solution(&sol.s, &q, &BigInt::one())?;
    let l = exact_div(&sol.x, &prim.x)?;
    if prim.scaled(&l)? != *sol {
        return Err(Error::Internal(format!("{sol} is not a multiple of {prim}")));
    }
    Ok((q, l))
}

/// All reduced positive slopes `q1/q2` with `q1 <= max_q1`, `q2 <= max_q2`,
/// in lexicographic order.
pub fn reduced_slopes(max_q1: u64, max_q2: u64) -> impl Iterator<Item = Slope> {
    (1..=max_q1).flat_map(move |q1| {
        (1..=max_q2).filter(move |&q2| q1.gcd(&q2) == 1).map(move |q2| Slope {
            q1: q1.into(),
            q2: q2.into(),
        })
    })
}
