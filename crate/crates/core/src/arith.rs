//! Integer Hamilton quaternions and the generator multiset `S_p`.
//!
//! Quaternions of norm `p` are found by exhaustive box search over
//! `|a_i| <= floor(sqrt(p))`. Jacobi's four-square theorem says there are
//! exactly `8(p + 1)` of them when `p` is an odd prime; the selection of
//! `p + 1` generators out of those depends on `p mod 4`.

use std::fmt;
use std::ops::Neg;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("integer overflow in quaternion arithmetic")]
    Overflow,
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("generator selection for p = {p} produced {found} elements, expected {expected}")]
    GeneratorCount { p: i64, found: usize, expected: usize },
    #[error("imaginary generator count check failed for p = {p}: t = {t}, three-square solutions = {solutions}")]
    ThreeSquareMismatch { p: i64, t: usize, solutions: usize },
}

/// An element `a0 + a1 i + a2 j + a3 k` of the quaternions over the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntQuaternion {
    pub a0: i64,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
}

impl IntQuaternion {
    pub const ZERO: Self = Self::new(0, 0, 0, 0);
    pub const ONE: Self = Self::new(1, 0, 0, 0);
    pub const I: Self = Self::new(0, 1, 0, 0);
    pub const J: Self = Self::new(0, 0, 1, 0);
    pub const K: Self = Self::new(0, 0, 0, 1);

    pub const fn new(a0: i64, a1: i64, a2: i64, a3: i64) -> Self {
        Self { a0, a1, a2, a3 }
    }

    pub fn coeffs(&self) -> [i64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a0, -self.a1, -self.a2, -self.a3)
    }

    pub fn is_pure_imaginary(&self) -> bool {
        self.a0 == 0
    }

    /// `a0² + a1² + a2² + a3²`, with overflow reported as an error.
    pub fn norm(&self) -> Result<i64, ArithError> {
        self.coeffs().iter().try_fold(0i64, |acc, &c| {
            c.checked_mul(c)
                .and_then(|sq| acc.checked_add(sq))
                .ok_or(ArithError::Overflow)
        })
    }

    /// Hamilton product using `i² = j² = k² = -1` and `ij = -ji = k`
    /// (plus cyclic permutations).
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ArithError> {
        let [a0, a1, a2, a3] = self.coeffs();
        let [b0, b1, b2, b3] = rhs.coeffs();
        // each coordinate is a signed sum of four products
        let dot = |terms: [(i64, i64, i64); 4]| -> Result<i64, ArithError> {
            terms.iter().try_fold(0i64, |acc, &(sign, x, y)| {
                x.checked_mul(y)
                    .and_then(|prod| prod.checked_mul(sign))
                    .and_then(|prod| acc.checked_add(prod))
                    .ok_or(ArithError::Overflow)
            })
        };
        Ok(Self::new(
            dot([(1, a0, b0), (-1, a1, b1), (-1, a2, b2), (-1, a3, b3)])?,
            dot([(1, a0, b1), (1, a1, b0), (1, a2, b3), (-1, a3, b2)])?,
            dot([(1, a0, b2), (-1, a1, b3), (1, a2, b0), (1, a3, b1)])?,
            dot([(1, a0, b3), (1, a1, b2), (-1, a2, b1), (1, a3, b0)])?,
        ))
    }
}

impl Neg for IntQuaternion {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.a0, -self.a1, -self.a2, -self.a3)
    }
}

impl fmt::Display for IntQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a0)?;
        for (c, unit) in [(self.a1, 'i'), (self.a2, 'j'), (self.a3, 'k')] {
            if c < 0 {
                write!(f, "{c}{unit}")?;
            } else {
                write!(f, "+{c}{unit}")?;
            }
        }
        Ok(())
    }
}

/// Hamilton product; see [`IntQuaternion::checked_mul`].
pub fn quat_mul(x: &IntQuaternion, y: &IntQuaternion) -> Result<IntQuaternion, ArithError> {
    x.checked_mul(y)
}

/// Trial-division primality test.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn require_odd_prime(p: i64) -> Result<(), ArithError> {
    if p % 2 != 0 && is_prime(p) {
        Ok(())
    } else {
        Err(ArithError::NotOddPrime(p))
    }
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All integer quaternions of norm exactly `p`, in lexicographic order of
/// `(a0, a1, a2, a3)`.
pub fn enumerate_norm_p(p: i64) -> Result<Vec<IntQuaternion>, ArithError> {
    require_odd_prime(p)?;
    let bound = isqrt(p);
    let mut found = Vec::with_capacity(8 * (p as usize + 1));
    for a0 in -bound..=bound {
        let r0 = p - a0 * a0;
        for a1 in -bound..=bound {
            let r1 = r0 - a1 * a1;
            if r1 < 0 {
                continue;
            }
            for a2 in -bound..=bound {
                let r2 = r1 - a2 * a2;
                if r2 < 0 {
                    continue;
                }
                let a3 = isqrt(r2);
                if a3 * a3 != r2 {
                    continue;
                }
                if a3 == 0 {
                    found.push(IntQuaternion::new(a0, a1, a2, 0));
                } else {
                    found.push(IntQuaternion::new(a0, a1, a2, -a3));
                    found.push(IntQuaternion::new(a0, a1, a2, a3));
                }
            }
        }
    }
    Ok(found)
}

/// The `p + 1` generators of norm `p`.
///
/// `elements` lists the conjugate pairs first as `α_1, ᾱ_1, …, α_s, ᾱ_s`,
/// then the purely imaginary involutions `β_1, …, β_t`. Within each pair the
/// lexicographically smaller quaternion is taken as the representative, and
/// representatives are listed in increasing lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSet {
    pub prime_p: i64,
    pub elements: Vec<IntQuaternion>,
    pub s: usize,
    pub t: usize,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn conjugate_pairs(&self) -> impl Iterator<Item = (IntQuaternion, IntQuaternion)> + '_ {
        self.elements[..2 * self.s]
            .chunks_exact(2)
            .map(|pair| (pair[0], pair[1]))
    }

    pub fn involutions(&self) -> &[IntQuaternion] {
        &self.elements[2 * self.s..]
    }
}

/// Number of ordered triples of positive integers with `a² + b² + c² = p`.
fn positive_three_square_count(p: i64) -> usize {
    let bound = isqrt(p);
    let mut count = 0;
    for a in 1..=bound {
        for b in 1..=bound {
            let rest = p - a * a - b * b;
            if rest >= 1 {
                let c = isqrt(rest);
                if c * c == rest {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Keeps the lexicographically smaller member of each `{x, partner(x)}` pair.
fn pick_representatives(
    candidates: &[IntQuaternion],
    partner: impl Fn(&IntQuaternion) -> IntQuaternion,
) -> Vec<IntQuaternion> {
    let mut reps: Vec<IntQuaternion> = candidates
        .iter()
        .copied()
        .filter(|x| *x <= partner(x))
        .collect();
    reps.sort();
    reps
}

pub fn build_sp(p: i64) -> Result<GeneratorSet, ArithError> {
    require_odd_prime(p)?;
    let all = enumerate_norm_p(p)?;
    let mut elements = Vec::with_capacity(p as usize + 1);

    let (pairs, involutions): (Vec<_>, Vec<_>) = if p % 4 == 1 {
        let odd: Vec<_> = all
            .into_iter()
            .filter(|x| x.a0 >= 1 && x.a0 % 2 == 1)
            .collect();
        (pick_representatives(&odd, IntQuaternion::conjugate), Vec::new())
    } else {
        let even_positive: Vec<_> = all
            .iter()
            .copied()
            .filter(|x| x.a0 >= 2 && x.a0 % 2 == 0)
            .collect();
        let imaginary: Vec<_> = all.into_iter().filter(|x| x.a0 == 0).collect();
        (
            pick_representatives(&even_positive, IntQuaternion::conjugate),
            pick_representatives(&imaginary, |x| -*x),
        )
    };

    for alpha in &pairs {
        elements.push(*alpha);
        elements.push(alpha.conjugate());
    }
    elements.extend(involutions.iter().copied());

    let set = GeneratorSet {
        prime_p: p,
        s: pairs.len(),
        t: involutions.len(),
        elements,
    };
    let expected = p as usize + 1;
    if set.len() != expected {
        return Err(ArithError::GeneratorCount {
            p,
            found: set.len(),
            expected,
        });
    }
    let solutions = if p % 4 == 3 {
        positive_three_square_count(p)
    } else {
        0
    };
    if set.t != 4 * solutions {
        return Err(ArithError::ThreeSquareMismatch {
            p,
            t: set.t,
            solutions,
        });
    }
    Ok(set)
}
