//! Arithmetic in `F_q`, 2×2 matrices over `F_q`, and the projective groups
//! `PGL₂(q) ⊃ PSL₂(q)`.
//!
//! Projective classes are stored by a canonical representative: the matrix
//! scaled so that its first nonzero entry (row-major) equals 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, ArithError, GeneratorSet, IntQuaternion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("p and q must be distinct (got p = q = {0})")]
    EqualPrimes(i64),
    #[error("q = {q} is too small for p = {p}: need q > 2·sqrt(p)")]
    ModulusTooSmall { p: i64, q: i64 },
    #[error("S_{{{p},{q}}} has {found} distinct elements, expected {expected}")]
    Collision {
        p: i64,
        q: i64,
        found: usize,
        expected: usize,
    },
    #[error("the identity appears in S_{{{p},{q}}}")]
    IdentityInGenerators { p: i64, q: i64 },
    #[error("S_{{{p},{q}}} is not closed under inversion")]
    NotSymmetric { p: i64, q: i64 },
    #[error("matrix is singular mod {0}")]
    Singular(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// An element of the prime field `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fq {
    value: u64,
    modulus: u64,
}

impl Fq {
    pub fn new(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        Self {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        Self { value: 0, modulus }
    }

    pub fn one(modulus: u64) -> Self {
        Self { value: 1, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(self.modulus - 2))
    }

    /// Nonzero square test via Euler's criterion.
    pub fn is_nonzero_square(self) -> bool {
        !self.is_zero() && self.pow((self.modulus - 1) / 2).value == 1
    }
}

impl Add for Fq {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fq {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fq {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value * rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fq {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn require_odd_prime(q: i64) -> Result<u64, GroupError> {
    arith::require_odd_prime(q).map_err(|_| GroupError::NotOddPrime(q))?;
    Ok(q as u64)
}

/// Legendre symbol `(p / q)`: `1`, `-1`, or `0` when `q | p`.
pub fn legendre(p: i64, q: i64) -> Result<i8, GroupError> {
    let modulus = require_odd_prime(q)?;
    let x = Fq::new(p, modulus);
    Ok(if x.is_zero() {
        0
    } else if x.is_nonzero_square() {
        1
    } else {
        -1
    })
}

/// Lexicographically smallest `(x, y)` with `x² + y² + 1 = 0` in `F_q`.
pub fn solve_x2y2(q: i64) -> Result<(Fq, Fq), GroupError> {
    let modulus = require_odd_prime(q)?;
    for x in 0..q {
        for y in 0..q {
            let (fx, fy) = (Fq::new(x, modulus), Fq::new(y, modulus));
            if (fx * fx + fy * fy + Fq::one(modulus)).is_zero() {
                return Ok((fx, fy));
            }
        }
    }
    unreachable!("x² + y² + 1 = 0 is solvable over every finite field")
}

/// A raw 2×2 matrix over `F_q`, entries `[m00, m01, m10, m11]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub entries: [Fq; 4],
}

impl Mat2 {
    pub fn new(q: u64, entries: [i64; 4]) -> Self {
        Self {
            entries: entries.map(|e| Fq::new(e, q)),
        }
    }

    pub fn identity(q: u64) -> Self {
        Self::new(q, [1, 0, 0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.entries[0].modulus()
    }

    pub fn det(&self) -> Fq {
        let [a, b, c, d] = self.entries;
        a * d - b * c
    }

    pub fn adjugate(&self) -> Self {
        let [a, b, c, d] = self.entries;
        Self {
            entries: [d, -b, -c, a],
        }
    }

    pub fn scale(&self, c: Fq) -> Self {
        Self {
            entries: self.entries.map(|e| e * c),
        }
    }

    /// Projects to `PGL₂(q)`; fails on singular matrices.
    pub fn canonical(&self) -> Result<ProjMat, GroupError> {
        if self.det().is_zero() {
            return Err(GroupError::Singular(self.modulus()));
        }
        let lead = self
            .entries
            .iter()
            .find(|e| !e.is_zero())
            .expect("nonsingular matrix has a nonzero entry");
        let scaled = self.scale(lead.inv().expect("nonzero"));
        Ok(ProjMat {
            q: self.modulus(),
            entries: scaled.entries.map(Fq::value),
        })
    }
}

impl Mul for Mat2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = rhs.entries;
        Self {
            entries: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }
}

/// Canonical representative of an element of `PGL₂(q)`.
///
/// Ordering and equality are on `(q, entries)`, so for a fixed `q` the
/// derived `Ord` is lexicographic on the canonical entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjMat {
    q: u64,
    entries: [u64; 4],
}

impl ProjMat {
    pub fn identity(q: u64) -> Self {
        Self {
            q,
            entries: [1, 0, 0, 1],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn entries(&self) -> [u64; 4] {
        self.entries
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2 {
            entries: self.entries.map(|e| Fq::new(e as i64, self.q)),
        }
    }

    pub fn det(&self) -> Fq {
        self.to_mat().det()
    }

    pub fn is_identity(&self) -> bool {
        self.entries == [1, 0, 0, 1]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        (self.to_mat() * rhs.to_mat())
            .canonical()
            .expect("product of invertible matrices is invertible")
    }

    pub fn inverse(&self) -> Self {
        self.to_mat()
            .adjugate()
            .canonical()
            .expect("adjugate of an invertible matrix is invertible")
    }
}

impl fmt::Display for ProjMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.q)
    }
}

/// True iff the determinant is a nonzero square. Well defined on classes
/// because scaling by `c` multiplies the determinant by `c²`.
pub fn psl_membership(m: &ProjMat) -> bool {
    m.det().is_nonzero_square()
}

/// The embedding of `H(F_q)` into `M₂(F_q)` attached to a solution of
/// `x² + y² + 1 = 0`:
///
/// ```text
/// | a0 + a1·x + a3·y    -a1·y + a2 + a3·x |
/// | -a1·y - a2 + a3·x   a0 - a1·x - a3·y  |
/// ```
///
/// It satisfies `ψ(uv) = ψ(u)ψ(v)` and `det ψ(u) = N(u)`.
pub fn psi_q(x: &IntQuaternion, q: u64, sol: (Fq, Fq)) -> Mat2 {
    let (sx, sy) = sol;
    let [a0, a1, a2, a3] = x.coeffs().map(|c| Fq::new(c, q));
    Mat2 {
        entries: [
            a0 + a1 * sx + a3 * sy,
            -(a1 * sy) + a2 + a3 * sx,
            -(a1 * sy) - a2 + a3 * sx,
            a0 - a1 * sx - a3 * sy,
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Subgroup {
    #[serde(rename = "PSL")]
    Psl,
    #[serde(rename = "PGL")]
    Pgl,
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subgroup::Psl => "PSL",
            Subgroup::Pgl => "PGL",
        })
    }
}

/// `S_{p,q}` together with the data it was built from.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectionSet {
    pub p: i64,
    pub q: i64,
    pub generators: GeneratorSet,
    /// Image of `generators.elements`, position by position.
    pub elements: Vec<ProjMat>,
}

impl ConnectionSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The group `X^{p,q}` lives on: `PSL₂(q)` when `p` is a square mod `q`.
    pub fn subgroup(&self) -> Subgroup {
        if self.elements.iter().all(psl_membership) {
            Subgroup::Psl
        } else {
            Subgroup::Pgl
        }
    }
}

/// `S_{p,q}`: reduce `S_p` mod `q`, embed in `GL₂(q)`, project to `PGL₂(q)`.
pub fn build_spq(p: i64, q: i64) -> Result<ConnectionSet, GroupError> {
    require_odd_prime(p)?;
    let modulus = require_odd_prime(q)?;
    if p == q {
        return Err(GroupError::EqualPrimes(p));
    }
    if q * q <= 4 * p {
        return Err(GroupError::ModulusTooSmall { p, q });
    }
    let generators = arith::build_sp(p)?;
    let sol = solve_x2y2(q)?;
    let elements = generators
        .elements
        .iter()
        .map(|x| psi_q(x, modulus, sol).canonical())
        .collect::<Result<Vec<_>, _>>()?;

    let expected = p as usize + 1;
    let mut distinct = elements.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() != expected {
        return Err(GroupError::Collision {
            p,
            q,
            found: distinct.len(),
            expected,
        });
    }
    if elements.iter().any(ProjMat::is_identity) {
        return Err(GroupError::IdentityInGenerators { p, q });
    }
    if elements
        .iter()
        .any(|s| distinct.binary_search(&s.inverse()).is_err())
    {
        return Err(GroupError::NotSymmetric { p, q });
    }
    Ok(ConnectionSet {
        p,
        q,
        generators,
        elements,
    })
}

/// Canonical elements of `PSL₂(q)` or `PGL₂(q)` in lexicographic order.
pub fn enumerate_group(q: i64, subgroup: Subgroup) -> Result<Vec<ProjMat>, GroupError> {
    let modulus = require_odd_prime(q)?;
    let order = (modulus * (modulus * modulus - 1)) as usize;
    let mut out = Vec::with_capacity(order);
    for a in 0..modulus {
        for b in 0..modulus {
            for c in 0..modulus {
                for d in 0..modulus {
                    let entries = [a, b, c, d];
                    match entries.iter().find(|&&e| e != 0) {
                        Some(&1) => {}
                        _ => continue,
                    }
                    let m = ProjMat {
                        q: modulus,
                        entries,
                    };
                    let det = m.det();
                    if det.is_zero() {
                        continue;
                    }
                    if subgroup == Subgroup::Psl && !det.is_nonzero_square() {
                        continue;
                    }
                    out.push(m);
                }
            }
        }
    }
    Ok(out)
}
