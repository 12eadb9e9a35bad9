//! Test-only oracles and golden data. Nothing here calls into the crate's
//! eigensolver.
#![allow(dead_code)]
// rounded table entries such as 1.4142 are data, not stand-ins for constants
#![allow(clippy::approx_constant)]

use expander_forge_core::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients of `det(xI - A)`, highest degree first, computed exactly by
/// Faddeev–LeVerrier over the integers.
pub fn charpoly(g: &Graph) -> Vec<i128> {
    let n = g.n();
    let mut a = vec![vec![0i128; n]; n];
    for (u, row) in a.iter_mut().enumerate() {
        for &v in g.neighbors(u) {
            row[v] = 1;
        }
    }
    let mut coeffs = vec![1i128];
    // M_1 = I
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    for k in 1..=n {
        let am: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| a[i][l] * m[l][j]).sum())
                    .collect()
            })
            .collect();
        let trace: i128 = (0..n).map(|i| am[i][i]).sum();
        assert_eq!(trace % k as i128, 0);
        let c = -trace / k as i128;
        coeffs.push(c);
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    coeffs
}

type Poly = Vec<BigRational>; // highest degree first, no leading zeros

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
    }
    p
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(Zero::is_zero)
}

fn derivative(p: &Poly) -> Poly {
    let d = p.len() - 1;
    if d == 0 {
        return vec![BigRational::zero()];
    }
    trim(
        p[..d]
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(d - i)))
            .collect(),
    )
}

fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !is_zero_poly(&r) {
        let shift = r.len() - b.len();
        let factor = &r[0] / &b[0];
        let qi = q.len() - 1 - shift;
        q[qi] = factor.clone();
        for (i, c) in b.iter().enumerate() {
            r[i] = &r[i] - &factor * c;
        }
        r.remove(0);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: Poly) -> Poly {
    let lead = p[0].clone();
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !is_zero_poly(&b) {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn eval(p: &Poly, x: &BigRational) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let len = chain.len();
        let (_, r) = divmod(&chain[len - 2], &chain[len - 1]);
        if is_zero_poly(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

/// Clears denominators with a positive factor, so signs are unchanged.
fn to_integer_poly(p: &Poly) -> Vec<BigInt> {
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    p.iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect()
}

/// Sign of `p(num / 2^exp)`, via `2^(exp·deg) · p(num / 2^exp)` in integers.
fn sign_at(p: &[BigInt], num: &BigInt, exp: u32) -> i32 {
    let shift = BigInt::one() << exp;
    let mut pow2 = BigInt::one();
    let mut acc = BigInt::zero();
    for c in p {
        acc = acc * num + c * &pow2;
        pow2 *= &shift;
    }
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

fn sign_changes(chain: &[Vec<BigInt>], num: &BigInt, exp: u32) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| sign_at(p, num, exp))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Square-free factors `(f_i, i)` of `p` by Yun's algorithm.
fn square_free(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let dp = derivative(p);
    let a0 = gcd(p, &dp);
    let mut b = divmod(p, &a0).0;
    let mut c = divmod(&dp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        if a.len() > 1 {
            out.push((a.clone(), i));
        }
        b = divmod(&b, &a).0;
        c = divmod(&d, &a).0;
        d = sub(&c, &derivative(&b));
        i += 1;
    }
    out
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let len = a.len().max(b.len());
    let pad = |p: &Poly| -> Poly {
        let mut v = vec![BigRational::zero(); len - p.len()];
        v.extend(p.iter().cloned());
        v
    };
    let (a, b) = (pad(a), pad(b));
    trim(a.iter().zip(&b).map(|(x, y)| x - y).collect())
}

fn to_f64(x: &BigRational) -> f64 {
    let scale = BigInt::from(1u64 << 52);
    let scaled = (x * BigRational::from_integer(scale.clone())).round();
    let num: f64 = scaled.to_integer().to_string().parse().unwrap();
    num / (1u64 << 52) as f64
}

/// Real roots of a square-free polynomial whose roots are all real, each to
/// within `2^-60`, in decreasing order. Intervals are `(a, b]` with dyadic
/// endpoints `a / 2^e`, `b / 2^e`.
fn isolate_roots(p: &Poly) -> Vec<f64> {
    let chain: Vec<Vec<BigInt>> = sturm_chain(p).iter().map(to_integer_poly).collect();
    let cauchy = p[1..]
        .iter()
        .map(|c| (c / &p[0]).abs())
        .fold(BigRational::one(), |acc, c| acc + c);
    let bound = cauchy.ceil().to_integer();
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound, 0u32)];
    while let Some((a, b, e)) = stack.pop() {
        let count = sign_changes(&chain, &a, e) - sign_changes(&chain, &b, e);
        if count == 0 {
            continue;
        }
        if count == 1 {
            roots.push(refine_simple_root(&chain[0], a, b, e));
            continue;
        }
        let (a2, b2) = (&a * 2, &b * 2);
        let mid = &a + &b;
        stack.push((a2, mid.clone(), e + 1));
        stack.push((mid, b2, e + 1));
    }
    roots.sort_by(|x, y| y.total_cmp(x));
    roots
}

/// Bisects the single simple root in `(a, b]` down to width `2^-60`, using
/// only signs at the right endpoint and midpoints.
fn refine_simple_root(p: &[BigInt], mut a: BigInt, mut b: BigInt, mut e: u32) -> f64 {
    let sign_b = sign_at(p, &b, e);
    if sign_b == 0 {
        return to_f64(&BigRational::new(b, BigInt::one() << e));
    }
    while e < 60 {
        let mid = &a + &b;
        a *= 2;
        b *= 2;
        e += 1;
        match sign_at(p, &mid, e) {
            0 => return to_f64(&BigRational::new(mid, BigInt::one() << e)),
            s if s == sign_b => b = mid,
            _ => a = mid,
        }
    }
    to_f64(&BigRational::new(a + b, BigInt::one() << (e + 1)))
}

/// Exact-arithmetic eigenvalues of the adjacency matrix, with multiplicity,
/// in decreasing order.
pub fn oracle_eigenvalues(g: &Graph) -> Vec<f64> {
    let poly: Poly = charpoly(g)
        .into_iter()
        .map(|c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    let mut out = Vec::new();
    for (factor, mult) in square_free(&poly) {
        for r in isolate_roots(&factor) {
            out.extend(std::iter::repeat_n(r, mult));
        }
    }
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

/// Graph on `n` vertices whose edges are the set bits of `mask` over the
/// pairs `(u, v)`, `u < v`, in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices (exhaustive; practical for `n <= 6`).
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0..(1u64 << pairs.len()) {
        let g = graph_from_mask(n, mask);
        if !g.is_connected() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|perm| {
                let mut m = 0u64;
                for (bit, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                        let idx = pairs.iter().position(|&e| e == (a, b)).unwrap();
                        m |= 1 << idx;
                    }
                }
                m
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Table I: `(eigenvalue, multiplicity)` rows for `X^{3,q}`, increasing.
pub const TABLE_I_Q5: &[(f64, usize)] = &[
    (-4.0, 1),
    (-3.0, 12),
    (-2.0, 28),
    (-1.0, 4),
    (0.0, 30),
    (1.0, 4),
    (2.0, 28),
    (3.0, 12),
    (4.0, 1),
];

pub const TABLE_I_Q7: &[(f64, usize)] = &[
    (-4.0, 1),
    (-3.0, 24),
    (-2.8284, 30),
    (-2.0, 28),
    (-1.4142, 24),
    (-1.0, 40),
    (0.0, 42),
    (1.0, 40),
    (1.4142, 24),
    (2.0, 28),
    (2.8284, 30),
    (3.0, 24),
    (4.0, 1),
];

pub const TABLE_I_Q11: &[(f64, usize)] = &[
    (-3.2361, 30),
    (-3.0, 33),
    (-2.7321, 10),
    (-2.6180, 24),
    (-2.3723, 10),
    (-2.0468, 36),
    (-2.0, 10),
    (-1.6180, 36),
    (-1.5616, 33),
    (-0.9191, 36),
    (-0.7321, 30),
    (-0.3820, 24),
    (0.0, 30),
    (0.3820, 12),
    (0.6180, 36),
    (0.7321, 10),
    (1.0, 52),
    (1.2361, 30),
    (1.9191, 36),
    (2.0, 20),
    (2.5616, 33),
    (2.6180, 12),
    (2.7321, 30),
    (3.0468, 36),
    (3.3723, 10),
    (4.0, 1),
];

/// Table II: `X^{5,q}`.
pub const TABLE_II_Q7: &[(f64, usize)] = &[
    (-6.0, 1),
    (-4.0, 21),
    (-3.0, 16),
    (-2.8284, 42),
    (-2.0, 21),
    (-1.4142, 12),
    (-1.0, 48),
    (0.0, 14),
    (1.0, 48),
    (1.4142, 12),
    (2.0, 21),
    (2.8284, 42),
    (3.0, 16),
    (4.0, 21),
    (6.0, 1),
];

pub const TABLE_II_Q11: &[(f64, usize)] = &[
    (-4.0243, 36),
    (-3.7321, 30),
    (-3.0, 65),
    (-2.2361, 30),
    (-1.7321, 10),
    (-1.6180, 60),
    (-1.3723, 10),
    (-1.2361, 12),
    (-0.5616, 33),
    (-0.2679, 30),
    (-0.1638, 36),
    (0.6180, 60),
    (1.0, 30),
    (1.7321, 10),
    (1.7818, 36),
    (2.2361, 30),
    (3.0, 50),
    (3.2361, 12),
    (3.4063, 36),
    (3.5616, 33),
    (4.3723, 10),
    (6.0, 1),
];

/// Compares grouped spectrum (decreasing) against a golden table
/// (increasing) row by row. Returns a description of the first mismatch.
pub fn compare_table(grouped_desc: &[(f64, usize)], golden: &[(f64, usize)], tol: f64) -> Result<(), String> {
    let ours: Vec<_> = grouped_desc.iter().rev().collect();
    if ours.len() != golden.len() {
        return Err(format!("{} groups, table has {}", ours.len(), golden.len()));
    }
    for (row, (&(value, mult), &(g_value, g_mult))) in ours.iter().copied().zip(golden).enumerate() {
        if (value - g_value).abs() > tol || mult != g_mult {
            return Err(format!(
                "row {row}: got ({value:.6}, {mult}), table ({g_value:.4}, {g_mult})"
            ));
        }
    }
    Ok(())
}
