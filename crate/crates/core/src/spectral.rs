//! Adjacency spectra, multiplicity grouping and expander certificates.
//!
//! Eigenvalues come from a dense symmetric solve: Householder reduction to
//! tridiagonal form followed by implicit-shift QL iteration. Only eigenvalues
//! are computed.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

/// Default tolerance for merging eigenvalues into one multiplicity group.
pub const GROUPING_TOL: f64 = 1e-6;

/// Slack on the Ramanujan and Weyl bounds.
pub const BOUND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("graph is not regular")]
    NotRegular,
    #[error("spectra have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("QL iteration failed to converge")]
    NoConvergence,
    #[error("grouping tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Eigenvalues in decreasing order with multiplicity groups.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    grouped: Vec<(f64, usize)>,
}

impl Spectrum {
    /// Sorts decreasingly and groups with [`GROUPING_TOL`].
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let grouped = group_sorted(&eigenvalues, GROUPING_TOL);
        Self {
            eigenvalues,
            grouped,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `(mean, multiplicity)` groups in decreasing order.
    pub fn grouped(&self) -> &[(f64, usize)] {
        &self.grouped
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn lambda0(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Second largest eigenvalue counted with multiplicity.
    pub fn lambda1(&self) -> f64 {
        self.eigenvalues.get(1).copied().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.eigenvalues.iter().any(|&x| (x - value).abs() <= tol)
    }

    pub fn regroup(&self, tol: f64) -> Result<Vec<(f64, usize)>, SpectralError> {
        group_multiplicities(self, tol)
    }
}

fn group_sorted(sorted_desc: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<(f64, usize)> = Vec::new();
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    for &x in sorted_desc {
        match groups.last_mut() {
            Some((mean, count)) if prev - x <= tol => {
                *count += 1;
                sum += x;
                *mean = sum / *count as f64;
            }
            _ => {
                groups.push((x, 1));
                sum = x;
            }
        }
        prev = x;
    }
    groups
}

/// Merges consecutive eigenvalues that differ by at most `tol`.
pub fn group_multiplicities(s: &Spectrum, tol: f64) -> Result<Vec<(f64, usize)>, SpectralError> {
    // written this way so NaN is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(tol > 0.0) {
        return Err(SpectralError::BadTolerance(tol));
    }
    Ok(group_sorted(&s.eigenvalues, tol))
}

/// Rounds to four decimals, half away from zero, without a negative zero.
pub fn round4(x: f64) -> f64 {
    let r = (x * 1e4).round() / 1e4;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Dense adjacency matrix, row-major.
pub fn adjacency_matrix(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![0.0; n * n];
    for u in 0..n {
        for &v in g.neighbors(u) {
            a[u * n + v] = 1.0;
        }
    }
    a
}

/// All eigenvalues of the adjacency matrix of `g`.
pub fn eigenvalues(g: &Graph) -> Result<Spectrum, SpectralError> {
    let n = g.n();
    let values = symmetric_eigenvalues(adjacency_matrix(g), n)?;
    Ok(Spectrum::from_eigenvalues(values))
}

/// Eigenvalues of a dense symmetric `n × n` matrix given row-major.
/// Only the lower triangle is read.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>, SpectralError> {
    assert_eq!(a.len(), n * n, "matrix buffer has wrong size");
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    tridiagonal_ql(&mut d, &mut e)?;
    Ok(d)
}

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (EISPACK `tred1`, no transformation accumulation). Returns the diagonal
/// and the subdiagonal with `e[0] = 0`.
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let idx = |i: usize, j: usize| i * n + j;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[idx(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..=l {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    // p = A u / h, stored in e[0..=l]
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[idx(i, j)];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] -= f * e[k] + g * a[idx(i, k)];
                    }
                }
                for k in 0..=l {
                    a[idx(i, k)] *= scale;
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[idx(i, i)];
    }
    (d, e)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix (EISPACK `tql1`).
/// `e[i]` is the entry between rows `i - 1` and `i`; overwritten. On return
/// `d` holds the eigenvalues in no particular order.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<(), SpectralError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(SpectralError::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Spectral facts about a regular graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCertificate {
    pub degree: usize,
    pub lambda0: f64,
    pub lambda1: f64,
    pub gap: f64,
    pub ramanujan_bound: f64,
    pub is_ramanujan: bool,
    pub is_connected: bool,
    pub is_bipartite_spectral: bool,
}

impl GapCertificate {
    /// Connectivity read off the spectrum: the gap is positive.
    pub fn spectrally_connected(&self) -> bool {
        self.gap > GROUPING_TOL
    }
}

/// Fills a [`GapCertificate`]. Eigenvalues within [`GROUPING_TOL`] of `±k`
/// are the trivial ones; every other `μ` must satisfy
/// `|μ| <= 2·sqrt(k - 1) + 1e-9` for the Ramanujan flag.
pub fn certify(g: &Graph, s: &Spectrum) -> Result<GapCertificate, SpectralError> {
    let k = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    if s.len() != g.n() {
        return Err(SpectralError::LengthMismatch(g.n(), s.len()));
    }
    let kf = k as f64;
    let bound = if k >= 1 { 2.0 * (kf - 1.0).sqrt() } else { 0.0 };
    let is_ramanujan = s
        .eigenvalues()
        .iter()
        .filter(|&&mu| (mu - kf).abs() > GROUPING_TOL && (mu + kf).abs() > GROUPING_TOL)
        .all(|&mu| mu.abs() <= bound + BOUND_SLACK);
    let lambda0 = s.lambda0();
    let lambda1 = if s.len() > 1 { s.lambda1() } else { lambda0 };
    Ok(GapCertificate {
        degree: k,
        lambda0,
        lambda1,
        gap: lambda0 - lambda1,
        ramanujan_bound: bound,
        is_ramanujan,
        is_connected: g.is_connected(),
        is_bipartite_spectral: k > 0 && s.contains(-kf, GROUPING_TOL),
    })
}

/// Outcome of comparing two spectra rank by rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylCheck {
    pub max_deviation: f64,
    pub holds: bool,
}

/// `max_j |μ_j - λ_j|` over sorted ranks, and whether it is at most one.
pub fn check_weyl_bound(base: &Spectrum, perturbed: &Spectrum) -> Result<WeylCheck, SpectralError> {
    if base.len() != perturbed.len() {
        return Err(SpectralError::LengthMismatch(base.len(), perturbed.len()));
    }
    let max_deviation = base
        .eigenvalues()
        .iter()
        .zip(perturbed.eigenvalues())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(WeylCheck {
        max_deviation,
        holds: max_deviation <= 1.0 + BOUND_SLACK,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Plus,
    Minus,
}

/// Guaranteed spectral gap of `X^{p,q} ± F`.
///
/// `X^{p,q}` is `(p + 1)`-regular with `λ_1 <= 2·sqrt(p)`, and adding or
/// removing a 1-factor moves `λ_1` by at most one. So `X + F` has gap at least
/// `(p + 2) - (1 + 2·sqrt(p))`; `X - F` has `p - (1 + 2·sqrt(p))`, which is
/// clamped at zero.
pub fn gap_lower_bound(p: u64, direction: Direction) -> f64 {
    let lambda1_ceiling = 1.0 + 2.0 * (p as f64).sqrt();
    match direction {
        Direction::Plus => (p + 2) as f64 - lambda1_ceiling,
        Direction::Minus => (p as f64 - lambda1_ceiling).max(0.0),
    }
}

/// Gap `k - 2·sqrt(k - 1)` of a `k`-regular Ramanujan graph.
pub fn ramanujan_gap(k: u64) -> f64 {
    k as f64 - 2.0 * ((k - 1) as f64).sqrt()
}
