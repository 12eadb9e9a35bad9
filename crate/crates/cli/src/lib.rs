//! Job layer behind the `expander-forge` binary.
//!
//! Each `cmd_*` function validates a [`JobSpec`], runs the pipeline and
//! returns the text it would print or write, so the binary only handles I/O
//! and exit codes.

pub mod formats;

use std::fmt::Write as _;

use expander_forge_core::{
    add_matching, bipartite_complement, build_lps, certify, check_weyl_bound, eigenvalues,
    gap_lower_bound, legendre, perfect_matching_bipartite, remove_matching, ArithError,
    Direction, GapCertificate, Graph, GraphError, GroupError, LpsGraph, MatchingError,
    MatchingSeed, Spectrum, Subgroup, WeylCheck,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use formats::fmt4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::Io(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Group(g) => g.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::NotOddPrime(_)
            | GroupError::EqualPrimes(_)
            | GroupError::ModulusTooSmall { .. }
            | GroupError::Arith(ArithError::NotOddPrime(_)) => CliError::Invalid(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<MatchingError> for CliError {
    fn from(e: MatchingError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<expander_forge_core::SpectralError> for CliError {
    fn from(e: expander_forge_core::SpectralError) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operation {
    Build,
    Spectrum,
    Match,
    PerturbMinus,
    PerturbPlus,
    Certify,
    Table,
}

/// One unit of work: a graph `X^{p,q}`, optionally perturbed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub p: i64,
    pub q: i64,
    pub operation: Operation,
    pub perturb: Option<Direction>,
    pub seed: Option<MatchingSeed>,
    pub count: Option<usize>,
}

impl JobSpec {
    pub fn new(p: i64, q: i64, operation: Operation) -> Self {
        Self {
            p,
            q,
            operation,
            perturb: None,
            seed: None,
            count: None,
        }
    }

    pub fn with_perturbation(mut self, direction: Direction, seed: MatchingSeed) -> Self {
        self.perturb = Some(direction);
        self.seed = Some(seed);
        self
    }

    /// Perturbation direction implied by the operation or the explicit flag.
    pub fn direction(&self) -> Option<Direction> {
        match self.operation {
            Operation::PerturbMinus => Some(Direction::Minus),
            Operation::PerturbPlus => Some(Direction::Plus),
            _ => self.perturb,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let symbol = legendre(self.p, self.q)?;
        legendre(self.q, self.p)?;
        if self.p == self.q {
            return Err(GroupError::EqualPrimes(self.p).into());
        }
        if self.direction().is_some() && symbol != -1 {
            return Err(CliError::Invalid(format!(
                "perturbation needs a bipartite X^{{{},{}}}, but {} is a square mod {}",
                self.p, self.q, self.p, self.q
            )));
        }
        Ok(())
    }
}

/// A graph `X^{p,q} ± F` with the data used to certify it.
pub struct Realized {
    pub base: LpsGraph,
    pub graph: Graph,
    pub direction: Option<Direction>,
    pub seed: Option<MatchingSeed>,
}

pub fn realize(spec: &JobSpec) -> Result<Realized, CliError> {
    spec.validate()?;
    let base = build_lps(spec.p, spec.q)?;
    let direction = spec.direction();
    let seed = direction.map(|_| spec.seed.unwrap_or_default());
    let graph = match (direction, seed) {
        (Some(Direction::Minus), Some(seed)) => {
            let f = perfect_matching_bipartite(&base.graph, seed)?;
            remove_matching(&base.graph, &f)?
        }
        (Some(Direction::Plus), Some(seed)) => {
            let comp = bipartite_complement(&base.graph)?;
            let f = perfect_matching_bipartite(&comp, seed)?;
            add_matching(&base.graph, &f)?
        }
        _ => base.graph.clone(),
    };
    Ok(Realized {
        base,
        graph,
        direction,
        seed,
    })
}

/// Edge-list text plus a human-readable construction report.
pub fn cmd_build(spec: &JobSpec) -> Result<(String, String), CliError> {
    let r = realize(spec)?;
    let x = &r.base;
    let mut report = String::new();
    let case = match x.subgroup {
        Subgroup::Psl => format!("PSL2({}): {} is a square mod {}", x.q(), x.p(), x.q()),
        Subgroup::Pgl => format!("PGL2({}): {} is not a square mod {}", x.q(), x.p(), x.q()),
    };
    writeln!(report, "graph: X^{{{},{}}}", x.p(), x.q()).unwrap();
    if let (Some(d), Some(seed)) = (r.direction, r.seed) {
        let sign = if d == Direction::Plus { '+' } else { '-' };
        writeln!(report, "perturbation: {sign}F (seed {})", seed.0).unwrap();
    }
    writeln!(report, "group: {case}").unwrap();
    writeln!(report, "|S_{{p,q}}|: {}", x.connection.len()).unwrap();
    writeln!(report, "vertices: {}", r.graph.n()).unwrap();
    match r.graph.regular_degree() {
        Some(k) => writeln!(report, "degree: {k}").unwrap(),
        None => writeln!(report, "degree: irregular").unwrap(),
    }
    writeln!(report, "edges: {}", r.graph.edge_count()).unwrap();
    writeln!(report, "bipartite: {}", yes_no(r.graph.is_bipartite_flagged())).unwrap();
    writeln!(report, "connected: {}", yes_no(r.graph.is_connected())).unwrap();
    Ok((formats::write_edge_list(&r.graph)?, report))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn cmd_spectrum(spec: &JobSpec) -> Result<String, CliError> {
    let r = realize(spec)?;
    Ok(formats::spectrum_csv(&eigenvalues(&r.graph)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationReport {
    pub direction: Direction,
    pub seed: u64,
    pub weyl: WeylCheck,
    pub gap_floor: f64,
    pub gap_floor_met: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub p: i64,
    pub q: i64,
    pub subgroup: Subgroup,
    pub vertices: usize,
    pub certificate: GapCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationReport>,
}

/// Certificate for `X^{p,q}` or `X^{p,q} ± F`. A broken rank-wise bound or a
/// missed gap floor is an internal failure; the report is still returned
/// inside the error message.
pub fn cmd_certify(spec: &JobSpec) -> Result<CertificateReport, CliError> {
    let r = realize(spec)?;
    let s = eigenvalues(&r.graph)?;
    let certificate = certify(&r.graph, &s)?;
    let perturbation = match (r.direction, r.seed) {
        (Some(direction), Some(seed)) => {
            let base = eigenvalues(&r.base.graph)?;
            let weyl = check_weyl_bound(&base, &s)?;
            let gap_floor = gap_lower_bound(spec.p as u64, direction);
            Some(PerturbationReport {
                direction,
                seed: seed.0,
                weyl,
                gap_floor,
                gap_floor_met: certificate.gap >= gap_floor - 1e-9,
            })
        }
        _ => None,
    };
    let report = CertificateReport {
        p: spec.p,
        q: spec.q,
        subgroup: r.base.subgroup,
        vertices: r.graph.n(),
        certificate,
        perturbation,
    };
    if let Some(pr) = &report.perturbation {
        if !pr.weyl.holds || !pr.gap_floor_met {
            return Err(CliError::Internal(format!(
                "perturbation bound violated: {}",
                serde_json::to_string(&report).unwrap()
            )));
        }
    }
    Ok(report)
}

/// One column of a table: a title and `(value, multiplicity)` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub title: String,
    pub q: i64,
    pub seed: Option<u64>,
    pub rows: Vec<(f64, Option<usize>)>,
}

/// What `table` prints for a batch of `q` values and seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub caption: String,
    pub header: (String, String),
    pub columns: Vec<Column>,
}

impl Table {
    pub fn render(&self) -> String {
        const W: usize = 14;
        let mut out = String::new();
        writeln!(out, "{}", self.caption).unwrap();
        let titles: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{:<width$}", c.title, width = 2 * W))
            .collect();
        writeln!(out, "{}", titles.join(" | ").trim_end()).unwrap();
        let heads: Vec<String> = self
            .columns
            .iter()
            .map(|_| format!("{:>W$}{:>W$}", self.header.0, self.header.1))
            .collect();
        writeln!(out, "{}", heads.join(" | ")).unwrap();
        let height = self.columns.iter().map(|c| c.rows.len()).max().unwrap_or(0);
        for i in 0..height {
            let cells: Vec<String> = self
                .columns
                .iter()
                .map(|c| match c.rows.get(i) {
                    Some((v, Some(m))) => format!("{:>W$}{:>W$}", fmt4(*v), m),
                    Some((v, None)) => format!("{:>W$}{:>W$}", fmt4(*v), ""),
                    None => " ".repeat(2 * W),
                })
                .collect();
            writeln!(out, "{}", cells.join(" | ").trim_end()).unwrap();
        }
        out
    }

    /// Long-format CSV: `q,seed,<value>[,<multiplicity>]`.
    pub fn csv(&self) -> String {
        let mut out = format!("q,seed,{}", self.header.0);
        if !self.header.1.is_empty() {
            write!(out, ",{}", self.header.1).unwrap();
        }
        out.push('\n');
        for c in &self.columns {
            let seed = c.seed.map(|s| s.to_string()).unwrap_or_default();
            for (v, m) in &c.rows {
                write!(out, "{},{},{}", c.q, seed, fmt4(*v)).unwrap();
                if let Some(m) = m {
                    write!(out, ",{m}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Number of top eigenvalues listed for `+F` tables.
pub const TOP_EIGENVALUES: usize = 10;

/// Tables in the published layout: full spectra in increasing order for
/// unperturbed graphs, spectral gaps `p - λ_1` per seed for `-F`, and the
/// ten largest eigenvalues per seed for `+F`.
pub fn cmd_table(
    p: i64,
    qs: &[i64],
    perturb: Option<Direction>,
    seeds: &[u64],
) -> Result<Table, CliError> {
    let jobs: Vec<JobSpec> = match perturb {
        None => qs.iter().map(|&q| JobSpec::new(p, q, Operation::Table)).collect(),
        Some(d) => qs
            .iter()
            .flat_map(|&q| {
                seeds
                    .iter()
                    .map(move |&s| JobSpec::new(p, q, Operation::Table).with_perturbation(d, MatchingSeed(s)))
            })
            .collect(),
    };
    if jobs.is_empty() {
        return Err(CliError::Invalid("table needs at least one q (and one seed when perturbing)".into()));
    }
    for job in &jobs {
        job.validate()?;
    }
    let spectra: Vec<Spectrum> = jobs
        .par_iter()
        .map(|job| -> Result<Spectrum, CliError> { Ok(eigenvalues(&realize(job)?.graph)?) })
        .collect::<Result<_, _>>()?;

    let columns = jobs
        .iter()
        .zip(&spectra)
        .map(|(job, s)| {
            let seed = job.seed.map(|s| s.0);
            let title = match seed {
                Some(seed) => format!("q={} seed={seed}", job.q),
                None => format!("q={}", job.q),
            };
            let rows = match perturb {
                None => s.grouped().iter().rev().map(|&(v, m)| (v, Some(m))).collect(),
                Some(Direction::Minus) => vec![(p as f64 - s.lambda1(), None)],
                Some(Direction::Plus) => {
                    let top = &s.eigenvalues()[..TOP_EIGENVALUES.min(s.len())];
                    Spectrum::from_eigenvalues(top.to_vec())
                        .grouped()
                        .iter()
                        .rev()
                        .map(|&(v, m)| (v, Some(m)))
                        .collect()
                }
            };
            Column {
                title,
                q: job.q,
                seed,
                rows,
            }
        })
        .collect();

    let (caption, header) = match perturb {
        None => (
            format!("spectra of X^{{{p},q}}"),
            ("eigenvalue".to_string(), "multiplicity".to_string()),
        ),
        Some(Direction::Minus) => (
            format!("spectral gaps p - lambda_1 for X^{{{p},q}} - F"),
            ("gap".to_string(), String::new()),
        ),
        Some(Direction::Plus) => (
            format!("largest eigenvalues for X^{{{p},q}} + F"),
            ("eigenvalue".to_string(), "multiplicity".to_string()),
        ),
    };
    let mut table = Table {
        caption,
        header,
        columns,
    };
    if perturb == Some(Direction::Minus) {
        // gaps: one column per q, one row per seed
        let mut merged: Vec<Column> = Vec::new();
        for c in table.columns {
            match merged.last_mut() {
                Some(last) if last.q == c.q => last.rows.extend(c.rows),
                _ => merged.push(Column {
                    title: format!("p={p},q={}", c.q),
                    seed: None,
                    ..c
                }),
            }
        }
        table.columns = merged;
    }
    Ok(table)
}
