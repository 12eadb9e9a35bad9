//! Ramanujan graphs `X^{p,q}` built from integer quaternions, their
//! perturbations by perfect matchings, and spectral certification.
//!
//! The pipeline is: [`arith::build_sp`] picks `p + 1` quaternions of norm
//! `p`, [`projgroup::build_spq`] maps them into `PGL₂(q)`,
//! [`graph::build_lps`] forms the Cayley graph, [`matching`] finds 1-factors
//! to add or remove, and [`spectral`] eigensolves and certifies the result.

pub mod arith;
pub mod graph;
pub mod matching;
pub mod projgroup;
pub mod spectral;

pub use arith::{build_sp, enumerate_norm_p, quat_mul, ArithError, GeneratorSet, IntQuaternion};
pub use graph::{
    add_matching, bipartite_complement, build_lps, cayley_graph, complement, detect_bipartition,
    remove_matching, Graph, GraphError, LpsGraph, Matching, Side,
};
pub use matching::{perfect_matching_bipartite, sample_matchings, MatchingError, MatchingSample, MatchingSeed};
pub use projgroup::{
    build_spq, enumerate_group, legendre, psi_q, psl_membership, solve_x2y2, ConnectionSet, Fq,
    GroupError, Mat2, ProjMat, Subgroup,
};
pub use spectral::{
    certify, check_weyl_bound, eigenvalues, gap_lower_bound, group_multiplicities, ramanujan_gap,
    round4, Direction, GapCertificate, SpectralError, Spectrum, WeylCheck,
};
