//! Exact arithmetic for the lattice simplices
//! `Δ_(1,q) = conv{e_1, ..., e_n, -(q_1 e_1 + ... + q_n e_n)}`.
//!
//! The crate computes h*-polynomials (closed form plus two brute-force
//! oracles), decides reflexivity and the integer decomposition property
//! (IDP), enumerates q-vectors with a fixed support, builds and detects
//! affine free sums, and drives batch searches for reflexive IDP simplices
//! whose h*-polynomial is not unimodal.
//!
//! ```
//! use reflexive_lab::{hstar_closed_form, idp_check, QVector};
//!
//! let q: QVector = "3,20,24,24,24,24".parse().unwrap();
//! let h = hstar_closed_form(&q).unwrap();
//! assert_eq!(h.to_string(), "[1,16,29,28,29,16,1]");
//! assert!(!h.is_unimodal());
//! assert!(!idp_check(&q).unwrap().is_idp);
//! ```

pub mod ehrhart;
pub mod error;
pub mod freesum;
pub mod geometry;
pub mod hstar;
pub mod idp;
mod linalg;
pub mod qvector;
pub mod search;
pub mod support;
pub mod verify;

pub use ehrhart::{
    ehrhart_counts, hstar_closed_form, hstar_oracle_interpolation, hstar_oracle_parallelepiped,
    hstar_weight_formula, payne_hstar_product, payne_qvector, WeightFunction,
};
pub use error::{Error, Result};
pub use freesum::{compose, decompose, decomposes_by_divisible_support, FreeSumSplit};
pub use geometry::{ConePoint, LatticePoint, OracleCaps, SimplexGeometry};
pub use hstar::{is_symmetric, is_unimodal, HStarPolynomial};
pub use idp::{
    facet_certificates, idp_check, idp_oracle_bruteforce, necessary_condition, FacetWitness,
    IdpOracle, IdpOracleOutcome, IdpVerdict,
};
pub use qvector::{
    is_reflexive, make_qvector, normalized_volume, support_of, QVector, SupportDecomposition,
};
pub use search::{
    run_search, run_search_to_file, run_search_with, CandidateReport, Filter, SearchSpec,
    SearchSummary,
};
pub use support::{build_system, reflexive_family, solve_positive, SolutionSet, SupportSystem};
pub use verify::{
    two_part_family_expansion, two_support_predicate, verify_two_part_family,
    verify_two_support_classification, TwoPartFamilyReport, TwoSupportReport,
};
