//! Exact arithmetic in Hahn-series fields whose value groups are Hahn
//! products over a chain, equipped with derivations generated by the
//! right shift of the chain.
//!
//! The crate builds up in layers: [`chain`] provides the index chains and
//! their final segments, [`group`] the ordered Hahn group over a chain, and
//! [`couple`] the shift-generated asymptotic couples on such groups.

pub mod chain;
pub mod couple;
pub mod derivation;
pub mod group;
pub mod parse;
pub mod rank;
pub mod realize;
pub mod residue;
pub mod sample;
pub mod series;

pub use chain::{enumerate_final_segments, Chain, ChainPoint, ExtendedPoint, FinalSegment, Window};
pub use couple::{
    asymptotic_integral, check_axioms, classify_trichotomy, contraction_chi, dg_apply,
    find_cut_point, qo_psi_leq, translate_to_negative, AxiomReport, CutPointReport,
    IntegralResult, PsiMap, TrichotomyClass,
};
pub use derivation::{
    check_derivation_axioms, check_h_axioms, induced_couple, log_derivative,
    DerivationAxiomReport, DerivationCheck, DerivationConfig, DerivationError, HFieldReport,
};
pub use group::{arch_equiv, subgroup_contains, GroupElement};
pub use parse::{
    chain_file, couple_file, parse_chain_file, parse_couple_file, parse_group, parse_point,
    parse_segment, parse_series, ChainFile, CoupleFile, FileError, ParseError,
};
pub use rank::{
    chi_rank, is_compatible_fast, is_compatible_oracle, principal_segment, psi_rank,
    rank_of_quasiorder, unfolded_rank, RankError, RankReport, UnfoldedRankReport,
};
pub use realize::{realize, RealizationCertificate, RealizationSpec, RealizeError};
pub use residue::{
    coarsen_residue, coset_cmp, residue, w_bounded, w_small, w_unit, CoarsenError,
    CoarseningClass, CoarseningReport,
};
pub use sample::{Sampler, DEFAULT_SEED};
pub use series::{invert_truncated, truncate, Series, SeriesError, TruncatedSeries};
