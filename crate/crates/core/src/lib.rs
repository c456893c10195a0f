//! Entropy of nearest-neighbour shifts on free semigroups and free groups.
//!
//! A shift of finite type on the rooted `d`-ary tree is described by a
//! [`BasicSet`]: the admissible root-plus-children blocks per root symbol.
//! Its height-`n` pattern counts satisfy a polynomial recursion ([`Snre`]),
//! and the topological entropy is the limit of `ln(count) / |E_n|` over the
//! ball sizes. This crate provides:
//!
//! - domain types and conversions between forbidden-transition,
//!   transition-matrix, and basic-set representations ([`sft`]);
//! - construction and analysis of the count recursion, including the
//!   essential/inessential symbol classification ([`snre`]);
//! - growth-type classification for two-symbol systems, exact and
//!   empirical ([`classify`]);
//! - the entropy engine: a certified normalized log-domain iteration plus
//!   closed-form series for each growth type ([`entropy`]);
//! - named shift families: golden-mean shifts, coloured chessboards, and
//!   the free-group golden-mean shift ([`shifts`]);
//! - a brute-force enumerator that validates the recursion at small heights
//!   ([`oracle`]).

pub mod classify;
pub mod entropy;
mod error;
pub mod oracle;
pub mod sft;
pub mod snre;
pub mod shifts;

pub use classify::{
    classify_type_22, detect_empirically, is_equal_growth, Provenance, RatioPattern, RatioTrace,
    SnreType, TypeLabel,
};
pub use entropy::{
    degree_estimate, entropy_auto, entropy_closed, entropy_generic, entropy_type_c,
    entropy_type_d, entropy_type_e, entropy_type_o, iterate_log, EntropyResult, Flag,
    LinearizedRecursion, LogState, Method, SeriesAccumulator,
};
pub use error::{Error, Result};
pub use oracle::{count_rooted, verify_snre, Mismatch, VerifyReport};
pub use sft::{
    ball_size, free_group_ball_size, Alphabet, BallSize, BasicSet, ForbiddenSet, Symbol,
    Transition, TransitionMatrices,
};
pub use snre::{
    canonical_monomials, IndicatorVector, Monomial, Snre, SnreEquation, SymbolClassification,
};
pub use shifts::{
    chessboard_basic, chessboard_entropy, fd_gms_entropy, gms_basic, FdConsistency, FreeGroupGms,
};
