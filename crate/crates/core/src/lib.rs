//! D-optimal designs of two-circulant type from supplementary difference sets.
//!
//! The crate covers the whole pipeline around a pair of base blocks
//! `X, Y ⊆ Z_v`:
//!
//! * [`params`]: which `(v; r, s; λ)` can occur, via an explicit bijection
//!   with pairs `x ≥ y ≥ 0`, and which orders `2v` are feasible at all;
//! * [`seqcore`]: binary sequences, periodic autocorrelation, spectra and
//!   compression;
//! * [`sds`]: exact verification, equivalence and the built-in corpus of
//!   published solutions;
//! * [`designmat`]: the `2v × 2v` design matrix, its Gram identity and
//!   exact determinants;
//! * [`search`]: the two-stage compression search and a brute-force oracle;
//! * [`format`]: the plain-text record and matrix formats.
//!
//! ```
//! use doptimal::{build_design, verify_doptimal, verify_gram, ParameterSet, Sds};
//!
//! let sds = Sds::new(ParameterSet::pair(7, 3, 1, 1), vec![vec![0, 1, 3], vec![0]])?;
//! verify_doptimal(&sds).unwrap();
//! verify_gram(&build_design(&sds)?).unwrap();
//! # Ok::<(), doptimal::Error>(())
//! ```

pub mod designmat;
mod error;
pub mod format;
pub mod params;
pub mod sds;
pub mod search;
pub mod seqcore;
mod verdict;

pub use designmat::{
    bound_value, build_design, circulant, exact_determinant, exact_determinant_with_limit,
    verify_gram, Circulant, DesignMatrix, DETERMINANT_ORDER_LIMIT,
};
pub use error::{Error, Result};
pub use format::{
    format_matrix, format_sds_record, parse_matrix_file, parse_sds_file, parse_sds_record,
};
pub use params::{
    enumerate_params, infeasible_orders, is_feasible_order, pair_to_params, params_to_pair, PairXY,
    ParameterSet,
};
pub use sds::{
    are_equivalent, builtin_corpus, canonical_form, difference_table, verify_doptimal,
    verify_matnorm, verify_sds, CorpusEntry, DifferenceTable, Origin, Sds,
};
pub use search::{
    exhaustive_search, psd_filter, search_driver, stage1_admits, stage1_enumerate, stage2_lift,
    CompressedPair, SearchConfig, SearchReport, SearchStatus,
};
pub use seqcore::{
    compress, dft, paf, psd, psd_at_multiples, sequence_to_subset, subset_to_sequence,
    BinarySequence, IntegerSequence,
};
pub use verdict::{Verdict, Violation};

// Code blocks in the guide and the README compile and run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/sequences.md")]
    pub struct Sequences;
    #[doc = include_str!("../../../book/src/parameters.md")]
    pub struct Parameters;
    #[doc = include_str!("../../../book/src/difference-sets.md")]
    pub struct DifferenceSets;
    #[doc = include_str!("../../../book/src/designs.md")]
    pub struct Designs;
    #[doc = include_str!("../../../book/src/search.md")]
    pub struct Search;
    #[doc = include_str!("../../../book/src/formats.md")]
    pub struct Formats;
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
}
