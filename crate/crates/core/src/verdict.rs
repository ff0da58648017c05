use thiserror::Error;

/// Outcome of a verification: `Ok(())` or the first counterexample found.
pub type Verdict = Result<(), Violation>;

/// The first failing condition of a verification, carrying enough detail to
/// locate the defect.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("expected {expected} base blocks, found {found}")]
    BlockCount { expected: usize, found: usize },

    #[error("block {block} has {found} elements, expected {expected}")]
    BlockSize {
        block: usize,
        expected: u32,
        found: usize,
    },

    #[error("lambda equation fails: {lambda}*(v-1) = {lhs} but sum k(k-1) = {rhs}")]
    LambdaEquation { lambda: u32, lhs: i64, rhs: i64 },

    #[error("difference {difference} occurs {count} times, expected {expected}")]
    DifferenceCount {
        difference: u32,
        count: u64,
        expected: u32,
    },

    #[error("parameters {0} are not D-optimal (need t = 2 and v = 2n + 1)")]
    NotDOptimal(String),

    #[error("paf sum at shift {shift} is {sum}, expected 2")]
    PafSum { shift: u32, sum: i64 },

    #[error("matrix entry ({row}, {col}) is {found}, expected {expected}")]
    MatrixEntry {
        row: usize,
        col: usize,
        expected: i64,
        found: i64,
    },

    #[error("matrix of order {0} cannot be a two-circulant design")]
    OddOrder(usize),
}

impl Violation {
    /// Short name of the violated condition, for report lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::BlockCount { .. } => "block-count",
            Violation::BlockSize { .. } => "block-size",
            Violation::LambdaEquation { .. } => "lambda-equation",
            Violation::DifferenceCount { .. } => "difference-count",
            Violation::NotDOptimal(_) => "not-doptimal",
            Violation::PafSum { .. } => "paf-sum",
            Violation::MatrixEntry { .. } => "matrix-entry",
            Violation::OddOrder(_) => "odd-order",
        }
    }
}
