use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ambient dimension {0} is outside the supported range 1..=24")]
    DimensionOutOfRange(u32),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u8, right: u8 },
    #[error("bit mask {mask:#x} has bits outside dimension {n}")]
    MaskOutOfRange { mask: u32, n: u8 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("enumeration would produce {count} items, over the limit of {limit}")]
    ResourceLimit { count: u128, limit: u128 },
    #[error("codimension mismatch: expected {expected}, found {found}")]
    CodimensionMismatch { expected: u8, found: u8 },
    #[error("input is not a valid cover: {0}")]
    NotACover(String),
    #[error("constraint system is degenerate (linearly dependent normals)")]
    Degenerate,
    #[error("constraint system is inconsistent (empty solution set)")]
    Empty,
    #[error("row {0} of the code is zero")]
    ZeroRow(usize),
    #[error("no verified cover found after {tries} tries")]
    Exhausted { tries: u32 },
    #[error("bound contradiction at (n={n}, k={k}, d={d}): lo {lo} > hi {hi}")]
    Contradiction {
        n: u8,
        k: u32,
        d: u8,
        lo: u64,
        hi: u64,
    },
    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
