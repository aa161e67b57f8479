use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not a prime below 2^31")]
    InvalidCharacteristic(u32),
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("degree cap {cap} exceeded (intermediate degree {degree})")]
    DegreeCap { cap: u32, degree: u32 },
    #[error("incompatible maps or covers: {0}")]
    Incompatible(String),
    #[error("{0}")]
    ZeroModule(String),
    #[error("ring is not Cohen-Macaulay (depth {depth} < dim {dim})")]
    NotCohenMacaulay { depth: usize, dim: usize },
    #[error("dualizer {0} failed semidualizing verification")]
    UnverifiedDualizer(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
