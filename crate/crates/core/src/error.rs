use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a code needs at least one entry")]
    EmptyCode,
    #[error("code entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: i64 },
    #[error("cannot parse code literal {literal:?}: {reason}")]
    ParseCode { literal: String, reason: String },
    #[error("bead word {0:?} must consist of B and W and contain at least one B")]
    ParseWord(String),
    #[error("code {0} is invalid: all adjacent sums are equal, so it has no slimes")]
    InvalidCode(String),
    #[error("weight {weight} of code {code} is not coprime with n = {n}")]
    WeightNotCoprime { code: String, weight: u32, n: usize },
    #[error("code {code} has period {period} < n = {n}")]
    NotFullPeriod { code: String, period: usize, n: usize },
    #[error("move on slime at {start} would make an entry negative in {code}")]
    MoveUnderflow { code: String, start: usize },
    #[error("n = {0} is not prime")]
    NotPrime(usize),
    #[error("n = {0} is not an odd prime")]
    NotOddPrime(usize),
    #[error("n = {n} and k = {k} are not coprime")]
    NotCoprime { n: usize, k: u64 },
    #[error("n = {0} is even; the check only applies to odd n")]
    EvenLength(usize),
    #[error("code {code} does not belong to the (n = {n}, k = {k}) domain")]
    WrongShape { code: String, n: usize, k: u64 },
    #[error("riwi-map {map} is not defined on {code}")]
    MapUndefined { map: String, code: String },
    #[error("riwi-map {map} failed its construction self-check on {code}")]
    SelfCheck { map: String, code: String },
    #[error("map file: {0}")]
    MapFile(String),
    #[error("{0}")]
    Precondition(String),
}
