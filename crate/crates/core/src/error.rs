use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NonSquarefree(i64),
    #[error("value {0} out of range: {1}")]
    OutOfRange(i64, &'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} ramifies in the quadratic field")]
    RamifiedPrime(u64),
    #[error("the prime 2 is not supported here")]
    EvenPrime,
    #[error("{0} is not a square root of d modulo {1}")]
    InvalidRoot(u64, u64),
    #[error("element is not integral")]
    NotIntegral,
    #[error("element is not a unit")]
    NotUnit,
    #[error("form ({0}, {1}, {2}) is imprimitive")]
    Imprimitive(i64, i64, i64),
    #[error("discriminant {0} is a perfect square or not positive")]
    SquareDiscriminant(i64),
    #[error("discriminants {0} and {1} differ")]
    DiscriminantMismatch(i64, i64),
    #[error("prime {0} is inert; no prime form exists")]
    InertPrime(u64),
    #[error("conductor {q} is invalid for degree {degree}")]
    ConductorInvalid { q: u64, degree: u64 },
    #[error("conductor {0} is wild or ramified in the quadratic field")]
    WildOrRamifiedConductor(u64),
    #[error("prime {0} is wild for this extension")]
    WildPrime(u64),
    #[error("prime {0} ramifies in N")]
    RamifiedInN(u64),
    #[error("no admissible conductor q <= {0}")]
    NoAdmissibleConductor(u64),
    #[error("element does not have relative norm -eps^(p^n)")]
    WrongNorm,
    #[error("class order {found} differs from the required {required}")]
    OrderViolation { required: u64, found: u64 },
    #[error("integral basis O_N[eta] is not valid: conductor {0} divides disc N")]
    ProductBasisInvalid(u64),
    #[error("not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("commutator subgroup is not contained in H")]
    CommutatorNotContained,
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("group order {0} exceeds the configured cap {1}")]
    GroupTooLarge(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
