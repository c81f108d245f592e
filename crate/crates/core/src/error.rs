use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    InvalidModulus(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot apply a degree-{form} form to a degree-{target} dual polynomial")]
    DegreeUnderflow { form: usize, target: usize },

    #[error("observed rank {observed} exceeds the supplied oracle bound {bound}")]
    Inconsistent { observed: usize, bound: usize },

    #[error("quotient is not artinian: graded pieces still nonzero at degree {guard}")]
    NotArtinian { guard: usize },

    #[error(
        "multiplication rank mismatch in degree {degree}: induced matrix has rank {matrix_rank}, \
         exact sequence gives {sequence_rank}"
    )]
    RankPathMismatch {
        degree: usize,
        matrix_rank: usize,
        sequence_rank: usize,
    },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
