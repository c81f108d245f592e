//! Hilbert functions, inverse systems and Lefschetz properties of artinian
//! quotients of `K[x_1, ..., x_r]`, with `K` of characteristic zero modelled
//! by large random primes.
//!
//! ```
//! use lefschetz::ideal::{hilbert_function, EngineConfig, IdealSpec};
//! use lefschetz::lefschetz::{wlp_test, Verdict};
//!
//! let cfg = EngineConfig::default();
//! let ideal = IdealSpec::general_powers(6, 7, 2);
//! assert_eq!(hilbert_function(&ideal, &cfg)?.values(), &[1, 6, 14, 14]);
//! assert_eq!(wlp_test(&ideal, &cfg)?.verdict, Verdict::Fails);
//! # Ok::<(), lefschetz::Error>(())
//! ```

pub mod error;
pub mod field;
pub mod ideal;
pub mod lefschetz;
pub mod matrix;
pub mod monomial;
pub mod oracles;
pub mod poly;
pub mod spec_file;

pub use error::{Error, Result};

/// Runs the snippets of the guide in `book/` as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hilbert-functions.md")]
    mod hilbert_functions {}
    #[doc = include_str!("../../../book/src/lefschetz.md")]
    mod lefschetz {}
    #[doc = include_str!("../../../book/src/inverse-systems.md")]
    mod inverse_systems {}
    #[doc = include_str!("../../../book/src/genericity.md")]
    mod genericity {}
    #[doc = include_str!("../../../book/src/spec-format.md")]
    mod spec_format {}
    #[doc = include_str!("../../../book/src/report-schema.md")]
    mod report_schema {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
