//! The JSON interchange format for ideal specifications.
//!
//! ```json
//! {"vars": 4, "generators": [
//!   {"power_of_linear": {"coeffs": [1, 0, 0, 0], "exp": 3}},
//!   {"power_of_linear": {"coeffs": "general", "exp": 3}},
//!   {"form": {"degree": 2, "terms": [[[1, 1, 0, 0], 1], [[0, 0, 2, 0], -3]]}},
//!   {"general_form": {"degree": 2}}
//! ]}
//! ```
//!
//! `"general"` linear forms and `general_form` generators are redrawn per
//! trial from the run's seed. Coefficients that do not fit in 64 bits are
//! written as decimal strings.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{Generator, IdealSpec, LinearFormSpec};
use crate::monomial::ExponentVector;
use crate::poly::{HomogeneousForm, LinearForm};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    vars: usize,
    generators: Vec<GeneratorEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum GeneratorEntry {
    PowerOfLinear { coeffs: Coeffs, exp: usize },
    Form { degree: usize, terms: Vec<(Vec<u32>, Coefficient)> },
    GeneralForm { degree: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Coeffs {
    Fixed(Vec<i64>),
    Keyword(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Small(i64),
    Decimal(String),
}

impl Coefficient {
    fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            Coefficient::Small(c) => Ok(BigInt::from(*c)),
            Coefficient::Decimal(s) => s
                .parse()
                .map_err(|_| format!("coefficient {s:?} is not an integer")),
        }
    }

    fn from_bigint(c: &BigInt) -> Self {
        c.to_i64()
            .map_or_else(|| Coefficient::Decimal(c.to_string()), Coefficient::Small)
    }
}

impl TryFrom<SpecFile> for IdealSpec {
    type Error = String;

    fn try_from(file: SpecFile) -> Result<Self, String> {
        let r = file.vars;
        let generators = file
            .generators
            .into_iter()
            .enumerate()
            .map(|(k, g)| {
                let at = |msg: String| format!("generator {k}: {msg}");
                Ok(match g {
                    GeneratorEntry::PowerOfLinear { coeffs, exp } => {
                        let form = match coeffs {
                            Coeffs::Keyword(w) if w == "general" => LinearFormSpec::General,
                            Coeffs::Keyword(w) => {
                                return Err(at(format!("expected a coefficient list or \"general\", got {w:?}")))
                            }
                            Coeffs::Fixed(c) => {
                                LinearFormSpec::Fixed(LinearForm::new(c).map_err(|e| at(e.to_string()))?)
                            }
                        };
                        Generator::PowerOfLinear { form, exponent: exp }
                    }
                    GeneratorEntry::Form { degree, terms } => {
                        let terms = terms
                            .into_iter()
                            .map(|(e, c)| Ok((ExponentVector::new(e), c.to_bigint()?)))
                            .collect::<Result<Vec<_>, String>>()
                            .map_err(at)?;
                        let f = HomogeneousForm::from_terms(r, degree, terms).map_err(|e| at(e.to_string()))?;
                        Generator::Form(f)
                    }
                    GeneratorEntry::GeneralForm { degree } => Generator::GeneralForm { degree },
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        IdealSpec::new(r, generators).map_err(|e| e.to_string())
    }
}

impl From<IdealSpec> for SpecFile {
    fn from(spec: IdealSpec) -> Self {
        let generators = spec
            .generators()
            .iter()
            .map(|g| match g {
                Generator::PowerOfLinear { form, exponent } => GeneratorEntry::PowerOfLinear {
                    coeffs: match form {
                        LinearFormSpec::General => Coeffs::Keyword("general".into()),
                        LinearFormSpec::Fixed(l) => Coeffs::Fixed(l.coefficients().to_vec()),
                    },
                    exp: *exponent,
                },
                Generator::Form(f) => GeneratorEntry::Form {
                    degree: f.degree(),
                    terms: f
                        .terms()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(m, c)| (m.exponents().to_vec(), Coefficient::from_bigint(c)))
                        .collect(),
                },
                Generator::GeneralForm { degree } => GeneratorEntry::GeneralForm { degree: *degree },
            })
            .collect();
        SpecFile {
            vars: spec.num_vars(),
            generators,
        }
    }
}

/// Parses a specification, reporting the line and column of any problem.
pub fn parse_ideal_spec(text: &str) -> Result<IdealSpec> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e),
    })
}

fn strip_position(e: &serde_json::Error) -> String {
    let full = e.to_string();
    match full.rfind(" at line ") {
        Some(i) => full[..i].to_string(),
        None => full,
    }
}

/// Compact canonical JSON for a specification.
pub fn to_json(spec: &IdealSpec) -> String {
    serde_json::to_string(spec).expect("specifications serialize")
}

/// Pretty-printed JSON for a specification.
pub struct Pretty<'a>(pub &'a IdealSpec);

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string_pretty(self.0).map_err(|_| fmt::Error)?)
    }
}
