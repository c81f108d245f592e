//! Graded ideals of `K[x_1..x_r]` and the dimensions of their quotients.
//!
//! Ideals are described by an [`IdealSpec`]: powers of linear forms, explicit
//! forms, and "general" generators whose coefficients are redrawn for every
//! trial. Each trial works over a random prime field; since ranks can only
//! drop under specialization, the generic dimension of a graded piece is the
//! minimum observed over the trials.

pub(crate) mod engine;
pub mod inverse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{ExponentVector, MAX_VARS};
use crate::poly::{HomogeneousForm, LinearForm};
use crate::spec_file::SpecFile;

pub use engine::{
    exact_graded_piece_dim, graded_piece_dim, hilbert_function, socle_degree, EngineConfig, Presentation, Reduction, Trial,
};

/// A linear form that is either fixed or drawn at random per trial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LinearFormSpec {
    Fixed(LinearForm),
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    PowerOfLinear { form: LinearFormSpec, exponent: usize },
    Form(HomogeneousForm),
    /// A form of the given degree with independent random coefficients.
    GeneralForm { degree: usize },
}

impl Generator {
    pub fn degree(&self) -> usize {
        match self {
            Generator::PowerOfLinear { exponent, .. } => *exponent,
            Generator::Form(f) => f.degree(),
            Generator::GeneralForm { degree } => *degree,
        }
    }
}

/// Homogeneous ideal of `K[x_1..x_r]` given by generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SpecFile", try_from = "SpecFile")]
pub struct IdealSpec {
    num_vars: usize,
    generators: Vec<Generator>,
}

impl IdealSpec {
    pub fn new(num_vars: usize, generators: Vec<Generator>) -> Result<Self> {
        if !(1..=MAX_VARS).contains(&num_vars) {
            return Err(Error::InvalidArgument(format!(
                "between 1 and {MAX_VARS} variables are supported, got {num_vars}"
            )));
        }
        for g in &generators {
            match g {
                Generator::PowerOfLinear { form, exponent } => {
                    if *exponent == 0 {
                        return Err(Error::InvalidArgument("exponents must be at least 1".into()));
                    }
                    if let LinearFormSpec::Fixed(l) = form {
                        if l.num_vars() != num_vars {
                            return Err(Error::InvalidArgument(format!(
                                "linear form has {} coefficients, expected {num_vars}",
                                l.num_vars()
                            )));
                        }
                    }
                }
                Generator::Form(f) => {
                    if f.num_vars() != num_vars {
                        return Err(Error::InvalidArgument(format!(
                            "form in {} variables, expected {num_vars}",
                            f.num_vars()
                        )));
                    }
                    if f.is_zero() {
                        return Err(Error::InvalidArgument("zero generators are not allowed".into()));
                    }
                }
                Generator::GeneralForm { degree } => {
                    if *degree == 0 {
                        return Err(Error::InvalidArgument(
                            "general forms must have positive degree".into(),
                        ));
                    }
                }
            }
        }
        Ok(Self {
            num_vars,
            generators,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn with_generator(&self, g: Generator) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.push(g);
        Self::new(self.num_vars, gens)
    }

    /// `(x_1^2, ..., x_r^2)`
    pub fn squares(r: usize) -> Self {
        Self::monomial_complete_intersection(&vec![2; r])
    }

    /// `(x_1^{a_1}, ..., x_r^{a_r})`
    pub fn monomial_complete_intersection(exponents: &[usize]) -> Self {
        let r = exponents.len();
        let gens = exponents
            .iter()
            .enumerate()
            .map(|(i, &a)| Generator::PowerOfLinear {
                form: LinearFormSpec::Fixed(LinearForm::variable(r, i)),
                exponent: a,
            })
            .collect();
        Self::new(r, gens).expect("valid monomial complete intersection")
    }

    /// `count` general linear forms raised to `exponent`.
    pub fn general_powers(r: usize, count: usize, exponent: usize) -> Self {
        PowerIdealSpec::general(r, &vec![exponent; count]).into()
    }

    /// `(x_1^2, ..., x_r^2, (x_1 + ... + x_r)^2)`
    pub fn squares_and_square_of_sum(r: usize) -> Self {
        Self::squares(r)
            .with_generator(Generator::PowerOfLinear {
                form: LinearFormSpec::Fixed(LinearForm::sum_of_variables(r)),
                exponent: 2,
            })
            .expect("valid")
    }

    /// `count` general forms of degree `degree`.
    pub fn general_forms(r: usize, count: usize, degree: usize) -> Self {
        Self::new(r, vec![Generator::GeneralForm { degree }; count]).expect("valid")
    }

    /// Whether any generator is redrawn per trial.
    pub fn has_general_generators(&self) -> bool {
        self.generators.iter().any(|g| {
            matches!(
                g,
                Generator::GeneralForm { .. }
                    | Generator::PowerOfLinear {
                        form: LinearFormSpec::General,
                        ..
                    }
            )
        })
    }

    /// Scan limit used to declare a quotient non-artinian.
    pub fn artinian_guard(&self) -> usize {
        1 + self.generators.iter().map(Generator::degree).sum::<usize>()
    }
}

/// `(l_1^{a_1}, ..., l_s^{a_s})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerIdealSpec {
    pub num_vars: usize,
    pub generators: Vec<(LinearFormSpec, usize)>,
}

impl PowerIdealSpec {
    /// Powers of general linear forms with the given exponents.
    pub fn general(r: usize, exponents: &[usize]) -> Self {
        Self {
            num_vars: r,
            generators: exponents
                .iter()
                .map(|&a| (LinearFormSpec::General, a))
                .collect(),
        }
    }

    pub fn to_ideal(&self) -> Result<IdealSpec> {
        IdealSpec::new(
            self.num_vars,
            self.generators
                .iter()
                .map(|(form, exponent)| Generator::PowerOfLinear {
                    form: form.clone(),
                    exponent: *exponent,
                })
                .collect(),
        )
    }
}

impl From<PowerIdealSpec> for IdealSpec {
    fn from(p: PowerIdealSpec) -> Self {
        p.to_ideal().expect("invalid power ideal")
    }
}

/// Ideal generated by explicit homogeneous forms of any degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedIdeal {
    num_vars: usize,
    generators: Vec<HomogeneousForm>,
}

impl GradedIdeal {
    pub fn new(num_vars: usize, generators: Vec<HomogeneousForm>) -> Result<Self> {
        IdealSpec::new(
            num_vars,
            generators.iter().cloned().map(Generator::Form).collect(),
        )?;
        Ok(Self {
            num_vars,
            generators,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[HomogeneousForm] {
        &self.generators
    }
}

impl From<GradedIdeal> for IdealSpec {
    fn from(g: GradedIdeal) -> Self {
        IdealSpec::new(g.num_vars, g.generators.into_iter().map(Generator::Form).collect())
            .expect("validated on construction")
    }
}

impl From<&GradedIdeal> for IdealSpec {
    fn from(g: &GradedIdeal) -> Self {
        g.clone().into()
    }
}

/// `I + (f)`
pub fn ideal_sum(ideal: &GradedIdeal, f: HomogeneousForm) -> Result<GradedIdeal> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot add the zero form to an ideal".into()));
    }
    let mut gens = ideal.generators.clone();
    gens.push(f);
    GradedIdeal::new(ideal.num_vars, gens)
}

/// `(h_0, ..., h_e)` with `h_e > 0`; values past `e` are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct HilbertFunction {
    values: Vec<usize>,
}

impl HilbertFunction {
    /// Trailing zeros are trimmed.
    pub fn new(mut values: Vec<usize>) -> Self {
        while values.last() == Some(&0) {
            values.pop();
        }
        Self { values }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, d: usize) -> usize {
        self.values.get(d).copied().unwrap_or(0)
    }

    pub fn socle_degree(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn length(&self) -> usize {
        self.values.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.values.iter().eq(self.values.iter().rev())
    }
}

impl fmt::Display for HilbertFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// `x_i^a` as a form.
pub fn variable_power(r: usize, var: usize, a: u32) -> HomogeneousForm {
    let mut e = vec![0; r];
    e[var] = a;
    HomogeneousForm::monomial(ExponentVector::new(e))
}
