//! Closed-form Hilbert functions and exact identities used to cross-check
//! the engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{hilbert_function, EngineConfig, Generator, HilbertFunction, IdealSpec, LinearFormSpec};
use crate::monomial::binomial_u64;

/// A closed-form table of naturals together with the formula it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleTable {
    pub name: String,
    pub r: usize,
    pub values: Vec<usize>,
    pub source: String,
}

impl OracleTable {
    fn new(name: &str, r: usize, values: Vec<usize>, source: &str) -> Self {
        Self {
            name: name.to_string(),
            r,
            values,
            source: source.to_string(),
        }
    }

    /// `values[i]`, or 0 outside the table.
    pub fn get(&self, i: i64) -> usize {
        usize::try_from(i)
            .ok()
            .and_then(|i| self.values.get(i).copied())
            .unwrap_or(0)
    }

    pub fn matches(&self, h: &HilbertFunction) -> bool {
        let trimmed = HilbertFunction::new(self.values.clone());
        &trimmed == h
    }
}

fn c(n: usize, k: i64) -> usize {
    binomial_u64(n as i64, k) as usize
}

/// `C(n, k)` as a big integer; zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Hilbert function of `K[x_1..x_r]/(x_1^2, ..., x_r^2)`: `C(r, j)`.
pub fn hf_square_ci(r: usize) -> OracleTable {
    let values = (0..=r).map(|j| c(r, j as i64)).collect();
    OracleTable::new("hf_square_ci", r, values, "C(r,j) for 0 <= j <= r")
}

/// Hilbert function of `R/Ann(g)`, `g` the sum of squarefree monomials of
/// degree `r - 2`.
pub fn hf_gorenstein_g(r: usize) -> Result<OracleTable> {
    if r < 3 {
        return Err(Error::OutOfDomain(format!("needs r >= 3, got {r}")));
    }
    let e = r - 2;
    let values = (0..=e)
        .map(|t| if 2 * t <= e { c(r, t as i64) } else { c(r, (e - t) as i64) })
        .collect();
    Ok(OracleTable::new(
        "hf_gorenstein_G",
        r,
        values,
        "C(r,t) for t <= (r-2)/2, C(r,r-2-t) for (r-2)/2 < t <= r-2",
    ))
}

/// Hilbert function of `R/(x_1^2, ..., x_r^2, (x_1 + ... + x_r)^2)`, which is
/// also that of `r + 1` general squares.
///
/// Defined for `r >= 2`; at `r = 2` the even-case formula gives `(1, 2)`.
pub fn hf_acm_squares(r: usize) -> Result<OracleTable> {
    if r < 2 {
        return Err(Error::OutOfDomain(format!("needs r >= 2, got {r}")));
    }
    let q = r / 2;
    let ri = |t: usize| c(r, t as i64) - c(r, t as i64 - 2);
    let mut values: Vec<usize> = (0..=q).map(ri).collect();
    if r % 2 == 1 {
        values.push(c(r, q as i64) - c(r, q as i64 - 1));
    }
    Ok(OracleTable::new(
        "hf_acm_squares",
        r,
        values,
        "C(r,t)-C(r,t-2) for t <= q; C(r,q)-C(r,q-1) at t = q+1 when r = 2q+1",
    ))
}

/// Socle degree of `R/(x_1^2, ..., x_r^2, (x_1 + ... + x_r)^2)`.
pub fn socle_degree_j(r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::OutOfDomain(format!("needs r >= 2, got {r}")));
    }
    Ok(if r % 2 == 1 { r / 2 + 1 } else { r / 2 })
}

/// `dim [R/(I, l)]_q = 2^q` for `r + 1` general squares in `r = 2q + 1` variables.
pub fn coinvariant_dim_2q(q: u32) -> Result<u64> {
    if !(1..64).contains(&q) {
        return Err(Error::OutOfDomain(format!("needs 1 <= q <= 63, got {q}")));
    }
    Ok(1u64 << q)
}

fn as_decimal<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Exact values of each step in the reduction of
/// `dim[R/I]_q < 2^q + dim[R/I]_{q-1}` to a sign condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityTrace {
    pub q: u32,
    #[serde(serialize_with = "as_decimal")]
    pub two_pow_q: BigInt,
    /// `dim [R/I]_q = C(2q+1,q) - C(2q+1,q-2)`
    #[serde(serialize_with = "as_decimal")]
    pub dim_q: BigInt,
    /// `dim [R/I]_{q-1} = C(2q+1,q-1) - C(2q+1,q-3)`
    #[serde(serialize_with = "as_decimal")]
    pub dim_q_minus_1: BigInt,
    /// `C(2q+1,q) - C(2q+1,q-1)`, equal to `C(2q+2,q)/(q+1)`.
    #[serde(serialize_with = "as_decimal")]
    pub step_lhs: BigInt,
    /// `C(2q+1,q-2) - C(2q+1,q-3)`, equal to `3 C(2q+2,q-2)/(q+1)`.
    #[serde(serialize_with = "as_decimal")]
    pub step_rhs: BigInt,
    /// `1 - 3(q-1)q/((q+4)(q+3))`, equal to `-2(q-6)(q+1)/((q+4)(q+3))`.
    #[serde(serialize_with = "as_decimal")]
    pub bracket: BigRational,
    /// `C(2q+2,q)/(q+1) * bracket`
    #[serde(serialize_with = "as_decimal")]
    pub bound: BigRational,
    /// Every rewriting step was checked to be an identity.
    pub steps_consistent: bool,
    /// `2^q > bound`
    pub holds: bool,
}

/// Verifies the chain of equivalent inequalities for `q >= 4` exactly.
pub fn inequality_check(q: u32) -> Result<InequalityTrace> {
    if q < 4 {
        return Err(Error::OutOfDomain(format!("the chain starts at q = 4, got {q}")));
    }
    let qi = i64::from(q);
    let n = 2 * qi + 1;
    let two_pow_q = BigInt::one() << q;
    let dim_q = binomial(n, qi) - binomial(n, qi - 2);
    let dim_q_minus_1 = binomial(n, qi - 1) - binomial(n, qi - 3);
    let step_lhs = binomial(n, qi) - binomial(n, qi - 1);
    let step_rhs = binomial(n, qi - 2) - binomial(n, qi - 3);

    let big = |x: i64| BigInt::from(x);
    let rat = |x: BigInt| BigRational::from_integer(x);
    let central = binomial(n + 1, qi);
    let outer = binomial(n + 1, qi - 2);
    let denom = big((qi + 4) * (qi + 3));
    let bracket = BigRational::one() - BigRational::new(big(3 * (qi - 1) * qi), denom.clone());
    let bracket_factored = BigRational::new(big(-2 * (qi - 6) * (qi + 1)), denom);
    let bound = BigRational::new(central.clone(), big(qi + 1)) * &bracket;

    let original = dim_q < &two_pow_q + &dim_q_minus_1;
    let rearranged = step_lhs < &two_pow_q + &step_rhs;
    let steps_consistent = original == rearranged
        && &step_lhs * big(qi + 1) == central
        && &step_rhs * big(qi + 1) == &outer * big(3)
        && rat(&central - &outer * big(3)) / rat(big(qi + 1)) == bound
        && bracket == bracket_factored
        && (rat(two_pow_q.clone()) > bound) == rearranged;
    let holds = steps_consistent && rat(two_pow_q.clone()) > bound;
    Ok(InequalityTrace {
        q,
        two_pow_q,
        dim_q,
        dim_q_minus_1,
        step_lhs,
        step_rhs,
        bracket,
        bound,
        steps_consistent,
        holds,
    })
}

/// Checks `C(n-1,k) - C(n-1,k-1) = (n-2k)/n C(n,k)` and
/// `C(n,k) = (n+1-k)/k C(n,k-1)` by cross-multiplication.
pub fn binomial_identities(n: u32, k: u32) -> Result<bool> {
    if k < 1 || k > n {
        return Err(Error::OutOfDomain(format!("needs 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let (n, k) = (i64::from(n), i64::from(k));
    let first = BigInt::from(n) * (binomial(n - 1, k) - binomial(n - 1, k - 1))
        == BigInt::from(n - 2 * k) * binomial(n, k);
    let second = BigInt::from(k) * binomial(n, k) == BigInt::from(n + 1 - k) * binomial(n, k - 1);
    Ok(first && second)
}

/// `min{ h[i], t * h[e - i] }` for a complete intersection table `h`.
pub fn relatively_compressed_bound(hf_ci: &OracleTable, t: usize, e: usize, i: usize) -> Result<usize> {
    if i > e {
        return Err(Error::OutOfDomain(format!("needs i <= e, got i = {i}, e = {e}")));
    }
    Ok(hf_ci.get(i as i64).min(t * hf_ci.get((e - i) as i64)))
}

/// Hilbert functions of squares plus a general square, `r + 1` general
/// squares, and `r + 1` general quadrics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemicontinuityReport {
    pub r: usize,
    pub h_a: OracleTable,
    pub h_b: OracleTable,
    pub h_c: OracleTable,
    /// `h_a <= h_b <= h_c` in every degree.
    pub ordered: bool,
    pub all_equal: bool,
}

pub fn semicontinuity_bounds(r: usize, cfg: &EngineConfig) -> Result<SemicontinuityReport> {
    if r < 2 {
        return Err(Error::OutOfDomain(format!("needs r >= 2, got {r}")));
    }
    let a = IdealSpec::squares(r).with_generator(Generator::PowerOfLinear {
        form: LinearFormSpec::General,
        exponent: 2,
    })?;
    let b = IdealSpec::general_powers(r, r + 1, 2);
    let c = IdealSpec::general_forms(r, r + 1, 2);
    let table = |name: &str, spec: &IdealSpec, source: &str| -> Result<OracleTable> {
        let h = hilbert_function(spec, cfg)?;
        Ok(OracleTable::new(name, r, h.values().to_vec(), source))
    };
    let h_a = table("H_A", &a, "engine: squares of the variables and one general square")?;
    let h_b = table("H_B", &b, "engine: r+1 general squares")?;
    let h_c = table("H_C", &c, "engine: r+1 general quadrics")?;
    let len = h_a.values.len().max(h_b.values.len()).max(h_c.values.len()) as i64;
    let ordered = (0..len).all(|t| h_a.get(t) <= h_b.get(t) && h_b.get(t) <= h_c.get(t));
    let all_equal = h_a.values == h_b.values && h_b.values == h_c.values;
    Ok(SemicontinuityReport {
        r,
        h_a,
        h_b,
        h_c,
        ordered,
        all_equal,
    })
}
