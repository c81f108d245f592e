//! Homogeneous forms with integer coefficients and the contraction action
//! on dual polynomials.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::monomial::{monomial_basis, ExponentVector};

/// A nonzero linear form `c_1 x_1 + ... + c_r x_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    coefficients: Vec<i64>,
}

impl LinearForm {
    pub fn new(coefficients: Vec<i64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidArgument("a linear form needs at least one variable".into()));
        }
        if coefficients.iter().all(|&c| c == 0) {
            return Err(Error::InvalidArgument("the zero linear form is not allowed".into()));
        }
        Ok(Self { coefficients })
    }

    pub fn variable(r: usize, var: usize) -> Self {
        let mut c = vec![0; r];
        c[var] = 1;
        Self { coefficients: c }
    }

    /// `x_1 + ... + x_r`
    pub fn sum_of_variables(r: usize) -> Self {
        Self {
            coefficients: vec![1; r],
        }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn num_vars(&self) -> usize {
        self.coefficients.len()
    }

    pub fn to_form(&self) -> HomogeneousForm {
        let r = self.num_vars();
        let mut f = HomogeneousForm::zero(r, 1);
        for (i, &c) in self.coefficients.iter().enumerate() {
            f.coefficients[i] = BigInt::from(c);
        }
        f
    }
}

/// Homogeneous polynomial of a fixed degree, stored densely over
/// `monomial_basis(r, degree)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    num_vars: usize,
    degree: usize,
    coefficients: Vec<BigInt>,
}

/// Dual polynomials in `X_1..X_r` share the dense layout of forms.
pub type DualPolynomial = HomogeneousForm;

impl HomogeneousForm {
    pub fn zero(r: usize, degree: usize) -> Self {
        let n = monomial_basis(r, degree).len();
        Self {
            num_vars: r,
            degree,
            coefficients: vec![BigInt::zero(); n],
        }
    }

    pub fn from_coefficients(r: usize, degree: usize, coefficients: Vec<BigInt>) -> Result<Self> {
        let n = monomial_basis(r, degree).len();
        if coefficients.len() != n {
            return Err(Error::InvalidArgument(format!(
                "degree-{degree} forms in {r} variables have {n} coefficients, got {}",
                coefficients.len()
            )));
        }
        Ok(Self {
            num_vars: r,
            degree,
            coefficients,
        })
    }

    /// Sums the given terms. All exponent vectors must have length `r` and
    /// total degree `degree`.
    pub fn from_terms<C: Into<BigInt>>(
        r: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (ExponentVector, C)>,
    ) -> Result<Self> {
        let basis = monomial_basis(r, degree);
        let mut f = Self::zero(r, degree);
        for (m, c) in terms {
            if m.num_vars() != r || m.degree() != degree {
                return Err(Error::InvalidArgument(format!(
                    "term {m} does not belong to degree {degree} in {r} variables"
                )));
            }
            let i = basis.index_of(&m).expect("monomial of matching shape");
            f.coefficients[i] += c.into();
        }
        Ok(f)
    }

    pub fn monomial(m: ExponentVector) -> Self {
        let (r, d) = (m.num_vars(), m.degree());
        Self::from_terms(r, d, [(m, 1)]).expect("shape matches by construction")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }

    pub fn coefficient(&self, m: &ExponentVector) -> BigInt {
        monomial_basis(self.num_vars, self.degree)
            .index_of(m)
            .map(|i| self.coefficients[i].clone())
            .unwrap_or_default()
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (ExponentVector, &BigInt)> + '_ {
        let basis = monomial_basis(self.num_vars, self.degree);
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (basis.get(i).clone(), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.num_vars, self.degree), (other.num_vars, other.degree));
        Self {
            num_vars: self.num_vars,
            degree: self.degree,
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            num_vars: self.num_vars,
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars);
        let r = self.num_vars;
        let d = self.degree + other.degree;
        let target = monomial_basis(r, d);
        let lhs = monomial_basis(r, self.degree);
        let rhs = monomial_basis(r, other.degree);
        let mut out = vec![BigInt::zero(); target.len()];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = target
                    .index_of_packed(lhs.packed()[i] + rhs.packed()[j])
                    .expect("product monomial");
                out[k] += a * b;
            }
        }
        Self {
            num_vars: r,
            degree: d,
            coefficients: out,
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::from_terms(self.num_vars, 0, [(ExponentVector::one(self.num_vars), 1)])
            .expect("constant");
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `-1` if needed so the first nonzero coefficient is positive.
    pub fn sign_normalized(&self) -> Self {
        match self.coefficients.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => self.scale(&BigInt::from(-1)),
            _ => self.clone(),
        }
    }
}

impl fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if abs.is_one() && m.degree() > 0 {
                write!(f, "{m}")?;
            } else if m.degree() == 0 {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `l^a`, with the coefficient of `x^m` equal to
/// `a! / (m_1! ... m_r!) * prod c_i^{m_i}`.
pub fn expand_power_of_linear_form(l: &LinearForm, a: usize) -> Result<HomogeneousForm> {
    if l.coefficients.iter().all(|&c| c == 0) {
        return Err(Error::InvalidArgument("cannot expand a power of the zero form".into()));
    }
    let r = l.num_vars();
    let basis = monomial_basis(r, a);
    let top = factorial(a as u32);
    let coefficients = basis
        .monomials()
        .iter()
        .map(|m| {
            let mut num = top.clone();
            let mut den = BigInt::one();
            for (&e, &c) in m.exponents().iter().zip(&l.coefficients) {
                if e > 0 {
                    if c == 0 {
                        return BigInt::zero();
                    }
                    num *= num_traits::pow(BigInt::from(c), e as usize);
                    den *= factorial(e);
                }
            }
            num / den
        })
        .collect();
    HomogeneousForm::from_coefficients(r, a, coefficients)
}

/// Matrix of `[R]_d -> [R]_{d+a}, m -> f*m`. Columns follow
/// `monomial_basis(r, d)`, rows follow `monomial_basis(r, d + a)`.
pub fn multiplication_matrix(f: &HomogeneousForm, d: usize) -> ExactMatrix {
    let r = f.num_vars();
    let src = monomial_basis(r, d);
    let dst = monomial_basis(r, d + f.degree());
    let fb = monomial_basis(r, f.degree());
    let mut m = ExactMatrix::zeros(dst.len(), src.len());
    for (j, &s) in src.packed().iter().enumerate() {
        for (i, c) in f.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = dst.index_of_packed(s + fb.packed()[i]).expect("product monomial");
            m.set(row, j, c.clone());
        }
    }
    m
}

/// Coefficient of `x^m` acting on `X^n` by differentiation: `prod n_i!/(n_i - m_i)!`
/// times `X^{n-m}`, or nothing when `m` does not divide `n`.
pub fn contract_monomial(m: &ExponentVector, n: &ExponentVector) -> Option<(BigInt, ExponentVector)> {
    let quotient = n.div(m)?;
    let mut c = BigInt::one();
    for (&ni, &mi) in n.exponents().iter().zip(m.exponents()) {
        for k in 0..mi {
            c *= ni - k;
        }
    }
    Some((c, quotient))
}

/// `f ∘ g`, where `x_i` acts on dual polynomials as `∂/∂X_i`.
pub fn apolar_action(f: &HomogeneousForm, g: &DualPolynomial) -> Result<DualPolynomial> {
    assert_eq!(f.num_vars(), g.num_vars());
    if f.degree() > g.degree() {
        return Err(Error::DegreeUnderflow {
            form: f.degree(),
            target: g.degree(),
        });
    }
    let r = f.num_vars();
    let out_degree = g.degree() - f.degree();
    let out_basis = monomial_basis(r, out_degree);
    let mut out = vec![BigInt::zero(); out_basis.len()];
    for (m, a) in f.terms() {
        for (n, b) in g.terms() {
            if let Some((c, q)) = contract_monomial(&m, &n) {
                let k = out_basis.index_of(&q).expect("quotient monomial");
                out[k] += a * b * c;
            }
        }
    }
    HomogeneousForm::from_coefficients(r, out_degree, out)
}

/// Sum of all `C(r, k)` squarefree monomials of degree `k`, each with coefficient 1.
pub fn elementary_squarefree_sum(r: usize, k: usize) -> Result<DualPolynomial> {
    if k > r {
        return Err(Error::InvalidArgument(format!(
            "no squarefree monomials of degree {k} in {r} variables"
        )));
    }
    let basis = monomial_basis(r, k);
    let coefficients = basis
        .monomials()
        .iter()
        .map(|m| {
            if m.is_squarefree() {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    HomogeneousForm::from_coefficients(r, k, coefficients)
}

/// Perfect matchings of `items` (even length) into unordered pairs `(a, b)`, `a < b`.
fn perfect_matchings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for j in 1..items.len() {
        let rest: Vec<usize> = items[1..]
            .iter()
            .enumerate()
            .filter(|&(i, _)| i + 1 != j)
            .map(|(_, &x)| x)
            .collect();
        for mut m in perfect_matchings(&rest) {
            m.insert(0, (first, items[j]));
            out.push(m);
        }
    }
    out
}

fn difference_product(r: usize, pairs: &[(usize, usize)], extra: Option<usize>) -> HomogeneousForm {
    let mut acc = HomogeneousForm::from_terms(r, 0, [(ExponentVector::one(r), 1)]).expect("constant");
    for &(a, b) in pairs {
        let mut c = vec![0i64; r];
        c[a] = 1;
        c[b] = -1;
        acc = acc.mul(&LinearForm { coefficients: c }.to_form());
    }
    if let Some(v) = extra {
        acc = acc.mul(&LinearForm::variable(r, v).to_form());
    }
    acc
}

/// The squares `x_i^2` followed by the products of differences
/// `(x_{i_1} - x_{i_2}) ... (x_{i_{r-2}} - x_{i_{r-1}})` (odd `r`), or
/// `(x_{i_1} - x_{i_2}) ... (x_{i_{r-3}} - x_{i_{r-2}}) x_{i_{r-1}}` (even `r`),
/// over pairwise-distinct indices.
///
/// Reordering the pairs or the two entries of a pair changes a product by at
/// most a sign, so the products are enumerated over pair matchings and then
/// deduplicated after sign normalization.
pub fn difference_product_generators(r: usize) -> Result<Vec<HomogeneousForm>> {
    if r < 3 {
        return Err(Error::InvalidArgument(format!(
            "difference products need at least 3 variables, got {r}"
        )));
    }
    let mut out: Vec<HomogeneousForm> = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 2;
            HomogeneousForm::monomial(ExponentVector::new(e))
        })
        .collect();
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut push = |f: HomogeneousForm, out: &mut Vec<HomogeneousForm>| {
        let f = f.sign_normalized();
        if seen.insert(f.coefficients().to_vec()) {
            out.push(f);
        }
    };
    for skipped in 0..r {
        let rest: Vec<usize> = (0..r).filter(|&i| i != skipped).collect();
        if r % 2 == 1 {
            for m in perfect_matchings(&rest) {
                push(difference_product(r, &m, None), &mut out);
            }
        } else {
            for &single in &rest {
                let paired: Vec<usize> = rest.iter().copied().filter(|&i| i != single).collect();
                for m in perfect_matchings(&paired) {
                    push(difference_product(r, &m, Some(single)), &mut out);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rank_exact;
    use proptest::prelude::*;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector::new(e.to_vec())
    }

    #[test]
    fn binomial_and_trinomial_squares() {
        let f = expand_power_of_linear_form(&LinearForm::new(vec![1, 1]).unwrap(), 2).unwrap();
        assert_eq!(f.to_string(), "x1^2 + 2*x1*x2 + x2^2");
        let g = expand_power_of_linear_form(&LinearForm::new(vec![1, 1, 1]).unwrap(), 2).unwrap();
        assert_eq!(
            g.to_string(),
            "x1^2 + 2*x1*x2 + x2^2 + 2*x1*x3 + 2*x2*x3 + x3^2"
        );
        let h = expand_power_of_linear_form(&LinearForm::variable(4, 0), 5).unwrap();
        assert_eq!(h, HomogeneousForm::monomial(ev(&[5, 0, 0, 0])));
        assert!(LinearForm::new(vec![0, 0]).is_err());
    }

    #[test]
    fn power_expansion_matches_repeated_multiplication() {
        let l = LinearForm::new(vec![3, -2, 5]).unwrap();
        for a in 1..=5 {
            assert_eq!(
                expand_power_of_linear_form(&l, a).unwrap(),
                l.to_form().pow(a)
            );
        }
    }

    #[test]
    fn multiplication_matrix_examples() {
        let x = LinearForm::variable(2, 0).to_form();
        let m = multiplication_matrix(&x, 1);
        assert_eq!((m.rows(), m.cols()), (3, 2));
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(m.get(0, 0), &BigInt::from(1)); // x*x -> x^2
        assert_eq!(m.get(1, 1), &BigInt::from(1)); // x*y -> xy

        let s = LinearForm::new(vec![1, 1]).unwrap().to_form();
        let col = multiplication_matrix(&s, 0);
        assert_eq!((col.rows(), col.cols()), (2, 1));
        assert_eq!(col.get(0, 0), &BigInt::from(1));
        assert_eq!(col.get(1, 0), &BigInt::from(1));

        let sq = expand_power_of_linear_form(&LinearForm::sum_of_variables(3), 2).unwrap();
        let m3 = multiplication_matrix(&sq, 1);
        assert_eq!((m3.rows(), m3.cols()), (10, 3));
        assert_eq!(rank_exact(&m3), 3);
    }

    #[test]
    fn multiplication_by_sum_on_squarefree_degree_one() {
        // x+y : [K[x,y]/(x^2,y^2)]_1 -> [.]_2 = span{xy}; both x and y map to xy.
        let s = LinearForm::new(vec![1, 1]).unwrap().to_form();
        let full = multiplication_matrix(&s, 1);
        let xy_row = monomial_basis(2, 2).index_of(&ev(&[1, 1])).unwrap();
        let restricted = ExactMatrix::from_rows(&[[
            i64::try_from(full.get(xy_row, 0)).unwrap(),
            i64::try_from(full.get(xy_row, 1)).unwrap(),
        ]]);
        assert_eq!(rank_exact(&restricted), 1);
    }

    #[test]
    fn apolar_examples() {
        let g = elementary_squarefree_sum(3, 1).unwrap();
        let d = LinearForm::new(vec![1, -1, 0]).unwrap().to_form();
        assert!(apolar_action(&d, &g).unwrap().is_zero());

        let g5 = elementary_squarefree_sum(5, 3).unwrap();
        for i in 0..5 {
            let mut e = vec![0; 5];
            e[i] = 2;
            let sq = HomogeneousForm::monomial(ExponentVector::new(e));
            assert!(apolar_action(&sq, &g5).unwrap().is_zero());
        }

        let f = HomogeneousForm::monomial(ev(&[1, 1, 0]));
        let g = HomogeneousForm::monomial(ev(&[1, 1, 1]));
        assert_eq!(
            apolar_action(&f, &g).unwrap(),
            HomogeneousForm::monomial(ev(&[0, 0, 1]))
        );

        let cube = HomogeneousForm::monomial(ev(&[3, 0]));
        let x = HomogeneousForm::monomial(ev(&[1, 0]));
        assert_eq!(apolar_action(&x, &cube).unwrap().to_string(), "3*x1^2");
        assert_eq!(
            apolar_action(&cube, &x),
            Err(Error::DegreeUnderflow { form: 3, target: 1 })
        );
    }

    #[test]
    fn elementary_sums() {
        assert_eq!(elementary_squarefree_sum(3, 1).unwrap().to_string(), "x1 + x2 + x3");
        let e = elementary_squarefree_sum(5, 3).unwrap();
        assert_eq!(e.terms().count(), 10);
        assert!(e.terms().all(|(m, c)| m.is_squarefree() && c.is_one()));
        assert_eq!(elementary_squarefree_sum(4, 0).unwrap().to_string(), "1");
        assert!(elementary_squarefree_sum(3, 4).is_err());
    }

    /// Brute force over index sequences, as an independent count.
    fn brute_force_products(r: usize) -> BTreeSet<Vec<BigInt>> {
        let len = r - 1;
        let mut out = BTreeSet::new();
        let mut seq = Vec::new();
        fn go(r: usize, len: usize, seq: &mut Vec<usize>, out: &mut BTreeSet<Vec<BigInt>>) {
            if seq.len() == len {
                let pairs: Vec<(usize, usize)> = seq.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect();
                let extra = if len % 2 == 1 { Some(seq[len - 1]) } else { None };
                let f = difference_product(r, &pairs, extra).sign_normalized();
                out.insert(f.coefficients().to_vec());
                return;
            }
            for i in 0..r {
                if !seq.contains(&i) {
                    seq.push(i);
                    go(r, len, seq, out);
                    seq.pop();
                }
            }
        }
        go(r, len, &mut seq, &mut out);
        out
    }

    #[test]
    fn difference_products_match_sequence_enumeration() {
        for r in 3..=6 {
            let gens = difference_product_generators(r).unwrap();
            let products: BTreeSet<Vec<BigInt>> =
                gens[r..].iter().map(|f| f.coefficients().to_vec()).collect();
            assert_eq!(products, brute_force_products(r), "r = {r}");
        }
    }

    #[test]
    fn difference_product_shapes() {
        let g3 = difference_product_generators(3).unwrap();
        assert_eq!(g3.len(), 3 + 3);
        assert!(g3[3..].iter().all(|f| f.degree() == 1));

        let g4 = difference_product_generators(4).unwrap();
        assert!(g4[4..].iter().all(|f| f.degree() == 2));
        // (x_i - x_j) x_k with i < j and k distinct: 6 pairs times 2 singles.
        assert_eq!(g4.len() - 4, 12);

        let g5 = difference_product_generators(5).unwrap();
        assert!(g5[5..].iter().all(|f| f.degree() == 2));
        // 5 choices of skipped index, 3 matchings of the other four.
        assert_eq!(g5.len() - 5, 15);
        assert!(difference_product_generators(2).is_err());
    }

    #[test]
    fn difference_products_annihilate_the_elementary_sum() {
        for r in 3..=9 {
            let g = elementary_squarefree_sum(r, r - 2).unwrap();
            for f in difference_product_generators(r).unwrap() {
                // Forms of degree above deg g kill it for degree reasons.
                if f.degree() > g.degree() {
                    continue;
                }
                assert!(apolar_action(&f, &g).unwrap().is_zero(), "r = {r}, f = {f}");
            }
        }
    }

    #[test]
    fn pairing_of_equal_degree_monomials_is_diagonal() {
        for (r, d) in [(2, 3), (3, 2), (4, 2)] {
            let basis = monomial_basis(r, d);
            for m in basis.monomials() {
                for n in basis.monomials() {
                    let v = apolar_action(&HomogeneousForm::monomial(m.clone()), &HomogeneousForm::monomial(n.clone())).unwrap();
                    let c = v.coefficients()[0].clone();
                    if m == n {
                        assert!(c.is_positive());
                    } else {
                        assert!(c.is_zero());
                    }
                }
            }
        }
    }

    fn form(r: usize, d: usize) -> impl Strategy<Value = HomogeneousForm> {
        let n = monomial_basis(r, d).len();
        prop::collection::vec(-5i64..=5, n).prop_map(move |c| {
            HomogeneousForm::from_coefficients(r, d, c.into_iter().map(BigInt::from).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn multiplication_matrices_compose(f in form(3, 1), g in form(3, 2), d in 0usize..3) {
            // M_{fg} on degree d equals M_f (on degree d+2) times M_g (on degree d).
            let mg = multiplication_matrix(&g, d);
            let mf = multiplication_matrix(&f, d + 2);
            let mfg = multiplication_matrix(&f.mul(&g), d);
            for i in 0..mfg.rows() {
                for j in 0..mfg.cols() {
                    let mut acc = BigInt::zero();
                    for k in 0..mg.rows() {
                        acc += mf.get(i, k) * mg.get(k, j);
                    }
                    prop_assert_eq!(&acc, mfg.get(i, j));
                }
            }
        }

        #[test]
        fn apolar_action_is_bilinear(f1 in form(3, 2), f2 in form(3, 2), g1 in form(3, 3), g2 in form(3, 3), c in -4i64..4) {
            let c = BigInt::from(c);
            let lhs = apolar_action(&f1.add(&f2.scale(&c)), &g1).unwrap();
            let rhs = apolar_action(&f1, &g1).unwrap().add(&apolar_action(&f2, &g1).unwrap().scale(&c));
            prop_assert_eq!(lhs, rhs);
            let lhs = apolar_action(&f1, &g1.add(&g2.scale(&c))).unwrap();
            let rhs = apolar_action(&f1, &g1).unwrap().add(&apolar_action(&f1, &g2).unwrap().scale(&c));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
