//! Macaulay inverse systems: annihilators of dual polynomials, graded colon
//! ideals, and the Gorenstein algebra of the squarefree elementary sum.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::engine::presentations;
use super::{
    graded_piece_dim, hilbert_function, variable_power, EngineConfig, Generator, GradedIdeal,
    HilbertFunction, IdealSpec, Presentation, Reduction,
};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{certified_rank, kernel_exact, kernel_of_images, Echelon, ExactMatrix};
use crate::monomial::{binomial_u64, monomial_basis, Ambient, ExponentVector, MonomialBasis};
use crate::poly::{
    apolar_action, contract_monomial, difference_product_generators, elementary_squarefree_sum,
    DualPolynomial, HomogeneousForm, LinearForm,
};

/// Largest number of variables accepted by the squarefree-sum reports.
pub const APOLAR_MAX_VARS: usize = 9;

/// Matrix of `[R]_d -> [E]_{deg g - d}`, `f ↦ f ∘ g`.
///
/// Columns follow `monomial_basis(r, d)`, rows `monomial_basis(r, deg g - d)`.
/// When `d > deg g` the target is zero and the matrix has no rows.
pub fn catalecticant(g: &DualPolynomial, d: usize) -> ExactMatrix {
    let r = g.num_vars();
    let source = monomial_basis(r, d);
    let Some(e) = g.degree().checked_sub(d) else {
        return ExactMatrix::zeros(0, source.len());
    };
    let target = monomial_basis(r, e);
    let mut m = ExactMatrix::zeros(target.len(), source.len());
    let terms: Vec<(ExponentVector, &BigInt)> = g.terms().filter(|(_, c)| !c.is_zero()).collect();
    for (j, x) in source.monomials().iter().enumerate() {
        for (n, c) in &terms {
            if let Some((k, q)) = contract_monomial(x, n) {
                let i = target.index_of(&q).expect("quotient monomial");
                let v = m.get(i, j) + k * *c;
                m.set(i, j, v);
            }
        }
    }
    m
}

/// Integer basis of `[Ann(g)]_d`, the kernel of the catalecticant.
pub fn annihilator_graded(g: &DualPolynomial, d: usize) -> Vec<HomogeneousForm> {
    let r = g.num_vars();
    kernel_exact(&catalecticant(g, d))
        .into_iter()
        .map(|v| HomogeneousForm::from_coefficients(r, d, v).expect("kernel vector has basis length"))
        .collect()
}

/// Hilbert function of `R/Ann(g)`: the catalecticant ranks in degrees `0..=deg g`.
pub fn gorenstein_hilbert_function(g: &DualPolynomial, cfg: &EngineConfig) -> Result<HilbertFunction> {
    cfg.validate()?;
    let values = (0..=g.degree())
        .into_par_iter()
        .map(|d| Ok(certified_rank(&catalecticant(g, d), None, cfg.trials, cfg.seed)?.rank))
        .collect::<Result<Vec<_>>>()?;
    Ok(HilbertFunction::new(values))
}

fn unit_vectors(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()
}

/// A graded ideal known only through its graded pieces.
pub trait GradedPieces: Sync {
    /// Vectors over `p.ambient().piece(e)` spanning the image of `[B]_e`
    /// in the ambient ring of `p`.
    fn ambient_piece(&self, p: &Presentation, e: usize) -> Vec<Vec<u64>>;
}

/// `Ann(g)` for a dual polynomial `g`.
pub struct Annihilator {
    g: DualPolynomial,
}

impl Annihilator {
    pub fn new(g: DualPolynomial) -> Self {
        Self { g }
    }

    pub fn dual(&self) -> &DualPolynomial {
        &self.g
    }

    fn kernel_over(&self, columns: &MonomialBasis, field: PrimeField) -> Vec<Vec<u64>> {
        let g = &self.g;
        let dual = monomial_basis(g.num_vars(), g.degree() - columns.degree());
        let terms: Vec<(ExponentVector, u64)> = g
            .terms()
            .map(|(n, c)| (n, field.from_bigint(c)))
            .filter(|&(_, c)| c != 0)
            .collect();
        let images: Vec<Vec<u64>> = columns
            .monomials()
            .iter()
            .map(|x| {
                let mut col = vec![0u64; dual.len()];
                for (n, c) in &terms {
                    if let Some((k, q)) = contract_monomial(x, n) {
                        let i = dual.index_of(&q).expect("quotient monomial");
                        col[i] = field.mul_add(col[i], *c, field.from_bigint(&k));
                    }
                }
                col
            })
            .collect();
        kernel_of_images(field, &images, dual.len())
    }
}

impl GradedPieces for Annihilator {
    fn ambient_piece(&self, p: &Presentation, e: usize) -> Vec<Vec<u64>> {
        let basis = p.ambient().piece(e);
        if e > self.g.degree() {
            return unit_vectors(basis.len());
        }
        // If every truncating power kills g, restricting the catalecticant to
        // ambient monomials already gives the image of Ann(g).
        if self.g.terms().all(|(n, c)| c.is_zero() || p.ambient().contains(n.packed())) {
            return self.kernel_over(&basis, p.field());
        }
        let full = monomial_basis(self.g.num_vars(), e);
        self.kernel_over(&full, p.field())
            .into_iter()
            .map(|v| {
                let mut out = vec![0u64; basis.len()];
                for (j, &c) in v.iter().enumerate() {
                    if let Some(i) = basis.index_of_packed(full.packed()[j]) {
                        out[i] = c;
                    }
                }
                out
            })
            .collect()
    }
}

/// The homogeneous maximal ideal `(x_1, ..., x_r)`.
pub struct MaximalIdeal;

impl GradedPieces for MaximalIdeal {
    fn ambient_piece(&self, p: &Presentation, e: usize) -> Vec<Vec<u64>> {
        if e == 0 {
            return Vec::new();
        }
        unit_vectors(p.ambient().piece(e).len())
    }
}

/// The degree-`d` piece of a colon ideal `(a : B)`, computed mod one prime.
#[derive(Clone, Debug)]
pub struct ColonPiece {
    degree: usize,
    dim: usize,
    prime: u64,
    ambient: Ambient,
    ideal: Arc<Echelon>,
    standard: Vec<usize>,
    kernel: Echelon,
}

impl ColonPiece {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `dim_K [a : B]_d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `dim_K [R/(a : B)]_d`.
    pub fn quotient_dim(&self) -> usize {
        monomial_basis(self.ambient.num_vars(), self.degree).len() - self.dim
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// Membership of a degree-`d` form, tested mod the piece's prime.
    pub fn contains(&self, f: &HomogeneousForm) -> bool {
        if f.degree() != self.degree || f.num_vars() != self.ambient.num_vars() {
            return false;
        }
        let field = self.kernel.field();
        let basis = self.ambient.piece(self.degree);
        let mut v = vec![0u64; basis.len()];
        for (m, c) in f.terms() {
            if let Some(i) = basis.index_of_packed(m.packed()) {
                v[i] = field.from_bigint(c);
            }
        }
        self.ideal.reduce(&mut v);
        let coords: Vec<u64> = self.standard.iter().map(|&i| v[i]).collect();
        self.kernel.contains(&coords)
    }
}

fn colon_in(p: &Presentation, b: &dyn GradedPieces, d: usize, e_max: usize) -> ColonPiece {
    let field = p.field();
    let ambient = p.ambient().clone();
    let source = ambient.piece(d);
    let ideal = p.piece(d);
    let standard = ideal.free_columns();
    let mut images: Vec<Vec<u64>> = vec![Vec::new(); standard.len()];
    for e in 1..=e_max {
        if p.dim(d + e) == 0 {
            continue;
        }
        let target = ambient.piece(d + e);
        let target_ideal = p.piece(d + e);
        let target_free = target_ideal.free_columns();
        let b_basis = ambient.piece(e);
        let pieces = b.ambient_piece(p, e);
        for (k, &col) in standard.iter().enumerate() {
            let m = source.packed()[col];
            for bv in &pieces {
                let mut v = vec![0u64; target.len()];
                for (j, &c) in bv.iter().enumerate() {
                    if c != 0 {
                        if let Some(i) = target.index_of_packed(m + b_basis.packed()[j]) {
                            v[i] = field.add(v[i], c);
                        }
                    }
                }
                target_ideal.reduce(&mut v);
                images[k].extend(target_free.iter().map(|&i| v[i]));
            }
        }
    }
    let width = images.first().map_or(0, Vec::len);
    let mut kernel = Echelon::new(field, standard.len());
    for v in kernel_of_images(field, &images, width) {
        kernel.insert(v);
    }
    let full = monomial_basis(ambient.num_vars(), d).len();
    ColonPiece {
        degree: d,
        dim: full - standard.len() + kernel.rank(),
        prime: field.modulus(),
        ambient,
        ideal,
        standard,
        kernel,
    }
}

/// `[a : B]_d = { f in [R]_d : f [B]_e ⊆ [a]_{d+e} for 1 <= e <= e_max }`.
///
/// Exact for artinian `a` once `e_max` reaches the socle degree of `R/a`.
/// Each trial works mod its own prime; the smallest piece is returned.
pub fn colon_graded(
    a: &GradedIdeal,
    b: &dyn GradedPieces,
    d: usize,
    e_max: usize,
    cfg: &EngineConfig,
) -> Result<ColonPiece> {
    let cfg = EngineConfig {
        reduction: Reduction::MonomialOnly,
        ..cfg.clone()
    };
    let pres = presentations(&a.into(), &cfg)?;
    let pieces: Vec<ColonPiece> = pres.par_iter().map(|p| colon_in(p, b, d, e_max)).collect();
    Ok(pieces
        .into_iter()
        .min_by_key(ColonPiece::dim)
        .expect("at least one trial"))
}

fn check_apolar_range(r: usize) -> Result<()> {
    if !(3..=APOLAR_MAX_VARS).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "squarefree-sum reports run for 3 <= r <= {APOLAR_MAX_VARS}, got r = {r}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SDegree {
    pub degree: usize,
    /// `dim [Ann(g)]_d`
    pub ann_dim: usize,
    /// `dim [<S>]_d`
    pub span_dim: usize,
    /// Minimal generators of `<S>` in degree `d`.
    pub new_generators: usize,
    pub equal: bool,
}

/// Comparison of the ideal generated by the difference products with `Ann(g)`,
/// `g` the sum of all squarefree monomials of degree `r - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SGenerationReport {
    pub r: usize,
    pub generators: usize,
    /// Every generator annihilates `g`.
    pub contained: bool,
    pub degrees: Vec<SDegree>,
}

impl SGenerationReport {
    pub fn all_equal(&self) -> bool {
        self.degrees.iter().all(|d| d.equal)
    }
}

/// Degree-by-degree comparison of `<S>` with `Ann(g)` for degrees `0..=r-1`.
pub fn check_s_generates(r: usize, cfg: &EngineConfig) -> Result<SGenerationReport> {
    check_apolar_range(r)?;
    let g = elementary_squarefree_sum(r, r - 2)?;
    let s = difference_product_generators(r)?;
    let mut contained = true;
    for f in &s {
        if f.degree() <= g.degree() && !apolar_action(f, &g)?.is_zero() {
            contained = false;
        }
    }
    let hg = gorenstein_hilbert_function(&g, cfg)?;
    let span = |max_degree: usize| {
        IdealSpec::new(
            r,
            s.iter()
                .filter(|f| f.degree() <= max_degree)
                .cloned()
                .map(Generator::Form)
                .collect(),
        )
    };
    let all = span(usize::MAX)?;
    let degrees = (0..r)
        .map(|d| {
            let ambient = monomial_basis(r, d).len();
            let quotient = graded_piece_dim(&all, d, cfg)?;
            let before = match d.checked_sub(1) {
                Some(lower) => graded_piece_dim(&span(lower)?, d, cfg)?,
                None => ambient,
            };
            let ann_dim = ambient - hg.get(d);
            let span_dim = ambient - quotient;
            Ok(SDegree {
                degree: d,
                ann_dim,
                span_dim,
                new_generators: before - quotient,
                equal: ann_dim == span_dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SGenerationReport {
        r,
        generators: s.len(),
        contained,
        degrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkageDegree {
    pub t: usize,
    /// `dim [R/(a : Ann(g))]_t`
    pub colon_quotient: usize,
    /// `dim [R/(x_1^2, ..., x_r^2, (x_1 + ... + x_r)^2)]_t`
    pub explicit_quotient: usize,
    /// `dim [R/a]_t`
    pub ci: usize,
    /// `H_G(r - t)`
    pub gorenstein_dual: usize,
}

impl LinkageDegree {
    pub fn pieces_agree(&self) -> bool {
        self.colon_quotient == self.explicit_quotient
    }

    pub fn identity_holds(&self) -> bool {
        self.colon_quotient + self.gorenstein_dual == self.ci
    }
}

/// The link `J = (a : Ann(g))` of the squares `a` against the squarefree sum `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkageReport {
    pub r: usize,
    /// The squares and `(x_1 + ... + x_r)^2` lie in the colon.
    pub generators_contained: bool,
    pub degrees: Vec<LinkageDegree>,
}

impl LinkageReport {
    /// Containment plus equal dimensions in every degree: the ideals coincide.
    pub fn pieces_equal(&self) -> bool {
        self.generators_contained && self.degrees.iter().all(LinkageDegree::pieces_agree)
    }

    pub fn identity_holds(&self) -> bool {
        self.degrees.iter().all(LinkageDegree::identity_holds)
    }
}

pub fn linkage_check(r: usize, cfg: &EngineConfig) -> Result<LinkageReport> {
    check_apolar_range(r)?;
    let g = elementary_squarefree_sum(r, r - 2)?;
    let hg = gorenstein_hilbert_function(&g, cfg)?;
    let squares: Vec<HomogeneousForm> = (0..r).map(|i| variable_power(r, i, 2)).collect();
    let a = GradedIdeal::new(r, squares.clone())?;
    let b = Annihilator::new(g);
    let explicit = hilbert_function(&IdealSpec::squares_and_square_of_sum(r), cfg)?;
    let pieces = (0..=r)
        .map(|t| colon_graded(&a, &b, t, r, cfg))
        .collect::<Result<Vec<_>>>()?;
    let sum_square = LinearForm::sum_of_variables(r).to_form().pow(2);
    let generators_contained = squares
        .iter()
        .chain(std::iter::once(&sum_square))
        .all(|f| pieces[2].contains(f));
    let degrees = pieces
        .iter()
        .map(|piece| {
            let t = piece.degree();
            LinkageDegree {
                t,
                colon_quotient: piece.quotient_dim(),
                explicit_quotient: explicit.get(t),
                ci: binomial_u64(r as i64, t as i64) as usize,
                gorenstein_dual: hg.get(r - t),
            }
        })
        .collect();
    Ok(LinkageReport {
        r,
        generators_contained,
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::ExponentVector;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn x(r: usize, e: &[u32]) -> HomogeneousForm {
        let mut v = vec![0; r];
        v[..e.len()].copy_from_slice(e);
        HomogeneousForm::monomial(ExponentVector::new(v))
    }

    #[test]
    fn annihilator_of_linear_sum() {
        let g = elementary_squarefree_sum(3, 1).unwrap();
        let ann = annihilator_graded(&g, 1);
        assert_eq!(ann.len(), 2);
        for f in &ann {
            assert!(apolar_action(f, &g).unwrap().is_zero());
        }
        assert_eq!(annihilator_graded(&g, 2).len(), 6);
    }

    #[test]
    fn annihilator_in_degree_two_for_five_variables() {
        let g = elementary_squarefree_sum(5, 3).unwrap();
        assert_eq!(annihilator_graded(&g, 2).len(), 10);
    }

    #[test]
    fn top_degree_annihilator_has_codimension_one() {
        let g = HomogeneousForm::from_terms(
            3,
            3,
            [
                (ExponentVector::new(vec![3, 0, 0]), 2),
                (ExponentVector::new(vec![1, 1, 1]), -1),
                (ExponentVector::new(vec![0, 1, 2]), 5),
            ],
        )
        .unwrap();
        assert_eq!(annihilator_graded(&g, 3).len(), monomial_basis(3, 3).len() - 1);
    }

    #[test]
    fn gorenstein_hilbert_functions() {
        let expect: [&[usize]; 3] = [&[1, 1], &[1, 5, 5, 1], &[1, 7, 21, 21, 7, 1]];
        for (r, e) in [3, 5, 7].into_iter().zip(expect) {
            let g = elementary_squarefree_sum(r, r - 2).unwrap();
            assert_eq!(gorenstein_hilbert_function(&g, &cfg()).unwrap().values(), e);
        }
    }

    #[test]
    fn socle_of_square_ci_is_in_colon_by_maximal_ideal() {
        let a = GradedIdeal::new(2, vec![variable_power(2, 0, 2), variable_power(2, 1, 2)]).unwrap();
        let piece = colon_graded(&a, &MaximalIdeal, 2, 2, &cfg()).unwrap();
        assert!(piece.contains(&x(2, &[1, 1])));
        assert_eq!(piece.quotient_dim(), 0);
        let zero = colon_graded(&a, &MaximalIdeal, 0, 2, &cfg()).unwrap();
        assert_eq!(zero.dim(), 0);
        let one = colon_graded(&a, &MaximalIdeal, 1, 2, &cfg()).unwrap();
        assert_eq!(one.dim(), 0);
        assert!(!one.contains(&x(2, &[1, 0])));
    }

    #[test]
    fn colon_with_ann_in_five_variables() {
        let r = 5;
        let a = GradedIdeal::new(r, (0..r).map(|i| variable_power(r, i, 2)).collect()).unwrap();
        let b = Annihilator::new(elementary_squarefree_sum(r, r - 2).unwrap());
        let piece = colon_graded(&a, &b, 2, r, &cfg()).unwrap();
        assert_eq!(piece.dim(), 6);
        assert_eq!(piece.quotient_dim(), 9);
        assert!(piece.contains(&LinearForm::sum_of_variables(r).to_form().pow(2)));
        assert!(!piece.contains(&x(r, &[1, 1])));
    }

    #[test]
    fn annihilator_pieces_without_restriction() {
        // Ambient of cubes does not kill g = X1^3, so the full kernel is projected.
        let g = HomogeneousForm::monomial(ExponentVector::new(vec![3, 0]));
        let a = GradedIdeal::new(2, vec![variable_power(2, 0, 3), variable_power(2, 1, 3)]).unwrap();
        let piece = colon_graded(&a, &Annihilator::new(g), 1, 4, &cfg()).unwrap();
        // (x^3, y^3) : (y, x^4) contains y^2 in degree 2 but in degree 1 nothing.
        assert_eq!(piece.dim(), 0);
    }

    #[test]
    fn s_generates_small_cases() {
        for r in [3, 4, 5] {
            let rep = check_s_generates(r, &cfg()).unwrap();
            assert!(rep.contained, "r = {r}");
            assert!(rep.all_equal(), "r = {r}: {rep:?}");
        }
        assert!(check_s_generates(2, &cfg()).is_err());
        assert!(check_s_generates(10, &cfg()).is_err());
    }

    #[test]
    fn linkage_small_cases() {
        for r in 3..=6 {
            let rep = linkage_check(r, &cfg()).unwrap();
            assert!(rep.pieces_equal(), "r = {r}: {rep:?}");
            assert!(rep.identity_holds(), "r = {r}: {rep:?}");
        }
    }
}
