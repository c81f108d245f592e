use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex, RwLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Generator, HilbertFunction, IdealSpec, LinearFormSpec};
use crate::error::{Error, Result};
use crate::field::{nth_random_prime, seeded_rng, stream, PrimeField};
use crate::matrix::{rank_exact, Echelon, ExactMatrix};
use crate::monomial::{monomial_basis, unit, Ambient, MonomialBasis, Packed};
use crate::poly::{expand_power_of_linear_form, multiplication_matrix, LinearForm};

/// How a trial chooses the ring it eliminates in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Pure powers of the variables become a truncated ambient; otherwise `r`
    /// independent powers of linear forms are moved onto the variables by a
    /// change of coordinates. Falls back to the full polynomial ring.
    #[default]
    Auto,
    /// Only pure powers of the variables are absorbed; no coordinate change.
    MonomialOnly,
    /// Always eliminate in the full polynomial ring.
    FullRing,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EngineConfig {
    pub seed: u64,
    pub trials: usize,
    pub prime_bits: u32,
    /// General coefficients are drawn uniformly from `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
    pub reduction: Reduction,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            trials: 3,
            prime_bits: 31,
            coeff_bound: 10_000,
            reduction: Reduction::Auto,
        }
    }
}

impl EngineConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(20..=62).contains(&self.prime_bits) {
            return Err(Error::InvalidArgument(format!(
                "prime size must be between 20 and 62 bits, got {}",
                self.prime_bits
            )));
        }
        if self.coeff_bound < 1 {
            return Err(Error::InvalidArgument("coefficient bound must be positive".into()));
        }
        Ok(())
    }

    /// The prime used by each trial, in trial order.
    pub fn primes(&self) -> Result<Vec<u64>> {
        (0..self.trials)
            .map(|t| nth_random_prime(self.prime_bits, self.seed, t as u64))
            .collect()
    }
}

/// Randomness for one trial: a prime field plus a coefficient stream.
pub struct Trial {
    index: usize,
    field: PrimeField,
    rng: ChaCha8Rng,
    coeff_bound: i64,
}

impl Trial {
    pub fn new(cfg: &EngineConfig, index: usize) -> Result<Self> {
        cfg.validate()?;
        let p = nth_random_prime(cfg.prime_bits, cfg.seed, index as u64)?;
        Ok(Self {
            index,
            field: PrimeField::new(p)?,
            rng: seeded_rng(cfg.seed, stream::id(stream::COEFFICIENTS, index as u64)),
            coeff_bound: cfg.coeff_bound,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn draw_coefficient(&mut self) -> i64 {
        self.rng.gen_range(-self.coeff_bound..=self.coeff_bound)
    }

    pub fn draw_linear_form(&mut self, r: usize) -> LinearForm {
        loop {
            let c: Vec<i64> = (0..r).map(|_| self.draw_coefficient()).collect();
            if let Ok(l) = LinearForm::new(c) {
                return l;
            }
        }
    }
}

/// A form in the coordinates of a presentation's ambient ring, mod p.
#[derive(Clone, Debug)]
pub(crate) struct AmbientForm {
    pub degree: usize,
    pub terms: Vec<(Packed, u64)>,
}

impl AmbientForm {
    pub fn linear(coeffs: &[u64]) -> Self {
        Self {
            degree: 1,
            terms: coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (unit(i), c))
                .collect(),
        }
    }

    pub fn one() -> Self {
        Self {
            degree: 0,
            terms: vec![(0, 1)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self, ambient: &Ambient, field: PrimeField) -> Self {
        let mut acc: HashMap<Packed, u64> = HashMap::new();
        for &(a, x) in &self.terms {
            for &(b, y) in &other.terms {
                let m = a + b;
                if ambient.contains(m) {
                    let e = acc.entry(m).or_insert(0);
                    *e = field.mul_add(*e, x, y);
                }
            }
        }
        let mut terms: Vec<(Packed, u64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable();
        Self {
            degree: self.degree + other.degree,
            terms,
        }
    }

    pub fn pow(&self, k: usize, ambient: &Ambient, field: PrimeField) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self, ambient, field);
        }
        acc
    }

    /// Adds `self * m` into `row`, indexed by `target` (degree `deg m + self.degree`).
    #[inline]
    pub fn accumulate_times_monomial(&self, m: Packed, target: &MonomialBasis, field: PrimeField, row: &mut [u64]) {
        for &(t, c) in &self.terms {
            if let Some(i) = target.index_of_packed(m + t) {
                row[i] = field.add(row[i], c);
            }
        }
    }
}

enum Concrete {
    Power { linear: Vec<u64>, exponent: usize },
    Form { degree: usize, terms: Vec<(Packed, u64)> },
}

impl Concrete {
    /// `Some((var, exponent))` when this is a nonzero multiple of `x_var^exponent`.
    fn pure_power(&self) -> Option<(usize, usize)> {
        match self {
            Concrete::Power { linear, exponent } => {
                let mut nz = linear.iter().enumerate().filter(|(_, &c)| c != 0);
                let (var, _) = nz.next()?;
                nz.next().is_none().then_some((var, *exponent))
            }
            Concrete::Form { degree, terms } => {
                let [(m, _)] = terms.as_slice() else {
                    return None;
                };
                (0..crate::monomial::MAX_VARS)
                    .find(|&v| *m == (*degree as u128) << (8 * v))
                    .map(|v| (v, *degree))
            }
        }
    }
}

fn concretize(spec: &IdealSpec, trial: &mut Trial) -> Vec<Concrete> {
    let r = spec.num_vars();
    let field = trial.field;
    spec.generators()
        .iter()
        .map(|g| match g {
            Generator::PowerOfLinear { form, exponent } => {
                let l = match form {
                    LinearFormSpec::Fixed(l) => l.clone(),
                    LinearFormSpec::General => trial.draw_linear_form(r),
                };
                Concrete::Power {
                    linear: l.coefficients().iter().map(|&c| field.from_i64(c)).collect(),
                    exponent: *exponent,
                }
            }
            Generator::Form(f) => Concrete::Form {
                degree: f.degree(),
                terms: f
                    .terms()
                    .map(|(m, c)| (m.packed(), field.from_bigint(c)))
                    .filter(|&(_, c)| c != 0)
                    .collect(),
            },
            Generator::GeneralForm { degree } => {
                let basis = monomial_basis(r, *degree);
                let terms = basis
                    .packed()
                    .iter()
                    .map(|&m| (m, field.from_i64(trial.draw_coefficient())))
                    .filter(|&(_, c)| c != 0)
                    .collect();
                Concrete::Form {
                    degree: *degree,
                    terms,
                }
            }
        })
        .collect()
}

/// Inverse of a square matrix over `field`, or `None` when singular.
fn invert(rows: &[Vec<u64>], field: PrimeField) -> Option<Vec<Vec<u64>>> {
    let n = rows.len();
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| a[i][col] != 0)?;
        a.swap(col, p);
        let inv = field.inv(a[col][col]);
        for x in a[col].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && row[col] != 0 {
                let f = field.neg(row[col]);
                field.axpy(row, &pivot, f);
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// One trial's concrete ideal, rewritten in a convenient ambient ring.
///
/// The ambient is `K[y]/(y_1^{c_1}, ..., y_r^{c_r})` where the truncating
/// powers are generators of the ideal (possibly after the linear change of
/// coordinates `y = M x`), or the polynomial ring itself. Graded pieces of
/// the quotient are computed as ambient pieces modulo the span of the
/// remaining generators times ambient monomials.
pub struct Presentation {
    ambient: Ambient,
    field: PrimeField,
    /// `x = N y`; a linear form with coefficient row `c` becomes `c N`.
    transform: Option<Vec<Vec<u64>>>,
    gens: Vec<AmbientForm>,
    guard: usize,
    pieces: Mutex<HashMap<usize, Arc<Echelon>>>,
}

impl Clone for Presentation {
    fn clone(&self) -> Self {
        Self {
            ambient: self.ambient.clone(),
            field: self.field,
            transform: self.transform.clone(),
            gens: self.gens.clone(),
            guard: self.guard,
            pieces: Mutex::new(self.pieces.lock().expect("piece cache poisoned").clone()),
        }
    }
}

impl Presentation {
    pub fn build(spec: &IdealSpec, trial: &mut Trial, reduction: Reduction) -> Result<Self> {
        let r = spec.num_vars();
        let field = trial.field;
        let concrete = concretize(spec, trial);

        let mut ambient = Ambient::full(r);
        let mut transform = None;
        if reduction != Reduction::FullRing {
            let mut caps: Vec<Option<usize>> = vec![None; r];
            for c in &concrete {
                if let Some((v, a)) = c.pure_power() {
                    caps[v] = Some(caps[v].map_or(a, |old| old.min(a)));
                }
            }
            if caps.iter().all(Option::is_some) {
                ambient = Ambient::truncated(caps.iter().map(|c| c.unwrap() as u32).collect());
            } else if reduction == Reduction::Auto
                && concrete.iter().all(|c| matches!(c, Concrete::Power { .. }))
            {
                let mut ech = Echelon::new(field, r);
                let mut chosen: Vec<(Vec<u64>, usize)> = Vec::new();
                for c in &concrete {
                    if let Concrete::Power { linear, exponent } = c {
                        if ech.insert(linear.clone()) {
                            chosen.push((linear.clone(), *exponent));
                        }
                    }
                }
                if chosen.len() == r {
                    let rows: Vec<Vec<u64>> = chosen.iter().map(|(l, _)| l.clone()).collect();
                    let inv = invert(&rows, field).expect("independent rows are invertible");
                    ambient = Ambient::truncated(chosen.iter().map(|(_, a)| *a as u32).collect());
                    transform = Some(inv);
                }
            }
        }

        let mut p = Self {
            ambient,
            field,
            transform,
            gens: Vec::new(),
            guard: spec.artinian_guard(),
            pieces: Mutex::new(HashMap::new()),
        };
        for c in concrete {
            let g = match c {
                Concrete::Power { linear, exponent } => p.power_of_linear(&linear, exponent),
                Concrete::Form { degree, terms } => {
                    debug_assert!(p.transform.is_none());
                    let terms: Vec<(Packed, u64)> =
                        terms.into_iter().filter(|&(m, _)| p.ambient.contains(m)).collect();
                    AmbientForm { degree, terms }
                }
            };
            if !g.is_zero() {
                p.gens.push(g);
            }
        }
        Ok(p)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.ambient.num_vars()
    }

    pub fn has_coordinate_change(&self) -> bool {
        self.transform.is_some()
    }

    /// Number of generators that survive in the ambient ring.
    pub fn num_ambient_generators(&self) -> usize {
        self.gens.len()
    }

    /// Linear form coefficients (mod p, in `x`) rewritten in ambient coordinates.
    pub(crate) fn to_ambient_linear(&self, coeffs: &[u64]) -> Vec<u64> {
        match &self.transform {
            None => coeffs.to_vec(),
            Some(n) => {
                let r = coeffs.len();
                (0..r)
                    .map(|k| {
                        (0..r).fold(0, |acc, j| self.field.mul_add(acc, coeffs[j], n[j][k]))
                    })
                    .collect()
            }
        }
    }

    pub(crate) fn power_of_linear(&self, coeffs: &[u64], exponent: usize) -> AmbientForm {
        let l = AmbientForm::linear(&self.to_ambient_linear(coeffs));
        l.pow(exponent, &self.ambient, self.field)
    }

    pub(crate) fn linear_form(&self, l: &LinearForm) -> Vec<u64> {
        l.coefficients().iter().map(|&c| self.field.from_i64(c)).collect()
    }

    /// The ideal plus one more generator (already in ambient coordinates).
    pub(crate) fn with_generator(&self, g: AmbientForm) -> Self {
        let mut gens = self.gens.clone();
        let guard = self.guard + g.degree;
        if !g.is_zero() {
            gens.push(g);
        }
        Self {
            ambient: self.ambient.clone(),
            field: self.field,
            transform: self.transform.clone(),
            gens,
            guard,
            pieces: Mutex::new(HashMap::new()),
        }
    }

    /// Echelon basis of the ideal's degree-`d` piece inside the ambient piece.
    pub fn piece(&self, d: usize) -> Arc<Echelon> {
        if let Some(e) = self.pieces.lock().expect("piece cache poisoned").get(&d) {
            return Arc::clone(e);
        }
        let target = self.ambient.piece(d);
        let mut ech = Echelon::new(self.field, target.len());
        let mut row = vec![0u64; target.len()];
        'gens: for g in self.gens.iter().filter(|g| g.degree <= d) {
            let multipliers = self.ambient.piece(d - g.degree);
            for &m in multipliers.packed() {
                if ech.is_full() {
                    break 'gens;
                }
                row.iter_mut().for_each(|x| *x = 0);
                g.accumulate_times_monomial(m, &target, self.field, &mut row);
                ech.insert(row.clone());
            }
        }
        let ech = Arc::new(ech);
        self.pieces
            .lock()
            .expect("piece cache poisoned")
            .entry(d)
            .or_insert(ech)
            .clone()
    }

    /// `dim_K [R/I]_d` for this trial's concrete ideal.
    pub fn dim(&self, d: usize) -> usize {
        self.ambient.piece(d).len() - self.piece(d).rank()
    }

    /// Hilbert function of this trial's concrete ideal.
    pub fn hilbert_function(&self) -> Result<HilbertFunction> {
        let mut values = Vec::new();
        for d in 0..self.guard {
            let h = self.dim(d);
            if h == 0 {
                return Ok(HilbertFunction::new(values));
            }
            values.push(h);
        }
        Err(Error::NotArtinian { guard: self.guard })
    }

    /// Rank of multiplication by `w` from `[R/I]_d` to `[R/I]_{d + deg w}`,
    /// computed on the induced matrix between standard-monomial bases.
    pub(crate) fn induced_rank(&self, w: &AmbientForm, d: usize) -> usize {
        let source = self.ambient.piece(d);
        let target = self.ambient.piece(d + w.degree);
        let src_ideal = self.piece(d);
        let dst_ideal = self.piece(d + w.degree);
        let mut image = Echelon::new(self.field, target.len());
        for col in src_ideal.free_columns() {
            let mut v = vec![0u64; target.len()];
            w.accumulate_times_monomial(source.packed()[col], &target, self.field, &mut v);
            dst_ideal.reduce(&mut v);
            image.insert(v);
        }
        image.rank()
    }
}

static HILBERT_CACHE: LazyLock<RwLock<HashMap<String, HilbertFunction>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn cache_key(ideal: &IdealSpec, cfg: &EngineConfig) -> String {
    serde_json::to_string(&(ideal, cfg)).expect("ideal specs serialize")
}

pub(crate) fn presentations(ideal: &IdealSpec, cfg: &EngineConfig) -> Result<Vec<Presentation>> {
    cfg.validate()?;
    (0..cfg.trials)
        .map(|t| {
            let mut trial = Trial::new(cfg, t)?;
            Presentation::build(ideal, &mut trial, cfg.reduction)
        })
        .collect()
}

/// Minimum over trials of `f(trial)`; stops early once some trial gives zero.
fn min_over<F>(pres: &[Presentation], f: F) -> usize
where
    F: Fn(&Presentation) -> usize + Sync,
{
    let first = f(&pres[0]);
    if first == 0 || pres.len() == 1 {
        return first;
    }
    first.min(pres[1..].par_iter().map(&f).min().expect("nonempty"))
}

/// `dim_K [R/I]_d`, minimized over the configured trials.
pub fn graded_piece_dim(ideal: &IdealSpec, d: usize, cfg: &EngineConfig) -> Result<usize> {
    let pres = presentations(ideal, cfg)?;
    Ok(min_over(&pres, |p| p.dim(d)))
}

/// Hilbert function of `R/I`, degree by degree until the first zero piece.
pub fn hilbert_function(ideal: &IdealSpec, cfg: &EngineConfig) -> Result<HilbertFunction> {
    let key = cache_key(ideal, cfg);
    if let Some(h) = HILBERT_CACHE.read().expect("cache poisoned").get(&key) {
        return Ok(h.clone());
    }
    let pres = presentations(ideal, cfg)?;
    let guard = ideal.artinian_guard();
    let mut values = Vec::new();
    for d in 0..guard {
        let h = min_over(&pres, |p| p.dim(d));
        if h == 0 {
            let hf = HilbertFunction::new(values);
            HILBERT_CACHE
                .write()
                .expect("cache poisoned")
                .insert(key, hf.clone());
            return Ok(hf);
        }
        values.push(h);
    }
    Err(Error::NotArtinian { guard })
}

/// Largest span matrix (entries) accepted by [`exact_graded_piece_dim`].
pub const EXACT_ENTRY_LIMIT: usize = 2_000_000;

/// `dim_K [R/I]_d` over the rationals by fraction-free elimination of the
/// span matrix. Only for ideals without general generators.
pub fn exact_graded_piece_dim(ideal: &IdealSpec, d: usize) -> Result<usize> {
    if ideal.has_general_generators() {
        return Err(Error::InvalidArgument(
            "exact dimensions need fixed generators".into(),
        ));
    }
    let r = ideal.num_vars();
    let rows = monomial_basis(r, d).len();
    let mut blocks = Vec::new();
    for g in ideal.generators().iter().filter(|g| g.degree() <= d) {
        let f = match g {
            Generator::PowerOfLinear {
                form: LinearFormSpec::Fixed(l),
                exponent,
            } => expand_power_of_linear_form(l, *exponent)?,
            Generator::Form(f) => f.clone(),
            _ => unreachable!("general generators rejected above"),
        };
        blocks.push(multiplication_matrix(&f, d - f.degree()));
    }
    let cols: usize = blocks.iter().map(ExactMatrix::cols).sum();
    if rows * cols > EXACT_ENTRY_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "span matrix {rows}x{cols} is too large for exact elimination"
        )));
    }
    let mut m = ExactMatrix::zeros(rows, cols);
    let mut offset = 0;
    for b in &blocks {
        for i in 0..rows {
            for j in 0..b.cols() {
                m.set(i, offset + j, b.get(i, j).clone());
            }
        }
        offset += b.cols();
    }
    Ok(rows - rank_exact(&m))
}

/// Largest `e` with `[R/I]_e != 0`.
pub fn socle_degree(ideal: &IdealSpec, cfg: &EngineConfig) -> Result<usize> {
    hilbert_function(ideal, cfg)?
        .socle_degree()
        .ok_or_else(|| Error::InvalidArgument("the ideal is the whole ring".into()))
}
