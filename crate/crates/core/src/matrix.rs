//! Dense matrices over the integers and over prime fields, with rank
//! computation by modular elimination and by fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{nth_random_prime, PrimeField};

/// Bit size of the primes drawn by [`certified_rank`].
pub const DEFAULT_PRIME_BITS: u32 = 31;

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows of machine integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn to_mod(&self, field: PrimeField) -> ModMatrix {
        ModMatrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data: self.entries.iter().map(|x| field.from_bigint(x)).collect(),
        }
    }
}

/// Row-major matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, field: PrimeField) -> Self {
        Self {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u64) {
        self.data[row * self.cols + col] = value % self.field.modulus();
    }

    pub fn row(&self, row: usize) -> &[u64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Rank by elimination along whichever side is shorter.
    pub fn rank(&self) -> usize {
        if self.cols <= self.rows {
            let mut ech = Echelon::new(self.field, self.cols);
            for i in 0..self.rows {
                ech.insert(self.row(i).to_vec());
                if ech.is_full() {
                    break;
                }
            }
            ech.rank()
        } else {
            self.transpose().rank()
        }
    }
}

/// A subspace of `F_p^width` held in semi-echelon form.
///
/// Every stored row is normalized so that its leading (first nonzero) entry
/// is 1, and each row vanishes at the pivots of the rows inserted before it.
/// Reducing a vector against the rows in insertion order therefore clears
/// every pivot column, giving a canonical representative of its class in the
/// quotient by the subspace.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    is_pivot: Vec<bool>,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Self {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            is_pivot: vec![false; width],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    /// Clears every pivot column of `v`.
    pub fn reduce(&self, v: &mut [u64]) {
        debug_assert_eq!(v.len(), self.width);
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let f = self.field.neg(c);
                self.field.axpy(&mut v[pc..], &row[pc..], f);
            }
        }
    }

    /// Reduces `v` and keeps it if it is independent. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[lead]);
        for x in &mut v[lead..] {
            *x = self.field.mul(*x, inv);
        }
        self.pivots.push(lead);
        self.is_pivot[lead] = true;
        self.rows.push(v);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Columns that carry no pivot; they index a basis of the quotient space.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.width).filter(|&c| !self.is_pivot[c]).collect()
    }
}

/// Null space of the linear map sending the `i`-th unit vector to `images[i]`.
///
/// Returns a basis of `{c : sum_i c_i images[i] = 0}` as vectors of length
/// `images.len()`.
pub fn kernel_of_images(field: PrimeField, images: &[Vec<u64>], image_width: usize) -> Vec<Vec<u64>> {
    let n = images.len();
    let mut pivot_rows: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, image) in images.iter().enumerate() {
        debug_assert_eq!(image.len(), image_width);
        let mut v = image.clone();
        let mut tag = vec![0u64; n];
        tag[i] = 1;
        for (pc, row, row_tag) in &pivot_rows {
            let c = v[*pc];
            if c != 0 {
                let f = field.neg(c);
                field.axpy(&mut v, row, f);
                field.axpy(&mut tag, row_tag, f);
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => kernel.push(tag),
            Some(lead) => {
                let inv = field.inv(v[lead]);
                for x in v.iter_mut() {
                    *x = field.mul(*x, inv);
                }
                for x in tag.iter_mut() {
                    *x = field.mul(*x, inv);
                }
                pivot_rows.push((lead, v, tag));
            }
        }
    }
    kernel
}

/// Rank of `m` over the field with `p` elements.
pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> Result<usize> {
    let field = PrimeField::new(p)?;
    Ok(m.to_mod(field).rank())
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank_exact(m: &ExactMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..cols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Basis of the rational null space `{v : m v = 0}`, scaled to primitive
/// integer vectors. One vector per non-pivot column of the reduced row
/// echelon form, in increasing column order.
pub fn kernel_exact(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| m.row(i).iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let mut pivots = Vec::new();
    for col in 0..cols {
        let rank = pivots.len();
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][col].recip();
        for x in a[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
    }
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[k][free].clone();
            }
            let denom = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * &denom).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            ints.into_iter().map(|x| if g.is_one() { x } else { x / &g }).collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    ModularTrials,
    FractionFreeExact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub method: RankMethod,
    pub trials: usize,
    pub primes_used: Vec<u64>,
    pub oracle_bound: Option<usize>,
    pub certified: bool,
}

/// Maximum of the modular ranks over `trials` seeded random 31-bit primes.
///
/// Each modular rank is a lower bound on the rational rank, so the result is
/// certified exactly when it meets the supplied upper bound.
pub fn certified_rank(
    m: &ExactMatrix,
    oracle_bound: Option<usize>,
    trials: usize,
    seed: u64,
) -> Result<RankCertificate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let mut rank = 0;
    let mut primes_used = Vec::with_capacity(trials);
    for t in 0..trials {
        let p = nth_random_prime(DEFAULT_PRIME_BITS, seed, t as u64)?;
        primes_used.push(p);
        rank = rank.max(rank_mod_p(m, p)?);
    }
    if let Some(bound) = oracle_bound {
        if rank > bound {
            return Err(Error::Inconsistent {
                observed: rank,
                bound,
            });
        }
    }
    Ok(RankCertificate {
        rank,
        method: RankMethod::ModularTrials,
        trials,
        primes_used,
        oracle_bound,
        certified: oracle_bound == Some(rank),
    })
}

/// Exact certificate via [`rank_exact`]; always certified.
pub fn exact_certificate(m: &ExactMatrix, oracle_bound: Option<usize>) -> Result<RankCertificate> {
    let rank = rank_exact(m);
    if let Some(bound) = oracle_bound {
        if rank > bound {
            return Err(Error::Inconsistent {
                observed: rank,
                bound,
            });
        }
    }
    Ok(RankCertificate {
        rank,
        method: RankMethod::FractionFreeExact,
        trials: 0,
        primes_used: Vec::new(),
        oracle_bound,
        certified: true,
    })
}

#[cfg(test)]
mod tests {
    #[test]
    fn exact_kernel_is_annihilated() {
        let m = ExactMatrix::from_rows(&[[1, 2, 3, 4], [2, 4, 7, 9], [0, 0, 2, 2]]);
        let k = kernel_exact(&m);
        assert_eq!(k.len(), 4 - rank_exact(&m));
        for v in &k {
            for i in 0..m.rows() {
                let dot: BigInt = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
        assert_eq!(k[0], vec![BigInt::from(-2), BigInt::one(), BigInt::zero(), BigInt::zero()]);
        assert_eq!(kernel_exact(&ExactMatrix::zeros(0, 2)).len(), 2);
    }

    use super::*;
    use crate::field::seeded_rng;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn modular_rank_small_cases() {
        assert_eq!(rank_mod_p(&ExactMatrix::identity(2), 101).unwrap(), 2);
        assert_eq!(rank_mod_p(&ExactMatrix::zeros(2, 2), 101).unwrap(), 0);
        let m = ExactMatrix::from_rows(&[[1, 2], [2, 4]]);
        assert_eq!(rank_mod_p(&m, 101).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 100), Err(Error::InvalidModulus(100)));
    }

    #[test]
    fn modular_rank_drops_at_a_dividing_prime() {
        let m = ExactMatrix::from_rows(&[[1, 0], [0, 7]]);
        assert_eq!(rank_mod_p(&m, 7).unwrap(), 1);
        assert_eq!(rank_exact(&m), 2);
    }

    #[test]
    fn exact_rank_small_cases() {
        assert_eq!(rank_exact(&ExactMatrix::from_rows(&[[2, 0], [0, 3]])), 2);
        assert_eq!(rank_exact(&ExactMatrix::from_rows(&[[1, 1], [1, 1]])), 1);
        assert_eq!(rank_exact(&ExactMatrix::zeros(3, 0)), 0);
        assert_eq!(rank_exact(&ExactMatrix::zeros(0, 4)), 0);
        // Skipped pivot columns keep the divisions exact.
        let m = ExactMatrix::from_rows(&[[0, 2, 4, 1], [0, 1, 2, 3], [0, 3, 6, 4]]);
        assert_eq!(rank_exact(&m), 2);
    }

    #[test]
    fn certificate_edge_cases() {
        let c = certified_rank(&ExactMatrix::identity(4), Some(4), 1, 0).unwrap();
        assert_eq!(c.rank, 4);
        assert!(c.certified);
        assert_eq!(c.method, RankMethod::ModularTrials);

        let z = certified_rank(&ExactMatrix::zeros(3, 3), Some(0), 3, 0).unwrap();
        assert_eq!(z.rank, 0);
        assert!(z.certified);

        let unbounded = certified_rank(&ExactMatrix::identity(3), None, 2, 9).unwrap();
        assert!(!unbounded.certified);
        assert_eq!(unbounded.primes_used.len(), 2);

        assert_eq!(
            certified_rank(&ExactMatrix::identity(3), Some(2), 1, 0),
            Err(Error::Inconsistent {
                observed: 3,
                bound: 2
            })
        );
        assert!(certified_rank(&ExactMatrix::identity(3), None, 0, 0).is_err());
        assert!(exact_certificate(&ExactMatrix::identity(3), Some(3)).unwrap().certified);
    }

    #[test]
    fn certificate_is_a_pure_function_of_its_inputs() {
        let m = ExactMatrix::from_rows(&[[3, 1, 4], [1, 5, 9], [2, 6, 5]]);
        let a = certified_rank(&m, Some(3), 3, 42).unwrap();
        let b = certified_rank(&m, Some(3), 3, 42).unwrap();
        assert_eq!(a, b);
    }

    /// Unimodular matrix built from the identity by integer row operations.
    fn unimodular(n: usize, seed: u64) -> ExactMatrix {
        let mut rng = seeded_rng(seed, 0);
        let mut rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        for _ in 0..4 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let k = rng.gen_range(-3..=3);
            let src = rows[j].clone();
            for (dst, s) in rows[i].iter_mut().zip(src) {
                *dst += k * s;
            }
        }
        ExactMatrix::from_rows(&rows)
    }

    #[test]
    fn unimodular_matrix_has_full_rank_for_every_trial() {
        let m = unimodular(10, 5);
        assert_eq!(rank_exact(&m), 10);
        for t in 0..5 {
            let p = nth_random_prime(31, 11, t).unwrap();
            assert_eq!(rank_mod_p(&m, p).unwrap(), 10);
        }
        let c = certified_rank(&m, Some(10), 3, 1).unwrap();
        assert!(c.certified);
    }

    #[test]
    fn random_primes_agree_with_exact_rank() {
        // Entries bounded by 10^6; a disagreement needs p to divide a nonzero
        // minor, which has at most a handful of 31-bit prime factors.
        let mut rng = seeded_rng(2024, 0);
        let mut mats = Vec::new();
        for shape in [(6, 6), (5, 8), (7, 4)] {
            let (r, c) = shape;
            let mut rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect())
                .collect();
            // Make one row dependent so the rank is not simply min(r, c).
            let (a, b) = (rows[0].clone(), rows[1].clone());
            rows[r - 1] = a.iter().zip(&b).map(|(x, y)| 2 * x - 3 * y).collect();
            mats.push(ExactMatrix::from_rows(&rows));
        }
        let exact: Vec<usize> = mats.iter().map(rank_exact).collect();
        let mut agree = 0usize;
        let samples = 1000u64;
        for t in 0..samples {
            let p = nth_random_prime(31, 77, t).unwrap();
            if mats
                .iter()
                .zip(&exact)
                .all(|(m, &e)| rank_mod_p(m, p).unwrap() == e)
            {
                agree += 1;
            }
        }
        let freq = agree as f64 / samples as f64;
        assert!(freq >= 1.0 - 1e-6, "agreement frequency {freq}");
    }

    #[test]
    fn kernel_of_images_finds_dependencies() {
        let f = PrimeField::new(101).unwrap();
        let images = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let k = kernel_of_images(f, &images, 2);
        assert_eq!(k, vec![vec![100, 100, 1]]);
    }

    #[test]
    fn echelon_normal_form_is_canonical() {
        let f = PrimeField::new(101).unwrap();
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(!e.insert(vec![2, 4, 6]));
        assert!(e.insert(vec![0, 1, 1]));
        assert_eq!(e.free_columns(), vec![2]);
        let mut a = vec![5, 7, 9];
        let mut b = vec![5 + 1, 7 + 2 + 1, 9 + 3 + 1];
        e.reduce(&mut a);
        e.reduce(&mut b);
        assert_eq!(a, b);
        assert!(e.contains(&[1, 3, 4]));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-20i64..20, c), r)
        })
    }

    proptest! {
        #[test]
        fn modular_rank_never_exceeds_exact_rank(rows in small_matrix(), p in prop::sample::select(vec![2u64, 3, 5, 7, 101, 2_147_483_647])) {
            let m = ExactMatrix::from_rows(&rows);
            prop_assert!(rank_mod_p(&m, p).unwrap() <= rank_exact(&m));
        }

        #[test]
        fn rank_is_transpose_invariant(rows in small_matrix()) {
            let m = ExactMatrix::from_rows(&rows);
            prop_assert_eq!(rank_exact(&m), rank_exact(&m.transpose()));
            prop_assert_eq!(rank_mod_p(&m, 101).unwrap(), rank_mod_p(&m.transpose(), 101).unwrap());
        }
    }
}
