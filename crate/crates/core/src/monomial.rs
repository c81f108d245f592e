//! Monomials, graded monomial bases and truncated ambient rings.
//!
//! Within each degree monomials are listed in graded reverse-lexicographic
//! order, largest first, so `x_1^d` always has index 0. Every matrix built by
//! this crate uses that layout.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};


/// Most variables a packed monomial key can hold.
pub const MAX_VARS: usize = 16;

/// Monomials packed one byte per exponent, so that multiplying monomials is
/// integer addition. Exponents are bounded by 255.
pub(crate) type Packed = u128;

pub(crate) fn pack(exponents: &[u32]) -> Packed {
    debug_assert!(exponents.len() <= MAX_VARS);
    exponents.iter().enumerate().fold(0, |acc, (i, &e)| {
        assert!(e < 256, "exponent {e} too large for packed monomial");
        acc | ((e as u128) << (8 * i))
    })
}

#[inline]
pub(crate) fn packed_exponent(m: Packed, var: usize) -> u32 {
    ((m >> (8 * var)) & 0xff) as u32
}

#[inline]
pub(crate) fn unit(var: usize) -> Packed {
    1u128 << (8 * var)
}

/// `x_1^{a_1} ... x_r^{a_r}` as the tuple `(a_1, ..., a_r)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "a monomial needs at least one variable");
        Self(exponents)
    }

    pub fn one(r: usize) -> Self {
        Self::new(vec![0; r])
    }

    pub fn variable(r: usize, var: usize) -> Self {
        let mut e = vec![0; r];
        e[var] = 1;
        Self::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars(), other.num_vars());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.num_vars(), other.num_vars());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub(crate) fn packed(&self) -> Packed {
        pack(&self.0)
    }

    #[cfg(test)]
    pub(crate) fn from_packed(m: Packed, r: usize) -> Self {
        Self((0..r).map(|i| packed_exponent(m, i)).collect())
    }

    /// Graded reverse-lexicographic comparison (total degree first).
    pub fn grevlex_cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    // A smaller exponent on the last differing variable wins.
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// The monomials of one degree, in the fixed order, with a reverse index.
#[derive(Debug)]
pub struct MonomialBasis {
    num_vars: usize,
    degree: usize,
    monomials: Vec<ExponentVector>,
    packed: Vec<Packed>,
    index: HashMap<Packed, usize>,
}

impl MonomialBasis {
    fn from_monomials(num_vars: usize, degree: usize, mut monomials: Vec<ExponentVector>) -> Self {
        monomials.sort_by(|a, b| b.grevlex_cmp(a));
        let packed: Vec<Packed> = monomials.iter().map(ExponentVector::packed).collect();
        let index = packed.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Self {
            num_vars,
            degree,
            monomials,
            packed,
            index,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[ExponentVector] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &ExponentVector {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &ExponentVector) -> Option<usize> {
        self.index.get(&m.packed()).copied()
    }

    pub(crate) fn packed(&self) -> &[Packed] {
        &self.packed
    }

    pub(crate) fn index_of_packed(&self, m: Packed) -> Option<usize> {
        self.index.get(&m).copied()
    }
}

fn enumerate(caps: &[u32], degree: usize) -> Vec<ExponentVector> {
    fn go(caps: &[u32], var: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if var + 1 == caps.len() {
            if (left as u64) < caps[var] as u64 {
                cur.push(left as u32);
                out.push(ExponentVector::new(cur.clone()));
                cur.pop();
            }
            return;
        }
        let top = left.min(caps[var].saturating_sub(1) as usize);
        for e in (0..=top).rev() {
            cur.push(e as u32);
            go(caps, var + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(caps, 0, degree, &mut Vec::with_capacity(caps.len()), &mut out);
    out
}

type BasisKey = (Vec<u32>, usize);

static BASES: LazyLock<RwLock<HashMap<BasisKey, Arc<MonomialBasis>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn cached_basis(caps: &[u32], degree: usize) -> Arc<MonomialBasis> {
    let key = (caps.to_vec(), degree);
    if let Some(b) = BASES.read().expect("basis cache poisoned").get(&key) {
        return Arc::clone(b);
    }
    let basis = Arc::new(MonomialBasis::from_monomials(
        caps.len(),
        degree,
        enumerate(caps, degree),
    ));
    BASES
        .write()
        .expect("basis cache poisoned")
        .entry(key)
        .or_insert(basis)
        .clone()
}

/// All monomials of degree `d` in `r` variables. Size `C(r-1+d, d)`.
pub fn monomial_basis(r: usize, d: usize) -> Arc<MonomialBasis> {
    assert!((1..=MAX_VARS).contains(&r), "between 1 and {MAX_VARS} variables supported");
    cached_basis(&vec![u32::MAX; r], d)
}

/// `K[y_1..y_r]` modulo the monomial complete intersection `(y_i^{cap_i})`,
/// or the polynomial ring itself when every cap is unbounded.
///
/// Graded pieces are spanned by the monomials with `exponent_i < cap_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    caps: Vec<u32>,
}

impl Ambient {
    pub fn full(r: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&r));
        Self {
            caps: vec![u32::MAX; r],
        }
    }

    pub fn truncated(caps: Vec<u32>) -> Self {
        assert!((1..=MAX_VARS).contains(&caps.len()));
        assert!(caps.iter().all(|&c| c >= 1));
        Self { caps }
    }

    /// `K[x_1..x_r] / (x_1^2, ..., x_r^2)`.
    pub fn squarefree(r: usize) -> Self {
        Self::truncated(vec![2; r])
    }

    pub fn num_vars(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn is_full(&self) -> bool {
        self.caps.iter().all(|&c| c == u32::MAX)
    }

    pub fn piece(&self, d: usize) -> Arc<MonomialBasis> {
        cached_basis(&self.caps, d)
    }

    /// Top degree with a nonzero piece, or `None` for the polynomial ring.
    pub fn socle_degree(&self) -> Option<usize> {
        if self.caps.contains(&u32::MAX) {
            None
        } else {
            Some(self.caps.iter().map(|&c| (c - 1) as usize).sum())
        }
    }

    #[inline]
    pub(crate) fn contains(&self, m: Packed) -> bool {
        self.caps
            .iter()
            .enumerate()
            .all(|(i, &c)| c == u32::MAX || packed_exponent(m, i) < c)
    }
}

/// `C(n, k)` as a machine integer; zero outside `0 <= k <= n`.
pub fn binomial_u64(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}
