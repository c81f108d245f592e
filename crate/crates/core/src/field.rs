//! Prime fields with word-sized moduli and seeded prime sampling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// The field with `modulus` elements. Elements are `u64` values in `[0, modulus)`.
///
/// Moduli below 2^32 use a Barrett reduction on 64-bit products, which is
/// the hot path for elimination. Larger moduli fall back to 128-bit remainders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    modulus: u64,
    #[serde(skip)]
    barrett: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::InvalidModulus(modulus));
        }
        let barrett = if modulus < (1 << 32) {
            ((1u128 << 64) / modulus as u128) as u64
        } else {
            0
        };
        Ok(Self { modulus, barrett })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    fn is_small(&self) -> bool {
        self.barrett != 0
    }

    /// Reduces any `u64`. Only valid as a full reduction for small moduli;
    /// large moduli use the 128-bit path.
    #[inline]
    fn reduce_u64(&self, x: u64) -> u64 {
        if self.is_small() {
            let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
            let r = x.wrapping_sub(q.wrapping_mul(self.modulus));
            if r >= self.modulus {
                r - self.modulus
            } else {
                r
            }
        } else {
            x % self.modulus
        }
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        let m = self.modulus as i128;
        (x as i128).rem_euclid(m) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        if let Some(small) = x.to_i64() {
            return self.from_i64(small);
        }
        let m = BigInt::from(self.modulus);
        let r = x.mod_floor(&m);
        debug_assert!(!r.is_negative());
        r.to_u64().expect("remainder fits in u64")
    }

    /// Symmetric lift to the integers, in `(-p/2, p/2]`.
    pub fn lift(&self, a: u64) -> i64 {
        if a > self.modulus / 2 {
            a as i64 - self.modulus as i64
        } else {
            a as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.is_small() {
            self.reduce_u64(a * b)
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        if self.is_small() {
            // a < 2^32 and b*c <= (2^32 - 1)^2, so the sum fits in 64 bits.
            self.reduce_u64(a + b * c)
        } else {
            ((a as u128 + b as u128 * c as u128) % self.modulus as u128) as u64
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.modulus), "inverse of zero");
        self.pow(a, self.modulus - 2)
    }

    /// `dst[j] += factor * src[j]` for every `j`.
    #[inline]
    pub fn axpy(&self, dst: &mut [u64], src: &[u64], factor: u64) {
        debug_assert_eq!(dst.len(), src.len());
        if factor == 0 {
            return;
        }
        if self.is_small() {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.reduce_u64(*d + factor * s);
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.mul_add(*d, factor, s);
            }
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Stream ids used to split one seed into independent random sequences.
pub(crate) mod stream {
    pub const PRIME: u64 = 1;
    pub const COEFFICIENTS: u64 = 2;

    pub fn id(kind: u64, index: u64) -> u64 {
        (kind << 48) | index
    }
}

pub(crate) fn seeded_rng(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

fn sample_prime(bits: u32, rng: &mut ChaCha8Rng) -> u64 {
    let lo = 1u64 << (bits - 1);
    let hi = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    loop {
        let candidate = rng.gen_range(lo..=hi) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

/// A prime with exactly `bits` bits, sampled uniformly among such primes.
pub fn random_prime(bits: u32, seed: u64) -> Result<u64> {
    nth_random_prime(bits, seed, 0)
}

/// The `index`-th prime of the seeded prime stream; `random_prime` is index 0.
pub fn nth_random_prime(bits: u32, seed: u64, index: u64) -> Result<u64> {
    if !(20..=62).contains(&bits) {
        return Err(Error::InvalidArgument(format!(
            "prime size must be between 20 and 62 bits, got {bits}"
        )));
    }
    let mut rng = seeded_rng(seed, stream::id(stream::PRIME, index));
    Ok(sample_prime(bits, &mut rng))
}
