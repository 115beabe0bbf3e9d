//! Characters of the positive rationals, stored as points of the polytorus:
//! a finite map prime -> angle, with the character value on an integer
//! n = prod p^a given by prod e^{i a theta_p}. Primes absent from the map
//! act as angle 0 (value 1).
//!
//! Angles rather than unit complex numbers are stored so that powers and
//! conjugates stay exactly unimodular.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor;
use crate::scalar::{cis, Real, C};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character<T: Real> {
    /// prime -> angle theta_p in radians; z_p = e^{i theta_p}.
    angles: BTreeMap<u64, T>,
}

impl<T: Real> Character<T> {
    /// The trivial character (chi(n) = 1 for all n).
    pub fn trivial() -> Self {
        Character {
            angles: BTreeMap::new(),
        }
    }

    /// Build from (prime, angle) pairs. Rejects non-prime keys.
    pub fn from_angles(pairs: impl IntoIterator<Item = (u64, T)>) -> Result<Self> {
        let mut angles = BTreeMap::new();
        for (p, theta) in pairs {
            if !factor::is_prime(p) {
                return Err(Error::InvalidParameter(format!(
                    "character key {p} is not prime"
                )));
            }
            angles.insert(p, theta);
        }
        Ok(Character { angles })
    }

    pub fn angle(&self, p: u64) -> T {
        self.angles.get(&p).copied().unwrap_or_else(T::zero)
    }

    /// Unit value z_p at a prime.
    pub fn value(&self, p: u64) -> C<T> {
        cis(self.angle(p))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.angles.keys().copied()
    }

    pub fn covers(&self, p: u64) -> bool {
        self.angles.contains_key(&p)
    }

    pub fn is_trivial(&self) -> bool {
        self.angles.values().all(|t| t.is_zero())
    }

    /// chi(n) via the prime factorization of n. Completely multiplicative:
    /// chi(1) = 1, chi(mn) = chi(m) chi(n).
    pub fn eval(&self, n: u64) -> C<T> {
        if n == 1 || self.angles.is_empty() {
            return C::new(T::one(), T::zero());
        }
        let mut total = T::zero();
        for (p, a) in factor::factorize(n) {
            if let Some(&theta) = self.angles.get(&p) {
                total = total + theta * T::from_u32(a).unwrap();
            }
        }
        cis(total)
    }

    /// chi^k (k = 0 gives the trivial character). Angles are reduced mod 2 pi.
    pub fn power(&self, k: u32) -> Self {
        if k == 0 {
            return Self::trivial();
        }
        let two_pi = T::PI() + T::PI();
        let kk = T::from_u32(k).unwrap();
        Character {
            angles: self
                .angles
                .iter()
                .map(|(&p, &theta)| {
                    let mut a = (theta * kk) % two_pi;
                    if a > T::PI() {
                        a = a - two_pi;
                    } else if a < -T::PI() {
                        a = a + two_pi;
                    }
                    (p, a)
                })
                .collect(),
        }
    }

    /// Complex conjugate character (all angles negated).
    pub fn conj(&self) -> Self {
        Character {
            angles: self.angles.iter().map(|(&p, &t)| (p, -t)).collect(),
        }
    }

    /// The vertical-translate character z_p = p^{-i tau}: twisting by it is
    /// the translation s -> s + i tau.
    pub fn vertical_translate(primes: &[u64], tau: T) -> Self {
        Character {
            angles: primes
                .iter()
                .map(|&p| (p, -tau * crate::scalar::ln_index::<T>(p)))
                .collect(),
        }
    }
}

/// Deterministic low-discrepancy sequence of characters on the given primes:
/// coordinate j uses the van der Corput sequence in the j-th prime base, so
/// prefixes are nested (the first 64 points are a subset of the first 128).
pub fn halton_characters<T: Real>(primes: &[u64], count: usize) -> Vec<Character<T>> {
    let bases = factor::primes(primes.len().max(1));
    let two_pi = T::PI() + T::PI();
    (0..count)
        .map(|i| Character {
            angles: primes
                .iter()
                .zip(bases.iter())
                .map(|(&p, &b)| (p, two_pi * van_der_corput::<T>(i as u64 + 1, b)))
                .collect(),
        })
        .collect()
}

fn van_der_corput<T: Real>(mut i: u64, base: u64) -> T {
    let b = crate::scalar::from_index::<T>(base);
    let mut x = T::zero();
    let mut scale = T::one() / b;
    while i > 0 {
        x = x + scale * crate::scalar::from_index::<T>(i % base);
        i /= base;
        scale = scale / b;
    }
    x
}

/// Rank-1 lattice points on [0,1)^d with an optional shift, used for
/// quasi-Monte-Carlo averages over the polytorus. The generating vector is
/// Korobov-style: (1, a, a^2, ...) mod n.
pub fn lattice_points<T: Real>(dim: usize, count: usize, shift: &[T]) -> Vec<Vec<T>> {
    assert!(shift.len() >= dim);
    let n = count.max(1) as u64;
    // near golden-section multiplier, forced odd so it is coprime with 2^k
    let mut a = ((n as f64) * 0.618_033_988_749_894_8).round() as u64;
    if a % 2 == 0 {
        a += 1;
    }
    let mut gen_vec = vec![1u64; dim];
    for j in 1..dim {
        gen_vec[j] = gen_vec[j - 1].wrapping_mul(a) % n;
    }
    (0..count)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let frac =
                        crate::scalar::from_index::<T>((i as u64 * gen_vec[j]) % n) / crate::scalar::from_index::<T>(n);
                    let x = frac + shift[j];
                    x - x.floor()
                })
                .collect()
        })
        .collect()
}
