//! Smallest-prime-factor sieve and integer factorization for series indices.
//!
//! Divisor enumeration in the series arithmetic is bound by factorization
//! cost, so factorizations of small indices come from a sieve built once and
//! shared read-only across threads. Indices above the sieve limit (operator
//! columns can push cutoff indices far beyond it) are finished by trial
//! division over sieve primes, which is exact for n < SIEVE_LIMIT^2.

use std::sync::OnceLock;

/// Sieve covers [0, SIEVE_LIMIT); exact factorization up to SIEVE_LIMIT^2 - 1.
const SIEVE_LIMIT: usize = 1 << 20;

struct Sieve {
    smallest_factor: Vec<u32>,
    primes: Vec<u64>,
}

fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE_LIMIT];
        let mut primes = Vec::new();
        for i in 2..SIEVE_LIMIT {
            if spf[i] == 0 {
                primes.push(i as u64);
                let mut j = i;
                while j < SIEVE_LIMIT {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve {
            smallest_factor: spf,
            primes,
        }
    })
}

/// Prime factorization as (prime, exponent) pairs in ascending prime order.
///
/// Panics if a composite cofactor above SIEVE_LIMIT^2 survives trial
/// division; indices that large do not arise from valid inputs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "indices are positive");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let s = sieve();
    while n > 1 && (n as usize) < SIEVE_LIMIT {
        let p = s.smallest_factor[n as usize] as u64;
        let mut e = 0u32;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
    if n > 1 {
        for &p in &s.primes {
            if p * p > n {
                break;
            }
            if n % p == 0 {
                let mut e = 0u32;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((p, e));
            }
        }
        if n > 1 {
            let limit = (SIEVE_LIMIT as u64) * (SIEVE_LIMIT as u64);
            assert!(
                n < limit,
                "cofactor {n} exceeds exact factorization range"
            );
            out.push((n, 1));
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    out
}

/// Distinct primes dividing n.
pub fn prime_support(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if (n as usize) < SIEVE_LIMIT {
        return sieve().smallest_factor[n as usize] as u64 == n;
    }
    factorize(n) == vec![(n, 1)]
}

/// First `count` primes.
pub fn primes(count: usize) -> Vec<u64> {
    sieve().primes[..count].to_vec()
}
