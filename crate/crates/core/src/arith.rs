//! Modular and multiplicative primitives: sieving, Jacobi/Kronecker symbols,
//! modular square roots, quartic residue symbols, and the complete-splitting
//! test for the degree-16 field that governs the 16-rank.
//!
//! All functions are pure; [`PrimeList`] is immutable after construction and
//! safe to share across threads.

use crate::error::{Error, Result};

/// Hard cap on the sieve bound. Everything downstream assumes 128-bit
/// intermediates suffice, which this cap guarantees.
pub const MAX_SIEVE_BOUND: u64 = 100_000_000;

/// All primes up to a bound, ascending.
#[derive(Debug, Clone)]
pub struct PrimeList {
    pub bound: u64,
    pub primes: Vec<u64>,
}

impl PrimeList {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.primes.iter()
    }

    /// Number of primes `<= x` for `x <= bound`.
    pub fn count_upto(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }
}

/// Sieve of Eratosthenes over the odd integers.
///
/// Rejects bounds above [`MAX_SIEVE_BOUND`]; accepts `x >= 2`.
pub fn sieve_primes(x: u64) -> Result<PrimeList> {
    if x > MAX_SIEVE_BOUND {
        return Err(Error::Capacity {
            what: "sieve bound",
            requested: x as u128,
            limit: MAX_SIEVE_BOUND as u128,
        });
    }
    if x < 2 {
        return Err(Error::Domain("sieve bound must be at least 2"));
    }
    let mut primes = vec![2u64];
    if x >= 3 {
        // composite[i] marks the odd number 2i+3
        let n = ((x - 1) / 2) as usize; // count of odd numbers in [3, x]
        let mut composite = vec![false; n];
        let mut i = 0usize;
        while {
            let p = 2 * i as u64 + 3;
            p * p <= x
        } {
            if !composite[i] {
                let p = 2 * i as u64 + 3;
                let mut j = ((p * p) - 3) / 2;
                while (j as usize) < n {
                    composite[j as usize] = true;
                    j += p;
                }
            }
            i += 1;
        }
        for (i, &c) in composite.iter().enumerate() {
            if !c {
                primes.push(2 * i as u64 + 3);
            }
        }
    }
    Ok(PrimeList { bound: x, primes })
}

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular exponentiation by squaring.
pub fn modpow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, valid for all `n < 3.4 * 10^14` with the base
/// set {2, 3, 5, 7, 11, 13, 17}. Used as a backstop on every prime consumed
/// by downstream modules.
pub fn is_prime(n: u64) -> bool {
    debug_assert!(n < 340_000_000_000_000);
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = modpow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a/n)` for odd positive `n`. Negative `a` is reduced mod
/// `n` first.
pub fn jacobi(a: i64, n: i64) -> Result<i32> {
    if n <= 0 || n % 2 == 0 {
        return Err(Error::Domain("jacobi: modulus must be odd and positive"));
    }
    Ok(jacobi_reduced(a.rem_euclid(n) as u64, n as u64))
}

/// Core binary Jacobi ladder; requires `0 <= a`, `n` odd positive.
fn jacobi_reduced(mut a: u64, mut n: u64) -> i32 {
    if n == 1 {
        return 1;
    }
    a %= n;
    let mut t = 1i32;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2/n) = -1 iff n ≡ ±3 mod 8
        if tz & 1 == 1 {
            let r = n & 7;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        if a & 3 == 3 && n & 3 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)`, the full extension of Jacobi to all integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    match n {
        0 => {
            if a == 1 || a == -1 {
                1
            } else {
                0
            }
        }
        _ => {
            let mut t = 1i32;
            let mut n = n;
            if n < 0 {
                if a < 0 {
                    t = -t;
                }
                n = -n;
            }
            let tz = n.trailing_zeros();
            if tz > 0 {
                if a % 2 == 0 {
                    return 0;
                }
                // (a/2) = 1 for a ≡ ±1 mod 8, else -1
                if tz & 1 == 1 {
                    let r = a.rem_euclid(8);
                    if r == 3 || r == 5 {
                        t = -t;
                    }
                }
                n >>= tz;
            }
            t * jacobi_reduced(a.rem_euclid(n) as u64, n as u64)
        }
    }
}

/// Smaller square root of `a` modulo an odd prime `p`, in `[0, (p-1)/2]`.
///
/// Tonelli–Shanks with the smallest quadratic nonresidue as the auxiliary
/// element, so the output is reproducible. Errors unless `(a/p) = 1`.
pub fn sqrt_mod(a: i64, p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::Domain("sqrt_mod: modulus must be an odd prime"));
    }
    let a_red = a.rem_euclid(p as i64) as u64;
    if jacobi(a_red as i64, p as i64)? != 1 {
        return Err(Error::NoRoot { a, p });
    }
    let r = if p % 4 == 3 {
        modpow(a_red, (p + 1) / 4, p)
    } else {
        tonelli_shanks(a_red, p)
    };
    debug_assert_eq!(mulmod(r, r, p), a_red);
    Ok(r.min(p - r))
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    // smallest quadratic nonresidue
    let mut z = 2u64;
    while jacobi_reduced(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = modpow(z, q, p);
    let mut t = modpow(a, q, p);
    let mut r = modpow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = modpow(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    r
}

/// The quartic residue symbol `[n/p]_4 ∈ {±1}`, defined when `(n/p) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarticSymbol {
    pub value: i8,
}

/// `[n/p]_4` for `p ≡ 1 mod 4`: `+1` iff `n` is a fourth power mod `p`.
///
/// One modular exponentiation, never a factorization.
pub fn quartic_symbol(n: i64, p: u64) -> Result<QuarticSymbol> {
    if p % 4 != 1 || !is_prime(p) {
        return Err(Error::Domain("quartic_symbol: p must be a prime ≡ 1 mod 4"));
    }
    let n_red = n.rem_euclid(p as i64) as u64;
    if n_red == 0 || jacobi(n_red as i64, p as i64)? != 1 {
        return Err(Error::UndefinedSymbol { n, p });
    }
    let t = modpow(n_red, (p - 1) / 4, p);
    // (n/p) = 1 forces t² ≡ 1, so t ∈ {1, p-1}
    let value = if t == 1 {
        1
    } else if t == p - 1 {
        -1
    } else {
        return Err(Error::violation(
            p,
            "quartic_symbol",
            format!("n^((p-1)/4) = {t} is not ±1 despite (n/p) = 1"),
        ));
    };
    Ok(QuarticSymbol { value })
}

/// Complete splitting in the degree-16 field: `p ≡ 1 mod 16` and `2` a
/// fourth power mod `p`.
pub fn is_split_complete(p: u64) -> Result<bool> {
    if p == 2 {
        return Err(Error::Domain("is_split_complete: p must be odd"));
    }
    if !is_prime(p) {
        return Err(Error::Domain("is_split_complete: p must be prime"));
    }
    if p % 16 != 1 {
        return Ok(false);
    }
    Ok(modpow(2, (p - 1) / 4, p) == 1)
}
