//! Integer number theory helpers: deterministic primality, factorization,
//! prime-power decomposition, and integer roots.
//!
//! Everything here is exact `u64`/`u128` arithmetic; no probabilistic
//! answers. The Miller-Rabin witness set used is known to be deterministic
//! for all 64-bit inputs.

/// Computes `a * b mod m` without overflow.
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Computes `a^e mod m` by square-and-multiply.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test for `u64`.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} decides
/// primality correctly for every integer below 3.3 * 10^24, which covers
/// all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Returns the smallest prime strictly greater than or equal to `n`.
///
/// Panics if the search would leave the `u64` range (unreachable for any
/// realistic input: prime gaps below 2^64 are tiny).
pub fn next_prime_at_least(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n % 2 == 0 {
        n += 1;
    }
    while !is_prime(n) {
        n = n.checked_add(2).expect("prime search overflowed u64");
    }
    n
}

/// Factors `n` into `(prime, multiplicity)` pairs by trial division,
/// in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d as u128 * d as u128 <= n as u128 {
        if n % d == 0 {
            let mut m = 0u32;
            while n % d == 0 {
                n /= d;
                m += 1;
            }
            out.push((d, m));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns the integer `r` with `r^e <= n < (r+1)^e`.
pub fn kth_root(n: u64, e: u32) -> u64 {
    if e == 1 || n <= 1 {
        return if e == 0 { 1 } else { n };
    }
    let mut r = (n as f64).powf(1.0 / e as f64).round() as u64;
    // Float rounding can be off by one in either direction; fix up exactly.
    while r > 0 && checked_pow_u64(r, e).map_or(true, |p| p > n) {
        r -= 1;
    }
    while checked_pow_u64(r + 1, e).map_or(false, |p| p <= n) {
        r += 1;
    }
    r
}

/// `base^exp` as `u64`, or `None` on overflow.
pub fn checked_pow_u64(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Decomposes `n = p^k` with `p` prime, if such a decomposition exists.
pub fn prime_power_decompose(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    if is_prime(n) {
        return Some((n, 1));
    }
    // If n = p^k with k >= 2 then p <= n^(1/2), so try exponents downward
    // from the largest possible; the first exact root that is prime wins.
    for e in (2..=63u32).rev() {
        let r = kth_root(n, e);
        if r < 2 {
            continue;
        }
        if checked_pow_u64(r, e) == Some(n) && is_prime(r) {
            return Some((r, e));
        }
    }
    None
}

/// Whether `n` is a prime power p^k with k >= 1.
pub fn is_prime_power(n: u64) -> bool {
    prime_power_decompose(n).is_some()
}

/// The smallest prime power >= n (and >= 2).
pub fn next_prime_power_at_least(n: u64) -> u64 {
    let mut m = n.max(2);
    loop {
        if is_prime_power(m) {
            return m;
        }
        m += 1;
    }
}

/// One step of the splitmix64 generator: advances `state` and returns the
/// next output. Used for seeded, reproducible sampling.
pub fn splitmix64_next(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
