//! Integer factorization for the prime sets that enter local height bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigInt::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s as usize;
    'outer: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    for c in 1u32.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

fn split(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    let q = &n / &d;
    split(d, out);
    split(q, out);
}

/// Distinct prime divisors of `|n|` in increasing order (empty for 0 and ±1).
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p < 1 << 16 {
        let bp = BigInt::from(p);
        if (&n % &bp).is_zero() {
            out.push(bp.clone());
            while (&n % &bp).is_zero() {
                n /= &bp;
            }
        }
        if n.to_u64().is_some_and(|v| v < p * p) {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let mut rest = Vec::new();
        split(n, &mut rest);
        out.extend(rest);
    }
    out.sort();
    out.dedup();
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> i64 {
    assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors() {
        let b = |v: i64| BigInt::from(v);
        assert_eq!(prime_divisors(&b(360)), vec![b(2), b(3), b(5)]);
        assert_eq!(prime_divisors(&b(-1)), Vec::<BigInt>::new());
        // product of two primes above the trial-division range
        let n = b(1_000_003) * b(998_244_353);
        assert_eq!(prime_divisors(&n), vec![b(1_000_003), b(998_244_353)]);
        assert_eq!(valuation(&b(48), &b(2)), 4);
    }
}
