//! Polynomials over a prime field, used to bound the factor degrees of integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

type P = Vec<u64>;

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn sub(a: &P, b: &P, p: u64) -> P {
    let n = a.len().max(b.len());
    let mut v = vec![0; n];
    for (i, x) in v.iter_mut().enumerate() {
        let x1 = a.get(i).copied().unwrap_or(0);
        let x2 = b.get(i).copied().unwrap_or(0);
        *x = (x1 + p - x2) % p;
    }
    trim(v)
}

fn mul(a: &P, b: &P, p: u64) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(v)
}

fn rem(a: &P, m: &P, p: u64) -> P {
    let mut r = a.clone();
    let dm = m.len() - 1;
    let li = inv(*m.last().unwrap(), p);
    while r.len() > dm {
        let c = mulmod(*r.last().unwrap(), li, p);
        let shift = r.len() - 1 - dm;
        for (j, &y) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mulmod(c, y, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn divq(a: &P, m: &P, p: u64) -> P {
    let mut r = a.clone();
    let dm = m.len() - 1;
    if r.len() <= dm {
        return Vec::new();
    }
    let mut q = vec![0u64; r.len() - dm];
    let li = inv(*m.last().unwrap(), p);
    while r.len() > dm {
        let c = mulmod(*r.last().unwrap(), li, p);
        let shift = r.len() - 1 - dm;
        q[shift] = c;
        for (j, &y) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - mulmod(c, y, p)) % p;
        }
        r = trim(r);
    }
    trim(q)
}

fn gcd(a: &P, b: &P, p: u64) -> P {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = inv(l, p);
        a.iter_mut().for_each(|x| *x = mulmod(*x, li, p));
    }
    a
}

fn powmod_poly(base: &P, mut e: u64, m: &P, p: u64) -> P {
    let mut r: P = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = rem(&mul(&r, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

fn derivative(a: &P, p: u64) -> P {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

/// Degrees of the irreducible factors of `f mod p`, or `None` if `p` divides the
/// leading coefficient or `f mod p` is not squarefree.
pub fn factor_degrees_mod_p(f: &[BigInt], p: u64) -> Option<Vec<usize>> {
    let bp = BigInt::from(p);
    let a: P = trim(
        f.iter()
            .map(|c| c.mod_floor(&bp).to_u64().unwrap())
            .collect(),
    );
    if a.len() != f.len() || a.len() < 2 {
        return None;
    }
    if gcd(&a, &derivative(&a, p), p).len() != 1 {
        return None;
    }
    let mut out = Vec::new();
    let mut g = a;
    let x: P = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1;
    while g.len() - 1 >= 2 * i {
        h = powmod_poly(&h, p, &g, p);
        let d = gcd(&g, &sub(&h, &x, p), p);
        let dd = d.len() - 1;
        if dd > 0 {
            for _ in 0..dd / i {
                out.push(i);
            }
            g = divq(&g, &d, p);
            h = rem(&h, &g, p);
        }
        i += 1;
    }
    if g.len() > 1 {
        out.push(g.len() - 1);
    }
    Some(out)
}

const PRIMES: [u64; 12] = [
    1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 1_000_099, 1_000_117, 1_000_121,
    1_000_133, 1_000_151, 1_000_159, 1_000_171,
];

/// Degrees `0 < k < deg f` that a factor of `f` over the integers could have, as the
/// intersection of subset sums of the modular factor-degree patterns. `f` must be squarefree.
pub fn possible_factor_degrees(f: &[BigInt]) -> Vec<usize> {
    let n = f.len().saturating_sub(1);
    let mut allowed = vec![true; n + 1];
    let mut used = 0;
    for &p in PRIMES.iter() {
        if used >= 6 {
            break;
        }
        let Some(pattern) = factor_degrees_mod_p(f, p) else {
            continue;
        };
        used += 1;
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in pattern {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for k in 0..=n {
            allowed[k] &= sums[k];
        }
        if (1..n).all(|k| !allowed[k]) {
            break;
        }
    }
    (1..n).filter(|&k| allowed[k]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn patterns() {
        // x^4 + 1 splits into quadratics or linears mod every prime
        let d = factor_degrees_mod_p(&b(&[1, 0, 0, 0, 1]), 1_000_003).unwrap();
        assert_eq!(d.iter().sum::<usize>(), 4);
        assert!(d.iter().all(|&k| k <= 2));
        // x^2 - 2 irreducible over the integers
        assert!(possible_factor_degrees(&b(&[-2, 0, 1])).is_empty());
        // (x^2+1)(x^3+x+1)
        let f = b(&[1, 1, 1, 2, 0, 1]);
        let pos = possible_factor_degrees(&f);
        assert!(pos.contains(&2) && pos.contains(&3));
    }
}
