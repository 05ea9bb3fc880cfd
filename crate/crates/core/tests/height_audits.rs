//! Randomized audits of the height inequalities against directly computed Weil heights.

use dynaheight::algebra::parse::parse_mpoly;
use dynaheight::heights::{
    canonical_height, height_expansion_constant, hypersurface_lower_constant, hypersurface_upper_constant,
    weil_height, InequalityConstants,
};
use dynaheight::{AlgebraicNumber, P1Point, Poly, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let n = rng.gen_range(-bound..=bound);
    let d = rng.gen_range(1..=bound);
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn h(q: &Rational) -> f64 {
    // oracle: ln max(|p|, |q|) via f64 on small values or bit length on large ones
    let m = q.numer().magnitude().max(q.denom().magnitude()).clone();
    let bits = m.bits();
    if bits < 1000 {
        m.to_string().parse::<f64>().unwrap().ln()
    } else {
        let top: f64 = (&m >> (bits - 60) as usize).to_string().parse().unwrap();
        top.ln() + (bits - 60) as f64 * std::f64::consts::LN_2
    }
}

#[test]
fn expansion_constant_audit() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in ["x^2 + 1", "2*x^3 + x", "x^2/3 - 5/2*x + 7", "-4*x^4 + x^3/9 - 1", "x^2 - 2"] {
        let f: Poly = f.parse().unwrap();
        let cf = height_expansion_constant(&f).unwrap();
        let d = f.deg() as f64;
        for _ in 0..1000 {
            let a = random_rational(&mut rng, 1000);
            let gap = h(&f.eval(&a)) - d * h(&a);
            assert!(gap.abs() <= cf + 1e-9, "f={f} a={a} gap={gap} cf={cf}");
        }
    }
}

#[test]
fn hypersurface_constant_audits() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cases = [("x2 - x1 - 1", 2usize), ("x1*x2 - 1", 2), ("3*x1^2*x2^2 - x2 + x1/5", 2), ("x3 - x1 - x2", 3)];
    for (s, n) in cases {
        let big_f = parse_mpoly(s, n).unwrap();
        let c1 = hypersurface_upper_constant(&big_f);
        let pivot = n - 1;
        let c2 = hypersurface_lower_constant(&big_f, pivot).unwrap();
        let parts = big_f.coefficients_in(pivot);
        for _ in 0..500 {
            let a: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 200)).collect();
            let v = big_f.eval(&a);
            let hv = if v.is_zero() { 0.0 } else { h(&v) };
            let upper: f64 = (0..n).map(|i| big_f.degree_in(i) as f64 * h(&a[i])).sum::<f64>() + c1;
            assert!(hv <= upper + 1e-9, "{s} at {a:?}");
            let applies = parts.iter().skip(1).any(|fi| !fi.eval(&a).is_zero());
            if applies {
                let lower = h(&a[pivot])
                    - (0..pivot).map(|i| 2.0 * big_f.degree_in(i) as f64 * h(&a[i])).sum::<f64>()
                    - c2;
                assert!(lower <= hv + 1e-9, "{s} at {a:?}: {lower} > {hv}");
            }
        }
    }
}

#[test]
fn pivot_constant_audit_on_periodic_roots() {
    // F = x2 - x1 - 1, f = x^2 + 1; points (a, a + 1) with f^l(a) = a + 1
    let big_f = parse_mpoly("x2 - x1 - 1", 2).unwrap();
    let f: Poly = "x^2 + 1".parse().unwrap();
    let k = InequalityConstants::compute(&big_f, &f, 1).unwrap();
    for l in 1..=3u32 {
        let eq = &f.iterate(l, 4096).unwrap() - &"x + 1".parse::<Poly>().unwrap();
        for a in dynaheight::isolate_roots(&eq, 256).unwrap() {
            let b = a.add(&AlgebraicNumber::from_int(1)).unwrap();
            let ha = canonical_height(&f, &P1Point::Finite(a), 1e-9).unwrap();
            let hb = canonical_height(&f, &P1Point::Finite(b), 1e-9).unwrap();
            assert!(hb.lo() <= 2.0 * ha.hi() + k.c5, "l={l}: {hb} vs {ha}");
        }
    }
    assert!(weil_height(&P1Point::int(1)).unwrap().value == 0.0);
}
