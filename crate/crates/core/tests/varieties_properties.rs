use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dynaheight::algebra::parse::parse_mpoly;
use dynaheight::varieties::{
    embed_in_hypersurface, projection_hypersurface, AmbientVariety, HypersurfaceEq,
};
use dynaheight::{MPoly, P1Point, Poly, Rational};

fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=9)))
}

fn rationals(pt: &[P1Point]) -> Vec<Rational> {
    pt.iter().map(|p| p.finite().unwrap().as_rational().unwrap()).collect()
}

#[test]
fn embedding_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g: Poly = "x^2 + 1".parse().unwrap();
    let big_f = parse_mpoly("x1*x3 - x2^2 + x4 - 5", 4).unwrap();
    for (i, j) in [(1, 2), (2, 4), (4, 1), (3, 2)] {
        let e = embed_in_hypersurface(4, HypersurfaceEq::Graph { i, j, g: g.clone() }).unwrap();
        let pulled = e.pull_back(&big_f).unwrap();
        assert_eq!(pulled.nvars(), 3);
        for _ in 0..50 {
            let a: Vec<Rational> = (0..3).map(|_| rand_q(&mut rng)).collect();
            let pts: Vec<P1Point> = a.iter().cloned().map(P1Point::rational).collect();
            let full = rationals(&e.apply(&pts).unwrap());
            // lands on x_i = g(x_j), and dropping x_i gives the point back
            assert_eq!(full[i - 1], g.eval(&full[j - 1]));
            let mut back = full.clone();
            back.remove(i - 1);
            assert_eq!(back, a);
            assert_eq!(pulled.eval(&a), big_f.eval(&full));
        }
    }
    let zeta = P1Point::rational(Rational::new(BigInt::from(-3), BigInt::from(2)));
    let e = embed_in_hypersurface(4, HypersurfaceEq::Constant { i: 3, zeta: zeta.clone() }).unwrap();
    let pulled = e.pull_back(&big_f).unwrap();
    for _ in 0..50 {
        let a: Vec<Rational> = (0..3).map(|_| rand_q(&mut rng)).collect();
        let pts: Vec<P1Point> = a.iter().cloned().map(P1Point::rational).collect();
        let out = e.apply(&pts).unwrap();
        assert_eq!(out[2], zeta);
        assert_eq!(pulled.eval(&a), big_f.eval(&rationals(&out)));
    }
}

/// Points of a graph-type variety: free coordinates drawn at random, the others from `deps`.
fn sample(
    rng: &mut ChaCha8Rng,
    n: usize,
    free: &[usize],
    deps: &[(usize, MPoly)],
) -> Vec<Rational> {
    let mut pt = vec![Rational::from_integer(BigInt::from(0)); n];
    for &i in free {
        pt[i - 1] = rand_q(rng);
    }
    for (i, p) in deps {
        pt[i - 1] = p.eval(&pt);
    }
    pt
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (1..=n).filter(|i| m >> (i - 1) & 1 == 1).collect())
        .collect()
}

#[test]
fn projections_vanish_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cases: [(&str, usize, usize, Vec<usize>, Vec<(usize, &str)>); 3] = [
        (
            "x2 = x1^2 + 3\nx3 = x1*x2 - 1",
            3,
            1,
            vec![1],
            vec![(2, "x1^2 + 3"), (3, "x1*x2 - 1")],
        ),
        ("x3 = x1 + x2^2\nx4 = x1*x2", 4, 2, vec![1, 2], vec![(3, "x1 + x2^2"), (4, "x1*x2")]),
        ("x2 = x1 + 1\nx3 = 2*x1 - x2", 3, 1, vec![1], vec![(2, "x1 + 1"), (3, "2*x1 - x2")]),
    ];
    for (text, n, dim, free, deps) in cases {
        let x = AmbientVariety::parse(text, n, dim).unwrap();
        let deps: Vec<(usize, MPoly)> = deps.iter().map(|(i, s)| (*i, parse_mpoly(s, n).unwrap())).collect();
        let pts: Vec<Vec<Rational>> = (0..50).map(|_| sample(&mut rng, n, &free, &deps)).collect();
        for pt in &pts {
            for eq in &x.equations {
                assert!(eq.eval(pt).numer() == &BigInt::from(0));
            }
        }
        for j in subsets(n, dim + 1) {
            let big_f = projection_hypersurface(&x, &j).unwrap();
            assert!(!big_f.is_zero(), "{text}: zero projection to {j:?}");
            for v in 0..n {
                if !j.contains(&(v + 1)) {
                    assert!(!big_f.uses_var(v), "{text}: F^{j:?} uses x{}", v + 1);
                }
            }
            for pt in &pts {
                assert!(big_f.eval(pt).numer() == &BigInt::from(0), "{text}: F^{j:?} = {big_f:?} at {pt:?}");
            }
        }
    }
}
