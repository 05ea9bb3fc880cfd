//! Univariate resultants and resultants with a polynomial parameter by evaluation and interpolation.

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::poly::Poly;
use super::{rat, Rational};

/// Resultant of two univariate polynomials over the rationals (Euclidean remainder sequence).
pub fn resultant(a: &Poly, b: &Poly) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = Rational::one();
    loop {
        let m = a.deg();
        let n = b.deg();
        if n == 0 {
            return acc * num_traits::pow(b.lc(), m);
        }
        if m == 0 {
            return acc * num_traits::pow(a.lc(), n);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Rational::zero();
        }
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.lc(), m - r.deg());
        a = b;
        b = r;
    }
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = Poly::zero();
    for i in (0..n).rev() {
        acc = &(&acc * &Poly::linear_root(&xs[i])) + &Poly::constant(dd[i].clone());
    }
    acc
}

/// `Res_y(A(y), B_t(y))` as a polynomial in `t`, where `pair(t)` returns `(A, B_t)`.
/// The caller guarantees that the result has degree at most `degree_bound` in `t` and
/// that the degrees in `y` do not drop at the sample points.
pub fn parametric_resultant<F>(pair: F, degree_bound: usize) -> Poly
where
    F: Fn(&Rational) -> (Poly, Poly) + Sync,
{
    let xs: Vec<Rational> = (0..=degree_bound as i64).map(|k| rat(k, 1)).collect();
    let ys: Vec<Rational> = if degree_bound >= 12 {
        xs.par_iter()
            .map(|t| {
                let (a, b) = pair(t);
                resultant(&a, &b)
            })
            .collect()
    } else {
        xs.iter()
            .map(|t| {
                let (a, b) = pair(t);
                resultant(&a, &b)
            })
            .collect()
    };
    interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MPoly;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn known_resultants() {
        assert_eq!(resultant(&p("x - 1"), &p("x^2 + 1")), rat(2, 1));
        assert_eq!(resultant(&p("x^2 - 2"), &p("x^2 - 3")), rat(1, 1));
        assert_eq!(resultant(&p("x^2 - 1"), &p("x - 1")), rat(0, 1));
        // odd degree product flips the sign under swapping
        let a = p("2*x^3 + x + 5");
        let b = p("x^3 - 7*x + 1");
        assert_eq!(resultant(&a, &b), -resultant(&b, &a));
        // against the Sylvester determinant
        let sa = MPoly::from_univariate(&a, 0, 1);
        let sb = MPoly::from_univariate(&b, 0, 1);
        assert_eq!(Some(resultant(&a, &b)), sa.resultant(&sb, 0).as_constant());
    }

    #[test]
    fn interpolation_recovers() {
        let f = p("3*x^4 - x + 1/2");
        let xs: Vec<Rational> = (0..5).map(|k| rat(k, 1)).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }

    #[test]
    fn sqrt2_plus_sqrt3() {
        // minimal polynomial of sqrt2 + sqrt3 is x^4 - 10x^2 + 1
        let ma = p("x^2 - 2");
        let mb = p("x^2 - 3");
        let r = parametric_resultant(
            |t| {
                let shifted = mb.compose(&Poly::from_coeffs(vec![t.clone(), rat(-1, 1)]));
                (ma.clone(), shifted)
            },
            4,
        );
        assert_eq!(r.monic(), p("x^4 - 10*x^2 + 1"));
    }
}
