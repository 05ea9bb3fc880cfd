//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::CBall;
use super::{rat, Rational};
use crate::error::{Error, Result};

/// Default degree cap for exact iterates.
pub const DEFAULT_ITERATE_DEGREE_CAP: usize = 4096;

/// Univariate polynomial, coefficients stored low degree first with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn x() -> Self {
        Poly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    /// `x - c`
    pub fn linear_root(c: &Rational) -> Self {
        Poly::from_coeffs(vec![-c.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    /// Support: exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Integer polynomial with coprime coefficients and positive leading coefficient,
    /// equal to `self` up to a rational scalar.
    pub fn primitive(&self) -> Poly {
        Poly::from_bigints(&self.primitive_int())
    }

    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        ints.into_iter().map(|c| c / &g).collect()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_ball(&self, z: &CBall, prec: u32) -> CBall {
        let mut acc = CBall::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z, prec).add(&CBall::from_rational(c, prec), prec);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.deg() < d.deg() || self.is_zero() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = d.deg();
        let inv = d.lc().recip();
        let mut quot = vec![Rational::zero(); self.deg() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            // keep coefficient growth in check
            a = b;
            b = if r.is_zero() { r } else { r.monic() };
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_part(&self) -> Poly {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Squarefree decomposition (Yun): pairs (factor, multiplicity) with monic squarefree coprime factors.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.deg() > 0 {
                out.push((g.clone(), i));
            }
            b = b.div_rem(&g).0;
            if b.deg() == 0 {
                break;
            }
            c = d.div_rem(&g).0;
            d = &c - &b.derivative();
            i += 1;
        }
        let _ = &mut a;
        out
    }

    /// Composition `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// m-fold iterate; `f^0 = x`. Fails if the iterate would exceed `degree_cap`.
    pub fn iterate(&self, m: u32, degree_cap: usize) -> Result<Poly> {
        let d = self.deg();
        if d < 1 {
            return Err(Error::DegreeTooSmall { found: d, required: 1 });
        }
        let total = (d as u128).checked_pow(m).unwrap_or(u128::MAX);
        if total > degree_cap as u128 {
            return Err(Error::IterateTooLarge {
                degree: total,
                cap: degree_cap,
            });
        }
        let mut acc = Poly::x();
        for _ in 0..m {
            acc = self.compose(&acc);
        }
        Ok(acc)
    }

    /// `self(x + c)`
    pub fn shift(&self, c: &Rational) -> Poly {
        self.compose(&Poly::from_coeffs(vec![c.clone(), Rational::one()]))
    }

    /// `self(c * x)`
    pub fn scale_var(&self, c: &Rational) -> Poly {
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        Poly::from_coeffs(out)
    }

    /// `x^deg * self(1/x)`
    pub fn reverse(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::from_coeffs(v)
    }

    /// `self(-x)`
    pub fn negate_var(&self) -> Poly {
        self.scale_var(&-Rational::one())
    }

    /// Maximum absolute coefficient.
    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Bit size of the largest numerator or denominator, a crude size statistic.
    pub fn coeff_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        super::parse::format_univariate(self, var)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Poly> {
        super::parse::parse_univariate(s)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(v)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Composition of univariate polynomials; both arguments must be univariate
/// (see [`crate::algebra::MPoly::compose_univariate`] for the checked multivariate entry point).
pub fn poly_compose(outer: &Poly, inner: &Poly) -> Poly {
    outer.compose(inner)
}

/// `f^m` with the default degree cap.
pub fn poly_iterate(f: &Poly, m: u32) -> Result<Poly> {
    f.iterate(m, DEFAULT_ITERATE_DEGREE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p("x^2").compose(&p("x + 1")), p("x^2 + 2*x + 1"));
        assert_eq!(p("x^2 + 1").compose(&p("x^2 + 1")), p("x^4 + 2*x^2 + 2"));
        let q = p("3*x^3 - x + 7");
        assert_eq!(p("x").compose(&q), q);
    }

    #[test]
    fn iterate_examples() {
        let f = p("x^2 + 1");
        assert_eq!(poly_iterate(&f, 0).unwrap(), Poly::x());
        assert_eq!(poly_iterate(&f, 2).unwrap(), p("x^4 + 2*x^2 + 2"));
        let f3 = poly_iterate(&f, 3).unwrap();
        assert_eq!(f3.deg(), 8);
        // oracle: three explicit substitutions starting at 0: 0 -> 1 -> 2 -> 5
        let mut v = Rational::zero();
        for _ in 0..3 {
            v = &v * &v + Rational::one();
        }
        assert_eq!(f3.coeff(0), v);
        assert_eq!(v, rat(5, 1));
    }

    #[test]
    fn iterate_cap() {
        let f = p("x^2 + 1");
        assert!(matches!(
            f.iterate(13, DEFAULT_ITERATE_DEGREE_CAP),
            Err(Error::IterateTooLarge { degree: 8192, .. })
        ));
        assert!(matches!(f.iterate(6, 32), Err(Error::IterateTooLarge { degree: 64, .. })));
        assert_eq!(f.iterate(5, 32).unwrap().deg(), 32);
    }

    #[test]
    fn division_and_gcd() {
        let a = p("x^3 - 1");
        let b = p("x^2 - 1");
        assert_eq!(a.gcd(&b), p("x - 1"));
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
    }

    #[test]
    fn squarefree() {
        let a = p("(x - 1)^3 * (x + 2)^2 * (x^2 + 1)");
        assert_eq!(a.squarefree_part(), p("(x - 1) * (x + 2) * (x^2 + 1)"));
        let dec = a.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![(p("x^2 + 1"), 1), (p("x + 2"), 2), (p("x - 1"), 3)]
        );
    }

    #[test]
    fn primitive_part() {
        let a = p("1/2*x^2 - 3/4");
        assert_eq!(a.primitive(), p("2*x^2 - 3"));
        assert_eq!(p("-6*x + 4").primitive(), p("3*x - 2"));
    }
}
