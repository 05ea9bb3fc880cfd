//! Arithmetic in a simple extension `Q(α) = Q[y] / (m(y))` with exact equality.

use num_traits::{One, Zero};

use super::algebraic::{algebraic_eval, AlgebraicNumber};
use super::poly::Poly;
use super::Rational;
use crate::error::Result;

/// The field `Q[y]/(m)` for a monic irreducible `m`, together with a designated root.
#[derive(Clone, Debug)]
pub struct NumberField {
    modulus: Poly,
    generator: AlgebraicNumber,
}

/// Element of a [`NumberField`], stored as its reduced representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfElem(pub Poly);

impl NumberField {
    pub fn new(generator: AlgebraicNumber) -> Self {
        NumberField {
            modulus: generator.minpoly().clone(),
            generator,
        }
    }

    pub fn rationals() -> Self {
        NumberField::new(AlgebraicNumber::from_int(0))
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn generator(&self) -> &AlgebraicNumber {
        &self.generator
    }

    pub fn gen(&self) -> NfElem {
        self.reduce(Poly::x())
    }

    pub fn reduce(&self, p: Poly) -> NfElem {
        NfElem(p.rem(&self.modulus))
    }

    pub fn from_rational(&self, q: Rational) -> NfElem {
        NfElem(Poly::constant(q))
    }

    pub fn zero(&self) -> NfElem {
        NfElem(Poly::zero())
    }

    pub fn one(&self) -> NfElem {
        NfElem(Poly::one())
    }

    pub fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(&a.0 + &b.0)
    }

    pub fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(&a.0 - &b.0)
    }

    pub fn neg(&self, a: &NfElem) -> NfElem {
        NfElem(-&a.0)
    }

    pub fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.reduce(&a.0 * &b.0)
    }

    pub fn scale(&self, a: &NfElem, q: &Rational) -> NfElem {
        NfElem(a.0.scale(q))
    }

    pub fn pow(&self, a: &NfElem, mut e: u64) -> NfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm; `None` for zero.
    pub fn inv(&self, a: &NfElem) -> Option<NfElem> {
        if a.0.is_zero() {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus.clone(), a.0.clone());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        // r0 is a nonzero constant since the modulus is irreducible
        let c = r0.coeff(0);
        Some(self.reduce(t0.scale(&c.recip())))
    }

    pub fn div(&self, a: &NfElem, b: &NfElem) -> Option<NfElem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }

    pub fn is_zero(&self, a: &NfElem) -> bool {
        a.0.is_zero()
    }

    pub fn is_one(&self, a: &NfElem) -> bool {
        a.0.deg() == 0 && a.0.coeff(0).is_one()
    }

    pub fn as_rational(&self, a: &NfElem) -> Option<Rational> {
        (a.0.deg() == 0).then(|| a.0.coeff(0))
    }

    /// The element as an algebraic number (evaluating its representative at the generator).
    pub fn to_algebraic(&self, a: &NfElem) -> Result<AlgebraicNumber> {
        if let Some(q) = self.as_rational(a) {
            return Ok(AlgebraicNumber::from_rational(&q));
        }
        algebraic_eval(&a.0, &self.generator)
    }

    pub fn is_zero_rational(q: &Rational) -> bool {
        q.is_zero()
    }

    pub fn poly_from_rational(&self, p: &Poly) -> NfPoly {
        NfPoly(p.coeffs().iter().map(|c| self.from_rational(c.clone())).collect())
    }

    pub fn poly_add(&self, a: &NfPoly, b: &NfPoly) -> NfPoly {
        let n = a.0.len().max(b.0.len());
        let z = self.zero();
        NfPoly::trimmed(
            (0..n)
                .map(|i| self.add(a.0.get(i).unwrap_or(&z), b.0.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn poly_neg(&self, a: &NfPoly) -> NfPoly {
        NfPoly(a.0.iter().map(|c| self.neg(c)).collect())
    }

    pub fn poly_sub(&self, a: &NfPoly, b: &NfPoly) -> NfPoly {
        self.poly_add(a, &self.poly_neg(b))
    }

    pub fn poly_scale(&self, a: &NfPoly, c: &NfElem) -> NfPoly {
        NfPoly::trimmed(a.0.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &NfPoly, b: &NfPoly) -> NfPoly {
        if a.is_zero() || b.is_zero() {
            return NfPoly::zero();
        }
        if self.degree() == 1 {
            // rational coefficients: multiply without reductions
            let pa = Poly::from_coeffs(a.0.iter().map(|c| c.0.coeff(0)).collect());
            let pb = Poly::from_coeffs(b.0.iter().map(|c| c.0.coeff(0)).collect());
            return self.poly_from_rational(&(&pa * &pb));
        }
        let mut out = vec![Poly::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.0.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(&x.0 * &y.0);
            }
        }
        NfPoly::trimmed(out.into_iter().map(|c| self.reduce(c)).collect())
    }

    /// `outer(inner(x))` by Horner's rule.
    pub fn poly_compose(&self, outer: &NfPoly, inner: &NfPoly) -> NfPoly {
        let mut acc = NfPoly::zero();
        for c in outer.0.iter().rev() {
            acc = self.poly_add(&self.poly_mul(&acc, inner), &NfPoly(vec![c.clone()]));
        }
        acc
    }

    /// The polynomial with rational coefficients, if all coefficients are rational.
    pub fn poly_to_rational(&self, p: &NfPoly) -> Option<Poly> {
        p.0.iter()
            .map(|c| self.as_rational(c))
            .collect::<Option<Vec<_>>>()
            .map(Poly::from_coeffs)
    }

    /// Render an element as a polynomial in the generator named `name`.
    pub fn format_elem(&self, a: &NfElem, name: &str) -> String {
        match self.as_rational(a) {
            Some(q) => q.to_string(),
            None => format!("({})", a.0.fmt_var(name)),
        }
    }

    pub fn format_poly(&self, p: &NfPoly, gen_name: &str) -> String {
        if let Some(q) = self.poly_to_rational(p) {
            return q.to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in p.0.iter().enumerate().rev() {
            if c.0.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            let coef = self.format_elem(c, gen_name);
            parts.push(match (coef.as_str(), i) {
                ("1", 1..) => mono,
                (_, 0) => coef,
                _ => format!("{coef}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Polynomial with coefficients in a number field, low degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfPoly(pub Vec<NfElem>);

impl NfPoly {
    pub fn zero() -> Self {
        NfPoly(Vec::new())
    }

    pub fn trimmed(mut c: Vec<NfElem>) -> Self {
        while c.last().is_some_and(|x| x.0.is_zero()) {
            c.pop();
        }
        NfPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> NfElem {
        self.0.get(i).cloned().unwrap_or(NfElem(Poly::zero()))
    }
}
