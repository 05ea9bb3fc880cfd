//! Linear-conjugation normal forms and the power / Chebyshev / disintegrated trichotomy.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::numberfield::{NfPoly, NumberField};
use crate::algebra::{factor, default_precision, AlgebraicNumber, Poly, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    PowerConjugate,
    /// Conjugate to `ε C_d`; for even `d` the two signs are conjugate and `+` is reported.
    ChebyshevConjugate(Sign),
    Disintegrated,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::PowerConjugate => f.write_str("power"),
            ClassLabel::ChebyshevConjugate(s) => write!(f, "chebyshev({s})"),
            ClassLabel::Disintegrated => f.write_str("disintegrated"),
        }
    }
}

/// The Chebyshev polynomial with `C_d(x + 1/x) = x^d + x^-d`.
pub fn chebyshev(d: usize) -> Poly {
    assert!(d >= 1, "Chebyshev polynomials start at degree 1");
    let two = Poly::constant(Rational::from_integer(2.into()));
    let (mut prev, mut cur) = (two, Poly::x());
    for _ in 1..d {
        let next = &(&Poly::x() * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `g = L⁻¹ ∘ f ∘ L` with `L(x) = αx + β`, `g` monic without `x^{d-1}` term.
#[derive(Clone, Debug)]
pub struct NormalForm {
    /// `Q(α)`; the rationals when α is rational
    pub field: NumberField,
    pub alpha: AlgebraicNumber,
    pub beta: Rational,
    pub g: NfPoly,
    /// `f(x + β) - β`, rational with vanishing `x^{d-1}` coefficient
    pub shifted: Poly,
    /// smallest `r ≥ 2` with a nonzero `x^{d-r}` coefficient; `None` for a pure power
    pub gap: Option<usize>,
}

impl NormalForm {
    pub fn degree(&self) -> usize {
        self.shifted.deg()
    }

    /// `g` when all its coefficients are rational.
    pub fn rational_g(&self) -> Option<Poly> {
        self.field.poly_to_rational(&self.g)
    }

    pub fn is_pure_power(&self) -> bool {
        self.gap.is_none()
    }

    /// Exact check of `L⁻¹ ∘ f ∘ L = g`.
    pub fn verify(&self, f: &Poly) -> bool {
        let k = &self.field;
        let a = k.gen();
        let b = k.from_rational(self.beta.clone());
        let l = NfPoly::trimmed(vec![b.clone(), a.clone()]);
        let fl = k.poly_compose(&k.poly_from_rational(f), &l);
        let shifted = k.poly_sub(&fl, &NfPoly::trimmed(vec![b]));
        let ainv = k.inv(&a).expect("alpha is nonzero");
        k.poly_scale(&shifted, &ainv) == self.g
    }

    pub fn format_g(&self) -> String {
        self.field.format_poly(&self.g, "a")
    }
}

fn require_degree(f: &Poly) -> Result<usize> {
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::DegreeTooSmall {
            found: d,
            required: 2,
        });
    }
    Ok(d)
}

/// The designated root α of `lead·y^{d-1} = 1`: real positive for positive leads, the real
/// negative root for negative leads and odd `d - 1`, else the root of argument `π/(d-1)`.
fn choose_alpha(lead: &Rational, d: usize) -> Result<AlgebraicNumber> {
    let e = d - 1;
    let mut c = vec![Rational::zero(); e + 1];
    c[0] = -Rational::one();
    c[e] = lead.clone();
    let p = Poly::from_coeffs(c);
    let mag = lead.abs().to_f64().unwrap_or(1.0).powf(-1.0 / e as f64);
    let theta = if lead.is_positive() {
        0.0
    } else if e % 2 == 1 {
        std::f64::consts::PI
    } else {
        std::f64::consts::PI / e as f64
    };
    if let Some(r) = factor(&p, default_precision())?
        .iter()
        .filter(|f| f.degree() == 1)
        .map(|f| -f.poly.coeff(0))
        .find(|r| {
            let v = r.to_f64().unwrap_or(0.0);
            theta == 0.0 && v > 0.0 || theta == std::f64::consts::PI && v < 0.0
        })
    {
        return Ok(AlgebraicNumber::from_rational(&r));
    }
    AlgebraicNumber::nearest_root(&p, mag * theta.cos(), mag * theta.sin())
}

pub fn normal_form(f: &Poly) -> Result<NormalForm> {
    let d = require_degree(f)?;
    let lead = f.lc();
    let beta = -f.coeff(d - 1) / (lead.clone() * Rational::from_integer(BigInt::from(d)));
    let shift = Poly::from_coeffs(vec![beta.clone(), Rational::one()]);
    let shifted = &f.compose(&shift) - &Poly::constant(beta.clone());
    debug_assert!(shifted.coeff(d - 1).is_zero());
    let alpha = choose_alpha(&lead, d)?;
    let field = NumberField::new(alpha.clone());
    let a = field.gen();
    // g_i = b_i α^{i-1}
    let ainv = field.inv(&a).expect("alpha is nonzero");
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut apow = ainv;
    for i in 0..=d {
        coeffs.push(field.scale(&apow, &shifted.coeff(i)));
        apow = field.mul(&apow, &a);
    }
    let g = NfPoly::trimmed(coeffs);
    let gap = (2..=d).find(|&r| !shifted.coeff(d - r).is_zero());
    Ok(NormalForm {
        field,
        alpha,
        beta,
        g,
        shifted,
        gap,
    })
}

/// Chebyshev test on a normal form: `g(x) = ε C_d(ux)/u` with `ε = u^{d-1} = ±1`.
/// With `t = u^{-2} = -g_{d-2}/d` this is `t^{d-1} = 1` and `g_{d-2j} = C_{d,d-2j} t^j`.
fn chebyshev_sign(nf: &NormalForm) -> Option<Sign> {
    let d = nf.degree();
    let k = &nf.field;
    let g2 = nf.g.coeff(d - 2);
    if k.is_zero(&g2) {
        return None;
    }
    let t = k.scale(&g2, &-Rational::new(BigInt::one(), BigInt::from(d)));
    if !k.is_one(&k.pow(&t, (d - 1) as u64)) {
        return None;
    }
    let c = chebyshev(d);
    let mut tj = k.one();
    for i in (0..=d).rev() {
        let gi = nf.g.coeff(i);
        if (d - i) % 2 == 1 {
            if !k.is_zero(&gi) {
                return None;
            }
            continue;
        }
        if i < d {
            tj = k.mul(&tj, &t);
        }
        if gi != k.scale(&tj, &c.coeff(i)) {
            return None;
        }
    }
    if d % 2 == 0 {
        return Some(Sign::Plus);
    }
    // ε = t^{-(d-1)/2}
    let eps = k.inv(&k.pow(&t, ((d - 1) / 2) as u64))?;
    match k.as_rational(&eps) {
        Some(q) if q.is_one() => Some(Sign::Plus),
        Some(q) if q == -Rational::one() => Some(Sign::Minus),
        _ => None,
    }
}

pub fn classify_normal_form(nf: &NormalForm) -> ClassLabel {
    if nf.is_pure_power() {
        return ClassLabel::PowerConjugate;
    }
    match chebyshev_sign(nf) {
        Some(s) => ClassLabel::ChebyshevConjugate(s),
        None => ClassLabel::Disintegrated,
    }
}

pub fn classify(f: &Poly) -> Result<ClassLabel> {
    Ok(classify_normal_form(&normal_form(f)?))
}

/// Fails with [`Error::NotDisintegrated`] unless `f` is disintegrated.
pub fn require_disintegrated(f: &Poly) -> Result<NormalForm> {
    let nf = normal_form(f)?;
    match classify_normal_form(&nf) {
        ClassLabel::Disintegrated => Ok(nf),
        other => Err(Error::NotDisintegrated(format!("{f} is {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev(1), p("x"));
        assert_eq!(chebyshev(2), p("x^2 - 2"));
        assert_eq!(chebyshev(3), p("x^3 - 3*x"));
    }

    #[test]
    fn normal_forms() {
        let nf = normal_form(&p("2*x^2")).unwrap();
        assert_eq!(nf.rational_g(), Some(p("x^2")));
        assert_eq!(nf.alpha.as_rational(), Some(rat(1, 2)));
        assert!(nf.verify(&p("2*x^2")));
        let nf = normal_form(&p("x^2 + 1")).unwrap();
        assert_eq!(nf.rational_g(), Some(p("x^2 + 1")));
        assert_eq!(nf.gap, Some(2));
        // x^2 + 2x = (x + 1)^2 - 1 is the square map in the coordinate x + 1
        let nf = normal_form(&p("x^2 + 2*x")).unwrap();
        assert_eq!(nf.rational_g(), Some(p("x^2")));
        assert_eq!(p("x^2 + 2*x").compose(&p("x - 1")) + p("1"), p("x^2"));
        assert_eq!(nf.beta, rat(-1, 1));
        // irrational conjugator
        let f = p("3*x^3 + x + 1");
        let nf = normal_form(&f).unwrap();
        assert_eq!(nf.field.degree(), 2);
        assert!(nf.verify(&f));
        assert!(nf.rational_g().is_none());
    }

    #[test]
    fn labels() {
        assert_eq!(classify(&p("x^2 - 2")).unwrap(), ClassLabel::ChebyshevConjugate(Sign::Plus));
        assert_eq!(classify(&p("x^2 + 1")).unwrap(), ClassLabel::Disintegrated);
        assert_eq!(classify(&p("3*x^3")).unwrap(), ClassLabel::PowerConjugate);
        assert_eq!(classify(&p("x^3 - 3*x")).unwrap(), ClassLabel::ChebyshevConjugate(Sign::Plus));
        assert_eq!(classify(&p("-x^3 + 3*x")).unwrap(), ClassLabel::ChebyshevConjugate(Sign::Minus));
        assert_eq!(classify(&p("-x^2 + 2")).unwrap(), ClassLabel::ChebyshevConjugate(Sign::Plus));
        assert_eq!(classify(&p("x^3 + x")).unwrap(), ClassLabel::Disintegrated);
        // conjugate of C_2 by x/2
        assert_eq!(classify(&p("2*x^2 - 1")).unwrap(), ClassLabel::ChebyshevConjugate(Sign::Plus));
    }
}
