//! Sparse multivariate polynomials over the rationals in variables `x1..xn`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::Rational;
use crate::error::{Error, Result};

/// Multivariate polynomial. Terms are keyed by exponent vectors of length `nvars`;
/// zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Rational::one())
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = MPoly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Embed a univariate polynomial as a polynomial in variable `var`.
    pub fn from_univariate(p: &Poly, var: usize, nvars: usize) -> Self {
        let mut out = MPoly::zero(nvars);
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; nvars];
                e[var] = k as u32;
                out.terms.insert(e, c.clone());
            }
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Constant term value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(Rational::zero),
        )
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|e| e[var] as usize).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// The univariate polynomial in `var`, if no other variable occurs.
    pub fn to_univariate(&self, var: usize) -> Option<Poly> {
        if self.vars_used().iter().any(|&v| v != var) {
            return None;
        }
        let d = self.degree_in(var);
        let mut c = vec![Rational::zero(); d + 1];
        for (e, v) in &self.terms {
            c[e[var] as usize] = v.clone();
        }
        Some(Poly::from_coeffs(c))
    }

    /// The single occurring variable, or `None` if the polynomial is constant or uses several.
    pub fn single_var(&self) -> Option<usize> {
        match self.vars_used().as_slice() {
            [v] => Some(*v),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one(self.nvars);
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

    pub fn eval(&self, pt: &[Rational]) -> Rational {
        assert_eq!(pt.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in pt.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitute `x_var := value`; the variable remains in the ring but no longer occurs.
    pub fn eval_var(&self, var: usize, value: &Rational) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            out.add_term(e2, c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// Substitute `x_var := q` where `q` is a polynomial in the same ring.
    pub fn substitute(&self, var: usize, q: &MPoly) -> MPoly {
        assert_eq!(q.nvars, self.nvars);
        let coeffs = self.coefficients_in(var);
        // Horner in q
        let mut acc = MPoly::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Coefficients as polynomials in the remaining variables: `self = Σ_k out[k] * x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var);
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var] as usize;
            e2[var] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    /// Reassign variables: variable `i` becomes `map[i]` in a ring with `new_nvars` variables.
    /// Variables mapped to the same index are merged multiplicatively.
    pub fn remap(&self, map: &[usize], new_nvars: usize) -> MPoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = MPoly::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; new_nvars];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]] += k;
                }
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Partial derivative in `var`.
    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Lex-leading term (variable 0 most significant).
    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (de, dc) = d.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let c = rc / &dc;
            let t = MPoly::monomial(e, c);
            rem = &rem - &(&t * d);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Integer polynomial with coprime coefficients and positive lex-leading coefficient,
    /// a rational multiple of `self`.
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&l / c.denom())));
        }
        let mut s = Rational::new(l, g);
        if self.leading_term().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Resultant with respect to `var`, computed as a Sylvester determinant by
    /// fraction-free (Bareiss) elimination.
    pub fn resultant(&self, other: &MPoly, var: usize) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let n = self.nvars;
        if self.is_zero() || other.is_zero() {
            return MPoly::zero(n);
        }
        let m = self.degree_in(var);
        let k = other.degree_in(var);
        if m == 0 && k == 0 {
            return MPoly::one(n);
        }
        if m == 0 {
            return self.pow(k as u32);
        }
        if k == 0 {
            return other.pow(m as u32);
        }
        let a = self.coefficients_in(var);
        let b = other.coefficients_in(var);
        let size = m + k;
        let mut mat = vec![vec![MPoly::zero(n); size]; size];
        for i in 0..k {
            for (j, c) in a.iter().enumerate() {
                mat[i][i + (m - j)] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in b.iter().enumerate() {
                mat[k + i][i + (k - j)] = c.clone();
            }
        }
        bareiss_det(mat, n)
    }

    pub fn fmt_vars(&self, names: &[String]) -> String {
        super::parse::format_multivariate(self, names)
    }

    /// Default display names `x1..xn`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }

    /// Composition of univariate polynomials in a single shared variable.
    pub fn compose_univariate(outer: &MPoly, inner: &MPoly) -> Result<MPoly> {
        let vo = outer.vars_used();
        let vi = inner.vars_used();
        if vo.len() > 1 || vi.len() > 1 {
            return Err(Error::NotUnivariate);
        }
        let var = vo.first().or(vi.first()).copied().unwrap_or(0);
        if vo.iter().chain(&vi).any(|&v| v != var) {
            return Err(Error::NotUnivariate);
        }
        let po = outer.to_univariate(var).expect("checked");
        let pi = inner.to_univariate(var).expect("checked");
        Ok(MPoly::from_univariate(&po.compose(&pi), var, outer.nvars.max(inner.nvars)))
    }

    /// Change the number of variables; every occurring variable must stay in range.
    pub fn with_nvars(&self, nvars: usize) -> MPoly {
        assert!(self.vars_used().iter().all(|&v| v < nvars), "variable out of range");
        let map: Vec<usize> = (0..self.nvars).map(|i| if i < nvars { i } else { 0 }).collect();
        self.remap(&map, nvars)
    }
}

fn bareiss_det(mut mat: Vec<Vec<MPoly>>, nvars: usize) -> MPoly {
    let size = mat.len();
    let mut sign = false;
    let mut prev = MPoly::one(nvars);
    for kk in 0..size {
        if mat[kk][kk].is_zero() {
            let Some(p) = (kk + 1..size).find(|&r| !mat[r][kk].is_zero()) else {
                return MPoly::zero(nvars);
            };
            mat.swap(kk, p);
            sign = !sign;
        }
        for i in kk + 1..size {
            for j in kk + 1..size {
                let num = &(&mat[i][j] * &mat[kk][kk]) - &(&mat[i][kk] * &mat[kk][j]);
                mat[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact");
            }
            mat[i][kk] = MPoly::zero(nvars);
        }
        prev = mat[kk][kk].clone();
    }
    let d = mat[size - 1][size - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_vars(&MPoly::default_names(self.nvars)))
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars, "ring mismatch");
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, o: MPoly) -> MPoly {
        &self + &o
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, o: MPoly) -> MPoly {
        &self - &o
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, o: MPoly) -> MPoly {
        &self * &o
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_mpoly;
    use crate::algebra::rat;

    fn mp(s: &str, n: usize) -> MPoly {
        parse_mpoly(s, n).unwrap()
    }

    #[test]
    fn resultant_eliminates() {
        // x2 = x1^2 + 1, x3 = x2  =>  x3 - x1^2 - 1
        let a = mp("x2 - x1^2 - 1", 3);
        let b = mp("x3 - x2", 3);
        let r = a.resultant(&b, 1).primitive();
        assert_eq!(r, mp("x1^2 - x3 + 1", 3).primitive());
    }

    #[test]
    fn resultant_univariate_known() {
        // Res(x^2 - 2, x^2 - 3) = (2 - 3)^2 = 1
        let a = mp("x1^2 - 2", 1);
        let b = mp("x1^2 - 3", 1);
        assert_eq!(a.resultant(&b, 0).as_constant(), Some(rat(1, 1)));
        // Res(x - 1, x^2 + 1) = 2
        let a = mp("x1 - 1", 1);
        let b = mp("x1^2 + 1", 1);
        assert_eq!(a.resultant(&b, 0).as_constant(), Some(rat(2, 1)));
    }

    #[test]
    fn exact_division() {
        let a = mp("x1^2*x2 - x2^3", 2);
        let d = mp("x1 - x2", 2);
        assert_eq!(a.div_exact(&d).unwrap(), mp("x1*x2 + x2^2", 2));
        assert!(mp("x1 + 1", 2).div_exact(&mp("x2", 2)).is_none());
    }

    #[test]
    fn substitute_and_coefficients() {
        let f = mp("x1*x2^2 + x2", 2);
        let c = f.coefficients_in(1);
        assert_eq!(c.len(), 3);
        assert_eq!(c[2], mp("x1", 2));
        assert_eq!(c[1], mp("1", 2));
        let s = f.substitute(1, &mp("x1 + 1", 2));
        assert_eq!(s, mp("x1*(x1 + 1)^2 + x1 + 1", 2));
    }

    #[test]
    fn compose_requires_univariate() {
        let a = mp("x1^2", 2);
        let b = mp("x1 + x2", 2);
        assert_eq!(MPoly::compose_univariate(&a, &b), Err(Error::NotUnivariate));
        let c = MPoly::compose_univariate(&a, &mp("x1 + 1", 2)).unwrap();
        assert_eq!(c, mp("x1^2 + 2*x1 + 1", 2));
    }
}
