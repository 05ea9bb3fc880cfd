//! Explicit constants in the height inequalities for polynomial maps.
//!
//! All constants are upper bounds rounded outward; any larger value is also valid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ln_int, ln_rational, up};
use crate::algebra::integer::{prime_divisors, valuation};
use crate::algebra::{MPoly, Poly, Rational};
use crate::error::{Error, Result};

const LN2: f64 = std::f64::consts::LN_2;

/// Upper bound of the projective height of `[v_0 : ... : v_k]` (not all zero).
pub fn projective_height(v: &[Rational]) -> f64 {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    assert!(!g.is_zero(), "projective height of the zero vector");
    let m = ints.iter().map(|x| x.abs()).max().unwrap() / g;
    if m.is_one() {
        0.0
    } else {
        ln_int(&m).1
    }
}

fn ln_count(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        up((n as f64).ln())
    }
}

/// `h([1 : coefficients]) + ln(#monomials)`.
fn coefficient_constant(coeffs: Vec<Rational>) -> f64 {
    let n = coeffs.len();
    let mut v = vec![Rational::one()];
    v.extend(coeffs);
    let (h, c) = (projective_height(&v), ln_count(n));
    if h == 0.0 && c == 0.0 {
        0.0
    } else {
        up(h + c)
    }
}

/// C₁ with `h(F(a)) ≤ Σ deg_i(F) h(a_i) + C₁` for all algebraic tuples.
pub fn hypersurface_upper_constant(f: &MPoly) -> f64 {
    coefficient_constant(f.terms().map(|(_, c)| c.clone()).collect())
}

/// C₂ with `h(a_n) - Σ_{i≠n} 2 deg_i(F) h(a_i) - C₂ ≤ h(F(a))` whenever some coefficient
/// `F_i(a)` of `X_pivot^i`, `i ≥ 1`, is nonzero.
pub fn hypersurface_lower_constant(f: &MPoly, pivot: usize) -> Result<f64> {
    let parts = f.coefficients_in(pivot);
    if parts.len() <= 1 {
        return Err(Error::PivotDegreeZero(pivot));
    }
    let x = MPoly::var(f.nvars(), pivot);
    let mut q = MPoly::zero(f.nvars());
    let mut best = 0.0f64;
    for (i, fi) in parts.iter().enumerate() {
        if i >= 1 && !fi.is_zero() {
            let mut c = hypersurface_upper_constant(fi);
            if !q.is_zero() {
                c = up(up(c + hypersurface_upper_constant(&q)) + 2.0 * LN2);
            }
            best = best.max(c);
        }
        q = &q + &(fi * &x.pow(i as u32));
    }
    Ok(best)
}

/// C_f with `|h(f(a)) - d h(a)| ≤ C_f` for all algebraic `a`.
///
/// The upper direction is C₁ of `f`; the lower direction sums place-by-place escape
/// thresholds: at each place `v`, `|f(a)|_v ≥ |a_d|_v |a|_v^d (1 - δ_v)` beyond `B_v`.
pub fn height_expansion_constant(f: &Poly) -> Result<f64> {
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::DegreeTooSmall {
            found: d,
            required: 2,
        });
    }
    let coeffs = f.coeffs();
    let upper = coefficient_constant(coeffs.iter().filter(|c| !c.is_zero()).cloned().collect());

    let ad = coeffs[d].abs();
    let s: Rational = coeffs[..d].iter().map(|c| c.abs()).sum();
    let df = d as f64;
    // archimedean: B = max(1, 2S/|a_d|), δ(B) = S/(|a_d| B) ≤ 1/2
    let b = (Rational::from_integer(2.into()) * &s / &ad).max(Rational::one());
    let ln_b = if b.is_one() { 0.0 } else { ln_rational(&b).1 };
    let one_minus = Rational::one() - &s / (&ad * &b);
    let arch = (df * ln_b).max(up(-ln_rational(&ad).0 - ln_rational(&one_minus).0));
    let mut lower = up(arch.max(0.0));

    let mut primes: Vec<BigInt> = Vec::new();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        primes.extend(prime_divisors(c.numer()));
        primes.extend(prime_divisors(c.denom()));
    }
    primes.sort();
    primes.dedup();
    let vq = |q: &Rational, p: &BigInt| valuation(q.numer(), p) - valuation(q.denom(), p);
    for p in &primes {
        let lp = ln_int(p).1;
        let vd = vq(&coeffs[d], p);
        let mut ln_bp = 0.0f64;
        for (i, c) in coeffs[..d].iter().enumerate() {
            if !c.is_zero() {
                ln_bp = ln_bp.max((vd - vq(c, p)) as f64 * lp / (d - i) as f64);
            }
        }
        let dp = up(df * up(ln_bp)).max(vd as f64 * lp);
        lower = up(lower + dp.max(0.0));
    }
    Ok(upper.max(lower))
}

/// The constants of the height inequalities for a hypersurface `F = 0` with pivot variable,
/// together with the formula trail used for each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityConstants {
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    #[serde(rename = "C4")]
    pub c4: f64,
    #[serde(rename = "C5")]
    pub c5: f64,
    #[serde(rename = "Cf")]
    pub cf: f64,
    pub pivot: usize,
    /// `deg_{X_j} F` for every variable (pivot included)
    pub degrees: Vec<usize>,
    pub provenance: Vec<String>,
}

impl InequalityConstants {
    pub fn compute(big_f: &MPoly, f: &Poly, pivot: usize) -> Result<Self> {
        let c1 = hypersurface_upper_constant(big_f);
        let c2 = hypersurface_lower_constant(big_f, pivot)?;
        let cf = height_expansion_constant(f)?;
        let d = f.deg();
        let c4 = up(cf / (d - 1) as f64);
        let degrees: Vec<usize> = (0..big_f.nvars()).map(|j| big_f.degree_in(j)).collect();
        let sum: usize = degrees
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != pivot)
            .map(|(_, &dj)| dj)
            .sum();
        let c5 = up(c2 + up(c4 * (1 + 2 * sum) as f64));
        let provenance = vec![
            "C1 = h([1 : coefficients of F]) + ln(number of monomials)".to_string(),
            format!(
                "C2 = max over i >= 1 with F_i != 0 of C1(F_i) + [Q_i != 0](C1(Q_i) + 2 ln 2), \
                 F_i the coefficient of x{} ^ i, Q_i = sum_{{j<i}} F_j x{} ^ j",
                pivot + 1,
                pivot + 1
            ),
            "Cf = max(C1(f), sum over places of d ln B_v or the leading-coefficient term)"
                .to_string(),
            "C4 = Cf / (d - 1)".to_string(),
            format!(
                "C5 = C2 + C4 (1 + 2 sum_{{j != pivot}} D_j) with sum D_j = {sum}; \
                 coefficients 2 D_j on the canonical heights"
            ),
        ];
        Ok(InequalityConstants {
            c1,
            c2,
            c4,
            c5,
            cf,
            pivot,
            degrees,
            provenance,
        })
    }
}

/// C₅ with `ĥ(a_n) ≤ Σ_{i≠n} 2 deg_i(F) ĥ(a_i) + C₅` on `F = 0` (same proviso as C₂).
pub fn canonical_pivot_constant(big_f: &MPoly, f: &Poly, pivot: usize) -> Result<f64> {
    Ok(InequalityConstants::compute(big_f, f, pivot)?.c5)
}
