//! Weil heights, canonical heights with certified error, and the explicit constants
//! relating heights of points to heights of polynomial values.

mod canonical;
mod constants;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::memo::Memo;
use crate::algebra::{AlgebraicNumber, Dyadic, P1Point, Poly, Rational};
use crate::error::Result;

pub use canonical::{
    canonical_height, canonical_height_alg, green_function, has_good_reduction,
    DEFAULT_TARGET_ERROR,
};
pub use constants::{
    canonical_pivot_constant, height_expansion_constant, hypersurface_lower_constant,
    hypersurface_upper_constant, projective_height, InequalityConstants,
};

/// A height value `v` with certified radius: the true value lies in `[v - r, v + r]`.
///
/// `exact` marks closed forms such as `ln max(|p|, |q|)`; their radius is zero and `value`
/// is the binary64 rounding of the closed form, so `lo`/`hi` widen by a rounding slack.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightValue {
    pub value: f64,
    pub radius: f64,
    pub exact: bool,
}

/// Rounding slack of exact values, generous enough for sums of many logarithms.
fn exact_slack(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        1e-13 * (1.0 + v.abs())
    }
}

impl HeightValue {
    pub fn zero() -> Self {
        HeightValue {
            value: 0.0,
            radius: 0.0,
            exact: true,
        }
    }

    /// From an enclosure `[lo, hi]`.
    pub fn from_bounds(lo: f64, hi: f64, exact: bool) -> Self {
        debug_assert!(lo <= hi, "empty enclosure [{lo}, {hi}]");
        let value = 0.5 * lo + 0.5 * hi;
        let radius = if exact { 0.0 } else { up((hi - value).max(value - lo)) };
        HeightValue {
            value,
            radius,
            exact,
        }
    }

    pub fn lo(&self) -> f64 {
        if self.exact {
            return self.value - exact_slack(self.value);
        }
        down(self.value - self.radius)
    }

    pub fn hi(&self) -> f64 {
        if self.exact {
            return self.value + exact_slack(self.value);
        }
        up(self.value + self.radius)
    }

    pub fn add(&self, o: &HeightValue) -> HeightValue {
        HeightValue::from_bounds(down(self.lo() + o.lo()), up(self.hi() + o.hi()), self.exact && o.exact)
    }

    pub fn scale(&self, k: f64) -> HeightValue {
        let (a, b) = (self.lo() * k, self.hi() * k);
        HeightValue::from_bounds(down(a.min(b)), up(a.max(b)), self.exact)
    }

    /// True if the enclosures intersect.
    pub fn overlaps(&self, o: &HeightValue) -> bool {
        self.lo() <= o.hi() && o.lo() <= self.hi()
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {:.3e}", self.value, self.radius)
    }
}

/// Round toward +inf by two ulps (covers one rounded operation with margin). A zero
/// result of a sum or difference is exact, so zero is kept.
pub(crate) fn up(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x.next_up().next_up()
}

pub(crate) fn down(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x.next_down().next_down()
}

/// Enclosure of `ln q` for a positive rational.
pub(crate) fn ln_rational(q: &Rational) -> (f64, f64) {
    assert!(q.is_positive(), "ln of nonpositive rational");
    let (a, b) = Dyadic::from_bigint(q.numer()).ln_bounds();
    if q.denom().is_one() {
        return (a, b);
    }
    let (c, d) = Dyadic::from_bigint(q.denom()).ln_bounds();
    (down(a - d), up(b - c))
}

/// Enclosure of `ln |n|` for a nonzero integer.
pub(crate) fn ln_int(n: &BigInt) -> (f64, f64) {
    Dyadic::from_bigint(&n.abs()).ln_bounds()
}

/// Enclosure of `ln max(1, x)` for `x` in `[lo, hi]` given as dyadics.
pub(crate) fn ln_plus(lo: &Dyadic, hi: &Dyadic) -> (f64, f64) {
    let one = Dyadic::one();
    let l = if lo > &one { lo.ln_bounds().0.max(0.0) } else { 0.0 };
    let h = if hi > &one { hi.ln_bounds().1 } else { 0.0 };
    (l, h)
}

/// Weil height of an algebraic number: `(ln|c| + sum ln max(1, |root|)) / deg` over the
/// roots of the primitive integer minimal polynomial with leading coefficient `c`.
/// Computed from the minimal polynomial alone, hence equal on all conjugates.
pub fn weil_height_alg(a: &AlgebraicNumber) -> Result<HeightValue> {
    if let Some(q) = a.as_rational() {
        if q.is_zero() {
            return Ok(HeightValue::zero());
        }
        let m = q.numer().abs().max(q.denom().clone());
        if m.is_one() {
            return Ok(HeightValue::zero());
        }
        let (lo, hi) = ln_int(&m);
        return Ok(HeightValue::from_bounds(lo, hi, true));
    }
    static BY_MINPOLY: Memo<Poly, HeightValue> = Memo::new();
    BY_MINPOLY.get_or_try(a.minpoly(), || weil_height_conjugates(a))
}

// depends only on the minimal polynomial
fn weil_height_conjugates(a: &AlgebraicNumber) -> Result<HeightValue> {
    let prim = a.minpoly_primitive();
    let c = prim.lc();
    let (mut lo, mut hi) = ln_int(c.numer());
    for r in a.conjugates()? {
        let b = r.ball();
        let (l, h) = ln_plus(&b.abs_lower_prec(64), &b.abs_upper_prec(64));
        lo = down(lo + l);
        hi = up(hi + h);
    }
    let d = a.degree() as f64;
    Ok(HeightValue::from_bounds(down(lo / d).max(0.0), up(hi / d), false))
}

/// Weil height on the projective line; `h(inf) = 0`.
pub fn weil_height(a: &P1Point) -> Result<HeightValue> {
    match a {
        P1Point::Infinity => Ok(HeightValue::zero()),
        P1Point::Finite(x) => weil_height_alg(x),
    }
}

/// `h_n(a_1, ..., a_n) = h(a_1) + ... + h(a_n)`.
pub fn height_n(pt: &[P1Point]) -> Result<HeightValue> {
    let mut acc = HeightValue::zero();
    for a in pt {
        acc = acc.add(&weil_height(a)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Poly};

    fn within(h: &HeightValue, v: f64) -> bool {
        h.lo() <= v && v <= h.hi()
    }

    #[test]
    fn rational_heights() {
        let h = weil_height(&P1Point::rational(rat(3, 2))).unwrap();
        assert!(h.exact && within(&h, 3f64.ln()));
        assert_eq!(weil_height(&P1Point::int(0)).unwrap().value, 0.0);
        assert_eq!(weil_height(&P1Point::Infinity).unwrap().value, 0.0);
        let h = height_n(&[P1Point::int(1), P1Point::int(2)]).unwrap();
        assert!(within(&h, 2f64.ln()));
    }

    #[test]
    fn sqrt2_height() {
        let p: Poly = "x^2 - 2".parse().unwrap();
        let a = AlgebraicNumber::nearest_root(&p, 1.4, 0.0).unwrap();
        let h = weil_height_alg(&a).unwrap();
        // oracle: Mahler measure of x^2 - 2 is 2
        assert!(within(&h, 0.5 * 2f64.ln()));
        assert!(h.radius < 1e-12);
        let b = AlgebraicNumber::nearest_root(&p, -1.4, 0.0).unwrap();
        assert_eq!(weil_height_alg(&b).unwrap(), h);
        let s = height_n(&[P1Point::rational(rat(3, 2)), P1Point::Finite(a)]).unwrap();
        assert!(within(&s, 3f64.ln() + 0.5 * 2f64.ln()));
    }

    #[test]
    fn non_monic_minpoly() {
        // root of 2x^2 - 3x + 2: |roots| = 1, so h = ln 2 / 2
        let p: Poly = "2*x^2 - 3*x + 2".parse().unwrap();
        let a = AlgebraicNumber::nearest_root(&p, 0.75, 0.66).unwrap();
        let h = weil_height_alg(&a).unwrap();
        assert!(within(&h, 0.5 * 2f64.ln()), "{h}");
    }
}
