//! Exact rational and algebraic-number arithmetic, polynomials and certified root isolation.

pub mod algebraic;
pub mod dyadic;
pub mod factor;
pub mod integer;
pub(crate) mod memo;
pub mod modp;
pub mod mpoly;
pub mod numberfield;
pub mod parse;
pub mod poly;
pub mod resultant;
pub mod roots;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use algebraic::{algebraic_eval, AlgebraicNumber, P1Point};
pub use dyadic::{CBall, Dyadic, Round};
pub use factor::{factor, Factor};
pub use mpoly::MPoly;
pub use numberfield::{NfElem, NfPoly, NumberField};
pub use poly::{poly_compose, poly_iterate, Poly, DEFAULT_ITERATE_DEGREE_CAP};
pub use roots::isolate_roots;

/// Exact rational number; always stored in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Default working precision for ball arithmetic.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// Working precision, honoring `DYNAHEIGHT_PRECISION_BITS` when set to a sane value.
pub fn default_precision() -> u32 {
    std::env::var("DYNAHEIGHT_PRECISION_BITS")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&b| (64..=1 << 16).contains(&b))
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Enclosure `(lo, hi)` of `ln |n|` for a nonzero integer.
pub fn ln_abs_bounds(n: &BigInt) -> (f64, f64) {
    assert!(!n.is_zero(), "ln of zero");
    Dyadic::from_bigint(&n.abs()).ln_bounds()
}

/// Enclosure of `ln max(|p|, |q|)`, the Weil height of `p/q`.
pub fn rational_height_bounds(q: &Rational) -> (f64, f64) {
    let m = q.numer().abs().max(q.denom().abs());
    if m <= BigInt::from(1) {
        return (0.0, 0.0);
    }
    ln_abs_bounds(&m)
}

/// Parse a rational like `3`, `-3/2`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Rational::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}
