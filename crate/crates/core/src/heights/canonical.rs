//! Canonical heights.
//!
//! For polynomials with integer coefficients and unit leading coefficient every finite
//! place is good, so `ĥ_f(a) = (ln|c| + Σ_σ G(σa)) / deg a` with `G` the archimedean
//! Green function of `f`, which is enclosed rigorously by ball iteration. Otherwise the
//! Tate limit is evaluated on the exact orbit with the tail bound `C_f / ((d-1) d^m)`.

use num_traits::{One, Signed, Zero};

use super::constants::height_expansion_constant;
use super::{down, ln_int, ln_rational, up, weil_height_alg, HeightValue};
use crate::algebra::{
    algebraic_eval, AlgebraicNumber, CBall, Dyadic, P1Point, Poly, Rational,
    DEFAULT_ITERATE_DEGREE_CAP,
};
use crate::error::{Error, Result};

pub const DEFAULT_TARGET_ERROR: f64 = 1e-9;

const MIN_PREC: u32 = 128;
const MAX_PREC: u32 = 8192;

/// Integer coefficients and leading coefficient ±1.
pub fn has_good_reduction(f: &Poly) -> bool {
    f.has_integer_coeffs() && f.lc().abs().is_one()
}

fn check_degree(f: &Poly) -> Result<usize> {
    let d = f.degree().unwrap_or(0);
    if d < 2 {
        return Err(Error::DegreeTooSmall {
            found: d,
            required: 2,
        });
    }
    Ok(d)
}

/// Certified data for enclosing the archimedean Green function of `f`.
struct Green<'a> {
    f: &'a Poly,
    d: usize,
    /// escape radius R (rounded up)
    r: Dyadic,
    ln_r: (f64, f64),
    /// enclosure of ln|lc| / (d-1)
    c: (f64, f64),
    /// upper bound of ln S with S the sum of |a_i|, i < d; None when S = 0
    ln_s_hi: Option<f64>,
    ln_lc_lo: f64,
}

impl<'a> Green<'a> {
    fn new(f: &'a Poly) -> Option<Self> {
        let d = f.deg();
        let lc = f.lc().abs();
        let (ln_lc_lo, ln_lc_hi) = ln_rational(&lc);
        let s: Rational = f.coeffs()[..d].iter().map(|c| c.abs()).sum();
        let ln_s_hi = (!s.is_zero()).then(|| ln_rational(&s).1);
        let dm1 = (d - 1) as f64;
        let ln2 = std::f64::consts::LN_2;
        let mut ln_r = 0.0f64;
        if let Some(ls) = ln_s_hi {
            ln_r = ln_r.max(up(up(ln2 + ls) - ln_lc_lo));
        }
        ln_r = ln_r.max(up(up(ln2 - ln_lc_lo) / dm1));
        let rf = up(ln_r.exp() * (1.0 + 1e-12));
        if !rf.is_finite() {
            return None;
        }
        let r = Dyadic::from_f64(rf);
        Some(Green {
            f,
            d,
            ln_r: r.ln_bounds(),
            r,
            c: (down(ln_lc_lo / dm1), up(ln_lc_hi / dm1)),
            ln_s_hi,
            ln_lc_lo,
        })
    }

    /// Upper bound of `-ln(1 - S/(|lc| s)) / (d-1)` for `ln s >= ln_s_lo`.
    fn tail(&self, ln_s_lo: f64) -> f64 {
        let Some(ls) = self.ln_s_hi else {
            return 0.0;
        };
        let delta = (up(up(ls - self.ln_lc_lo) - ln_s_lo)).exp() * (1.0 + 1e-14);
        if delta > 0.5 {
            return f64::INFINITY;
        }
        // -ln(1-δ) ≤ δ + δ² for δ ≤ 1/2
        up(delta * (1.0 + delta) * (1.0 + 1e-14) / (self.d - 1) as f64).max(f64::MIN_POSITIVE)
    }

    /// Enclosure of `G(z)` of width at most `target`, or `None` when the precision is
    /// insufficient.
    fn enclose(&self, z: &CBall, prec: u32, target: f64) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
        let mut w = z.clone();
        let mut scale = 1.0f64;
        let dd = self.d as f64;
        for _ in 0..1000 {
            let al = w.abs_lower_prec(64);
            let au = w.abs_upper_prec(64);
            let escaped = !al.is_zero() && al >= self.r;
            let (l, h) = if escaped {
                let la = al.ln_bounds().0;
                let ua = au.ln_bounds().1;
                let e = self.tail(la);
                (down(down(la + self.c.0) - e), up(up(ua + self.c.1) + e))
            } else {
                let m = if au > self.r { au.ln_bounds().1 } else { self.ln_r.1 };
                (0.0, up(up(m + self.c.1) + self.tail(self.ln_r.0)))
            };
            lo = lo.max(down(l.max(0.0) * scale));
            hi = hi.min(up(h * scale));
            if hi - lo <= target {
                return Some((lo, hi.max(lo)));
            }
            // escaped orbits only get wider relative to their size; non-escaped balls
            // that grew far past R have lost their precision
            if au.magnitude() > 1 << 14 || (!escaped && au.magnitude() > self.r.magnitude() + 64) {
                return None;
            }
            w = self.f.eval_ball(&w, prec);
            scale /= dd;
            if scale < 1e-290 {
                return None;
            }
        }
        None
    }
}

/// Archimedean Green function `G_f(a) = lim d^-k ln⁺|f^k(a)|` with certified radius.
pub fn green_function(f: &Poly, a: &AlgebraicNumber, target: f64) -> Result<HeightValue> {
    check_degree(f)?;
    let g = Green::new(f).ok_or_else(|| Error::invalid("coefficients too large for the Green bound"))?;
    let mut prec = a.precision().max(MIN_PREC);
    while prec <= MAX_PREC {
        let b = a.refine(prec)?;
        if let Some((lo, hi)) = g.enclose(b.ball(), prec, target) {
            return Ok(HeightValue::from_bounds(lo, hi, false));
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted {
        bits: MAX_PREC,
        context: "Green function enclosure".into(),
    })
}

fn good_reduction_height(f: &Poly, a: &AlgebraicNumber, target: f64) -> Result<Option<HeightValue>> {
    let Some(g) = Green::new(f) else {
        return Ok(None);
    };
    let dg = a.degree() as f64;
    let (lc_lo, lc_hi) = {
        let c = a.minpoly_primitive().lc().clone();
        if c.is_one() {
            (0.0, 0.0)
        } else {
            ln_int(c.numer())
        }
    };
    let per = 0.5 * target;
    let mut prec = a.precision().max(MIN_PREC);
    'outer: while prec <= MAX_PREC {
        let conj = match a.as_rational() {
            Some(q) => vec![CBall::from_rational(&q, prec)],
            None => a.refine(prec)?.conjugates()?.iter().map(|c| c.ball().clone()).collect(),
        };
        let (mut lo, mut hi) = (lc_lo, lc_hi);
        for z in &conj {
            match g.enclose(z, prec, per) {
                Some((l, h)) => {
                    lo = down(lo + l);
                    hi = up(hi + h);
                }
                None => {
                    prec *= 2;
                    continue 'outer;
                }
            }
        }
        return Ok(Some(HeightValue::from_bounds(
            down(lo / dg).max(0.0),
            up(hi / dg),
            false,
        )));
    }
    Ok(None)
}

fn apply(f: &Poly, a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    match a.as_rational() {
        Some(q) => Ok(AlgebraicNumber::from_rational(&f.eval(&q))),
        None => algebraic_eval(f, a),
    }
}

/// Exact cycle detection on short rational orbits of small height.
fn rational_preperiodic(f: &Poly, q: &Rational) -> bool {
    let mut seen = vec![q.clone()];
    let mut x = q.clone();
    for _ in 0..64 {
        x = f.eval(&x);
        if seen.contains(&x) {
            return true;
        }
        if x.numer().bits() + x.denom().bits() > 512 {
            return false;
        }
        seen.push(x.clone());
    }
    false
}

/// Tate limit on the exact orbit, stopping at the iterate-size cap.
fn tate_height(f: &Poly, a: &AlgebraicNumber, target: f64) -> Result<HeightValue> {
    let d = f.deg() as f64;
    let cf = height_expansion_constant(f)?;
    let tail0 = up(cf / (d - 1.0));
    let mut x = a.clone();
    let mut best = (f64::NAN, f64::INFINITY);
    let mut dm = 1.0f64;
    loop {
        let h = weil_height_alg(&x)?;
        let lo = down(down(h.lo() - tail0) / dm).max(0.0);
        let hi = up(up(h.hi() + tail0) / dm);
        let v = HeightValue::from_bounds(lo, hi, false);
        if v.radius <= target {
            return Ok(v);
        }
        if v.radius < best.1 {
            best = (v.value, v.radius);
        }
        if dm * d > DEFAULT_ITERATE_DEGREE_CAP as f64 {
            return Err(Error::CanonicalHeightNotConverged {
                estimate: best.0,
                radius: best.1,
                target,
            });
        }
        x = apply(f, &x)?;
        dm *= d;
    }
}

/// Canonical height of an algebraic number with `|v - ĥ_f(a)| ≤ radius ≤ target`.
pub fn canonical_height_alg(f: &Poly, a: &AlgebraicNumber, target: f64) -> Result<HeightValue> {
    check_degree(f)?;
    if !(target > 0.0) {
        return Err(Error::invalid("target error must be positive"));
    }
    // ĥ of ±x^d is the Weil height
    if f.support() == vec![f.deg()] && f.lc().abs().is_one() {
        return weil_height_alg(a);
    }
    if let Some(q) = a.as_rational() {
        if rational_preperiodic(f, &q) {
            return Ok(HeightValue::zero());
        }
    }
    if has_good_reduction(f) {
        if let Some(v) = good_reduction_height(f, a, target)? {
            return Ok(v);
        }
    }
    tate_height(f, a, target)
}

/// Canonical height on the projective line. The fixed point at infinity is excluded.
pub fn canonical_height(f: &Poly, a: &P1Point, target: f64) -> Result<HeightValue> {
    match a {
        P1Point::Infinity => Err(Error::InfinitePoint),
        P1Point::Finite(x) => canonical_height_alg(f, x, target),
    }
}
