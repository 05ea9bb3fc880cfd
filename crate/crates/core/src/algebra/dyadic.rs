//! Binary floating point numbers of arbitrary precision and complex balls built on them.
//!
//! A [`Dyadic`] is an exact number `mant * 2^exp`. Arithmetic on dyadics is exact;
//! precision is only lost through explicit calls to [`Dyadic::round`]. A [`CBall`]
//! is a complex disc `center + rad` whose operations round the center to a working
//! precision and fold every rounding error into the radius, so that the true value
//! of any computation is always contained in the resulting ball.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Rounding direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    Nearest,
}

/// Exact binary fraction `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Dyadic::new(v.clone(), 0)
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "non-finite f64 in Dyadic::from_f64");
        if v == 0.0 {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1i64 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (m, e) = if raw_exp == 0 {
            (frac as i64, -1074)
        } else {
            ((frac | (1u64 << 52)) as i64, raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(sign * m), e)
    }

    /// Power of two `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: k,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Smallest `e` with `|self| < 2^e`; `i64::MIN` for zero.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, mode: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = (bits - prec as u64) as usize;
        Dyadic::new(shift_round(&self.mant, shift, mode), self.exp + shift as i64)
    }

    /// Round to an absolute grid `2^grid_exp`.
    pub fn round_abs(&self, grid_exp: i64, mode: Round) -> Self {
        if self.is_zero() || self.exp >= grid_exp {
            return self.clone();
        }
        let shift = (grid_exp - self.exp) as usize;
        Dyadic::new(shift_round(&self.mant, shift, mode), grid_exp)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Nearest-ish conversion (within one ulp); saturates to +-inf / 0.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Nearest);
        let m = r.mant.to_i64().unwrap() as f64;
        let e = r.exp;
        if e > 2000 {
            return if m > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -2200 {
            return 0.0;
        }
        let h = (e / 2) as i32;
        m * 2f64.powi(h) * 2f64.powi(e as i32 - h)
    }

    /// Rounded quotient of rationals.
    pub fn from_rational(q: &Rational, prec: u32, mode: Round) -> Self {
        if q.numer().is_zero() {
            return Dyadic::zero();
        }
        let num = q.numer();
        let den = q.denom();
        if den.is_one() {
            return Dyadic::new(num.clone(), 0).round(prec, mode);
        }
        let shift = prec as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let scaled = if shift >= 0 {
            num << shift as usize
        } else {
            num >> (-shift) as usize
        };
        // when shift < 0 the right-shift above already loses bits; fall back to exact path
        if shift < 0 {
            let (lo, hi) = floor_ceil_div(&(num.clone()), den);
            let v = match mode {
                Round::Down => lo,
                Round::Up => hi,
                Round::Nearest => lo,
            };
            return Dyadic::new(v, 0).round(prec, mode);
        }
        let (lo, hi) = floor_ceil_div(&scaled, den);
        let m = match mode {
            Round::Down => lo,
            Round::Up => hi,
            Round::Nearest => {
                let twice = &scaled * 2;
                let (l2, _) = floor_ceil_div(&(twice + den), &(den * 2));
                l2
            }
        };
        Dyadic::new(m, -shift).round(prec, mode)
    }

    /// Quotient rounded to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, mode: Round) -> Self {
        assert!(!other.is_zero(), "Dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = prec as i64 + other.mant.bits() as i64 - self.mant.bits() as i64 + 2;
        let shift = shift.max(0);
        let neg = self.is_negative() != other.is_negative();
        let num = self.mant.abs() << shift as usize;
        let den = other.mant.abs();
        let (lo, hi) = floor_ceil_div(&num, &den);
        let m = match (mode, neg) {
            (Round::Down, false) | (Round::Up, true) | (Round::Nearest, _) => lo,
            (Round::Up, false) | (Round::Down, true) => hi,
        };
        let m = if neg { -m } else { m };
        Dyadic::new(m, self.exp - shift - other.exp).round(prec, mode)
    }

    /// Square root of a nonnegative dyadic, rounded as requested (never Nearest-specific).
    pub fn sqrt(&self, prec: u32, mode: Round) -> Self {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // make the exponent even and leave at least 2*prec+2 bits in the mantissa
        let mut shift = (2 * prec as i64 + 4 - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let e = self.exp - shift;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let root = match mode {
            Round::Up if !exact => s + 1,
            _ => s,
        };
        Dyadic::new(root, e / 2).round(prec, mode)
    }

    /// Enclosure of the natural logarithm of a positive dyadic as `(lo, hi)` in f64.
    pub fn ln_bounds(&self) -> (f64, f64) {
        assert!(self.is_positive(), "ln of nonpositive dyadic");
        if self.mant.is_one() && self.exp == 0 {
            return (0.0, 0.0);
        }
        let bits = self.mant.bits() as i64;
        let keep = bits.min(60);
        let top = (&self.mant >> (bits - keep) as usize).to_u64().unwrap() as f64;
        // self ≈ m · 2^e2 with m in [1, 2); scaling by a power of two is exact, so the only
        // errors are the u64 -> f64 rounding, ln m, the product e2 · ln 2 and the final sum
        let m = top / 2f64.powi(keep as i32 - 1);
        let e2 = self.exp + bits - 1;
        let lm = m.ln();
        let le = (e2 as f64) * std::f64::consts::LN_2;
        let v = lm + le;
        let trunc = if bits > keep { 2f64.powi(-(keep as i32) + 2) } else { 0.0 };
        let slack = 4.0 * f64::EPSILON * (1.0 + lm.abs() + le.abs() + v.abs()) + trunc;
        (v - slack, v + slack)
    }
}

fn floor_ceil_div(num: &BigInt, den: &BigInt) -> (BigInt, BigInt) {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        (q.clone(), q)
    } else {
        let c = &q + 1;
        (q, c)
    }
}

fn shift_round(m: &BigInt, shift: usize, mode: Round) -> BigInt {
    let floor = m >> shift; // arithmetic shift floors for negatives
    let back = &floor << shift;
    if &back == m {
        return floor;
    }
    match mode {
        Round::Down => floor,
        Round::Up => floor + 1,
        Round::Nearest => {
            let rem = m - back;
            let half = BigInt::one() << (shift - 1);
            if rem >= half {
                floor + 1
            } else {
                floor
            }
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        if sa != sb {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(sa).cmp(&rank(sb));
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> std::ops::Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &o.mant << (o.exp - e) as usize;
        Dyadic::new(a + b, e)
    }
}

impl<'a> std::ops::Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, o: &Dyadic) -> Dyadic {
        self + &(-o)
    }
}

impl<'a> std::ops::Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &o.mant,
            exp: self.exp + o.exp,
        }
    }
}

impl std::ops::Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Precision used for radii; radii only need a few significant bits.
const RAD_PREC: u32 = 30;

/// Complex ball with dyadic center and an upper-bound radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
}

impl CBall {
    pub fn exact(re: Dyadic, im: Dyadic) -> Self {
        CBall {
            re,
            im,
            rad: Dyadic::zero(),
        }
    }

    pub fn zero() -> Self {
        CBall::exact(Dyadic::zero(), Dyadic::zero())
    }

    pub fn one() -> Self {
        CBall::exact(Dyadic::one(), Dyadic::zero())
    }

    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic) -> Self {
        CBall {
            re,
            im,
            rad: rad.round(RAD_PREC, Round::Up),
        }
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let c = Dyadic::from_rational(q, prec, Round::Nearest);
        let err = (q - c.to_rational()).abs();
        let rad = if err.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::from_rational(&err, RAD_PREC, Round::Up)
        };
        CBall {
            re: c,
            im: Dyadic::zero(),
            rad,
        }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CBall::exact(Dyadic::from_f64(re), Dyadic::from_f64(im))
    }

    pub fn with_radius(&self, rad: Dyadic) -> Self {
        CBall::new(self.re.clone(), self.im.clone(), rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn center(&self) -> CBall {
        CBall::exact(self.re.clone(), self.im.clone())
    }

    pub fn conj(&self) -> Self {
        CBall {
            re: self.re.clone(),
            im: -&self.im,
            rad: self.rad.clone(),
        }
    }

    fn rounded(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let r2 = re.round(prec, Round::Nearest);
        let i2 = im.round(prec, Round::Nearest);
        let err = &(&re - &r2).abs() + &(&im - &i2).abs();
        CBall {
            re: r2,
            im: i2,
            rad: (&rad + &err).round(RAD_PREC, Round::Up),
        }
    }

    pub fn add(&self, o: &CBall, prec: u32) -> CBall {
        CBall::rounded(&self.re + &o.re, &self.im + &o.im, &self.rad + &o.rad, prec)
    }

    pub fn sub(&self, o: &CBall, prec: u32) -> CBall {
        CBall::rounded(&self.re - &o.re, &self.im - &o.im, &self.rad + &o.rad, prec)
    }

    pub fn neg(&self) -> CBall {
        CBall {
            re: -&self.re,
            im: -&self.im,
            rad: self.rad.clone(),
        }
    }

    /// Cheap upper bound |re| + |im| on the modulus of the center.
    fn center_abs_cheap(&self) -> Dyadic {
        &self.re.abs() + &self.im.abs()
    }

    pub fn mul(&self, o: &CBall, prec: u32) -> CBall {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            Dyadic::zero()
        } else {
            let a = self.center_abs_cheap().round(RAD_PREC, Round::Up);
            let b = o.center_abs_cheap().round(RAD_PREC, Round::Up);
            &(&(&a * &o.rad) + &(&b * &self.rad)) + &(&self.rad * &o.rad)
        };
        CBall::rounded(re, im, rad, prec)
    }

    pub fn scale_rational(&self, q: &Rational, prec: u32) -> CBall {
        self.mul(&CBall::from_rational(q, prec), prec)
    }

    pub fn sqr(&self, prec: u32) -> CBall {
        self.mul(self, prec)
    }

    /// Squared modulus of the center (exact).
    pub fn center_norm_sqr(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Upper bound for every |z| in the ball.
    pub fn abs_upper(&self) -> Dyadic {
        let c = self.center_norm_sqr().sqrt(RAD_PREC + 4, Round::Up);
        (&c + &self.rad).round(RAD_PREC + 4, Round::Up)
    }

    /// Lower bound for every |z| in the ball (0 if the ball may contain 0).
    pub fn abs_lower(&self) -> Dyadic {
        let c = self.center_norm_sqr().sqrt(RAD_PREC + 4, Round::Down);
        let v = &c - &self.rad;
        if v.is_negative() {
            Dyadic::zero()
        } else {
            v.round(RAD_PREC + 4, Round::Down)
        }
    }

    /// Upper bound for |z| at a caller-chosen precision.
    pub fn abs_upper_prec(&self, prec: u32) -> Dyadic {
        let c = self.center_norm_sqr().sqrt(prec, Round::Up);
        (&c + &self.rad).round(prec, Round::Up)
    }

    /// Lower bound for |z| at a caller-chosen precision.
    pub fn abs_lower_prec(&self, prec: u32) -> Dyadic {
        let c = self.center_norm_sqr().sqrt(prec, Round::Down);
        let v = &c - &self.rad;
        if v.is_negative() {
            Dyadic::zero()
        } else {
            v.round(prec, Round::Down)
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    /// Reciprocal; `None` if the ball may contain zero.
    pub fn recip(&self, prec: u32) -> Option<CBall> {
        let lo = self.abs_lower_prec(prec.min(64).max(RAD_PREC));
        if lo.is_zero() {
            return None;
        }
        let n = self.center_norm_sqr();
        let re = self.re.div(&n, prec + 4, Round::Nearest);
        let im = (-&self.im).div(&n, prec + 4, Round::Nearest);
        // error of the rounded center: |re_err| + |im_err| bounded by 2 ulps each
        let ulp = |x: &Dyadic| -> Dyadic {
            if x.is_zero() {
                Dyadic::zero()
            } else {
                Dyadic::pow2(x.magnitude() - prec as i64 - 2)
            }
        };
        let center_err = &ulp(&re) + &ulp(&im);
        // |1/z - 1/c| <= r / (|c| (|c| - r))
        let rad = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            let cabs = self.center_norm_sqr().sqrt(RAD_PREC + 4, Round::Down);
            let denom = (&cabs * &lo).round(RAD_PREC + 4, Round::Down);
            self.rad.div(&denom, RAD_PREC + 4, Round::Up)
        };
        Some(CBall::rounded(re, im, &rad + &center_err.mul_pow2(1), prec))
    }

    pub fn div(&self, o: &CBall, prec: u32) -> Option<CBall> {
        o.recip(prec).map(|r| self.mul(&r, prec))
    }

    pub fn pow(&self, mut e: u32, prec: u32) -> CBall {
        let mut base = self.clone();
        let mut acc = CBall::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    /// True if the two balls certainly do not intersect.
    pub fn disjoint(&self, o: &CBall) -> bool {
        let d = CBall::exact(&self.re - &o.re, &self.im - &o.im);
        let dist = d.center_norm_sqr().sqrt(RAD_PREC + 4, Round::Down);
        dist > &self.rad + &o.rad
    }

    /// True if the balls may intersect.
    pub fn overlaps(&self, o: &CBall) -> bool {
        !self.disjoint(o)
    }

    /// True if `o` lies entirely inside `self`.
    pub fn contains(&self, o: &CBall) -> bool {
        let d = CBall::exact(&self.re - &o.re, &self.im - &o.im);
        let dist = d.center_norm_sqr().sqrt(RAD_PREC + 4, Round::Up);
        &dist + &o.rad <= self.rad
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    /// Real ball: does the ball's imaginary extent include the real axis only through its radius?
    pub fn may_be_real(&self) -> bool {
        self.im.abs() <= self.rad
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} + {}i +/- {}]",
            self.re.to_f64(),
            self.im.to_f64(),
            self.rad.to_f64()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn ln_bounds_long_mantissa() {
        // ln of the f64 nearest the largest-modulus negative root of x^3 - 3x - 1
        let (lo, hi) = Dyadic::from_f64(1.532088886237956).ln_bounds();
        assert!(lo <= 0.4266320893728888 && hi >= 0.4266320893728890, "({lo}, {hi})");
        let (lo, hi) = Dyadic::new(BigInt::from((1i64 << 61) - 1), -61).ln_bounds();
        assert!(lo <= -4.3368086899420177e-19 && hi >= -4.3368086899420177e-19 && hi - lo < 1e-14);
    }

    #[test]
    fn rounding_directions() {
        let x = Dyadic::from_rational(&q(1, 3), 20, Round::Down);
        let y = Dyadic::from_rational(&q(1, 3), 20, Round::Up);
        assert!(x.to_rational() < q(1, 3));
        assert!(y.to_rational() > q(1, 3));
        assert!(&y - &x <= Dyadic::pow2(-20));
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(100, Round::Down);
        let hi = two.sqrt(100, Round::Up);
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert!((&hi - &lo) <= Dyadic::pow2(-95));
    }

    #[test]
    fn division_encloses() {
        let a = Dyadic::from_int(-7);
        let b = Dyadic::from_int(3);
        let lo = a.div(&b, 64, Round::Down);
        let hi = a.div(&b, 64, Round::Up);
        assert!(lo.to_rational() <= q(-7, 3));
        assert!(hi.to_rational() >= q(-7, 3));
    }

    #[test]
    fn ball_recip_contains_truth() {
        let z = CBall::new(Dyadic::from_int(3), Dyadic::from_int(4), Dyadic::pow2(-10));
        let r = z.recip(128).unwrap();
        // 1/(3+4i) = (3-4i)/25
        let truth = CBall::exact(
            Dyadic::from_rational(&q(3, 25), 200, Round::Nearest),
            Dyadic::from_rational(&q(-4, 25), 200, Round::Nearest),
        );
        assert!(r.overlaps(&truth));
        assert!(r.rad < Dyadic::pow2(-12));
    }

    #[test]
    fn ln_bounds_bracket() {
        let (lo, hi) = Dyadic::from_int(1000).ln_bounds();
        assert!(lo <= 1000f64.ln() && 1000f64.ln() <= hi);
        let huge = Dyadic::pow2(100_000);
        let (lo, hi) = huge.ln_bounds();
        let t = 100_000.0 * std::f64::consts::LN_2;
        assert!(lo <= t && t <= hi);
    }

    #[test]
    fn f64_roundtrip() {
        for v in [0.5, -3.25, 1e-300, 12345.678] {
            assert_eq!(Dyadic::from_f64(v).to_f64(), v);
        }
    }
}
