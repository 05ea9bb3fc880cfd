//! Algebraic numbers as (minimal polynomial, isolating disc) pairs, and points of P^1.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::{CBall, Dyadic};
use super::factor::{factor, Factor};
use super::memo::Memo;
use super::poly::Poly;
use super::resultant::parametric_resultant;
use super::roots::{isolate_squarefree, RootBalls, MAX_PRECISION_BITS};
use super::{default_precision, Rational};
use crate::error::{Error, Result};

/// An algebraic number: monic irreducible minimal polynomial plus a disc that contains
/// exactly one of its roots. The disc radius stays below a quarter of a certified lower
/// bound on the root separation, so the designated root never changes under refinement.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    minpoly: Poly,
    ball: CBall,
    separation: Dyadic,
    precision: u32,
}

impl AlgebraicNumber {
    pub fn from_rational(q: &Rational) -> Self {
        let prec = default_precision();
        AlgebraicNumber {
            minpoly: Poly::linear_root(q),
            ball: CBall::from_rational(q, prec),
            separation: Dyadic::one(),
            precision: prec,
        }
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicNumber::from_rational(&Rational::from_integer(n.into()))
    }

    /// Assemble from certified parts; callers guarantee the invariants.
    pub fn from_parts(minpoly: Poly, ball: CBall, separation: Dyadic, precision: u32) -> Self {
        debug_assert!(minpoly.is_monic());
        if minpoly.deg() == 1 {
            return AlgebraicNumber::from_rational(&-minpoly.coeff(0));
        }
        AlgebraicNumber {
            minpoly,
            ball,
            separation,
            precision,
        }
    }

    /// The root of `p` closest to `re + i*im`. `p` need not be irreducible.
    pub fn nearest_root(p: &Poly, re: f64, im: f64) -> Result<Self> {
        let target = CBall::from_f64(re, im);
        let mut best: Option<(f64, AlgebraicNumber)> = None;
        for f in factor(p, default_precision())? {
            for a in f.roots() {
                let d = a.ball.sub(&target, 64).abs_upper().to_f64();
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, a));
                }
            }
        }
        best.map(|x| x.1).ok_or(Error::ZeroPolynomial)
    }

    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    /// Minimal polynomial with coprime integer coefficients and positive leading coefficient.
    pub fn minpoly_primitive(&self) -> Poly {
        self.minpoly.primitive()
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn ball(&self) -> &CBall {
        &self.ball
    }

    pub fn separation(&self) -> &Dyadic {
        &self.separation
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.minpoly.deg() == 1).then(|| -self.minpoly.coeff(0))
    }

    pub fn is_rational(&self) -> bool {
        self.minpoly.deg() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.ball.im.is_zero()
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.ball.re_f64(), self.ball.im_f64())
    }

    pub fn radius(&self) -> f64 {
        self.ball.rad.to_f64()
    }

    /// Same root at (at least) `prec` bits.
    pub fn refine(&self, prec: u32) -> Result<AlgebraicNumber> {
        if let Some(q) = self.as_rational() {
            let mut a = AlgebraicNumber::from_rational(&q);
            a.ball = CBall::from_rational(&q, prec);
            a.precision = prec;
            return Ok(a);
        }
        if prec <= self.precision {
            return Ok(self.clone());
        }
        let rb = isolate_squarefree(&self.minpoly.primitive_int(), prec)?;
        let hits: Vec<&CBall> = rb.balls.iter().filter(|b| b.overlaps(&self.ball)).collect();
        match hits.as_slice() {
            [b] => Ok(AlgebraicNumber {
                minpoly: self.minpoly.clone(),
                ball: (*b).clone(),
                separation: rb.separation.clone(),
                precision: rb.precision,
            }),
            _ => Err(Error::PrecisionExhausted {
                bits: prec,
                context: "refinement lost the designated root".into(),
            }),
        }
    }

    /// All roots of the minimal polynomial (this number included).
    pub fn conjugates(&self) -> Result<Vec<AlgebraicNumber>> {
        if self.is_rational() {
            return Ok(vec![self.clone()]);
        }
        static ISOLATED: Memo<(Poly, u32), RootBalls> = Memo::new();
        let rb = ISOLATED.get_or_try(&(self.minpoly.clone(), self.precision), || {
            isolate_squarefree(&self.minpoly.primitive_int(), self.precision)
        })?;
        Ok(rb
            .balls
            .iter()
            .map(|b| AlgebraicNumber {
                minpoly: self.minpoly.clone(),
                ball: b.clone(),
                separation: rb.separation.clone(),
                precision: rb.precision,
            })
            .collect())
    }

    pub fn neg(&self) -> AlgebraicNumber {
        if let Some(q) = self.as_rational() {
            return AlgebraicNumber::from_rational(&-q);
        }
        let mut m = self.minpoly.negate_var();
        if !m.is_monic() {
            m = m.monic();
        }
        AlgebraicNumber {
            minpoly: m,
            ball: self.ball.neg(),
            separation: self.separation.clone(),
            precision: self.precision,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<AlgebraicNumber> {
        if let Some(q) = self.as_rational() {
            return (!q.is_zero()).then(|| AlgebraicNumber::from_rational(&q.recip()));
        }
        // distinct roots stay distinct; recompute discs for the reversed polynomial
        let rev = self.minpoly.reverse().monic();
        let v = self.ball.recip(self.precision)?;
        select_root(&rev, |prec| {
            let a = self.refine(prec).ok()?;
            a.ball.recip(prec)
        }, Some(v), self.precision)
        .ok()
    }

    pub fn add(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        binary(self, o, BinOp::Add)
    }

    pub fn sub(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        binary(self, &o.neg(), BinOp::Add)
    }

    pub fn mul(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        binary(self, o, BinOp::Mul)
    }

    pub fn div(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        let inv = o
            .inv()
            .ok_or_else(|| Error::invalid("division by zero algebraic number"))?;
        self.mul(&inv)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i32) -> Result<AlgebraicNumber> {
        let base = if e < 0 {
            self.inv()
                .ok_or_else(|| Error::invalid("zero to a negative power"))?
        } else {
            self.clone()
        };
        algebraic_eval(&Poly::monomial(Rational::one(), e.unsigned_abs() as usize), &base)
    }

    /// Ball enclosure of `p(self)` at the given precision.
    pub fn eval_ball(&self, p: &Poly, prec: u32) -> Result<CBall> {
        let a = self.refine(prec)?;
        Ok(p.eval_ball(&a.ball, prec))
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Mul,
}

fn binary(a: &AlgebraicNumber, b: &AlgebraicNumber, op: BinOp) -> Result<AlgebraicNumber> {
    // rational operands reduce to evaluating a linear polynomial
    if let Some(q) = b.as_rational() {
        let lin = match op {
            BinOp::Add => Poly::from_coeffs(vec![q, Rational::one()]),
            BinOp::Mul => Poly::from_coeffs(vec![Rational::zero(), q]),
        };
        return algebraic_eval(&lin, a);
    }
    if a.is_rational() {
        return binary(b, a, op);
    }
    let ma = a.minpoly.clone();
    let mb = b.minpoly.clone();
    let da = ma.deg();
    let db = mb.deg();
    let r = match op {
        BinOp::Add => parametric_resultant(
            |t| {
                // m_b(t - y)
                let shifted = mb.compose(&Poly::from_coeffs(vec![t.clone(), -Rational::one()]));
                (ma.clone(), shifted)
            },
            da * db,
        ),
        BinOp::Mul => parametric_resultant(
            |t| {
                // y^db m_b(t / y) = sum_i b_i t^i y^(db - i)
                let mut c = vec![Rational::zero(); db + 1];
                let mut tp = Rational::one();
                for i in 0..=db {
                    c[db - i] = mb.coeff(i) * &tp;
                    tp *= t;
                }
                (ma.clone(), Poly::from_coeffs(c))
            },
            da * db,
        ),
    };
    let value = |prec: u32| -> Option<CBall> {
        let x = a.refine(prec).ok()?;
        let y = b.refine(prec).ok()?;
        Some(match op {
            BinOp::Add => x.ball.add(&y.ball, prec),
            BinOp::Mul => x.ball.mul(&y.ball, prec),
        })
    };
    select_root(&r, value, None, a.precision.max(b.precision))
}

/// Pick the unique root of `p` contained in the enclosure `value(prec)`, refining as needed.
fn select_root<F>(p: &Poly, value: F, first: Option<CBall>, prec0: u32) -> Result<AlgebraicNumber>
where
    F: Fn(u32) -> Option<CBall>,
{
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut prec = prec0.max(64);
    let mut v = match first {
        Some(v) => v,
        None => value(prec).ok_or_else(|| Error::invalid("enclosure evaluation failed"))?,
    };
    let mut factors = factor_memo(p, prec)?;
    loop {
        let mut hits = Vec::new();
        for f in &factors {
            for b in &f.balls {
                if b.overlaps(&v) {
                    hits.push((f, b));
                }
            }
        }
        if hits.len() == 1 {
            let (f, b) = hits[0];
            return Ok(AlgebraicNumber::from_parts(
                f.poly.clone(),
                b.clone(),
                f.separation.clone(),
                f.precision,
            ));
        }
        if prec >= MAX_PRECISION_BITS {
            return Err(Error::PrecisionExhausted {
                bits: prec,
                context: format!("{} candidate roots overlap the enclosure", hits.len()),
            });
        }
        prec *= 2;
        v = value(prec).ok_or_else(|| Error::invalid("enclosure evaluation failed"))?;
        factors = factor_memo(p, prec)?;
    }
}

fn factor_memo(p: &Poly, prec: u32) -> Result<Vec<Factor>> {
    static FACTORS: Memo<(Poly, u32), Vec<Factor>> = Memo::new();
    FACTORS.get_or_try(&(p.clone(), prec), || factor(p, prec))
}

/// Exact value `p(a)` as an algebraic number. The minimal polynomial comes from
/// `Res_y(m(y), x - r(y))` with `r = p mod m`.
pub fn algebraic_eval(p: &Poly, a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if let Some(q) = a.as_rational() {
        return Ok(AlgebraicNumber::from_rational(&p.eval(&q)));
    }
    let m = a.minpoly();
    let r = p.rem(m);
    if r.deg() == 0 {
        return Ok(AlgebraicNumber::from_rational(&r.coeff(0)));
    }
    if r == Poly::x() {
        return Ok(a.clone());
    }
    static RESULTANTS: Memo<(Poly, Poly), Poly> = Memo::new();
    let res = RESULTANTS.get_or_try(&(m.clone(), r.clone()), || {
        Ok::<_, Error>(parametric_resultant(
            |t| (m.clone(), &Poly::constant(t.clone()) - &r),
            m.deg(),
        ))
    })?;
    let value = |prec: u32| -> Option<CBall> {
        let x = a.refine(prec).ok()?;
        Some(r.eval_ball(&x.ball, prec))
    };
    select_root(&res, value, None, a.precision)
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.minpoly == o.minpoly && self.ball.overlaps(&o.ball)
    }
}

impl Eq for AlgebraicNumber {}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let (re, im) = self.approx();
        if im == 0.0 {
            write!(f, "root of {} near {:.12}", self.minpoly, re)
        } else {
            write!(
                f,
                "root of {} near {:.12} {} {:.12}i",
                self.minpoly,
                re,
                if im < 0.0 { "-" } else { "+" },
                im.abs()
            )
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraicJson {
    minpoly: String,
    approx: [f64; 2],
    radius: f64,
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = self.approx();
        AlgebraicJson {
            minpoly: self.minpoly.to_string(),
            approx: [re, im],
            // rounding the center to f64 adds up to one ulp
            radius: self.radius() + (re.abs() + im.abs()) * f64::EPSILON,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = AlgebraicJson::deserialize(d)?;
        let p: Poly = j.minpoly.parse().map_err(serde::de::Error::custom)?;
        AlgebraicNumber::nearest_root(&p, j.approx[0], j.approx[1]).map_err(serde::de::Error::custom)
    }
}

/// A point of the projective line over the algebraic numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum P1Point {
    Finite(AlgebraicNumber),
    Infinity,
}

impl P1Point {
    pub fn rational(q: Rational) -> Self {
        P1Point::Finite(AlgebraicNumber::from_rational(&q))
    }

    pub fn int(n: i64) -> Self {
        P1Point::Finite(AlgebraicNumber::from_int(n))
    }

    pub fn finite(&self) -> Option<&AlgebraicNumber> {
        match self {
            P1Point::Finite(a) => Some(a),
            P1Point::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, P1Point::Infinity)
    }
}

impl From<AlgebraicNumber> for P1Point {
    fn from(a: AlgebraicNumber) -> Self {
        P1Point::Finite(a)
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(a) => a.fmt(f),
            P1Point::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for P1Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            P1Point::Finite(a) => a.serialize(s),
            P1Point::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for P1Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) if s == "inf" => Ok(P1Point::Infinity),
            serde_json::Value::String(s) => super::parse_rational(s)
                .map(P1Point::rational)
                .ok_or_else(|| serde::de::Error::custom(format!("bad point {s}"))),
            _ => AlgebraicNumber::deserialize(v)
                .map(P1Point::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// Read a point from text: a rational (`3/2`), `inf`, or `minpoly@re[,im]`, e.g. `x^2 - 2@1.41`.
pub fn parse_point(s: &str) -> Result<P1Point> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(P1Point::Infinity);
    }
    if let Some(q) = super::parse_rational(s) {
        return Ok(P1Point::rational(q));
    }
    if let Some((mp, at)) = s.split_once('@') {
        let p: Poly = mp.parse()?;
        let mut it = at.split(',');
        let re: f64 = it
            .next()
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::invalid(format!("bad approximation in point '{s}'")))?;
        let im: f64 = it.next().and_then(|x| x.trim().parse().ok()).unwrap_or(0.0);
        return Ok(P1Point::Finite(AlgebraicNumber::nearest_root(&p, re, im)?));
    }
    // a bare polynomial designates its largest real root, else its first root
    let p: Poly = s.parse()?;
    let roots = super::roots::isolate_roots(&p, default_precision())?;
    let best = roots
        .iter()
        .filter(|a| a.is_real())
        .max_by(|a, b| a.approx().0.total_cmp(&b.approx().0))
        .or(roots.first())
        .cloned()
        .ok_or(Error::ZeroPolynomial)?;
    Ok(P1Point::Finite(best))
}

/// Sign of a real algebraic number (`None` when not real).
pub fn real_sign(a: &AlgebraicNumber) -> Option<i8> {
    if !a.is_real() {
        return None;
    }
    if let Some(q) = a.as_rational() {
        return Some(if q.is_zero() {
            0
        } else if q.is_positive() {
            1
        } else {
            -1
        });
    }
    // irrational: the disc excludes 0 because 0 is not a root of the minpoly
    Some(if a.ball.re.is_positive() { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn root(s: &str, re: f64) -> AlgebraicNumber {
        AlgebraicNumber::nearest_root(&p(s), re, 0.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        let s2 = root("x^2 - 2", 1.4);
        let v = algebraic_eval(&p("x^2 + 1"), &s2).unwrap();
        assert_eq!(v.as_rational(), Some(rat(3, 1)));
        let z = algebraic_eval(&p("x^2"), &AlgebraicNumber::from_int(0)).unwrap();
        assert!(z.is_zero());
        let phi = root("x^2 - x - 1", 1.6);
        let v = algebraic_eval(&p("x^2 + 1"), &phi).unwrap();
        assert_eq!(v.minpoly(), &p("x^2 - 5*x + 5"));
        assert!((v.approx().0 - (1.618033988749895 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn arithmetic() {
        let a = root("x^2 - 2", 1.4);
        let b = root("x^2 - 3", 1.7);
        let s = a.add(&b).unwrap();
        assert_eq!(s.minpoly(), &p("x^4 - 10*x^2 + 1"));
        let d = a.sub(&a).unwrap();
        assert!(d.is_zero());
        let m = a.mul(&a).unwrap();
        assert_eq!(m.as_rational(), Some(rat(2, 1)));
        let q = b.div(&a).unwrap();
        assert_eq!(q.minpoly(), &p("x^2 - 3/2"));
        let i = AlgebraicNumber::nearest_root(&p("x^2 + 1"), 0.0, 1.0).unwrap();
        assert_eq!(i.mul(&i).unwrap().as_rational(), Some(rat(-1, 1)));
        assert_eq!(i.pow(4).unwrap().as_rational(), Some(rat(1, 1)));
        assert_eq!(i.pow(-1).unwrap(), i.neg());
    }

    #[test]
    fn equality_and_refinement() {
        let a = root("x^2 - 2", 1.4);
        let b = root("x^2 - 2", -1.4);
        assert_ne!(a, b);
        let a2 = a.refine(1024).unwrap();
        assert_eq!(a, a2);
        assert_ne!(a2, b);
        assert!(a2.radius() < 1e-300);
    }

    #[test]
    fn json_roundtrip() {
        let a = root("x^3 - x - 1", 1.3);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"minpoly\":\"x^3 - x - 1\""));
        let b: AlgebraicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        let pts: Vec<P1Point> = serde_json::from_str(r#"["inf", "3/2"]"#).unwrap();
        assert_eq!(pts[0], P1Point::Infinity);
        assert_eq!(pts[1], P1Point::rational(rat(3, 2)));
    }
}
