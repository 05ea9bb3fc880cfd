//! Certified isolation of the complex roots of squarefree integer polynomials.
//!
//! Approximations come from Aberth iteration (first in f64, then at the working
//! precision). They are certified with the Weierstrass correction bound: with
//! `W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`, the discs `D(z_i, n |W_i|)` cover all
//! roots and a disc disjoint from the others contains exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;

use super::algebraic::AlgebraicNumber;
use super::dyadic::{CBall, Dyadic, Round};
use super::factor::factor;
use super::poly::Poly;
use super::Rational;
use crate::error::{Error, Result};

/// Hard ceiling for automatic precision doubling.
pub const MAX_PRECISION_BITS: u32 = 1 << 14;

/// Certified isolating discs for all roots of a squarefree integer polynomial.
#[derive(Clone, Debug)]
pub struct RootBalls {
    pub balls: Vec<CBall>,
    /// Lower bound on the distance between distinct roots.
    pub separation: Dyadic,
    /// `conj[i]` is the index of the complex conjugate of root `i` (`i` itself if real).
    pub conj: Vec<usize>,
    pub precision: u32,
}

impl RootBalls {
    pub fn is_real(&self, i: usize) -> bool {
        self.conj[i] == i
    }
}

fn eval_f64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn initial_guesses(coeffs: &[BigInt]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let maxbits = coeffs.iter().map(|c| c.bits()).max().unwrap_or(0) as i64;
    let shift = (maxbits - 900).max(0);
    let c: Vec<Complex64> = coeffs
        .iter()
        .map(|a| Complex64::new(Dyadic::from_bigint(a).mul_pow2(-shift).to_f64(), 0.0))
        .collect();
    let lc = c[n].re;
    // Fujiwara bound
    let mut r: f64 = 0.0;
    for (i, a) in c.iter().enumerate().take(n) {
        let q = (a.re / lc).abs();
        if q > 0.0 {
            let k = (n - i) as f64;
            let t = if i == 0 { (q / 2.0).powf(1.0 / k) } else { q.powf(1.0 / k) };
            r = r.max(2.0 * t);
        }
    }
    if !r.is_finite() || r == 0.0 {
        r = 1.0;
    }
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(r * 0.9, t)
        })
        .collect();
    for _ in 0..400 {
        let mut maxw: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_f64(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                maxw = maxw.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if maxw < 1e-15 {
            break;
        }
    }
    z.into_iter()
        .map(|w| if w.is_finite() { w } else { Complex64::new(0.5, 0.5) })
        .collect()
}

fn ball_eval(coeffs: &[CBall], z: &CBall, prec: u32) -> CBall {
    let mut acc = CBall::zero();
    for a in coeffs.iter().rev() {
        acc = acc.mul(z, prec).add(a, prec);
    }
    acc
}

fn ball_eval_with_derivative(coeffs: &[CBall], z: &CBall, prec: u32) -> (CBall, CBall) {
    let mut p = CBall::zero();
    let mut dp = CBall::zero();
    for a in coeffs.iter().rev() {
        dp = dp.mul(z, prec).add(&p, prec);
        p = p.mul(z, prec).add(a, prec);
    }
    (p, dp)
}

/// One Aberth sweep at precision `prec`; returns the largest relative correction as log2.
fn aberth_step(coeffs: &[CBall], z: &mut [CBall], prec: u32) -> i64 {
    let n = z.len();
    let mut worst = i64::MIN;
    let old = z.to_vec();
    for i in 0..n {
        let (p, dp) = ball_eval_with_derivative(coeffs, &old[i], prec);
        let p = p.center();
        if p.re.is_zero() && p.im.is_zero() {
            continue;
        }
        let Some(ratio) = p.div(&dp.center(), prec) else {
            continue;
        };
        let mut s = CBall::zero();
        for j in 0..n {
            if j != i {
                if let Some(r) = old[i].sub(&old[j], prec).center().recip(prec) {
                    s = s.add(&r.center(), prec);
                }
            }
        }
        let denom = CBall::one().sub(&ratio.mul(&s, prec).center(), prec).center();
        let Some(w) = ratio.div(&denom, prec) else {
            continue;
        };
        let w = w.center();
        let zn = old[i].sub(&w, prec).center();
        let mag = w.re.magnitude().max(w.im.magnitude());
        let zmag = zn.re.magnitude().max(zn.im.magnitude()).max(0);
        if mag != i64::MIN {
            worst = worst.max(mag - zmag);
        }
        z[i] = zn;
    }
    worst
}

/// Attempt to certify; returns radii and separation when successful.
fn certify(coeffs: &[CBall], z: &[CBall], prec: u32) -> Option<(Vec<Dyadic>, Dyadic)> {
    let n = z.len();
    let lc = &coeffs[n];
    let nd = Dyadic::from_int(n as i64);
    let mut rad = Vec::with_capacity(n);
    for i in 0..n {
        let p = ball_eval(coeffs, &z[i], prec);
        let mut den = lc.clone();
        for j in 0..n {
            if j != i {
                den = den.mul(&z[i].sub(&z[j], prec), prec);
            }
        }
        let w = p.div(&den, prec)?;
        rad.push((&nd * &w.abs_upper()).round(34, Round::Up));
    }
    let mut sep: Option<Dyadic> = None;
    for i in 0..n {
        for j in i + 1..n {
            let d = z[i].sub(&z[j], prec);
            let dist = d.abs_lower();
            let gap = &(&dist - &rad[i]) - &rad[j];
            if !gap.is_positive() {
                return None;
            }
            sep = Some(match sep {
                Some(s) if s <= gap => s,
                _ => gap,
            });
        }
    }
    let sep = sep.unwrap_or_else(|| Dyadic::from_int(1));
    // radius must be well below the separation so a disc pins down a unique root
    let quarter = sep.mul_pow2(-2);
    if rad.iter().any(|r| r >= &quarter) {
        return None;
    }
    Some((rad, sep))
}

fn cmp_balls(a: &CBall, b: &CBall) -> std::cmp::Ordering {
    let ar = a.im.is_zero();
    let br = b.im.is_zero();
    br.cmp(&ar)
        .then_with(|| a.re.cmp(&b.re))
        .then_with(|| a.im.cmp(&b.im))
}

/// Isolate all roots of a squarefree integer polynomial (coefficients low degree first).
pub fn isolate_squarefree(coeffs: &[BigInt], prec: u32) -> Result<RootBalls> {
    let n = coeffs.len().checked_sub(1).ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(RootBalls {
            balls: vec![],
            separation: Dyadic::one(),
            conj: vec![],
            precision: prec,
        });
    }
    if n == 1 {
        let q = Rational::new(-coeffs[0].clone(), coeffs[1].clone());
        return Ok(RootBalls {
            balls: vec![CBall::from_rational(&q, prec)],
            separation: Dyadic::one(),
            conj: vec![0],
            precision: prec,
        });
    }
    let mut prec = prec.max(64);
    let guesses = initial_guesses(coeffs);
    let mut z: Vec<CBall> = guesses.iter().map(|w| CBall::from_f64(w.re, w.im)).collect();
    loop {
        let wp = prec + 16;
        let cb: Vec<CBall> = coeffs
            .iter()
            .map(|c| CBall::exact(Dyadic::from_bigint(c), Dyadic::zero()))
            .collect();
        for it in 0..96 {
            let worst = aberth_step(&cb, &mut z, wp);
            let converged = worst < -(prec as i64) + 4;
            if converged || it % 12 == 11 {
                if let Some(res) = try_finish(&cb, &z, wp, prec) {
                    return Ok(res);
                }
            }
        }
        if prec >= MAX_PRECISION_BITS {
            return Err(Error::PrecisionExhausted {
                bits: prec,
                context: "root isolation did not certify".into(),
            });
        }
        prec *= 2;
    }
}

fn try_finish(cb: &[CBall], z: &[CBall], wp: u32, prec: u32) -> Option<RootBalls> {
    let n = z.len();
    let (rad, sep) = certify(cb, z, wp)?;
    let mut balls: Vec<CBall> = z
        .iter()
        .zip(&rad)
        .map(|(c, r)| CBall::new(c.re.clone(), c.im.clone(), r.clone()))
        .collect();
    // conjugate pairing
    let mut conj = vec![usize::MAX; n];
    for i in 0..n {
        let c = balls[i].conj();
        let hits: Vec<usize> = (0..n).filter(|&j| balls[j].overlaps(&c)).collect();
        if hits.len() != 1 {
            return None;
        }
        conj[i] = hits[0];
    }
    for i in 0..n {
        if conj[conj[i]] != i {
            return None;
        }
    }
    for i in 0..n {
        let k = conj[i];
        if k == i {
            balls[i].im = Dyadic::zero();
        } else if balls[i].im.is_positive() {
            let r = if balls[i].rad >= balls[k].rad {
                balls[i].rad.clone()
            } else {
                balls[k].rad.clone()
            };
            balls[i].rad = r;
            balls[k] = balls[i].conj();
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_balls(&balls[a], &balls[b]));
    let mut pos = vec![0; n];
    for (p, &o) in order.iter().enumerate() {
        pos[o] = p;
    }
    let sorted: Vec<CBall> = order.iter().map(|&o| balls[o].clone()).collect();
    let conj_sorted: Vec<usize> = order.iter().map(|&o| pos[conj[o]]).collect();
    Some(RootBalls {
        balls: sorted,
        separation: sep,
        conj: conj_sorted,
        precision: prec,
    })
}

/// All complex roots of `p`, with multiplicity, each carrying its irreducible factor as
/// minimal polynomial.
pub fn isolate_roots(p: &Poly, precision_bits: u32) -> Result<Vec<AlgebraicNumber>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for f in factor(p, precision_bits)? {
        for a in f.roots() {
            for _ in 0..f.multiplicity {
                out.push(a.clone());
            }
        }
    }
    Ok(out)
}

/// Product `lc * prod (x - r_i)` as ball coefficients (low degree first).
pub fn ball_poly_from_roots(lc: &BigInt, roots: &[&CBall], prec: u32) -> Vec<CBall> {
    let mut c = vec![CBall::exact(Dyadic::from_bigint(lc), Dyadic::zero())];
    for r in roots {
        let mut next = vec![CBall::zero(); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a, prec);
            next[i] = next[i].sub(&a.mul(r, prec), prec);
        }
        c = next;
    }
    c
}

/// The integer contained in a real ball, if exactly one is.
pub fn unique_integer(b: &CBall) -> Option<BigInt> {
    // the imaginary extent must allow zero
    if b.im.abs() > b.rad {
        return None;
    }
    let lo = (&b.re - &b.rad).to_rational().ceil().to_integer();
    let hi = (&b.re + &b.rad).to_rational().floor().to_integer();
    if lo == hi {
        Some(lo)
    } else if lo > hi {
        None
    } else {
        // ambiguous: radius too large
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sqrt2() {
        let r = isolate_squarefree(&b(&[-2, 0, 1]), 128).unwrap();
        assert_eq!(r.balls.len(), 2);
        assert!(r.is_real(0) && r.is_real(1));
        let v = r.balls[1].re_f64();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        assert!(r.balls[1].rad < Dyadic::pow2(-100));
    }

    #[test]
    fn complex_pair() {
        let r = isolate_squarefree(&b(&[1, 0, 1]), 128).unwrap();
        assert_eq!(r.conj, vec![1, 0]);
        assert!((r.balls[0].im_f64().abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wilkinson_like() {
        // (x-1)(x-2)...(x-10)
        let mut p = Poly::one();
        for k in 1..=10 {
            p = &p * &Poly::from_ints(&[-k, 1]);
        }
        let coeffs = p.primitive_int();
        let r = isolate_squarefree(&coeffs, 256).unwrap();
        for (k, ball) in r.balls.iter().enumerate() {
            assert_eq!(unique_integer(ball), Some(BigInt::from(k as i64 + 1)));
        }
    }

    #[test]
    fn reconstruct_product() {
        let coeffs = b(&[1, -1, 2, 0, 1]);
        let r = isolate_squarefree(&coeffs, 200).unwrap();
        let refs: Vec<&CBall> = r.balls.iter().collect();
        let prod = ball_poly_from_roots(&BigInt::one(), &refs, 200);
        for (c, e) in prod.iter().zip(&coeffs) {
            assert_eq!(unique_integer(c).as_ref(), Some(e));
        }
        let _ = BigInt::zero();
    }
}
