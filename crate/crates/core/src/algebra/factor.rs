//! Factorization over the rationals.
//!
//! Squarefree parts are split into irreducibles by recombining certified complex roots:
//! a subset of roots closed under conjugation gives a candidate factor whose coefficients
//! (times the leading coefficient) must be integers, and a candidate is accepted only after
//! exact division. Modular factor-degree patterns restrict which subset sizes are tried.

use num_bigint::BigInt;
use num_traits::Zero;

use super::algebraic::AlgebraicNumber;
use super::dyadic::{CBall, Dyadic};
use super::modp::possible_factor_degrees;
use super::poly::Poly;
use super::roots::{ball_poly_from_roots, isolate_squarefree, RootBalls, MAX_PRECISION_BITS};
use crate::error::{Error, Result};

/// An irreducible factor with its multiplicity and certified roots.
#[derive(Clone, Debug)]
pub struct Factor {
    /// Monic irreducible polynomial.
    pub poly: Poly,
    pub multiplicity: usize,
    pub balls: Vec<CBall>,
    pub separation: Dyadic,
    pub precision: u32,
}

impl Factor {
    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn roots(&self) -> Vec<AlgebraicNumber> {
        self.balls
            .iter()
            .map(|b| {
                AlgebraicNumber::from_parts(
                    self.poly.clone(),
                    b.clone(),
                    self.separation.clone(),
                    self.precision,
                )
            })
            .collect()
    }
}

/// Irreducible factorization of a nonzero polynomial, with certified roots per factor.
/// Constant polynomials have no factors.
pub fn factor(p: &Poly, prec: u32) -> Result<Vec<Factor>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (sq, mult) in p.squarefree_decomposition() {
        for mut f in factor_squarefree(&sq, prec)? {
            f.multiplicity = mult;
            out.push(f);
        }
    }
    out.sort_by(|a, b| {
        a.poly
            .deg()
            .cmp(&b.poly.deg())
            .then_with(|| a.poly.to_string().cmp(&b.poly.to_string()))
    });
    Ok(out)
}

/// Is `p` irreducible over the rationals?
pub fn is_irreducible(p: &Poly, prec: u32) -> Result<bool> {
    if p.deg() == 0 {
        return Ok(false);
    }
    let f = factor(p, prec)?;
    Ok(f.len() == 1 && f[0].multiplicity == 1)
}

enum Pick {
    Found(Vec<BigInt>),
    None,
    Ambiguous,
}

struct Search<'a> {
    balls: &'a [CBall],
    units: &'a [Vec<usize>],
    lc: &'a BigInt,
    target: &'a [BigInt],
    prec: u32,
}

impl Search<'_> {
    fn test(&self, chosen: &[usize]) -> Pick {
        let roots: Vec<&CBall> = chosen
            .iter()
            .flat_map(|&u| self.units[u].iter().map(|&i| &self.balls[i]))
            .collect();
        let c = ball_poly_from_roots(self.lc, &roots, self.prec);
        let mut ints = Vec::with_capacity(c.len());
        let mut ambiguous = false;
        // cheapest coefficients first: constant term, then trace
        let t = c.len() - 1;
        let order: Vec<usize> = std::iter::once(0)
            .chain(std::iter::once(t - 1))
            .chain(1..t.saturating_sub(1))
            .chain(std::iter::once(t))
            .collect();
        let mut vals = vec![BigInt::zero(); c.len()];
        for &k in &order {
            if k >= c.len() {
                continue;
            }
            match integer_in(&c[k]) {
                IntIn::One(v) => vals[k] = v,
                IntIn::NoneInside => return Pick::None,
                IntIn::Many => {
                    ambiguous = true;
                    break;
                }
            }
        }
        if ambiguous {
            return Pick::Ambiguous;
        }
        ints.extend(vals);
        let cand = Poly::from_bigints(&ints).primitive();
        let target = Poly::from_bigints(self.target);
        if target.div_exact(&cand).is_some() {
            Pick::Found(cand.primitive_int())
        } else {
            Pick::None
        }
    }

    fn find_with_units(&self, deg: usize) -> (Pick, Vec<usize>) {
        let mut chosen = Vec::new();
        let mut found = None;
        let mut ambiguous = false;
        self.find_collect(deg, 0, &mut chosen, 0, &mut found, &mut ambiguous);
        match found {
            Some((v, units)) => (Pick::Found(v), units),
            None if ambiguous => (Pick::Ambiguous, vec![]),
            None => (Pick::None, vec![]),
        }
    }

    fn find_collect(
        &self,
        deg: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        have: usize,
        found: &mut Option<(Vec<BigInt>, Vec<usize>)>,
        ambiguous: &mut bool,
    ) {
        if found.is_some() {
            return;
        }
        if have == deg {
            match self.test(chosen) {
                Pick::Found(v) => *found = Some((v, chosen.clone())),
                Pick::Ambiguous => *ambiguous = true,
                Pick::None => {}
            }
            return;
        }
        for u in start..self.units.len() {
            if found.is_some() {
                return;
            }
            let k = self.units[u].len();
            if have + k > deg {
                continue;
            }
            chosen.push(u);
            self.find_collect(deg, u + 1, chosen, have + k, found, ambiguous);
            chosen.pop();
        }
    }
}

enum IntIn {
    One(BigInt),
    NoneInside,
    Many,
}

fn integer_in(b: &CBall) -> IntIn {
    if b.im.abs() > b.rad {
        return IntIn::NoneInside;
    }
    let lo = (&b.re - &b.rad).to_rational().ceil().to_integer();
    let hi = (&b.re + &b.rad).to_rational().floor().to_integer();
    if lo == hi {
        IntIn::One(lo)
    } else if lo > hi {
        IntIn::NoneInside
    } else {
        IntIn::Many
    }
}

fn factor_squarefree(p: &Poly, prec: u32) -> Result<Vec<Factor>> {
    let mut prec = prec;
    loop {
        match try_factor_squarefree(p, prec)? {
            Some(v) => return Ok(v),
            None => {
                if prec >= MAX_PRECISION_BITS {
                    return Err(Error::PrecisionExhausted {
                        bits: prec,
                        context: "factor recombination".into(),
                    });
                }
                prec *= 2;
            }
        }
    }
}

fn make_factor(ints: &[BigInt], rb: &RootBalls, idx: &[usize], prec: u32) -> Factor {
    Factor {
        poly: Poly::from_bigints(ints).monic(),
        multiplicity: 1,
        balls: idx.iter().map(|&i| rb.balls[i].clone()).collect(),
        separation: rb.separation.clone(),
        precision: prec,
    }
}

/// `None` means the precision was insufficient to decide some candidate.
fn try_factor_squarefree(p: &Poly, prec: u32) -> Result<Option<Vec<Factor>>> {
    let ints = p.primitive_int();
    let n = ints.len() - 1;
    let rb = isolate_squarefree(&ints, prec)?;
    let prec = rb.precision;
    if n <= 1 {
        return Ok(Some(vec![make_factor(&ints, &rb, &(0..n).collect::<Vec<_>>(), prec)]));
    }
    let mut allowed = possible_factor_degrees(&ints);
    let mut units: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let k = rb.conj[i];
        if k == i {
            units.push(vec![i]);
        } else if i < k {
            units.push(vec![i, k]);
        }
    }
    let mut rest = ints.clone();
    let mut out = Vec::new();
    loop {
        let dn = rest.len() - 1;
        let mut found = false;
        for &t in allowed.iter().filter(|&&t| 2 * t <= dn) {
            let s = Search {
                balls: &rb.balls,
                units: &units,
                lc: rest.last().unwrap(),
                target: &rest,
                prec,
            };
            let (pick, chosen) = s.find_with_units(t);
            match pick {
                Pick::Found(q) => {
                    let idx: Vec<usize> = chosen.iter().flat_map(|&u| units[u].clone()).collect();
                    out.push(make_factor(&q, &rb, &idx, prec));
                    let quot = Poly::from_bigints(&rest)
                        .div_exact(&Poly::from_bigints(&q))
                        .expect("verified divisor");
                    rest = quot.primitive_int();
                    let mut keep = Vec::new();
                    for (u, unit) in units.into_iter().enumerate() {
                        if !chosen.contains(&u) {
                            keep.push(unit);
                        }
                    }
                    units = keep;
                    allowed = possible_factor_degrees(&rest);
                    found = true;
                    break;
                }
                Pick::Ambiguous => return Ok(None),
                Pick::None => {}
            }
        }
        if !found {
            let idx: Vec<usize> = units.iter().flatten().copied().collect();
            if !idx.is_empty() {
                out.push(make_factor(&rest, &rb, &idx, prec));
            }
            break;
        }
    }
    Ok(Some(out))
}

/// Rational roots of `p` (distinct), via its linear factors.
pub fn rational_roots(p: &Poly, prec: u32) -> Result<Vec<super::Rational>> {
    Ok(factor(p, prec)?
        .into_iter()
        .filter(|f| f.degree() == 1)
        .map(|f| -f.poly.coeff(0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn polys(fs: &[Factor]) -> Vec<(String, usize)> {
        fs.iter().map(|f| (f.poly.to_string(), f.multiplicity)).collect()
    }

    #[test]
    fn factors_small() {
        let f = factor(&p("x^2 - x"), 128).unwrap();
        assert_eq!(polys(&f), vec![("x".into(), 1), ("x - 1".into(), 1)]);
        let f = factor(&p("(x^2 + 1)*(x^3 + x + 1)*(x - 2)^2"), 128).unwrap();
        assert_eq!(
            polys(&f),
            vec![("x - 2".into(), 2), ("x^2 + 1".into(), 1), ("x^3 + x + 1".into(), 1)]
        );
    }

    #[test]
    fn swinnerton_dyer_irreducible() {
        // irreducible, but reducible modulo every prime
        let f = factor(&p("x^4 - 10*x^2 + 1"), 128).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].degree(), 4);
        assert!(is_irreducible(&p("x^4 + 1"), 128).unwrap());
    }

    #[test]
    fn product_of_quartics() {
        let a = p("x^4 - 10*x^2 + 1");
        let b = p("x^4 + 3*x + 1");
        let f = factor(&(&a * &b), 200).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|x| x.degree() == 4));
        assert_eq!(rational_roots(&p("2*x^3 - 3*x^2 + 1"), 128).unwrap().len(), 2);
        let rr = rational_roots(&p("6*x^2 - x - 1"), 128).unwrap();
        assert!(rr.contains(&rat(1, 2)) && rr.contains(&rat(-1, 3)));
    }
}
