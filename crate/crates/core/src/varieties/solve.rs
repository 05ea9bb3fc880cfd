//! Resultant elimination, exact zero tests of multivariate polynomials at algebraic
//! points, and solving of zero-dimensional systems.

use num_traits::Zero;

use crate::algebra::{
    algebraic_eval, default_precision, factor, isolate_roots, AlgebraicNumber, CBall, MPoly,
    NfElem, NfPoly, NumberField, Poly, Rational,
};
use crate::error::{Error, Result};

/// Outcome of eliminating variables from a system.
#[derive(Clone, Debug, PartialEq)]
pub enum Elimination {
    /// Nonzero primitive polynomials free of the eliminated variables.
    Polys(Vec<MPoly>),
    /// Two equations shared a factor in the named (0-based) variable.
    CommonFactor(usize),
}

fn dedup_primitive(v: &mut Vec<MPoly>) {
    let mut out: Vec<MPoly> = Vec::new();
    for p in v.drain(..) {
        let p = p.primitive();
        if !p.is_zero() && !out.contains(&p) {
            out.push(p);
        }
    }
    *v = out;
}

/// Eliminate `vars` (0-based) one at a time by resultants, smallest degree first. Each step
/// picks the equation of least positive degree in the variable as pivot and replaces every
/// other equation containing the variable by its resultant with the pivot; a pivot without
/// partners is dropped.
pub fn eliminate(eqs: &[MPoly], vars: &[usize]) -> Elimination {
    let mut cur: Vec<MPoly> = eqs.to_vec();
    dedup_primitive(&mut cur);
    let mut todo: Vec<usize> = vars.to_vec();
    while !todo.is_empty() {
        let (pos, &v) = todo
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| cur.iter().map(|p| p.degree_in(v)).max().unwrap_or(0))
            .unwrap();
        todo.remove(pos);
        let (with, mut without): (Vec<MPoly>, Vec<MPoly>) =
            cur.into_iter().partition(|p| p.uses_var(v));
        if let Some(pi) = (0..with.len()).min_by_key(|&i| (with[i].degree_in(v), with[i].num_terms())) {
            let pivot = &with[pi];
            for (i, e) in with.iter().enumerate() {
                if i == pi {
                    continue;
                }
                let r = pivot.resultant(e, v);
                if r.is_zero() {
                    return Elimination::CommonFactor(v);
                }
                without.push(r);
            }
        }
        dedup_primitive(&mut without);
        cur = without;
    }
    Elimination::Polys(cur)
}

/// Ball enclosure of `p` at a point given by balls (every occurring variable must be set).
pub fn eval_mpoly_ball(p: &MPoly, pt: &[Option<CBall>], prec: u32) -> CBall {
    let mut acc = CBall::zero();
    for (e, c) in p.terms() {
        let mut t = CBall::from_rational(c, prec);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                let b = pt[i].as_ref().expect("variable without a value");
                t = t.mul(&b.pow(k, prec), prec);
            }
        }
        acc = acc.add(&t, prec);
    }
    acc
}

fn eval_mpoly_exact(p: &MPoly, pt: &[Option<AlgebraicNumber>]) -> Result<AlgebraicNumber> {
    let mut acc = AlgebraicNumber::from_int(0);
    for (e, c) in p.terms() {
        let mut t = AlgebraicNumber::from_rational(c);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                let a = pt[i].as_ref().expect("variable without a value");
                let ak = algebraic_eval(&Poly::monomial(Rational::from_integer(1.into()), k as usize), a)?;
                t = t.mul(&ak)?;
            }
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// Exact test of `p(pt) = 0`. Rational coordinates are substituted exactly; a single
/// irrational coordinate is handled by reduction modulo its minimal polynomial; several are
/// first separated by ball evaluation and then decided by exact algebraic arithmetic.
pub fn vanishes_at(p: &MPoly, pt: &[Option<AlgebraicNumber>]) -> Result<bool> {
    let mut q = p.clone();
    for (i, a) in pt.iter().enumerate() {
        if let Some(r) = a.as_ref().and_then(|a| a.as_rational()) {
            if q.uses_var(i) {
                q = q.eval_var(i, &r);
            }
        }
    }
    let used = q.vars_used();
    if used.iter().any(|&v| pt[v].is_none()) {
        return Err(Error::invalid("zero test needs a value for every variable"));
    }
    match used.as_slice() {
        [] => Ok(q.is_zero()),
        [v] => {
            let a = pt[*v].as_ref().unwrap();
            Ok(q.to_univariate(*v).unwrap().rem(a.minpoly()).is_zero())
        }
        _ => {
            for prec in [128u32, 512] {
                let balls: Vec<Option<CBall>> = pt
                    .iter()
                    .map(|a| a.as_ref().and_then(|a| a.refine(prec).ok()).map(|a| a.ball().clone()))
                    .collect();
                if !eval_mpoly_ball(&q, &balls, prec).contains_zero() {
                    return Ok(false);
                }
            }
            Ok(eval_mpoly_exact(&q, pt)?.is_zero())
        }
    }
}

fn distinct_roots(p: &Poly) -> Result<Vec<AlgebraicNumber>> {
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    isolate_roots(&p.squarefree_part(), default_precision())
}

/// Why a system could not be solved as a finite set.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveFailure {
    /// The solution set has positive dimension (reported with the offending variable).
    PositiveDimensional(usize),
}

/// All affine solutions of a system in which only the `unknowns` (0-based) occur.
/// Solutions are returned as full-length tuples with `None` outside `unknowns`.
///
/// The first unknown is solved from its eliminant. For each irreducible factor `m` of that
/// eliminant the others are expressed in `Q[t]/(m)` through gcds of the bivariate eliminants,
/// which yields every root of `m` at once; factors where this fails fall back to pairing
/// candidate roots with exact zero tests.
pub fn solve_zero_dim(
    eqs: &[MPoly],
    unknowns: &[usize],
) -> Result<std::result::Result<Vec<Vec<Option<AlgebraicNumber>>>, SolveFailure>> {
    let nvars = eqs.first().map(|e| e.nvars()).unwrap_or(0);
    let eqs: Vec<MPoly> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    if eqs.iter().any(|e| e.as_constant().is_some()) {
        return Ok(Ok(Vec::new()));
    }
    if unknowns.is_empty() {
        return Ok(Ok(vec![vec![None; nvars]]));
    }
    let u0 = unknowns[0];
    let g0 = match univariate_eliminant(&eqs, unknowns, u0) {
        Ok(Some(g)) => g,
        Ok(None) => return Ok(Ok(Vec::new())),
        Err(f) => return Ok(Err(f)),
    };
    if g0.deg() == 0 {
        return Ok(Ok(Vec::new()));
    }
    // bivariate eliminants in (u0, u) for the remaining unknowns
    let mut pairs: Vec<Vec<MPoly>> = Vec::new();
    for &u in &unknowns[1..] {
        let others: Vec<usize> = unknowns.iter().copied().filter(|&w| w != u && w != u0).collect();
        match eliminate(&eqs, &others) {
            Elimination::Polys(p) => pairs.push(p),
            Elimination::CommonFactor(v) => return Ok(Err(SolveFailure::PositiveDimensional(v))),
        }
    }
    let mut out = Vec::new();
    let mut fallback: Vec<AlgebraicNumber> = Vec::new();
    for fac in factor(&g0.squarefree_part(), default_precision())? {
        let roots = fac.roots();
        let k = NumberField::new(roots[0].clone());
        match triangular(&k, &eqs, unknowns, &pairs)? {
            Some(Triangular::Empty) => {}
            Some(Triangular::Values(vals)) => {
                for a in &roots {
                    let mut pt: Vec<Option<AlgebraicNumber>> = vec![None; nvars];
                    for (&u, r) in unknowns.iter().zip(&vals) {
                        pt[u] = Some(algebraic_eval(&r.0, a)?);
                    }
                    out.push(pt);
                }
            }
            None => fallback.extend(roots),
        }
    }
    if !fallback.is_empty() {
        let mut candidates: Vec<Vec<AlgebraicNumber>> = vec![fallback];
        for &u in &unknowns[1..] {
            match univariate_eliminant(&eqs, unknowns, u) {
                Ok(Some(g)) => candidates.push(distinct_roots(&g)?),
                Ok(None) => return Ok(Ok(out)),
                Err(f) => return Ok(Err(f)),
            }
        }
        let mut partial: Vec<Option<AlgebraicNumber>> = vec![None; nvars];
        search(&eqs, unknowns, &candidates, 0, &mut partial, &mut out)?;
    }
    Ok(Ok(out))
}

/// The gcd of the eliminants of `u` (all other unknowns removed); `None` when the system
/// has no solutions at all.
pub fn univariate_eliminant(
    eqs: &[MPoly],
    unknowns: &[usize],
    u: usize,
) -> std::result::Result<Option<Poly>, SolveFailure> {
    let others: Vec<usize> = unknowns.iter().copied().filter(|&w| w != u).collect();
    let polys = match eliminate(eqs, &others) {
        Elimination::Polys(p) => p,
        Elimination::CommonFactor(v) => return Err(SolveFailure::PositiveDimensional(v)),
    };
    let mut g: Option<Poly> = None;
    for p in &polys {
        if let Some(c) = p.as_constant() {
            if !c.is_zero() {
                return Ok(None);
            }
            continue;
        }
        let Some(uni) = p.to_univariate(u) else { continue };
        g = Some(match g {
            None => uni,
            Some(h) => h.gcd(&uni),
        });
    }
    g.map(Some).ok_or(SolveFailure::PositiveDimensional(u))
}

enum Triangular {
    Empty,
    /// values of the unknowns (in order) as elements of the field
    Values(Vec<NfElem>),
}

/// Solve over `k = Q(t)`, `t` a root of the first unknown's eliminant factor. `None` when
/// some coordinate does not lie in `k` (or is not determined by the bivariate eliminants).
fn triangular(
    k: &NumberField,
    eqs: &[MPoly],
    unknowns: &[usize],
    pairs: &[Vec<MPoly>],
) -> Result<Option<Triangular>> {
    let u0 = unknowns[0];
    let mut vals = vec![k.gen()];
    for (&u, polys) in unknowns[1..].iter().zip(pairs) {
        let mut g: Option<NfPoly> = None;
        for p in polys {
            let q = specialize(k, p, u0, u);
            if q.is_zero() {
                continue;
            }
            g = Some(match g {
                None => q,
                Some(h) => nf_gcd(k, &h, &q),
            });
        }
        let Some(g) = g else { return Ok(None) };
        match g.degree() {
            Some(0) => return Ok(Some(Triangular::Empty)),
            Some(1) => vals.push(k.neg(&nf_monic(k, &g).coeff(0))),
            _ => return Ok(None),
        }
    }
    let mut full: Vec<Option<NfElem>> = vec![None; eqs.first().map(|e| e.nvars()).unwrap_or(0)];
    for (&u, v) in unknowns.iter().zip(&vals) {
        full[u] = Some(v.clone());
    }
    for e in eqs {
        if !k.is_zero(&nf_eval(k, e, &full)) {
            return Ok(Some(Triangular::Empty));
        }
    }
    Ok(Some(Triangular::Values(vals)))
}

/// `p(t, y)` as a polynomial in `y` over `k`; `p` may only involve `u0` and `u`.
fn specialize(k: &NumberField, p: &MPoly, u0: usize, u: usize) -> NfPoly {
    let mut coeffs: Vec<Poly> = Vec::new();
    for (e, c) in p.terms() {
        let j = e[u] as usize;
        if coeffs.len() <= j {
            coeffs.resize(j + 1, Poly::zero());
        }
        let t = Poly::monomial(c.clone(), e[u0] as usize);
        coeffs[j] = &coeffs[j] + &t;
    }
    NfPoly::trimmed(coeffs.into_iter().map(|c| k.reduce(c)).collect())
}

fn nf_eval(k: &NumberField, p: &MPoly, vals: &[Option<NfElem>]) -> NfElem {
    let mut acc = k.zero();
    for (e, c) in p.terms() {
        let mut t = k.from_rational(c.clone());
        for (i, &d) in e.iter().enumerate() {
            if d > 0 {
                let v = vals[i].as_ref().expect("variable without a value");
                t = k.mul(&t, &k.pow(v, d as u64));
            }
        }
        acc = k.add(&acc, &t);
    }
    acc
}

fn nf_monic(k: &NumberField, p: &NfPoly) -> NfPoly {
    let d = p.degree().expect("nonzero polynomial");
    let inv = k.inv(&p.coeff(d)).expect("nonzero leading coefficient");
    k.poly_scale(p, &inv)
}

fn nf_rem(k: &NumberField, a: &NfPoly, b: &NfPoly) -> NfPoly {
    let db = b.degree().expect("division by zero polynomial");
    let b = nf_monic(k, b);
    let mut r = a.clone();
    while let Some(dr) = r.degree() {
        if dr < db {
            break;
        }
        let c = r.coeff(dr);
        let mut shifted = vec![k.zero(); dr - db];
        shifted.extend(b.0.iter().map(|x| k.mul(x, &c)));
        r = k.poly_sub(&r, &NfPoly::trimmed(shifted));
    }
    r
}

fn nf_gcd(k: &NumberField, a: &NfPoly, b: &NfPoly) -> NfPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = nf_rem(k, &a, &b);
        a = b;
        b = r;
    }
    nf_monic(k, &a)
}

fn search(
    eqs: &[MPoly],
    unknowns: &[usize],
    cands: &[Vec<AlgebraicNumber>],
    depth: usize,
    partial: &mut Vec<Option<AlgebraicNumber>>,
    out: &mut Vec<Vec<Option<AlgebraicNumber>>>,
) -> Result<()> {
    if depth == unknowns.len() {
        for e in eqs {
            if !vanishes_at(e, partial)? {
                return Ok(());
            }
        }
        out.push(partial.clone());
        return Ok(());
    }
    let u = unknowns[depth];
    let assigned = &unknowns[..=depth];
    for a in &cands[depth] {
        partial[u] = Some(a.clone());
        // prune with equations whose variables are all assigned
        let mut alive = true;
        if depth + 1 < unknowns.len() {
            for e in eqs {
                if e.vars_used().iter().all(|v| assigned.contains(v)) && !vanishes_at(e, partial)? {
                    alive = false;
                    break;
                }
            }
        }
        if alive {
            search(eqs, unknowns, cands, depth + 1, partial, out)?;
        }
    }
    partial[u] = None;
    Ok(())
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
    fn eliminate_middle_variable() {
        let eqs = [mp("x2 - x1^2 - 1", 3), mp("x3 - x2", 3)];
        match eliminate(&eqs, &[1]) {
            Elimination::Polys(p) => {
                assert_eq!(p.len(), 1);
                assert_eq!(p[0], mp("x3 - x1^2 - 1", 3).primitive());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            eliminate(&[mp("x1*x2 + x2", 2), mp("x1*x2 + 2*x2", 2)], &[1]),
            Elimination::CommonFactor(1)
        );
    }

    #[test]
    fn zero_tests() {
        let r2 = AlgebraicNumber::nearest_root(&"x^2 - 2".parse().unwrap(), 1.4, 0.0).unwrap();
        let pt = vec![Some(r2.clone()), Some(AlgebraicNumber::from_rational(&rat(1, 1)))];
        assert!(vanishes_at(&mp("x1^2 - 2*x2", 2), &pt).unwrap());
        assert!(!vanishes_at(&mp("x1 - x2", 2), &pt).unwrap());
        let pt = vec![Some(r2.clone()), Some(r2.neg())];
        assert!(vanishes_at(&mp("x1 + x2", 2), &pt).unwrap());
        assert!(vanishes_at(&mp("x1*x2 + 2", 2), &pt).unwrap());
        assert!(!vanishes_at(&mp("x1 - x2", 2), &pt).unwrap());
    }

    #[test]
    fn small_systems() {
        let sols = solve_zero_dim(&[mp("x1^2 - 2", 2), mp("x2 - x1", 2)], &[0, 1])
            .unwrap()
            .unwrap();
        assert_eq!(sols.len(), 2);
        let none = solve_zero_dim(&[mp("x1 - 1", 2), mp("x1 - 2", 2)], &[0]).unwrap().unwrap();
        assert!(none.is_empty());
        assert!(solve_zero_dim(&[mp("x1 - x2", 2)], &[0, 1]).unwrap().is_err());
    }
}
