//! Linear symmetries of iterates, the minimal commuter `f̃`, and the polynomials of bounded
//! degree commuting with an iterate of a disintegrated `f`.
//!
//! In the shifted coordinate (`x^{d-1}` coefficient zero) every linear map commuting with an
//! iterate is a scaling `x ↦ μx`. Since `f = f̃^e ∘ L₀` and `f̃ ∘ L = L^D ∘ f̃`, the group is
//! `μ_s` where `s` is the largest divisor of `gcd{d - i : i ∈ supp}` prime to `d`, and
//! `f ∘ (μx) = (μ^d x) ∘ f`. Every claim is checked by exact composition before it is returned.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::numberfield::{NfElem, NfPoly, NumberField};
use crate::algebra::{AlgebraicNumber, Poly, Rational, DEFAULT_ITERATE_DEGREE_CAP};
use crate::classify::require_disintegrated;
use crate::error::{Error, Result};

/// `x ↦ ζ^power (x - β) + β` in the original coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub power: usize,
    /// order of `ζ^power`
    pub order: usize,
    pub map: NfPoly,
    /// smallest `k` with `L ∘ f^k = f^k ∘ L`
    pub witness: usize,
}

#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    pub order: usize,
    /// `Q(ζ)` with `ζ = exp(2πi / order)`
    pub field: NumberField,
    pub zeta: AlgebraicNumber,
    pub beta: Rational,
    pub elements: Vec<Symmetry>,
    pub k_max: usize,
}

impl SymmetryGroup {
    pub fn identity(&self) -> &Symmetry {
        &self.elements[0]
    }

    /// Index of the element equal to `L`, if any.
    pub fn find(&self, l: &NfPoly) -> Option<usize> {
        self.elements.iter().position(|e| &e.map == l)
    }

    pub fn format_elem(&self, e: &Symmetry) -> String {
        self.field.format_poly(&e.map, "z")
    }
}

/// `g` commuting with an iterate of `f`: `g = f̃^m ∘ L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Commuter {
    pub poly: NfPoly,
    pub degree: usize,
    pub m: usize,
    /// index of `L` in the symmetry group
    pub symmetry: usize,
    /// smallest `k ≤ k_max` with `g ∘ f^k = f^k ∘ g`
    pub witness: usize,
}

#[derive(Clone, Debug)]
pub struct CommuterSet {
    pub f: Poly,
    pub base: NfPoly,
    pub base_degree: usize,
    /// `f = f̃^e ∘ L₀` with this `e`
    pub base_exponent: usize,
    pub group: SymmetryGroup,
    /// `f̃ ∘ L = L^D ∘ f̃`
    pub d_exponent: usize,
    pub base_witness: usize,
}

/// Default iterate bound: the gap exponent times the degree.
pub fn default_k_max(f: &Poly) -> Result<usize> {
    let nf = require_disintegrated(f).map_err(|_| Error::SymmetryRequiresDisintegrated)?;
    Ok(nf.gap.unwrap_or(1) * f.deg())
}

fn cyclotomic_field(s: usize) -> Result<(NumberField, AlgebraicNumber)> {
    if s <= 2 {
        let z = AlgebraicNumber::from_int(if s == 2 { -1 } else { 1 });
        return Ok((NumberField::new(z.clone()), z));
    }
    let mut c = vec![Rational::zero(); s + 1];
    c[0] = -Rational::one();
    c[s] = Rational::one();
    let th = 2.0 * std::f64::consts::PI / s as f64;
    let z = AlgebraicNumber::nearest_root(&Poly::from_coeffs(c), th.cos(), th.sin())?;
    Ok((NumberField::new(z.clone()), z))
}

/// Multiplicative order of `d` modulo `e` (`gcd(d, e) = 1`).
fn mult_order(d: usize, e: usize) -> usize {
    if e == 1 {
        return 1;
    }
    let mut x = d % e;
    let mut k = 1;
    while x != 1 {
        x = x * (d % e) % e;
        k += 1;
    }
    k
}

fn linear_map(k: &NumberField, mu: &NfElem, beta: &Rational) -> NfPoly {
    let b = k.from_rational(beta.clone());
    let c = k.sub(&b, &k.mul(mu, &b));
    NfPoly::trimmed(vec![c, mu.clone()])
}

/// Exact check of `g ∘ f^k = f^k ∘ g`.
pub fn commutes_with_iterate(k: &NumberField, g: &NfPoly, fk: &Poly) -> bool {
    let fk = k.poly_from_rational(fk);
    k.poly_compose(g, &fk) == k.poly_compose(&fk, g)
}

/// Smallest `k ≤ k_max` with `g ∘ f^k = f^k ∘ g`, by exact composition, skipping iterates
/// beyond the degree cap.
fn find_witness(k: &NumberField, g: &NfPoly, f: &Poly, k_max: usize) -> Option<usize> {
    let mut fk = f.clone();
    for kk in 1..=k_max {
        if commutes_with_iterate(k, g, &fk) {
            return Some(kk);
        }
        if fk.deg() * f.deg() > DEFAULT_ITERATE_DEGREE_CAP {
            return None;
        }
        fk = f.compose(&fk);
    }
    None
}

/// `M(f^∞)` restricted to elements whose witness iterate is at most `k_max`.
pub fn symmetry_group(f: &Poly, k_max: usize) -> Result<SymmetryGroup> {
    let nf = require_disintegrated(f).map_err(|_| Error::SymmetryRequiresDisintegrated)?;
    let d = f.deg();
    let g = nf
        .shifted
        .support()
        .into_iter()
        .filter(|&i| i < d)
        .fold(0usize, |acc, i| acc.gcd(&(d - i)));
    // largest divisor of g prime to d, then the largest divisor whose witness fits k_max
    let mut s = g.max(1);
    loop {
        let c = s.gcd(&d);
        if c == 1 {
            break;
        }
        s /= c;
    }
    let s = (1..=s)
        .rev()
        .find(|e| s % e == 0 && mult_order(d, *e) <= k_max.max(1))
        .unwrap_or(1);
    let (field, zeta) = cyclotomic_field(s)?;
    let z = field.gen();
    let fk = field.poly_from_rational(f);
    let mut elements = Vec::with_capacity(s);
    for t in 0..s {
        let order = s / t.gcd(&s);
        let mu = field.pow(&z, t as u64);
        let map = linear_map(&field, &mu, &nf.beta);
        // f ∘ L = L^d ∘ f, exactly
        let ld = linear_map(&field, &field.pow(&mu, d as u64), &nf.beta);
        if field.poly_compose(&fk, &map) != field.poly_compose(&ld, &fk) {
            return Err(Error::invalid(format!("symmetry check failed for power {t}")));
        }
        elements.push(Symmetry {
            power: t,
            order,
            map,
            witness: mult_order(d, order),
        });
    }
    Ok(SymmetryGroup {
        order: s,
        field,
        zeta,
        beta: nf.beta,
        elements,
        k_max,
    })
}

fn compose_power(k: &NumberField, g: &NfPoly, e: usize) -> NfPoly {
    let mut acc = g.clone();
    for _ in 1..e {
        acc = k.poly_compose(g, &acc);
    }
    acc
}

/// Exact rational `n`-th root.
fn rational_root(q: &Rational, n: u32) -> Option<Rational> {
    let root = |v: &BigInt| -> Option<BigInt> {
        let neg = v.is_negative();
        if neg && n % 2 == 0 {
            return None;
        }
        let r = v.abs().nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == v.abs()).then(|| if neg { -r } else { r })
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// Solve `g^{∘e} = target` with `deg g = dt` and leading coefficient `c`, top-down.
fn iterative_root(k: &NumberField, target: &NfPoly, dt: usize, e: usize, c: NfElem) -> Option<NfPoly> {
    let d = target.degree()?;
    let mut coeffs = vec![k.zero(); dt + 1];
    coeffs[dt] = c;
    for m in 1..=dt {
        let idx = d - m;
        let p0 = compose_power(k, &NfPoly::trimmed(coeffs.clone()), e).coeff(idx);
        coeffs[dt - m] = k.one();
        let p1 = compose_power(k, &NfPoly::trimmed(coeffs.clone()), e).coeff(idx);
        let slope = k.sub(&p1, &p0);
        coeffs[dt - m] = k.div(&k.sub(&target.coeff(idx), &p0), &slope)?;
    }
    let g = NfPoly::trimmed(coeffs);
    (compose_power(k, &g, e) == *target).then_some(g)
}

/// `f̃`, the exponent `e` with `f = f̃^e ∘ L₀`, and the index of `L₀`.
fn minimal_in_group(f: &Poly, group: &SymmetryGroup) -> (NfPoly, usize) {
    let k = &group.field;
    let d = f.deg();
    let fk = k.poly_from_rational(f);
    for dt in 2..d {
        let Some(e) = (2..=d).find(|&e| dt.checked_pow(e as u32) == Some(d)) else {
            continue;
        };
        let n = (d - 1) / (dt - 1);
        for l0 in &group.elements {
            // target = f ∘ L₀⁻¹
            let inv = &group.elements[(group.order - l0.power) % group.order];
            let target = k.poly_compose(&fk, &inv.map);
            let lc = target.coeff(d);
            for u in 0..group.order {
                let zu = k.pow(&k.gen(), u as u64);
                let a = k.div(&lc, &k.pow(&zu, n as u64)).expect("root of unity is nonzero");
                let Some(aq) = k.as_rational(&a) else { continue };
                let Some(c0) = rational_root(&aq, n as u32) else { continue };
                let mut signs = vec![c0.clone()];
                if n % 2 == 0 {
                    signs.push(-c0);
                }
                for c0 in signs {
                    let c = k.scale(&zu, &c0);
                    if let Some(g) = iterative_root(k, &target, dt, e, c) {
                        return (g, e);
                    }
                }
            }
        }
    }
    (fk, 1)
}

/// The commuter data of a disintegrated `f`: `f̃`, `M(f^∞)` and `D_f`.
pub fn commuter_set(f: &Poly, k_max: usize) -> Result<CommuterSet> {
    let group = symmetry_group(f, k_max)?;
    let (base, e) = minimal_in_group(f, &group);
    let k = &group.field;
    let base_degree = base.degree().unwrap_or(0);
    let base_witness = find_witness(k, &base, f, k_max.max(1)).ok_or(Error::NotCommuter {
        generator: k.format_poly(&base, "z"),
        k_max,
    })?;
    let gen = &group.elements[if group.order > 1 { 1 } else { 0 }].map;
    let lhs = k.poly_compose(&base, gen);
    let d_exponent = (1..=group.order.max(1))
        .find(|&dd| {
            let ld = compose_power(k, gen, dd);
            k.poly_compose(&ld, &base) == lhs
        })
        .ok_or_else(|| Error::invalid("no exponent D with f̃ ∘ L = L^D ∘ f̃"))?;
    Ok(CommuterSet {
        f: f.clone(),
        base,
        base_degree,
        base_exponent: e,
        group,
        d_exponent,
        base_witness,
    })
}

/// The minimal-degree (≥ 2) polynomial commuting with an iterate of `f`.
pub fn minimal_commuter(f: &Poly, k_max: usize) -> Result<NfPoly> {
    Ok(commuter_set(f, k_max)?.base)
}

impl CommuterSet {
    pub fn field(&self) -> &NumberField {
        &self.group.field
    }

    /// All `f̃^m ∘ L` of degree at most `max_degree` whose witness iterate is at most `k_max`,
    /// ordered by degree then group index.
    pub fn elements_up_to(&self, max_degree: usize) -> Vec<Commuter> {
        let k = self.field();
        let mut out = Vec::new();
        let mut power = k.poly_from_rational(&Poly::x());
        let mut m = 0;
        let mut deg = 1usize;
        while deg <= max_degree {
            for (i, l) in self.group.elements.iter().enumerate() {
                let poly = k.poly_compose(&power, &l.map);
                let witness = if m == 0 {
                    Some(l.witness)
                } else {
                    find_witness(k, &poly, &self.f, self.group.k_max.max(1))
                };
                if let Some(witness) = witness {
                    out.push(Commuter {
                        poly,
                        degree: deg,
                        m,
                        symmetry: i,
                        witness,
                    });
                }
            }
            if self.base_degree < 2 {
                break;
            }
            power = k.poly_compose(&self.base, &power);
            m += 1;
            deg = match deg.checked_mul(self.base_degree) {
                Some(v) => v,
                None => break,
            };
        }
        out
    }

    pub fn format(&self, c: &Commuter) -> String {
        self.field().format_poly(&c.poly, "z")
    }

    pub fn rational(&self, c: &Commuter) -> Option<Poly> {
        self.field().poly_to_rational(&c.poly)
    }
}

/// Polynomials of degree at most `max_degree` commuting with an iterate of `f`.
pub fn commuters_up_to(f: &Poly, max_degree: usize, k_max: usize) -> Result<Vec<Commuter>> {
    Ok(commuter_set(f, k_max)?.elements_up_to(max_degree))
}

/// JSON view of a symmetry group.
#[derive(Serialize)]
pub struct GroupReport {
    pub order: usize,
    pub generator: AlgebraicNumber,
    pub elements: Vec<ElementReport>,
    pub k_max: usize,
}

#[derive(Serialize)]
pub struct ElementReport {
    pub map: String,
    pub degree: usize,
    pub witness: usize,
}

impl SymmetryGroup {
    pub fn report(&self) -> GroupReport {
        GroupReport {
            order: self.order,
            generator: self.zeta.clone(),
            elements: self
                .elements
                .iter()
                .map(|e| ElementReport {
                    map: self.format_elem(e),
                    degree: 1,
                    witness: e.witness,
                })
                .collect(),
            k_max: self.k_max,
        }
    }
}

impl fmt::Display for Commuter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} (m = {}, L #{}), witness {}", self.degree, self.m, self.symmetry, self.witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn rational_set(f: &str, d: usize) -> Vec<Poly> {
        let f = p(f);
        let cs = commuter_set(&f, default_k_max(&f).unwrap()).unwrap();
        let mut v: Vec<Poly> = cs.elements_up_to(d).iter().map(|c| cs.rational(c).unwrap()).collect();
        v.sort_by_key(|q| (q.deg(), q.to_string()));
        v
    }

    #[test]
    fn groups() {
        let f = p("x^2 + 1");
        let g = symmetry_group(&f, 4).unwrap();
        assert_eq!(g.order, 1);
        let g = symmetry_group(&p("x^3 + x"), 6).unwrap();
        assert_eq!(g.order, 2);
        assert_eq!(g.elements[1].witness, 1);
        // x^4 + x: f(ωx) = ω f(x) with ω^3 = 1
        let g = symmetry_group(&p("x^4 + x"), 12).unwrap();
        assert_eq!(g.order, 3);
        assert_eq!(g.field.degree(), 2);
        // x^3 + x^2 shifted is x^3 - x/3 + 2/27: constant term forces the trivial group
        assert_eq!(symmetry_group(&p("x^3 + x^2"), 6).unwrap().order, 1);
        assert!(matches!(
            symmetry_group(&p("x^2 - 2"), 4),
            Err(Error::SymmetryRequiresDisintegrated)
        ));
    }

    #[test]
    fn minimal_commuters() {
        let f = p("x^4 + 2*x^2 + 2");
        let cs = commuter_set(&f, 8).unwrap();
        assert_eq!(cs.field().poly_to_rational(&cs.base), Some(p("x^2 + 1")));
        assert_eq!(cs.base_exponent, 2);
        let cs = commuter_set(&p("x^3 + x"), 6).unwrap();
        assert_eq!(cs.field().poly_to_rational(&cs.base), Some(p("x^3 + x")));
        assert_eq!(cs.d_exponent, 1);
    }

    #[test]
    fn commuter_lists() {
        assert_eq!(rational_set("x^2 + 1", 4), vec![p("x"), p("x^2 + 1"), p("x^4 + 2*x^2 + 2")]);
        assert_eq!(
            rational_set("x^3 + x", 3),
            vec![p("-x"), p("x"), p("-x^3 - x"), p("x^3 + x")]
        );
        assert_eq!(rational_set("x^3 + x", 1), vec![p("-x"), p("x")]);
    }

    #[test]
    fn shifted_coordinates() {
        // conjugate of x^3 + x by x + 1; the symmetry -x becomes -x - 2
        let f = p("x^3 + x").compose(&p("x + 1")) - p("1");
        let g = symmetry_group(&f, 6).unwrap();
        assert_eq!(g.order, 2);
        assert_eq!(g.field.poly_to_rational(&g.elements[1].map), Some(p("-x - 2")));
    }
}
