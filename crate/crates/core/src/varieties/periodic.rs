//! Periodic and special subvarieties of `(P^1)^n`, the coordinate embeddings `e_V`, and
//! exact membership tests.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::signature::Signature;
use crate::algebra::{algebraic_eval, AlgebraicNumber, MPoly, P1Point, Poly, DEFAULT_ITERATE_DEGREE_CAP};
use crate::heights::{height_expansion_constant, weil_height_alg};
use crate::commute::default_k_max;
use crate::error::{Error, Result};

/// Cap on the period searched when certifying periodic constants.
pub const PERIOD_CAP: usize = 64;

/// `D(V)`: the least degree of a terminal chain generator, `+∞` when every chain is a single
/// coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DV {
    Finite(usize),
    Infinite,
}

impl DV {
    pub fn exceeds(&self, c: f64) -> bool {
        match self {
            DV::Finite(v) => *v as f64 > c,
            DV::Infinite => true,
        }
    }
}

impl PartialOrd for DV {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for DV {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (DV::Finite(a), DV::Finite(b)) => a.cmp(b),
            (DV::Finite(_), DV::Infinite) => Ordering::Less,
            (DV::Infinite, DV::Finite(_)) => Ordering::Greater,
            (DV::Infinite, DV::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for DV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DV::Finite(v) => write!(f, "{v}"),
            DV::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for DV {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DV::Finite(v) => s.serialize_u64(*v as u64),
            DV::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for DV {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "inf" => Ok(DV::Infinite),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|v| DV::Finite(v as usize))
                .ok_or_else(|| serde::de::Error::custom("D(V) must be a positive integer")),
            other => Err(serde::de::Error::custom(format!("bad D(V) {other}"))),
        }
    }
}

fn poly_str<S: Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn poly_de<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Poly, D::Error> {
    String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
}

/// A constant coordinate `x_index = value` with `f^period(value) = value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicConstant {
    pub index: usize,
    pub value: P1Point,
    pub period: usize,
}

/// A chain link `x_next = poly(x_prev)` with `poly ∘ f^witness = f^witness ∘ poly`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    #[serde(serialize_with = "poly_str", deserialize_with = "poly_de")]
    pub poly: Poly,
    pub witness: usize,
}

/// A periodic subvariety `ζ × C_1 × ... × C_k` in the coordinates of its signature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSubvariety {
    pub signature: Signature,
    /// one entry per index of `signature.constants`, same order
    pub constants: Vec<PeriodicConstant>,
    /// `generators[k][i]` links chain position `i + 1` to position `i + 2`
    pub generators: Vec<Vec<Generator>>,
    #[serde(rename = "D_V")]
    pub d_v: DV,
}

/// Smallest `p ≤ PERIOD_CAP` with `f^p(z) = z`, by exact orbit computation. The orbit is
/// abandoned early once its height exceeds `C_f/(d-1)`, beyond which no point is preperiodic.
pub fn certify_period(f: &Poly, z: &P1Point) -> Result<usize> {
    let P1Point::Finite(a) = z else {
        return Ok(1);
    };
    let escape = height_expansion_constant(f)? / (f.deg() - 1) as f64;
    let mut orbit = vec![a.clone()];
    let mut cur = a.clone();
    let fail = |orbit: &[AlgebraicNumber], why: &str| {
        let prefix: Vec<String> = orbit.iter().map(|x| x.to_string()).collect();
        Err(Error::NonPeriodicConstant {
            cap: PERIOD_CAP,
            orbit: format!("{}{why}", prefix.join(" -> ")),
        })
    };
    for p in 1..=PERIOD_CAP {
        cur = algebraic_eval(f, &cur)?;
        if &cur == a {
            return Ok(p);
        }
        if orbit.len() < 6 {
            orbit.push(cur.clone());
        }
        if weil_height_alg(&cur)?.lo() > escape {
            return fail(&orbit, " ... (height above the escape bound)");
        }
    }
    fail(&orbit, " ...")
}

/// Smallest `k ≤ k_max` with `g ∘ f^k = f^k ∘ g` over the rationals. Iterates are first
/// compared at a few points modulo a prime, so exact compositions are only formed for
/// candidates that survive.
pub fn commuter_witness(g: &Poly, f: &Poly, k_max: usize) -> Option<usize> {
    if g.deg() == 0 {
        return None;
    }
    let (gm, fm) = (mod_p(g), mod_p(f));
    let points = [2u64, 3, 7, 11];
    // a = f^k(t), b = f^k(g(t)) at each test point
    let mut state: Option<Vec<(u64, u64)>> = match (&gm, &fm) {
        (Some(gm), Some(_)) => Some(points.iter().map(|&t| (t, eval_mod(gm, t))).collect()),
        _ => None,
    };
    let mut fk = f.clone();
    let mut fk_k = 1;
    for k in 1..=k_max {
        let maybe = match (&mut state, &gm, &fm) {
            (Some(st), Some(gm), Some(fm)) => {
                for (a, b) in st.iter_mut() {
                    *a = eval_mod(fm, *a);
                    *b = eval_mod(fm, *b);
                }
                st.iter().all(|&(a, b)| eval_mod(gm, a) == b)
            }
            _ => true,
        };
        if maybe {
            while fk_k < k {
                if fk.deg() * f.deg() > DEFAULT_ITERATE_DEGREE_CAP {
                    return None;
                }
                fk = f.compose(&fk);
                fk_k += 1;
            }
            if g.compose(&fk) == fk.compose(g) {
                return Some(k);
            }
        } else if f.deg().checked_pow(k as u32).map_or(true, |d| d > DEFAULT_ITERATE_DEGREE_CAP) {
            return None;
        }
    }
    None
}

const P61: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P61 as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// Coefficients modulo `2^61 - 1`; `None` when a denominator vanishes there.
fn mod_p(p: &Poly) -> Option<Vec<u64>> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let m = BigInt::from(P61);
    p.coeffs()
        .iter()
        .map(|c| {
            let n = (c.numer() % &m + &m) % &m;
            let d = (c.denom() % &m + &m) % &m;
            let d = d.to_u64()?;
            (d != 0).then(|| mul_mod(n.to_u64().unwrap(), pow_mod(d, P61 - 2)))
        })
        .collect()
}

fn eval_mod(c: &[u64], t: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| (mul_mod(acc, t) + a) % P61)
}

/// Validate the data of a periodic subvariety: constants are certified periodic, every
/// generator commutes with an iterate `f^k`, `k ≤ k_max` (default from [`default_k_max`]).
pub fn build_periodic(
    signature: Signature,
    constants: Vec<P1Point>,
    generators: Vec<Vec<Poly>>,
    f: &Poly,
    k_max: Option<usize>,
) -> Result<PeriodicSubvariety> {
    if constants.len() != signature.constants.len() {
        return Err(Error::invalid(format!(
            "signature has {} constant coordinates but {} values were given",
            signature.constants.len(),
            constants.len()
        )));
    }
    if generators.len() != signature.chains.len()
        || generators
            .iter()
            .zip(&signature.chains)
            .any(|(g, c)| g.len() + 1 != c.len())
    {
        return Err(Error::invalid(
            "each chain of length m needs exactly m - 1 generators",
        ));
    }
    let k_max = match k_max {
        Some(k) => k,
        None => default_k_max(f)?,
    };
    let mut consts = Vec::new();
    for (&index, value) in signature.constants.iter().zip(constants) {
        let period = certify_period(f, &value)?;
        consts.push(PeriodicConstant { index, value, period });
    }
    let mut gens = Vec::new();
    for chain in generators {
        let mut out = Vec::new();
        for g in chain {
            let witness = commuter_witness(&g, f, k_max).ok_or_else(|| Error::NotCommuter {
                generator: g.to_string(),
                k_max,
            })?;
            out.push(Generator { poly: g, witness });
        }
        gens.push(out);
    }
    let d_v = gens
        .iter()
        .filter_map(|c| c.last().map(|g| g.poly.deg()))
        .min()
        .map_or(DV::Infinite, DV::Finite);
    Ok(PeriodicSubvariety {
        signature,
        constants: consts,
        generators: gens,
        d_v,
    })
}

fn apply_poly(g: &Poly, a: &P1Point) -> Result<P1Point> {
    match a {
        P1Point::Infinity => Ok(if g.deg() == 0 {
            P1Point::rational(g.coeff(0))
        } else {
            P1Point::Infinity
        }),
        P1Point::Finite(x) => Ok(P1Point::Finite(algebraic_eval(g, x)?)),
    }
}

impl PeriodicSubvariety {
    pub fn n(&self) -> usize {
        self.signature.n
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
    }

    /// A common period: `φ^p(V) = V` for `p` the lcm of constant periods and witnesses.
    pub fn period(&self) -> usize {
        self.constants
            .iter()
            .map(|c| c.period)
            .chain(self.generators.iter().flatten().map(|g| g.witness))
            .fold(1, |a, b| a.lcm(&b))
    }

    /// `x_top = G(x_head)` for every position of chain `k` (composition of its links).
    pub fn chain_maps(&self, k: usize) -> Vec<Poly> {
        let mut cur = Poly::x();
        let mut out = vec![cur.clone()];
        for g in &self.generators[k] {
            cur = g.poly.compose(&cur);
            out.push(cur.clone());
        }
        out
    }

    /// Defining equations over the rationals: chain links, and for each constant the
    /// minimal polynomial of its value (which cuts out all conjugates).
    pub fn equations(&self) -> Vec<MPoly> {
        let n = self.n();
        let mut out = Vec::new();
        for c in &self.constants {
            if let P1Point::Finite(a) = &c.value {
                out.push(MPoly::from_univariate(a.minpoly(), c.index - 1, n));
            }
        }
        for (chain, gens) in self.signature.chains.iter().zip(&self.generators) {
            for (w, g) in chain.windows(2).zip(gens) {
                let rhs = MPoly::from_univariate(&g.poly, w[0] - 1, n);
                out.push(&MPoly::var(n, w[1] - 1) - &rhs);
            }
        }
        out
    }

    /// The point of `V` with the given chain heads (one value per chain).
    pub fn point_from_heads(&self, heads: &[P1Point]) -> Result<Vec<P1Point>> {
        let mut pt = vec![P1Point::Infinity; self.n()];
        for c in &self.constants {
            pt[c.index - 1] = c.value.clone();
        }
        for ((chain, gens), h) in self.signature.chains.iter().zip(&self.generators).zip(heads) {
            let mut cur = h.clone();
            pt[chain[0] - 1] = cur.clone();
            for (&i, g) in chain[1..].iter().zip(gens) {
                cur = apply_poly(&g.poly, &cur)?;
                pt[i - 1] = cur.clone();
            }
        }
        Ok(pt)
    }

    pub fn contains(&self, pt: &[P1Point]) -> Result<bool> {
        if pt.len() != self.n() {
            return Err(Error::invalid("point has the wrong number of coordinates"));
        }
        for c in &self.constants {
            if pt[c.index - 1] != c.value {
                return Ok(false);
            }
        }
        for (chain, gens) in self.signature.chains.iter().zip(&self.generators) {
            for (w, g) in chain.windows(2).zip(gens) {
                if apply_poly(&g.poly, &pt[w[0] - 1])? != pt[w[1] - 1] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `a_Z × Z'`: arbitrary fixed coordinates times a periodic subvariety of the complement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialSubvariety {
    pub n: usize,
    /// `(index, value)` pairs, indices 1-based and increasing
    pub fixed: Vec<(usize, P1Point)>,
    /// lives on the complement of the fixed indices, renumbered `1..` in increasing order
    pub periodic: PeriodicSubvariety,
}

impl SpecialSubvariety {
    pub fn new(n: usize, mut fixed: Vec<(usize, P1Point)>, periodic: PeriodicSubvariety) -> Result<Self> {
        fixed.sort_by_key(|(i, _)| *i);
        if fixed.windows(2).any(|w| w[0].0 == w[1].0) || fixed.iter().any(|(i, _)| *i == 0 || *i > n) {
            return Err(Error::invalid("fixed coordinates must be distinct indices in 1..n"));
        }
        if periodic.n() + fixed.len() != n {
            return Err(Error::invalid("fixed and periodic coordinates must partition 1..n"));
        }
        Ok(SpecialSubvariety { n, fixed, periodic })
    }

    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|i| !self.fixed.iter().any(|(j, _)| j == i)).collect()
    }

    pub fn contains(&self, pt: &[P1Point]) -> Result<bool> {
        if pt.len() != self.n {
            return Err(Error::invalid("point has the wrong number of coordinates"));
        }
        if self.fixed.iter().any(|(i, v)| &pt[i - 1] != v) {
            return Ok(false);
        }
        let rest: Vec<P1Point> = self.complement().iter().map(|&i| pt[i - 1].clone()).collect();
        self.periodic.contains(&rest)
    }
}

/// Exact point-on-variety test.
pub enum Subvariety<'a> {
    Periodic(&'a PeriodicSubvariety),
    Special(&'a SpecialSubvariety),
}

pub fn membership(v: Subvariety<'_>, pt: &[P1Point]) -> Result<bool> {
    match v {
        Subvariety::Periodic(p) => p.contains(pt),
        Subvariety::Special(s) => s.contains(pt),
    }
}

/// A periodic hypersurface `x_i = ζ` or `x_i = g(x_j)` (1-based indices).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypersurfaceEq {
    Constant { i: usize, zeta: P1Point },
    Graph {
        i: usize,
        j: usize,
        #[serde(serialize_with = "poly_str", deserialize_with = "poly_de")]
        g: Poly,
    },
}

impl fmt::Display for HypersurfaceEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypersurfaceEq::Constant { i, zeta } => write!(f, "x{i} = {zeta}"),
            HypersurfaceEq::Graph { i, j, g } => write!(f, "x{i} = {}", g.fmt_var(&format!("x{j}"))),
        }
    }
}

/// The embedding `e_V : (P^1)^{n-1} → (P^1)^n` onto a periodic hypersurface `V`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub n: usize,
    pub eq: HypersurfaceEq,
}

pub fn embed_in_hypersurface(n: usize, eq: HypersurfaceEq) -> Result<Embedding> {
    let ok = match &eq {
        HypersurfaceEq::Constant { i, .. } => (1..=n).contains(i),
        HypersurfaceEq::Graph { i, j, g } => {
            (1..=n).contains(i) && (1..=n).contains(j) && i != j && g.deg() >= 1
        }
    };
    if !ok || n < 1 {
        return Err(Error::invalid(format!("{eq} is not a hypersurface of (P^1)^{n}")));
    }
    Ok(Embedding { n, eq })
}

impl Embedding {
    /// The inserted slot `i` (1-based).
    pub fn slot(&self) -> usize {
        match &self.eq {
            HypersurfaceEq::Constant { i, .. } | HypersurfaceEq::Graph { i, .. } => *i,
        }
    }

    /// Position in `(P^1)^{n-1}` of the target coordinate `m ≠ i` (both 1-based).
    pub fn source_index(&self, m: usize) -> usize {
        if m < self.slot() {
            m
        } else {
            m - 1
        }
    }

    pub fn apply(&self, a: &[P1Point]) -> Result<Vec<P1Point>> {
        if a.len() + 1 != self.n {
            return Err(Error::invalid("e_V expects a point of (P^1)^(n-1)"));
        }
        let i = self.slot();
        let inserted = match &self.eq {
            HypersurfaceEq::Constant { zeta, .. } => zeta.clone(),
            HypersurfaceEq::Graph { j, g, .. } => apply_poly(g, &a[self.source_index(*j) - 1])?,
        };
        let mut out = a.to_vec();
        out.insert(i - 1, inserted);
        Ok(out)
    }

    /// Inverse on `V`: drop the slot.
    pub fn preimage(&self, pt: &[P1Point]) -> Vec<P1Point> {
        let mut out = pt.to_vec();
        out.remove(self.slot() - 1);
        out
    }

    /// `F ∘ e_V` for an equation of `(P^1)^n`, as a polynomial in `n - 1` variables.
    /// Constants must be rational here.
    pub fn pull_back(&self, f: &MPoly) -> Result<MPoly> {
        let n = self.n;
        let i = self.slot() - 1;
        let sub = match &self.eq {
            HypersurfaceEq::Constant { zeta, .. } => {
                let q = zeta
                    .finite()
                    .and_then(|a| a.as_rational())
                    .ok_or_else(|| Error::invalid("pull-back needs a rational constant"))?;
                f.eval_var(i, &q)
            }
            HypersurfaceEq::Graph { j, g, .. } => f.substitute(i, &MPoly::from_univariate(g, j - 1, n)),
        };
        let map: Vec<usize> = (0..n).map(|m| if m < i { m } else { m.saturating_sub(1) }).collect();
        Ok(sub.remap(&map, n - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn build_and_membership() {
        let f = p("x^2 + 1");
        let sig = Signature::new(2, vec![], vec![vec![1, 2]]).unwrap();
        let v = build_periodic(sig, vec![], vec![vec![f.clone()]], &f, None).unwrap();
        assert_eq!(v.d_v, DV::Finite(2));
        assert!(v.contains(&[P1Point::int(1), P1Point::int(2)]).unwrap());
        assert!(!v.contains(&[P1Point::int(1), P1Point::int(3)]).unwrap());

        // fixed point of x^2 + 1 is a root of x^2 - x + 1
        let z = AlgebraicNumber::nearest_root(&p("x^2 - x + 1"), 0.5, 0.87).unwrap();
        let sig = Signature::new(1, vec![1], vec![]).unwrap();
        let v = build_periodic(sig, vec![P1Point::Finite(z.clone())], vec![], &f, None).unwrap();
        assert_eq!(v.constants[0].period, 1);
        assert_eq!(v.d_v, DV::Infinite);
        assert!(v.contains(&[P1Point::Finite(z)]).unwrap());

        let sig = Signature::new(2, vec![], vec![vec![1], vec![2]]).unwrap();
        let v = build_periodic(sig, vec![], vec![vec![], vec![]], &f, None).unwrap();
        assert_eq!(v.d_v, DV::Infinite);
    }

    #[test]
    fn build_errors() {
        let f = p("x^2 + 1");
        let sig = Signature::new(1, vec![1], vec![]).unwrap();
        let err = build_periodic(sig, vec![P1Point::int(0)], vec![], &f, None).unwrap_err();
        assert!(matches!(err, Error::NonPeriodicConstant { .. }), "{err}");
        let sig = Signature::new(2, vec![], vec![vec![1, 2]]).unwrap();
        let err = build_periodic(sig, vec![], vec![vec![p("x^2")]], &f, None).unwrap_err();
        assert!(matches!(err, Error::NotCommuter { .. }), "{err}");
    }

    #[test]
    fn embeddings() {
        let z = P1Point::rational(rat(1, 2));
        let e = embed_in_hypersurface(2, HypersurfaceEq::Constant { i: 1, zeta: z.clone() }).unwrap();
        assert_eq!(e.apply(&[P1Point::int(5)]).unwrap(), vec![z, P1Point::int(5)]);

        let g = p("x^2 + 1");
        let e = embed_in_hypersurface(2, HypersurfaceEq::Graph { i: 2, j: 1, g: g.clone() }).unwrap();
        assert_eq!(e.apply(&[P1Point::int(3)]).unwrap(), vec![P1Point::int(3), P1Point::int(10)]);

        let e = embed_in_hypersurface(3, HypersurfaceEq::Graph { i: 1, j: 2, g }).unwrap();
        let out = e.apply(&[P1Point::int(2), P1Point::int(7)]).unwrap();
        assert_eq!(out, vec![P1Point::int(5), P1Point::int(2), P1Point::int(7)]);
        let pulled = e
            .pull_back(&crate::algebra::parse::parse_mpoly("x1 - x3", 3).unwrap())
            .unwrap();
        assert_eq!(pulled, crate::algebra::parse::parse_mpoly("x1^2 + 1 - x2", 2).unwrap());
    }
}
