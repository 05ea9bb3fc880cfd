//! The ambient variety `X`, its coordinate projections `F^J`, and the nondegeneracy gates
//! under which `X^oa` can be nonempty.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::periodic::commuter_witness;
use super::solve::{eliminate, solve_zero_dim, vanishes_at, Elimination};
use crate::algebra::parse::parse_equations;
use crate::algebra::{AlgebraicNumber, MPoly, P1Point, Poly, Rational};
use crate::error::{Error, Result};

/// Samples used to select `F^J` among candidate factors.
pub const DEFAULT_PROJECTION_SAMPLES: usize = 4;

/// `X ⊂ (P^1)^n` given by equations in the affine chart, of declared dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientVariety {
    pub n: usize,
    pub equations: Vec<MPoly>,
    pub dim: usize,
}

impl Serialize for AmbientVariety {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AmbientVariety", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("equations", &self.equation_strings())?;
        st.serialize_field("dim", &self.dim)?;
        st.end()
    }
}

impl AmbientVariety {
    pub fn new(n: usize, equations: Vec<MPoly>, dim: usize) -> Result<Self> {
        if equations.iter().any(|e| e.is_zero()) {
            return Err(Error::ZeroPolynomial);
        }
        if equations.iter().any(|e| e.nvars() != n) {
            return Err(Error::invalid(format!("equations must be in x1..x{n}")));
        }
        if dim > n {
            return Err(Error::invalid("dimension exceeds the ambient dimension"));
        }
        Ok(AmbientVariety { n, equations, dim })
    }

    /// Parse one equation per line (`lhs = rhs` or `expr`, `#` comments allowed).
    pub fn parse(text: &str, n: usize, dim: usize) -> Result<Self> {
        AmbientVariety::new(n, parse_equations(text, n)?, dim)
    }

    pub fn equation_strings(&self) -> Vec<String> {
        self.equations.iter().map(|e| e.to_string()).collect()
    }

    /// Exact test that every equation vanishes at an affine point.
    pub fn contains(&self, pt: &[P1Point]) -> Result<bool> {
        let Some(vals) = affine(pt) else {
            return Err(Error::invalid("membership in X is tested in the affine chart only"));
        };
        for e in &self.equations {
            if !vanishes_at(e, &vals)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Random points of `X`: the `free` coordinates (1-based) get random rationals and the
    /// remaining coordinates are solved for. Fibres of positive dimension are skipped.
    pub fn sample_points(&self, free: &[usize], count: usize, seed: u64) -> Result<Vec<Vec<P1Point>>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let unknowns: Vec<usize> = (0..self.n).filter(|i| !free.contains(&(i + 1))).collect();
        let mut out = Vec::new();
        let mut attempts = 0;
        while out.len() < count && attempts < 8 * count.max(1) {
            attempts += 1;
            let vals: Vec<Rational> = free
                .iter()
                .map(|_| Rational::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=6).into()))
                .collect();
            let eqs: Vec<MPoly> = self
                .equations
                .iter()
                .map(|e| {
                    free.iter()
                        .zip(&vals)
                        .fold(e.clone(), |acc, (&i, v)| acc.eval_var(i - 1, v))
                })
                .collect();
            let Ok(sols) = solve_zero_dim(&eqs, &unknowns)? else {
                continue;
            };
            for mut s in sols {
                for (&i, v) in free.iter().zip(&vals) {
                    s[i - 1] = Some(AlgebraicNumber::from_rational(v));
                }
                out.push(s.into_iter().map(|a| P1Point::Finite(a.unwrap())).collect());
                if out.len() == count {
                    break;
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn affine(pt: &[P1Point]) -> Option<Vec<Option<AlgebraicNumber>>> {
    pt.iter().map(|p| p.finite().cloned().map(Some)).collect()
}

fn fmt_set(j: &[usize]) -> String {
    let s: Vec<String> = j.iter().map(|i| format!("x{i}")).collect();
    format!("({})", s.join(", "))
}

/// Polynomials cutting out the projection of `X` to the coordinates `keep` (1-based).
fn project(x: &AmbientVariety, keep: &[usize]) -> Result<Vec<MPoly>> {
    let others: Vec<usize> = (0..x.n).filter(|i| !keep.contains(&(i + 1))).collect();
    match eliminate(&x.equations, &others) {
        Elimination::Polys(p) => Ok(p),
        Elimination::CommonFactor(v) => Err(Error::invalid(format!(
            "equations share a factor in x{}; X is not cut out in the declared dimension",
            v + 1
        ))),
    }
}

/// `F^J`: the polynomial defining the projection of `X` to the coordinates `J` (1-based,
/// `|J| = dim + 1`), kept in the variables `x1..xn`.
pub fn projection_hypersurface(x: &AmbientVariety, j: &[usize]) -> Result<MPoly> {
    projection_hypersurface_sampled(x, j, DEFAULT_PROJECTION_SAMPLES, 0)
}

pub fn projection_hypersurface_sampled(
    x: &AmbientVariety,
    j: &[usize],
    samples: usize,
    seed: u64,
) -> Result<MPoly> {
    if j.len() != x.dim + 1 || j.iter().any(|&i| i == 0 || i > x.n) {
        return Err(Error::invalid(format!(
            "projection needs {} distinct indices in 1..{}",
            x.dim + 1,
            x.n
        )));
    }
    let polys = project(x, j)?;
    if polys.iter().any(|p| p.is_constant()) {
        return Err(Error::XoaEmpty("the affine part of X is empty".into()));
    }
    let Some(g) = polys.iter().min_by_key(|p| (p.total_degree(), p.num_terms())).cloned() else {
        return Err(Error::invalid(format!(
            "equations do not cut out a variety of dimension {}",
            x.dim
        )));
    };
    if polys.iter().any(|p| p.div_exact(&g).is_none()) {
        return Err(Error::XoaEmpty(format!(
            "projection to {} has dimension < {}",
            fmt_set(j),
            x.dim
        )));
    }
    // resultants may carry extraneous factors in a single variable
    let mut candidates = vec![g.clone()];
    let mut h = g.clone();
    for &v in j {
        if let Some(c) = univariate_content(&h, v - 1) {
            if let Some(q) = h.div_exact(&c) {
                if !q.is_constant() {
                    h = q.primitive();
                }
            }
        }
    }
    if h != g {
        candidates.insert(0, h);
    }
    let pts = x.sample_points(&j[..x.dim], samples, seed)?;
    for cand in candidates {
        let mut ok = true;
        for pt in &pts {
            if !vanishes_at(&cand, &affine(pt).unwrap())? {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(cand);
        }
    }
    Err(Error::invalid("no eliminant factor vanishes on the sampled points of X"))
}

/// The gcd of the coefficients of `p` viewed as a polynomial in the variables other than
/// `var`, each coefficient being univariate in `var`. `None` when trivial.
fn univariate_content(p: &MPoly, var: usize) -> Option<MPoly> {
    if !p.uses_var(var) {
        return None;
    }
    let n = p.nvars();
    let others: Vec<usize> = (0..n).filter(|&v| v != var).collect();
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<(u32, Rational)>> = Default::default();
    for (e, c) in p.terms() {
        let key: Vec<u32> = others.iter().map(|&v| e[v]).collect();
        groups.entry(key).or_default().push((e[var], c.clone()));
    }
    let mut g: Option<Poly> = None;
    for terms in groups.values() {
        let mut coeffs = vec![Rational::from_integer(0.into()); terms.iter().map(|t| t.0 as usize).max().unwrap() + 1];
        for (k, c) in terms {
            coeffs[*k as usize] = c.clone();
        }
        let q = Poly::from_coeffs(coeffs);
        g = Some(match g {
            None => q,
            Some(h) => h.gcd(&q),
        });
    }
    let g = g?;
    (g.deg() >= 1).then(|| MPoly::from_univariate(&g, var, n))
}

/// Result of the coefficient-vanishing gate at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientCheck {
    /// some coefficient `F_k`, `k ≥ 1`, of the pivot is nonzero at the point
    pub nonvanishing: bool,
    /// the largest such `k`
    pub k: Option<usize>,
}

/// Write `F = Σ F_k x_pivot^k` and test which `F_k` (`k ≥ 1`) vanish at the point, which
/// supplies every variable of `F` except the pivot (1-based).
pub fn coefficient_vanishing_check(
    f: &MPoly,
    pivot: usize,
    point: &[Option<P1Point>],
) -> Result<CoefficientCheck> {
    let vals: Vec<Option<AlgebraicNumber>> = point
        .iter()
        .map(|p| p.as_ref().and_then(|p| p.finite().cloned()))
        .collect();
    let parts = f.coefficients_in(pivot - 1);
    for k in (1..parts.len()).rev() {
        if !parts[k].is_zero() && !vanishes_at(&parts[k], &vals)? {
            return Ok(CoefficientCheck {
                nonvanishing: true,
                k: Some(k),
            });
        }
    }
    Ok(CoefficientCheck {
        nonvanishing: false,
        k: None,
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// If `F` is `c·(x_i - g(x_j))` with `g` commuting with an iterate of `f`, that hypersurface.
fn graph_of_commuter(big_f: &MPoly, i: usize, j: usize, f: &Poly, k_max: usize) -> Option<Poly> {
    let parts = big_f.coefficients_in(i - 1);
    if parts.len() != 2 {
        return None;
    }
    let c = parts[1].as_constant()?;
    let g = parts[0].scale(&(-c.recip())).to_univariate(j - 1)?;
    commuter_witness(&g, f, k_max).map(|_| g)
}

/// Raise [`Error::XoaEmpty`] when `X` is contained in a proper special subvariety or some
/// projection to `dim` coordinates is not dominant; otherwise `Ok`.
pub fn check_nondegenerate(x: &AmbientVariety, f: &Poly, k_max: usize) -> Result<()> {
    let r = x.dim;
    if r == 0 || r >= x.n {
        return Err(Error::invalid(format!(
            "nondegeneracy gates need 1 <= dim <= n - 1, got dim {r} in (P^1)^{}",
            x.n
        )));
    }
    for j in subsets(x.n, r) {
        let polys = project(x, &j)?;
        if polys.iter().any(|p| p.is_constant()) {
            return Err(Error::XoaEmpty("the affine part of X is empty".into()));
        }
        if let Some(p) = polys.first() {
            let what = if r == 1 { "a constant coordinate" } else { "a non-dominant projection" };
            return Err(Error::XoaEmpty(format!(
                "X has {what}: {} satisfies {p} = 0",
                fmt_set(&j)
            )));
        }
    }
    if r == 1 {
        for pair in subsets(x.n, 2) {
            let big_f = projection_hypersurface(x, &pair)?;
            for (i, j) in [(pair[1], pair[0]), (pair[0], pair[1])] {
                if let Some(g) = graph_of_commuter(&big_f, i, j, f, k_max) {
                    return Err(Error::XoaEmpty(format!(
                        "X lies in the periodic hypersurface x{i} = {}",
                        g.fmt_var(&format!("x{j}"))
                    )));
                }
            }
        }
    }
    Ok(())
}
