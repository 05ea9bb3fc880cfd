//! Explicit bounded-height certificates for `X^oa ∩ V`, `V` ranging over the periodic
//! subvarieties of a fixed signature.

use serde::Serialize;

use crate::algebra::{MPoly, P1Point, Poly};
use crate::classify::require_disintegrated;
use crate::commute::{commuter_set, default_k_max};
use crate::error::{Error, Result};
use crate::heights::{
    height_expansion_constant, height_n, hypersurface_upper_constant, ln_int, InequalityConstants,
};
use crate::varieties::ambient::DEFAULT_PROJECTION_SAMPLES;
use crate::varieties::solve::{solve_zero_dim, univariate_eliminant, SolveFailure};
use crate::varieties::{
    check_nondegenerate, embed_in_hypersurface, projection_hypersurface_sampled,
    AmbientVariety, Embedding, HypersurfaceEq, Signature,
};

/// Sampling parameters for the projections `F^J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            samples: DEFAULT_PROJECTION_SAMPLES,
            seed: 0,
        }
    }
}

/// The height inequality attached to one projection `F^{Γ_k}` with pivot the top of chain `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionConstants {
    pub gamma: Vec<usize>,
    pub pivot: usize,
    pub polynomial: String,
    /// largest coefficient `2 deg_{x_j} F` over `j ∈ Γ`
    pub coefficient: f64,
    pub constants: InequalityConstants,
}

/// Height bound on the part of `X ∩ V` handled by descending to a hypersurface `H ⊇ V`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DescentBound {
    pub hypersurface: String,
    pub degree: usize,
    pub bound: f64,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightCertificate {
    pub x_id: String,
    pub signature: Signature,
    /// bound on the Weil height `h_n` of points of `X^oa ∩ V ∩ A^n`
    pub c1: f64,
    /// `D(V)` threshold of the direct estimate
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// bound on `Σ ĥ_f(α_i)` when `D(V) > c2`
    pub canonical_sum_bound: f64,
    #[serde(rename = "Cf")]
    pub cf: f64,
    /// `|h - ĥ_f| ≤ Cf/(d-1)`
    pub height_gap: f64,
    pub constants_used: Vec<ProjectionConstants>,
    pub descents: Vec<DescentBound>,
    #[serde(rename = "M")]
    pub m: u64,
    pub provenance: Vec<String>,
}

fn up(x: f64) -> f64 {
    crate::heights::up(x)
}

/// Largest linear coefficient `2 deg_{x_j} F^J` over all `(r+1)`-subsets `J` and pivots of
/// positive degree, together with the structure degree bound `M = ⌊n² c⌋ + 1`.
pub(crate) fn structure_constant(x: &AmbientVariety, opts: &CertifyOptions) -> Result<(f64, u64)> {
    let mut c = 0.0f64;
    for j in subsets(x.n, x.dim + 1) {
        let big_f = projection_hypersurface_sampled(x, &j, opts.samples, opts.seed)?;
        for &p in &j {
            if big_f.degree_in(p - 1) == 0 {
                continue;
            }
            let m = j
                .iter()
                .filter(|&&q| q != p)
                .map(|&q| big_f.degree_in(q - 1))
                .max()
                .unwrap_or(0);
            c = c.max(2.0 * m as f64);
        }
    }
    let n2 = (x.n * x.n) as f64;
    Ok((c, (up(n2 * c)).floor() as u64 + 1))
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(s: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in s..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

/// Per-chain projections `F^{Γ_k}`, `Γ_k = Γ ∪ {top_k}`, with their inequality constants.
pub fn chain_projections(
    x: &AmbientVariety,
    sig: &Signature,
    f: &Poly,
    opts: &CertifyOptions,
) -> Result<Vec<(MPoly, ProjectionConstants)>> {
    let gamma = sig.dominated();
    let mut out = Vec::new();
    for top in sig.tops() {
        let mut j = gamma.clone();
        j.push(top);
        j.sort_unstable();
        let big_f = projection_hypersurface_sampled(x, &j, opts.samples, opts.seed)?;
        let consts = match InequalityConstants::compute(&big_f, f, top - 1) {
            Err(Error::PivotDegreeZero(_)) => {
                return Err(Error::XoaEmpty(format!(
                    "x{top} does not occur in the projection {big_f}, so no point of X^oa is affine"
                )))
            }
            other => other?,
        };
        let coefficient = gamma
            .iter()
            .map(|&g| 2.0 * big_f.degree_in(g - 1) as f64)
            .fold(0.0, f64::max);
        out.push((
            big_f.clone(),
            ProjectionConstants {
                gamma: gamma.clone(),
                pivot: top,
                polynomial: big_f.to_string(),
                coefficient,
                constants: consts,
            },
        ));
    }
    Ok(out)
}

/// The certificate for `X` and a signature of periodic subvarieties of complementary dimension.
pub fn certificate(x: &AmbientVariety, sig: &Signature, f: &Poly) -> Result<HeightCertificate> {
    certificate_with(x, sig, f, &CertifyOptions::default())
}

pub fn certificate_with(
    x: &AmbientVariety,
    sig: &Signature,
    f: &Poly,
    opts: &CertifyOptions,
) -> Result<HeightCertificate> {
    require_disintegrated(f)?;
    let mut cert = certify_inner(x, sig, f, opts, 0)?;
    let (c5, m) = structure_constant(x, opts)?;
    cert.m = m;
    cert.provenance.push(format!(
        "M = floor(n^2 c5) + 1 = {m} with c5 = {c5} the largest coefficient 2 deg_xj F^J over all (r+1)-subsets J"
    ));
    Ok(cert)
}

fn certify_inner(
    x: &AmbientVariety,
    sig: &Signature,
    f: &Poly,
    opts: &CertifyOptions,
    depth: usize,
) -> Result<HeightCertificate> {
    let n = x.n;
    let r = x.dim;
    if sig.n != n || sig.dim() + r != n {
        return Err(Error::invalid(format!(
            "signature {sig} does not have dimension n - dim X = {}",
            n - r
        )));
    }
    let k_max = default_k_max(f)?;
    check_nondegenerate(x, f, k_max)?;
    let d = f.deg();
    let cf = height_expansion_constant(f)?;
    let gap = up(cf / (d - 1) as f64);
    let mut provenance = vec![
        format!("Cf = {cf} (height expansion constant of f)"),
        format!("|h - h_f| <= Cf/(d-1) = {gap} per coordinate"),
    ];

    let projections = chain_projections(x, sig, f, opts)?;
    let c3 = projections
        .iter()
        .map(|(_, p)| p.coefficient)
        .fold(0.0, f64::max)
        .max(1.0);
    let c4 = projections
        .iter()
        .map(|(_, p)| p.constants.c5)
        .fold(0.0, f64::max);
    provenance.push(format!(
        "c3 = {c3}: largest coefficient 2 deg_xj F^(Gamma_k) with Gamma = {:?} (at least 1)",
        sig.dominated()
    ));
    provenance.push(format!("c4 = {c4}: largest C5 over the chain projections"));
    let nf = n as f64;
    let (c2, hat_sum) = if sig.all_chains_trivial() {
        provenance.push(
            "all chains have length 1: every top is bounded by c4 since constants are periodic"
                .into(),
        );
        (2.0 * nf * nf * c3, up((n - r) as f64 * c4))
    } else {
        // exact: c3 is an even integer
        let c2 = 2.0 * nf * nf * c3;
        provenance.push(format!("c2 = 2 n^2 c3 = {c2}"));
        provenance.push("D(V) > c2 gives sum of tops <= 2 n c4 and total <= 2 n c4 + c4/c3".into());
        (c2, up(up(2.0 * nf * c4) + up(c4 / c3)))
    };
    let direct = up(hat_sum + up(nf * gap));
    provenance.push(format!(
        "direct bound on h_n: {hat_sum} + n Cf/(d-1) = {direct}"
    ));

    let mut c1 = direct;
    let mut descents = Vec::new();
    if !sig.all_chains_trivial() {
        let (b, ds) = descend(x, sig, f, c2, opts, depth)?;
        provenance.push(format!(
            "D(V) <= c2: descent through {} hypersurfaces x_top = g(x_prev), bound {b}",
            ds.len()
        ));
        c1 = c1.max(b);
        descents = ds;
    }
    provenance.push(format!("c1 = {c1}"));
    Ok(HeightCertificate {
        x_id: x.equation_strings().join("; "),
        signature: sig.clone(),
        c1,
        c2,
        c3,
        c4,
        canonical_sum_bound: hat_sum,
        cf,
        height_gap: gap,
        constants_used: projections.into_iter().map(|(_, p)| p).collect(),
        descents,
        m: 0,
        provenance,
    })
}

/// Rational commuters of degree at most `max_degree`; an error if some have irrational
/// coefficients, since they could not be substituted into `X`.
pub(crate) fn rational_commuters(f: &Poly, max_degree: usize) -> Result<Vec<Poly>> {
    let set = commuter_set(f, default_k_max(f)?)?;
    let mut out = Vec::new();
    for c in set.elements_up_to(max_degree) {
        match set.rational(&c) {
            Some(p) => out.push(p),
            None => {
                return Err(Error::invalid(format!(
                    "commuter {} has irrational coefficients; descent needs rational commuters",
                    set.format(&c)
                )))
            }
        }
    }
    Ok(out)
}

/// Bounds for `V` with `D(V) ≤ c2`: such `V` lie in a hypersurface `H: x_top = g(x_prev)` with
/// `deg g ≤ c2`, and `e_H^{-1}(X ∩ H)` has smaller dimension.
fn descend(
    x: &AmbientVariety,
    sig: &Signature,
    f: &Poly,
    c2: f64,
    opts: &CertifyOptions,
    depth: usize,
) -> Result<(f64, Vec<DescentBound>)> {
    let n = x.n;
    let gs = rational_commuters(f, c2.floor() as usize)?;
    let mut best = 0.0f64;
    let mut out = Vec::new();
    for (k, chain) in sig.chains.iter().enumerate() {
        if chain.len() < 2 {
            continue;
        }
        let top = chain[chain.len() - 1];
        let prev = chain[chain.len() - 2];
        for g in &gs {
            let e = embed_in_hypersurface(n, HypersurfaceEq::Graph { i: top, j: prev, g: g.clone() })?;
            let name = e.eq.to_string();
            let eqs: Vec<MPoly> = x
                .equations
                .iter()
                .map(|q| e.pull_back(q))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|q| !q.is_zero())
                .collect();
            let (bound, status) = if x.dim == 1 {
                finite_fiber_bound(&eqs, n - 1, &e, g)?
                    .ok_or_else(|| Error::invalid(format!("X meets {name} in a curve")))?
            } else {
                let xp = AmbientVariety::new(n - 1, eqs, x.dim - 1)?;
                let mut chains = sig.chains.clone();
                chains[k].pop();
                let relabel = |v: &Vec<usize>| v.iter().map(|&i| e.source_index(i)).collect::<Vec<_>>();
                let sp = Signature::new(
                    n - 1,
                    relabel(&sig.constants),
                    chains.iter().map(relabel).collect(),
                )?;
                match certify_inner(&xp, &sp, f, opts, depth + 1) {
                    Ok(c) => {
                        let lift = up(up(c.c1 * (1 + g.deg()) as f64)
                            + hypersurface_upper_constant(&MPoly::from_univariate(g, 0, 1)));
                        (lift, format!("recursive certificate c1 = {}", c.c1))
                    }
                    Err(Error::XoaEmpty(why)) => (0.0, format!("X^oa empty after descent: {why}")),
                    Err(e) => return Err(e),
                }
            };
            best = best.max(bound);
            out.push(DescentBound {
                hypersurface: name,
                degree: g.deg(),
                bound,
                status,
            });
        }
    }
    Ok((best, out))
}

/// Largest solver degree for which the points of a finite fiber are computed exactly.
pub const EXACT_FIBER_DEGREE: usize = 32;

/// Bound on `h_n(e(p))` over the finite set `eqs = 0` in `m` variables; `None` when the set
/// is not finite. Small fibers are solved exactly. Otherwise each coordinate is a root of
/// its eliminant `P`, so `h ≤ ln M(P) ≤ ln ‖P‖₂`, and the inserted coordinate `g(x_j)`
/// adds `deg g · h(x_j) + C1(g)`.
fn finite_fiber_bound(
    eqs: &[MPoly],
    m: usize,
    e: &Embedding,
    g: &Poly,
) -> Result<Option<(f64, String)>> {
    let unknowns: Vec<usize> = (0..m).collect();
    let mut elim = Vec::new();
    for &u in &unknowns {
        match univariate_eliminant(eqs, &unknowns, u) {
            Ok(Some(p)) if p.deg() > 0 => elim.push(p),
            Ok(_) => return Ok(Some((0.0, "no affine points".into()))),
            Err(SolveFailure::PositiveDimensional(_)) => return Ok(None),
        }
    }
    if elim.iter().all(|p| p.deg() <= EXACT_FIBER_DEGREE) {
        let sols = match solve_zero_dim(eqs, &unknowns)? {
            Ok(s) => s,
            Err(SolveFailure::PositiveDimensional(_)) => return Ok(None),
        };
        let mut b = 0.0f64;
        for s in &sols {
            let pt: Vec<P1Point> = s.iter().map(|a| a.clone().unwrap().into()).collect();
            b = b.max(height_n(&e.apply(&pt)?)?.hi());
        }
        return Ok(Some((b, format!("{} intersection points", sols.len()))));
    }
    let per: Vec<f64> = elim.iter().map(landau_height_bound).collect();
    let HypersurfaceEq::Graph { j, .. } = &e.eq else {
        return Err(Error::invalid("descent hypersurfaces are graphs"));
    };
    let hj = per[e.source_index(*j) - 1];
    let inserted = up(up(g.deg() as f64 * hj) + hypersurface_upper_constant(&MPoly::from_univariate(g, 0, 1)));
    let total = per.iter().fold(inserted, |a, &b| up(a + b));
    let degs: Vec<usize> = elim.iter().map(|p| p.deg()).collect();
    Ok(Some((total, format!("Mahler bound from eliminants of degrees {degs:?}"))))
}

/// `ln ‖P‖₂` for the primitive integer multiple of `P`, an upper bound for the height of
/// every root of `P`.
pub fn landau_height_bound(p: &Poly) -> f64 {
    let sq: num_bigint::BigInt = p.primitive_int().iter().map(|c| c * c).sum();
    up(0.5 * ln_int(&sq).1)
}
