//! Checking certificates against sampled intersection points, and the finite collection of
//! periodic hypersurfaces governing the anomalous locus.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{default_precision, isolate_roots, MPoly, P1Point, Poly};
use crate::classify::require_disintegrated;
use crate::commute::{commuter_set, default_k_max};
use crate::error::{Error, Result};
use crate::heights::HeightValue;
use crate::varieties::{
    build_periodic, check_nondegenerate, coefficient_vanishing_check, enumerate_signatures,
    AmbientVariety, PeriodicSubvariety, Signature, DV,
};

use super::certificate::{
    certificate_with, chain_projections, rational_commuters, structure_constant, CertifyOptions,
    HeightCertificate, ProjectionConstants,
};
use super::sample::sample_intersection;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRecord {
    #[serde(rename = "V")]
    pub v: String,
    #[serde(rename = "D_V")]
    pub d_v: DV,
    pub point: Vec<P1Point>,
    pub height: HeightValue,
    /// the coefficient-vanishing gate holds for every chain projection
    pub gate: bool,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarietyOutcome {
    #[serde(rename = "V")]
    pub v: String,
    #[serde(rename = "D_V")]
    pub d_v: DV,
    pub status: String,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignatureOutcome {
    pub signature: Signature,
    pub status: String,
    pub certificate: Option<HeightCertificate>,
    pub varieties: Vec<VarietyOutcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    /// `bounded`, `xoa_empty` or `violated`
    pub status: String,
    pub reason: Option<String>,
    pub signatures: Vec<SignatureOutcome>,
    pub samples: Vec<SampleRecord>,
    pub violations: Vec<SampleRecord>,
    pub anomalous: Vec<SampleRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Affine fixed points of `f`, used as the constant coordinates of the sampled `V`.
pub fn affine_fixed_points(f: &Poly) -> Result<Vec<P1Point>> {
    let g = f - &Poly::x();
    Ok(isolate_roots(&g.squarefree_part(), default_precision())?
        .into_iter()
        .map(P1Point::Finite)
        .collect())
}

fn describe(v: &PeriodicSubvariety) -> String {
    let mut parts: Vec<String> = v
        .constants
        .iter()
        .map(|c| format!("x{} = {}", c.index, c.value))
        .collect();
    for (chain, gens) in v.signature.chains.iter().zip(&v.generators) {
        for (w, g) in chain.windows(2).zip(gens) {
            parts.push(format!("x{} = {}", w[1], g.poly.fmt_var(&format!("x{}", w[0]))));
        }
    }
    if parts.is_empty() {
        "whole space".into()
    } else {
        parts.join(", ")
    }
}

fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::new();
        for prefix in &out {
            for item in c {
                let mut p = prefix.clone();
                p.push(item.clone());
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// All periodic `V` of a signature with fixed-point constants and generators from the lists;
/// top links of chains may also use `top_extra`.
fn varieties_of(
    sig: &Signature,
    f: &Poly,
    fixed: &[P1Point],
    gens: &[Poly],
    top_extra: &[Poly],
) -> Result<Vec<PeriodicSubvariety>> {
    let mut slots: Vec<Vec<Poly>> = Vec::new();
    for chain in &sig.chains {
        for pos in 1..chain.len() {
            let mut c = gens.to_vec();
            if pos + 1 == chain.len() {
                c.extend(top_extra.iter().cloned());
            }
            slots.push(c);
        }
    }
    let consts = cartesian(&vec![fixed.to_vec(); sig.constants.len()]);
    let links = cartesian(&slots);
    let mut out = Vec::new();
    for c in &consts {
        for l in &links {
            let mut it = l.iter().cloned();
            let generators: Vec<Vec<Poly>> = sig
                .chains
                .iter()
                .map(|ch| (1..ch.len()).map(|_| it.next().unwrap()).collect())
                .collect();
            out.push(build_periodic(sig.clone(), c.clone(), generators, f, None)?);
        }
    }
    Ok(out)
}

/// Periodic subvarieties of `(P^1)^n` of codimension `codim`: every signature, constants among
/// the affine fixed points of `f`, generators among the rational commuters of degree
/// `≤ max_gen_deg`.
pub fn enumerate_periodic(
    n: usize,
    codim: usize,
    f: &Poly,
    max_gen_deg: usize,
) -> Result<Vec<PeriodicSubvariety>> {
    require_disintegrated(f)?;
    if codim > n {
        return Err(Error::invalid(format!("codimension {codim} exceeds n = {n}")));
    }
    let fixed = affine_fixed_points(f)?;
    let gens = rational_commuters(f, max_gen_deg)?;
    let mut out = Vec::new();
    for sig in enumerate_signatures(n, codim) {
        out.extend(varieties_of(&sig, f, &fixed, &gens, &[])?);
    }
    Ok(out)
}

/// Whether the coefficient-vanishing gate holds at `pt` for every chain projection.
fn gate_at(projections: &[(MPoly, ProjectionConstants)], pt: &[P1Point]) -> Result<bool> {
    for (big_f, pc) in projections {
        let vals: Vec<Option<P1Point>> = (1..=pt.len())
            .map(|i| (i != pc.pivot).then(|| pt[i - 1].clone()))
            .collect();
        if !coefficient_vanishing_check(big_f, pc.pivot, &vals)?.nonvanishing {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerate periodic `V` of codimension `dim X`, sample `X ∩ V` exactly and compare every
/// point passing the gate with the certificate of its signature. Generators are the rational
/// commuters of degree `≤ max_gen_deg`; top links additionally use the smallest commuter of
/// degree above `c2`, which puts `V` in the regime `D(V) > c2`. Constants are the affine
/// fixed points of `f`. `budget` caps the points kept per `V`.
pub fn verify_bounded(
    x: &AmbientVariety,
    f: &Poly,
    codim: usize,
    max_gen_deg: usize,
    budget: usize,
    opts: &CertifyOptions,
) -> Result<VerifyReport> {
    require_disintegrated(f)?;
    if codim != x.dim {
        return Err(Error::invalid(format!(
            "codimension {codim} of V must equal dim X = {}",
            x.dim
        )));
    }
    if let Err(e) = check_nondegenerate(x, f, default_k_max(f)?) {
        return match e {
            Error::XoaEmpty(why) => Ok(VerifyReport {
                status: "xoa_empty".into(),
                reason: Some(why),
                signatures: Vec::new(),
                samples: Vec::new(),
                violations: Vec::new(),
                anomalous: Vec::new(),
            }),
            e => Err(e),
        };
    }
    let fixed = affine_fixed_points(f)?;
    let gens = rational_commuters(f, max_gen_deg)?;
    let results: Vec<Result<(SignatureOutcome, Vec<SampleRecord>)>> = enumerate_signatures(x.n, codim)
        .into_par_iter()
        .map(|sig| verify_signature(x, f, &sig, &fixed, &gens, budget, opts))
        .collect();
    let mut signatures = Vec::new();
    let mut samples = Vec::new();
    for r in results {
        let (s, pts) = r?;
        signatures.push(s);
        samples.extend(pts);
    }
    let violations: Vec<SampleRecord> = samples
        .iter()
        .filter(|s| s.gate && s.height.lo() > s.bound)
        .cloned()
        .collect();
    let anomalous: Vec<SampleRecord> = samples.iter().filter(|s| !s.gate).cloned().collect();
    Ok(VerifyReport {
        status: if violations.is_empty() { "bounded" } else { "violated" }.into(),
        reason: None,
        signatures,
        samples,
        violations,
        anomalous,
    })
}

fn verify_signature(
    x: &AmbientVariety,
    f: &Poly,
    sig: &Signature,
    fixed: &[P1Point],
    gens: &[Poly],
    budget: usize,
    opts: &CertifyOptions,
) -> Result<(SignatureOutcome, Vec<SampleRecord>)> {
    let cert = match certificate_with(x, sig, f, opts) {
        Ok(c) => c,
        Err(Error::XoaEmpty(why)) => {
            return Ok((
                SignatureOutcome {
                    signature: sig.clone(),
                    status: format!("xoa_empty: {why}"),
                    certificate: None,
                    varieties: Vec::new(),
                },
                Vec::new(),
            ))
        }
        Err(e) => return Err(e),
    };
    let projections = chain_projections(x, sig, f, opts)?;
    let above = rational_commuters(f, (cert.c2.floor() as usize + 1) * f.deg())?
        .into_iter()
        .filter(|g| g.deg() as f64 > cert.c2)
        .min_by_key(|g| g.deg())
        .into_iter()
        .collect::<Vec<_>>();
    let vs = varieties_of(sig, f, fixed, gens, &above)?;
    let mut outcomes = Vec::new();
    let mut records = Vec::new();
    for v in vs {
        let name = describe(&v);
        match sample_intersection(x, &v, budget) {
            Ok(s) => {
                for (pt, h) in s.points.iter().zip(&s.heights) {
                    records.push(SampleRecord {
                        v: name.clone(),
                        d_v: v.d_v,
                        point: pt.clone(),
                        height: *h,
                        gate: gate_at(&projections, pt)?,
                        bound: cert.c1,
                    });
                }
                outcomes.push(VarietyOutcome {
                    v: name,
                    d_v: v.d_v,
                    status: "sampled".into(),
                    points: s.points.len(),
                });
            }
            Err(Error::NonComplementary(why)) => outcomes.push(VarietyOutcome {
                v: name,
                d_v: v.d_v,
                status: format!("anomalous fiber: {why}"),
                points: 0,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok((
        SignatureOutcome {
            signature: sig.clone(),
            status: "certified".into(),
            certificate: Some(cert),
            varieties: outcomes,
        },
        records,
    ))
}

/// A periodic hypersurface `x_j = g(x_k)` of the collection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GraphHypersurface {
    pub j: usize,
    pub k: usize,
    pub g: String,
    pub degree: usize,
    pub witness: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    /// `ok` or `xoa_empty`
    pub status: String,
    pub reason: Option<String>,
    pub c5: f64,
    #[serde(rename = "M")]
    pub m: u64,
    pub hypersurfaces: Vec<GraphHypersurface>,
    /// the families `x_j = ∞` and `x_j = ζ` (ζ periodic), which are not finite lists
    pub families: Vec<String>,
}

/// `M = ⌊n² c5⌋ + 1` and the graphs `x_j = g(x_k)`, `j ≠ k`, of all commuters of degree at
/// most `M`. The projection sampling in `opts` only selects factors of eliminants, so the
/// collection does not depend on it.
pub fn structure_degree_bound(
    x: &AmbientVariety,
    f: &Poly,
    opts: &CertifyOptions,
) -> Result<StructureReport> {
    require_disintegrated(f)?;
    let k_max = default_k_max(f)?;
    if let Err(e) = check_nondegenerate(x, f, k_max) {
        return match e {
            Error::XoaEmpty(why) => Ok(StructureReport {
                status: "xoa_empty".into(),
                reason: Some(why),
                c5: 0.0,
                m: 0,
                hypersurfaces: Vec::new(),
                families: Vec::new(),
            }),
            e => Err(e),
        };
    }
    let (c5, m) = structure_constant(x, opts)?;
    let set = commuter_set(f, k_max)?;
    let mut out = Vec::new();
    for c in set.elements_up_to(m as usize) {
        for j in 1..=x.n {
            for k in 1..=x.n {
                if j != k {
                    out.push(GraphHypersurface {
                        j,
                        k,
                        g: match set.rational(&c) {
                            Some(p) => p.fmt_var(&format!("x{k}")),
                            None => set.format(&c),
                        },
                        degree: c.degree,
                        witness: c.witness,
                    });
                }
            }
        }
    }
    out.sort();
    Ok(StructureReport {
        status: "ok".into(),
        reason: None,
        c5,
        m,
        hypersurfaces: out,
        families: vec![
            "x_j = inf for each j".into(),
            "x_j = zeta for each j and each f-periodic zeta".into(),
        ],
    })
}
