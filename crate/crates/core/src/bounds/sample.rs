//! Exact points of `X ∩ V` for complementary `X` and periodic `V`.

use serde::Serialize;

use crate::algebra::{MPoly, P1Point};
use crate::error::{Error, Result};
use crate::heights::{height_n, HeightValue};
use crate::varieties::solve::{solve_zero_dim, SolveFailure};
use crate::varieties::{AmbientVariety, PeriodicSubvariety};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionSample {
    #[serde(rename = "V")]
    pub v: PeriodicSubvariety,
    pub points: Vec<Vec<P1Point>>,
    pub heights: Vec<HeightValue>,
    /// number of affine points found before truncation to the budget
    pub total: usize,
}

/// Substitute the chain relations of `V` into `X`, leaving the chain heads and the irrational
/// constant coordinates as unknowns, and solve. Only affine points are returned; at most
/// `budget` of them, in the solver's order.
pub fn sample_intersection(
    x: &AmbientVariety,
    v: &PeriodicSubvariety,
    budget: usize,
) -> Result<IntersectionSample> {
    let n = x.n;
    if v.n() != n {
        return Err(Error::invalid("X and V live in different products"));
    }
    if x.dim + v.dim() != n {
        return Err(Error::NonComplementary(format!(
            "dim X + dim V = {} + {} differs from n = {n}",
            x.dim,
            v.dim()
        )));
    }
    let mut eqs: Vec<MPoly> = x.equations.clone();
    let mut unknowns: Vec<usize> = Vec::new();
    let mut extra = Vec::new();
    for c in &v.constants {
        let i = c.index - 1;
        let Some(a) = c.value.finite() else {
            // no affine points with a coordinate at infinity
            return Ok(empty(v));
        };
        match a.as_rational() {
            Some(q) => {
                for e in eqs.iter_mut() {
                    *e = e.eval_var(i, &q);
                }
            }
            None => {
                unknowns.push(i);
                extra.push(MPoly::from_univariate(a.minpoly(), i, n));
            }
        }
    }
    for (k, chain) in v.signature.chains.iter().enumerate() {
        let head = chain[0] - 1;
        unknowns.push(head);
        let maps = v.chain_maps(k);
        for (pos, &i) in chain.iter().enumerate().skip(1) {
            let sub = MPoly::from_univariate(&maps[pos], head, n);
            for e in eqs.iter_mut() {
                *e = e.substitute(i - 1, &sub);
            }
        }
    }
    unknowns.sort_unstable();
    eqs.extend(extra);
    let sols = match solve_zero_dim(&eqs, &unknowns)? {
        Ok(s) => s,
        Err(SolveFailure::PositiveDimensional(var)) => {
            return Err(Error::NonComplementary(format!(
                "X ∩ V has a positive-dimensional component (free in x{})",
                var + 1
            )))
        }
    };
    let mut points = Vec::new();
    for s in sols {
        // keep only the conjugate matching each constant
        if v
            .constants
            .iter()
            .any(|c| s[c.index - 1].as_ref().map(|a| P1Point::Finite(a.clone())) != Some(c.value.clone()))
        {
            continue;
        }
        let heads: Vec<P1Point> = v
            .signature
            .chains
            .iter()
            .map(|c| P1Point::Finite(s[c[0] - 1].clone().expect("head solved")))
            .collect();
        // on V by construction; on X because the substituted system vanishes exactly
        points.push(v.point_from_heads(&heads)?);
    }
    let total = points.len();
    points.truncate(budget);
    let heights = points.iter().map(|p| height_n(p)).collect::<Result<Vec<_>>>()?;
    Ok(IntersectionSample {
        v: v.clone(),
        points,
        heights,
        total,
    })
}

fn empty(v: &PeriodicSubvariety) -> IntersectionSample {
    IntersectionSample {
        v: v.clone(),
        points: Vec::new(),
        heights: Vec::new(),
        total: 0,
    }
}
