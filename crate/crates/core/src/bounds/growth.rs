//! Families `X ∩ V_m` whose heights are unbounded: the point lies on an anomalous curve of
//! `X ∩ V_m`, so no certificate applies and the heights grow like `d^m`.

use serde::Serialize;

use crate::algebra::{P1Point, Poly};
use crate::classify::require_disintegrated;
use crate::error::{Error, Result};
use crate::heights::{
    canonical_height, height_expansion_constant, height_n, HeightValue, DEFAULT_TARGET_ERROR,
};
use crate::varieties::{build_periodic, AmbientVariety, PeriodicSubvariety, Signature};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub m: usize,
    #[serde(rename = "V")]
    pub v: String,
    pub point: Vec<P1Point>,
    pub height: HeightValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthTable {
    pub example: u8,
    pub f: String,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub seed: P1Point,
    pub seed_canonical_height: HeightValue,
    #[serde(rename = "Cf")]
    pub cf: f64,
    pub rows: Vec<GrowthRow>,
    /// heights strictly increase with `m`
    pub increasing: bool,
    /// `h_{m+1} ≥ d h_m - Cf` on every consecutive pair
    pub expansion: bool,
}

/// Rows of the growth table for example 1 (`n = 5`, `X: x2 = f(x1), x5 = x4`,
/// `V_m: x2 = f(x1), x3 = f(x2), x4 = f^m(x3)`) or example 2 (`n = 4`,
/// `X: x2 = f(x1), x4 = x3`, `V_m: x2 = f(x1), x3 = f^m(x2)`), at the point with first
/// coordinate `seed`, which must have certified positive canonical height.
pub fn reproduce_example(
    example: u8,
    f: &Poly,
    ms: std::ops::RangeInclusive<usize>,
    seed: &P1Point,
) -> Result<GrowthTable> {
    reproduce_example_with(example, f, ms, seed, DEFAULT_TARGET_ERROR)
}

/// As [`reproduce_example`], certifying the seed's canonical height to `target_error`.
pub fn reproduce_example_with(
    example: u8,
    f: &Poly,
    ms: std::ops::RangeInclusive<usize>,
    seed: &P1Point,
    target_error: f64,
) -> Result<GrowthTable> {
    require_disintegrated(f)?;
    let hat = match canonical_height(f, seed, target_error) {
        Ok(h) if h.lo() > 0.0 => h,
        Ok(h) => {
            return Err(Error::PreperiodicSeed(format!(
                "canonical height of {seed} is {} +/- {:e}, no positive lower bound",
                h.value, h.radius
            )))
        }
        Err(Error::CanonicalHeightNotConverged { estimate, radius, .. }) if estimate - radius > 0.0 => {
            HeightValue::from_bounds(estimate - radius, estimate + radius, false)
        }
        Err(e) => return Err(Error::PreperiodicSeed(format!("{seed}: {e}"))),
    };
    let (n, x_text, chain) = match example {
        1 => (5, "x2 = f(x1)\nx5 = x4", vec![1, 2, 3, 4]),
        2 => (4, "x2 = f(x1)\nx4 = x3", vec![1, 2, 3]),
        _ => return Err(Error::invalid(format!("unknown example {example}, expected 1 or 2"))),
    };
    let fx = f.fmt_var("x1");
    let x = AmbientVariety::parse(&x_text.replace("f(x1)", &format!("({fx})")), n, n - 2)?;
    let cf = height_expansion_constant(f)?;
    let mut rows = Vec::new();
    for m in ms {
        let v = growth_variety(f, n, &chain, m)?;
        let heads = vec![seed.clone(), P1Point::Infinity];
        let mut pt = v.point_from_heads(&heads)?;
        // the free chain (n) is glued to the top of the long chain by X
        pt[n - 1] = pt[n - 2].clone();
        if !x.contains(&pt)? || !v.contains(&pt)? {
            return Err(Error::invalid("constructed point is not in X ∩ V_m"));
        }
        rows.push(GrowthRow {
            m,
            v: format!("V_{m}"),
            point: pt.clone(),
            height: height_n(&pt)?,
        });
    }
    let d = f.deg() as f64;
    let increasing = rows.windows(2).all(|w| w[1].height.lo() > w[0].height.hi());
    let expansion = rows
        .windows(2)
        .all(|w| w[1].height.hi() >= d * w[0].height.lo() - cf);
    Ok(GrowthTable {
        example,
        f: f.to_string(),
        x: x.equation_strings(),
        seed: seed.clone(),
        seed_canonical_height: hat,
        cf,
        rows,
        increasing,
        expansion,
    })
}

fn growth_variety(f: &Poly, n: usize, chain: &[usize], m: usize) -> Result<PeriodicSubvariety> {
    let mut gens = vec![f.clone(); chain.len() - 2];
    gens.push(f.iterate(m as u32, crate::algebra::DEFAULT_ITERATE_DEGREE_CAP)?);
    let sig = Signature::new(n, vec![], vec![chain.to_vec(), vec![n]])?;
    // chains are stored sorted, so the long chain starting at 1 comes first
    build_periodic(sig, vec![], vec![gens, Vec::new()], f, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_two_heights() {
        let f: Poly = "x^2 + 1".parse().unwrap();
        let t = reproduce_example(2, &f, 1..=3, &P1Point::int(1)).unwrap();
        assert!(t.increasing && t.expansion);
        // (1, 2, f^{m+1}(1), f^{m+1}(1))
        let p = &t.rows[0].point;
        assert_eq!(p[2].to_string(), "5");
        assert_eq!(p[3].to_string(), "5");
        assert_eq!(t.rows[2].point[2].to_string(), "677");
    }

    #[test]
    fn preperiodic_seed_rejected() {
        let f: Poly = "x^2 + 1".parse().unwrap();
        let z = crate::algebra::AlgebraicNumber::nearest_root(&"x^2 - x + 1".parse().unwrap(), 0.5, 0.87).unwrap();
        let e = reproduce_example(2, &f, 1..=2, &z.into()).unwrap_err();
        assert!(matches!(e, Error::PreperiodicSeed(_)));
    }
}
