//! Experiment configurations, deterministic reports, and JSON/CSV emission.

use serde::{Deserialize, Serialize};

use crate::algebra::algebraic::parse_point;
use crate::algebra::{P1Point, Poly};
use crate::bounds::{
    reproduce_example_with, structure_degree_bound, verify_bounded, CertifyOptions, GrowthTable,
    SampleRecord, StructureReport, VerifyReport,
};
use crate::classify::{classify, require_disintegrated};
use crate::error::{Error, Result};
use crate::varieties::{AmbientVariety, DV};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// certificates for every signature checked against sampled intersections
    Verify,
    /// growth table of an unbounded family
    Reproduce,
    /// degree bound `M` and the hypersurface collection only
    Structure,
}

fn default_max_gen_deg() -> usize {
    16
}
fn default_budget() -> usize {
    64
}
fn default_m_range() -> (usize, usize) {
    (1, 5)
}
fn default_target_error() -> f64 {
    1e-9
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub kind: ExperimentKind,
    pub f: String,
    #[serde(rename = "X", default)]
    pub x: Vec<String>,
    #[serde(default)]
    pub n: usize,
    /// codimension of the periodic subvarieties, equal to `dim X`
    #[serde(default)]
    pub codim: usize,
    #[serde(default = "default_max_gen_deg")]
    pub max_gen_deg: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_m_range")]
    pub m_range: (usize, usize),
    #[serde(default = "default_target_error")]
    pub target_error: f64,
    #[serde(default)]
    pub seed: u64,
    /// growth family (1: five coordinates, 2: four coordinates)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub example: Option<u8>,
    /// first coordinate of the growth family, default `1`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn polynomial(&self) -> Result<Poly> {
        self.f.parse()
    }

    pub fn variety(&self) -> Result<AmbientVariety> {
        if self.x.is_empty() {
            return Err(Error::invalid("config has no equations for X"));
        }
        AmbientVariety::parse(&self.x.join("\n"), self.n, self.codim)
    }

    pub fn validate(&self) -> Result<()> {
        self.polynomial()?;
        if !(self.target_error > 0.0) {
            return Err(Error::invalid("target_error must be positive"));
        }
        match self.kind {
            ExperimentKind::Verify | ExperimentKind::Structure => {
                if self.codim == 0 || self.codim >= self.n {
                    return Err(Error::invalid(format!(
                        "codim must lie in 1..n-1, got codim {} with n {}",
                        self.codim, self.n
                    )));
                }
                self.variety()?;
            }
            ExperimentKind::Reproduce => {
                if !matches!(self.example, Some(1) | Some(2)) {
                    return Err(Error::invalid("reproduce needs example 1 or 2"));
                }
                let (a, b) = self.m_range;
                if a == 0 || a > b {
                    return Err(Error::invalid(format!("bad m_range [{a}, {b}]")));
                }
                self.seed_point()?;
            }
        }
        Ok(())
    }

    fn seed_point(&self) -> Result<P1Point> {
        parse_point(self.a1.as_deref().unwrap_or("1"))
    }
}

/// Names of the bundled presets.
pub const PRESETS: [&str; 4] = ["line", "growth5", "growth4", "symmetry"];

pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let text = match name {
        "line" => include_str!("../presets/line.json"),
        "growth5" => include_str!("../presets/growth5.json"),
        "growth4" => include_str!("../presets/growth4.json"),
        "symmetry" => include_str!("../presets/symmetry.json"),
        _ => return None,
    };
    Some(ExperimentConfig::from_json(text).expect("bundled presets parse"))
}

/// Sizes of the exact objects met during a run. Wall-clock times are left out so that equal
/// configurations give byte-identical reports.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Statistics {
    pub signatures: usize,
    pub varieties: usize,
    pub samples: usize,
    pub anomalous: usize,
    pub max_generator_degree: usize,
    pub max_coordinate_degree: usize,
    pub max_coefficient_bits: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub classification: String,
    /// `pass`, `xoa_empty` or `violation`
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthTable>,
    pub violations: Vec<SampleRecord>,
    pub statistics: Statistics,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// 0 on a pass, 2 when some sampled height exceeds its certificate.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            2
        }
    }
}

fn point_sizes(stats: &mut Statistics, pt: &[P1Point]) {
    for c in pt {
        if let P1Point::Finite(a) = c {
            stats.max_coordinate_degree = stats.max_coordinate_degree.max(a.degree());
            let bits = a
                .minpoly_primitive()
                .coeffs()
                .iter()
                .map(|q| q.numer().bits())
                .max()
                .unwrap_or(0);
            stats.max_coefficient_bits = stats.max_coefficient_bits.max(bits);
        }
    }
}

/// Run an experiment: classify `f`, then certify and sample, reproduce a growth family, or
/// compute the structure data. Deterministic for a fixed config.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let f = config.polynomial()?;
    let classification = classify(&f)?.to_string();
    require_disintegrated(&f)?;
    let opts = CertifyOptions {
        samples: crate::varieties::ambient::DEFAULT_PROJECTION_SAMPLES,
        seed: config.seed,
    };
    let mut stats = Statistics::default();
    let mut report = Report {
        config: config.clone(),
        classification,
        status: "pass".into(),
        verify: None,
        structure: None,
        growth: None,
        violations: Vec::new(),
        statistics: Statistics::default(),
    };
    match config.kind {
        ExperimentKind::Verify => {
            let x = config.variety()?;
            let v = verify_bounded(&x, &f, config.codim, config.max_gen_deg, config.budget, &opts)?;
            stats.signatures = v.signatures.len();
            stats.varieties = v.signatures.iter().map(|s| s.varieties.len()).sum();
            stats.samples = v.samples.len();
            stats.anomalous = v.anomalous.len();
            stats.max_generator_degree = v
                .samples
                .iter()
                .filter_map(|s| match s.d_v {
                    DV::Finite(d) => Some(d),
                    DV::Infinite => None,
                })
                .max()
                .unwrap_or(0);
            for s in &v.samples {
                point_sizes(&mut stats, &s.point);
            }
            if v.status == "xoa_empty" {
                report.status = "xoa_empty".into();
            }
            report.violations = v.violations.clone();
            report.structure = Some(structure_degree_bound(&x, &f, &opts)?);
            report.verify = Some(v);
        }
        ExperimentKind::Structure => {
            let x = config.variety()?;
            let s = structure_degree_bound(&x, &f, &opts)?;
            if s.status == "xoa_empty" {
                report.status = "xoa_empty".into();
            }
            stats.max_generator_degree = s.hypersurfaces.iter().map(|h| h.degree).max().unwrap_or(0);
            report.structure = Some(s);
        }
        ExperimentKind::Reproduce => {
            let (a, b) = config.m_range;
            let t = reproduce_example_with(
                config.example.unwrap_or(2),
                &f,
                a..=b,
                &config.seed_point()?,
                config.target_error,
            )?;
            stats.samples = t.rows.len();
            stats.max_generator_degree = f.deg().pow(b as u32);
            for r in &t.rows {
                point_sizes(&mut stats, &r.point);
            }
            report.growth = Some(t);
        }
    }
    if !report.violations.is_empty() {
        report.status = "violation".into();
    }
    report.statistics = stats;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::invalid(format!("unknown format {s}, expected json or csv"))),
        }
    }
}

/// Serialize a report. JSON keeps struct field order; CSV has one `(m, V, point, height,
/// radius)` row per sampled point, sorted by `m` then height, where `m` is `D(V)` for
/// verification runs and the family index for growth tables.
pub fn emit(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut rows: Vec<(Option<usize>, f64, String, String, f64)> = Vec::new();
            let fmt_pt = |p: &[P1Point]| {
                p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ; ")
            };
            if let Some(v) = &report.verify {
                for s in &v.samples {
                    let m = match s.d_v {
                        DV::Finite(d) => Some(d),
                        DV::Infinite => None,
                    };
                    rows.push((m, s.height.value, s.v.clone(), fmt_pt(&s.point), s.height.radius));
                }
            }
            if let Some(t) = &report.growth {
                for r in &t.rows {
                    rows.push((Some(r.m), r.height.value, r.v.clone(), fmt_pt(&r.point), r.height.radius));
                }
            }
            // finite m first, infinity last
            rows.sort_by(|a, b| {
                (a.0.is_none(), a.0, a.1)
                    .partial_cmp(&(b.0.is_none(), b.0, b.1))
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| a.3.cmp(&b.3))
            });
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["m", "V", "point", "height", "radius"]).unwrap();
            for (m, h, v, p, r) in rows {
                let m = m.map_or("inf".to_string(), |m| m.to_string());
                w.write_record([m, v, p, format!("{h:.17e}"), format!("{r:.3e}")]).unwrap();
            }
            w.into_inner().expect("in-memory writer")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for name in PRESETS {
            let c = preset(name).unwrap();
            assert_eq!(c.name, name);
            c.validate().unwrap();
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn chebyshev_rejected() {
        let mut c = preset("line").unwrap();
        c.f = "x^2 - 2".into();
        let e = run(&c).unwrap_err();
        assert!(e.to_string().contains("not disintegrated"), "{e}");
        assert!(e.to_string().to_lowercase().contains("chebyshev"), "{e}");
    }

    #[test]
    fn growth_report_csv() {
        let r = run(&preset("growth4").unwrap()).unwrap();
        assert!(r.passed());
        let csv = String::from_utf8(emit(&r, Format::Csv)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("1,"));
        assert!(lines[5].starts_with("5,"));
    }

    #[test]
    fn violation_sets_exit_code() {
        let mut r = run(&preset("growth4").unwrap()).unwrap();
        assert_eq!(r.exit_code(), 0);
        let pt = vec![P1Point::int(3), P1Point::int(4)];
        r.violations.push(SampleRecord {
            v: "x2 = x1 + 1".into(),
            d_v: DV::Finite(2),
            point: pt.clone(),
            height: crate::heights::height_n(&pt).unwrap(),
            gate: true,
            bound: 0.5,
        });
        assert_eq!(r.exit_code(), 2);
        let json = String::from_utf8(emit(&r, Format::Json)).unwrap();
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["violations"][0]["point"][1]["minpoly"], "x - 4");
    }

    #[test]
    fn bad_configs() {
        assert!(matches!(
            ExperimentConfig::from_json("{\"kind\": \"verify\",\n \"f\": 3}"),
            Err(Error::Parse { line: 2, .. })
        ));
        let mut c = preset("line").unwrap();
        c.codim = 2;
        assert!(c.validate().is_err());
    }
}
