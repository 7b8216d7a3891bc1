//! Serializable views of the core types. Field order is fixed, so equal
//! inputs give byte-identical output.

use serde::{Deserialize, Serialize};
use sft_core::analyze::Stats;
use sft_core::{
    AnalysisReport, Budgets, Certificate, PeriodicPoint, PeriodicStrip, SftSpec, StripMatrix,
    TorusConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub coord: Vec<i64>,
    pub symbol: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub dim: usize,
    pub alphabet: Vec<String>,
    pub forbid: Vec<Vec<CellJson>>,
}

impl SpecJson {
    pub fn new(spec: &SftSpec) -> Self {
        SpecJson {
            dim: spec.dim(),
            alphabet: spec.alphabet().symbols().to_vec(),
            forbid: spec
                .forbidden()
                .iter()
                .map(|p| {
                    p.cells()
                        .iter()
                        .map(|(c, s)| CellJson {
                            coord: c.clone(),
                            symbol: spec.alphabet().name(*s).to_string(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripJson {
    pub height: usize,
    pub period: usize,
    /// Top row first.
    pub rows: Vec<Vec<String>>,
}

impl StripJson {
    pub fn new(spec: &SftSpec, s: &PeriodicStrip) -> Self {
        StripJson {
            height: s.height(),
            period: s.period(),
            rows: s
                .rows_top_down()
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|x| spec.alphabet().name(x).to_string())
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub pruned: bool,
    pub strips: Vec<StripJson>,
    /// Row `b`, column `a`: strip `a` may sit above strip `b`.
    pub entries: Vec<String>,
    /// Least admissible phase for each 1-entry, `null` elsewhere.
    pub phases: Vec<Vec<Option<usize>>>,
}

impl MatrixJson {
    pub fn new(spec: &SftSpec, m: &StripMatrix) -> Self {
        let n = m.dim();
        MatrixJson {
            pruned: m.is_pruned(),
            strips: m
                .indices()
                .iter()
                .map(|s| StripJson::new(spec, s))
                .collect(),
            entries: m.entries().to_bit_rows(),
            phases: (0..n)
                .map(|b| (0..n).map(|a| m.phase(b, a)).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub alphabet: Vec<String>,
    pub periods: Vec<usize>,
    /// Symbol indices in canonical order, last axis fastest.
    pub cells: Vec<u16>,
    pub verified: bool,
}

impl PointJson {
    pub fn new(spec: &SftSpec, pt: &PeriodicPoint) -> Self {
        PointJson {
            alphabet: spec.alphabet().symbols().to_vec(),
            periods: pt.periods().to_vec(),
            cells: pt.torus().cells().to_vec(),
            verified: pt.verified(),
        }
    }

    pub fn torus(&self) -> sft_core::Result<TorusConfig> {
        if let Some(&bad) = self
            .cells
            .iter()
            .find(|&&s| s as usize >= self.alphabet.len())
        {
            return Err(sft_core::SftError::InvalidGrid(format!(
                "symbol index {bad} is outside an alphabet of {}",
                self.alphabet.len()
            )));
        }
        TorusConfig::new(self.periods.clone(), self.cells.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertificateJson {
    Point { point: PointJson },
    Witness { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetsJson {
    pub max_period: usize,
    pub n_max: usize,
    pub cube_cap: u64,
    pub max_states: usize,
    pub max_strips: usize,
    pub torus_cells: usize,
}

impl From<&Budgets> for BudgetsJson {
    fn from(b: &Budgets) -> Self {
        BudgetsJson {
            max_period: b.max_period,
            n_max: b.n_max,
            cube_cap: b.cube_cap,
            max_states: b.max_states,
            max_strips: b.max_strips,
            torus_cells: b.torus_cells,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsJson {
    pub normalization_length: usize,
    pub allowed_cubes: Option<usize>,
    pub windows_tested: usize,
    pub period_reached: usize,
    pub strips: usize,
    pub matrix_dim: usize,
    pub pruned_dim: usize,
}

impl From<&Stats> for StatsJson {
    fn from(s: &Stats) -> Self {
        StatsJson {
            normalization_length: s.normalization_length,
            allowed_cubes: s.allowed_cubes,
            windows_tested: s.windows_tested,
            period_reached: s.period_reached,
            strips: s.strips,
            matrix_dim: s.matrix_dim,
            pruned_dim: s.pruned_dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingJson {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub status: String,
    pub certificate: Option<CertificateJson>,
    pub budgets: BudgetsJson,
    pub stats: StatsJson,
    pub diagnostics: Vec<String>,
    /// Wall-clock stages; omitted unless asked for, since they vary by run.
    pub timings: Option<Vec<TimingJson>>,
}

impl ReportJson {
    pub fn new(spec: &SftSpec, r: &AnalysisReport, with_timings: bool) -> Self {
        ReportJson {
            status: r.status.as_str().to_string(),
            certificate: r.certificate.as_ref().map(|c| match c {
                Certificate::Point(pt) => CertificateJson::Point {
                    point: PointJson::new(spec, pt),
                },
                Certificate::Witness { n } => CertificateJson::Witness { n: *n },
            }),
            budgets: (&r.budgets).into(),
            stats: (&r.stats).into(),
            diagnostics: r.diagnostics.clone(),
            timings: with_timings.then(|| {
                r.timings
                    .iter()
                    .map(|(stage, d)| TimingJson {
                        stage: stage.to_string(),
                        seconds: d.as_secs_f64(),
                    })
                    .collect()
            }),
        }
    }
}

/// A point file holds either a bare point or a whole report with a point
/// certificate.
pub fn point_from_json(text: &str) -> Result<PointJson, String> {
    if let Ok(p) = serde_json::from_str::<PointJson>(text) {
        return Ok(p);
    }
    match serde_json::from_str::<ReportJson>(text) {
        Ok(ReportJson {
            certificate: Some(CertificateJson::Point { point }),
            ..
        }) => Ok(point),
        Ok(r) => Err(format!("report with status {} carries no point", r.status)),
        Err(e) => Err(format!("not a point or report: {e}")),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use sft_core::fixtures::*;
    use sft_core::{analyze, Budgets};

    #[test]
    fn report_round_trips_through_json() {
        let spec = checkerboard();
        let r = analyze(&spec, Budgets::default()).unwrap();
        let j = ReportJson::new(&spec, &r, false);
        let text = to_json(&j);
        let back: ReportJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.timings, None);
        let pt = point_from_json(&text).unwrap();
        assert_eq!(pt.periods, vec![2, 2]);
        assert!(pt.verified);
    }

    #[test]
    fn witness_has_no_point() {
        let spec = contradiction();
        let r = analyze(&spec, Budgets::default()).unwrap();
        let text = to_json(&ReportJson::new(&spec, &r, false));
        assert!(text.contains("\"kind\": \"witness\""));
        assert!(point_from_json(&text).is_err());
    }

    #[test]
    fn spec_view_names_symbols() {
        let j = SpecJson::new(&hard_square());
        assert_eq!(j.dim, 2);
        assert_eq!(j.forbid.len(), 2);
        assert!(j.forbid.iter().flatten().all(|c| c.symbol == "1"));
        let back: SpecJson = serde_json::from_str(&to_json(&j)).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn point_cells_are_range_checked() {
        let p = PointJson {
            alphabet: vec!["a".into()],
            periods: vec![1, 1],
            cells: vec![1],
            verified: false,
        };
        assert!(p.torus().is_err());
    }
}
