//! The full finite-budget pipeline: compactness check for emptiness, then
//! strip matrices of growing period for a periodic certificate.
//!
//! A verdict is only ever reported with something that re-verifies: a
//! periodic point for NONEMPTY, a window side with no admissible filling for
//! EMPTY. Anything else is UNKNOWN.

use std::time::{Duration, Instant};

use crate::block::build_blocks;
use crate::cubes::{normalize_to_cubes, DEFAULT_CUBE_CAP};
use crate::error::{Result, SftError};
use crate::matrix::{build_strip_matrix, find_cycle, prune, synthesize_periodic_point};
use crate::pattern::SftSpec;
use crate::strip::{enumerate_strips, DEFAULT_MAX_STRIPS};
use crate::torus::{
    emptiness_semidecision, first_torus_config, PeriodicPoint, Semidecision, DEFAULT_MAX_STATES,
    DEFAULT_N_MAX, DEFAULT_TORUS_CELLS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Strips of primitive period up to `max_period * l`.
    pub max_period: usize,
    /// Largest window side tried by the emptiness check.
    pub n_max: usize,
    pub cube_cap: u64,
    pub max_states: usize,
    pub max_strips: usize,
    /// Largest torus searched directly when no strip matrix is available.
    pub torus_cells: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_period: 3,
            n_max: DEFAULT_N_MAX,
            cube_cap: DEFAULT_CUBE_CAP,
            max_states: DEFAULT_MAX_STATES,
            max_strips: DEFAULT_MAX_STRIPS,
            torus_cells: DEFAULT_TORUS_CELLS,
        }
    }
}

impl Budgets {
    pub fn doubled(&self) -> Budgets {
        Budgets {
            max_period: self.max_period * 2,
            n_max: self.n_max * 2,
            cube_cap: self.cube_cap.saturating_mul(2),
            max_states: self.max_states.saturating_mul(2),
            max_strips: self.max_strips.saturating_mul(2),
            torus_cells: self.torus_cells.saturating_mul(2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Nonempty,
    Empty,
    Unknown,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Nonempty => "NONEMPTY",
            Status::Empty => "EMPTY",
            Status::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Point(PeriodicPoint),
    /// No locally admissible `n^d` window exists.
    Witness {
        n: usize,
    },
}

/// Sizes observed along the way, for the last period tried.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub normalization_length: usize,
    pub allowed_cubes: Option<usize>,
    pub windows_tested: usize,
    pub period_reached: usize,
    pub strips: usize,
    pub matrix_dim: usize,
    pub pruned_dim: usize,
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub budgets: Budgets,
    pub stats: Stats,
    pub diagnostics: Vec<String>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl AnalysisReport {
    pub fn point(&self) -> Option<&PeriodicPoint> {
        match &self.certificate {
            Some(Certificate::Point(p)) => Some(p),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<usize> {
        match self.certificate {
            Some(Certificate::Witness { n }) => Some(n),
            _ => None,
        }
    }
}

struct Run {
    report: AnalysisReport,
    clock: Instant,
}

impl Run {
    fn new(spec: &SftSpec, budgets: Budgets) -> Self {
        Run {
            report: AnalysisReport {
                status: Status::Unknown,
                certificate: None,
                budgets,
                stats: Stats {
                    normalization_length: spec.normalization_length(),
                    ..Stats::default()
                },
                diagnostics: Vec::new(),
                timings: Vec::new(),
            },
            clock: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.report.timings.push((stage, now - self.clock));
        self.clock = now;
    }

    fn note(&mut self, stage: &str, e: &SftError) {
        self.report.diagnostics.push(format!("{stage}: {e}"));
    }

    fn found(mut self, pt: PeriodicPoint) -> AnalysisReport {
        self.report.status = Status::Nonempty;
        self.report.certificate = Some(Certificate::Point(pt));
        self.report
    }
}

/// Decides what the budgets allow. Errors only on an internal verification
/// failure; budget exhaustion is reported as UNKNOWN with a diagnostic.
pub fn analyze(spec: &SftSpec, budgets: Budgets) -> Result<AnalysisReport> {
    run(spec, budgets, true)
}

/// Like [`analyze`] without the emptiness check: NONEMPTY or UNKNOWN.
pub fn find_periodic(spec: &SftSpec, budgets: Budgets) -> Result<AnalysisReport> {
    run(spec, budgets, false)
}

fn run(spec: &SftSpec, budgets: Budgets, check_empty: bool) -> Result<AnalysisReport> {
    let mut r = Run::new(spec, budgets);
    let cubes = match normalize_to_cubes(spec, budgets.cube_cap) {
        Ok(c) => {
            r.report.stats.allowed_cubes = Some(c.allowed().len());
            Some(c)
        }
        Err(e) => {
            r.note("normalize", &e);
            None
        }
    };
    r.lap("normalize");

    if check_empty {
        match emptiness_semidecision(spec, budgets.n_max, budgets.max_states) {
            Semidecision::Empty { n } => {
                r.lap("emptiness");
                r.report.stats.windows_tested = n;
                r.report.status = Status::Empty;
                r.report.certificate = Some(Certificate::Witness { n });
                return Ok(r.report);
            }
            Semidecision::Inconclusive { tested, stopped } => {
                r.report.stats.windows_tested = tested;
                if let Some(e) = stopped {
                    r.note("emptiness", &e);
                }
            }
        }
        r.lap("emptiness");
    }

    match (spec.dim(), cubes) {
        (2, Some(cubes)) => {
            let blocks = build_blocks(spec, &cubes)?;
            for p in 1..=budgets.max_period {
                r.report.stats.period_reached = p;
                let strips = match enumerate_strips(spec, &blocks, p, budgets.max_strips) {
                    Ok(s) => s,
                    Err(e @ SftError::CapExceeded { .. }) => {
                        r.note(&format!("strips at period {p}"), &e);
                        break;
                    }
                    Err(e) => return Err(e),
                };
                let m = build_strip_matrix(spec, &strips);
                let pruned = prune(&m);
                r.report.stats.strips = strips.len();
                r.report.stats.matrix_dim = m.dim();
                r.report.stats.pruned_dim = pruned.dim();
                if let Some(cycle) = find_cycle(&pruned) {
                    let pt = synthesize_periodic_point(spec, &pruned, &cycle)?;
                    r.lap("strips");
                    return Ok(r.found(pt));
                }
            }
            r.lap("strips");
        }
        _ => {
            if let Some(pt) = torus_search(spec, &budgets, &mut r)? {
                r.lap("torus");
                return Ok(r.found(pt));
            }
            r.lap("torus");
        }
    }
    Ok(r.report)
}

/// Direct search over tori with every period at most `max_period * l` and at
/// most `torus_cells` cells, smallest first.
fn torus_search(spec: &SftSpec, budgets: &Budgets, r: &mut Run) -> Result<Option<PeriodicPoint>> {
    let bound = budgets.max_period * spec.normalization_length();
    let mut shapes = Vec::new();
    let mut q = vec![1usize; spec.dim()];
    loop {
        let cells: usize = q.iter().product();
        if cells <= budgets.torus_cells {
            shapes.push((cells, q.clone()));
        }
        let Some(axis) = (0..q.len()).rev().find(|&a| q[a] < bound) else {
            break;
        };
        q[axis] += 1;
        q[axis + 1..].iter_mut().for_each(|v| *v = 1);
    }
    shapes.sort();
    for (_, periods) in shapes {
        match first_torus_config(spec, &periods, budgets.torus_cells) {
            Ok(Some(pt)) => return Ok(Some(pt.into_primitive())),
            Ok(None) => {}
            Err(e @ SftError::CapExceeded { .. }) => {
                r.note("torus", &e);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
