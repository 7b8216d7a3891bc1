//! Brute-force ground truth on finite tori and finite windows.
//!
//! A torus of periods `(q_1, ..., q_d)` stands for the periodic configuration
//! obtained by tiling `Z^d` with it. A torus on which no forbidden pattern
//! occurs (reading across the wrap) is therefore a certificate that the shift
//! space contains a periodic point.

use crate::error::{Result, SftError};
use crate::pattern::{BoxCoords, FinitePattern, Grid, SftSpec, Symbol};
use crate::search::Constraints;

pub const DEFAULT_TORUS_CELLS: usize = 64;
pub const DEFAULT_MAX_CONFIGS: usize = 1 << 16;
pub const DEFAULT_N_MAX: usize = 8;
pub const DEFAULT_MAX_STATES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusConfig {
    grid: Grid,
}

impl TorusConfig {
    pub fn new(periods: Vec<usize>, cells: Vec<Symbol>) -> Result<Self> {
        Ok(TorusConfig {
            grid: Grid::new(periods, cells)?,
        })
    }

    pub fn from_grid(grid: Grid) -> Self {
        TorusConfig { grid }
    }

    pub fn periods(&self) -> &[usize] {
        self.grid.shape()
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn cells(&self) -> &[Symbol] {
        self.grid.cells()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Symbol at any coordinate of the unrolled configuration.
    pub fn at(&self, coord: &[i64]) -> Symbol {
        self.grid.get_wrapped(coord)
    }

    /// The same configuration on its smallest rectangular torus.
    pub fn primitive(&self) -> TorusConfig {
        let mut periods = self.periods().to_vec();
        for axis in 0..periods.len() {
            let q = periods[axis];
            let p = (1..=q)
                .filter(|&p| q.is_multiple_of(p))
                .find(|&p| {
                    self.grid.coords().all(|c| {
                        let mut moved = c.clone();
                        moved[axis] += p as i64;
                        self.at(&moved) == self.at(&c)
                    })
                })
                .unwrap_or(q);
            periods[axis] = p;
        }
        TorusConfig {
            grid: Grid::from_fn(&periods, |c| self.at(c)),
        }
    }
}

/// A periodic configuration. `verified` is only ever set by a successful
/// admissibility check against a spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPoint {
    torus: TorusConfig,
    verified: bool,
}

impl PeriodicPoint {
    /// Returns a verified point if the torus is admissible for `spec`.
    pub fn certify(spec: &SftSpec, torus: TorusConfig) -> Result<Option<PeriodicPoint>> {
        Ok(
            is_admissible_on_torus(spec, &torus)?.then_some(PeriodicPoint {
                torus,
                verified: true,
            }),
        )
    }

    pub fn unverified(torus: TorusConfig) -> Self {
        PeriodicPoint {
            torus,
            verified: false,
        }
    }

    pub fn torus(&self) -> &TorusConfig {
        &self.torus
    }

    pub fn periods(&self) -> &[usize] {
        self.torus.periods()
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    pub fn at(&self, coord: &[i64]) -> Symbol {
        self.torus.at(coord)
    }

    /// Reduces to primitive periods; the configuration is unchanged so the
    /// flag carries over.
    pub fn into_primitive(self) -> PeriodicPoint {
        PeriodicPoint {
            torus: self.torus.primitive(),
            verified: self.verified,
        }
    }
}

fn check_dim(spec: &SftSpec, found: usize) -> Result<()> {
    if spec.dim() != found {
        return Err(SftError::DimensionMismatch {
            expected: spec.dim(),
            found,
        });
    }
    Ok(())
}

pub fn is_admissible_on_torus(spec: &SftSpec, t: &TorusConfig) -> Result<bool> {
    check_dim(spec, t.dim())?;
    Ok(spec.is_admissible_wrapped(t.grid(), &vec![true; t.dim()]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusLimits {
    pub max_cells: usize,
    pub max_configs: usize,
}

impl Default for TorusLimits {
    fn default() -> Self {
        TorusLimits {
            max_cells: DEFAULT_TORUS_CELLS,
            max_configs: DEFAULT_MAX_CONFIGS,
        }
    }
}

fn torus_constraints(spec: &SftSpec, periods: &[usize], max_cells: usize) -> Result<Constraints> {
    check_dim(spec, periods.len())?;
    if periods.contains(&0) {
        return Err(SftError::InvalidGrid(format!("zero period in {periods:?}")));
    }
    let cells = periods
        .iter()
        .try_fold(1usize, |acc, &q| acc.checked_mul(q))
        .unwrap_or(usize::MAX);
    if cells > max_cells {
        return Err(SftError::cap(
            format!("torus of {cells} cells"),
            max_cells as u128,
        ));
    }
    let mut c = Constraints::new(periods, spec.alphabet().len());
    c.forbid_patterns(spec.forbidden(), &vec![true; periods.len()]);
    Ok(c)
}

/// All admissible configurations on the torus of the given periods, in
/// lexicographic order of their cells.
pub fn enumerate_torus_configs(
    spec: &SftSpec,
    periods: &[usize],
    limits: TorusLimits,
) -> Result<Vec<PeriodicPoint>> {
    let c = torus_constraints(spec, periods, limits.max_cells)?;
    let mut out = Vec::new();
    let mut overflow = false;
    c.backtrack(|cells| {
        if out.len() == limits.max_configs {
            overflow = true;
            return false;
        }
        out.push(cells.to_vec());
        true
    });
    if overflow {
        return Err(SftError::cap(
            "admissible torus configurations",
            limits.max_configs as u128,
        ));
    }
    out.into_iter()
        .map(|cells| {
            let torus = TorusConfig::new(periods.to_vec(), cells)?;
            PeriodicPoint::certify(spec, torus)?.ok_or_else(|| {
                SftError::VerificationFailed("backtracker produced an inadmissible torus".into())
            })
        })
        .collect()
}

/// The lexicographically first admissible configuration, if any.
pub fn first_torus_config(
    spec: &SftSpec,
    periods: &[usize],
    max_cells: usize,
) -> Result<Option<PeriodicPoint>> {
    let c = torus_constraints(spec, periods, max_cells)?;
    let mut found = None;
    c.backtrack(|cells| {
        found = Some(cells.to_vec());
        false
    });
    match found {
        None => Ok(None),
        Some(cells) => PeriodicPoint::certify(spec, TorusConfig::new(periods.to_vec(), cells)?),
    }
}

/// Number of total `n^d` windows (no wraparound) free of forbidden patterns.
pub fn count_admissible_squares(spec: &SftSpec, n: usize, max_states: usize) -> Result<u128> {
    if n == 0 {
        return Err(SftError::InvalidGrid("window side must be positive".into()));
    }
    let shape = vec![n; spec.dim()];
    let mut c = Constraints::new(&shape, spec.alphabet().len());
    c.forbid_patterns(spec.forbidden(), &vec![false; spec.dim()]);
    c.count(max_states)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Semidecision {
    /// No admissible window of side `n` exists, so the shift space is empty.
    Empty { n: usize },
    /// Admissible windows exist for every side up to `tested`; `stopped`
    /// holds the error that cut the search short, if any.
    Inconclusive {
        tested: usize,
        stopped: Option<SftError>,
    },
}

pub fn emptiness_semidecision(spec: &SftSpec, n_max: usize, max_states: usize) -> Semidecision {
    for n in 1..=n_max {
        match count_admissible_squares(spec, n, max_states) {
            Ok(0) => return Semidecision::Empty { n },
            Ok(_) => {}
            Err(e) => {
                return Semidecision::Inconclusive {
                    tested: n - 1,
                    stopped: Some(e),
                }
            }
        }
    }
    Semidecision::Inconclusive {
        tested: n_max,
        stopped: None,
    }
}

/// `(σ_a x)_k = x_{k+a}` on the torus.
pub fn shift_point(pt: &PeriodicPoint, a: &[i64]) -> Result<PeriodicPoint> {
    if a.len() != pt.torus.dim() {
        return Err(SftError::DimensionMismatch {
            expected: pt.torus.dim(),
            found: a.len(),
        });
    }
    let grid = Grid::from_fn(pt.periods(), |k| {
        let moved: Vec<i64> = k.iter().zip(a).map(|(x, y)| x + y).collect();
        pt.at(&moved)
    });
    Ok(PeriodicPoint {
        torus: TorusConfig { grid },
        verified: pt.verified,
    })
}

/// Restriction of the periodic configuration to the box `origin + [0, shape)`.
pub fn extract_pattern(
    pt: &PeriodicPoint,
    origin: &[i64],
    shape: &[usize],
) -> Result<FinitePattern> {
    let dim = pt.torus.dim();
    if origin.len() != dim || shape.len() != dim {
        return Err(SftError::DimensionMismatch {
            expected: dim,
            found: if origin.len() != dim {
                origin.len()
            } else {
                shape.len()
            },
        });
    }
    let cells = BoxCoords::new(shape).map(|c| {
        let at: Vec<i64> = c.iter().zip(origin).map(|(x, o)| x + o).collect();
        let s = pt.at(&at);
        (at, s)
    });
    FinitePattern::new(dim, cells)
}
