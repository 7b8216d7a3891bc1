//! Finite truncations of the strip transition matrix.
//!
//! Indices are periodic strips. Entry `(B, A) = 1` means strip `A` may be
//! placed directly above strip `B` at some relative phase; the smallest such
//! phase is kept with the entry so that walks can be turned back into
//! configurations. A walk `i_0, i_1, ...` through 1-entries therefore
//! describes strips stacked bottom to top.

use crate::bitmatrix::BitMatrix;
use crate::error::{Result, SftError};
use crate::pattern::{Grid, SftSpec};
use crate::strip::{gcd, lcm, PeriodicStrip, StackChecker};
use crate::torus::{PeriodicPoint, TorusConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripMatrix {
    indices: Vec<PeriodicStrip>,
    entries: BitMatrix,
    phases: Vec<Option<usize>>,
    pruned: bool,
}

impl StripMatrix {
    pub fn indices(&self) -> &[PeriodicStrip] {
        &self.indices
    }

    pub fn entries(&self) -> &BitMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn is_pruned(&self) -> bool {
        self.pruned
    }

    /// Phase recorded on entry `(below, above)`, if that entry is 1.
    pub fn phase(&self, below: usize, above: usize) -> Option<usize> {
        self.phases[below * self.dim() + above]
    }

    fn restrict(&self, keep: &[usize]) -> StripMatrix {
        let n = self.dim();
        let mut phases = Vec::with_capacity(keep.len() * keep.len());
        for &i in keep {
            for &j in keep {
                phases.push(self.phases[i * n + j]);
            }
        }
        StripMatrix {
            indices: keep.iter().map(|&i| self.indices[i].clone()).collect(),
            entries: self.entries.submatrix(keep),
            phases,
            pruned: self.pruned,
        }
    }
}

pub fn build_strip_matrix(spec: &SftSpec, strips: &[PeriodicStrip]) -> StripMatrix {
    let n = strips.len();
    let mut entries = BitMatrix::zeros(n);
    let mut phases = vec![None; n * n];
    let checker = StackChecker::new(spec);
    for (b, below) in strips.iter().enumerate() {
        for (a, above) in strips.iter().enumerate() {
            let g = gcd(above.period(), below.period());
            if let Some(phi) = (0..g).find(|&phi| checker.admissible(above, below, phi)) {
                entries.set(b, a, true);
                phases[b * n + a] = Some(phi);
            }
        }
    }
    StripMatrix {
        indices: strips.to_vec(),
        entries,
        phases,
        pruned: false,
    }
}

fn check(m: &StripMatrix, i: usize) -> Result<()> {
    if i >= m.dim() {
        return Err(SftError::IndexOutOfRange {
            index: i,
            len: m.dim(),
        });
    }
    Ok(())
}

/// Indices `j` with entry `(j, i) = 1`.
pub fn u_related(m: &StripMatrix, i: usize) -> Result<Vec<usize>> {
    check(m, i)?;
    Ok(m.entries.predecessors(i))
}

/// Indices `j` with entry `(i, j) = 1`.
pub fn d_related(m: &StripMatrix, i: usize) -> Result<Vec<usize>> {
    check(m, i)?;
    Ok(m.entries.successors(i))
}

/// Deletes zero rows and columns until none remain.
pub fn prune(m: &StripMatrix) -> StripMatrix {
    let mut out = m.restrict(&m.entries.prune_survivors());
    out.pruned = true;
    out
}

pub fn is_complementary(m: &StripMatrix, subset: &[usize]) -> Result<bool> {
    m.entries.is_complementary(subset)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleStep {
    pub index: usize,
    /// Phase of the entry from this index to the next one around the cycle.
    pub phase: usize,
}

pub fn find_cycle(m: &StripMatrix) -> Option<Vec<CycleStep>> {
    let cycle = m.entries.shortest_cycle()?;
    let k = cycle.len();
    Some(
        (0..k)
            .map(|t| CycleStep {
                index: cycle[t],
                phase: m
                    .phase(cycle[t], cycle[(t + 1) % k])
                    .expect("cycle follows 1-entries"),
            })
            .collect(),
    )
}

/// Stacks the strips of a cycle bottom to top, each shifted by the phases
/// accumulated so far. If the phases drift by `δ` around the cycle, the
/// stack is repeated `L / gcd(δ, L)` times vertically so the drift closes up
/// (`L` being the lcm of the strip periods). The torus is verified, then
/// reduced to primitive periods.
pub fn synthesize_periodic_point(
    spec: &SftSpec,
    m: &StripMatrix,
    cycle: &[CycleStep],
) -> Result<PeriodicPoint> {
    if cycle.is_empty() {
        return Err(SftError::VerificationFailed("empty cycle".into()));
    }
    for (t, step) in cycle.iter().enumerate() {
        check(m, step.index)?;
        let next = cycle[(t + 1) % cycle.len()].index;
        if m.phase(step.index, next).is_none() {
            return Err(SftError::VerificationFailed(format!(
                "no entry from {} to {next}",
                step.index
            )));
        }
    }
    let strips: Vec<&PeriodicStrip> = cycle.iter().map(|s| &m.indices[s.index]).collect();
    let l = strips[0].height();
    let k = strips.len();
    let width = strips.iter().fold(1, |acc, s| lcm(acc, s.period()));
    let mut offsets = Vec::with_capacity(k);
    let mut acc = 0usize;
    for step in cycle {
        offsets.push(acc);
        acc = (acc + step.phase) % width;
    }
    let drift = acc;
    let repeats = width / gcd(drift, width);
    let height = k * l * repeats;
    let grid = Grid::from_fn(&[width, height], |c| {
        let (x, y) = (c[0], c[1] as usize);
        let band = y / l;
        let t = band % k;
        let rep = band / k;
        let shift = (offsets[t] + rep * drift) as i64;
        strips[t].get(x + shift, y % l)
    });
    let torus = TorusConfig::from_grid(grid);
    match PeriodicPoint::certify(spec, torus)? {
        Some(pt) => Ok(pt.into_primitive()),
        None => Err(SftError::VerificationFailed(
            "stacked cycle contains a forbidden pattern".into(),
        )),
    }
}
