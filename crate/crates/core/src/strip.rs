//! Horizontally periodic strips of height `l`, the finite stand-ins for
//! bi-infinite strips.
//!
//! A strip is stored column by column (`cells[x * height + y]`) over one
//! period. Its canonical form has primitive period and is the
//! lexicographically least of its rotations, so each rotation class is
//! catalogued once. Stacking, however, depends on the relative horizontal
//! phase of the two strips; see [`compatible_phases`].

use std::collections::HashSet;

use crate::bitmatrix::BitMatrix;
use crate::block::Block;
use crate::error::{Result, SftError};
use crate::pattern::{Grid, SftSpec, Symbol};
use crate::search::Constraints;

pub const DEFAULT_MAX_STRIPS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicStrip {
    height: usize,
    period: usize,
    cells: Vec<Symbol>,
}

impl PeriodicStrip {
    pub fn new(height: usize, period: usize, cells: Vec<Symbol>) -> Result<Self> {
        if height == 0 || period == 0 || cells.len() != height * period {
            return Err(SftError::InvalidGrid(format!(
                "strip of height {height} and period {period} cannot hold {} cells",
                cells.len()
            )));
        }
        Ok(PeriodicStrip {
            height,
            period,
            cells,
        })
    }

    /// Strip from rows listed bottom-up, each one period long.
    pub fn from_rows(rows: &[Vec<Symbol>]) -> Result<Self> {
        let g = Grid::from_rows(rows)?;
        PeriodicStrip::new(rows.len(), g.shape()[0], g.into_cells())
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn column(&self, x: usize) -> &[Symbol] {
        &self.cells[x * self.height..(x + 1) * self.height]
    }

    /// Symbol at column `x` (any integer, read modulo the period) and row `y`.
    pub fn get(&self, x: i64, y: usize) -> Symbol {
        let x = x.rem_euclid(self.period as i64) as usize;
        self.cells[x * self.height + y]
    }

    /// One period as a `period x height` grid.
    pub fn grid(&self) -> Grid {
        Grid::new(vec![self.period, self.height], self.cells.clone()).expect("strip shape")
    }

    /// Rows listed top-down, one period each.
    pub fn rows_top_down(&self) -> Vec<Vec<Symbol>> {
        (0..self.height)
            .rev()
            .map(|y| (0..self.period).map(|x| self.get(x as i64, y)).collect())
            .collect()
    }

    /// The strip read from column `r` onward.
    pub fn rotated(&self, r: usize) -> PeriodicStrip {
        let cells = (0..self.period)
            .flat_map(|x| self.column((x + r) % self.period).to_vec())
            .collect();
        PeriodicStrip {
            height: self.height,
            period: self.period,
            cells,
        }
    }

    pub fn primitive_period(&self) -> usize {
        (1..=self.period)
            .filter(|&p| self.period.is_multiple_of(p))
            .find(|&p| {
                (0..self.period).all(|x| self.column(x) == self.column((x + p) % self.period))
            })
            .unwrap_or(self.period)
    }

    pub fn is_canonical(&self) -> bool {
        self.primitive_period() == self.period
            && (1..self.period).all(|r| self.cells <= self.rotated(r).cells)
    }
}

pub fn canonicalize_strip(s: &PeriodicStrip) -> PeriodicStrip {
    let p = s.primitive_period();
    let base = PeriodicStrip {
        height: s.height,
        period: p,
        cells: s.cells[..p * s.height].to_vec(),
    };
    (0..p)
        .map(|r| base.rotated(r))
        .min()
        .expect("period is positive")
}

/// No forbidden pattern occurs in the bi-infinite strip.
pub fn is_wrap_admissible(spec: &SftSpec, s: &PeriodicStrip) -> bool {
    spec.is_admissible_wrapped(&s.grid(), &[true, false])
}

/// Blocks `u`, `v` are adjacent when `u` followed by `v` forms an admissible
/// `2l x l` window.
pub fn block_adjacency(spec: &SftSpec, blocks: &[Block]) -> BitMatrix {
    let mut m = BitMatrix::zeros(blocks.len());
    for (i, u) in blocks.iter().enumerate() {
        for (j, v) in blocks.iter().enumerate() {
            let l = u.side();
            let w = Grid::from_fn(&[2 * l, l], |c| {
                let (x, y) = (c[0] as usize, c[1] as usize);
                if x < l {
                    u.get(x, y)
                } else {
                    v.get(x - l, y)
                }
            });
            m.set(i, j, spec.is_locally_admissible(&w));
        }
    }
    m
}

/// Concatenates blocks left to right into one period of a strip.
pub fn strip_from_blocks(blocks: &[&Block]) -> Result<PeriodicStrip> {
    let l = blocks
        .first()
        .map(|b| b.side())
        .ok_or_else(|| SftError::InvalidGrid("no blocks to concatenate".into()))?;
    let cells = blocks
        .iter()
        .flat_map(|b| b.grid().cells().to_vec())
        .collect();
    PeriodicStrip::new(l, l * blocks.len(), cells)
}

/// All canonical strips of height `l` with primitive period at most
/// `max_period * l` whose every `l x l` window (read across the wrap) is one
/// of `blocks`. Ordered by period, then cells.
pub fn enumerate_strips(
    spec: &SftSpec,
    blocks: &[Block],
    max_period: usize,
    max_strips: usize,
) -> Result<Vec<PeriodicStrip>> {
    if spec.dim() != 2 {
        return Err(SftError::DimensionMismatch {
            expected: 2,
            found: spec.dim(),
        });
    }
    let Some(l) = blocks.first().map(Block::side) else {
        return Ok(Vec::new());
    };
    let allowed: HashSet<Vec<Symbol>> = blocks.iter().map(|b| b.grid().cells().to_vec()).collect();
    let mut out = Vec::new();
    let mut overflow = false;
    for q in 1..=max_period * l {
        let mut c = Constraints::new(&[q, l], spec.alphabet().len());
        c.require_windows(&[l, l], allowed.clone(), &[true, false]);
        c.backtrack(|cells| {
            let s = PeriodicStrip {
                height: l,
                period: q,
                cells: cells.to_vec(),
            };
            if s.is_canonical() {
                if out.len() == max_strips {
                    overflow = true;
                    return false;
                }
                out.push(s);
            }
            true
        });
        if overflow {
            return Err(SftError::cap("periodic strips", max_strips as u128));
        }
    }
    if let Some(bad) = out.iter().find(|s| !is_wrap_admissible(spec, s)) {
        return Err(SftError::VerificationFailed(format!(
            "strip {:?} contains a forbidden pattern",
            bad.rows_top_down()
        )));
    }
    Ok(out)
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `above` placed on top of `below`, with `above` read from column
/// `x + phase`. One period `lcm` of both strips wide.
pub fn stack(above: &PeriodicStrip, below: &PeriodicStrip, phase: usize) -> Grid {
    let l = below.height;
    let width = lcm(above.period, below.period);
    Grid::from_fn(&[width, below.height + above.height], |c| {
        let (x, y) = (c[0], c[1] as usize);
        if y < l {
            below.get(x, y)
        } else {
            above.get(x + phase as i64, y - l)
        }
    })
}

pub fn stack_admissible(
    spec: &SftSpec,
    above: &PeriodicStrip,
    below: &PeriodicStrip,
    phase: usize,
) -> bool {
    // build the horizontally unrolled window directly
    let l = below.height;
    let pad = spec.normalization_length() - 1;
    let width = lcm(above.period, below.period) + pad;
    let window = Grid::from_fn(&[width, below.height + above.height], |c| {
        let (x, y) = (c[0], c[1] as usize);
        if y < l {
            below.get(x, y)
        } else {
            above.get(x + phase as i64, y - l)
        }
    });
    spec.is_locally_admissible(&window)
}

/// Compatibility of the two strips as given, `a` directly above `b`.
pub fn strip_vertical_compatible(spec: &SftSpec, a: &PeriodicStrip, b: &PeriodicStrip) -> bool {
    stack_admissible(spec, a, b, 0)
}

/// Relative phases (modulo `gcd` of the periods, which covers every distinct
/// alignment) at which `above` may sit on `below`.
pub fn compatible_phases(
    spec: &SftSpec,
    above: &PeriodicStrip,
    below: &PeriodicStrip,
) -> Vec<usize> {
    StackChecker::new(spec).phases(above, below)
}

/// Planar forbidden patterns flattened to `(dx, dy, symbol)` for repeated
/// stacking tests without building windows.
#[derive(Debug, Clone)]
pub struct StackChecker {
    /// Height of each pattern with its cells.
    patterns: Vec<(usize, Vec<FlatCell>)>,
}

type FlatCell = (i64, usize, Symbol);

impl StackChecker {
    pub fn new(spec: &SftSpec) -> Self {
        let patterns = spec
            .forbidden()
            .iter()
            .map(|p| {
                let cells: Vec<_> = p
                    .cells()
                    .iter()
                    .map(|(c, s)| (c[0], c[1] as usize, *s))
                    .collect();
                let h = cells.iter().map(|c| c.1 + 1).max().unwrap_or(1);
                (h, cells)
            })
            .collect();
        StackChecker { patterns }
    }

    pub fn admissible(&self, above: &PeriodicStrip, below: &PeriodicStrip, phase: usize) -> bool {
        let lb = below.height;
        let total = lb + above.height;
        let read = |x: i64, y: usize| {
            if y < lb {
                below.get(x, y)
            } else {
                above.get(x + phase as i64, y - lb)
            }
        };
        let width = lcm(above.period, below.period) as i64;
        for (h, cells) in &self.patterns {
            if *h > total {
                continue;
            }
            for y0 in 0..=total - h {
                for x0 in 0..width {
                    if cells.iter().all(|&(dx, dy, s)| read(x0 + dx, y0 + dy) == s) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn phases(&self, above: &PeriodicStrip, below: &PeriodicStrip) -> Vec<usize> {
        (0..gcd(above.period, below.period))
            .filter(|&phi| self.admissible(above, below, phi))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::build_blocks;
    use crate::cubes::{normalize_to_cubes, DEFAULT_CUBE_CAP};
    use crate::fixtures::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn blocks_of(spec: &SftSpec) -> Vec<Block> {
        build_blocks(spec, &normalize_to_cubes(spec, DEFAULT_CUBE_CAP).unwrap()).unwrap()
    }

    /// Every `q x l` grid, filtered by a wrapped scan, canonicalized.
    fn brute_strips(spec: &SftSpec, l: usize, max_q: usize) -> BTreeSet<PeriodicStrip> {
        let a = spec.alphabet().len();
        let mut out = BTreeSet::new();
        for q in 1..=max_q {
            let n = q * l;
            for mut code in 0..a.pow(n as u32) {
                let mut cells = vec![0; n];
                for c in cells.iter_mut() {
                    *c = (code % a) as Symbol;
                    code /= a;
                }
                let s = PeriodicStrip::new(l, q, cells).unwrap();
                if is_wrap_admissible(spec, &s) {
                    out.insert(canonicalize_strip(&s));
                }
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for spec in [hard_square(), checkerboard(), contradiction(), l_shaped()] {
            let blocks = blocks_of(&spec);
            let l = spec.normalization_length();
            for p in 1..=2 {
                let got = enumerate_strips(&spec, &blocks, p, DEFAULT_MAX_STRIPS).unwrap();
                let want: Vec<_> = brute_strips(&spec, l, p * l).into_iter().collect();
                let mut got_sorted = got.clone();
                got_sorted.sort();
                assert_eq!(got_sorted, want);
                let mut keys: Vec<_> = got
                    .iter()
                    .map(|s| (s.period(), s.cells().to_vec()))
                    .collect();
                let before = keys.clone();
                keys.sort();
                assert_eq!(keys, before, "ordered by period then cells");
            }
        }
    }

    #[test]
    fn hard_square_strip_catalogue() {
        let spec = hard_square();
        let s1 = enumerate_strips(&spec, &blocks_of(&spec), 1, DEFAULT_MAX_STRIPS).unwrap();
        // all-zero (period 1) plus three period-2 classes: a lone 1 in the
        // bottom row, in the top row, or alternating diagonally
        assert_eq!(s1.len(), 4);
        assert_eq!(
            s1[0],
            PeriodicStrip::from_rows(&[vec![0], vec![0]]).unwrap()
        );
        assert!(s1[1..].iter().all(|s| s.period() == 2));
    }

    #[test]
    fn checkerboard_strip_catalogue() {
        let spec = checkerboard();
        let blocks = blocks_of(&spec);
        for p in 1..=3 {
            let s = enumerate_strips(&spec, &blocks, p, DEFAULT_MAX_STRIPS).unwrap();
            assert_eq!(s.len(), 1);
            assert_eq!(s[0].period(), 2);
        }
    }

    #[test]
    fn checkerboard_stacking_depends_on_phase() {
        let spec = checkerboard();
        let s = enumerate_strips(&spec, &blocks_of(&spec), 2, DEFAULT_MAX_STRIPS)
            .unwrap()
            .remove(0);
        // rows bottom-up "ab", "ba": stacking it on itself continues the
        // alternation, the rotated copy puts "ba" over "ba"
        assert_eq!(s.rows_top_down(), vec![vec![1, 0], vec![0, 1]]);
        assert!(strip_vertical_compatible(&spec, &s, &s));
        assert!(!strip_vertical_compatible(&spec, &s.rotated(1), &s));
        assert_eq!(compatible_phases(&spec, &s, &s), vec![0]);
    }

    #[test]
    fn hard_square_zero_strip_stacks_on_itself() {
        let spec = hard_square();
        let z = PeriodicStrip::from_rows(&[vec![0], vec![0]]).unwrap();
        assert!(strip_vertical_compatible(&spec, &z, &z));
    }

    #[test]
    fn canonicalize_examples() {
        let base = PeriodicStrip::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap();
        let doubled = PeriodicStrip::from_rows(&[vec![1, 0, 1, 0], vec![0, 0, 0, 0]]).unwrap();
        assert_eq!(canonicalize_strip(&doubled), canonicalize_strip(&base));
        assert_eq!(canonicalize_strip(&doubled).period(), 2);
        let c = canonicalize_strip(&base);
        assert_eq!(canonicalize_strip(&c), c);
        assert!(c.is_canonical());
    }

    #[test]
    fn block_cycles_yield_enumerated_strips() {
        for spec in [hard_square(), l_shaped(), checkerboard()] {
            let blocks = blocks_of(&spec);
            let adj = block_adjacency(&spec, &blocks);
            let l = spec.normalization_length();
            for k in 1..=2 {
                let strips: BTreeSet<_> = enumerate_strips(&spec, &blocks, k, DEFAULT_MAX_STRIPS)
                    .unwrap()
                    .into_iter()
                    .collect();
                // closed walks of length k
                let n = blocks.len();
                let mut walks: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
                for _ in 1..k {
                    walks = walks
                        .into_iter()
                        .flat_map(|w| {
                            let last = *w.last().unwrap();
                            adj.successors(last).into_iter().map(move |v| {
                                let mut w2 = w.clone();
                                w2.push(v);
                                w2
                            })
                        })
                        .collect();
                }
                for w in walks
                    .into_iter()
                    .filter(|w| adj.get(*w.last().unwrap(), w[0]))
                {
                    let bs: Vec<&Block> = w.iter().map(|&i| &blocks[i]).collect();
                    let s = strip_from_blocks(&bs).unwrap();
                    assert!(is_wrap_admissible(&spec, &s));
                    let c = canonicalize_strip(&s);
                    assert_eq!((k * l) % c.period(), 0);
                    assert!(strips.contains(&c));
                }
            }
        }
    }

    #[test]
    fn budget_monotonicity() {
        let spec = l_shaped();
        let blocks = blocks_of(&spec);
        let small: BTreeSet<_> = enumerate_strips(&spec, &blocks, 1, DEFAULT_MAX_STRIPS)
            .unwrap()
            .into_iter()
            .collect();
        let large: BTreeSet<_> = enumerate_strips(&spec, &blocks, 2, DEFAULT_MAX_STRIPS)
            .unwrap()
            .into_iter()
            .collect();
        assert!(small.is_subset(&large));
    }

    #[test]
    fn strip_cap_is_enforced() {
        let spec = hard_square();
        assert!(matches!(
            enumerate_strips(&spec, &blocks_of(&spec), 2, 3),
            Err(SftError::CapExceeded { .. })
        ));
    }

    fn arb_strip() -> impl Strategy<Value = PeriodicStrip> {
        (1usize..3, 1usize..7).prop_flat_map(|(h, q)| {
            prop::collection::vec(0u16..3, h * q)
                .prop_map(move |c| PeriodicStrip::new(h, q, c).unwrap())
        })
    }

    proptest! {
        #[test]
        fn canonical_form_is_rotation_invariant(s in arb_strip(), r in 0usize..7) {
            let c = canonicalize_strip(&s);
            prop_assert_eq!(&canonicalize_strip(&s.rotated(r % s.period())), &c);
            prop_assert_eq!(&canonicalize_strip(&c), &c);
            prop_assert!(c.is_canonical());
            prop_assert_eq!(s.period() % c.period(), 0);
        }

        #[test]
        fn checker_agrees_with_stacked_window(
            q1 in 1usize..5,
            q2 in 1usize..5,
            c1 in prop::collection::vec(0u16..2, 12),
            c2 in prop::collection::vec(0u16..2, 12),
            phase in 0usize..4,
        ) {
            for spec in [l_shaped(), hard_square()] {
                let h = spec.normalization_length();
                let a = PeriodicStrip::new(h, q1, c1[..h * q1].to_vec()).unwrap();
                let b = PeriodicStrip::new(h, q2, c2[..h * q2].to_vec()).unwrap();
                let checker = StackChecker::new(&spec);
                prop_assert_eq!(checker.admissible(&a, &b, phase), stack_admissible(&spec, &a, &b, phase));
            }
        }

        #[test]
        fn enumerated_strips_survive_triple_unrolling(p in 1usize..3) {
            let spec = l_shaped();
            for s in enumerate_strips(&spec, &blocks_of(&spec), p, DEFAULT_MAX_STRIPS).unwrap() {
                let wide = Grid::from_fn(&[3 * s.period(), s.height()], |c| s.get(c[0], c[1] as usize));
                prop_assert!(spec.is_locally_admissible(&wide));
            }
        }
    }
}
