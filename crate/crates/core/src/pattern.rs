//! Alphabets, finite patterns, box-shaped windows and shift specifications.
//!
//! Coordinates are integer vectors of length `dim`. Inside a box the cells are
//! laid out lexicographically by coordinate with the last axis varying fastest;
//! that order is used for every enumeration and serialization in the crate.
//! In two dimensions axis 0 is horizontal (rightward) and axis 1 is vertical
//! (upward).

use std::collections::HashSet;

use crate::error::{Result, SftError};

/// Index of a symbol in its [`Alphabet`].
pub type Symbol = u16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(SftError::InvalidAlphabet("alphabet is empty".into()));
        }
        if symbols.len() > Symbol::MAX as usize {
            return Err(SftError::InvalidAlphabet(format!(
                "{} symbols is more than supported",
                symbols.len()
            )));
        }
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.is_empty() {
                return Err(SftError::InvalidAlphabet("empty symbol name".into()));
            }
            if !seen.insert(s.as_str()) {
                return Err(SftError::InvalidAlphabet(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.symbols[s as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .map(|i| i as Symbol)
    }
}

/// Iterates every coordinate of the box `[0, shape)` in canonical order.
#[derive(Debug, Clone)]
pub struct BoxCoords {
    shape: Vec<usize>,
    next: Option<Vec<i64>>,
}

impl BoxCoords {
    pub fn new(shape: &[usize]) -> Self {
        let next = if shape.iter().all(|&s| s > 0) {
            Some(vec![0; shape.len()])
        } else {
            None
        };
        BoxCoords {
            shape: shape.to_vec(),
            next,
        }
    }
}

impl Iterator for BoxCoords {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut axis = succ.len();
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            succ[axis] += 1;
            if (succ[axis] as usize) < self.shape[axis] {
                self.next = Some(succ);
                break;
            }
            succ[axis] = 0;
        }
        Some(current)
    }
}

/// Calls `f` on every coordinate of the box `[0, shape)` in canonical order,
/// reusing one buffer.
pub(crate) fn for_each_coord(shape: &[usize], mut f: impl FnMut(&[i64])) {
    if shape.contains(&0) {
        return;
    }
    let mut c = vec![0i64; shape.len()];
    loop {
        f(&c);
        let mut axis = shape.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            c[axis] += 1;
            if (c[axis] as usize) < shape[axis] {
                break;
            }
            c[axis] = 0;
        }
    }
}

/// A total assignment of symbols over the box `[0, shape)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grid {
    shape: Vec<usize>,
    cells: Vec<Symbol>,
}

impl Grid {
    pub fn new(shape: Vec<usize>, cells: Vec<Symbol>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(SftError::InvalidGrid(format!("degenerate shape {shape:?}")));
        }
        let len: usize = shape.iter().product();
        if len != cells.len() {
            return Err(SftError::InvalidGrid(format!(
                "shape {shape:?} needs {len} cells, got {}",
                cells.len()
            )));
        }
        Ok(Grid { shape, cells })
    }

    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[i64]) -> Symbol) -> Self {
        let mut cells = Vec::with_capacity(shape.iter().product());
        for_each_coord(shape, |c| cells.push(f(c)));
        Grid {
            shape: shape.to_vec(),
            cells,
        }
    }

    /// Two-dimensional grid from rows listed bottom-up (`rows[y][x]`).
    pub fn from_rows(rows: &[Vec<Symbol>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if height == 0 || width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(SftError::InvalidGrid("ragged or empty rows".into()));
        }
        Ok(Grid::from_fn(&[width, height], |c| {
            rows[c[1] as usize][c[0] as usize]
        }))
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Symbol> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.shape)
    }

    pub fn linear_index(&self, coord: &[i64]) -> Option<usize> {
        if coord.len() != self.shape.len() {
            return None;
        }
        let mut idx = 0usize;
        for (&c, &s) in coord.iter().zip(&self.shape) {
            if c < 0 || c as usize >= s {
                return None;
            }
            idx = idx * s + c as usize;
        }
        Some(idx)
    }

    pub fn get(&self, coord: &[i64]) -> Option<Symbol> {
        self.linear_index(coord).map(|i| self.cells[i])
    }

    /// Reads `coord` modulo the shape along every axis.
    pub fn get_wrapped(&self, coord: &[i64]) -> Symbol {
        let mut idx = 0usize;
        for (&c, &s) in coord.iter().zip(&self.shape) {
            idx = idx * s + c.rem_euclid(s as i64) as usize;
        }
        self.cells[idx]
    }

    pub fn coords(&self) -> BoxCoords {
        BoxCoords::new(&self.shape)
    }

    /// Unrolls the grid along the `wrap` axes by `pad` extra cells read
    /// modulo the original extent. Scanning the result without wraparound is
    /// equivalent to a wrapped scan of the original for patterns of extent at
    /// most `pad + 1`.
    pub fn periodic_extension(&self, wrap: &[bool], pad: usize) -> Grid {
        let shape: Vec<usize> = self
            .shape
            .iter()
            .zip(wrap)
            .map(|(&s, &w)| if w { s + pad } else { s })
            .collect();
        Grid::from_fn(&shape, |c| self.get_wrapped(c))
    }
}

pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    strides
}

/// A pattern over a finite support of `Z^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePattern {
    dim: usize,
    cells: Vec<(Vec<i64>, Symbol)>,
}

impl FinitePattern {
    pub fn new<I>(dim: usize, cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Symbol)>,
    {
        if dim == 0 {
            return Err(SftError::InvalidPattern(
                "dimension must be positive".into(),
            ));
        }
        let mut cells: Vec<(Vec<i64>, Symbol)> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(SftError::InvalidPattern("pattern has no cells".into()));
        }
        if let Some((c, _)) = cells.iter().find(|(c, _)| c.len() != dim) {
            return Err(SftError::InvalidPattern(format!(
                "coordinate {c:?} does not have {dim} components"
            )));
        }
        cells.sort();
        if let Some(w) = cells.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(SftError::InvalidPattern(format!(
                "duplicate cell {:?}",
                w[0].0
            )));
        }
        Ok(FinitePattern { dim, cells })
    }

    /// The pattern read from a whole grid, placed at `origin`.
    pub fn from_grid(grid: &Grid, origin: &[i64]) -> Self {
        let cells = grid
            .coords()
            .zip(grid.cells())
            .map(|(c, &s)| (c.iter().zip(origin).map(|(a, b)| a + b).collect(), s))
            .collect();
        FinitePattern {
            dim: grid.dim(),
            cells,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells sorted in canonical coordinate order.
    pub fn cells(&self) -> &[(Vec<i64>, Symbol)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn min_corner(&self) -> Vec<i64> {
        (0..self.dim)
            .map(|i| self.cells.iter().map(|(c, _)| c[i]).min().unwrap())
            .collect()
    }

    pub fn max_corner(&self) -> Vec<i64> {
        (0..self.dim)
            .map(|i| self.cells.iter().map(|(c, _)| c[i]).max().unwrap())
            .collect()
    }

    /// Side lengths of the bounding box.
    pub fn extents(&self) -> Vec<usize> {
        self.min_corner()
            .iter()
            .zip(self.max_corner())
            .map(|(lo, hi)| (hi - lo + 1) as usize)
            .collect()
    }

    pub fn width(&self) -> usize {
        self.extents().into_iter().max().unwrap()
    }

    pub fn translated(&self, by: &[i64]) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|(c, s)| (c.iter().zip(by).map(|(a, b)| a + b).collect(), *s))
            .collect();
        FinitePattern {
            dim: self.dim,
            cells,
        }
    }

    /// Translates the pattern so its bounding box starts at the origin.
    pub fn normalized(&self) -> Self {
        let neg: Vec<i64> = self.min_corner().iter().map(|v| -v).collect();
        self.translated(&neg)
    }

    /// True when the support fills its bounding box.
    pub fn is_box(&self) -> bool {
        self.extents().iter().product::<usize>() == self.cells.len()
    }

    pub fn get(&self, coord: &[i64]) -> Option<Symbol> {
        self.cells
            .binary_search_by(|(c, _)| c.as_slice().cmp(coord))
            .ok()
            .map(|i| self.cells[i].1)
    }

    /// Whether the pattern, translated by `offset`, matches `window`.
    pub fn occurs(&self, window: &Grid, offset: &[i64]) -> Result<bool> {
        if offset.len() != self.dim {
            return Err(SftError::DimensionMismatch {
                expected: self.dim,
                found: offset.len(),
            });
        }
        if window.dim() != self.dim {
            return Err(SftError::DimensionMismatch {
                expected: self.dim,
                found: window.dim(),
            });
        }
        let mut at = vec![0i64; self.dim];
        let mut matched = true;
        for (c, s) in &self.cells {
            for i in 0..self.dim {
                at[i] = c[i] + offset[i];
            }
            match window.get(&at) {
                None => {
                    return Err(SftError::OutOfWindow {
                        offset: offset.to_vec(),
                    })
                }
                Some(v) if v != *s => matched = false,
                Some(_) => {}
            }
        }
        Ok(matched)
    }
}

pub fn width(p: &FinitePattern) -> usize {
    p.width()
}

/// Pattern cells flattened against a grid's strides, for fast scanning.
struct Compiled {
    extents: Vec<usize>,
    deltas: Vec<(usize, Symbol)>,
}

fn compile(p: &FinitePattern, strides: &[usize]) -> Compiled {
    let lo = p.min_corner();
    let deltas = p
        .cells()
        .iter()
        .map(|(c, s)| {
            let d = c
                .iter()
                .zip(&lo)
                .zip(strides)
                .map(|((a, b), st)| (a - b) as usize * st)
                .sum();
            (d, *s)
        })
        .collect();
    Compiled {
        extents: p.extents(),
        deltas,
    }
}

/// First occurrence (pattern index, offset of its bounding-box corner) of
/// any pattern inside `grid`, without wraparound.
pub(crate) fn find_occurrence(
    patterns: &[FinitePattern],
    grid: &Grid,
) -> Option<(usize, Vec<i64>)> {
    let strides = grid.strides();
    let cells = grid.cells();
    for (pi, p) in patterns.iter().enumerate() {
        if p.dim() != grid.dim() {
            continue;
        }
        let cp = compile(p, &strides);
        if cp.extents.iter().zip(grid.shape()).any(|(e, s)| e > s) {
            continue;
        }
        let range: Vec<usize> = grid
            .shape()
            .iter()
            .zip(&cp.extents)
            .map(|(s, e)| s - e + 1)
            .collect();
        let mut hit = None;
        for_each_coord(&range, |base| {
            if hit.is_some() {
                return;
            }
            let b: usize = base
                .iter()
                .zip(&strides)
                .map(|(x, st)| *x as usize * st)
                .sum();
            if cp.deltas.iter().all(|&(d, s)| cells[b + d] == s) {
                hit = Some(base.to_vec());
            }
        });
        if let Some(base) = hit {
            return Some((pi, base));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftSpec {
    alphabet: Alphabet,
    dim: usize,
    forbidden: Vec<FinitePattern>,
}

impl SftSpec {
    /// Validates the patterns, moves each to normal position (bounding box
    /// at the origin) and drops duplicates, keeping first occurrences.
    pub fn new(alphabet: Alphabet, dim: usize, forbidden: Vec<FinitePattern>) -> Result<Self> {
        if dim == 0 {
            return Err(SftError::InvalidPattern(
                "dimension must be positive".into(),
            ));
        }
        let mut seen = HashSet::new();
        let mut normalized = Vec::with_capacity(forbidden.len());
        for p in forbidden {
            if p.dim() != dim {
                return Err(SftError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if let Some((c, s)) = p
                .cells()
                .iter()
                .find(|(_, s)| *s as usize >= alphabet.len())
            {
                return Err(SftError::InvalidPattern(format!(
                    "symbol index {s} at {c:?} is outside an alphabet of {}",
                    alphabet.len()
                )));
            }
            let n = p.normalized();
            if seen.insert(n.clone()) {
                normalized.push(n);
            }
        }
        Ok(SftSpec {
            alphabet,
            dim,
            forbidden: normalized,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forbidden(&self) -> &[FinitePattern] {
        &self.forbidden
    }

    pub fn normalization_length(&self) -> usize {
        normalization_length(self)
    }

    pub fn first_occurrence(&self, window: &Grid) -> Option<(usize, Vec<i64>)> {
        find_occurrence(&self.forbidden, window)
    }

    /// No forbidden pattern occurs entirely inside the window.
    pub fn is_locally_admissible(&self, window: &Grid) -> bool {
        window.dim() == self.dim && self.first_occurrence(window).is_none()
    }

    /// Admissibility of the window read periodically along the `wrap` axes.
    pub fn is_admissible_wrapped(&self, window: &Grid, wrap: &[bool]) -> bool {
        let pad = normalization_length(self) - 1;
        self.is_locally_admissible(&window.periodic_extension(wrap, pad))
    }
}

/// Maximum width over the forbidden patterns; 1 for the full shift.
pub fn normalization_length(spec: &SftSpec) -> usize {
    spec.forbidden
        .iter()
        .map(FinitePattern::width)
        .max()
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pat(cells: &[(&[i64], Symbol)]) -> FinitePattern {
        FinitePattern::new(2, cells.iter().map(|(c, s)| (c.to_vec(), *s))).unwrap()
    }

    fn bin() -> Alphabet {
        Alphabet::new(["0", "1"]).unwrap()
    }

    #[test]
    fn width_examples() {
        assert_eq!(width(&pat(&[(&[0, 0], 1), (&[1, 0], 1)])), 2);
        assert_eq!(width(&pat(&[(&[5, 7], 0)])), 1);
        let l = pat(&[(&[0, 0], 0), (&[0, 1], 1), (&[0, 2], 0), (&[1, 0], 1)]);
        assert_eq!(width(&l), 3);
    }

    #[test]
    fn normalization_length_examples() {
        let hs = SftSpec::new(
            bin(),
            2,
            vec![
                pat(&[(&[0, 0], 1), (&[1, 0], 1)]),
                pat(&[(&[0, 0], 1), (&[0, 1], 1)]),
            ],
        )
        .unwrap();
        assert_eq!(normalization_length(&hs), 2);
        assert_eq!(
            normalization_length(&SftSpec::new(bin(), 2, vec![]).unwrap()),
            1
        );
        let mixed = SftSpec::new(
            bin(),
            2,
            vec![
                pat(&[(&[0, 0], 1), (&[1, 0], 0), (&[2, 0], 1)]),
                pat(&[(&[0, 0], 0), (&[0, 1], 0)]),
            ],
        )
        .unwrap();
        assert_eq!(normalization_length(&mixed), 3);
    }

    #[test]
    fn occurs_examples() {
        let p = pat(&[(&[0, 0], 1), (&[1, 0], 1)]);
        let w = Grid::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(p.occurs(&w, &[0, 0]).unwrap());
        let w = Grid::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!p.occurs(&w, &[0, 0]).unwrap());
        let single = pat(&[(&[0, 0], 0)]);
        let zeros = Grid::from_rows(&vec![vec![0; 3]; 3]).unwrap();
        for c in zeros.coords() {
            assert!(single.occurs(&zeros, &c).unwrap());
        }
    }

    #[test]
    fn occurs_rejects_offsets_outside_window() {
        let p = pat(&[(&[0, 0], 1), (&[1, 0], 1)]);
        let w = Grid::from_rows(&[vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(
            p.occurs(&w, &[1, 0]),
            Err(SftError::OutOfWindow { .. })
        ));
        assert!(matches!(
            p.occurs(&w, &[0, -1]),
            Err(SftError::OutOfWindow { .. })
        ));
        assert!(matches!(
            p.occurs(&w, &[0]),
            Err(SftError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pattern_validation() {
        assert!(FinitePattern::new(2, Vec::new()).is_err());
        assert!(FinitePattern::new(2, vec![(vec![0], 0)]).is_err());
        assert!(FinitePattern::new(2, vec![(vec![0, 0], 0), (vec![0, 0], 1)]).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn spec_dedups_under_translation() {
        let a = pat(&[(&[0, 0], 1), (&[1, 0], 1)]);
        let b = pat(&[(&[3, -2], 1), (&[4, -2], 1)]);
        let spec = SftSpec::new(bin(), 2, vec![a.clone(), b]).unwrap();
        assert_eq!(spec.forbidden(), &[a]);
    }

    #[test]
    fn spec_rejects_bad_symbols_and_dims() {
        let bad = pat(&[(&[0, 0], 2)]);
        assert!(SftSpec::new(bin(), 2, vec![bad]).is_err());
        let p1 = FinitePattern::new(1, vec![(vec![0], 0)]).unwrap();
        assert!(matches!(
            SftSpec::new(bin(), 2, vec![p1]),
            Err(SftError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn periodic_extension_reads_modulo() {
        let g = Grid::from_rows(&[vec![0, 1, 1]]).unwrap();
        let e = g.periodic_extension(&[true, false], 2);
        assert_eq!(e.shape(), &[5, 1]);
        assert_eq!(e.cells(), &[0, 1, 1, 0, 1]);
    }

    #[test]
    fn box_coords_order_is_last_axis_fastest() {
        let got: Vec<_> = BoxCoords::new(&[2, 3]).collect();
        assert_eq!(got[0], vec![0, 0]);
        assert_eq!(got[1], vec![0, 1]);
        assert_eq!(got[3], vec![1, 0]);
        assert_eq!(got.len(), 6);
    }

    fn arb_pattern() -> impl Strategy<Value = FinitePattern> {
        prop::collection::btree_map((-4i64..4, -4i64..4), 0u16..3, 1..6).prop_map(|m| {
            FinitePattern::new(2, m.into_iter().map(|((x, y), s)| (vec![x, y], s))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn width_is_translation_invariant(p in arb_pattern(), dx in -20i64..20, dy in -20i64..20) {
            prop_assert_eq!(width(&p), width(&p.translated(&[dx, dy])));
        }

        #[test]
        fn normalization_length_is_translation_invariant(
            ps in prop::collection::vec(arb_pattern(), 0..4),
            dx in -9i64..9,
            dy in -9i64..9,
        ) {
            let abc = Alphabet::new(["a", "b", "c"]).unwrap();
            let moved = ps.iter().map(|p| p.translated(&[dx, dy])).collect();
            let a = SftSpec::new(abc.clone(), 2, ps).unwrap();
            let b = SftSpec::new(abc, 2, moved).unwrap();
            prop_assert_eq!(normalization_length(&a), normalization_length(&b));
        }

        #[test]
        fn scan_agrees_with_occurs(p in arb_pattern(), cells in prop::collection::vec(0u16..3, 36)) {
            let g = Grid::new(vec![6, 6], cells).unwrap();
            let n = p.normalized();
            let ext = n.extents();
            let mut brute = false;
            for x in 0..=(6 - ext[0] as i64) {
                for y in 0..=(6 - ext[1] as i64) {
                    brute |= n.occurs(&g, &[x, y]).unwrap();
                }
            }
            prop_assert_eq!(find_occurrence(&[n], &g).is_some(), brute);
        }
    }
}
