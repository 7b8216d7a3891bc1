//! Replacement of an arbitrary finite forbidden set by an equivalent system of
//! fixed-side cubes.
//!
//! The side `l` is the largest width over the forbidden patterns. A cube of
//! side `l` is excluded as soon as some forbidden pattern occurs anywhere in
//! it, which removes every extension of a forbidden pattern plus the shifted
//! ones. For windows of side at least `l` this defines exactly the same local
//! admissibility as the original set.

use std::collections::HashSet;

use crate::error::{Result, SftError};
use crate::pattern::{normalization_length, Grid, SftSpec, Symbol};
use crate::search::Constraints;

pub const DEFAULT_CUBE_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSystem {
    side: usize,
    dim: usize,
    alphabet_size: usize,
    allowed: Vec<Vec<Symbol>>,
    forbidden_count: u128,
}

impl CubeSystem {
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Allowed cubes, each in canonical cell order, sorted lexicographically.
    pub fn allowed(&self) -> &[Vec<Symbol>] {
        &self.allowed
    }

    pub fn forbidden_count(&self) -> u128 {
        self.forbidden_count
    }

    pub fn cube_shape(&self) -> Vec<usize> {
        vec![self.side; self.dim]
    }

    pub fn allowed_grids(&self) -> impl Iterator<Item = Grid> + '_ {
        let shape = self.cube_shape();
        self.allowed
            .iter()
            .map(move |c| Grid::new(shape.clone(), c.clone()).expect("cube shape"))
    }

    pub fn allowed_set(&self) -> HashSet<Vec<Symbol>> {
        self.allowed.iter().cloned().collect()
    }

    pub fn is_allowed(&self, cube: &[Symbol]) -> bool {
        self.allowed
            .binary_search_by(|c| c.as_slice().cmp(cube))
            .is_ok()
    }

    /// Number of total windows of side `n` in which every side-`l` sub-cube
    /// is allowed. Windows smaller than a cube are unconstrained.
    pub fn count_admissible_windows(&self, n: usize, max_states: usize) -> Result<u128> {
        let shape = vec![n; self.dim];
        let mut c = Constraints::new(&shape, self.alphabet_size);
        c.require_windows(
            &self.cube_shape(),
            self.allowed_set(),
            &vec![false; self.dim],
        );
        c.count(max_states)
    }
}

pub fn normalize_to_cubes(spec: &SftSpec, cap: u64) -> Result<CubeSystem> {
    let side = normalization_length(spec);
    let dim = spec.dim();
    let a = spec.alphabet().len();
    let cells = side
        .checked_pow(dim as u32)
        .filter(|&c| c <= u32::MAX as usize)
        .ok_or_else(|| SftError::cap("cube cell count", cap))?;
    let total = (a as u128)
        .checked_pow(cells as u32)
        .filter(|&t| t <= cap as u128)
        .ok_or_else(|| SftError::cap(format!("{a}^{cells} candidate cubes of side {side}"), cap))?;
    let shape = vec![side; dim];
    let mut c = Constraints::new(&shape, a);
    c.forbid_patterns(spec.forbidden(), &vec![false; dim]);
    let mut allowed = Vec::new();
    c.backtrack(|cube| {
        allowed.push(cube.to_vec());
        true
    });
    let forbidden_count = total - allowed.len() as u128;
    Ok(CubeSystem {
        side,
        dim,
        alphabet_size: a,
        allowed,
        forbidden_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::pattern::{Alphabet, BoxCoords, FinitePattern};

    /// Prop-1 style exclusion: the cube extends a forbidden pattern placed
    /// at the cube's corner.
    fn corner_excluded(spec: &SftSpec, cube: &Grid) -> bool {
        spec.forbidden()
            .iter()
            .any(|p| p.occurs(cube, &vec![0; spec.dim()]).unwrap())
    }

    fn brute_allowed(spec: &SftSpec) -> Vec<Vec<Symbol>> {
        let l = normalization_length(spec);
        let shape = vec![l; spec.dim()];
        let n: usize = shape.iter().product();
        let a = spec.alphabet().len();
        let mut out = Vec::new();
        for code in 0..a.pow(n as u32) {
            let mut cells = vec![0; n];
            let mut rest = code;
            for i in (0..n).rev() {
                cells[i] = (rest % a) as Symbol;
                rest /= a;
            }
            let g = Grid::new(shape.clone(), cells.clone()).unwrap();
            let hit = spec.forbidden().iter().any(|p| {
                let ext = p.extents();
                let range: Vec<usize> = ext.iter().map(|e| l - e + 1).collect();
                BoxCoords::new(&range).any(|o| p.occurs(&g, &o).unwrap())
            });
            if !hit {
                out.push(cells);
            }
        }
        out
    }

    #[test]
    fn hard_square_has_seven_cubes() {
        let cs = normalize_to_cubes(&hard_square(), DEFAULT_CUBE_CAP).unwrap();
        assert_eq!(cs.side(), 2);
        assert_eq!(cs.allowed().len(), 7);
        assert_eq!(cs.forbidden_count(), 9);
        assert_eq!(cs.allowed(), brute_allowed(&hard_square()).as_slice());
    }

    #[test]
    fn checkerboard_has_two_cubes() {
        let cs = normalize_to_cubes(&checkerboard(), DEFAULT_CUBE_CAP).unwrap();
        assert_eq!(cs.allowed().len(), 2);
        assert_eq!(cs.allowed(), brute_allowed(&checkerboard()).as_slice());
    }

    #[test]
    fn full_shift_keeps_every_symbol() {
        let spec = full_shift(&["0", "1"]);
        let cs = normalize_to_cubes(&spec, DEFAULT_CUBE_CAP).unwrap();
        assert_eq!(cs.side(), 1);
        assert_eq!(cs.allowed(), &[vec![0], vec![1]]);
    }

    #[test]
    fn cap_is_enforced() {
        let err = normalize_to_cubes(&hard_square(), 15).unwrap_err();
        assert!(matches!(err, SftError::CapExceeded { .. }));
        assert!(normalize_to_cubes(&hard_square(), 16).is_ok());
    }

    #[test]
    fn allowed_cubes_avoid_every_pattern() {
        for spec in [hard_square(), checkerboard(), contradiction(), l_shaped()] {
            let cs = normalize_to_cubes(&spec, DEFAULT_CUBE_CAP).unwrap();
            for g in cs.allowed_grids() {
                assert!(spec.is_locally_admissible(&g));
            }
            let mut sorted = cs.allowed().to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, cs.allowed());
        }
    }

    #[test]
    fn corner_exclusion_is_subsumed_and_tori_agree() {
        for spec in [hard_square(), checkerboard(), l_shaped()] {
            let l = normalization_length(&spec);
            let cs = normalize_to_cubes(&spec, DEFAULT_CUBE_CAP).unwrap();
            let shape = vec![l; spec.dim()];
            let n: usize = shape.iter().product();
            let a = spec.alphabet().len();
            let mut corner_allowed = Vec::new();
            for code in 0..a.pow(n as u32) {
                let mut cells = vec![0; n];
                let mut rest = code;
                for i in (0..n).rev() {
                    cells[i] = (rest % a) as Symbol;
                    rest /= a;
                }
                let g = Grid::new(shape.clone(), cells.clone()).unwrap();
                if corner_excluded(&spec, &g) {
                    assert!(!cs.is_allowed(&cells));
                } else {
                    corner_allowed.push(cells);
                }
            }
            // corner-anchored exclusion admits extra finite windows near the
            // boundary, but on every torus (a periodic point) the two cube
            // systems and the original patterns agree
            let corner_set: HashSet<Vec<Symbol>> = corner_allowed.into_iter().collect();
            for q0 in 1..=3 {
                for q1 in 1..=3 {
                    let periods = [q0, q1];
                    let mut orig = Constraints::new(&periods, a);
                    orig.forbid_patterns(spec.forbidden(), &[true, true]);
                    let mut corner = Constraints::new(&periods, a);
                    corner.require_windows(&shape, corner_set.clone(), &[true, true]);
                    let mut occ = Constraints::new(&periods, a);
                    occ.require_windows(&shape, cs.allowed_set(), &[true, true]);
                    let want = orig.count(1 << 20).unwrap();
                    assert_eq!(corner.count(1 << 20).unwrap(), want);
                    assert_eq!(occ.count(1 << 20).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn normalization_is_deterministic() {
        let a = normalize_to_cubes(&l_shaped(), DEFAULT_CUBE_CAP).unwrap();
        let b = normalize_to_cubes(&l_shaped(), DEFAULT_CUBE_CAP).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn one_dimensional_and_three_dimensional_specs_normalize() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let p = FinitePattern::new(1, vec![(vec![0], 1), (vec![1], 1)]).unwrap();
        let golden = SftSpec::new(ab.clone(), 1, vec![p]).unwrap();
        assert_eq!(normalize_to_cubes(&golden, 64).unwrap().allowed().len(), 3);
        let q = FinitePattern::new(3, vec![(vec![0, 0, 0], 1), (vec![0, 0, 1], 1)]).unwrap();
        let stacked = SftSpec::new(ab, 3, vec![q]).unwrap();
        // 8 cells, the four vertical pairs each avoid 11: 3^4
        assert_eq!(
            normalize_to_cubes(&stacked, 256).unwrap().allowed().len(),
            81
        );
    }
}
