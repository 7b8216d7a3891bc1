//! The finite pair stage in two dimensions: side-`l` blocks, vertically
//! stacked block pairs, and the horizontal adjacency matrix between pairs.
//!
//! "Allowed" is read as local admissibility: a window is accepted when no
//! forbidden pattern occurs inside it. Every forbidden pattern fits in an
//! `l x l` box, so non-overlapping juxtaposition covers every occurrence that
//! straddles a seam.

use crate::bitmatrix::BitMatrix;
use crate::cubes::CubeSystem;
use crate::error::{Result, SftError};
use crate::pattern::{Grid, SftSpec, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    grid: Grid,
}

impl Block {
    pub fn new(grid: Grid) -> Result<Self> {
        if grid.dim() != 2 || grid.shape()[0] != grid.shape()[1] {
            return Err(SftError::InvalidGrid(format!(
                "block must be square and planar, got shape {:?}",
                grid.shape()
            )));
        }
        Ok(Block { grid })
    }

    pub fn side(&self) -> usize {
        self.grid.shape()[0]
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn get(&self, x: usize, y: usize) -> Symbol {
        self.grid.cells()[x * self.side() + y]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VPair {
    pub top: Block,
    pub bottom: Block,
}

impl VPair {
    /// The `l x 2l` window with `bottom` in rows `[0, l)`.
    pub fn window(&self) -> Grid {
        let l = self.top.side();
        Grid::from_fn(&[l, 2 * l], |c| {
            let (x, y) = (c[0] as usize, c[1] as usize);
            if y < l {
                self.bottom.get(x, y)
            } else {
                self.top.get(x, y - l)
            }
        })
    }

    pub fn get(&self, x: usize, y: usize) -> Symbol {
        let l = self.top.side();
        if y < l {
            self.bottom.get(x, y)
        } else {
            self.top.get(x, y - l)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HMatrix {
    pub indices: Vec<VPair>,
    pub entries: BitMatrix,
}

/// Pair `left` followed by pair `right` as one `2l x 2l` window.
pub fn juxtapose(left: &VPair, right: &VPair) -> Grid {
    let l = left.top.side();
    Grid::from_fn(&[2 * l, 2 * l], |c| {
        let (x, y) = (c[0] as usize, c[1] as usize);
        if x < l {
            left.get(x, y)
        } else {
            right.get(x - l, y)
        }
    })
}

fn require_planar(spec: &SftSpec) -> Result<()> {
    if spec.dim() != 2 {
        return Err(SftError::DimensionMismatch {
            expected: 2,
            found: spec.dim(),
        });
    }
    Ok(())
}

pub fn build_blocks(spec: &SftSpec, cubes: &CubeSystem) -> Result<Vec<Block>> {
    require_planar(spec)?;
    if cubes.dim() != 2 {
        return Err(SftError::DimensionMismatch {
            expected: 2,
            found: cubes.dim(),
        });
    }
    cubes.allowed_grids().map(Block::new).collect()
}

pub fn build_vpairs(spec: &SftSpec, blocks: &[Block]) -> Vec<VPair> {
    let mut pairs = Vec::new();
    for top in blocks {
        for bottom in blocks {
            let pair = VPair {
                top: top.clone(),
                bottom: bottom.clone(),
            };
            if spec.is_locally_admissible(&pair.window()) {
                pairs.push(pair);
            }
        }
    }
    pairs.sort();
    pairs
}

pub fn build_hmatrix(spec: &SftSpec, vpairs: &[VPair]) -> HMatrix {
    let n = vpairs.len();
    let mut entries = BitMatrix::zeros(n);
    for (i, a) in vpairs.iter().enumerate() {
        for (j, b) in vpairs.iter().enumerate() {
            entries.set(i, j, spec.is_locally_admissible(&juxtapose(a, b)));
        }
    }
    HMatrix {
        indices: vpairs.to_vec(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{normalize_to_cubes, DEFAULT_CUBE_CAP};
    use crate::fixtures::*;

    fn pipeline(spec: &SftSpec) -> (Vec<Block>, Vec<VPair>, HMatrix) {
        let cubes = normalize_to_cubes(spec, DEFAULT_CUBE_CAP).unwrap();
        let blocks = build_blocks(spec, &cubes).unwrap();
        let pairs = build_vpairs(spec, &blocks);
        let h = build_hmatrix(spec, &pairs);
        (blocks, pairs, h)
    }

    /// Brute force over every total `w x h` grid.
    fn admissible_grids(spec: &SftSpec, w: usize, h: usize) -> Vec<Grid> {
        let a = spec.alphabet().len();
        let n = w * h;
        (0..a.pow(n as u32))
            .map(|mut code| {
                let mut cells = vec![0; n];
                for c in cells.iter_mut().rev() {
                    *c = (code % a) as Symbol;
                    code /= a;
                }
                Grid::new(vec![w, h], cells).unwrap()
            })
            .filter(|g| spec.is_locally_admissible(g))
            .collect()
    }

    #[test]
    fn block_counts() {
        assert_eq!(pipeline(&hard_square()).0.len(), 7);
        assert_eq!(pipeline(&checkerboard()).0.len(), 2);
        assert_eq!(pipeline(&full_shift(&["0", "1"])).0.len(), 2);
    }

    #[test]
    fn vpair_counts_match_brute_force() {
        // a vpair is exactly an admissible l x 2l window
        let (_, cb, _) = pipeline(&checkerboard());
        assert_eq!(cb.len(), 2);
        assert_eq!(admissible_grids(&checkerboard(), 2, 4).len(), 2);
        let (_, hs, _) = pipeline(&hard_square());
        assert_eq!(hs.len(), admissible_grids(&hard_square(), 2, 4).len());
        assert_eq!(hs.len(), 41);
        let (_, full, _) = pipeline(&full_shift(&["0", "1"]));
        assert_eq!(full.len(), 4);
    }

    #[test]
    fn hmatrix_examples() {
        let (_, _, cb) = pipeline(&checkerboard());
        // each pair only continues as itself: columns alternate with period 2
        assert_eq!(cb.entries, BitMatrix::from_rows(&[[1, 0], [0, 1]]));

        let (_, _, full) = pipeline(&full_shift(&["0", "1"]));
        assert_eq!(full.entries.ones(), 16);

        let (_, pairs, hs) = pipeline(&hard_square());
        assert_eq!(hs.entries.dim(), 41);
        assert!((0..41).all(|i| !hs.entries.successors(i).is_empty()));
        // total 1-entries = admissible 4 x 4 hard-square windows
        assert_eq!(hs.entries.ones(), 1234);
        assert_eq!(pairs.len(), 41);
    }

    #[test]
    fn window_soundness() {
        for spec in [hard_square(), checkerboard(), l_shaped()] {
            let (_, pairs, h) = pipeline(&spec);
            for i in 0..pairs.len() {
                for j in 0..pairs.len() {
                    let w = juxtapose(&pairs[i], &pairs[j]);
                    assert_eq!(h.entries.get(i, j), spec.first_occurrence(&w).is_none());
                }
            }
        }
    }

    #[test]
    fn walks_assemble_admissible_strips() {
        let spec = hard_square();
        let (_, pairs, h) = pipeline(&spec);
        let l = 2;
        // all walks of length 3 from a handful of start pairs
        for start in 0..pairs.len().min(8) {
            let mut walks = vec![vec![start]];
            for _ in 0..2 {
                walks = walks
                    .into_iter()
                    .flat_map(|w| {
                        let last = *w.last().unwrap();
                        h.entries.successors(last).into_iter().map(move |n| {
                            let mut w2 = w.clone();
                            w2.push(n);
                            w2
                        })
                    })
                    .collect();
            }
            for w in walks {
                let strip = Grid::from_fn(&[w.len() * l, 2 * l], |c| {
                    let (x, y) = (c[0] as usize, c[1] as usize);
                    pairs[w[x / l]].get(x % l, y)
                });
                assert!(spec.is_locally_admissible(&strip));
            }
        }
    }

    #[test]
    fn planar_only() {
        let ab = crate::pattern::Alphabet::new(["a"]).unwrap();
        let spec = SftSpec::new(ab, 3, vec![]).unwrap();
        let cubes = normalize_to_cubes(&spec, 16).unwrap();
        assert!(matches!(
            build_blocks(&spec, &cubes),
            Err(SftError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(pipeline(&l_shaped()).2, pipeline(&l_shaped()).2);
    }
}
