//! Local constraint systems over a box of cells, shared by the brute-force
//! oracles and the strip enumerator.
//!
//! Cells are numbered in canonical order. Every constraint is attached to the
//! highest-numbered cell it reads (its trigger), so a search that assigns cells
//! in order can test it as soon as it becomes fully determined.

use std::collections::{HashMap, HashSet};

use crate::error::{Result, SftError};
use crate::pattern::{strides_of, BoxCoords, FinitePattern, Symbol};

#[derive(Debug, Clone)]
enum Check {
    /// Violated when every cell carries the listed symbol.
    Forbid(Vec<Symbol>),
    /// Satisfied when the tuple of cell values is in the given set.
    Member(usize),
}

#[derive(Debug, Clone)]
struct Placement {
    cells: Vec<usize>,
    check: Check,
}

#[derive(Debug, Clone)]
pub(crate) struct Constraints {
    shape: Vec<usize>,
    alphabet: usize,
    by_trigger: Vec<Vec<Placement>>,
    sets: Vec<HashSet<Vec<Symbol>>>,
}

fn base_ranges(shape: &[usize], extents: &[usize], wrap: &[bool]) -> Option<Vec<usize>> {
    shape
        .iter()
        .zip(extents)
        .zip(wrap)
        .map(|((&s, &e), &w)| {
            if w {
                Some(s)
            } else if e <= s {
                Some(s - e + 1)
            } else {
                None
            }
        })
        .collect()
}

fn wrapped_index(coord: &[i64], shape: &[usize], strides: &[usize]) -> usize {
    coord
        .iter()
        .zip(shape)
        .zip(strides)
        .map(|((&c, &s), st)| c.rem_euclid(s as i64) as usize * st)
        .sum()
}

impl Constraints {
    pub(crate) fn new(shape: &[usize], alphabet: usize) -> Self {
        let n: usize = shape.iter().product();
        Constraints {
            shape: shape.to_vec(),
            alphabet,
            by_trigger: vec![Vec::new(); n],
            sets: Vec::new(),
        }
    }

    pub(crate) fn n_cells(&self) -> usize {
        self.by_trigger.len()
    }

    fn push(&mut self, p: Placement) {
        if let Some(&t) = p.cells.iter().max() {
            self.by_trigger[t].push(p);
        }
    }

    /// Forbids every placement of the (normalized) patterns. Along `wrap`
    /// axes the box is read periodically.
    pub(crate) fn forbid_patterns(&mut self, patterns: &[FinitePattern], wrap: &[bool]) {
        let strides = strides_of(&self.shape);
        for p in patterns {
            let Some(ranges) = base_ranges(&self.shape, &p.extents(), wrap) else {
                continue;
            };
            for base in BoxCoords::new(&ranges) {
                let mut cells: Vec<(usize, Symbol)> = p
                    .cells()
                    .iter()
                    .map(|(c, s)| {
                        let at: Vec<i64> = c.iter().zip(&base).map(|(a, b)| a + b).collect();
                        (wrapped_index(&at, &self.shape, &strides), *s)
                    })
                    .collect();
                cells.sort_unstable();
                cells.dedup();
                // two pattern cells folded onto one box cell with different
                // symbols: this placement can never match
                if cells.windows(2).any(|w| w[0].0 == w[1].0) {
                    continue;
                }
                let (idx, syms) = cells.into_iter().unzip();
                self.push(Placement {
                    cells: idx,
                    check: Check::Forbid(syms),
                });
            }
        }
    }

    /// Requires every `window`-shaped sub-box, read in canonical order, to be
    /// a member of `allowed`.
    pub(crate) fn require_windows(
        &mut self,
        window: &[usize],
        allowed: HashSet<Vec<Symbol>>,
        wrap: &[bool],
    ) {
        let set = self.sets.len();
        self.sets.push(allowed);
        let strides = strides_of(&self.shape);
        let Some(ranges) = base_ranges(&self.shape, window, wrap) else {
            return;
        };
        let offsets: Vec<Vec<i64>> = BoxCoords::new(window).collect();
        for base in BoxCoords::new(&ranges) {
            let cells = offsets
                .iter()
                .map(|o| {
                    let at: Vec<i64> = o.iter().zip(&base).map(|(a, b)| a + b).collect();
                    wrapped_index(&at, &self.shape, &strides)
                })
                .collect();
            self.push(Placement {
                cells,
                check: Check::Member(set),
            });
        }
    }

    fn holds(&self, p: &Placement, value: impl Fn(usize) -> Symbol, buf: &mut Vec<Symbol>) -> bool {
        match &p.check {
            Check::Forbid(syms) => !p.cells.iter().zip(syms).all(|(&c, &s)| value(c) == s),
            Check::Member(set) => {
                buf.clear();
                buf.extend(p.cells.iter().map(|&c| value(c)));
                self.sets[*set].contains(buf.as_slice())
            }
        }
    }

    /// Depth-first search over all satisfying assignments in lexicographic
    /// order. `visit` returns false to stop early.
    pub(crate) fn backtrack(&self, mut visit: impl FnMut(&[Symbol]) -> bool) {
        let mut assignment = vec![0 as Symbol; self.n_cells()];
        let mut buf = Vec::new();
        self.descend(0, &mut assignment, &mut buf, &mut visit);
    }

    fn descend(
        &self,
        t: usize,
        assignment: &mut Vec<Symbol>,
        buf: &mut Vec<Symbol>,
        visit: &mut impl FnMut(&[Symbol]) -> bool,
    ) -> bool {
        if t == assignment.len() {
            return visit(assignment);
        }
        for s in 0..self.alphabet as Symbol {
            assignment[t] = s;
            let ok = self.by_trigger[t]
                .iter()
                .all(|p| self.holds(p, |c| assignment[c], buf));
            if ok && !self.descend(t + 1, assignment, buf, visit) {
                return false;
            }
        }
        true
    }

    /// Counts satisfying assignments by dynamic programming over the frontier
    /// of recently assigned cells. `max_states` bounds the frontier table.
    pub(crate) fn count(&self, max_states: usize) -> Result<u128> {
        let bits = (usize::BITS - (self.alphabet.max(2) - 1).leading_zeros()) as usize;
        let reach = self
            .by_trigger
            .iter()
            .enumerate()
            .flat_map(|(t, ps)| {
                ps.iter()
                    .flat_map(move |p| p.cells.iter().map(move |&c| t - c))
            })
            .max()
            .unwrap_or(0);
        if reach * bits > 128 {
            return Err(SftError::cap(
                format!("frontier of {reach} cells at {bits} bits per symbol"),
                128u128,
            ));
        }
        let mask: u128 = if reach * bits == 128 {
            u128::MAX
        } else {
            (1u128 << (reach * bits)) - 1
        };
        let sym_mask: u128 = (1u128 << bits) - 1;
        let mut layer: HashMap<u128, u128> = HashMap::from([(0, 1)]);
        let mut buf = Vec::new();
        for t in 0..self.n_cells() {
            let mut next: HashMap<u128, u128> = HashMap::with_capacity(layer.len());
            for (&state, &count) in &layer {
                for s in 0..self.alphabet as Symbol {
                    let value = |c: usize| -> Symbol {
                        let back = t - c;
                        if back == 0 {
                            s
                        } else {
                            ((state >> ((back - 1) * bits)) & sym_mask) as Symbol
                        }
                    };
                    if !self.by_trigger[t]
                        .iter()
                        .all(|p| self.holds(p, value, &mut buf))
                    {
                        continue;
                    }
                    let succ = if reach == 0 {
                        0
                    } else {
                        ((state << bits) | s as u128) & mask
                    };
                    let slot = next.entry(succ).or_insert(0);
                    *slot = slot
                        .checked_add(count)
                        .ok_or_else(|| SftError::cap("window count", u128::MAX))?;
                }
            }
            if next.len() > max_states {
                return Err(SftError::cap("frontier states", max_states as u128));
            }
            layer = next;
        }
        layer
            .values()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| SftError::cap("window count", u128::MAX))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domino(dir: usize) -> FinitePattern {
        let mut b = vec![0, 0];
        b[dir] = 1;
        FinitePattern::new(2, vec![(vec![0, 0], 1), (b, 1)]).unwrap()
    }

    #[test]
    fn dp_and_backtracking_agree_on_hard_squares() {
        for n in 1..=4 {
            let mut c = Constraints::new(&[n, n], 2);
            c.forbid_patterns(&[domino(0), domino(1)], &[false, false]);
            let mut listed = 0u128;
            c.backtrack(|_| {
                listed += 1;
                true
            });
            assert_eq!(c.count(1 << 20).unwrap(), listed);
        }
    }

    #[test]
    fn wrapped_pattern_folds_onto_itself() {
        // a 1-wide torus row: the horizontal domino 11 folds onto one cell
        let mut c = Constraints::new(&[1, 1], 2);
        c.forbid_patterns(&[domino(0)], &[true, true]);
        let mut found = Vec::new();
        c.backtrack(|a| {
            found.push(a.to_vec());
            true
        });
        assert_eq!(found, vec![vec![0]]);
    }

    #[test]
    fn frontier_cap_is_reported() {
        let c = {
            let mut c = Constraints::new(&[6, 6], 3);
            c.forbid_patterns(&[domino(0)], &[false, false]);
            c
        };
        assert!(matches!(c.count(3), Err(SftError::CapExceeded { .. })));
    }
}
