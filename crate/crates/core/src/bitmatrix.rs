//! Dense square 0/1 matrices with the pruning and cycle queries used on both
//! the pair matrix and the strip matrix.

use std::collections::VecDeque;

use crate::error::{Result, SftError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        BitMatrix {
            n,
            bits: vec![false; n * n],
        }
    }

    /// Panics unless `rows` is square.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut m = BitMatrix::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), n, "matrix must be square");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v != 0);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.bits[i * self.n..(i + 1) * self.n]
    }

    /// Indices `j` with entry `(i, j) = 1`.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.get(i, j)).collect()
    }

    /// Indices `j` with entry `(j, i) = 1`.
    pub fn predecessors(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.get(j, i)).collect()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn submatrix(&self, keep: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    /// Row strings of `0`/`1`.
    pub fn to_bit_rows(&self) -> Vec<String> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(SftError::IndexOutOfRange {
                index: i,
                len: self.n,
            });
        }
        Ok(())
    }

    /// Every member of `subset` has a partner above and below it inside
    /// `subset`.
    pub fn is_complementary(&self, subset: &[usize]) -> Result<bool> {
        for &i in subset {
            self.check_index(i)?;
        }
        Ok(subset.iter().all(|&i| {
            subset.iter().any(|&j| self.get(i, j)) && subset.iter().any(|&j| self.get(j, i))
        }))
    }

    /// Repeatedly deletes indices whose row or column is zero among the
    /// survivors. Returns the survivors in increasing order: the largest
    /// complementary subset.
    pub fn prune_survivors(&self) -> Vec<usize> {
        let n = self.n;
        let mut alive = vec![true; n];
        let mut out_deg: Vec<usize> = (0..n).map(|i| self.successors(i).len()).collect();
        let mut in_deg: Vec<usize> = (0..n).map(|i| self.predecessors(i).len()).collect();
        let mut queue: VecDeque<usize> = (0..n)
            .filter(|&i| out_deg[i] == 0 || in_deg[i] == 0)
            .collect();
        while let Some(i) = queue.pop_front() {
            if !alive[i] {
                continue;
            }
            alive[i] = false;
            for j in 0..n {
                if !alive[j] {
                    continue;
                }
                if self.get(i, j) {
                    in_deg[j] -= 1;
                    if in_deg[j] == 0 {
                        queue.push_back(j);
                    }
                }
                if self.get(j, i) {
                    out_deg[j] -= 1;
                    if out_deg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        (0..n).filter(|&i| alive[i]).collect()
    }

    /// Pruning with an explicit deletion order: `choose` receives the
    /// currently deletable indices and returns the position of the one to
    /// delete next.
    pub fn prune_survivors_by(&self, mut choose: impl FnMut(&[usize]) -> usize) -> Vec<usize> {
        let mut alive: Vec<usize> = (0..self.n).collect();
        loop {
            let deletable: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&i| {
                    !alive.iter().any(|&j| self.get(i, j)) || !alive.iter().any(|&j| self.get(j, i))
                })
                .collect();
            if deletable.is_empty() {
                return alive;
            }
            let victim = deletable[choose(&deletable)];
            alive.retain(|&i| i != victim);
        }
    }

    /// Shortest directed cycle following entries `(i, j) = 1` from `i` to
    /// `j`. Ties go to the cycle through the smallest index, which is
    /// returned first; neighbours are explored in increasing order.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for start in 0..self.n {
            let mut parent = vec![usize::MAX; self.n];
            let mut seen = vec![false; self.n];
            let mut queue = VecDeque::from([start]);
            let mut closing = None;
            'bfs: while let Some(u) = queue.pop_front() {
                for v in 0..self.n {
                    if !self.get(u, v) {
                        continue;
                    }
                    if v == start {
                        closing = Some(u);
                        break 'bfs;
                    }
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            let Some(mut u) = closing else { continue };
            let mut cycle = vec![u];
            while u != start {
                u = parent[u];
                cycle.push(u);
            }
            cycle.reverse();
            if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                best = Some(cycle);
            }
        }
        best
    }
}
