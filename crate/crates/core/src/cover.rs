//! Exact cover of a finite cell set by fixed-width blocks, Algorithm X style.
//!
//! A block is live while none of its cells is covered; an uncovered cell
//! with no live block ends the branch. Two branching rules share the code:
//! `Ordered` walks cells in index order and tries blocks in a caller-given
//! rank (so the first cover found is the one a plain ordered backtracking
//! would find), `MostConstrained` picks the cell with the fewest live blocks.

use crate::search::Budget;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Branching {
    Ordered,
    MostConstrained,
}

pub(crate) enum Walk {
    Complete,
    Stopped,
    OutOfBudget(u64),
}

enum Flow {
    Continue,
    Stop,
    OutOfBudget,
}

pub(crate) struct ExactCover {
    branching: Branching,
    width: usize,
    ids: Vec<u64>,
    /// `cells[b * width..][..width]` are the cells of block `b`.
    cells: Vec<u32>,
    blocks_at: Vec<Vec<u32>>,
    alive: Vec<bool>,
    live_count: Vec<u32>,
    covered: Vec<bool>,
    uncovered: usize,
    killed: Vec<u32>,
    chosen: Vec<u64>,
}

impl ExactCover {
    /// `blocks` yields `(id, cells)`; blocks with repeated cells or touching
    /// `precovered` are dropped. In `Ordered` mode, the blocks through a cell
    /// `x` are tried by ascending `rank(x, id, position of x in the block)`.
    pub(crate) fn new<K: Ord>(
        cell_count: usize,
        precovered: &[u32],
        blocks: impl IntoIterator<Item = (u64, Vec<u32>)>,
        branching: Branching,
        rank: impl Fn(u32, u64, usize) -> K,
    ) -> Self {
        let mut covered = vec![false; cell_count];
        for &x in precovered {
            covered[x as usize] = true;
        }
        let mut ids = Vec::new();
        let mut cells = Vec::new();
        let mut width = 0;
        let mut seen = vec![false; cell_count];
        for (id, block) in blocks {
            width = block.len();
            let mut ok = true;
            for &x in &block {
                if covered[x as usize] || std::mem::replace(&mut seen[x as usize], true) {
                    ok = false;
                }
            }
            for &x in &block {
                seen[x as usize] = false;
            }
            if ok {
                ids.push(id);
                cells.extend_from_slice(&block);
            }
        }
        let mut blocks_at: Vec<Vec<u32>> = vec![Vec::new(); cell_count];
        for b in 0..ids.len() {
            for &x in &cells[b * width..(b + 1) * width] {
                blocks_at[x as usize].push(b as u32);
            }
        }
        if branching == Branching::Ordered {
            for (x, list) in blocks_at.iter_mut().enumerate() {
                list.sort_by_cached_key(|&b| {
                    let b = b as usize;
                    let pos = cells[b * width..(b + 1) * width]
                        .iter()
                        .position(|&y| y as usize == x)
                        .expect("block lists its own cells");
                    rank(x as u32, ids[b], pos)
                });
            }
        }
        let live_count = blocks_at.iter().map(|l| l.len() as u32).collect();
        let uncovered = covered.iter().filter(|&&c| !c).count();
        ExactCover {
            branching,
            width,
            alive: vec![true; ids.len()],
            ids,
            cells,
            blocks_at,
            live_count,
            covered,
            uncovered,
            killed: Vec::new(),
            chosen: Vec::new(),
        }
    }

    /// Runs the search with block `root` forced in first (if given). `visit`
    /// sees the ids of each complete cover and returns whether to continue.
    pub(crate) fn run(
        &mut self,
        root: Option<u64>,
        budget: &mut Budget,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> Walk {
        if let Some(root) = root {
            let Some(b) = self.ids.iter().position(|&id| id == root) else {
                return Walk::Complete;
            };
            self.choose(b as u32);
        }
        match self.descend(budget, visit) {
            Flow::Continue => Walk::Complete,
            Flow::Stop => Walk::Stopped,
            Flow::OutOfBudget => Walk::OutOfBudget(budget.used()),
        }
    }

    fn descend(&mut self, budget: &mut Budget, visit: &mut dyn FnMut(&[u64]) -> bool) -> Flow {
        if self.uncovered == 0 {
            return if visit(&self.chosen) {
                Flow::Continue
            } else {
                Flow::Stop
            };
        }
        let mut best: Option<(u32, usize)> = None;
        for x in 0..self.covered.len() {
            if self.covered[x] {
                continue;
            }
            let count = self.live_count[x];
            if count == 0 {
                return Flow::Continue;
            }
            let better = match (self.branching, best) {
                (_, None) => true,
                (Branching::Ordered, Some(_)) => false,
                (Branching::MostConstrained, Some((c, _))) => count < c,
            };
            if better {
                best = Some((count, x));
            }
        }
        let cell = best.expect("some cell is uncovered").1;
        let options: Vec<u32> = self.blocks_at[cell]
            .iter()
            .copied()
            .filter(|&b| self.alive[b as usize])
            .collect();
        for b in options {
            if !budget.tick() {
                return Flow::OutOfBudget;
            }
            let mark = self.choose(b);
            match self.descend(budget, visit) {
                Flow::Continue => {}
                done => return done,
            }
            self.unchoose(b, mark);
        }
        Flow::Continue
    }

    fn block(&self, b: u32) -> &[u32] {
        let b = b as usize;
        &self.cells[b * self.width..(b + 1) * self.width]
    }

    /// Takes block `b`, killing every live block that meets it.
    fn choose(&mut self, b: u32) -> usize {
        let mark = self.killed.len();
        for i in 0..self.width {
            let x = self.block(b)[i] as usize;
            self.covered[x] = true;
            self.uncovered -= 1;
            for j in 0..self.blocks_at[x].len() {
                let t = self.blocks_at[x][j];
                if self.alive[t as usize] {
                    self.alive[t as usize] = false;
                    for k in 0..self.width {
                        let y = self.block(t)[k] as usize;
                        self.live_count[y] -= 1;
                    }
                    self.killed.push(t);
                }
            }
        }
        self.chosen.push(self.ids[b as usize]);
        mark
    }

    fn unchoose(&mut self, b: u32, mark: usize) {
        self.chosen.pop();
        while self.killed.len() > mark {
            let t = self.killed.pop().expect("above mark");
            self.alive[t as usize] = true;
            for k in 0..self.width {
                let y = self.block(t)[k] as usize;
                self.live_count[y] += 1;
            }
        }
        for i in 0..self.width {
            let x = self.block(b)[i] as usize;
            self.covered[x] = false;
            self.uncovered += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks() -> Vec<(u64, Vec<u32>)> {
        // cells 0..4; {0,1}, {2,3}, {1,2}, {0,3}
        vec![(10, vec![0, 1]), (11, vec![2, 3]), (12, vec![1, 2]), (13, vec![0, 3])]
    }

    #[test]
    fn finds_every_cover_in_both_modes() {
        for mode in [Branching::Ordered, Branching::MostConstrained] {
            let mut cover = ExactCover::new(4, &[], blocks(), mode, |_, id, _| id);
            let mut found = Vec::new();
            let walk = cover.run(None, &mut Budget::new(1000), &mut |c| {
                let mut c = c.to_vec();
                c.sort_unstable();
                found.push(c);
                true
            });
            assert!(matches!(walk, Walk::Complete));
            found.sort();
            assert_eq!(found, vec![vec![10, 11], vec![12, 13]]);
        }
    }

    #[test]
    fn root_and_precovered() {
        let mut cover = ExactCover::new(4, &[], blocks(), Branching::Ordered, |_, id, _| id);
        let mut first = None;
        cover.run(Some(12), &mut Budget::new(1000), &mut |c| {
            first = Some(c.to_vec());
            false
        });
        assert_eq!(first, Some(vec![12, 13]));
        // with cell 0 precovered nothing covers cell 1 without touching 0 or 2 twice
        let mut cover = ExactCover::new(4, &[0], blocks(), Branching::MostConstrained, |_, id, _| id);
        let walk = cover.run(None, &mut Budget::new(1000), &mut |_| false);
        assert!(matches!(walk, Walk::Complete));
    }
}
