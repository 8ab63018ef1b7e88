use super::{footprint, Layout};
use crate::geometry::{Point, Rect};
use crate::problem::Problem;

#[inline]
fn boxes_meet(a: &Rect, b: &Rect) -> bool {
    a.x_min <= b.x_max && b.x_min <= a.x_max && a.y_min <= b.y_max && b.y_min <= a.y_max
}

/// Cached pairwise penalties and weights for one layout.
///
/// `F` is kept as an exact integer. `F̃` is recomputed on demand from the
/// cache, so it never drifts from a full evaluation.
#[derive(Clone, Debug)]
pub struct PenaltyState {
    n: usize,
    alpha: Vec<f64>,
    pair: Vec<u32>,
    // sorted indices of the pieces each piece currently overlaps
    overlaps: Vec<Vec<usize>>,
    total: u64,
}

#[inline]
fn pair_value(problem: &Problem, layout: &Layout, i: usize, j: usize) -> u32 {
    let ci = problem.class_of(i, layout.orientations[i]);
    let cj = problem.class_of(j, layout.orientations[j]);
    problem
        .nfp(ci, cj)
        .pair_penalty(layout.positions[j] - layout.positions[i])
}

impl PenaltyState {
    /// Evaluates every pair of `layout` with unit weights.
    pub fn new(problem: &Problem, layout: &Layout) -> PenaltyState {
        let n = layout.len();
        let mut state = PenaltyState {
            n,
            alpha: vec![1.0; n * n],
            pair: vec![0; n * n],
            overlaps: vec![Vec::new(); n],
            total: 0,
        };
        let boxes: Vec<Rect> = (0..n)
            .map(|i| {
                footprint(
                    problem,
                    problem.class_of(i, layout.orientations[i]),
                    layout.positions[i],
                )
            })
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                if !boxes_meet(&boxes[i], &boxes[j]) {
                    continue;
                }
                let f = pair_value(problem, layout, i, j);
                if f > 0 {
                    state.set_pair(i, j, f);
                }
            }
        }
        state
    }

    pub fn piece_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        self.alpha[i * self.n + j]
    }

    /// Sets `α_ij = α_ji = value`.
    pub fn set_alpha(&mut self, i: usize, j: usize, value: f64) {
        self.alpha[i * self.n + j] = value;
        self.alpha[j * self.n + i] = value;
    }

    pub fn reset_weights(&mut self) {
        self.alpha.fill(1.0);
    }

    /// Cached `f_ij`.
    #[inline]
    pub fn pair(&self, i: usize, j: usize) -> u32 {
        self.pair[i * self.n + j]
    }

    /// `F`, the unweighted total.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `F̃`, the weighted total.
    pub fn weighted_total(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for &j in self.overlaps[i].iter().filter(|&&j| j > i) {
                sum += self.alpha(i, j) * self.pair(i, j) as f64;
            }
        }
        sum
    }

    /// Pieces currently overlapping `i`, ascending.
    pub fn overlaps(&self, i: usize) -> &[usize] {
        &self.overlaps[i]
    }

    /// Cached `(F̃_k, F_k)`; summed in ascending `j` like [`piece_penalty`].
    pub fn piece_total(&self, k: usize) -> (f64, u64) {
        let mut w = 0.0;
        let mut u = 0;
        for &j in &self.overlaps[k] {
            let f = self.pair(k, j);
            w += self.alpha(k, j) * f as f64;
            u += f as u64;
        }
        (w, u)
    }

    fn set_pair(&mut self, i: usize, j: usize, f: u32) {
        let old = self.pair(i, j);
        if old == f {
            return;
        }
        self.total = self.total - old as u64 + f as u64;
        self.pair[i * self.n + j] = f;
        self.pair[j * self.n + i] = f;
        match (old, f) {
            (0, _) => {
                insert_sorted(&mut self.overlaps[i], j);
                insert_sorted(&mut self.overlaps[j], i);
            }
            (_, 0) => {
                remove_sorted(&mut self.overlaps[i], j);
                remove_sorted(&mut self.overlaps[j], i);
            }
            _ => {}
        }
    }

    /// Refreshes every pair involving `k` after `k` moved in `layout`.
    pub fn update_piece(&mut self, problem: &Problem, layout: &Layout, k: usize) {
        let ck = problem.class_of(k, layout.orientations[k]);
        let bk = footprint(problem, ck, layout.positions[k]);
        for j in 0..self.n {
            if j == k {
                continue;
            }
            let cj = problem.class_of(j, layout.orientations[j]);
            let f = if boxes_meet(&bk, &footprint(problem, cj, layout.positions[j])) {
                pair_value(problem, layout, j, k)
            } else {
                0
            };
            self.set_pair(j, k, f);
        }
    }

    /// `α_ij += f_ij / max f`. Does nothing when no pair overlaps.
    pub fn update_weights(&mut self) {
        let max = self.pair.iter().copied().max().unwrap_or(0);
        if max == 0 {
            return;
        }
        for i in 0..self.n {
            for idx in 0..self.overlaps[i].len() {
                let j = self.overlaps[i][idx];
                if j > i {
                    let a = self.alpha(i, j) + self.pair(i, j) as f64 / max as f64;
                    self.set_alpha(i, j, a);
                }
            }
        }
    }

    /// Whether the cache equals a full re-evaluation of `layout`.
    pub fn matches(&self, problem: &Problem, layout: &Layout) -> bool {
        let fresh = PenaltyState::new(problem, layout);
        fresh.pair == self.pair && fresh.total == self.total && fresh.overlaps == self.overlaps
    }
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn remove_sorted(v: &mut Vec<usize>, x: usize) {
    if let Ok(pos) = v.binary_search(&x) {
        v.remove(pos);
    }
}

/// `(F̃_k, F_k)` for piece `k` placed at `v` with orientation index `o`,
/// every other piece as in `layout`.
pub fn piece_penalty(
    problem: &Problem,
    layout: &Layout,
    state: &PenaltyState,
    k: usize,
    v: Point,
    o: usize,
) -> (f64, u64) {
    let ck = problem.class_of(k, o);
    let bk = footprint(problem, ck, v);
    let mut w = 0.0;
    let mut u = 0;
    for j in 0..layout.len() {
        if j == k {
            continue;
        }
        let cj = problem.class_of(j, layout.orientations[j]);
        let vj = layout.positions[j];
        if !boxes_meet(&bk, &footprint(problem, cj, vj)) {
            continue;
        }
        let f = problem.nfp(cj, ck).pair_penalty(v - vj);
        if f > 0 {
            w += state.alpha(k, j) * f as f64;
            u += f as u64;
        }
    }
    (w, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PixelShape;
    use crate::problem::RasterShape;

    fn blocks(count: u32, side: i32) -> Problem {
        Problem::from_rasters(
            "t",
            20,
            vec![RasterShape {
                id: "b".into(),
                count,
                variants: vec![(0, PixelShape::rectangle(side, side))],
            }],
        )
        .unwrap()
    }

    fn layout(points: &[(i32, i32)]) -> Layout {
        Layout {
            positions: points.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            orientations: vec![0; points.len()],
            length: 20,
        }
    }

    #[test]
    fn lone_piece_has_no_penalty() {
        let p = blocks(2, 3);
        let l = layout(&[(1, 1), (10, 10)]);
        let s = PenaltyState::new(&p, &l);
        assert_eq!(piece_penalty(&p, &l, &s, 0, Point::new(1, 1), 0), (0.0, 0));
        assert_eq!(s.total(), 0);
    }

    #[test]
    fn coincident_blocks_and_weights() {
        let p = blocks(2, 3);
        let l = layout(&[(5, 5), (5, 5)]);
        let mut s = PenaltyState::new(&p, &l);
        assert_eq!(piece_penalty(&p, &l, &s, 0, Point::new(5, 5), 0), (3.0, 3));
        s.set_alpha(0, 1, 2.5);
        assert_eq!(piece_penalty(&p, &l, &s, 0, Point::new(5, 5), 0), (7.5, 3));
        assert_eq!(s.piece_total(1), (7.5, 3));
        assert_eq!(s.weighted_total(), 7.5);
    }

    #[test]
    fn weight_update_formula() {
        let p = blocks(3, 9);
        // penalties 4 (0,1) and 2 (1,2), none for (0,2)
        let l = layout(&[(4, 4), (9, 4), (16, 4)]);
        let mut s = PenaltyState::new(&p, &l);
        assert_eq!((s.pair(0, 1), s.pair(1, 2), s.pair(0, 2)), (4, 2, 0));
        s.update_weights();
        assert_eq!((s.alpha(0, 1), s.alpha(1, 2), s.alpha(0, 2)), (2.0, 1.5, 1.0));
        assert_eq!(s.alpha(1, 0), 2.0);
    }

    #[test]
    fn incremental_update_matches_rebuild() {
        let p = blocks(3, 3);
        let mut l = layout(&[(5, 5), (6, 5), (12, 12)]);
        let mut s = PenaltyState::new(&p, &l);
        assert_eq!(s.overlaps(0), &[1]);
        l.positions[2] = Point::new(5, 6);
        s.update_piece(&p, &l, 2);
        assert!(s.matches(&p, &l));
        assert_eq!(s.overlaps(0), &[1, 2]);
        l.positions[0] = Point::new(15, 15);
        s.update_piece(&p, &l, 0);
        assert!(s.matches(&p, &l));
        assert!(s.overlaps(0).is_empty());
    }
}
