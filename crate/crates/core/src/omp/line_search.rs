use super::{footprint, Layout, NoValidPosition, PenaltyState, SearchContext};
use crate::geometry::{Axis, Point, Rect};
use crate::nfp::Nfp;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSearchResult {
    /// Offset along the search axis.
    pub t: i32,
    /// `F̃_k` at the new position.
    pub weighted: f64,
    /// `F_k` at the new position.
    pub unweighted: u64,
}

struct Partner<'a> {
    j: usize,
    nfp: &'a Nfp,
    // relative offset v_k - v_j at t = 0
    u0: Point,
}

struct Sweep<'a> {
    partners: Vec<Partner<'a>>,
    // t-intervals of overlap, clipped to N
    busy: Vec<(i32, i32)>,
    n_lo: i32,
    n_hi: i32,
}

fn cross_range(r: &Rect, axis: Axis) -> (i32, i32) {
    match axis {
        Axis::Horizontal => (r.y_min, r.y_max),
        Axis::Vertical => (r.x_min, r.x_max),
    }
}

fn sweep<'a>(
    ctx: &SearchContext<'a>,
    layout: &Layout,
    k: usize,
    o: usize,
    v: Point,
    axis: Axis,
) -> Result<Sweep<'a>, NoValidPosition> {
    let problem = ctx.problem;
    let ck = problem.class_of(k, o);
    let bx = ctx.reference_box(ck).ok_or(NoValidPosition {
        piece: k,
        orientation: o,
    })?;
    let (lo, hi) = match axis {
        Axis::Horizontal => (bx.x_min, bx.x_max),
        Axis::Vertical => (bx.y_min, bx.y_max),
    };
    let (n_lo, n_hi) = (lo - v.along(axis), hi - v.along(axis));
    debug_assert!(n_lo <= 0 && 0 <= n_hi, "search must start inside the container");

    let (k_lo, k_hi) = cross_range(&footprint(problem, ck, v), axis);
    let mut partners = Vec::new();
    let mut busy = Vec::new();
    for j in 0..layout.len() {
        if j == k {
            continue;
        }
        let cj = problem.class_of(j, layout.orientations[j]);
        let vj = layout.positions[j];
        // projection filter: the swept band is fixed during the move
        let (j_lo, j_hi) = cross_range(&footprint(problem, cj, vj), axis);
        if j_hi < k_lo || k_hi < j_lo {
            continue;
        }
        let nfp = problem.nfp(cj, ck);
        let u0 = v - vj;
        let base = u0.along(axis);
        let before = busy.len();
        for s in nfp.line_strips(u0.across(axis), axis) {
            let start = (s.start - base).max(n_lo);
            let end = (s.end - base).min(n_hi);
            if start <= end {
                busy.push((start, end));
            }
        }
        if busy.len() > before {
            partners.push(Partner { j, nfp, u0 });
        }
    }
    Ok(Sweep {
        partners,
        busy,
        n_lo,
        n_hi,
    })
}

impl Sweep<'_> {
    /// Smallest `t` in `N` free of overlap.
    fn first_free(&mut self) -> Option<i32> {
        self.busy.sort_unstable();
        let mut cur = self.n_lo;
        for &(s, e) in &self.busy {
            if s > cur {
                break;
            }
            cur = cur.max(e + 1);
        }
        (cur <= self.n_hi).then_some(cur)
    }

    fn evaluate(&self, state: &PenaltyState, k: usize, t: i32, axis: Axis) -> (f64, u64) {
        let mut w = 0.0;
        let mut u = 0;
        for p in &self.partners {
            let f = p.nfp.pair_penalty(p.u0.shifted(axis, t));
            if f > 0 {
                w += state.alpha(k, p.j) * f as f64;
                u += f as u64;
            }
        }
        (w, u)
    }
}

/// Best offset `t` for moving piece `k` (orientation `o`, currently at `v`)
/// along `axis`.
///
/// With free positions available the smallest free `t` wins. Otherwise the
/// weighted penalty is minimized over the candidate offsets (or all of `N`
/// without corner reduction) plus `t = 0`; ties prefer small `|t|`, then
/// small `t`.
pub fn line_search(
    ctx: &SearchContext,
    layout: &Layout,
    state: &PenaltyState,
    k: usize,
    o: usize,
    v: Point,
    axis: Axis,
) -> Result<LineSearchResult, NoValidPosition> {
    let mut sw = sweep(ctx, layout, k, o, v, axis)?;
    if let Some(t) = sw.first_free() {
        return Ok(LineSearchResult {
            t,
            weighted: 0.0,
            unweighted: 0,
        });
    }
    let mut candidates: Vec<i32> = if ctx.corner_reduction {
        let mut c = Vec::new();
        for p in &sw.partners {
            let base = p.u0.along(axis);
            let from = c.len();
            p.nfp
                .push_candidates(p.u0.across(axis), axis, sw.n_lo + base, sw.n_hi + base, &mut c);
            for x in &mut c[from..] {
                *x -= base;
            }
        }
        c.push(0);
        c.sort_unstable();
        c.dedup();
        c
    } else {
        (sw.n_lo..=sw.n_hi).collect()
    };
    if candidates.is_empty() {
        candidates.push(0);
    }

    let mut best: Option<LineSearchResult> = None;
    for &t in &candidates {
        let (w, u) = sw.evaluate(state, k, t, axis);
        let better = match best {
            None => true,
            Some(b) => w < b.weighted || (w == b.weighted && (t.abs(), t) < (b.t.abs(), b.t)),
        };
        if better {
            best = Some(LineSearchResult {
                t,
                weighted: w,
                unweighted: u,
            });
        }
    }
    Ok(best.expect("at least one candidate"))
}

fn clamp_into(v: Point, r: &Rect) -> Point {
    Point::new(v.x.clamp(r.x_min, r.x_max), v.y.clamp(r.y_min, r.y_max))
}

/// Alternating horizontal/vertical line searches for piece `k` at
/// orientation `o`, starting from its current position (clamped into the
/// container). Moves only on strict improvement of `F̃_k`.
///
/// Returns the final position with its `(F̃_k, F_k)`.
pub fn neighbor_search(
    ctx: &SearchContext,
    layout: &Layout,
    state: &PenaltyState,
    k: usize,
    o: usize,
) -> Result<(Point, f64, u64), NoValidPosition> {
    let problem = ctx.problem;
    let bx = ctx.reference_box(problem.class_of(k, o)).ok_or(NoValidPosition {
        piece: k,
        orientation: o,
    })?;
    let mut v = clamp_into(layout.positions[k], &bx);
    let (mut w, mut u) = super::piece_penalty(problem, layout, state, k, v, o);

    let r = line_search(ctx, layout, state, k, o, v, Axis::Horizontal)?;
    if r.weighted < w {
        v = v.shifted(Axis::Horizontal, r.t);
        (w, u) = (r.weighted, r.unweighted);
    }
    let mut axis = Axis::Vertical;
    loop {
        let r = line_search(ctx, layout, state, k, o, v, axis)?;
        if r.weighted < w {
            v = v.shifted(axis, r.t);
            (w, u) = (r.weighted, r.unweighted);
        } else {
            break;
        }
        axis = axis.other();
    }
    Ok((v, w, u))
}

/// Slides piece `k` left and down alternately, each time to the smallest
/// overlap-free offset, while that offset is negative.
pub fn compact(ctx: &SearchContext, layout: &mut Layout, k: usize) -> Result<(), NoValidPosition> {
    let o = layout.orientations[k];
    let slide = |layout: &mut Layout, axis: Axis| -> Result<bool, NoValidPosition> {
        let v = layout.positions[k];
        match sweep(ctx, layout, k, o, v, axis)?.first_free() {
            Some(t) if t < 0 => {
                layout.positions[k] = v.shifted(axis, t);
                Ok(true)
            }
            _ => Ok(false),
        }
    };
    slide(layout, Axis::Horizontal)?;
    let mut axis = Axis::Vertical;
    while slide(layout, axis)? {
        axis = axis.other();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PixelShape;
    use crate::problem::{Problem, RasterShape};

    fn problem(width: i32, shapes: Vec<(u32, PixelShape)>) -> Problem {
        let shapes = shapes
            .into_iter()
            .enumerate()
            .map(|(i, (count, px))| RasterShape {
                id: format!("s{i}"),
                count,
                variants: vec![(0, px)],
            })
            .collect();
        Problem::from_rasters("t", width, shapes).unwrap()
    }

    fn layout(points: &[(i32, i32)], length: i32) -> Layout {
        Layout {
            positions: points.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            orientations: vec![0; points.len()],
            length,
        }
    }

    #[test]
    fn blocker_on_the_row() {
        let p = problem(1, vec![(2, PixelShape::rectangle(1, 1))]);
        // blocker at x = 0, piece at x = 5, container x in [0, 9]
        let l = layout(&[(0, 0), (5, 0)], 10);
        let s = PenaltyState::new(&p, &l);
        let ctx = SearchContext::new(&p, 10, true);
        let r = line_search(&ctx, &l, &s, 1, 0, Point::new(5, 0), Axis::Horizontal).unwrap();
        assert_eq!(
            r,
            LineSearchResult {
                t: -4,
                weighted: 0.0,
                unweighted: 0
            }
        );
    }

    #[test]
    fn empty_band_goes_flush_left() {
        let p = problem(
            10,
            vec![(1, PixelShape::rectangle(3, 2)), (1, PixelShape::rectangle(1, 1))],
        );
        let l = layout(&[(6, 1), (0, 8)], 20);
        let s = PenaltyState::new(&p, &l);
        let ctx = SearchContext::new(&p, 20, true);
        let r = line_search(&ctx, &l, &s, 0, 0, Point::new(6, 1), Axis::Horizontal).unwrap();
        assert_eq!(r.t, -(6 - 1));
    }

    #[test]
    fn container_too_small() {
        let p = problem(3, vec![(1, PixelShape::rectangle(5, 1))]);
        let l = layout(&[(2, 0)], 4);
        let s = PenaltyState::new(&p, &l);
        let ctx = SearchContext::new(&p, 4, true);
        let err = line_search(&ctx, &l, &s, 0, 0, Point::new(2, 0), Axis::Horizontal).unwrap_err();
        assert_eq!(
            err,
            NoValidPosition {
                piece: 0,
                orientation: 0
            }
        );
        assert!(neighbor_search(&ctx, &l, &s, 0, 0).is_err());
    }

    #[test]
    fn full_row_minimizes_over_candidates() {
        // the container row is 6 wide and fully covered by two 3-cell blockers
        let p = problem(
            1,
            vec![(2, PixelShape::rectangle(3, 1)), (1, PixelShape::rectangle(2, 1))],
        );
        let l = layout(&[(1, 0), (4, 0), (2, 0)], 6);
        let s = PenaltyState::new(&p, &l);
        for reduce in [true, false] {
            let ctx = SearchContext::new(&p, 6, reduce);
            let r = line_search(&ctx, &l, &s, 2, 0, Point::new(2, 0), Axis::Horizontal).unwrap();
            // exhaustive scan
            let best = (-1..=3)
                .map(|t| super::super::piece_penalty(&p, &l, &s, 2, Point::new(2 + t, 0), 0).0)
                .fold(f64::INFINITY, f64::min);
            assert_eq!(r.weighted, best);
            let stay = super::super::piece_penalty(&p, &l, &s, 2, Point::new(2, 0), 0).0;
            assert!(r.weighted <= stay);
        }
    }

    #[test]
    fn neighbor_search_moves_left_then_down() {
        // W = L = 4. A 1x2 stub at x 0, y 2..3 and a 2x2 block at x 2..3,
        // y 2..3 fill the upper band; the moving 2x2 piece starts on the block.
        let p = problem(
            4,
            vec![(1, PixelShape::rectangle(1, 2)), (2, PixelShape::rectangle(2, 2))],
        );
        let l = layout(&[(0, 3), (3, 3), (3, 3)], 4);
        let s = PenaltyState::new(&p, &l);
        let ctx = SearchContext::new(&p, 4, true);

        // horizontal: both x = 1 and x = 2 cost 1, the shorter move wins
        let r = line_search(&ctx, &l, &s, 2, 0, Point::new(3, 3), Axis::Horizontal).unwrap();
        assert_eq!((r.t, r.unweighted), (-1, 1));
        // vertical from there reaches the free lower band
        let r = line_search(&ctx, &l, &s, 2, 0, Point::new(2, 3), Axis::Vertical).unwrap();
        assert_eq!((r.t, r.unweighted), (-2, 0));

        let (v, w, u) = neighbor_search(&ctx, &l, &s, 2, 0).unwrap();
        assert_eq!((v, w, u), (Point::new(2, 1), 0.0, 0));
        // exhaustive minimum over all positions
        let best = (1..=3)
            .flat_map(|x| (1..=3).map(move |y| Point::new(x, y)))
            .map(|q| super::super::piece_penalty(&p, &l, &s, 2, q, 0).0)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(best, w);
    }

    #[test]
    fn settled_piece_stays_put() {
        let p = problem(4, vec![(2, PixelShape::rectangle(2, 2))]);
        let l = layout(&[(1, 1), (3, 1)], 4);
        let s = PenaltyState::new(&p, &l);
        let ctx = SearchContext::new(&p, 4, true);
        let (v, w, _) = neighbor_search(&ctx, &l, &s, 1, 0).unwrap();
        assert_eq!((v, w), (Point::new(3, 1), 0.0));
    }

    #[test]
    fn compaction() {
        let p = problem(8, vec![(1, PixelShape::rectangle(2, 2))]);
        let mut l = layout(&[(6, 5)], 10);
        let ctx = SearchContext::new(&p, 10, true);
        compact(&ctx, &mut l, 0).unwrap();
        assert_eq!(l.positions[0], Point::new(1, 1));
        compact(&ctx, &mut l, 0).unwrap();
        assert_eq!(l.positions[0], Point::new(1, 1));

        // full-height wall on the left: only the vertical slide happens
        let p = problem(
            8,
            vec![(1, PixelShape::rectangle(2, 8)), (1, PixelShape::rectangle(2, 2))],
        );
        let mut l = layout(&[(1, 4), (3, 6)], 10);
        let ctx = SearchContext::new(&p, 10, true);
        compact(&ctx, &mut l, 1).unwrap();
        assert_eq!(l.positions[1], Point::new(3, 1));
    }
}
