//! FAST-style corner detection on a binary NFP.
//!
//! A contour cell is a convex corner when the 16-cell circle of radius 3
//! around it has a contiguous arc of at least 9 cells outside the NFP. Reflex
//! corners are found the same way from the outside: an empty cell touching
//! the NFP whose circle has an arc of at least 9 inside cells marks the
//! contour cells next to it. Each pass keeps only local maxima of its score.

use crate::geometry::{DoubleScanline, Point};

const CIRCLE: [(i32, i32); 16] = [
    (0, 3),
    (1, 3),
    (2, 2),
    (3, 1),
    (3, 0),
    (3, -1),
    (2, -2),
    (1, -3),
    (0, -3),
    (-1, -3),
    (-2, -2),
    (-3, -1),
    (-3, 0),
    (-3, 1),
    (-2, 2),
    (-1, 3),
];

const MIN_ARC: usize = 9;
const PAD: i32 = 3;
// below this extent in both directions the circle test is meaningless
const MIN_EXTENT: i32 = 7;
const SUPPRESSION_RADIUS: i32 = 2;

const NEIGHBORS4: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

struct Bitmap {
    x0: i32,
    y0: i32,
    w: i32,
    h: i32,
    bits: Vec<bool>,
}

impl Bitmap {
    fn new(ds: &DoubleScanline) -> Bitmap {
        let bb = ds.bbox().expect("non-empty");
        let (x0, y0) = (bb.x_min - PAD, bb.y_min - PAD);
        let (w, h) = (bb.width() + 2 * PAD, bb.height() + 2 * PAD);
        let mut bits = vec![false; (w * h) as usize];
        for (y, strips) in ds.rows().lines() {
            for s in strips {
                for x in s.start..=s.end {
                    bits[((y - y0) * w + (x - x0)) as usize] = true;
                }
            }
        }
        Bitmap { x0, y0, w, h, bits }
    }

    #[inline]
    fn get(&self, x: i32, y: i32) -> bool {
        let (i, j) = (x - self.x0, y - self.y0);
        i >= 0 && j >= 0 && i < self.w && j < self.h && self.bits[(j * self.w + i) as usize]
    }

    fn touches(&self, x: i32, y: i32, value: bool) -> bool {
        NEIGHBORS4.iter().any(|&(dx, dy)| self.get(x + dx, y + dy) == value)
    }

    fn ring_count(&self, x: i32, y: i32, value: bool) -> usize {
        let mut n = 0;
        for dy in -1..=1 {
            for dx in -1..=1 {
                if (dx, dy) != (0, 0) && self.get(x + dx, y + dy) == value {
                    n += 1;
                }
            }
        }
        n
    }

    fn longest_arc(&self, x: i32, y: i32, value: bool) -> usize {
        let hits: Vec<bool> = CIRCLE
            .iter()
            .map(|&(dx, dy)| self.get(x + dx, y + dy) == value)
            .collect();
        longest_cyclic_run(&hits)
    }
}

fn longest_cyclic_run(hits: &[bool]) -> usize {
    let n = hits.len();
    if hits.iter().all(|&h| h) {
        return n;
    }
    let mut best = 0;
    let mut run = 0;
    for i in 0..2 * n {
        if hits[i % n] {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best.min(n)
}

type Score = (usize, usize);

fn suppress(mut candidates: Vec<(Point, Score)>) -> Vec<Point> {
    candidates.sort_unstable_by_key(|(p, _)| (p.y, p.x));
    let lookup = |p: Point| {
        candidates
            .binary_search_by_key(&(p.y, p.x), |(q, _)| (q.y, q.x))
            .ok()
            .map(|i| candidates[i].1)
    };
    let r = SUPPRESSION_RADIUS;
    candidates
        .iter()
        .filter(|&&(p, score)| {
            (-r..=r).all(|dy| (-r..=r).all(|dx| lookup(Point::new(p.x + dx, p.y + dy)).is_none_or(|s| s <= score)))
        })
        .map(|&(p, _)| p)
        .collect()
}

/// Corner cells of the cell set `ds`, sorted by `(y, x)`.
pub fn detect_corners(ds: &DoubleScanline) -> Vec<Point> {
    let Some(bb) = ds.bbox() else {
        return Vec::new();
    };
    let map = Bitmap::new(ds);
    let contour: Vec<Point> = ds
        .rows()
        .cells()
        .map(|(y, x)| Point::new(x, y))
        .filter(|p| map.touches(p.x, p.y, false))
        .collect();

    let mut corners = if bb.width() < MIN_EXTENT && bb.height() < MIN_EXTENT {
        contour
    } else {
        let convex: Vec<(Point, Score)> = contour
            .iter()
            .filter_map(|&p| {
                let arc = map.longest_arc(p.x, p.y, false);
                (arc >= MIN_ARC).then(|| (p, (arc, map.ring_count(p.x, p.y, false))))
            })
            .collect();

        let mut reflex = Vec::new();
        for y in bb.y_min - 1..=bb.y_max + 1 {
            for x in bb.x_min - 1..=bb.x_max + 1 {
                if map.get(x, y) || !map.touches(x, y, true) {
                    continue;
                }
                let arc = map.longest_arc(x, y, true);
                if arc >= MIN_ARC {
                    reflex.push((Point::new(x, y), (arc, map.ring_count(x, y, true))));
                }
            }
        }

        let mut out = suppress(convex);
        for p in suppress(reflex) {
            for &(dx, dy) in &NEIGHBORS4 {
                if map.get(p.x + dx, p.y + dy) {
                    out.push(Point::new(p.x + dx, p.y + dy));
                }
            }
        }
        out
    };
    corners.sort_unstable_by_key(|p| (p.y, p.x));
    corners.dedup();
    corners
}
