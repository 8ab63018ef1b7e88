//! Brute-force reference checks that work on plain cell sets, independent of
//! the scanline machinery.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::geometry::{Axis, PixelShape, Point};
use crate::nfp::{build_nfp, Nfp};
use crate::omp::{Layout, PenaltyState};
use crate::problem::{Problem, RasterShape};

/// Cells of `a` at the origin meet cells of `b` shifted by `u`.
pub fn overlaps_at(a: &HashSet<Point>, b: &[Point], u: Point) -> bool {
    b.iter().any(|&q| a.contains(&(q + u)))
}

/// Every relative offset at which the two shapes overlap.
pub fn brute_nfp(a: &PixelShape, b: &PixelShape) -> HashSet<Point> {
    let mut out = HashSet::new();
    for p in a.offsets() {
        for q in b.offsets() {
            out.insert(p - q);
        }
    }
    out
}

/// Smallest `|s|` that separates `b + u + s d` from `a`; 0 when already apart.
pub fn brute_depth(a: &PixelShape, b: &PixelShape, u: Point, axis: Axis) -> u32 {
    let a: HashSet<Point> = a.offsets().collect();
    let b: Vec<Point> = b.offsets().collect();
    if !overlaps_at(&a, &b, u) {
        return 0;
    }
    let mut s = 1;
    loop {
        if !overlaps_at(&a, &b, u.shifted(axis, s)) || !overlaps_at(&a, &b, u.shifted(axis, -s)) {
            return s as u32;
        }
        s += 1;
    }
}

/// Offsets around the NFP's extent where engine and brute force disagree.
pub fn nfp_mismatches(a: &PixelShape, b: &PixelShape, nfp: &Nfp) -> Vec<Point> {
    let truth = brute_nfp(a, b);
    let rx = a.length() + b.length() + 1;
    let ry = a.width() + b.width() + 1;
    let mut bad = Vec::new();
    for y in -ry..=ry {
        for x in -rx..=rx {
            let u = Point::new(x, y);
            if nfp.contains(u) != truth.contains(&u) {
                bad.push(u);
            }
        }
    }
    bad
}

/// Pairs of pieces sharing at least one cell.
pub fn overlapping_pairs(problem: &Problem, layout: &Layout) -> Vec<(usize, usize)> {
    let mut owner: HashMap<Point, Vec<usize>> = HashMap::new();
    for i in 0..layout.len() {
        for c in problem.cells_at(i, layout.orientations[i], layout.positions[i]) {
            owner.entry(c).or_default().push(i);
        }
    }
    let mut pairs: Vec<(usize, usize)> = owner
        .values()
        .filter(|v| v.len() > 1)
        .flat_map(|v| {
            v.iter()
                .enumerate()
                .flat_map(move |(x, &i)| v[x + 1..].iter().map(move |&j| (i.min(j), i.max(j))))
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Every cell lies in `[0, length) x [0, W)`.
pub fn layout_is_contained(problem: &Problem, layout: &Layout) -> bool {
    (0..layout.len()).all(|i| {
        problem
            .cells_at(i, layout.orientations[i], layout.positions[i])
            .all(|c| c.x >= 0 && c.y >= 0 && c.x < layout.length && c.y < problem.width())
    })
}

/// Contained and free of overlap, checked cell by cell.
pub fn layout_is_feasible(problem: &Problem, layout: &Layout) -> bool {
    layout.len() == problem.piece_count()
        && layout_is_contained(problem, layout)
        && overlapping_pairs(problem, layout).is_empty()
}

/// Random non-empty cell set within `max_side x max_side`: either scattered
/// cells or a grown blob.
pub fn random_shape<R: Rng>(rng: &mut R, max_side: i32) -> PixelShape {
    let l = rng.gen_range(1..=max_side);
    let w = rng.gen_range(1..=max_side);
    let mut cells = Vec::new();
    if rng.gen_bool(0.5) {
        let density = rng.gen_range(0.15..0.9);
        for y in 0..w {
            for x in 0..l {
                if rng.gen_bool(density) {
                    cells.push(Point::new(x, y));
                }
            }
        }
    } else {
        let mut p = Point::new(rng.gen_range(0..l), rng.gen_range(0..w));
        for _ in 0..rng.gen_range(1..=(l * w * 2) as usize) {
            cells.push(p);
            let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
            p = Point::new((p.x + dx).clamp(0, l - 1), (p.y + dy).clamp(0, w - 1));
        }
    }
    if cells.is_empty() {
        cells.push(Point::new(0, 0));
    }
    PixelShape::from_cells(cells).expect("non-empty")
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct OracleReport {
    pub nfp_pairs: usize,
    pub nfp_mismatches: usize,
    pub depth_checks: usize,
    pub depth_mismatches: usize,
    pub layouts: usize,
    pub layout_mismatches: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.nfp_mismatches == 0 && self.depth_mismatches == 0 && self.layout_mismatches == 0
    }
}

/// Compares the engine with brute force on `pairs` random shape pairs of at
/// most `max_side` cells per side. `inject_fault` corrupts every engine NFP
/// at the origin so the harness can be shown to fail.
pub fn run_oracle<R: Rng>(rng: &mut R, pairs: usize, max_side: i32, inject_fault: bool) -> OracleReport {
    let mut report = OracleReport::default();
    for _ in 0..pairs {
        let a = random_shape(rng, max_side);
        let b = random_shape(rng, max_side);
        let mut nfp = build_nfp(&a, &b);
        if inject_fault {
            nfp = nfp.corrupted(Point::new(0, 0));
        }
        report.nfp_pairs += 1;
        if !nfp_mismatches(&a, &b, &nfp).is_empty() {
            report.nfp_mismatches += 1;
        }

        // depth at a few overlapping offsets
        let truth: Vec<Point> = {
            let mut t: Vec<Point> = brute_nfp(&a, &b).into_iter().collect();
            t.sort_unstable_by_key(|p| (p.y, p.x));
            t
        };
        for _ in 0..3 {
            let u = truth[rng.gen_range(0..truth.len())];
            for axis in Axis::BOTH {
                report.depth_checks += 1;
                if nfp.penetration_depth(u, axis) != brute_depth(&a, &b, u, axis) {
                    report.depth_mismatches += 1;
                }
            }
        }

        // a two-piece layout: the cached penalty must agree with cell overlap
        let problem = Problem::from_rasters(
            "oracle",
            2 * max_side + 2,
            vec![
                RasterShape {
                    id: "a".into(),
                    count: 1,
                    variants: vec![(0, a.clone())],
                },
                RasterShape {
                    id: "b".into(),
                    count: 1,
                    variants: vec![(0, b.clone())],
                },
            ],
        )
        .expect("valid shapes");
        let span = max_side + 1;
        let layout = Layout {
            positions: vec![
                Point::new(span, span),
                Point::new(span + rng.gen_range(-span..=span), span + rng.gen_range(-span..=span)),
            ],
            orientations: vec![0, 0],
            length: 2 * max_side + 2,
        };
        let engine_free = PenaltyState::new(&problem, &layout).total() == 0;
        report.layouts += 1;
        if engine_free != overlapping_pairs(&problem, &layout).is_empty() {
            report.layout_mismatches += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_cells() {
        let one = PixelShape::rectangle(1, 1);
        assert_eq!(brute_nfp(&one, &one), HashSet::from([Point::new(0, 0)]));
        assert!(nfp_mismatches(&one, &one, &build_nfp(&one, &one)).is_empty());
    }

    #[test]
    fn sweep_passes_and_fault_is_caught() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let report = run_oracle(&mut rng, 40, 8, false);
        assert!(report.passed(), "{report:?}");
        let report = run_oracle(&mut rng, 5, 8, true);
        assert_eq!(report.nfp_mismatches, 5);
        assert!(!report.passed());
    }

    #[test]
    fn depth_of_blocks() {
        let blk = PixelShape::rectangle(3, 3);
        for axis in Axis::BOTH {
            assert_eq!(brute_depth(&blk, &blk, Point::new(0, 0), axis), 3);
        }
        let one = PixelShape::rectangle(1, 1);
        let bar = PixelShape::rectangle(3, 1);
        assert_eq!(brute_depth(&bar, &one, Point::new(0, 0), Axis::Horizontal), 2);
        assert_eq!(brute_depth(&bar, &one, Point::new(0, 0), Axis::Vertical), 1);
    }
}
