//! Raster no-fit polygons.
//!
//! `NFP(a, b)` holds every relative offset `u` at which `b` placed at `u`
//! shares a cell with `a` placed at the origin, i.e. `a ⊕ (-b)`. Both
//! scanline directions are built by strip convolution: two strips on rows
//! `ya` and `yb` produce the strip `[sa - eb, ea - sb]` on row `ya - yb`.

mod corners;
mod table;

pub use corners::detect_corners;
pub use table::NfpTable;

use crate::geometry::{encode, Axis, DoubleScanline, PixelShape, Point, Rect, Scanlines, Strip};

#[derive(Clone, Debug)]
pub struct Nfp {
    ds: DoubleScanline,
    bbox: Rect,
    corners: Vec<Point>,
    // sorted, deduplicated corner x (index 0) and y (index 1) coordinates
    corner_positions: [Vec<i32>; 2],
    y_monotone: bool,
    x_monotone: bool,
}

/// NFP of the ordered pair `(a, b)`.
pub fn build_nfp(a: &PixelShape, b: &PixelShape) -> Nfp {
    build_nfp_from_scanlines(&encode(a), &encode(b))
}

/// Same as [`build_nfp`] for shapes that are already encoded.
pub fn build_nfp_from_scanlines(a: &DoubleScanline, b: &DoubleScanline) -> Nfp {
    assert!(!a.is_empty() && !b.is_empty(), "NFP of an empty shape");
    let rows = minkowski_difference(a.rows(), b.rows());
    let cols = minkowski_difference(a.cols(), b.cols());
    Nfp::from_scanline(DoubleScanline::from_parts(rows, cols))
}

fn minkowski_difference(a: &Scanlines, b: &Scanlines) -> Scanlines {
    let first = a.first_line() - b.last_line();
    let last = a.last_line() - b.first_line();
    let mut lines: Vec<Vec<Strip>> = vec![Vec::new(); (last - first + 1) as usize];
    for (la, sa) in a.lines() {
        if sa.is_empty() {
            continue;
        }
        for (lb, sb) in b.lines() {
            let bucket = &mut lines[(la - lb - first) as usize];
            for p in sa {
                for q in sb {
                    bucket.push(Strip::new(p.start - q.end, p.end - q.start));
                }
            }
        }
    }
    Scanlines::from_unsorted_lines(first, lines)
}

fn axis_index(axis: Axis) -> usize {
    match axis {
        Axis::Horizontal => 0,
        Axis::Vertical => 1,
    }
}

impl Nfp {
    /// Wraps a double scanline, detecting corners and monotonicity.
    pub fn from_scanline(ds: DoubleScanline) -> Nfp {
        let bbox = ds.bbox().expect("NFP is never empty");
        let corners = detect_corners(&ds);
        let mut xs: Vec<i32> = corners.iter().map(|p| p.x).collect();
        let mut ys: Vec<i32> = corners.iter().map(|p| p.y).collect();
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        let y_monotone = ds.rows().is_monotone();
        let x_monotone = ds.cols().is_monotone();
        Nfp {
            ds,
            bbox,
            corners,
            corner_positions: [xs, ys],
            y_monotone,
            x_monotone,
        }
    }

    pub fn scanline(&self) -> &DoubleScanline {
        &self.ds
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    /// Detected corner cells.
    pub fn corners(&self) -> &[Point] {
        &self.corners
    }

    /// One strip per row, adjacent rows contiguous.
    pub fn y_monotone(&self) -> bool {
        self.y_monotone
    }

    /// One strip per column, adjacent columns contiguous.
    pub fn x_monotone(&self) -> bool {
        self.x_monotone
    }

    /// Number of horizontal strips.
    pub fn strip_count(&self) -> usize {
        self.ds.strip_count()
    }

    #[inline]
    fn strip_at(&self, u: Point, axis: Axis) -> Option<Strip> {
        // single-strip lines (every line of a monotone NFP) skip the search
        self.ds.lines(axis).find(u.across(axis), u.along(axis))
    }

    /// Whether the pieces overlap at relative offset `u`.
    #[inline]
    pub fn contains(&self, u: Point) -> bool {
        self.bbox.contains(u) && self.strip_at(u, Axis::Horizontal).is_some()
    }

    /// Smallest `|s|` such that `u + s * d` leaves the NFP; zero outside.
    #[inline]
    pub fn penetration_depth(&self, u: Point, axis: Axis) -> u32 {
        if !self.bbox.contains(u) {
            return 0;
        }
        match self.strip_at(u, axis) {
            // strips are maximal, so both neighbours beyond the strip are empty
            Some(s) => {
                let pos = u.along(axis);
                (pos - s.start + 1).min(s.end - pos + 1) as u32
            }
            None => 0,
        }
    }

    /// Overlap penalty: the smaller of the horizontal and vertical depths.
    #[inline]
    pub fn pair_penalty(&self, u: Point) -> u32 {
        let h = self.penetration_depth(u, Axis::Horizontal);
        if h <= 1 {
            return h;
        }
        h.min(self.penetration_depth(u, Axis::Vertical))
    }

    /// Strips of the scanline a move along `axis` sweeps at `line`.
    pub fn line_strips(&self, line: i32, axis: Axis) -> &[Strip] {
        self.ds.lines(axis).line(line)
    }

    /// Reduced line-search candidates on one scanline: strip endpoints plus
    /// the projections of corners that fall inside a strip. Sorted, unique.
    pub fn candidate_offsets(&self, line: i32, axis: Axis) -> Vec<i32> {
        let mut out = Vec::new();
        self.push_candidates(line, axis, i32::MIN, i32::MAX, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Appends candidates restricted to positions `lo..=hi` (strips are
    /// clipped first, so clipped ends count as endpoints). Unsorted.
    pub fn push_candidates(&self, line: i32, axis: Axis, lo: i32, hi: i32, out: &mut Vec<i32>) {
        let projections = &self.corner_positions[axis_index(axis)];
        for s in self.line_strips(line, axis) {
            let start = s.start.max(lo);
            let end = s.end.min(hi);
            if start > end {
                continue;
            }
            out.push(start);
            if end != start {
                out.push(end);
            }
            let from = projections.partition_point(|&c| c <= start);
            let to = projections.partition_point(|&c| c < end);
            if from < to {
                out.extend_from_slice(&projections[from..to]);
            }
        }
    }

    /// Test hook: flips membership of `u` (a single-cell NFP grows instead)
    /// so oracle checks can be shown to catch a broken NFP.
    #[doc(hidden)]
    pub fn corrupted(&self, u: Point) -> Nfp {
        let mut cells: Vec<Point> = crate::geometry::decode_cells(&self.ds).expect("consistent NFP");
        match cells.iter().position(|&c| c == u) {
            Some(_) if cells.len() == 1 => cells.push(u + Point::new(1, 0)),
            Some(i) => {
                cells.swap_remove(i);
            }
            None => cells.push(u),
        }
        Nfp::from_scanline(DoubleScanline::from_cells(cells))
    }
}
