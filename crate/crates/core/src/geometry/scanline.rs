use super::{Axis, GeometryError, PixelShape, Point, Rect};

/// A run of consecutive cells on one scanline, `start..=end`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strip {
    pub start: i32,
    pub end: i32,
}

impl Strip {
    pub const fn new(start: i32, end: i32) -> Self {
        Strip { start, end }
    }

    pub fn len(&self) -> i32 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    pub fn contains(&self, pos: i32) -> bool {
        self.start <= pos && pos <= self.end
    }
}

/// Strips grouped by scanline, stored flat with per-line offsets so that a
/// line lookup is a single index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scanlines {
    first: i32,
    offsets: Vec<u32>,
    strips: Vec<Strip>,
}

impl Scanlines {
    pub fn empty() -> Scanlines {
        Scanlines {
            first: 0,
            offsets: vec![0],
            strips: Vec::new(),
        }
    }

    /// Builds from per-line strip lists starting at line `first`. Each list
    /// must already be sorted and maximal.
    pub fn from_lines(first: i32, lines: Vec<Vec<Strip>>) -> Scanlines {
        let mut offsets = Vec::with_capacity(lines.len() + 1);
        let mut strips = Vec::with_capacity(lines.iter().map(Vec::len).sum());
        offsets.push(0);
        for line in lines {
            strips.extend(line);
            offsets.push(strips.len() as u32);
        }
        let mut s = Scanlines { first, offsets, strips };
        s.trim();
        s
    }

    /// Builds maximal strips from `(line, position)` pairs in any order.
    pub fn from_points<I: IntoIterator<Item = (i32, i32)>>(points: I) -> Scanlines {
        let mut pts: Vec<(i32, i32)> = points.into_iter().collect();
        if pts.is_empty() {
            return Scanlines::empty();
        }
        pts.sort_unstable();
        pts.dedup();
        let first = pts[0].0;
        let last = pts[pts.len() - 1].0;
        let mut lines: Vec<Vec<Strip>> = vec![Vec::new(); (last - first + 1) as usize];
        for (line, pos) in pts {
            let bucket = &mut lines[(line - first) as usize];
            match bucket.last_mut() {
                Some(s) if s.end + 1 == pos => s.end = pos,
                _ => bucket.push(Strip::new(pos, pos)),
            }
        }
        Scanlines::from_lines(first, lines)
    }

    /// Merges overlapping or abutting intervals of each line into maximal
    /// strips. Used when strips come from a convolution in arbitrary order.
    pub fn from_unsorted_lines(first: i32, mut lines: Vec<Vec<Strip>>) -> Scanlines {
        for line in lines.iter_mut() {
            merge_in_place(line);
        }
        Scanlines::from_lines(first, lines)
    }

    fn trim(&mut self) {
        let count = self.line_count();
        let lead = (0..count).take_while(|&i| self.line_at(i).is_empty()).count();
        if lead == count {
            *self = Scanlines::empty();
            return;
        }
        let trail = (0..count).rev().take_while(|&i| self.line_at(i).is_empty()).count();
        if lead > 0 || trail > 0 {
            self.offsets = self.offsets[lead..self.offsets.len() - trail].to_vec();
            self.first += lead as i32;
        }
        // offsets may now start above zero; rebase keeps `strips` shared
        if self.offsets[0] != 0 {
            let base = self.offsets[0] as usize;
            let end = *self.offsets.last().unwrap() as usize;
            self.strips = self.strips[base..end].to_vec();
            let b = base as u32;
            for o in self.offsets.iter_mut() {
                *o -= b;
            }
        } else {
            let end = *self.offsets.last().unwrap() as usize;
            self.strips.truncate(end);
        }
    }

    #[inline]
    fn line_at(&self, i: usize) -> &[Strip] {
        &self.strips[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Strips on scanline `line` (empty if out of range).
    #[inline]
    pub fn line(&self, line: i32) -> &[Strip] {
        let i = line - self.first;
        if i < 0 || i as usize + 1 >= self.offsets.len() {
            return &[];
        }
        self.line_at(i as usize)
    }

    /// Index of the first line.
    pub fn first_line(&self) -> i32 {
        self.first
    }

    /// Index of the last line; less than `first_line` when empty.
    pub fn last_line(&self) -> i32 {
        self.first + self.line_count() as i32 - 1
    }

    pub fn line_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn strip_count(&self) -> usize {
        self.strips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strips.is_empty()
    }

    /// The strip containing `pos` on `line`, if any.
    #[inline]
    pub fn find(&self, line: i32, pos: i32) -> Option<Strip> {
        let strips = self.line(line);
        match strips {
            [] => None,
            [s] => s.contains(pos).then_some(*s),
            _ => {
                let idx = strips.partition_point(|s| s.start <= pos);
                if idx == 0 {
                    return None;
                }
                let s = strips[idx - 1];
                s.contains(pos).then_some(s)
            }
        }
    }

    pub fn lines(&self) -> impl Iterator<Item = (i32, &[Strip])> + '_ {
        (0..self.line_count()).map(move |i| (self.first + i as i32, self.line_at(i)))
    }

    /// All `(line, position)` cells.
    pub fn cells(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.lines().flat_map(|(line, strips)| {
            strips
                .iter()
                .flat_map(move |s| (s.start..=s.end).map(move |p| (line, p)))
        })
    }

    /// Every line holds sorted, disjoint strips separated by at least one gap cell.
    pub fn is_maximal(&self) -> bool {
        self.lines().all(|(_, strips)| {
            strips.iter().all(|s| !s.is_empty()) && strips.windows(2).all(|w| w[0].end + 1 < w[1].start)
        })
    }

    /// Range of positions covered by any strip, `None` when empty.
    pub fn position_range(&self) -> Option<(i32, i32)> {
        let lo = self.lines().filter_map(|(_, s)| s.first().map(|s| s.start)).min()?;
        let hi = self.lines().filter_map(|(_, s)| s.last().map(|s| s.end)).max()?;
        Some((lo, hi))
    }

    /// Exactly one strip per line, and strips of adjacent lines overlap or touch.
    pub fn is_monotone(&self) -> bool {
        let mut prev: Option<Strip> = None;
        for (_, strips) in self.lines() {
            if strips.len() != 1 {
                return false;
            }
            let s = strips[0];
            if let Some(p) = prev {
                if s.start > p.end + 1 || p.start > s.end + 1 {
                    return false;
                }
            }
            prev = Some(s);
        }
        true
    }
}

fn merge_in_place(line: &mut Vec<Strip>) {
    if line.len() < 2 {
        return;
    }
    line.sort_unstable();
    let mut out = 0;
    for i in 1..line.len() {
        let s = line[i];
        if s.start <= line[out].end + 1 {
            line[out].end = line[out].end.max(s.end);
        } else {
            out += 1;
            line[out] = s;
        }
    }
    line.truncate(out + 1);
}

/// The same cell set stored as horizontal strips per row and vertical strips
/// per column.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DoubleScanline {
    rows: Scanlines,
    cols: Scanlines,
}

impl DoubleScanline {
    /// Pairs precomputed row and column scanlines without checking that they
    /// agree; see [`decode_cells`] for the checked inverse.
    pub fn from_parts(rows: Scanlines, cols: Scanlines) -> DoubleScanline {
        DoubleScanline { rows, cols }
    }

    pub fn from_cells<I: IntoIterator<Item = Point>>(cells: I) -> DoubleScanline {
        let cells: Vec<Point> = cells.into_iter().collect();
        DoubleScanline {
            rows: Scanlines::from_points(cells.iter().map(|p| (p.y, p.x))),
            cols: Scanlines::from_points(cells.iter().map(|p| (p.x, p.y))),
        }
    }

    /// Horizontal strips indexed by y.
    pub fn rows(&self) -> &Scanlines {
        &self.rows
    }

    /// Vertical strips indexed by x.
    pub fn cols(&self) -> &Scanlines {
        &self.cols
    }

    /// Scanlines swept by a move along `axis`: rows for horizontal moves,
    /// columns for vertical ones.
    #[inline]
    pub fn lines(&self, axis: Axis) -> &Scanlines {
        match axis {
            Axis::Horizontal => &self.rows,
            Axis::Vertical => &self.cols,
        }
    }

    /// Number of horizontal strips, `m`.
    pub fn strip_count(&self) -> usize {
        self.rows.strip_count()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.rows.find(p.y, p.x).is_some()
    }

    /// Tight bounding box, `None` when empty.
    pub fn bbox(&self) -> Option<Rect> {
        let (x_min, x_max) = self.rows.position_range()?;
        Some(Rect {
            x_min,
            y_min: self.rows.first_line(),
            x_max,
            y_max: self.rows.last_line(),
        })
    }

    pub fn area(&self) -> u64 {
        self.rows
            .lines()
            .flat_map(|(_, s)| s.iter())
            .map(|s| s.len() as u64)
            .sum()
    }
}

/// Double scanline of `shape` in reference-point offsets.
pub fn encode(shape: &PixelShape) -> DoubleScanline {
    DoubleScanline::from_cells(shape.offsets())
}

/// Cells of `ds` (sorted by row, then column), checking that rows and
/// columns agree.
pub fn decode_cells(ds: &DoubleScanline) -> Result<Vec<Point>, GeometryError> {
    let mut from_rows: Vec<Point> = ds.rows.cells().map(|(y, x)| Point::new(x, y)).collect();
    let mut from_cols: Vec<Point> = ds.cols.cells().map(|(x, y)| Point::new(x, y)).collect();
    from_rows.sort_unstable_by_key(|p| (p.y, p.x));
    from_cols.sort_unstable_by_key(|p| (p.y, p.x));
    if from_rows != from_cols {
        return Err(GeometryError::InconsistentEncoding);
    }
    Ok(from_rows)
}

/// Inverse of [`encode`] (the result is re-centered on its bounding box).
pub fn decode(ds: &DoubleScanline) -> Result<PixelShape, GeometryError> {
    let cells = decode_cells(ds)?;
    PixelShape::from_cells(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn shape(cells: &[(i32, i32)]) -> PixelShape {
        PixelShape::from_cells(cells.iter().map(|&(x, y)| Point::new(x, y))).unwrap()
    }

    #[test]
    fn single_cell() {
        let ds = encode(&shape(&[(0, 0)]));
        assert_eq!(ds.strip_count(), 1);
        assert_eq!(ds.cols().strip_count(), 1);
    }

    #[test]
    fn block_three_by_three() {
        let ds = encode(&PixelShape::rectangle(3, 3));
        assert_eq!(ds.rows().strip_count(), 3);
        assert_eq!(ds.cols().strip_count(), 3);
        assert!(ds.rows().is_monotone() && ds.cols().is_monotone());
    }

    #[test]
    fn u_shape_strips() {
        // local cells as given; the 3x2 bbox puts the reference at (1, 1)
        let u = shape(&[(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)]);
        let ds = DoubleScanline::from_cells(u.local_cells().iter().copied());
        assert_eq!(ds.rows().line(0), &[Strip::new(0, 2)]);
        assert_eq!(ds.rows().line(1), &[Strip::new(0, 0), Strip::new(2, 2)]);
        assert_eq!(ds.rows().strip_count(), 3);
        assert_eq!(ds.cols().line(0), &[Strip::new(0, 1)]);
        assert_eq!(ds.cols().line(1), &[Strip::new(0, 0)]);
        assert_eq!(ds.cols().line(2), &[Strip::new(0, 1)]);
        assert!(!ds.rows().is_monotone());

        // rows-only expansion gives the five cells
        assert_eq!(ds.rows().cells().count(), 5);
        assert_eq!(decode(&encode(&u)).unwrap(), u);
    }

    #[test]
    fn inconsistent_encoding_detected() {
        let rows = Scanlines::from_points([(0, 0)]);
        let cols = Scanlines::from_points([(0, 0), (1, 0)]);
        let ds = DoubleScanline::from_parts(rows, cols);
        assert_eq!(decode(&ds), Err(GeometryError::InconsistentEncoding));
    }

    #[test]
    fn find_uses_the_right_strip() {
        let s = Scanlines::from_points([(0, 0), (0, 1), (0, 4), (0, 5), (0, 6), (0, 9)]);
        assert_eq!(s.find(0, 5), Some(Strip::new(4, 6)));
        assert_eq!(s.find(0, 3), None);
        assert_eq!(s.find(0, 9), Some(Strip::new(9, 9)));
        assert_eq!(s.find(0, -1), None);
        assert_eq!(s.find(1, 0), None);
    }

    #[test]
    fn unsorted_lines_are_merged() {
        let s = Scanlines::from_unsorted_lines(
            -1,
            vec![
                vec![],
                vec![Strip::new(3, 4), Strip::new(0, 1), Strip::new(2, 2)],
                vec![],
            ],
        );
        assert_eq!(s.first_line(), 0);
        assert_eq!(s.line_count(), 1);
        assert_eq!(s.line(0), &[Strip::new(0, 4)]);
    }

    proptest! {
        #[test]
        fn round_trip_and_row_col_agreement(
            cells in proptest::collection::btree_set((0i32..32, 0i32..32), 1..200)
        ) {
            let s = PixelShape::from_cells(cells.iter().map(|&(x, y)| Point::new(x, y))).unwrap();
            let ds = encode(&s);
            prop_assert!(ds.rows().is_maximal() && ds.cols().is_maximal());
            let decoded: BTreeSet<Point> = decode_cells(&ds).unwrap().into_iter().collect();
            let original: BTreeSet<Point> = s.offsets().collect();
            prop_assert_eq!(decoded, original);
            prop_assert_eq!(decode(&ds).unwrap(), s);
        }
    }
}
