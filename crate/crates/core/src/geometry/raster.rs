use super::outline::{Outline, Vec2};
use super::{GeometryError, Point};

/// Arc flattening tolerance in pixels.
const ARC_TOLERANCE_PX: f64 = 0.25;

/// A set of grid cells positioned relative to a reference point at the
/// (floored) center of its bounding box.
///
/// Cells are kept in local bounding-box coordinates `(a, b)` with
/// `0 <= a < length` and `0 <= b < width`, sorted by row then column. The
/// offset of a local cell from the reference point is
/// `(a - length / 2, b - width / 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PixelShape {
    cells: Vec<Point>,
    length: i32,
    width: i32,
}

impl PixelShape {
    /// Builds a shape from arbitrary cells; the result is re-centered on its
    /// own tight bounding box. Duplicates are merged.
    pub fn from_cells<I: IntoIterator<Item = Point>>(cells: I) -> Result<PixelShape, GeometryError> {
        let mut cells: Vec<Point> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(GeometryError::EmptyShape);
        }
        let x_min = cells.iter().map(|p| p.x).min().unwrap();
        let y_min = cells.iter().map(|p| p.y).min().unwrap();
        let x_max = cells.iter().map(|p| p.x).max().unwrap();
        let y_max = cells.iter().map(|p| p.y).max().unwrap();
        for p in cells.iter_mut() {
            *p = Point::new(p.x - x_min, p.y - y_min);
        }
        cells.sort_unstable_by_key(|p| (p.y, p.x));
        cells.dedup();
        Ok(PixelShape {
            cells,
            length: x_max - x_min + 1,
            width: y_max - y_min + 1,
        })
    }

    /// Axis-aligned `length x width` block.
    pub fn rectangle(length: i32, width: i32) -> PixelShape {
        assert!(length > 0 && width > 0);
        let cells = (0..width).flat_map(|b| (0..length).map(move |a| Point::new(a, b)));
        PixelShape::from_cells(cells).expect("non-empty rectangle")
    }

    /// Bounding-box extent along x, `l`.
    pub fn length(&self) -> i32 {
        self.length
    }

    /// Bounding-box extent along y, `w`.
    pub fn width(&self) -> i32 {
        self.width
    }

    /// Number of cells.
    pub fn area(&self) -> u64 {
        self.cells.len() as u64
    }

    /// Local coordinate of the reference point, `(l / 2, w / 2)` floored.
    pub fn ref_offset(&self) -> Point {
        Point::new(self.length / 2, self.width / 2)
    }

    pub fn local_cells(&self) -> &[Point] {
        &self.cells
    }

    /// Cells relative to the reference point.
    pub fn offsets(&self) -> impl Iterator<Item = Point> + '_ {
        let r = self.ref_offset();
        self.cells.iter().map(move |&p| p - r)
    }

    pub fn contains_offset(&self, p: Point) -> bool {
        let local = p + self.ref_offset();
        self.cells
            .binary_search_by_key(&(local.y, local.x), |c| (c.y, c.x))
            .is_ok()
    }

    /// Exact grid rotation by `quarter_turns * 90` degrees counter-clockwise.
    pub fn rotate_quarter_turns(&self, quarter_turns: i32) -> PixelShape {
        let (l, w) = (self.length, self.width);
        let map = |p: Point| match quarter_turns.rem_euclid(4) {
            0 => p,
            1 => Point::new(w - 1 - p.y, p.x),
            2 => Point::new(l - 1 - p.x, w - 1 - p.y),
            _ => Point::new(p.y, l - 1 - p.x),
        };
        PixelShape::from_cells(self.cells.iter().map(|&p| map(p))).expect("rotation keeps cells")
    }
}

/// Rasterizes `outline` at `scale` pixels per model unit.
///
/// A cell is filled iff its center lies inside the scaled outer boundary and
/// outside every hole. Centers exactly on a boundary count as inside for
/// bottom and left edges only.
pub fn rasterize(outline: &Outline, scale: f64) -> Result<PixelShape, GeometryError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(GeometryError::InvalidScale(scale));
    }
    outline.validate()?;
    let scaled = outline.scaled(scale);
    let mut rings = vec![scaled.flatten_ring(ARC_TOLERANCE_PX)];
    rings.extend(scaled.holes.iter().map(|h| h.flatten_ring(ARC_TOLERANCE_PX)));

    let outer = &rings[0];
    let y_lo = outer.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    let y_hi = outer.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);

    let mut cells = Vec::new();
    let mut crossings = Vec::new();
    for row in (y_lo.floor() as i64)..=(y_hi.ceil() as i64) {
        let py = row as f64 + 0.5;
        crossings.clear();
        for ring in &rings {
            collect_crossings(ring, py, &mut crossings);
        }
        crossings.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for pair in crossings.chunks_exact(2) {
            // center i + 0.5 inside iff pair[0] <= i + 0.5 < pair[1]
            let first = (pair[0] - 0.5).ceil() as i64;
            let last = (pair[1] - 0.5).ceil() as i64 - 1;
            for col in first..=last {
                cells.push(Point::new(col as i32, row as i32));
            }
        }
    }
    PixelShape::from_cells(cells).map_err(|_| GeometryError::EmptyRaster)
}

fn collect_crossings(ring: &[Vec2], py: f64, out: &mut Vec<f64>) {
    let n = ring.len();
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        // half-open in y: an edge counts when py is in [min, max)
        if (a.y <= py) != (b.y <= py) {
            out.push(a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y));
        }
    }
}

/// Rasterizes `outline` rotated counter-clockwise by `degrees`.
///
/// Quarter turns are applied as exact grid rotations of the unrotated raster;
/// other angles rotate the vector outline about its bounding-box center and
/// re-rasterize.
pub fn rotate_and_rasterize(outline: &Outline, degrees: i32, scale: f64) -> Result<PixelShape, GeometryError> {
    let deg = degrees.rem_euclid(360);
    if deg % 90 == 0 {
        return Ok(rasterize(outline, scale)?.rotate_quarter_turns(deg / 90));
    }
    let (lo, hi) = outline.bounds();
    let pivot = Vec2::new((lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0);
    rasterize(&outline.rotated(deg as f64, pivot), scale)
}
