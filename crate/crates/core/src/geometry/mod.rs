//! Raster geometry: vector outlines, pixel shapes and the double scanline
//! encoding shared by pieces and no-fit polygons.

mod outline;
mod raster;
mod scanline;

pub use outline::{Outline, Segment, Vec2};
pub use raster::{rasterize, rotate_and_rasterize, PixelShape};
pub use scanline::{decode, decode_cells, encode, DoubleScanline, Scanlines, Strip};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integer grid coordinate. A cell `(x, y)` covers the unit square
/// `[x, x + 1] x [y, y + 1]`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    /// Coordinate along `axis`.
    #[inline]
    pub fn along(self, axis: Axis) -> i32 {
        match axis {
            Axis::Horizontal => self.x,
            Axis::Vertical => self.y,
        }
    }

    /// Coordinate across `axis`, i.e. the scanline index a sweep along `axis` stays on.
    #[inline]
    pub fn across(self, axis: Axis) -> i32 {
        match axis {
            Axis::Horizontal => self.y,
            Axis::Vertical => self.x,
        }
    }

    #[inline]
    pub fn shifted(self, axis: Axis, t: i32) -> Point {
        match axis {
            Axis::Horizontal => Point::new(self.x + t, self.y),
            Axis::Vertical => Point::new(self.x, self.y + t),
        }
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Sweep direction of a line search or a penetration-depth query.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    /// `d = (1, 0)`
    Horizontal,
    /// `d = (0, 1)`
    Vertical,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::Horizontal, Axis::Vertical];

    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

/// Inclusive integer rectangle.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: i32,
    pub y_min: i32,
    pub x_max: i32,
    pub y_max: i32,
}

impl Rect {
    pub fn width(&self) -> i32 {
        self.x_max - self.x_min + 1
    }

    pub fn height(&self) -> i32 {
        self.y_max - self.y_min + 1
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("outline is not closed: last endpoint is {gap} units away from the start")]
    OpenOutline { gap: f64 },
    #[error("arc segment {index} does not start at the current point (gap {gap})")]
    DisconnectedArc { index: usize, gap: f64 },
    #[error("arc segment {index} has a non-positive or non-finite radius")]
    InvalidArc { index: usize },
    #[error("outline needs at least one segment")]
    NoSegments,
    #[error("outer boundary has zero area")]
    ZeroArea,
    #[error("hole {index} is not strictly inside the outer boundary")]
    HoleOutside { index: usize },
    #[error("hole {index} has holes of its own; nesting deeper than one level is not supported")]
    NestedHole { index: usize },
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("no pixel center falls inside the outline at this scale")]
    EmptyRaster,
    #[error("a pixel shape needs at least one cell")]
    EmptyShape,
    #[error("row strips and column strips describe different cell sets")]
    InconsistentEncoding,
}
