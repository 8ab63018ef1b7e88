//! Overlap minimization in a fixed container.
//!
//! A [`Layout`] may contain overlapping pieces; [`PenaltyState`] caches the
//! pairwise penalties `f_ij` and weights `α_ij`. [`cdh`] moves one piece at a
//! time with axis line searches and [`gls`] wraps it with weight updates.

mod cdh;
mod gls;
mod line_search;
mod penalty;

pub use cdh::{cdh, CdhOutcome};
pub use gls::{gls, Budget, GlsOutcome};
pub use line_search::{compact, line_search, neighbor_search, LineSearchResult};
pub use penalty::{piece_penalty, PenaltyState};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point, Rect};
use crate::problem::Problem;

/// Deterministic generator used for every random choice of the search.
pub type SearchRng = ChaCha8Rng;

/// The piece does not fit the container at the requested orientation.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("piece {piece} does not fit the container at orientation index {orientation}")]
pub struct NoValidPosition {
    pub piece: usize,
    pub orientation: usize,
}

/// Reference positions and orientation indices for every piece in a
/// container of fixed width and length `length`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub positions: Vec<Point>,
    /// Index into the piece's allowed orientations.
    pub orientations: Vec<usize>,
    pub length: i32,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Read-only search parameters shared by the line search and CDH.
#[derive(Clone, Copy, Debug)]
pub struct SearchContext<'a> {
    pub problem: &'a Problem,
    pub length: i32,
    pub corner_reduction: bool,
}

impl<'a> SearchContext<'a> {
    pub fn new(problem: &'a Problem, length: i32, corner_reduction: bool) -> Self {
        SearchContext {
            problem,
            length,
            corner_reduction,
        }
    }

    /// Containment box for the reference point of class `c`.
    #[inline]
    pub fn reference_box(&self, c: usize) -> Option<Rect> {
        let class = self.problem.class(c);
        let (x_min, x_max) = class.x_range(self.length)?;
        let (y_min, y_max) = class.y_range(self.problem.width())?;
        Some(Rect {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }
}

/// Absolute cell bounding box of class `c` placed at `v`.
#[inline]
pub fn footprint(problem: &Problem, c: usize, v: Point) -> Rect {
    let class = problem.class(c);
    let (l, w) = (class.length(), class.width());
    let x_min = v.x - l / 2;
    let y_min = v.y - w / 2;
    Rect {
        x_min,
        y_min,
        x_max: x_min + l - 1,
        y_max: y_min + w - 1,
    }
}

/// Every piece lies inside `[0, length) x [0, W)`.
pub fn is_contained(problem: &Problem, layout: &Layout) -> bool {
    (0..layout.len()).all(|i| {
        let c = problem.class_of(i, layout.orientations[i]);
        let r = footprint(problem, c, layout.positions[i]);
        r.x_min >= 0 && r.y_min >= 0 && r.x_max < layout.length && r.y_max < problem.width()
    })
}
