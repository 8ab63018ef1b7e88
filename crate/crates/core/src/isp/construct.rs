use thiserror::Error;

use crate::geometry::Point;
use crate::omp::{compact, Layout, SearchContext};
use crate::problem::Problem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("piece {piece} (shape '{shape}') is {width} px wide at 0 degrees but the container is {container} px")]
pub struct PieceExceedsWidth {
    pub piece: usize,
    pub shape: String,
    pub width: i32,
    pub container: i32,
}

/// Pieces by descending length, then descending width, then index; all at
/// orientation 0.
pub fn construction_order(problem: &Problem) -> Vec<usize> {
    let mut order: Vec<usize> = (0..problem.piece_count()).collect();
    order.sort_by_key(|&i| {
        let c = problem.class(problem.class_of(i, 0));
        (std::cmp::Reverse(c.length()), std::cmp::Reverse(c.width()), i)
    });
    order
}

/// Next-fit decreasing height levels: each level is a column filled bottom
/// to top, and a new level starts right of the longest piece of the
/// previous one. The returned layout's length covers every level.
pub fn nfdh(problem: &Problem) -> Result<Layout, PieceExceedsWidth> {
    let n = problem.piece_count();
    let width = problem.width();
    let mut positions = vec![Point::default(); n];
    let (mut level_x, mut level_len, mut filled) = (0, 0, 0);
    for i in construction_order(problem) {
        let c = problem.class(problem.class_of(i, 0));
        let (l, w) = (c.length(), c.width());
        if w > width {
            return Err(PieceExceedsWidth {
                piece: i,
                shape: problem.shape_id(i).to_string(),
                width: w,
                container: width,
            });
        }
        if filled + w > width {
            level_x += level_len;
            filled = 0;
            level_len = 0;
        }
        positions[i] = Point::new(level_x + l / 2, filled + w / 2);
        filled += w;
        level_len = level_len.max(l);
    }
    Ok(Layout {
        positions,
        orientations: vec![0; n],
        length: level_x + level_len,
    })
}

/// Smallest length holding every piece of `layout`.
pub fn occupied_length(problem: &Problem, layout: &Layout) -> i32 {
    (0..layout.len())
        .map(|i| {
            let l = problem.class(problem.class_of(i, layout.orientations[i])).length();
            layout.positions[i].x - l / 2 + l
        })
        .max()
        .unwrap_or(0)
}

/// Initial feasible layout: NFDH followed by bottom-left compaction of each
/// piece in construction order. The layout's length is tight.
pub fn construct(problem: &Problem, corner_reduction: bool) -> Result<Layout, PieceExceedsWidth> {
    let mut layout = nfdh(problem)?;
    let ctx = SearchContext::new(problem, layout.length, corner_reduction);
    for i in construction_order(problem) {
        compact(&ctx, &mut layout, i).expect("pieces placed by NFDH fit the container");
    }
    layout.length = occupied_length(problem, &layout);
    Ok(layout)
}
