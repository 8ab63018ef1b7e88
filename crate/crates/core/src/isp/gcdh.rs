use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{construct, PieceExceedsWidth, SolverConfig};
use crate::omp::{gls, Budget, Layout, SearchContext, SearchRng};
use crate::problem::Problem;

// guards the floors against representation error, e.g. 0.98 * 100 = 97.999...
const FLOOR_EPS: f64 = 1e-9;

/// Next length to try after a feasible layout at `best`: strictly shorter,
/// never below `lower_bound`.
pub fn shrink_length(best: i32, r_dec: f64, lower_bound: i32) -> i32 {
    let scaled = ((1.0 - r_dec) * best as f64 + FLOOR_EPS).floor() as i32;
    scaled.min(best - 1).max(lower_bound)
}

/// Next length after a failed attempt at `length`: strictly longer.
pub fn extend_length(length: i32, r_inc: f64) -> i32 {
    let scaled = ((1.0 + r_inc) * length as f64 + FLOOR_EPS).floor() as i32;
    scaled.max(length + 1)
}

/// One line of the run's trajectory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunEvent {
    /// CDH calls made before this event.
    pub cdh_calls: u64,
    pub length: i32,
    pub feasible: bool,
}

/// Run statistics. Wall-clock values are kept apart from the rest so that
/// the deterministic part can be compared across runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub best_length: i32,
    pub density: f64,
    pub placed_area: u64,
    pub lower_bound: i32,
    pub cdh_calls: u64,
    pub events: Vec<RunEvent>,
    pub timing: RunTiming,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTiming {
    pub time_to_best: f64,
    pub search_secs: f64,
    /// Seconds since the search started, one per event.
    pub event_secs: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub layout: Layout,
    pub record: RunRecord,
}

/// Percentage of the `width x length` container covered by `area` cells.
pub fn density(area: u64, width: i32, length: i32) -> f64 {
    100.0 * area as f64 / (width as f64 * length as f64)
}

/// Moves pieces that stick out of a container of length `length` to random
/// positions inside it, keeping their orientation when it fits.
pub fn relocate_protruding(problem: &Problem, layout: &mut Layout, length: i32, rng: &mut SearchRng) {
    layout.length = length;
    let width = problem.width();
    for i in 0..layout.len() {
        let o = layout.orientations[i];
        let class = problem.class(problem.class_of(i, o));
        let inside = class
            .x_range(length)
            .is_some_and(|(lo, hi)| (lo..=hi).contains(&layout.positions[i].x));
        if inside {
            continue;
        }
        let fits = |o: usize| {
            let c = problem.class(problem.class_of(i, o));
            c.x_range(length).zip(c.y_range(width))
        };
        let (o, ((x_lo, x_hi), (y_lo, y_hi))) = match fits(o) {
            Some(r) => (o, r),
            None => (0..problem.piece(i).variants.len())
                .find_map(|o| fits(o).map(|r| (o, r)))
                .expect("the length never drops below the longest piece"),
        };
        layout.orientations[i] = o;
        layout.positions[i].x = rng.gen_range(x_lo..=x_hi);
        layout.positions[i].y = rng.gen_range(y_lo..=y_hi);
    }
}

/// Construct, then alternately shrink the container after feasible layouts
/// and extend it after failures until the budget runs out or the lower bound
/// is reached.
pub fn gcdh(problem: &Problem, config: &SolverConfig) -> Result<RunOutcome, PieceExceedsWidth> {
    let started = Instant::now();
    let mut budget = Budget {
        deadline: Some(started + Duration::from_secs_f64(config.time_limit.min(1e9))),
        max_cdh_calls: config.max_cdh_calls,
        cdh_calls: 0,
    };
    let mut rng = SearchRng::seed_from_u64(config.seed);
    let width = problem.width();
    let lower_bound = problem.lower_bound();

    let mut best = construct(problem, config.corner_reduction)?;
    let mut events = vec![RunEvent {
        cdh_calls: 0,
        length: best.length,
        feasible: true,
    }];
    let mut timing = RunTiming {
        event_secs: vec![started.elapsed().as_secs_f64()],
        ..RunTiming::default()
    };
    timing.time_to_best = timing.event_secs[0];

    if best.length > lower_bound && !budget.exhausted() {
        let mut length = shrink_length(best.length, config.r_dec, lower_bound);
        let mut current = best.clone();
        relocate_protruding(problem, &mut current, length, &mut rng);
        while !budget.exhausted() {
            let ctx = SearchContext::new(problem, length, config.corner_reduction);
            let out = gls(&ctx, current, config.k_max, &mut rng, &mut budget);
            let elapsed = started.elapsed().as_secs_f64();
            events.push(RunEvent {
                cdh_calls: budget.cdh_calls,
                length,
                feasible: out.is_feasible(),
            });
            timing.event_secs.push(elapsed);
            current = out.best;
            if out.best_total == 0 {
                log::debug!("feasible at L = {length} after {} CDH calls", budget.cdh_calls);
                best = current.clone();
                timing.time_to_best = elapsed;
                if length <= lower_bound {
                    break;
                }
                length = shrink_length(length, config.r_dec, lower_bound);
                relocate_protruding(problem, &mut current, length, &mut rng);
            } else {
                length = extend_length(length, config.r_inc);
                current.length = length;
                if length >= best.length {
                    length = shrink_length(best.length, config.r_dec, lower_bound);
                    current = best.clone();
                    relocate_protruding(problem, &mut current, length, &mut rng);
                }
            }
        }
    }

    timing.search_secs = started.elapsed().as_secs_f64();
    let placed_area = problem.placed_area(&best.orientations);
    Ok(RunOutcome {
        record: RunRecord {
            best_length: best.length,
            density: density(placed_area, width, best.length),
            placed_area,
            lower_bound,
            cdh_calls: budget.cdh_calls,
            events,
            timing,
        },
        layout: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PixelShape;
    use crate::oracle::layout_is_feasible;
    use crate::problem::RasterShape;

    #[test]
    fn shrink_and_extend_examples() {
        assert_eq!(shrink_length(100, 0.02, 1), 98);
        assert_eq!(extend_length(98, 0.005), 99);
        assert_eq!(shrink_length(10, 0.02, 1), 9);
        assert_eq!(shrink_length(10, 0.02, 10), 10);
        assert_eq!(extend_length(1000, 0.005), 1005);
    }

    #[test]
    fn relocation_only_touches_protruding_pieces() {
        let p = Problem::from_rasters(
            "t",
            4,
            vec![RasterShape {
                id: "b".into(),
                count: 2,
                variants: vec![(0, PixelShape::rectangle(2, 2))],
            }],
        )
        .unwrap();
        let mut l = Layout {
            positions: vec![crate::geometry::Point::new(1, 1), crate::geometry::Point::new(9, 1)],
            orientations: vec![0, 0],
            length: 10,
        };
        let mut rng = SearchRng::seed_from_u64(5);
        relocate_protruding(&p, &mut l, 5, &mut rng);
        assert_eq!(l.positions[0], crate::geometry::Point::new(1, 1));
        assert!((1..=4).contains(&l.positions[1].x) && (1..=3).contains(&l.positions[1].y));
        assert_eq!(l.length, 5);
    }

    #[test]
    fn zero_time_limit_returns_construction() {
        let p = Problem::from_rasters(
            "t",
            4,
            vec![RasterShape {
                id: "b".into(),
                count: 3,
                variants: vec![(0, PixelShape::rectangle(3, 2))],
            }],
        )
        .unwrap();
        let config = SolverConfig {
            time_limit: 0.0,
            ..SolverConfig::default()
        };
        let out = gcdh(&p, &config).unwrap();
        let built = construct(&p, true).unwrap();
        assert_eq!(out.layout, built);
        assert_eq!(out.record.cdh_calls, 0);
        assert_eq!(out.record.events.len(), 1);
    }

    #[test]
    fn squares_reach_the_lower_bound() {
        // eight 2x2 squares in a width-4 strip pack perfectly at L = 8
        let p = Problem::from_rasters(
            "t",
            4,
            vec![RasterShape {
                id: "b".into(),
                count: 8,
                variants: vec![(0, PixelShape::rectangle(2, 2))],
            }],
        )
        .unwrap();
        let config = SolverConfig {
            time_limit: 5.0,
            ..SolverConfig::default()
        };
        let out = gcdh(&p, &config).unwrap();
        assert_eq!(out.record.best_length, 8);
        assert_eq!(out.record.density, 100.0);
        assert!(layout_is_feasible(&p, &out.layout));
    }
}
