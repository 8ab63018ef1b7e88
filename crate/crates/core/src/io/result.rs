//! Result files: the best layout of a run plus its configuration and
//! statistics. Wall-clock values live under `metadata` so the rest of the
//! file is reproducible byte for byte.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;
use crate::isp::{density, RunEvent, RunOutcome, SolverConfig};
use crate::omp::Layout;
use crate::oracle;
use crate::problem::Problem;

#[derive(Debug, Error)]
pub enum ResultError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed result file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("result does not match the instance: {0}")]
    Mismatch(String),
    #[error("layout is infeasible: {0}")]
    Infeasible(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub piece: usize,
    pub shape: String,
    pub degrees: i32,
    pub x: i32,
    pub y: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub best_length: i32,
    pub density: f64,
    pub cdh_calls: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub cdh_calls: u64,
    pub lower_bound: i32,
    pub events: Vec<RunEvent>,
    /// One entry per run when several seeds were tried.
    pub runs: Vec<RunSummary>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub preprocessing_secs: f64,
    pub time_to_best: f64,
    pub search_secs: f64,
    pub event_secs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub instance: String,
    pub width_px: i32,
    pub best_length: i32,
    pub density: f64,
    pub placed_area: u64,
    pub placements: Vec<Placement>,
    pub config: SolverConfig,
    pub stats: RunStats,
    pub metadata: Metadata,
}

impl ResultFile {
    /// Result for the best of `runs` (each paired with its seed).
    pub fn from_runs(problem: &Problem, config: &SolverConfig, runs: &[(u64, RunOutcome)]) -> ResultFile {
        let (seed, best) = runs
            .iter()
            .min_by_key(|(seed, r)| (r.record.best_length, *seed))
            .expect("at least one run");
        let layout = &best.layout;
        let placements = (0..layout.len())
            .map(|i| Placement {
                piece: i,
                shape: problem.shape_id(i).to_string(),
                degrees: problem.degrees_of(i, layout.orientations[i]),
                x: layout.positions[i].x,
                y: layout.positions[i].y,
            })
            .collect();
        let rec = &best.record;
        ResultFile {
            instance: problem.name.clone(),
            width_px: problem.width(),
            best_length: rec.best_length,
            density: rec.density,
            placed_area: rec.placed_area,
            placements,
            config: SolverConfig {
                seed: *seed,
                ..config.clone()
            },
            stats: RunStats {
                cdh_calls: rec.cdh_calls,
                lower_bound: rec.lower_bound,
                events: rec.events.clone(),
                runs: runs
                    .iter()
                    .map(|(seed, r)| RunSummary {
                        seed: *seed,
                        best_length: r.record.best_length,
                        density: r.record.density,
                        cdh_calls: r.record.cdh_calls,
                    })
                    .collect(),
            },
            metadata: Metadata {
                preprocessing_secs: problem.preprocessing_time().as_secs_f64(),
                time_to_best: rec.timing.time_to_best,
                search_secs: rec.timing.search_secs,
                event_secs: rec.timing.event_secs.clone(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<ResultFile, ResultError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), ResultError> {
        std::fs::write(path, self.to_json()).map_err(|source| ResultError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<ResultFile, ResultError> {
        let text = std::fs::read_to_string(path).map_err(|source| ResultError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ResultFile::from_json(&text)
    }

    /// Rebuilds the layout against `problem`.
    pub fn layout(&self, problem: &Problem) -> Result<Layout, ResultError> {
        let mismatch = |m: String| Err(ResultError::Mismatch(m));
        if self.placements.len() != problem.piece_count() {
            return mismatch(format!(
                "{} placements for {} pieces",
                self.placements.len(),
                problem.piece_count()
            ));
        }
        if self.width_px != problem.width() {
            return mismatch(format!(
                "width {} px, instance raster is {} px",
                self.width_px,
                problem.width()
            ));
        }
        let mut positions = Vec::with_capacity(self.placements.len());
        let mut orientations = Vec::with_capacity(self.placements.len());
        for (i, p) in self.placements.iter().enumerate() {
            if p.piece != i || p.shape != problem.shape_id(i) {
                return mismatch(format!("placement {i} names piece {} of shape '{}'", p.piece, p.shape));
            }
            let Some(o) = problem.piece(i).variants.iter().position(|&(d, _)| d == p.degrees) else {
                return mismatch(format!("piece {i} has no orientation {} degrees", p.degrees));
            };
            positions.push(Point::new(p.x, p.y));
            orientations.push(o);
        }
        Ok(Layout {
            positions,
            orientations,
            length: self.best_length,
        })
    }

    /// Re-checks feasibility cell by cell and recomputes the density.
    pub fn verify(&self, problem: &Problem) -> Result<(), ResultError> {
        let layout = self.layout(problem)?;
        if !oracle::layout_is_contained(problem, &layout) {
            return Err(ResultError::Infeasible("a piece leaves the container".into()));
        }
        if let Some(&(i, j)) = oracle::overlapping_pairs(problem, &layout).first() {
            return Err(ResultError::Infeasible(format!("pieces {i} and {j} overlap")));
        }
        let area = problem.placed_area(&layout.orientations);
        if area != self.placed_area {
            return Err(ResultError::Mismatch(format!(
                "placed area {area}, file says {}",
                self.placed_area
            )));
        }
        let d = density(area, problem.width(), self.best_length);
        if d != self.density {
            return Err(ResultError::Mismatch(format!(
                "density {d}, file says {}",
                self.density
            )));
        }
        Ok(())
    }
}
