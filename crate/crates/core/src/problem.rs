//! A rasterized instance: oriented shape classes, expanded pieces and the
//! precomputed NFP table.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::geometry::{encode, rotate_and_rasterize, DoubleScanline, GeometryError, PixelShape, Point};
use crate::io::instance::Instance;
use crate::nfp::{Nfp, NfpTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("shape '{shape}' at {degrees} degrees: {source}")]
    Raster {
        shape: String,
        degrees: i32,
        #[source]
        source: GeometryError,
    },
    #[error("container width must be at least one pixel, got {0}")]
    InvalidWidth(i32),
    #[error("shape '{0}' has no orientations")]
    NoOrientations(String),
    #[error("instance has no pieces")]
    NoPieces,
}

/// One rasterized shape at one orientation. Identical rasters share a class.
#[derive(Clone, Debug)]
pub struct ShapeClass {
    pub pixels: PixelShape,
    pub scanline: DoubleScanline,
}

impl ShapeClass {
    pub fn length(&self) -> i32 {
        self.pixels.length()
    }

    pub fn width(&self) -> i32 {
        self.pixels.width()
    }

    pub fn area(&self) -> u64 {
        self.pixels.area()
    }

    /// Allowed reference x range in a container of length `l`.
    #[inline]
    pub fn x_range(&self, l: i32) -> Option<(i32, i32)> {
        axis_range(self.length(), l)
    }

    /// Allowed reference y range in a container of width `w`.
    #[inline]
    pub fn y_range(&self, w: i32) -> Option<(i32, i32)> {
        axis_range(self.width(), w)
    }
}

// The container holds cells 0..size; a piece of extent `e` occupies
// `ref - e / 2 ..= ref - e / 2 + e - 1`.
#[inline]
fn axis_range(extent: i32, size: i32) -> Option<(i32, i32)> {
    let lo = extent / 2;
    let hi = size - extent + extent / 2;
    (lo <= hi).then_some((lo, hi))
}

/// Input to [`Problem::from_rasters`]: one shape with its rasters per
/// allowed orientation.
#[derive(Clone, Debug)]
pub struct RasterShape {
    pub id: String,
    pub count: u32,
    pub variants: Vec<(i32, PixelShape)>,
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub shape: usize,
    /// `(degrees, class)` per allowed orientation; index 0 is 0 degrees.
    pub variants: Vec<(i32, usize)>,
}

#[derive(Debug)]
pub struct Problem {
    pub name: String,
    width: i32,
    scale: f64,
    shape_ids: Vec<String>,
    classes: Vec<ShapeClass>,
    pieces: Vec<Piece>,
    nfps: NfpTable,
    raster_time: Duration,
    nfp_time: Duration,
}

impl Problem {
    /// Rasterizes `instance` so that its container is `width_px` pixels wide
    /// and precomputes all NFPs.
    pub fn new(instance: &Instance, width_px: i32) -> Result<Problem, ProblemError> {
        if width_px < 1 {
            return Err(ProblemError::InvalidWidth(width_px));
        }
        let started = Instant::now();
        let scale = width_px as f64 / instance.container_width;
        let mut shapes = Vec::with_capacity(instance.shapes.len());
        for s in &instance.shapes {
            let mut variants = Vec::with_capacity(s.orientations.len());
            for &deg in &s.orientations {
                let px = rotate_and_rasterize(&s.outline, deg, scale).map_err(|source| ProblemError::Raster {
                    shape: s.id.clone(),
                    degrees: deg,
                    source,
                })?;
                variants.push((deg, px));
            }
            shapes.push(RasterShape {
                id: s.id.clone(),
                count: s.count,
                variants,
            });
        }
        let raster_time = started.elapsed();
        let mut problem = Problem::from_rasters(&instance.name, width_px, shapes)?;
        problem.scale = scale;
        problem.raster_time = raster_time;
        Ok(problem)
    }

    /// Builds a problem from rasters directly (scale 1).
    pub fn from_rasters(name: &str, width: i32, shapes: Vec<RasterShape>) -> Result<Problem, ProblemError> {
        if width < 1 {
            return Err(ProblemError::InvalidWidth(width));
        }
        let mut classes: Vec<ShapeClass> = Vec::new();
        let mut index: HashMap<PixelShape, usize> = HashMap::new();
        let mut pieces = Vec::new();
        let mut shape_ids = Vec::new();
        for (si, shape) in shapes.into_iter().enumerate() {
            if shape.variants.is_empty() {
                return Err(ProblemError::NoOrientations(shape.id));
            }
            let mut variants: Vec<(i32, usize)> = shape
                .variants
                .into_iter()
                .map(|(deg, px)| {
                    let class = *index.entry(px.clone()).or_insert_with(|| {
                        classes.push(ShapeClass {
                            scanline: encode(&px),
                            pixels: px,
                        });
                        classes.len() - 1
                    });
                    (deg, class)
                })
                .collect();
            // 0 degrees first so that variant 0 is the construction orientation
            if let Some(zero) = variants.iter().position(|&(d, _)| d.rem_euclid(360) == 0) {
                variants[..=zero].rotate_right(1);
            }
            for _ in 0..shape.count {
                pieces.push(Piece {
                    shape: si,
                    variants: variants.clone(),
                });
            }
            shape_ids.push(shape.id);
        }
        if pieces.is_empty() {
            return Err(ProblemError::NoPieces);
        }

        // A class pair needs an NFP when two distinct pieces can carry it.
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
        for (p, piece) in pieces.iter().enumerate() {
            for &(_, c) in &piece.variants {
                let u = &mut users[c];
                if u.len() < 2 && !u.contains(&p) {
                    u.push(p);
                }
            }
        }
        let started = Instant::now();
        let scanlines: Vec<DoubleScanline> = classes.iter().map(|c| c.scanline.clone()).collect();
        let nfps = NfpTable::build(&scanlines, |a, b| {
            users[a].iter().any(|j| users[b].iter().any(|k| j != k))
        });
        let nfp_time = started.elapsed();

        Ok(Problem {
            name: name.to_string(),
            width,
            scale: 1.0,
            shape_ids,
            classes,
            pieces,
            nfps,
            raster_time: Duration::ZERO,
            nfp_time,
        })
    }

    /// Container width `W` in pixels.
    pub fn width(&self) -> i32 {
        self.width
    }

    /// Pixels per model unit.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn piece(&self, i: usize) -> &Piece {
        &self.pieces[i]
    }

    pub fn classes(&self) -> &[ShapeClass] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &ShapeClass {
        &self.classes[c]
    }

    pub fn shape_id(&self, piece: usize) -> &str {
        &self.shape_ids[self.pieces[piece].shape]
    }

    pub fn shape_ids(&self) -> &[String] {
        &self.shape_ids
    }

    /// Class of piece `i` at orientation index `o`.
    #[inline]
    pub fn class_of(&self, i: usize, o: usize) -> usize {
        self.pieces[i].variants[o].1
    }

    #[inline]
    pub fn degrees_of(&self, i: usize, o: usize) -> i32 {
        self.pieces[i].variants[o].0
    }

    /// `NFP(class a, class b)`.
    #[inline]
    pub fn nfp(&self, a: usize, b: usize) -> &Nfp {
        self.nfps.get(a, b)
    }

    pub fn nfp_table(&self) -> &NfpTable {
        &self.nfps
    }

    /// Rasterization plus NFP construction time.
    pub fn preprocessing_time(&self) -> Duration {
        self.raster_time + self.nfp_time
    }

    /// Orientation indices of piece `i` that fit the container width.
    pub fn fitting_orientations(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let w = self.width;
        self.pieces[i]
            .variants
            .iter()
            .enumerate()
            .filter(move |(_, &(_, c))| self.classes[c].width() <= w)
            .map(|(o, _)| o)
    }

    /// No feasible layout is shorter than this: the longest unavoidable
    /// piece length, and the total area divided by the width.
    pub fn lower_bound(&self) -> i32 {
        let mut longest = 1;
        let mut area: u64 = 0;
        for i in 0..self.pieces.len() {
            let fit: Vec<&ShapeClass> = self
                .fitting_orientations(i)
                .map(|o| &self.classes[self.class_of(i, o)])
                .collect();
            if fit.is_empty() {
                continue;
            }
            longest = longest.max(fit.iter().map(|c| c.length()).min().unwrap());
            area += fit.iter().map(|c| c.area()).min().unwrap();
        }
        longest.max(area.div_ceil(self.width as u64) as i32)
    }

    /// Total cell count of a layout's pieces at their chosen orientations.
    pub fn placed_area(&self, orientations: &[usize]) -> u64 {
        orientations
            .iter()
            .enumerate()
            .map(|(i, &o)| self.classes[self.class_of(i, o)].area())
            .sum()
    }

    /// Absolute cells of piece `i` at orientation `o` with reference `v`.
    pub fn cells_at(&self, i: usize, o: usize, v: Point) -> impl Iterator<Item = Point> + '_ {
        self.classes[self.class_of(i, o)].pixels.offsets().map(move |p| p + v)
    }
}
