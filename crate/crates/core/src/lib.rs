//! Irregular strip packing on rasterized shapes.
//!
//! Pieces are rasterized onto an integer grid and stored as double
//! scanlines (row strips plus column strips). Overlap between two pieces is
//! read off their raster no-fit polygon, and layouts are improved by
//! coordinate descent under guided local search while the container length
//! shrinks.
//!
//! ```
//! use rasternest::geometry::{PixelShape, Point};
//! use rasternest::nfp::build_nfp;
//!
//! let block = PixelShape::rectangle(3, 3);
//! let nfp = build_nfp(&block, &block);
//! assert!(nfp.contains(Point::new(2, 2)));
//! assert_eq!(nfp.pair_penalty(Point::new(0, 0)), 3);
//! ```

pub mod geometry;
pub mod io;
pub mod isp;
pub mod nfp;
pub mod omp;
pub mod oracle;
pub mod problem;
