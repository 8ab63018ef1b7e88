//! Instance and result files, SVG rendering and NFP bitmaps.

pub mod instance;
pub mod pbm;
pub mod result;
pub mod svg;
