//! NFP dumps as binary portable bitmaps (P4).
//!
//! The header carries the NFP's bounding box as a comment,
//! `# bbox x_min y_min x_max y_max`; the first image row is `y_max`.

use crate::geometry::{Point, Rect};
use crate::nfp::Nfp;

pub fn nfp_to_pbm(nfp: &Nfp) -> Vec<u8> {
    let bb = nfp.bbox();
    let (w, h) = (bb.width() as usize, bb.height() as usize);
    let mut out = format!(
        "P4\n# bbox {} {} {} {}\n{} {}\n",
        bb.x_min, bb.y_min, bb.x_max, bb.y_max, w, h
    )
    .into_bytes();
    let row_bytes = w.div_ceil(8);
    for y in (bb.y_min..=bb.y_max).rev() {
        let mut row = vec![0u8; row_bytes];
        for s in nfp.line_strips(y, crate::geometry::Axis::Horizontal) {
            for x in s.start..=s.end {
                let i = (x - bb.x_min) as usize;
                row[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    out
}

/// Reads a bitmap written by [`nfp_to_pbm`] back into its bounding box and
/// set cells.
pub fn parse_pbm(data: &[u8]) -> Option<(Rect, Vec<Point>)> {
    let mut lines = 0;
    let mut pos = 0;
    let mut header = Vec::new();
    while lines < 3 {
        let end = pos + data[pos..].iter().position(|&b| b == b'\n')?;
        header.push(std::str::from_utf8(&data[pos..end]).ok()?.to_string());
        pos = end + 1;
        lines += 1;
    }
    if header[0] != "P4" {
        return None;
    }
    let nums: Vec<i32> = header[1]
        .strip_prefix("# bbox ")?
        .split(' ')
        .map(|s| s.parse().ok())
        .collect::<Option<_>>()?;
    let dims: Vec<usize> = header[2].split(' ').map(|s| s.parse().ok()).collect::<Option<_>>()?;
    let bbox = Rect {
        x_min: nums[0],
        y_min: nums[1],
        x_max: nums[2],
        y_max: nums[3],
    };
    let (w, h) = (dims[0], dims[1]);
    let row_bytes = w.div_ceil(8);
    let body = &data[pos..];
    if body.len() != row_bytes * h {
        return None;
    }
    let mut cells = Vec::new();
    for r in 0..h {
        for i in 0..w {
            if body[r * row_bytes + i / 8] & (0x80 >> (i % 8)) != 0 {
                cells.push(Point::new(bbox.x_min + i as i32, bbox.y_max - r as i32));
            }
        }
    }
    Some((bbox, cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PixelShape;
    use crate::nfp::build_nfp;

    #[test]
    fn round_trip() {
        let a =
            PixelShape::from_cells([Point::new(0, 0), Point::new(1, 0), Point::new(0, 1), Point::new(5, 2)]).unwrap();
        let b = PixelShape::rectangle(3, 2);
        let nfp = build_nfp(&a, &b);
        let bytes = nfp_to_pbm(&nfp);
        assert!(bytes.starts_with(b"P4\n# bbox "));
        let (bbox, mut cells) = parse_pbm(&bytes).unwrap();
        assert_eq!(bbox, nfp.bbox());
        cells.sort_unstable();
        let mut expected: Vec<Point> = nfp.scanline().rows().cells().map(|(y, x)| Point::new(x, y)).collect();
        expected.sort_unstable();
        assert_eq!(cells, expected);
    }
}
