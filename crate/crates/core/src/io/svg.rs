//! SVG rendering of a placed layout. Each piece becomes a `<g>` of
//! rectangles covering exactly its cells; y grows upwards in the drawing.

use std::fmt::Write;

use thiserror::Error;

use crate::geometry::Axis;
use crate::omp::Layout;
use crate::problem::Problem;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("nothing to render: the layout has no pieces")]
    Empty,
    #[error("layout has {0} pieces but the instance has {1}")]
    PieceCount(usize, usize),
}

fn fnv1a(s: &str) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for b in s.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// Stable fill colour for a shape id.
pub fn shape_color(id: &str) -> String {
    let h = fnv1a(id);
    format!("hsl({}, {}%, {}%)", h % 360, 45 + (h >> 9) % 30, 50 + (h >> 17) % 20)
}

/// Rectangles `(x, y, w, h)` covering the cells of a row-strip set: equal
/// strips on consecutive rows are merged.
fn cover(rows: &crate::geometry::Scanlines) -> Vec<(i32, i32, i32, i32)> {
    let mut done = Vec::new();
    let mut open: Vec<(i32, i32, i32, i32)> = Vec::new();
    for (y, strips) in rows.lines() {
        let mut next = Vec::with_capacity(strips.len());
        for s in strips {
            match open
                .iter()
                .position(|r| r.0 == s.start && r.2 == s.len() && r.1 + r.3 == y)
            {
                Some(i) => {
                    let mut r = open.swap_remove(i);
                    r.3 += 1;
                    next.push(r);
                }
                None => next.push((s.start, y, s.len(), 1)),
            }
        }
        done.append(&mut open);
        open = next;
    }
    done.append(&mut open);
    done.sort_unstable_by_key(|r| (r.1, r.0));
    done
}

/// Renders `layout` into an SVG document.
pub fn render_svg(problem: &Problem, layout: &Layout) -> Result<String, RenderError> {
    if layout.is_empty() {
        return Err(RenderError::Empty);
    }
    if layout.len() != problem.piece_count() {
        return Err(RenderError::PieceCount(layout.len(), problem.piece_count()));
    }
    let (w, l) = (problem.width(), layout.length);
    let zoom = (1024 / l.max(w)).clamp(1, 16);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {l} {w}" shape-rendering="crispEdges">"#,
        l * zoom,
        w * zoom
    )
    .unwrap();
    writeln!(
        out,
        r#"  <rect class="container" x="0" y="0" width="{l}" height="{w}" fill="white" stroke="black" stroke-width="0.5"/>"#
    )
    .unwrap();
    for i in 0..layout.len() {
        let id = problem.shape_id(i);
        let class = problem.class(problem.class_of(i, layout.orientations[i]));
        let v = layout.positions[i];
        writeln!(
            out,
            r#"  <g class="piece" data-piece="{i}" data-shape="{id}" data-degrees="{}" fill="{}">"#,
            problem.degrees_of(i, layout.orientations[i]),
            shape_color(id)
        )
        .unwrap();
        for (x, y, rw, rh) in cover(class.scanline.lines(Axis::Horizontal)) {
            let (ax, ay) = (x + v.x, y + v.y);
            writeln!(
                out,
                r#"    <rect x="{ax}" y="{}" width="{rw}" height="{rh}"/>"#,
                w - (ay + rh)
            )
            .unwrap();
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{encode, PixelShape, Point};
    use crate::problem::RasterShape;

    fn rect_area(svg: &str) -> Vec<u64> {
        // per piece group, the summed rect area
        svg.split("<g ")
            .skip(1)
            .map(|g| {
                g.split("<rect ")
                    .skip(1)
                    .map(|r| {
                        let attr = |name: &str| -> u64 {
                            let key = format!("{name}=\"");
                            let s = &r[r.find(&key).unwrap() + key.len()..];
                            s[..s.find('"').unwrap()].parse().unwrap()
                        };
                        attr("width") * attr("height")
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn one_square() {
        let p = Problem::from_rasters(
            "one",
            4,
            vec![RasterShape {
                id: "sq".into(),
                count: 1,
                variants: vec![(0, PixelShape::rectangle(4, 4))],
            }],
        )
        .unwrap();
        let l = Layout {
            positions: vec![Point::new(2, 2)],
            orientations: vec![0],
            length: 4,
        };
        let svg = render_svg(&p, &l).unwrap();
        assert_eq!(svg.matches("<rect ").count(), 2);
        assert_eq!(render_svg(&p, &l).unwrap(), svg);
    }

    #[test]
    fn cell_counts_match() {
        let u = PixelShape::from_cells([
            Point::new(0, 0),
            Point::new(1, 0),
            Point::new(2, 0),
            Point::new(0, 1),
            Point::new(2, 1),
        ])
        .unwrap();
        let rows = encode(&u);
        let total: i32 = cover(rows.rows()).iter().map(|r| r.2 * r.3).sum();
        assert_eq!(total, 5);
        let p = Problem::from_rasters(
            "u",
            6,
            vec![RasterShape {
                id: "u".into(),
                count: 2,
                variants: vec![(0, u.clone())],
            }],
        )
        .unwrap();
        let l = Layout {
            positions: vec![Point::new(1, 1), Point::new(4, 4)],
            orientations: vec![0, 0],
            length: 6,
        };
        assert_eq!(rect_area(&render_svg(&p, &l).unwrap()), vec![5, 5]);
    }

    #[test]
    fn empty_layout_is_an_error() {
        let p = Problem::from_rasters(
            "one",
            4,
            vec![RasterShape {
                id: "sq".into(),
                count: 1,
                variants: vec![(0, PixelShape::rectangle(1, 1))],
            }],
        )
        .unwrap();
        let l = Layout {
            positions: vec![],
            orientations: vec![],
            length: 0,
        };
        assert_eq!(render_svg(&p, &l), Err(RenderError::Empty));
    }

    #[test]
    fn colors_are_stable() {
        assert_eq!(shape_color("piece-a"), shape_color("piece-a"));
        assert_ne!(shape_color("piece-a"), shape_color("piece-b"));
    }
}
