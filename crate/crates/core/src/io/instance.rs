//! JSON instance files.
//!
//! ```json
//! {
//!   "name": "two-squares",
//!   "container_width": 10.0,
//!   "shapes": [
//!     { "id": "sq", "count": 2, "orientations": [0, 90],
//!       "outline": { "points": [[0, 0], [4, 0], [4, 4], [0, 4]] } }
//!   ]
//! }
//! ```
//!
//! An outline is either a polygon (`points`, implicitly closed) or a path
//! (`start` plus `segments`, each `{"line": [x, y]}` or
//! `{"arc": {"center": [x, y], "radius": r, "start_deg": a, "end_deg": b, "ccw": true}}`).
//! Both forms accept `holes`, a list of outlines.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Outline, Segment, Vec2};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at `{field}` (line {line}, column {column}): {message}")]
    Parse {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid instance: {0}")]
    Validation(String),
}

/// On-disk form of an instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub container_width: f64,
    pub shapes: Vec<ShapeSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeSpec {
    pub id: String,
    pub count: u32,
    pub orientations: Vec<i32>,
    pub outline: OutlineSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutlineSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<SegmentSpec>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub holes: Vec<OutlineSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SegmentSpec {
    Line([f64; 2]),
    Arc(ArcSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub start_deg: f64,
    pub end_deg: f64,
    #[serde(default = "default_ccw")]
    pub ccw: bool,
}

fn default_ccw() -> bool {
    true
}

/// A validated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: String,
    pub container_width: f64,
    pub shapes: Vec<Shape>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Shape {
    pub id: String,
    pub count: u32,
    pub orientations: Vec<i32>,
    pub outline: Outline,
}

impl Instance {
    /// Number of pieces once counts are expanded.
    pub fn piece_count(&self) -> usize {
        self.shapes.iter().map(|s| s.count as usize).sum()
    }
}

fn vec2(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

impl OutlineSpec {
    fn to_outline(&self, ctx: &str) -> Result<Outline, InstanceError> {
        let invalid = |msg: &str| InstanceError::Validation(format!("{ctx}: {msg}"));
        let outer = match (&self.points, &self.start, &self.segments) {
            (Some(points), None, None) => {
                if points.len() < 3 {
                    return Err(invalid("a polygon needs at least 3 points"));
                }
                let pts: Vec<Vec2> = points.iter().copied().map(vec2).collect();
                Outline::polygon(&pts)
            }
            (None, Some(start), Some(segments)) => Outline {
                start: vec2(*start),
                segments: segments
                    .iter()
                    .map(|s| match s {
                        SegmentSpec::Line(to) => Segment::Line { to: vec2(*to) },
                        SegmentSpec::Arc(a) => Segment::Arc {
                            center: vec2(a.center),
                            radius: a.radius,
                            start_deg: a.start_deg,
                            end_deg: a.end_deg,
                            ccw: a.ccw,
                        },
                    })
                    .collect(),
                holes: Vec::new(),
            },
            _ => return Err(invalid("give either `points` or `start` with `segments`")),
        };
        let holes = self
            .holes
            .iter()
            .enumerate()
            .map(|(i, h)| h.to_outline(&format!("{ctx}.holes[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(outer.with_holes(holes))
    }

    /// Polygon outline with the given corners.
    pub fn polygon(points: &[[f64; 2]]) -> OutlineSpec {
        OutlineSpec {
            points: Some(points.to_vec()),
            ..OutlineSpec::default()
        }
    }
}

impl InstanceFile {
    /// Checks every invariant and converts outlines.
    pub fn validate(&self) -> Result<Instance, InstanceError> {
        let fail = |msg: String| Err(InstanceError::Validation(msg));
        if !(self.container_width.is_finite() && self.container_width > 0.0) {
            return fail(format!(
                "container_width must be positive, got {}",
                self.container_width
            ));
        }
        if self.shapes.is_empty() {
            return fail("instance has no shapes".into());
        }
        let mut seen = HashSet::new();
        let mut shapes = Vec::with_capacity(self.shapes.len());
        for (i, s) in self.shapes.iter().enumerate() {
            let ctx = format!("shapes[{i}] (id '{}')", s.id);
            if s.id.is_empty() {
                return fail(format!("shapes[{i}]: id is empty"));
            }
            if !seen.insert(s.id.as_str()) {
                return fail(format!("{ctx}: duplicate id"));
            }
            if s.count == 0 {
                return fail(format!("{ctx}: count must be at least 1"));
            }
            if s.orientations.is_empty() {
                return fail(format!("{ctx}: orientations is empty"));
            }
            if !s.orientations.contains(&0) {
                return fail(format!("{ctx}: orientations must include 0"));
            }
            let mut norm: Vec<i32> = s.orientations.iter().map(|d| d.rem_euclid(360)).collect();
            norm.sort_unstable();
            norm.dedup();
            if norm.len() != s.orientations.len() {
                return fail(format!("{ctx}: orientations repeat an angle"));
            }
            let outline = s.outline.to_outline(&ctx)?;
            outline
                .validate()
                .map_err(|e| InstanceError::Validation(format!("{ctx}: {e}")))?;
            shapes.push(Shape {
                id: s.id.clone(),
                count: s.count,
                orientations: s.orientations.clone(),
                outline,
            });
        }
        Ok(Instance {
            name: self.name.clone(),
            container_width: self.container_width,
            shapes,
        })
    }
}

/// Parses and validates an instance from JSON text.
pub fn parse_instance_str(text: &str) -> Result<Instance, InstanceError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        InstanceError::Parse {
            field,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    file.validate()
}

/// Reads, parses and validates an instance file.
pub fn parse_instance(path: &Path) -> Result<Instance, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{
        "name": "one",
        "container_width": 4,
        "shapes": [{"id": "sq", "count": 1, "orientations": [0],
                    "outline": {"points": [[0,0],[1,0],[1,1],[0,1]]}}]
    }"#;

    #[test]
    fn minimal_square() {
        let inst = parse_instance_str(SQUARE).unwrap();
        assert_eq!(inst.piece_count(), 1);
        assert_eq!(inst.shapes[0].outline.segments.len(), 4);
    }

    #[test]
    fn missing_zero_orientation() {
        let text = SQUARE.replace("[0]", "[90, 180]");
        let err = parse_instance_str(&text).unwrap_err();
        assert!(
            matches!(err, InstanceError::Validation(ref m) if m.contains("include 0")),
            "{err}"
        );
    }

    #[test]
    fn parse_errors_name_the_field() {
        let text = SQUARE.replace("\"count\": 1", "\"count\": \"many\"");
        match parse_instance_str(&text).unwrap_err() {
            InstanceError::Parse { field, line, .. } => {
                assert_eq!(field, "shapes[0].count");
                assert_eq!(line, 4);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn other_violations() {
        let dup = SQUARE.replace("\"count\": 1", "\"count\": 0");
        assert!(matches!(parse_instance_str(&dup), Err(InstanceError::Validation(_))));
        let width = SQUARE.replace("\"container_width\": 4", "\"container_width\": -1");
        assert!(matches!(parse_instance_str(&width), Err(InstanceError::Validation(_))));
        let repeated = SQUARE.replace("[0]", "[0, 360]");
        assert!(matches!(
            parse_instance_str(&repeated),
            Err(InstanceError::Validation(_))
        ));
        let both = SQUARE.replace("\"points\"", "\"start\": [0,0], \"points\"");
        assert!(matches!(parse_instance_str(&both), Err(InstanceError::Validation(_))));
    }

    #[test]
    fn arc_and_hole_profile() {
        let text = r#"{
            "name": "profile",
            "container_width": 20,
            "shapes": [{
                "id": "bracket", "count": 3, "orientations": [0, 180],
                "outline": {
                    "start": [0, 0],
                    "segments": [
                        {"line": [8, 0]},
                        {"arc": {"center": [8, 3], "radius": 3, "start_deg": 270, "end_deg": 90, "ccw": true}},
                        {"line": [0, 6]},
                        {"line": [0, 0]}
                    ],
                    "holes": [{"points": [[2,2],[4,2],[4,4],[2,4]]}]
                }
            }]
        }"#;
        let inst = parse_instance_str(text).unwrap();
        assert_eq!(inst.piece_count(), 3);
        let outline = &inst.shapes[0].outline;
        assert_eq!(outline.arc_count(), 1);
        assert_eq!(outline.holes.len(), 1);
        assert_eq!(outline.holes[0].segments.len(), 4);
    }
}
