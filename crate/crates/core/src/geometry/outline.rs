use super::GeometryError;

/// Chain closure tolerance, in model units (scaled by the magnitude of the
/// coordinates involved so large instances are not penalised for rounding).
const CLOSURE_TOLERANCE: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    fn dist(self, other: Vec2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn rotated_about(self, pivot: Vec2, cos: f64, sin: f64) -> Vec2 {
        let dx = self.x - pivot.x;
        let dy = self.y - pivot.y;
        Vec2::new(pivot.x + dx * cos - dy * sin, pivot.y + dx * sin + dy * cos)
    }

    fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// One boundary element. Each segment starts where the previous one ended.
#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Line {
        to: Vec2,
    },
    /// Circular arc from `start_deg` to `end_deg`, counter-clockwise when `ccw`.
    /// Equal start and end angles describe a full circle.
    Arc {
        center: Vec2,
        radius: f64,
        start_deg: f64,
        end_deg: f64,
        ccw: bool,
    },
}

impl Segment {
    fn arc_sweep(start_deg: f64, end_deg: f64, ccw: bool) -> f64 {
        let mut sweep = (end_deg - start_deg).rem_euclid(360.0);
        if sweep == 0.0 {
            sweep = 360.0;
        }
        if ccw {
            sweep
        } else {
            sweep - 360.0
        }
    }

    fn end_point(&self) -> Vec2 {
        match *self {
            Segment::Line { to } => to,
            Segment::Arc {
                center,
                radius,
                end_deg,
                ..
            } => {
                let a = end_deg.to_radians();
                Vec2::new(center.x + radius * a.cos(), center.y + radius * a.sin())
            }
        }
    }
}

/// A closed boundary made of lines and circular arcs, with optional holes.
#[derive(Clone, Debug, PartialEq)]
pub struct Outline {
    pub start: Vec2,
    pub segments: Vec<Segment>,
    pub holes: Vec<Outline>,
}

impl Outline {
    /// Closed polygon through `points`; the closing edge is implicit.
    pub fn polygon(points: &[Vec2]) -> Outline {
        let start = points.first().copied().unwrap_or_default();
        let mut segments: Vec<Segment> = points.iter().skip(1).map(|&to| Segment::Line { to }).collect();
        if points.len() > 1 && points.last() != points.first() {
            segments.push(Segment::Line { to: start });
        }
        Outline {
            start,
            segments,
            holes: Vec::new(),
        }
    }

    pub fn with_holes(mut self, holes: Vec<Outline>) -> Outline {
        self.holes = holes;
        self
    }

    /// Checks closure, arc continuity, positive area, hole containment and
    /// hole depth.
    pub fn validate(&self) -> Result<(), GeometryError> {
        self.validate_ring()?;
        let outer = self.flatten_ring(self.validation_tolerance());
        for (index, hole) in self.holes.iter().enumerate() {
            if !hole.holes.is_empty() {
                return Err(GeometryError::NestedHole { index });
            }
            hole.validate_ring()?;
            let ring = hole.flatten_ring(self.validation_tolerance());
            if !ring.iter().all(|&p| strictly_inside(&outer, p)) {
                return Err(GeometryError::HoleOutside { index });
            }
        }
        Ok(())
    }

    fn validation_tolerance(&self) -> f64 {
        let (lo, hi) = self.bounds();
        ((hi.x - lo.x).max(hi.y - lo.y) * 1e-3).max(1e-9)
    }

    fn validate_ring(&self) -> Result<(), GeometryError> {
        if self.segments.is_empty() {
            return Err(GeometryError::NoSegments);
        }
        if !self.start.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let mut current = self.start;
        for (index, seg) in self.segments.iter().enumerate() {
            match *seg {
                Segment::Line { to } => {
                    if !to.is_finite() {
                        return Err(GeometryError::NonFinite);
                    }
                }
                Segment::Arc {
                    center,
                    radius,
                    start_deg,
                    end_deg,
                    ..
                } => {
                    if !(radius.is_finite() && radius > 0.0)
                        || !center.is_finite()
                        || !start_deg.is_finite()
                        || !end_deg.is_finite()
                    {
                        return Err(GeometryError::InvalidArc { index });
                    }
                    let a = start_deg.to_radians();
                    let arc_start = Vec2::new(center.x + radius * a.cos(), center.y + radius * a.sin());
                    let gap = arc_start.dist(current);
                    if gap > tolerance_at(current) {
                        return Err(GeometryError::DisconnectedArc { index, gap });
                    }
                }
            }
            current = seg.end_point();
        }
        let gap = current.dist(self.start);
        if gap > tolerance_at(self.start) {
            return Err(GeometryError::OpenOutline { gap });
        }
        let ring = self.flatten_ring(self.validation_tolerance());
        if signed_area(&ring).abs() <= f64::EPSILON {
            return Err(GeometryError::ZeroArea);
        }
        Ok(())
    }

    /// Polyline approximation of this ring (holes excluded). Arcs are split so
    /// the chord deviation stays at or below `tolerance`.
    pub fn flatten_ring(&self, tolerance: f64) -> Vec<Vec2> {
        let mut pts = vec![self.start];
        for seg in &self.segments {
            match *seg {
                Segment::Line { to } => pts.push(to),
                Segment::Arc {
                    center,
                    radius,
                    start_deg,
                    end_deg,
                    ccw,
                } => {
                    let sweep = Segment::arc_sweep(start_deg, end_deg, ccw).to_radians();
                    let max_step = if tolerance >= radius {
                        std::f64::consts::FRAC_PI_2
                    } else {
                        2.0 * (1.0 - tolerance / radius).acos()
                    };
                    let steps = ((sweep.abs() / max_step).ceil() as usize).max(1);
                    let a0 = start_deg.to_radians();
                    for i in 1..=steps {
                        let a = a0 + sweep * i as f64 / steps as f64;
                        pts.push(Vec2::new(center.x + radius * a.cos(), center.y + radius * a.sin()));
                    }
                }
            }
        }
        // the closing point duplicates the start
        if pts.len() > 1 && pts.last().map(|p| p.dist(self.start) <= tolerance_at(self.start)) == Some(true) {
            pts.pop();
        }
        pts
    }

    /// Axis-aligned bounds of the outer ring, counting arc extremes.
    pub fn bounds(&self) -> (Vec2, Vec2) {
        let mut lo = self.start;
        let mut hi = self.start;
        let mut grow = |p: Vec2| {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        };
        for seg in &self.segments {
            match *seg {
                Segment::Line { to } => grow(to),
                Segment::Arc { center, radius, .. } => {
                    // conservative: full circle box
                    grow(Vec2::new(center.x - radius, center.y - radius));
                    grow(Vec2::new(center.x + radius, center.y + radius));
                }
            }
        }
        (lo, hi)
    }

    /// Rotates the outline counter-clockwise by `degrees` about `pivot`.
    pub fn rotated(&self, degrees: f64, pivot: Vec2) -> Outline {
        let (sin, cos) = degrees.to_radians().sin_cos();
        let segments = self
            .segments
            .iter()
            .map(|seg| match *seg {
                Segment::Line { to } => Segment::Line {
                    to: to.rotated_about(pivot, cos, sin),
                },
                Segment::Arc {
                    center,
                    radius,
                    start_deg,
                    end_deg,
                    ccw,
                } => Segment::Arc {
                    center: center.rotated_about(pivot, cos, sin),
                    radius,
                    start_deg: start_deg + degrees,
                    end_deg: end_deg + degrees,
                    ccw,
                },
            })
            .collect();
        Outline {
            start: self.start.rotated_about(pivot, cos, sin),
            segments,
            holes: self.holes.iter().map(|h| h.rotated(degrees, pivot)).collect(),
        }
    }

    /// Uniformly scaled copy.
    pub fn scaled(&self, factor: f64) -> Outline {
        let s = |p: Vec2| Vec2::new(p.x * factor, p.y * factor);
        Outline {
            start: s(self.start),
            segments: self
                .segments
                .iter()
                .map(|seg| match *seg {
                    Segment::Line { to } => Segment::Line { to: s(to) },
                    Segment::Arc {
                        center,
                        radius,
                        start_deg,
                        end_deg,
                        ccw,
                    } => Segment::Arc {
                        center: s(center),
                        radius: radius * factor,
                        start_deg,
                        end_deg,
                        ccw,
                    },
                })
                .collect(),
            holes: self.holes.iter().map(|h| h.scaled(factor)).collect(),
        }
    }

    pub fn arc_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Arc { .. }))
            .count()
    }
}

fn tolerance_at(p: Vec2) -> f64 {
    CLOSURE_TOLERANCE * p.x.abs().max(p.y.abs()).max(1.0)
}

pub(crate) fn signed_area(ring: &[Vec2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        * 0.5
}

fn strictly_inside(ring: &[Vec2], p: Vec2) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        // on an edge counts as not strictly inside
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if cross.abs() <= 1e-12 * (1.0 + a.dist(b))
            && p.x >= a.x.min(b.x) - 1e-12
            && p.x <= a.x.max(b.x) + 1e-12
            && p.y >= a.y.min(b.y) - 1e-12
            && p.y <= a.y.max(b.y) + 1e-12
        {
            return false;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if x > p.x {
                inside = !inside;
            }
        }
    }
    inside
}
