//! Conservative three-valued predicates on triangles.
//!
//! Every test reduces to the sign of an exact quadratic in `c`, decided by
//! [`CSource::sign`]. A result is only claimed when every sign it depends
//! on is certified; otherwise the answer is `Unknown`.

use crate::cform::Quadratic;
use crate::interval::RationalInterval;
use crate::precision::{CSource, Sign};

use super::{Point2, Triangle};

/// Relation between two closed triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Disjoint,
    Intersecting,
    Unknown,
}

/// Relation between the interiors of two triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InteriorRelation {
    Disjoint,
    Overlapping,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
    Unknown,
}

/// `(b − a) × (p − a)`; positive when `p` is left of `a → b`.
pub fn orientation(a: &Point2, b: &Point2, p: &Point2) -> Quadratic {
    let bx = &b.x - &a.x;
    let by = &b.y - &a.y;
    let px = &p.x - &a.x;
    let py = &p.y - &a.y;
    &(&bx * &py) - &(&by * &px)
}

/// Orientation signs of everything a pair test may look at, computed lazily.
struct PairSigns<'a> {
    t: [&'a Triangle; 2],
    c: &'a CSource,
    own: [Option<Sign>; 2],
    // cross[i][e][v]: vertex v of triangle 1-i against edge e of triangle i
    cross: [[[Option<Sign>; 3]; 3]; 2],
}

impl<'a> PairSigns<'a> {
    fn new(a: &'a Triangle, b: &'a Triangle, c: &'a CSource) -> Self {
        PairSigns {
            t: [a, b],
            c,
            own: [None; 2],
            cross: [[[None; 3]; 3]; 2],
        }
    }

    fn own(&mut self, i: usize) -> Sign {
        if let Some(s) = self.own[i] {
            return s;
        }
        let s = self.c.sign(&self.t[i].doubled_area());
        self.own[i] = Some(s);
        s
    }

    fn cross(&mut self, i: usize, edge: usize, vertex: usize) -> Sign {
        if let Some(s) = self.cross[i][edge][vertex] {
            return s;
        }
        let t = self.t[i];
        let p = &self.t[1 - i].v[vertex];
        let s = self
            .c
            .sign(&orientation(&t.v[edge], &t.v[(edge + 1) % 3], p));
        self.cross[i][edge][vertex] = Some(s);
        s
    }

    /// Edge `edge` of triangle `i` has all vertices of the other triangle
    /// strictly outside (or strictly on one side, for a degenerate `i`).
    fn strict_axis(&mut self, i: usize, edge: usize) -> Option<bool> {
        let own = self.own(i);
        let mut side = match own {
            Sign::Unknown => return None,
            Sign::Zero => None,
            s => Some(s.flip()),
        };
        let mut unknown = false;
        for v in 0..3 {
            match (self.cross(i, edge, v), side) {
                (Sign::Unknown, _) => unknown = true,
                (Sign::Zero, _) => return Some(false),
                (s, None) => side = Some(s),
                (s, Some(want)) if s != want => return Some(false),
                _ => {}
            }
        }
        if unknown {
            None
        } else {
            Some(true)
        }
    }

    /// Like `strict_axis` but vertices on the edge line are allowed.
    fn weak_axis(&mut self, i: usize, edge: usize) -> Option<bool> {
        let own = match self.own(i) {
            Sign::Positive | Sign::Negative => self.own(i),
            _ => return None,
        };
        let outer = own.flip();
        let mut unknown = false;
        for v in 0..3 {
            match self.cross(i, edge, v) {
                Sign::Unknown => unknown = true,
                Sign::Zero => {}
                s if s == outer => {}
                _ => return Some(false),
            }
        }
        if unknown {
            None
        } else {
            Some(true)
        }
    }

    /// Vertex `v` of triangle `1-i` relative to closed triangle `i`.
    fn vertex_location(&mut self, i: usize, v: usize) -> Location {
        let own = self.own(i);
        if !matches!(own, Sign::Positive | Sign::Negative) {
            return Location::Unknown;
        }
        let mut on_edge = false;
        let mut unknown = false;
        for e in 0..3 {
            match self.cross(i, e, v) {
                Sign::Unknown => unknown = true,
                Sign::Zero => on_edge = true,
                s if s == own => {}
                _ => return Location::Outside,
            }
        }
        match (unknown, on_edge) {
            (true, _) => Location::Unknown,
            (false, true) => Location::OnBoundary,
            (false, false) => Location::Inside,
        }
    }

    /// Edge `ea` of triangle 0 against edge `eb` of triangle 1:
    /// `Some(proper)` if they certainly meet, where `proper` marks a
    /// crossing at interior points of both segments.
    fn edges_meet(&mut self, ea: usize, eb: usize) -> Option<bool> {
        let s1 = self.cross(0, ea, eb);
        let s2 = self.cross(0, ea, (eb + 1) % 3);
        let s3 = self.cross(1, eb, ea);
        let s4 = self.cross(1, eb, (ea + 1) % 3);
        let all = [s1, s2, s3, s4];
        if all.contains(&Sign::Unknown) || all.iter().all(|s| *s == Sign::Zero) {
            return None;
        }
        let straddles = |x: Sign, y: Sign| x == Sign::Zero || y == Sign::Zero || x != y;
        if straddles(s1, s2) && straddles(s3, s4) {
            let proper = !all.contains(&Sign::Zero);
            Some(proper)
        } else {
            None
        }
    }
}

/// Certified relation of two closed triangles.
///
/// `Disjoint` needs an edge line of one triangle with the other strictly on
/// its outer side; `Intersecting` needs a vertex in the other closed
/// triangle or a certified edge crossing.
pub fn triangles_relation(a: &Triangle, b: &Triangle, c: &CSource) -> Relation {
    if boxes_separated(a, b, c) {
        return Relation::Disjoint;
    }
    let mut s = PairSigns::new(a, b, c);
    let mut undecided = false;
    for i in 0..2 {
        for e in 0..3 {
            match s.strict_axis(i, e) {
                Some(true) => return Relation::Disjoint,
                None => undecided = true,
                Some(false) => {}
            }
        }
    }
    for i in 0..2 {
        for v in 0..3 {
            if matches!(
                s.vertex_location(i, v),
                Location::Inside | Location::OnBoundary
            ) {
                return Relation::Intersecting;
            }
        }
    }
    for ea in 0..3 {
        for eb in 0..3 {
            if s.edges_meet(ea, eb).is_some() {
                return Relation::Intersecting;
            }
        }
    }
    // No edge line separates two non-degenerate triangles: they meet.
    let proper = matches!(s.own(0), Sign::Positive | Sign::Negative)
        && matches!(s.own(1), Sign::Positive | Sign::Negative);
    if proper && !undecided {
        return Relation::Intersecting;
    }
    Relation::Unknown
}

/// Certified relation of two open triangles.
pub fn interiors_disjoint(a: &Triangle, b: &Triangle, c: &CSource) -> InteriorRelation {
    if boxes_separated(a, b, c) {
        return InteriorRelation::Disjoint;
    }
    let mut s = PairSigns::new(a, b, c);
    for i in 0..2 {
        for e in 0..3 {
            if s.weak_axis(i, e) == Some(true) {
                return InteriorRelation::Disjoint;
            }
        }
    }
    for i in 0..2 {
        for v in 0..3 {
            if s.vertex_location(i, v) == Location::Inside {
                return InteriorRelation::Overlapping;
            }
        }
    }
    for ea in 0..3 {
        for eb in 0..3 {
            if s.edges_meet(ea, eb) == Some(true) {
                return InteriorRelation::Overlapping;
            }
        }
    }
    // Coincident or nested shapes: a centroid strictly inside the other.
    for (inner, outer) in [(a, b), (b, a)] {
        if point_in_triangle(&inner.centroid(), outer, c) == Location::Inside {
            return InteriorRelation::Overlapping;
        }
    }
    InteriorRelation::Unknown
}

/// Location of `p` relative to the closed triangle `t`.
pub fn point_in_triangle(p: &Point2, t: &Triangle, c: &CSource) -> Location {
    let own = c.sign(&t.doubled_area());
    if !matches!(own, Sign::Positive | Sign::Negative) {
        return Location::Unknown;
    }
    let mut on_edge = false;
    let mut unknown = false;
    for e in 0..3 {
        match c.sign(&orientation(&t.v[e], &t.v[(e + 1) % 3], p)) {
            Sign::Unknown => unknown = true,
            Sign::Zero => on_edge = true,
            s if s == own => {}
            _ => return Location::Outside,
        }
    }
    match (unknown, on_edge) {
        (true, _) => Location::Unknown,
        (false, true) => Location::OnBoundary,
        (false, false) => Location::Inside,
    }
}

/// `inner ⊆ outer` for closed triangles: `Some(true)` when every vertex of
/// `inner` is certified inside closed `outer`, `Some(false)` when one is
/// certified outside, `None` otherwise.
pub fn triangle_contains(outer: &Triangle, inner: &Triangle, c: &CSource) -> Option<bool> {
    let mut unknown = false;
    for p in &inner.v {
        match point_in_triangle(p, outer, c) {
            Location::Inside | Location::OnBoundary => {}
            Location::Outside => return Some(false),
            Location::Unknown => unknown = true,
        }
    }
    if unknown {
        None
    } else {
        Some(true)
    }
}

/// Axis-aligned enclosure of a triangle, `(x-range, y-range)`.
pub type BoundingBox = (RationalInterval, RationalInterval);

/// Box of `t` over the coarse enclosure of `c`, if one is available.
pub fn coarse_box(t: &Triangle, c: &CSource) -> Option<BoundingBox> {
    c.coarse_interval().map(|ci| t.bounding_box(ci))
}

/// Boxes with a strict gap along either axis.
pub fn boxes_apart(a: &BoundingBox, b: &BoundingBox) -> bool {
    a.0.hi() < b.0.lo() || b.0.hi() < a.0.lo() || a.1.hi() < b.1.lo() || b.1.hi() < a.1.lo()
}

fn boxes_separated(a: &Triangle, b: &Triangle, c: &CSource) -> bool {
    match (coarse_box(a, c), coarse_box(b, c)) {
        (Some(ba), Some(bb)) => boxes_apart(&ba, &bb),
        _ => false,
    }
}
