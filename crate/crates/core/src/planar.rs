//! Faces of straight-line graphs on the lattice, and matching of polygons
//! against prototiles.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::golden::{CycloPoint, Isometry};
use crate::tiling::{angle_cmp, prototile, shoelace2, Segment, Tile, TileKind};

/// An undirected straight-line graph with lattice vertices.
#[derive(Clone, Debug, Default)]
pub struct SegmentGraph {
    segments: BTreeSet<Segment>,
}

impl SegmentGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, a: CycloPoint, b: CycloPoint) {
        if a != b {
            self.segments.insert(crate::tiling::segment(a, b));
        }
    }

    pub fn remove(&mut self, a: CycloPoint, b: CycloPoint) {
        self.segments.remove(&crate::tiling::segment(a, b));
    }

    pub fn contains(&self, a: CycloPoint, b: CycloPoint) -> bool {
        self.segments.contains(&crate::tiling::segment(a, b))
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Bounded faces as counterclockwise vertex cycles. Assumes segments
    /// meet only at endpoints.
    pub fn faces(&self) -> Vec<Vec<CycloPoint>> {
        let mut adj: HashMap<CycloPoint, Vec<CycloPoint>> = HashMap::new();
        for &(a, b) in &self.segments {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        for (v, ns) in adj.iter_mut() {
            let v = *v;
            ns.sort_by(|&p, &q| angle_cmp(p - v, q - v));
        }
        let mut used: HashSet<(CycloPoint, CycloPoint)> = HashSet::new();
        let mut darts: Vec<(CycloPoint, CycloPoint)> = self
            .segments
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .collect();
        darts.sort();
        let mut faces = Vec::new();
        for start in darts {
            if used.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                used.insert(cur);
                cycle.push(cur.0);
                let (u, v) = cur;
                // next edge: the one just clockwise of v->u around v
                let ns = &adj[&v];
                let i = ns.iter().position(|&w| w == u).expect("reverse edge exists");
                let w = ns[(i + ns.len() - 1) % ns.len()];
                cur = (v, w);
                if cur == start {
                    break;
                }
            }
            if shoelace2(&cycle).is_positive() {
                faces.push(cycle);
            }
        }
        faces
    }
}

/// Drops vertices where the boundary goes straight on.
pub fn simplify(poly: &[CycloPoint]) -> Vec<CycloPoint> {
    let n = poly.len();
    (0..n)
        .filter(|&i| {
            let prev = poly[(i + n - 1) % n];
            let next = poly[(i + 1) % n];
            let cur = poly[i];
            !(cur - prev).cross(next - cur).is_zero()
        })
        .map(|i| poly[i])
        .collect()
}

/// Every placement of a prototile from `kinds` whose outline is the
/// counterclockwise polygon `ccw`. Shapes with more geometric than marked
/// symmetry yield several candidates; callers pick by marks.
pub fn match_polygon(ccw: &[CycloPoint], kinds: &[TileKind]) -> Vec<Tile> {
    let n = ccw.len();
    let mut out = Vec::new();
    for &kind in kinds {
        let proto = prototile(kind);
        if proto.boundary.len() != n {
            continue;
        }
        for s in 0..n {
            for rev in [false, true] {
                let dst: Vec<CycloPoint> = (0..n)
                    .map(|i| if rev { ccw[(s + n - i) % n] } else { ccw[(s + i) % n] })
                    .collect();
                if let Some(iso) = Isometry::fit(&proto.boundary, &dst) {
                    let t = Tile::new(kind, iso);
                    if !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i32) -> CycloPoint {
        CycloPoint::zeta_pow(k)
    }

    #[test]
    fn square_grid_of_rhombs() {
        // two thin rhombs sharing an edge
        let mut g = SegmentGraph::new();
        let (o, a, b) = (CycloPoint::ZERO, z(0), z(1));
        g.add(o, a);
        g.add(a, a + b);
        g.add(a + b, b);
        g.add(b, o);
        g.add(a, a + z(0));
        g.add(a + z(0), a + z(0) + b);
        g.add(a + z(0) + b, a + b);
        let faces = g.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn matches_half_kite() {
        let t = Tile::new(TileKind::HalfKite, Isometry::new(3, true, z(2) + z(0)));
        let mut pts = t.vertices();
        if t.pose.reflected {
            pts.reverse();
        }
        pts.rotate_left(1);
        let found = match_polygon(&pts, &[TileKind::HalfDart, TileKind::HalfKite]);
        // isosceles outline: the marks decide between two placements
        assert_eq!(found.len(), 2);
        assert!(found.contains(&t));
    }

    #[test]
    fn simplify_drops_straight_vertices() {
        let sq = [CycloPoint::ZERO, z(0), z(0) + z(0), z(0) + z(0) + z(2), z(2)];
        assert_eq!(simplify(&sq).len(), 4);
    }
}

/// Float-bucketed point set for radius queries; exact tests are left to
/// the caller.
#[derive(Clone, Debug)]
pub struct PointGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<CycloPoint>>,
}

impl PointGrid {
    pub fn new(points: impl IntoIterator<Item = CycloPoint>, cell: f64) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<CycloPoint>> = HashMap::new();
        for p in points {
            let (x, y) = p.to_f64(0);
            buckets
                .entry(((x / cell).floor() as i64, (y / cell).floor() as i64))
                .or_default()
                .push(p);
        }
        PointGrid { cell, buckets }
    }

    /// Points within float distance `r` of `q` (plus a small slack).
    pub fn near(&self, q: CycloPoint, r: f64) -> Vec<CycloPoint> {
        let (x, y) = q.to_f64(0);
        let r = r + 1e-9;
        let span = (r / self.cell).ceil() as i64;
        let (cx, cy) = ((x / self.cell).floor() as i64, (y / self.cell).floor() as i64);
        let mut out = Vec::new();
        for i in cx - span..=cx + span {
            for j in cy - span..=cy + span {
                if let Some(b) = self.buckets.get(&(i, j)) {
                    out.extend(b.iter().copied().filter(|p| {
                        let (px, py) = p.to_f64(0);
                        (px - x).hypot(py - y) <= r
                    }));
                }
            }
        }
        out
    }

    /// Points inside or on the polygon.
    pub fn in_polygon(&self, ccw: &[CycloPoint]) -> Vec<CycloPoint> {
        let fl: Vec<(f64, f64)> = ccw.iter().map(|p| p.to_f64(0)).collect();
        let (cx, cy) = fl.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let c = (cx / fl.len() as f64, cy / fl.len() as f64);
        let r = fl.iter().map(|p| (p.0 - c.0).hypot(p.1 - c.1)).fold(0.0, f64::max);
        let (x0, y0) = ((c.0 - r) / self.cell, (c.1 - r) / self.cell);
        let (x1, y1) = ((c.0 + r) / self.cell, (c.1 + r) / self.cell);
        let mut out = Vec::new();
        for i in x0.floor() as i64..=x1.floor() as i64 {
            for j in y0.floor() as i64..=y1.floor() as i64 {
                if let Some(b) = self.buckets.get(&(i, j)) {
                    out.extend(
                        b.iter()
                            .copied()
                            .filter(|&p| crate::tiling::point_in_polygon(ccw, p).is_ge()),
                    );
                }
            }
        }
        out
    }
}
