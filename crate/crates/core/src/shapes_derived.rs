//! Outlines of the derived tilesets: HBS, Star, P1 and Gemstones.

use crate::golden::CycloPoint;
use crate::shapes::ShapeDef;
use crate::tiling::{direction_steps, unit_direction, EdgeMark, EdgeStyle, TileKind, VertexMark};

/// Walks a polygon from the origin along direction 0, turning so that the
/// interior angles (18° steps) are `angles`, vertex 0 first. Edges along
/// even directions have length 1, odd ones 2·sin 72°.
pub(crate) fn from_angles(angles: &[u8]) -> Vec<CycloPoint> {
    let mut pts = Vec::with_capacity(angles.len());
    let mut cur = CycloPoint::ZERO;
    let mut dir = 0i32;
    for i in 0..angles.len() {
        pts.push(cur);
        cur = cur + unit_direction(dir);
        dir += 10 - angles[(i + 1) % angles.len()] as i32;
    }
    assert!(cur.is_zero(), "angles {angles:?} do not close");
    pts
}

const HEXAGON: [u8; 6] = [4, 8, 8, 4, 8, 8];
const BOAT: [u8; 8] = [4, 8, 8, 8, 4, 12, 4, 12];
const STAR: [u8; 10] = [4, 12, 4, 12, 4, 12, 4, 12, 4, 12];

/// Vertex labels of the Star tileset, vertex 0 first.
pub(crate) const STAR_HEXAGON_LABELS: [u8; 6] = [0, 1, 2, 0, 2, 1];
pub(crate) const STAR_BOAT_LABELS: [u8; 8] = [0, 1, 2, 1, 0, 2, 1, 2];
// tips are the even vertices; S_i has i red tips, never two adjacent ones
pub(crate) const STAR_S0_LABELS: [u8; 10] = [1, 2, 1, 2, 1, 2, 1, 2, 1, 2];
pub(crate) const STAR_S1_LABELS: [u8; 10] = [0, 2, 1, 2, 1, 2, 1, 2, 1, 2];
pub(crate) const STAR_S2_LABELS: [u8; 10] = [0, 2, 1, 2, 0, 2, 1, 2, 1, 2];

/// Arrows pointing from the smaller label to the larger one.
fn arrows_from_labels(labels: &[u8]) -> Vec<EdgeMark> {
    let n = labels.len();
    (0..n)
        .map(|i| {
            let (a, b) = (labels[i], labels[(i + 1) % n]);
            assert_ne!(a, b, "adjacent labels must differ");
            EdgeMark::new(EdgeStyle::HbsArrow, if b > a { 1 } else { -1 })
        })
        .collect()
}

pub(crate) fn definitions() -> Vec<ShapeDef> {
    let mut out = Vec::new();
    // HBS tiles carry the arrows of the Star tiles with the labels dropped
    for (kind, angles, labels) in [
        (TileKind::Hexagon, &HEXAGON[..], &STAR_HEXAGON_LABELS[..]),
        (TileKind::Boat, &BOAT[..], &STAR_BOAT_LABELS[..]),
        (TileKind::Star, &STAR[..], &STAR_S0_LABELS[..]),
    ] {
        out.push((kind, from_angles(angles), arrows_from_labels(labels), vec![VertexMark::None; angles.len()]));
    }
    for (kind, angles, labels) in [
        (TileKind::StarHexagon, &HEXAGON[..], &STAR_HEXAGON_LABELS[..]),
        (TileKind::StarBoat, &BOAT[..], &STAR_BOAT_LABELS[..]),
        (TileKind::StarS0, &STAR[..], &STAR_S0_LABELS[..]),
        (TileKind::StarS1, &STAR[..], &STAR_S1_LABELS[..]),
        (TileKind::StarS2, &STAR[..], &STAR_S2_LABELS[..]),
    ] {
        let marks = labels.iter().map(|&l| VertexMark::Label(l)).collect();
        out.push((kind, from_angles(angles), arrows_from_labels(labels), marks));
    }
    // P1: what the corner pentagons leave of each HBS shape
    for (kind, angles) in [
        (TileKind::Diamond, &HEXAGON[..]),
        (TileKind::P1Boat, &BOAT[..]),
        (TileKind::P1Star, &STAR[..]),
    ] {
        let core = p1_core(&from_angles(angles));
        let o = core[0];
        let pts: Vec<CycloPoint> = core.iter().map(|&p| p - o).collect();
        let n = pts.len();
        out.push((kind, pts, vec![EdgeMark::NONE; n], vec![VertexMark::None; n]));
    }
    for kind in [TileKind::Pentagon0, TileKind::Pentagon1, TileKind::Pentagon2] {
        let pts = (0..5).map(|k| CycloPoint::PHI_INV.rotate(2 * k) - CycloPoint::PHI_INV).collect();
        out.push((kind, pts, vec![EdgeMark::NONE; 5], vec![VertexMark::None; 5]));
    }
    // Gemstones: the Star shapes with their blue vertices straightened out
    for (kind, angles, labels) in [
        (TileKind::Sapphire, &HEXAGON[..], &STAR_HEXAGON_LABELS[..]),
        (TileKind::Ruby, &BOAT[..], &STAR_BOAT_LABELS[..]),
        (TileKind::Topaz0, &STAR[..], &STAR_S0_LABELS[..]),
        (TileKind::Topaz1, &STAR[..], &STAR_S1_LABELS[..]),
        (TileKind::Topaz2, &STAR[..], &STAR_S2_LABELS[..]),
    ] {
        let (pts, marks): (Vec<CycloPoint>, Vec<VertexMark>) = from_angles(angles)
            .into_iter()
            .zip(labels)
            .filter(|(_, &l)| l != 2)
            .map(|(p, &l)| (p, VertexMark::Label(l)))
            .unzip();
        out.push((kind, pts.clone(), vec![EdgeMark::NONE; pts.len()], marks));
    }
    out
}

/// The P1 tile inside an HBS polygon (counterclockwise, edge length 1).
///
/// Each HBS vertex carries a pentagon of circumradius φ⁻¹ whose apothems
/// run along the HBS edges; removing the corner sectors leaves a diamond,
/// a boat or a star.
pub(crate) fn p1_core(ccw: &[CycloPoint]) -> Vec<CycloPoint> {
    let n = ccw.len();
    let mut out: Vec<CycloPoint> = Vec::new();
    for i in 0..n {
        let v = ccw[i];
        let dir = |p: CycloPoint| direction_steps(p - v).expect("HBS edges are lattice directions") as i32 / 2;
        let prev = dir(ccw[(i + n - 1) % n]);
        let next = dir(ccw[(i + 1) % n]);
        // pentagon vertices swept clockwise from the incoming edge
        for t in 0..(prev - next).rem_euclid(10) / 2 {
            let p = v + CycloPoint::PHI_INV.rotate(prev - 1 - 2 * t);
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// The pentagon of circumradius φ⁻¹ centred on an HBS vertex `v`, given
/// the direction (36° steps) of one HBS edge leaving it.
pub(crate) fn p1_pentagon(v: CycloPoint, edge_dir: i32) -> Vec<CycloPoint> {
    (0..5).map(|t| v + CycloPoint::PHI_INV.rotate(edge_dir + 1 + 2 * t)).collect()
}
