//! Coordinate tables for the catalog prototiles.
//!
//! Lattice unit: the P2 long edge, the P3 rhomb edge and the HBS edge all
//! have length 1 here, so a kite axis, a rhomb edge and an HBS edge coincide
//! when one tiling is drawn over another at the same scale.

use crate::golden::CycloPoint;
use crate::tiling::{EdgeMark, EdgeStyle, TileKind, VertexMark};

pub(crate) type ShapeDef = (TileKind, Vec<CycloPoint>, Vec<EdgeMark>, Vec<VertexMark>);

pub(crate) fn z(k: i32) -> CycloPoint {
    CycloPoint::zeta_pow(k)
}

pub(crate) fn phi(p: CycloPoint) -> CycloPoint {
    p.scale_phi()
}

pub(crate) fn phi_inv(p: CycloPoint) -> CycloPoint {
    p.scale_phi_inv()
}

fn plain(n: usize) -> Vec<EdgeMark> {
    vec![EdgeMark::NONE; n]
}

fn unmarked(n: usize) -> Vec<VertexMark> {
    vec![VertexMark::None; n]
}

pub(crate) fn definitions() -> Vec<ShapeDef> {
    use EdgeStyle::*;
    use VertexMark::*;
    let one = CycloPoint::ONE;
    let mut defs: Vec<ShapeDef> = vec![
        // P2: tip T, wing W, head H. The axis T-H carries the kite arrow toward H.
        (
            TileKind::HalfKite,
            vec![CycloPoint::ZERO, one, z(1)],
            vec![EdgeMark::NONE, EdgeMark::NONE, EdgeMark::new(HbsArrow, -1)],
            vec![DiskBlack, DiskBlank, DiskBlack],
        ),
        // tip T, wing W, reflex R; the axis T-R is the seam
        (
            TileKind::HalfDart,
            vec![CycloPoint::ZERO, one, phi_inv(z(1))],
            vec![EdgeMark::NONE, EdgeMark::NONE, EdgeMark::new(Seam, -1)],
            vec![DiskBlank, DiskBlack, DiskBlank],
        ),
        // P3 thin half: acute O, double-arrow corner P, single-arrow corner Q
        (
            TileKind::HalfThin,
            vec![CycloPoint::ZERO, one, z(1)],
            vec![
                EdgeMark::new(ArrowDouble, 1),
                EdgeMark::new(Seam, 1),
                EdgeMark::new(ArrowSingle, -1),
            ],
            unmarked(3),
        ),
        // P3 fat half: single-arrow acute U, obtuse X, double-arrow acute V
        (
            TileKind::HalfFat,
            vec![CycloPoint::ZERO, one, phi(z(1))],
            vec![
                EdgeMark::new(ArrowSingle, 1),
                EdgeMark::new(ArrowDouble, 1),
                EdgeMark::new(Seam, -1),
            ],
            unmarked(3),
        ),
    ];
    defs.extend(crate::shapes_derived::definitions());
    let _ = (plain(0), unmarked(0));
    defs
}
