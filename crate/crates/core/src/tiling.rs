//! Prototiles, placed tiles and patches.
//!
//! Every tile is a catalog prototile moved by an exact [`Isometry`]; a
//! [`Patch`] keeps an index from undirected lattice segments to the tile edges
//! lying on them. Overlap detection is combinatorial: a segment can carry at
//! most two tile edges and they must lie on opposite sides of it.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::golden::{CycloPoint, GoldenInt, GoldenRational, Isometry};
use crate::shapes;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tileset {
    P1,
    P2,
    P3,
    Hbs,
    Star,
    Gemstone,
}

impl Tileset {
    pub const ALL: [Tileset; 6] = [
        Tileset::P1,
        Tileset::P2,
        Tileset::P3,
        Tileset::Hbs,
        Tileset::Star,
        Tileset::Gemstone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tileset::P1 => "p1",
            Tileset::P2 => "p2",
            Tileset::P3 => "p3",
            Tileset::Hbs => "hbs",
            Tileset::Star => "star",
            Tileset::Gemstone => "gemstone",
        }
    }

    pub fn kinds(self) -> &'static [TileKind] {
        use TileKind::*;
        match self {
            Tileset::P1 => &[Pentagon0, Pentagon1, Pentagon2, Diamond, P1Boat, P1Star],
            Tileset::P2 => &[HalfKite, HalfDart],
            Tileset::P3 => &[HalfFat, HalfThin],
            Tileset::Hbs => &[Hexagon, Boat, Star],
            Tileset::Star => &[StarHexagon, StarBoat, StarS0, StarS1, StarS2],
            Tileset::Gemstone => &[Sapphire, Ruby, Topaz0, Topaz1, Topaz2],
        }
    }
}

impl fmt::Display for Tileset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tileset {
    type Err = TilingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tileset::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s) || (s.eq_ignore_ascii_case("gemstones") && *t == Tileset::Gemstone))
            .ok_or_else(|| TilingError::UnknownTileset(s.to_string()))
    }
}

/// Every prototile kind across all tilesets.
///
/// P2 and P3 use half-tiles (Robinson triangles); full kites, darts and
/// rhombs are mirror pairs glued along their seam edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    // P1
    Pentagon0,
    Pentagon1,
    Pentagon2,
    Diamond,
    P1Boat,
    P1Star,
    // P2
    HalfKite,
    HalfDart,
    // P3
    HalfFat,
    HalfThin,
    // HBS
    Hexagon,
    Boat,
    Star,
    // Star tileset
    StarHexagon,
    StarBoat,
    StarS0,
    StarS1,
    StarS2,
    // Gemstones
    Sapphire,
    Ruby,
    Topaz0,
    Topaz1,
    Topaz2,
}

impl TileKind {
    pub const ALL: [TileKind; 23] = [
        TileKind::Pentagon0,
        TileKind::Pentagon1,
        TileKind::Pentagon2,
        TileKind::Diamond,
        TileKind::P1Boat,
        TileKind::P1Star,
        TileKind::HalfKite,
        TileKind::HalfDart,
        TileKind::HalfFat,
        TileKind::HalfThin,
        TileKind::Hexagon,
        TileKind::Boat,
        TileKind::Star,
        TileKind::StarHexagon,
        TileKind::StarBoat,
        TileKind::StarS0,
        TileKind::StarS1,
        TileKind::StarS2,
        TileKind::Sapphire,
        TileKind::Ruby,
        TileKind::Topaz0,
        TileKind::Topaz1,
        TileKind::Topaz2,
    ];

    pub fn tileset(self) -> Tileset {
        use TileKind::*;
        match self {
            Pentagon0 | Pentagon1 | Pentagon2 | Diamond | P1Boat | P1Star => Tileset::P1,
            HalfKite | HalfDart => Tileset::P2,
            HalfFat | HalfThin => Tileset::P3,
            Hexagon | Boat | Star => Tileset::Hbs,
            StarHexagon | StarBoat | StarS0 | StarS1 | StarS2 => Tileset::Star,
            Sapphire | Ruby | Topaz0 | Topaz1 | Topaz2 => Tileset::Gemstone,
        }
    }

    pub fn name(self) -> &'static str {
        use TileKind::*;
        match self {
            Pentagon0 => "pentagon0",
            Pentagon1 => "pentagon1",
            Pentagon2 => "pentagon2",
            Diamond => "diamond",
            P1Boat => "boat",
            P1Star => "star",
            HalfKite => "half-kite",
            HalfDart => "half-dart",
            HalfFat => "half-fat",
            HalfThin => "half-thin",
            Hexagon => "hexagon",
            Boat => "boat",
            Star => "star",
            StarHexagon => "hexagon",
            StarBoat => "boat",
            StarS0 => "s0",
            StarS1 => "s1",
            StarS2 => "s2",
            Sapphire => "sapphire",
            Ruby => "ruby",
            Topaz0 => "topaz0",
            Topaz1 => "topaz1",
            Topaz2 => "topaz2",
        }
    }

    pub fn parse(tileset: Tileset, name: &str) -> Result<TileKind, TilingError> {
        tileset
            .kinds()
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| TilingError::UnknownKind(tileset, name.to_string()))
    }

    /// Position in [`TileKind::ALL`]; a stable small integer for tables.
    pub fn index(self) -> usize {
        TileKind::ALL.iter().position(|&k| k == self).expect("listed")
    }

    /// The HBS shape underneath a Star-tileset kind; identity elsewhere.
    pub fn hbs_shape(self) -> TileKind {
        match self {
            TileKind::StarHexagon => TileKind::Hexagon,
            TileKind::StarBoat => TileKind::Boat,
            TileKind::StarS0 | TileKind::StarS1 | TileKind::StarS2 => TileKind::Star,
            k => k,
        }
    }
}

impl fmt::Display for TileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeStyle {
    None,
    /// P3 single arrow.
    ArrowSingle,
    /// P3 double arrow.
    ArrowDouble,
    /// Kite axis / HBS edge arrow.
    HbsArrow,
    /// Internal seam between the two halves of a split tile.
    Seam,
}

/// Marking on one edge of a prototile. `direction` is `+1` when the arrow
/// runs from boundary vertex `i` to `i + 1`, `-1` for the reverse, and `0`
/// for undirected marks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeMark {
    pub style: EdgeStyle,
    pub direction: i8,
}

impl EdgeMark {
    pub const NONE: EdgeMark = EdgeMark { style: EdgeStyle::None, direction: 0 };

    pub const fn new(style: EdgeStyle, direction: i8) -> Self {
        EdgeMark { style, direction }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexMark {
    None,
    /// P2 corner colors.
    DiskBlack,
    DiskBlank,
    /// Star/Gemstone vertex labels: 0 red, 1 green, 2 blue.
    Label(u8),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("unknown tileset {0:?}")]
    UnknownTileset(String),
    #[error("tileset {0} has no kind {1:?}")]
    UnknownKind(Tileset, String),
    #[error("tile {kind} does not belong to tileset {tileset}")]
    WrongTileset { tileset: Tileset, kind: TileKind },
    #[error("duplicate tile {0:?}")]
    DuplicateTile(Tile),
    #[error("overlap on segment {0} - {1}")]
    Overlap(CycloPoint, CycloPoint),
}

#[derive(Clone, Debug)]
pub struct Prototile {
    pub tileset: Tileset,
    pub kind: TileKind,
    /// Counterclockwise boundary in canonical pose: first vertex at the
    /// origin, first edge along angle 0.
    pub boundary: Vec<CycloPoint>,
    pub edge_marks: Vec<EdgeMark>,
    pub vertex_marks: Vec<VertexMark>,
    /// Lattice area in units of sin 36°.
    pub area: GoldenRational,
    /// Interior angle at each vertex in units of 18°.
    pub angles: Vec<u8>,
    /// Isometries mapping the marked prototile onto itself.
    pub symmetries: Vec<Isometry>,
}

impl Prototile {
    fn build(
        kind: TileKind,
        boundary: Vec<CycloPoint>,
        edge_marks: Vec<EdgeMark>,
        vertex_marks: Vec<VertexMark>,
    ) -> Prototile {
        assert_eq!(boundary.len(), edge_marks.len(), "{kind}: edge marks");
        assert_eq!(boundary.len(), vertex_marks.len(), "{kind}: vertex marks");
        let area2 = shoelace2(&boundary);
        assert!(area2.is_positive(), "{kind}: boundary must be counterclockwise");
        let area = GoldenRational::from(area2);
        let area = GoldenRational::new(area.a / 2_i64.into_ratio(), area.b / 2_i64.into_ratio());
        let n = boundary.len();
        let angles = (0..n)
            .map(|i| {
                let prev = boundary[(i + n - 1) % n];
                let next = boundary[(i + 1) % n];
                let cur = boundary[i];
                interior_angle_steps(next - cur, prev - cur)
                    .unwrap_or_else(|| panic!("{kind}: angle at vertex {i} is not a multiple of 18°"))
            })
            .collect();
        let mut proto = Prototile {
            tileset: kind.tileset(),
            kind,
            boundary,
            edge_marks,
            vertex_marks,
            area,
            angles,
            symmetries: Vec::new(),
        };
        proto.symmetries = proto.compute_symmetries();
        proto
    }

    fn compute_symmetries(&self) -> Vec<Isometry> {
        let n = self.boundary.len();
        let mut out = Vec::new();
        for reflected in [false, true] {
            for shift in 0..n {
                // map vertex 0 to vertex `shift`, walking forward (or backward when reflected)
                let image: Vec<usize> = (0..n)
                    .map(|i| if reflected { (shift + n - i) % n } else { (shift + i) % n })
                    .collect();
                let dst: Vec<CycloPoint> = image.iter().map(|&j| self.boundary[j]).collect();
                let Some(iso) = Isometry::fit(&self.boundary, &dst) else {
                    continue;
                };
                let marks_ok = (0..n).all(|i| {
                    if self.vertex_marks[i] != self.vertex_marks[image[i]] {
                        return false;
                    }
                    let m = self.edge_marks[i];
                    // edge i runs from vertex i to i+1; its image runs image[i] -> image[i+1]
                    let (j, dir) = if reflected {
                        ((image[i] + n - 1) % n, -1)
                    } else {
                        (image[i], 1)
                    };
                    let mj = self.edge_marks[j];
                    m.style == mj.style && m.direction * dir == mj.direction
                });
                if marks_ok {
                    out.push(iso);
                }
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.boundary.len()
    }
}

trait IntoRatio {
    fn into_ratio(self) -> num_rational::BigRational;
}

impl IntoRatio for i64 {
    fn into_ratio(self) -> num_rational::BigRational {
        num_rational::BigRational::from_integer(self.into())
    }
}

/// Twice the signed area of a lattice polygon, in units of sin 36°.
pub fn shoelace2(points: &[CycloPoint]) -> GoldenInt {
    let n = points.len();
    (0..n).fold(GoldenInt::ZERO, |acc, i| acc + points[i].cross(points[(i + 1) % n]))
}

/// Direction of a nonzero lattice vector in multiples of 18°, if it has one.
///
/// Even steps are the ζ directions; odd steps are the bisectors `ζᵏ + ζᵏ⁺¹`
/// along which the long gemstone edges run.
pub fn direction_steps(v: CycloPoint) -> Option<u8> {
    if v.is_zero() {
        return None;
    }
    (0..20).find(|&k| {
        let u = unit_direction(k);
        v.cross(u).is_zero() && v.dot2(u).is_positive()
    }).map(|k| k as u8)
}

/// A lattice vector pointing along `k · 18°`.
pub fn unit_direction(k: i32) -> CycloPoint {
    let k = k.rem_euclid(20);
    if k % 2 == 0 {
        CycloPoint::zeta_pow(k / 2)
    } else {
        CycloPoint::zeta_pow(k / 2) + CycloPoint::zeta_pow(k / 2 + 1)
    }
}

/// Counterclockwise angle from `from` to `to`, in 18° steps (1..=20).
pub fn interior_angle_steps(from: CycloPoint, to: CycloPoint) -> Option<u8> {
    let a = direction_steps(from)? as i32;
    let b = direction_steps(to)? as i32;
    let d = (b - a).rem_euclid(20);
    Some(if d == 0 { 20 } else { d as u8 })
}

/// Exact comparison of the polar angles of two nonzero vectors in `[0, 2π)`.
pub fn angle_cmp(u: CycloPoint, v: CycloPoint) -> Ordering {
    fn half(p: CycloPoint) -> u8 {
        // 0 for angle in [0, π), 1 for [π, 2π)
        let y = CycloPoint::ONE.cross(p);
        if y.is_positive() || (y.is_zero() && CycloPoint::ONE.dot2(p).is_positive()) {
            0
        } else {
            1
        }
    }
    half(u)
        .cmp(&half(v))
        .then_with(|| GoldenInt::ZERO.cmp(&u.cross(v)))
}

fn catalog() -> &'static HashMap<TileKind, Prototile> {
    static CATALOG: OnceLock<HashMap<TileKind, Prototile>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        shapes::definitions()
            .into_iter()
            .map(|(kind, boundary, edges, vertices)| {
                (kind, Prototile::build(kind, boundary, edges, vertices))
            })
            .collect()
    })
}

/// The catalog prototile for `kind`.
pub fn prototile(kind: TileKind) -> &'static Prototile {
    &catalog()[&kind]
}

/// `canonical_prototile(tileset, kind)`.
pub fn canonical_prototile(tileset: Tileset, kind: &str) -> Result<&'static Prototile, TilingError> {
    let kind = TileKind::parse(tileset, kind)?;
    Ok(prototile(kind))
}

/// A prototile placed in the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub kind: TileKind,
    pub pose: Isometry,
}

impl Tile {
    /// Builds a tile with its pose reduced modulo the prototile's symmetries,
    /// so congruent placements of a symmetric tile compare equal.
    pub fn new(kind: TileKind, pose: Isometry) -> Tile {
        let proto = prototile(kind);
        let pose = if proto.symmetries.len() > 1 {
            proto
                .symmetries
                .iter()
                .map(|g| pose.compose(g))
                .min()
                .expect("identity is a symmetry")
        } else {
            pose
        };
        Tile { kind, pose }
    }

    pub fn proto(&self) -> &'static Prototile {
        prototile(self.kind)
    }

    pub fn vertices(&self) -> Vec<CycloPoint> {
        self.proto().boundary.iter().map(|&p| self.pose.apply(p)).collect()
    }

    /// World vertices in counterclockwise order, with the index of each in
    /// the canonical boundary.
    pub fn ccw_vertices(&self) -> Vec<(usize, CycloPoint)> {
        let v = self.vertices();
        let n = v.len();
        if self.pose.reflected {
            (0..n).rev().map(|i| (i, v[i])).collect()
        } else {
            (0..n).map(|i| (i, v[i])).collect()
        }
    }

    /// Interior test: strictly inside (`Greater`), on the boundary (`Equal`)
    /// or outside (`Less`). Only valid for the convex-decomposable shapes
    /// handled by [`point_in_polygon`].
    pub fn locate(&self, p: CycloPoint) -> Ordering {
        let pts: Vec<CycloPoint> = self.ccw_vertices().into_iter().map(|(_, q)| q).collect();
        point_in_polygon(&pts, p)
    }

    /// Sum of the vertices; the centroid times the vertex count.
    pub fn vertex_sum(&self) -> CycloPoint {
        self.vertices().into_iter().fold(CycloPoint::ZERO, |a, b| a + b)
    }

    pub fn scaled_phi(&self, k: i32) -> Tile {
        Tile::new(self.kind, self.pose.scale_phi_pow(k))
    }

    pub fn transformed(&self, iso: &Isometry) -> Tile {
        Tile::new(self.kind, iso.compose(&self.pose))
    }
}

/// Exact point-in-polygon for a counterclockwise simple polygon.
///
/// Returns `Greater` inside, `Equal` on the boundary, `Less` outside.
pub fn point_in_polygon(ccw: &[CycloPoint], p: CycloPoint) -> Ordering {
    let n = ccw.len();
    for i in 0..n {
        let a = ccw[i];
        let b = ccw[(i + 1) % n];
        if (b - a).cross(p - a).is_zero() {
            let d1 = (p - a).dot2(b - a);
            let d2 = (p - b).dot2(a - b);
            if !d1.is_negative() && !d2.is_negative() {
                return Ordering::Equal;
            }
        }
    }
    // winding number with exact half-plane tests
    let mut winding = 0i32;
    let above = |q: CycloPoint| CycloPoint::ONE.cross(q - p);
    for i in 0..n {
        let a = ccw[i];
        let b = ccw[(i + 1) % n];
        let ya = above(a);
        let yb = above(b);
        let side = (b - a).cross(p - a);
        if !ya.is_positive() {
            if yb.is_positive() && side.is_positive() {
                winding += 1;
            }
        } else if !yb.is_positive() && side.is_negative() {
            winding -= 1;
        }
    }
    if winding != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Undirected segment key: endpoints in ascending order.
pub type Segment = (CycloPoint, CycloPoint);

pub fn segment(a: CycloPoint, b: CycloPoint) -> Segment {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSlot {
    pub tile: u32,
    pub edge: u8,
}

/// A finite edge-to-edge set of tiles from one tileset.
///
/// Physical coordinates are lattice coordinates times φ^(−scale_exponent).
#[derive(Clone, Debug)]
pub struct Patch {
    pub tileset: Tileset,
    pub scale_exponent: i32,
    tiles: Vec<Tile>,
    members: HashSet<Tile>,
    edge_index: HashMap<Segment, Vec<EdgeSlot>>,
}

impl PartialEq for Patch {
    fn eq(&self, other: &Self) -> bool {
        self.tileset == other.tileset
            && self.scale_exponent == other.scale_exponent
            && self.members == other.members
    }
}

impl Patch {
    pub fn new(tileset: Tileset, scale_exponent: i32) -> Patch {
        Patch {
            tileset,
            scale_exponent,
            tiles: Vec::new(),
            members: HashSet::new(),
            edge_index: HashMap::new(),
        }
    }

    pub fn from_tiles(
        tileset: Tileset,
        scale_exponent: i32,
        tiles: impl IntoIterator<Item = Tile>,
    ) -> Result<Patch, TilingError> {
        let mut p = Patch::new(tileset, scale_exponent);
        for t in tiles {
            p.add_tile(t)?;
        }
        Ok(p)
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn contains(&self, tile: &Tile) -> bool {
        self.members.contains(tile)
    }

    pub fn edge_index(&self) -> &HashMap<Segment, Vec<EdgeSlot>> {
        &self.edge_index
    }

    /// World endpoints of edge `e` of tile `t`, in canonical boundary order.
    pub fn edge_points(&self, slot: EdgeSlot) -> (CycloPoint, CycloPoint) {
        let t = &self.tiles[slot.tile as usize];
        let b = &t.proto().boundary;
        let n = b.len();
        let e = slot.edge as usize;
        (t.pose.apply(b[e]), t.pose.apply(b[(e + 1) % n]))
    }

    /// `add_tile`: inserts `tile`, rejecting duplicates and edge overlaps.
    pub fn add_tile(&mut self, tile: Tile) -> Result<(), TilingError> {
        if tile.kind.tileset() != self.tileset {
            return Err(TilingError::WrongTileset { tileset: self.tileset, kind: tile.kind });
        }
        let tile = Tile::new(tile.kind, tile.pose);
        if self.members.contains(&tile) {
            return Err(TilingError::DuplicateTile(tile));
        }
        let verts = tile.vertices();
        let n = verts.len();
        let idx = self.tiles.len() as u32;
        // interior lies left of (a -> b) for unreflected tiles
        let oriented = |a: CycloPoint, b: CycloPoint, reflected: bool| if reflected { (b, a) } else { (a, b) };
        for e in 0..n {
            let (a, b) = (verts[e], verts[(e + 1) % n]);
            if let Some(slots) = self.edge_index.get(&segment(a, b)) {
                if slots.len() >= 2 {
                    return Err(TilingError::Overlap(a, b));
                }
                let other = self.tiles[slots[0].tile as usize];
                let (oa, ob) = self.edge_points(slots[0]);
                if oriented(oa, ob, other.pose.reflected) == oriented(a, b, tile.pose.reflected) {
                    return Err(TilingError::Overlap(a, b));
                }
            }
        }
        for e in 0..n {
            let (a, b) = (verts[e], verts[(e + 1) % n]);
            self.edge_index
                .entry(segment(a, b))
                .or_default()
                .push(EdgeSlot { tile: idx, edge: e as u8 });
        }
        self.members.insert(tile);
        self.tiles.push(tile);
        Ok(())
    }

    /// Inserts `tile` unless an identical tile is already present.
    pub fn insert_or_skip(&mut self, tile: Tile) -> Result<bool, TilingError> {
        if self.members.contains(&Tile::new(tile.kind, tile.pose)) {
            return Ok(false);
        }
        self.add_tile(tile).map(|_| true)
    }

    /// Number of segments carrying two tile edges.
    pub fn shared_edge_count(&self) -> usize {
        self.edge_index.values().filter(|s| s.len() == 2).count()
    }

    pub fn boundary_edge_count(&self) -> usize {
        self.edge_index.values().filter(|s| s.len() == 1).count()
    }

    /// Tiles sorted by `(kind, rotation, reflection, translation)`.
    pub fn sorted_tiles(&self) -> Vec<Tile> {
        let mut v = self.tiles.clone();
        v.sort_by_key(|t| (t.kind, t.pose.rotation, t.pose.reflected, t.pose.translation.c));
        v
    }

    /// Same tiles, coordinates multiplied by φ^k and exponent raised by k.
    pub fn rescaled(&self, k: i32) -> Patch {
        let mut out = Patch::new(self.tileset, self.scale_exponent + k);
        for t in &self.tiles {
            out.add_tile(t.scaled_phi(k)).expect("rescaling preserves validity");
        }
        out
    }

    pub fn transformed(&self, iso: &Isometry) -> Patch {
        let mut out = Patch::new(self.tileset, self.scale_exponent);
        for t in &self.tiles {
            out.add_tile(t.transformed(iso)).expect("isometries preserve validity");
        }
        out
    }

    /// Counts of each kind present.
    pub fn kind_counts(&self) -> HashMap<TileKind, usize> {
        let mut m = HashMap::new();
        for t in &self.tiles {
            *m.entry(t.kind).or_insert(0) += 1;
        }
        m
    }
}

/// A matching-rule violation on a shared edge or vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    Edge {
        segment: Segment,
        first: (EdgeStyle, Option<CycloPoint>),
        second: (EdgeStyle, Option<CycloPoint>),
    },
    Vertex {
        point: CycloPoint,
        first: VertexMark,
        second: VertexMark,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Edge { segment, first, second } => write!(
                f,
                "edge {}-{}: {:?} vs {:?}",
                segment.0, segment.1, first, second
            ),
            Violation::Vertex { point, first, second } => {
                write!(f, "vertex {point}: {first:?} vs {second:?}")
            }
        }
    }
}

/// `check_matching`: every shared edge must carry identical marks pointing
/// the same way, and every shared vertex identical vertex marks.
pub fn check_matching(patch: &Patch) -> Vec<Violation> {
    let mut out = Vec::new();
    for (seg, slots) in patch.edge_index() {
        if slots.len() != 2 {
            continue;
        }
        let world = |slot: EdgeSlot| {
            let t = &patch.tiles()[slot.tile as usize];
            let m = t.proto().edge_marks[slot.edge as usize];
            let (a, b) = patch.edge_points(slot);
            let head = match m.direction {
                1 => Some(b),
                -1 => Some(a),
                _ => None,
            };
            (m.style, head)
        };
        let (x, y) = (world(slots[0]), world(slots[1]));
        if x != y {
            let (first, second) = if x <= y { (x, y) } else { (y, x) };
            out.push(Violation::Edge { segment: *seg, first, second });
        }
    }
    let mut seen: HashMap<CycloPoint, VertexMark> = HashMap::new();
    let mut bad: HashSet<(CycloPoint, VertexMark, VertexMark)> = HashSet::new();
    for t in patch.tiles() {
        let proto = t.proto();
        for (i, &m) in proto.vertex_marks.iter().enumerate() {
            if m == VertexMark::None {
                continue;
            }
            let p = t.pose.apply(proto.boundary[i]);
            match seen.get(&p) {
                None => {
                    seen.insert(p, m);
                }
                Some(&prev) if prev != m => {
                    let (a, b) = if prev <= m { (prev, m) } else { (m, prev) };
                    bad.insert((p, a, b));
                }
                _ => {}
            }
        }
    }
    out.extend(bad.into_iter().map(|(point, first, second)| Violation::Vertex { point, first, second }));
    out.sort();
    out
}

/// `boundary`: cycles of unshared edges with the patch on their left.
pub fn boundary(patch: &Patch) -> Vec<Vec<CycloPoint>> {
    let mut out_edges: HashMap<CycloPoint, Vec<CycloPoint>> = HashMap::new();
    for slots in patch.edge_index().values() {
        if slots.len() != 1 {
            continue;
        }
        let slot = slots[0];
        let t = &patch.tiles()[slot.tile as usize];
        let (a, b) = patch.edge_points(slot);
        let (a, b) = if t.pose.reflected { (b, a) } else { (a, b) };
        out_edges.entry(a).or_default().push(b);
    }
    let mut starts: Vec<CycloPoint> = out_edges.keys().copied().collect();
    starts.sort();
    let mut cycles = Vec::new();
    for s in starts {
        while let Some(first) = out_edges.get_mut(&s).and_then(|v| v.pop()) {
            let mut cycle = vec![s];
            let mut prev = s;
            let mut cur = first;
            while cur != s {
                cycle.push(cur);
                let outs = out_edges.get_mut(&cur).expect("boundary edges form cycles");
                // first outgoing edge clockwise from the reversed incoming one
                let back = prev - cur;
                let pick = (0..outs.len())
                    .min_by(|&i, &j| cw_from(back, outs[i] - cur).cmp(&cw_from(back, outs[j] - cur)))
                    .expect("nonempty");
                let next = outs.swap_remove(pick);
                prev = cur;
                cur = next;
            }
            cycles.push(cycle);
        }
    }
    cycles
}

/// Sort key for the clockwise sweep from `reference` to `v`.
fn cw_from(reference: CycloPoint, v: CycloPoint) -> (u8, CwKey) {
    // clockwise order from reference == counterclockwise order from reference, reversed
    let ccw_half = |p: CycloPoint| -> u8 {
        let y = reference.cross(p);
        if y.is_positive() || (y.is_zero() && reference.dot2(p).is_positive()) {
            0
        } else {
            1
        }
    };
    let h = ccw_half(v);
    // in clockwise order, half 1 (angles in [π, 2π) ccw) comes first
    (1 - h, CwKey { reference, v })
}

#[derive(PartialEq, Eq)]
struct CwKey {
    reference: CycloPoint,
    v: CycloPoint,
}

impl PartialOrd for CwKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CwKey {
    fn cmp(&self, other: &Self) -> Ordering {
        // within one half, clockwise means larger ccw angle first
        GoldenInt::ZERO.cmp(&other.v.cross(self.v))
    }
}

/// `patch_area`: lattice area in units of sin 36°.
pub fn patch_area(patch: &Patch) -> GoldenRational {
    let mut counts: Vec<(TileKind, usize)> = patch.kind_counts().into_iter().collect();
    counts.sort();
    counts.into_iter().fold(GoldenRational::zero(), |acc, (k, n)| {
        &acc + &(&prototile(k).area * &GoldenRational::from(n as i64))
    })
}

/// Physical area: [`patch_area`] times φ^(−2·scale_exponent).
pub fn physical_area(patch: &Patch) -> GoldenRational {
    let s = GoldenRational::phi()
        .pow(-2 * patch.scale_exponent)
        .expect("phi is a unit");
    &patch_area(patch) * &s
}
