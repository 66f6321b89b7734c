//! Local mappings between tilesets.
//!
//! Every derivation builds a straight-line graph on the source patch, reads
//! its bounded faces as target tiles and keeps only the faces whose source
//! neighbourhood is complete ("emit only forced tiles"). Rejected faces are
//! counted in [`Derived::omitted`].

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::analysis::{classified_vertices, VertexIndex};
use crate::golden::{CycloPoint, GoldenInt, Isometry};
use crate::planar::{match_polygon, simplify, PointGrid, SegmentGraph};
use crate::tiling::{
    check_matching, EdgeStyle, Patch, Tile, TileKind, Tileset, TilingError, VertexMark,
};

#[derive(Debug, Error)]
pub enum DerivationError {
    #[error("expected a {expected} patch, got {found}")]
    WrongSource { expected: String, found: Tileset },
    #[error("input patch violates the matching rules ({0} violations)")]
    IllegalInput(usize),
    #[error("no derivation from {from} to {to}")]
    Unsupported { from: Tileset, to: Tileset },
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

/// A derived patch and the number of candidate tiles dropped because their
/// source neighbourhood was incomplete.
#[derive(Clone, Debug)]
pub struct Derived {
    pub patch: Patch,
    pub omitted: usize,
}

/// Metadata of a local mapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationMap {
    pub source: Tileset,
    pub target: Tileset,
    /// Radius in source edge lengths beyond which the output no longer
    /// depends on the input.
    pub locality_radius: u32,
}

pub const DERIVATIONS: [DerivationMap; 9] = [
    DerivationMap { source: Tileset::P3, target: Tileset::Hbs, locality_radius: 2 },
    DerivationMap { source: Tileset::P2, target: Tileset::Hbs, locality_radius: 2 },
    DerivationMap { source: Tileset::P2, target: Tileset::Star, locality_radius: 8 },
    DerivationMap { source: Tileset::Hbs, target: Tileset::P1, locality_radius: 2 },
    DerivationMap { source: Tileset::Star, target: Tileset::P1, locality_radius: 2 },
    DerivationMap { source: Tileset::P3, target: Tileset::Gemstone, locality_radius: 3 },
    DerivationMap { source: Tileset::P2, target: Tileset::Gemstone, locality_radius: 3 },
    DerivationMap { source: Tileset::Star, target: Tileset::Gemstone, locality_radius: 2 },
    DerivationMap { source: Tileset::P3, target: Tileset::P2, locality_radius: 1 },
];

fn expect(patch: &Patch, tilesets: &[Tileset]) -> Result<(), DerivationError> {
    if !tilesets.contains(&patch.tileset) {
        return Err(DerivationError::WrongSource {
            expected: tilesets.iter().map(|t| t.name()).collect::<Vec<_>>().join("|"),
            found: patch.tileset,
        });
    }
    let v = check_matching(patch);
    if !v.is_empty() {
        return Err(DerivationError::IllegalInput(v.len()));
    }
    Ok(())
}

/// Read-only view of a source patch with the lookups derivations need.
pub struct Source<'a> {
    pub patch: &'a Patch,
    pub index: VertexIndex,
    pub grid: PointGrid,
}

impl<'a> Source<'a> {
    pub fn new(patch: &'a Patch) -> Self {
        let index = VertexIndex::new(patch);
        let grid = PointGrid::new(index.corners.keys().copied(), 2.0);
        Source { patch, index, grid }
    }

    pub fn is_interior(&self, v: CycloPoint) -> bool {
        self.index.is_interior(self.patch, v)
    }

    /// All source vertices within distance `r` of `q` are interior, so the
    /// patch covers the disc of radius `r − 1` around `q`.
    pub fn ball_complete(&self, q: CycloPoint, r: f64) -> bool {
        self.grid.near(q, r).into_iter().all(|v| self.is_interior(v))
    }

    /// All source vertices inside or on the polygon are interior.
    pub fn region_complete(&self, ccw: &[CycloPoint]) -> bool {
        ccw.iter().all(|&v| !self.index.corners.contains_key(&v) || self.is_interior(v))
            && self.grid.in_polygon(ccw).into_iter().all(|v| self.is_interior(v))
    }

    /// Tiles having a corner at `v`.
    pub fn tiles_at(&self, v: CycloPoint) -> HashSet<u32> {
        self.index.corners.get(&v).map_or_else(HashSet::new, |cs| cs.iter().map(|c| c.tile).collect())
    }

    pub fn points_of(&self, tiles: &HashSet<u32>) -> HashSet<CycloPoint> {
        tiles.iter().flat_map(|&t| self.patch.tiles()[t as usize].vertices()).collect()
    }

    /// Centers of the named interior vertex configuration.
    pub fn centers(&self, name: &str) -> Vec<CycloPoint> {
        classified_vertices(self.patch, &self.index)
            .into_iter()
            .filter(|(_, c)| c.name == name)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Marks a candidate tile must agree with, looked up in source coordinates.
pub(crate) struct MarkSource<'a> {
    pub arrows: Option<&'a HashSet<(CycloPoint, CycloPoint)>>,
    pub labels: Option<&'a HashMap<CycloPoint, u8>>,
}

impl MarkSource<'_> {
    /// `tile` lives at lattice scale φ^(−k) of the source.
    fn accepts(&self, tile: &Tile, k: i32) -> bool {
        let proto = tile.proto();
        let n = proto.boundary.len();
        let world: Vec<CycloPoint> = proto.boundary.iter().map(|&p| tile.pose.apply(p).scale_phi_pow(k)).collect();
        if let Some(arrows) = self.arrows {
            for i in 0..n {
                let m = proto.edge_marks[i];
                if m.style != EdgeStyle::HbsArrow {
                    continue;
                }
                let (a, b) = (world[i], world[(i + 1) % n]);
                let (tail, head) = if m.direction > 0 { (a, b) } else { (b, a) };
                if !arrows.contains(&(tail, head)) {
                    return false;
                }
            }
        }
        if let Some(labels) = self.labels {
            for i in 0..n {
                if let VertexMark::Label(l) = proto.vertex_marks[i] {
                    if labels.get(&world[i]) != Some(&l) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Reads the faces of `graph` as tiles of `kinds` at scale φ^(−k).
pub(crate) fn faces_to_patch(
    graph: &SegmentGraph,
    kinds: &[TileKind],
    tileset: Tileset,
    scale_exponent: i32,
    k: i32,
    accept: impl Fn(&[CycloPoint]) -> bool,
    marks: &MarkSource<'_>,
) -> Result<Derived, DerivationError> {
    let mut patch = Patch::new(tileset, scale_exponent - k);
    let mut omitted = 0;
    let mut faces = graph.faces();
    faces.sort();
    for face in faces {
        let face = simplify(&face);
        if !accept(&face) {
            omitted += 1;
            continue;
        }
        let scaled: Vec<CycloPoint> = face.iter().map(|p| p.scale_phi_pow(-k)).collect();
        let found: Vec<Tile> = match_polygon(&scaled, kinds).into_iter().filter(|t| marks.accepts(t, k)).collect();
        match found.as_slice() {
            [t] => patch.add_tile(*t)?,
            _ => omitted += 1,
        }
    }
    Ok(Derived { patch, omitted })
}

const HBS_KINDS: [TileKind; 3] = [TileKind::Hexagon, TileKind::Boat, TileKind::Star];
const STAR_KINDS: [TileKind; 5] =
    [TileKind::StarHexagon, TileKind::StarBoat, TileKind::StarS0, TileKind::StarS1, TileKind::StarS2];

fn directed_graph(edges: &HashSet<(CycloPoint, CycloPoint)>) -> SegmentGraph {
    let mut g = SegmentGraph::new();
    for &(a, b) in edges {
        g.add(a, b);
    }
    g
}

/// Kite axes of a P2 patch, directed tip to head.
pub fn kite_axes(patch: &Patch) -> HashSet<(CycloPoint, CycloPoint)> {
    patch
        .tiles()
        .iter()
        .filter(|t| t.kind == TileKind::HalfKite)
        .map(|t| {
            let v = t.vertices();
            (v[0], v[2])
        })
        .collect()
}

/// Single-arrow edges of a P3 patch, directed along the arrow.
pub fn single_arrows(patch: &Patch) -> HashSet<(CycloPoint, CycloPoint)> {
    let mut out = HashSet::new();
    for t in patch.tiles() {
        let proto = t.proto();
        let v = t.vertices();
        let n = v.len();
        for (i, m) in proto.edge_marks.iter().enumerate() {
            if m.style == EdgeStyle::ArrowSingle {
                let (a, b) = (v[i], v[(i + 1) % n]);
                out.insert(if m.direction > 0 { (a, b) } else { (b, a) });
            }
        }
    }
    out
}

fn hbs_from_arrows(patch: &Patch, arrows: HashSet<(CycloPoint, CycloPoint)>) -> Result<Derived, DerivationError> {
    let src = Source::new(patch);
    let graph = directed_graph(&arrows);
    faces_to_patch(
        &graph,
        &HBS_KINDS,
        Tileset::Hbs,
        patch.scale_exponent,
        0,
        |f| src.region_complete(f),
        &MarkSource { arrows: Some(&arrows), labels: None },
    )
}

/// `derive_p2_to_hbs`: trace the kite axes, arrows toward the wide angle.
pub fn derive_p2_to_hbs(patch: &Patch) -> Result<Derived, DerivationError> {
    expect(patch, &[Tileset::P2])?;
    hbs_from_arrows(patch, kite_axes(patch))
}

/// `derive_p3_to_hbs`: keep the single-arrow edges; the double-arrow edges
/// and the vertices they point to disappear.
pub fn derive_p3_to_hbs(patch: &Patch) -> Result<Derived, DerivationError> {
    expect(patch, &[Tileset::P3])?;
    hbs_from_arrows(patch, single_arrows(patch))
}

/// Radius (source edge lengths) that must be complete around a center
/// before its label is trusted.
const LABEL_RADIUS: f64 = 4.0;

/// Stars labelled by the number of suns sharing an edge with them.
pub fn star_labels(src: &Source<'_>) -> HashMap<CycloPoint, u8> {
    let suns: HashSet<CycloPoint> = src.centers("sun").into_iter().collect();
    let mut out = HashMap::new();
    for s in src.centers("star") {
        if !src.ball_complete(s, LABEL_RADIUS) {
            continue;
        }
        let star_pts = src.points_of(&src.tiles_at(s));
        let n = src
            .grid
            .near(s, 2.5)
            .into_iter()
            .filter(|u| suns.contains(u))
            .filter(|&u| src.points_of(&src.tiles_at(u)).intersection(&star_pts).count() >= 2)
            .count();
        out.insert(s, n as u8);
    }
    out
}

/// Suns labelled by the number of queens sharing a tile with them.
pub fn sun_labels(src: &Source<'_>) -> HashMap<CycloPoint, u8> {
    let queens: HashSet<CycloPoint> = src.centers("queen").into_iter().collect();
    let mut out = HashMap::new();
    for s in src.centers("sun") {
        if !src.ball_complete(s, LABEL_RADIUS) {
            continue;
        }
        let sun_tiles = src.tiles_at(s);
        let n = src
            .grid
            .near(s, 2.5)
            .into_iter()
            .filter(|q| queens.contains(q))
            .filter(|&q| src.tiles_at(q).intersection(&sun_tiles).next().is_some())
            .count();
        out.insert(s, n as u8);
    }
    out
}

/// Joins labelled centers at squared distance `d2` and reads the faces as
/// Star tiles scaled down by φ^k.
fn join_labelled(
    src: &Source<'_>,
    labels: &HashMap<CycloPoint, u8>,
    all_centers: &[CycloPoint],
    d2: GoldenInt,
    k: i32,
) -> Result<Derived, DerivationError> {
    let centers = PointGrid::new(all_centers.iter().copied(), 4.0);
    let r = d2.to_f64().sqrt();
    let mut graph = SegmentGraph::new();
    for &c in all_centers {
        for q in centers.near(c, r) {
            if (q - c).norm_sq() == d2 {
                graph.add(c, q);
            }
        }
    }
    faces_to_patch(
        &graph,
        &STAR_KINDS,
        Tileset::Star,
        src.patch.scale_exponent,
        k,
        |f| f.iter().all(|v| labels.contains_key(v)) && src.region_complete(f),
        &MarkSource { arrows: None, labels: Some(labels) },
    )
}

/// `derive_p2_to_star`: join the star centers at distance φ³; each vertex
/// is labelled by the number of suns its star touches along an edge.
pub fn derive_p2_to_star(patch: &Patch) -> Result<Derived, DerivationError> {
    expect(patch, &[Tileset::P2])?;
    let src = Source::new(patch);
    let labels = star_labels(&src);
    join_labelled(&src, &labels, &src.centers("star"), GoldenInt::new(5, 8), 3)
}

/// Joins the sun centers at distance φ²; labels count the queens sharing a
/// tile with the sun.
pub fn derive_p2_suns_to_star(patch: &Patch) -> Result<Derived, DerivationError> {
    expect(patch, &[Tileset::P2])?;
    let src = Source::new(patch);
    let labels = sun_labels(&src);
    join_labelled(&src, &labels, &src.centers("sun"), GoldenInt::new(2, 3), 2)
}

/// `derive_p2_suns_to_hbs`: the sun join with labels turned into arrows.
pub fn derive_p2_suns_to_hbs(patch: &Patch) -> Result<Derived, DerivationError> {
    let d = derive_p2_suns_to_star(patch)?;
    Ok(Derived { patch: star_to_hbs(&d.patch)?, omitted: d.omitted })
}

/// Drops the labels of a Star patch, keeping the arrows they induce.
pub fn star_to_hbs(patch: &Patch) -> Result<Patch, DerivationError> {
    expect(patch, &[Tileset::Star])?;
    let tiles = patch.tiles().iter().map(|t| Tile::new(t.kind.hbs_shape(), t.pose));
    Ok(Patch::from_tiles(Tileset::Hbs, patch.scale_exponent, tiles)?)
}

/// P3 to P2 at the same scale: a thin half is a half-kite, a fat half a
/// half-kite plus a half-dart.
pub fn p3_to_p2(patch: &Patch) -> Result<Patch, DerivationError> {
    expect(patch, &[Tileset::P3])?;
    let mut out = Patch::new(Tileset::P2, patch.scale_exponent);
    // the fat half U=0, X=1, V=φζ splits at M=ζ on UV
    let z = CycloPoint::zeta_pow(1);
    let kite_in_fat = Isometry::fit(
        &crate::tiling::prototile(TileKind::HalfKite).boundary,
        &[CycloPoint::ZERO, z, CycloPoint::ONE],
    )
    .expect("half-kite fits");
    let dart_in_fat = Isometry::fit(
        &crate::tiling::prototile(TileKind::HalfDart).boundary,
        &[z.scale_phi(), CycloPoint::ONE, z],
    )
    .expect("half-dart fits");
    for t in patch.tiles() {
        match t.kind {
            TileKind::HalfThin => out.add_tile(Tile::new(TileKind::HalfKite, t.pose))?,
            TileKind::HalfFat => {
                out.add_tile(Tile::new(TileKind::HalfKite, t.pose.compose(&kite_in_fat)))?;
                out.add_tile(Tile::new(TileKind::HalfDart, t.pose.compose(&dart_in_fat)))?;
            }
            _ => unreachable!("checked tileset"),
        }
    }
    Ok(out)
}

/// Radius around a candidate red vertex that must be complete before the
/// parents anchored there can be searched.
fn parent_support() -> f64 {
    let anchor = crate::substitution::star_rule().anchor.expect("star rule has an anchor");
    let reach = [TileKind::StarHexagon, TileKind::StarBoat, TileKind::StarS0]
        .iter()
        .flat_map(|&k| crate::tiling::prototile(k).boundary.iter())
        .map(|p| {
            let (x, y) = (p.scale_phi() - anchor).to_f64(0);
            x.hypot(y)
        })
        .fold(0.0, f64::max);
    // a tile centred within `reach` has a vertex within `reach + 1`
    reach + 1.0
}

/// Vertex colours of an HBS patch at its own scale.
///
/// The red vertices are the anchors of the parents one composition up;
/// hexagons and boats carry fixed colours and a star's tips are red exactly
/// when they are anchors. Stars with a tip too close to the boundary are
/// omitted.
pub fn hbs_to_star(patch: &Patch) -> Result<Derived, DerivationError> {
    expect(patch, &[Tileset::Hbs])?;
    let src = Source::new(patch);
    let centers = crate::substitution::colored_centers(patch);
    let support = parent_support();
    let mut known = HashSet::new();
    let mut reds = HashSet::new();
    for v in src.index.sorted_vertices() {
        if !src.ball_complete(v, support) {
            continue;
        }
        known.insert(v);
        if !crate::substitution::parents_at(&centers, v).is_empty() {
            reds.insert(v);
        }
    }
    let mut out = Patch::new(Tileset::Star, patch.scale_exponent);
    let mut omitted = 0;
    for t in patch.sorted_tiles() {
        let tile = match t.kind {
            TileKind::Hexagon => Tile::new(TileKind::StarHexagon, t.pose),
            TileKind::Boat => Tile::new(TileKind::StarBoat, t.pose),
            _ => {
                let v = t.vertices();
                let tips: Vec<CycloPoint> = v.iter().step_by(2).copied().collect();
                if !tips.iter().all(|p| known.contains(p)) {
                    omitted += 1;
                    continue;
                }
                let labels: HashMap<CycloPoint, u8> = v
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| (p, if i % 2 == 1 { 2 } else if reds.contains(&p) { 0 } else { 1 }))
                    .collect();
                let marks = MarkSource { arrows: None, labels: Some(&labels) };
                let ccw: Vec<CycloPoint> = t.ccw_vertices().into_iter().map(|(_, p)| p).collect();
                let found: Vec<Tile> = match_polygon(&ccw, &STAR_KINDS[2..])
                    .into_iter()
                    .filter(|c| marks.accepts(c, 0))
                    .collect();
                match found.as_slice() {
                    [s] => *s,
                    _ => {
                        omitted += 1;
                        continue;
                    }
                }
            }
        };
        out.add_tile(tile)?;
    }
    Ok(Derived { patch: out, omitted })
}

fn labelled(patch: &Patch) -> Result<Derived, DerivationError> {
    match patch.tileset {
        Tileset::Star => {
            expect(patch, &[Tileset::Star])?;
            Ok(Derived { patch: patch.clone(), omitted: 0 })
        }
        _ => hbs_to_star(patch),
    }
}

/// `derive_hbs_to_p1_labels`: a pentagon on every HBS vertex, coloured like
/// the Star vertex, and a diamond, boat or star inside each HBS tile.
pub fn derive_hbs_to_p1_labels(patch: &Patch) -> Result<Derived, DerivationError> {
    expect(patch, &[Tileset::Hbs, Tileset::Star])?;
    let star = labelled(patch)?;
    let mut out = Patch::new(Tileset::P1, star.patch.scale_exponent);
    let mut pentagons: HashMap<CycloPoint, (u8, i32)> = HashMap::new();
    for t in star.patch.sorted_tiles() {
        let v = t.vertices();
        let n = v.len();
        for (i, m) in t.proto().vertex_marks.iter().enumerate() {
            if let VertexMark::Label(l) = m {
                let d = crate::tiling::direction_steps(v[(i + 1) % n] - v[i]).expect("lattice edge") as i32 / 2;
                pentagons.entry(v[i]).or_insert((*l, d));
            }
        }
        let ccw: Vec<CycloPoint> = t.ccw_vertices().into_iter().map(|(_, p)| p).collect();
        let core = crate::shapes_derived::p1_core(&ccw);
        let kind = match t.kind.hbs_shape() {
            TileKind::Hexagon => TileKind::Diamond,
            TileKind::Boat => TileKind::P1Boat,
            _ => TileKind::P1Star,
        };
        out.add_tile(single_match(&core, kind))?;
    }
    let mut centers: Vec<_> = pentagons.into_iter().collect();
    centers.sort();
    for (v, (label, d)) in centers {
        let kind = [TileKind::Pentagon0, TileKind::Pentagon1, TileKind::Pentagon2][label as usize];
        out.add_tile(single_match(&crate::shapes_derived::p1_pentagon(v, d), kind))?;
    }
    Ok(Derived { patch: out, omitted: star.omitted })
}

fn single_match(ccw: &[CycloPoint], kind: TileKind) -> Tile {
    match_polygon(ccw, &[kind]).into_iter().next().unwrap_or_else(|| panic!("{kind} outline"))
}

/// `star_to_gemstones`: every blue vertex joins exactly one 144° and one
/// 216° corner, so straightening it leaves convex tiles in the same poses.
pub fn star_to_gemstones(patch: &Patch) -> Result<Derived, DerivationError> {
    expect(patch, &[Tileset::Star])?;
    let tiles = patch.tiles().iter().map(|t| {
        let kind = match t.kind {
            TileKind::StarHexagon => TileKind::Sapphire,
            TileKind::StarBoat => TileKind::Ruby,
            TileKind::StarS0 => TileKind::Topaz0,
            TileKind::StarS1 => TileKind::Topaz1,
            _ => TileKind::Topaz2,
        };
        Tile::new(kind, t.pose)
    });
    Ok(Derived { patch: Patch::from_tiles(Tileset::Gemstone, patch.scale_exponent, tiles)?, omitted: 0 })
}

/// `derive_p3_to_gemstones`.
pub fn derive_p3_to_gemstones(patch: &Patch) -> Result<Derived, DerivationError> {
    let hbs = derive_p3_to_hbs(patch)?;
    let star = hbs_to_star(&hbs.patch)?;
    let g = star_to_gemstones(&star.patch)?;
    Ok(Derived { patch: g.patch, omitted: hbs.omitted + star.omitted })
}

/// `derive_p2_to_gemstones`.
pub fn derive_p2_to_gemstones(patch: &Patch) -> Result<Derived, DerivationError> {
    let hbs = derive_p2_to_hbs(patch)?;
    let star = hbs_to_star(&hbs.patch)?;
    let g = star_to_gemstones(&star.patch)?;
    Ok(Derived { patch: g.patch, omitted: hbs.omitted + star.omitted })
}

/// Source tiles lying inside the polygon `ccw`: their centroid is inside.
pub(crate) fn tiles_inside(src: &Source<'_>, ccw: &[CycloPoint]) -> Vec<u32> {
    let mut cand: HashSet<u32> = HashSet::new();
    for v in src.grid.in_polygon(ccw) {
        cand.extend(src.tiles_at(v));
    }
    let mut out: Vec<u32> = cand
        .into_iter()
        .filter(|&i| {
            let t = &src.patch.tiles()[i as usize];
            // compare the vertex sum against the polygon scaled by the vertex count
            let n = GoldenInt::new(t.vertices().len() as i64, 0);
            let scaled: Vec<CycloPoint> = ccw.iter().map(|p| p.mul_golden(n)).collect();
            crate::tiling::point_in_polygon(&scaled, t.vertex_sum()).is_gt()
        })
        .collect();
    out.sort();
    out
}

/// Decoration of each HBS shape by Penrose half-tiles, in the shape's frame.
pub type DecorationTable = std::collections::BTreeMap<TileKind, Vec<Tile>>;

/// Reads the decoration of every complete tile of `coarse` off `fine`, a
/// patch at φ^k times the lattice scale of `coarse`. Tiles are grouped by
/// kind; returns the first kind found decorated two different ways.
pub fn read_decorations(fine: &Patch, coarse: &Patch, k: i32) -> Result<DecorationTable, TileKind> {
    let src = Source::new(fine);
    let grow = crate::golden::GoldenRational::phi().pow(2 * k).expect("unit");
    let mut table = DecorationTable::new();
    for t in coarse.sorted_tiles() {
        let ccw: Vec<CycloPoint> = t.ccw_vertices().into_iter().map(|(_, p)| p.scale_phi_pow(k)).collect();
        let inside = tiles_inside(&src, &ccw);
        let area = inside
            .iter()
            .map(|&i| fine.tiles()[i as usize].proto().area.clone())
            .fold(crate::golden::GoldenRational::zero(), |a, b| &a + &b);
        if area != &t.proto().area * &grow {
            continue;
        }
        let inv = t.pose.scale_phi_pow(k).inverse();
        let mut rel: Vec<Tile> = inside
            .iter()
            .map(|&i| {
                let s = &fine.tiles()[i as usize];
                Tile::new(s.kind, inv.compose(&s.pose))
            })
            .collect();
        rel.sort();
        match table.get(&t.kind) {
            Some(prev) if prev != &rel => return Err(t.kind),
            Some(_) => {}
            None => {
                table.insert(t.kind, rel);
            }
        }
    }
    Ok(table)
}

/// Decoration tables for `with` (P2 or P3), read once from a generated patch.
pub fn decoration_table(with: Tileset) -> Result<&'static DecorationTable, DerivationError> {
    use std::sync::OnceLock;
    static P2: OnceLock<DecorationTable> = OnceLock::new();
    static P3: OnceLock<DecorationTable> = OnceLock::new();
    let build = |tileset: Tileset| {
        let (seed, rule) = match tileset {
            Tileset::P2 => ("sun", crate::substitution::p2_rule()),
            _ => ("star", crate::substitution::p3_rule()),
        };
        let seed = crate::seeds::seed_patch(tileset, seed).expect("seed");
        let p = crate::substitution::substitute(&seed, rule, 6).expect("substitution");
        let hbs = match tileset {
            Tileset::P2 => derive_p2_to_hbs(&p),
            _ => derive_p3_to_hbs(&p),
        }
        .expect("derivation")
        .patch;
        let table = read_decorations(&p, &hbs, 0).unwrap_or_else(|k| panic!("{k} decorated two ways"));
        assert_eq!(table.len(), 3, "every HBS shape decorated");
        table
    };
    match with {
        Tileset::P2 => Ok(P2.get_or_init(|| build(Tileset::P2))),
        Tileset::P3 => Ok(P3.get_or_init(|| build(Tileset::P3))),
        other => Err(DerivationError::Unsupported { from: Tileset::Hbs, to: other }),
    }
}

/// `decorate`: fills each HBS or Star tile with its Penrose half-tiles.
pub fn decorate(patch: &Patch, with: Tileset) -> Result<Patch, DerivationError> {
    if !matches!(patch.tileset, Tileset::Hbs | Tileset::Star) {
        return Err(DerivationError::Unsupported { from: patch.tileset, to: with });
    }
    expect(patch, &[Tileset::Hbs, Tileset::Star])?;
    let table = decoration_table(with)?;
    let mut out = Patch::new(with, patch.scale_exponent);
    for t in patch.sorted_tiles() {
        for d in &table[&t.kind.hbs_shape()] {
            out.add_tile(d.transformed(&t.pose))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeds::seed_patch;
    use crate::substitution::{p2_rule, p3_rule, substitute};

    #[test]
    fn p3_to_p2_is_legal() {
        let p3 = substitute(&seed_patch(Tileset::P3, "star").unwrap(), p3_rule(), 4).unwrap();
        let p2 = p3_to_p2(&p3).unwrap();
        assert!(check_matching(&p2).is_empty());
        assert_eq!(crate::tiling::patch_area(&p2), crate::tiling::patch_area(&p3));
    }

    #[test]
    fn hbs_from_p2_and_p3_agree() {
        let p3 = substitute(&seed_patch(Tileset::P3, "star").unwrap(), p3_rule(), 6).unwrap();
        let a = derive_p3_to_hbs(&p3).unwrap();
        let b = derive_p2_to_hbs(&p3_to_p2(&p3).unwrap()).unwrap();
        assert!(a.patch.len() > 50);
        assert_eq!(a.patch, b.patch);
        assert!(check_matching(&a.patch).is_empty());
    }

    #[test]
    fn star_join_is_legal() {
        let p = substitute(&seed_patch(Tileset::P2, "sun").unwrap(), p2_rule(), 8).unwrap();
        let d = derive_p2_to_star(&p).unwrap();
        assert!(d.patch.len() > 20);
        assert!(check_matching(&d.patch).is_empty());
        assert!(check_matching(&star_to_hbs(&d.patch).unwrap()).is_empty());
    }

    #[test]
    fn empty_inputs_give_empty_outputs() {
        for ts in [Tileset::P2, Tileset::P3] {
            let p = Patch::new(ts, 0);
            let d = if ts == Tileset::P2 { derive_p2_to_hbs(&p) } else { derive_p3_to_hbs(&p) }.unwrap();
            assert!(d.patch.is_empty());
        }
    }

    fn star_patch(p2_steps: u32, star_steps: u32) -> Patch {
        let p = substitute(&seed_patch(Tileset::P2, "sun").unwrap(), p2_rule(), p2_steps).unwrap();
        let s = derive_p2_to_star(&p).unwrap().patch;
        if star_steps == 0 {
            return s;
        }
        substitute(&s, crate::substitution::star_rule(), star_steps).unwrap()
    }

    #[test]
    fn hbs_colours_recovered_at_same_scale() {
        let s = star_patch(8, 3);
        let back = hbs_to_star(&star_to_hbs(&s).unwrap()).unwrap();
        assert!(check_matching(&back.patch).is_empty());
        let stars = |p: &Patch| p.tiles().iter().filter(|t| t.kind.hbs_shape() == TileKind::Star).count();
        assert!(stars(&back.patch) * 3 > stars(&s), "{} of {}", stars(&back.patch), stars(&s));
        for t in back.patch.tiles() {
            assert!(s.contains(t), "{t:?}");
        }
    }

    #[test]
    fn p1_pentagons_fit_around_interior_vertices() {
        let s = star_patch(8, 1);
        let p1 = derive_hbs_to_p1_labels(&s).unwrap().patch;
        let counts = p1.kind_counts();
        let sc = s.kind_counts();
        assert_eq!(counts[&TileKind::Diamond], sc[&TileKind::StarHexagon]);
        assert_eq!(counts[&TileKind::P1Boat], sc[&TileKind::StarBoat]);
        let src = Source::new(&s);
        let pent = src.index.corners.len();
        let total: usize = [TileKind::Pentagon0, TileKind::Pentagon1, TileKind::Pentagon2]
            .iter()
            .map(|k| counts.get(k).copied().unwrap_or(0))
            .sum();
        assert_eq!(total, pent);
        for t in p1.tiles() {
            if !matches!(t.kind, TileKind::Pentagon0 | TileKind::Pentagon1 | TileKind::Pentagon2) {
                continue;
            }
            let v = t.vertices();
            let center = s.tiles().iter().flat_map(|h| h.vertices()).find(|c| {
                v.iter().all(|p| (*p - *c).norm_sq() == GoldenInt::new(2, -1))
            });
            let c = center.expect("pentagon centred on an HBS vertex");
            if !src.is_interior(c) {
                continue;
            }
            for k in 0..5 {
                let seg = crate::tiling::segment(v[k], v[(k + 1) % 5]);
                assert_eq!(p1.edge_index()[&seg].len(), 2, "pentagon edge at {c}");
            }
        }
        // pentagon colours are the Star vertex colours
        for t in s.tiles() {
            for (p, m) in t.vertices().into_iter().zip(&t.proto().vertex_marks) {
                let VertexMark::Label(l) = m else { continue };
                let want = [TileKind::Pentagon0, TileKind::Pentagon1, TileKind::Pentagon2][*l as usize];
                assert!(p1.tiles().iter().any(|q| q.kind == want && q.vertices().iter().all(|x| (*x - p).norm_sq() == GoldenInt::new(2, -1))));
            }
        }
    }

    #[test]
    fn gemstones_are_convex_with_two_labels() {
        let p3 = substitute(&seed_patch(Tileset::P3, "star").unwrap(), p3_rule(), 8).unwrap();
        let g = derive_p3_to_gemstones(&p3).unwrap().patch;
        assert!(g.len() > 50);
        assert!(check_matching(&g).is_empty());
        for t in g.tiles() {
            let proto = t.proto();
            assert!(proto.angles.iter().all(|&a| a < 10), "{}", t.kind);
            assert!(proto.vertex_marks.iter().all(|m| matches!(m, VertexMark::Label(0 | 1))));
            let n = proto.boundary.len();
            for i in 0..n {
                let l = (proto.boundary[(i + 1) % n] - proto.boundary[i]).norm_sq();
                assert!(l == GoldenInt::ONE || l == GoldenInt::new(2, 1), "{}: {l}", t.kind);
            }
        }
        let g2 = derive_p2_to_gemstones(&p3_to_p2(&p3).unwrap()).unwrap().patch;
        assert_eq!(g, g2);
    }

    #[test]
    fn gemstone_vertices_are_suns_and_jacks() {
        let p3 = substitute(&seed_patch(Tileset::P3, "star").unwrap(), p3_rule(), 8).unwrap();
        let p2 = p3_to_p2(&p3).unwrap();
        let g = derive_p2_to_gemstones(&p2).unwrap().patch;
        let src = Source::new(&p2);
        let named: HashMap<CycloPoint, String> =
            classified_vertices(&p2, &src.index).into_iter().map(|(v, c)| (v, c.name)).collect();
        let gi = VertexIndex::new(&g);
        let mut seen = 0;
        for v in gi.sorted_vertices() {
            if let Some(name) = named.get(&v) {
                assert!(name == "sun" || name == "jack", "{name}");
                seen += 1;
            }
        }
        assert!(seen > 20);
        // every sun and jack well inside the gemstone patch is a vertex of it
        for (v, name) in &named {
            if (name == "sun" || name == "jack") && gi.is_interior(&g, *v) {
                assert!(gi.corners.contains_key(v));
            }
        }
    }

    #[test]
    fn decoration_round_trip() {
        for (tileset, seed, rule) in [(Tileset::P3, "star", p3_rule()), (Tileset::P2, "sun", p2_rule())] {
            let p = substitute(&seed_patch(tileset, seed).unwrap(), rule, 7).unwrap();
            let hbs = if tileset == Tileset::P2 { derive_p2_to_hbs(&p) } else { derive_p3_to_hbs(&p) }.unwrap().patch;
            let d = decorate(&hbs, tileset).unwrap();
            assert!(check_matching(&d).is_empty());
            assert_eq!(crate::tiling::patch_area(&d), crate::tiling::patch_area(&hbs));
            for t in d.tiles() {
                assert!(p.contains(t), "{tileset}: {t:?}");
            }
        }
    }

    #[test]
    fn hexagon_decoration_is_darts_and_half_kites() {
        let t = decoration_table(Tileset::P2).unwrap();
        for d in &t[&TileKind::Hexagon] {
            assert!(matches!(d.kind, TileKind::HalfKite | TileKind::HalfDart));
        }
        let kites = t[&TileKind::Hexagon].iter().filter(|d| d.kind == TileKind::HalfKite).count();
        assert!(kites > 0);
        assert!(decorate(&Patch::new(Tileset::Gemstone, 0), Tileset::P2).is_err());
    }

    #[test]
    fn triple_decomposition_decorates_congruent_tiles_alike() {
        let s = star_patch(8, 0);
        let fine = substitute(&s, crate::substitution::star_rule(), 3).unwrap();
        let d = decorate(&fine, Tileset::P2).unwrap();
        let table = read_decorations(&d, &s, 3).unwrap_or_else(|k| panic!("{k} decorated two ways"));
        assert!(table.len() >= 4, "{:?}", table.keys().collect::<Vec<_>>());
    }
}
