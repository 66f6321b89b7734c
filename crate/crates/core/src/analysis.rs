//! Vertex configurations, empirical frequencies, characteristic distances
//! and kingdoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::golden::{CycloPoint, GoldenInt, GoldenRational, Isometry};
use crate::planar::PointGrid;
use crate::tiling::{direction_steps, Patch, Tile, TileKind, Tileset, VertexMark};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("{0} is not a vertex of the patch")]
    NotAVertex(CycloPoint),
    #[error("need at least {needed} occurrences of {config}, found {found}")]
    TooFewOccurrences { config: String, needed: usize, found: usize },
    #[error("two occurrences of {0} share a center")]
    CoincidentCenters(String),
    #[error("no occurrence of {0} has the requested margin")]
    NoMargin(String),
}

/// One tile corner at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Corner {
    pub tile: u32,
    pub vertex: u8,
}

/// Map from every tile vertex of a patch to the corners there.
#[derive(Clone, Debug, Default)]
pub struct VertexIndex {
    pub corners: HashMap<CycloPoint, Vec<Corner>>,
}

impl VertexIndex {
    pub fn new(patch: &Patch) -> Self {
        let mut corners: HashMap<CycloPoint, Vec<Corner>> = HashMap::new();
        for (ti, t) in patch.tiles().iter().enumerate() {
            for (vi, p) in t.vertices().into_iter().enumerate() {
                corners.entry(p).or_default().push(Corner { tile: ti as u32, vertex: vi as u8 });
            }
        }
        VertexIndex { corners }
    }

    /// Total corner angle at `v` in 18° steps.
    pub fn angle_sum(&self, patch: &Patch, v: CycloPoint) -> u32 {
        self.corners.get(&v).map_or(0, |cs| {
            cs.iter()
                .map(|c| patch.tiles()[c.tile as usize].proto().angles[c.vertex as usize] as u32)
                .sum()
        })
    }

    /// A vertex whose corners fill the full turn.
    pub fn is_interior(&self, patch: &Patch, v: CycloPoint) -> bool {
        self.angle_sum(patch, v) == 20
    }

    /// All vertices in a deterministic order.
    pub fn sorted_vertices(&self) -> Vec<CycloPoint> {
        let mut v: Vec<CycloPoint> = self.corners.keys().copied().collect();
        v.sort();
        v
    }
}

/// Key element: tile kind, corner index, handedness and the mark at the corner.
pub type KeyItem = (TileKind, u8, bool, VertexMark);

/// A classified vertex neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexConfig {
    pub tileset: Tileset,
    pub name: String,
    /// Lexicographically least rotation/reflection of the corner cycle.
    pub key: Vec<KeyItem>,
}

impl fmt::Display for VertexConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Config(VertexConfig),
    Boundary,
}

/// Corners at `v` in counterclockwise order, each with the direction
/// (18° steps) of the edge where it starts.
pub fn corner_cycle(patch: &Patch, index: &VertexIndex, v: CycloPoint) -> Vec<(u8, Corner)> {
    let mut out: Vec<(u8, Corner)> = index
        .corners
        .get(&v)
        .map(|cs| {
            cs.iter()
                .map(|&c| {
                    let t = &patch.tiles()[c.tile as usize];
                    let b = &t.proto().boundary;
                    let n = b.len();
                    let i = c.vertex as usize;
                    // counterclockwise successor in world orientation
                    let j = if t.pose.reflected { (i + n - 1) % n } else { (i + 1) % n };
                    let d = direction_steps(t.pose.apply(b[j]) - v).expect("edges run along lattice directions");
                    (d, c)
                })
                .collect()
        })
        .unwrap_or_default();
    out.sort_by_key(|&(d, _)| d);
    out
}

/// Key item of a tile corner, reduced over the prototile's symmetries so
/// that congruent placements of a symmetric tile give the same item.
fn corner_item(kind: TileKind, vertex: u8, reflected: bool) -> KeyItem {
    let proto = crate::tiling::prototile(kind);
    let b = &proto.boundary;
    proto
        .symmetries
        .iter()
        .map(|s| {
            let img = s.apply(b[vertex as usize]);
            let j = b.iter().position(|&q| q == img).expect("symmetries permute vertices");
            (kind, j as u8, reflected ^ s.reflected, proto.vertex_marks[vertex as usize])
        })
        .min()
        .expect("identity is a symmetry")
}

fn mirror((kind, vertex, reflected, _): KeyItem) -> KeyItem {
    corner_item(kind, vertex, !reflected)
}

fn canonical_key(items: &[KeyItem]) -> Vec<KeyItem> {
    let n = items.len();
    let mirrored: Vec<KeyItem> = items.iter().rev().map(|&it| mirror(it)).collect();
    let mut best: Option<Vec<KeyItem>> = None;
    for seq in [items.to_vec(), mirrored] {
        for s in 0..n {
            let rot: Vec<KeyItem> = (0..n).map(|i| seq[(s + i) % n]).collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// The canonical key at `v` together with every corner that starts it,
/// in either orientation. The corners give frames for vertex-keyed tables.
pub fn vertex_frames(patch: &Patch, index: &VertexIndex, v: CycloPoint) -> (Vec<KeyItem>, Vec<Corner>) {
    let cycle = corner_cycle(patch, index, v);
    let items: Vec<KeyItem> = cycle
        .iter()
        .map(|&(_, c)| {
            let t = &patch.tiles()[c.tile as usize];
            corner_item(t.kind, c.vertex, t.pose.reflected)
        })
        .collect();
    let key = canonical_key(&items);
    let n = items.len();
    let mut frames = Vec::new();
    for s in 0..n {
        let fwd: Vec<KeyItem> = (0..n).map(|i| items[(s + i) % n]).collect();
        let back: Vec<KeyItem> = (0..n).map(|i| mirror(items[(s + n - i) % n])).collect();
        if fwd == key || back == key {
            frames.push(cycle[s].1);
        }
    }
    (key, frames)
}

/// The canonical corner-cycle key at an interior vertex.
pub fn vertex_key(patch: &Patch, index: &VertexIndex, v: CycloPoint) -> Vec<KeyItem> {
    let items: Vec<KeyItem> = corner_cycle(patch, index, v)
        .into_iter()
        .map(|(_, c)| {
            let t = &patch.tiles()[c.tile as usize];
            corner_item(t.kind, c.vertex, t.pose.reflected)
        })
        .collect();
    canonical_key(&items)
}

/// Kite and dart counts at a P2 vertex, from half-tile corners.
///
/// A wing corner belongs to one half; tip and head corners are split
/// between both halves of the tile.
fn p2_counts(key: &[KeyItem]) -> (usize, usize) {
    let mut halves = [0usize; 2];
    let mut wings = [0usize; 2];
    for &(kind, vertex, _, _) in key {
        let slot = match kind {
            TileKind::HalfKite => 0,
            TileKind::HalfDart => 1,
            _ => continue,
        };
        if vertex == 1 {
            wings[slot] += 1;
        } else {
            halves[slot] += 1;
        }
    }
    (wings[0] + halves[0] / 2, wings[1] + halves[1] / 2)
}

/// Name of a P2 vertex configuration from its kite and dart counts.
pub fn p2_config_name(kites: usize, darts: usize) -> Option<&'static str> {
    Some(match (kites, darts) {
        (5, 0) => "sun",
        (0, 5) => "star",
        (2, 1) => "ace",
        (2, 2) => "deuce",
        (3, 2) => "jack",
        (4, 1) => "queen",
        (2, 3) => "king",
        _ => return None,
    })
}

pub const P2_CONFIG_NAMES: [&str; 7] = ["ace", "deuce", "jack", "queen", "king", "star", "sun"];

fn config_name(tileset: Tileset, key: &[KeyItem]) -> String {
    match tileset {
        Tileset::P2 => {
            let (k, d) = p2_counts(key);
            p2_config_name(k, d).map_or_else(|| format!("p2-{k}k{d}d"), str::to_string)
        }
        Tileset::Hbs | Tileset::Star => crate::configs::hbs_config_name(tileset, key),
        _ => format!("{}-config", tileset.name()),
    }
}

/// `classify_vertex`.
pub fn classify_vertex(patch: &Patch, v: CycloPoint) -> Result<Classification, AnalysisError> {
    let index = VertexIndex::new(patch);
    classify_with(patch, &index, v)
}

pub fn classify_with(patch: &Patch, index: &VertexIndex, v: CycloPoint) -> Result<Classification, AnalysisError> {
    if !index.corners.contains_key(&v) {
        return Err(AnalysisError::NotAVertex(v));
    }
    if !index.is_interior(patch, v) {
        return Ok(Classification::Boundary);
    }
    let key = vertex_key(patch, index, v);
    let name = config_name(patch.tileset, &key);
    Ok(Classification::Config(VertexConfig { tileset: patch.tileset, name, key }))
}

/// Every interior vertex with its configuration, in sorted vertex order.
pub fn classified_vertices(patch: &Patch, index: &VertexIndex) -> Vec<(CycloPoint, VertexConfig)> {
    index
        .sorted_vertices()
        .into_iter()
        .filter_map(|v| match classify_with(patch, index, v) {
            Ok(Classification::Config(c)) => Some((v, c)),
            _ => None,
        })
        .collect()
}

/// `enumerate_configs`: counts over interior vertices.
pub fn enumerate_configs(patch: &Patch) -> BTreeMap<VertexConfig, usize> {
    let index = VertexIndex::new(patch);
    let mut out = BTreeMap::new();
    for (_, c) in classified_vertices(patch, &index) {
        *out.entry(c).or_insert(0) += 1;
    }
    out
}

/// Interior vertices whose configuration is named `name`.
pub fn config_centers(patch: &Patch, index: &VertexIndex, name: &str) -> Vec<CycloPoint> {
    classified_vertices(patch, index)
        .into_iter()
        .filter(|(_, c)| c.name == name)
        .map(|(v, _)| v)
        .collect()
}

/// Exact minimum squared distance among `points`, in lattice units.
pub fn min_squared_distance(points: &[CycloPoint]) -> Option<GoldenInt> {
    if points.len() < 2 {
        return None;
    }
    let fl: Vec<(f64, f64)> = points.iter().map(|p| p.to_f64(0)).collect();
    let d2 = |i: usize, j: usize| {
        let (dx, dy) = (fl[i].0 - fl[j].0, fl[i].1 - fl[j].1);
        dx * dx + dy * dy
    };
    // grid buckets sized by a float estimate of the minimum
    let mut best = f64::INFINITY;
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| fl[a].0.total_cmp(&fl[b].0));
    for (ii, &i) in order.iter().enumerate() {
        for &j in &order[ii + 1..] {
            let dx = fl[j].0 - fl[i].0;
            if dx * dx > best + 1e-6 {
                break;
            }
            best = best.min(d2(i, j));
        }
    }
    // exact pass over near-minimal pairs
    let mut exact: Option<GoldenInt> = None;
    for (ii, &i) in order.iter().enumerate() {
        for &j in &order[ii + 1..] {
            let dx = fl[j].0 - fl[i].0;
            if dx * dx > best + 1e-6 {
                break;
            }
            if d2(i, j) <= best + 1e-6 {
                let e = (points[i] - points[j]).norm_sq();
                exact = Some(exact.map_or(e, |x: GoldenInt| x.min(e)));
            }
        }
    }
    exact
}

/// `min_pair_distance`: exact minimum squared distance between centers of
/// the named configuration, in tile edge lengths. Substitution rescales
/// the lattice, so edges stay of length 1 at every depth.
pub fn min_pair_distance(patch: &Patch, config_name: &str) -> Result<crate::golden::GoldenRational, AnalysisError> {
    let index = VertexIndex::new(patch);
    let centers = config_centers(patch, &index, config_name);
    if centers.len() < 2 {
        return Err(AnalysisError::TooFewOccurrences {
            config: config_name.to_string(),
            needed: 2,
            found: centers.len(),
        });
    }
    let d = min_squared_distance(&centers).expect("two or more points");
    if d.is_zero() {
        return Err(AnalysisError::CoincidentCenters(config_name.to_string()));
    }
    Ok(d.to_rational())
}

/// Tile counts over the interior of a patch against exact frequencies.
#[derive(Clone, Debug)]
pub struct FrequencyReport {
    pub counts: BTreeMap<TileKind, usize>,
    /// Tiles all of whose vertices are interior.
    pub total: usize,
    pub empirical: BTreeMap<TileKind, f64>,
    pub exact: BTreeMap<TileKind, GoldenRational>,
    /// |empirical − exact| per kind with an exact target.
    pub deviation: BTreeMap<TileKind, f64>,
}

impl FrequencyReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviation.values().copied().fold(0.0, f64::max)
    }
}

/// Exact tile frequencies of a tileset, empty where none are known.
pub fn exact_targets(tileset: Tileset) -> BTreeMap<TileKind, GoldenRational> {
    use crate::substitution::{exact_frequencies, hbs_matrix, p2_rule, p3_rule, star_frequencies, substitution_matrix};
    let f = match tileset {
        Tileset::P2 => exact_frequencies(&substitution_matrix(p2_rule())),
        Tileset::P3 => exact_frequencies(&substitution_matrix(p3_rule())),
        Tileset::Hbs => exact_frequencies(&hbs_matrix()),
        Tileset::Star => star_frequencies(),
        Tileset::Gemstone => star_frequencies().map(|m| {
            m.into_iter()
                .map(|(k, v)| {
                    let g = match k {
                        TileKind::StarHexagon => TileKind::Sapphire,
                        TileKind::StarBoat => TileKind::Ruby,
                        TileKind::StarS0 => TileKind::Topaz0,
                        TileKind::StarS1 => TileKind::Topaz1,
                        _ => TileKind::Topaz2,
                    };
                    (g, v)
                })
                .collect()
        }),
        Tileset::P1 => return BTreeMap::new(),
    };
    f.expect("catalog matrices are primitive").into_iter().collect()
}

/// `empirical_frequencies`.
pub fn empirical_frequencies(patch: &Patch) -> FrequencyReport {
    let index = VertexIndex::new(patch);
    let mut counts: BTreeMap<TileKind, usize> = BTreeMap::new();
    for t in patch.tiles() {
        if t.vertices().iter().all(|&v| index.is_interior(patch, v)) {
            *counts.entry(t.kind).or_insert(0) += 1;
        }
    }
    let total: usize = counts.values().sum();
    let empirical: BTreeMap<TileKind, f64> = patch
        .tileset
        .kinds()
        .iter()
        .map(|&k| (k, if total == 0 { 0.0 } else { counts.get(&k).copied().unwrap_or(0) as f64 / total as f64 }))
        .collect();
    let exact = exact_targets(patch.tileset);
    let deviation = exact.iter().map(|(k, f)| (*k, (empirical[k] - f.to_f64()).abs())).collect();
    FrequencyReport { counts, total, empirical, exact, deviation }
}

/// What a kingdom is centred on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KingdomCenter {
    /// Interior vertices with the named configuration.
    Config(String),
    /// Tiles of a kind, such as one of the three stars.
    Tile(TileKind),
}

impl fmt::Display for KingdomCenter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KingdomCenter::Config(n) => f.write_str(n),
            KingdomCenter::Tile(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KingdomReport {
    pub center: KingdomCenter,
    pub occurrences: usize,
    /// Tiles present around every occurrence, in the frame of the first
    /// one with the center at the origin: the edge-connected component
    /// containing the center.
    pub forced: Vec<Tile>,
    /// Size of the intersection after each occurrence.
    pub history: Vec<usize>,
    /// The intersection stopped changing by the middle occurrence.
    pub stable: bool,
}

/// Tiles with a vertex within `radius` of `c`.
fn tiles_near(patch: &Patch, grid: &PointGrid, index: &VertexIndex, c: CycloPoint, radius: f64) -> BTreeSet<Tile> {
    let mut out = BTreeSet::new();
    for v in grid.near(c, radius) {
        for corner in &index.corners[&v] {
            out.insert(patch.tiles()[corner.tile as usize]);
        }
    }
    out
}

/// The 20 lattice orientations about the origin.
fn orientations() -> impl Iterator<Item = Isometry> {
    (0..10).flat_map(|r| [false, true].map(move |f| Isometry::new(r, f, CycloPoint::ZERO)))
}

/// `kingdom`: intersects the neighbourhoods of radius `radius` of every
/// occurrence whose neighbourhood is complete, aligned on the center.
pub fn kingdom(patch: &Patch, center: &KingdomCenter, radius: f64) -> Result<KingdomReport, AnalysisError> {
    let index = VertexIndex::new(patch);
    let grid = PointGrid::new(index.corners.keys().copied(), 2.0);
    let complete = |c: CycloPoint, r: f64| grid.near(c, r).into_iter().all(|v| index.is_interior(patch, v));
    // each occurrence: a reference point and the tiles forming the center
    let occurrences: Vec<(CycloPoint, BTreeSet<Tile>)> = match center {
        KingdomCenter::Config(name) => config_centers(patch, &index, name)
            .into_iter()
            .map(|v| {
                let tiles = index.corners[&v].iter().map(|c| patch.tiles()[c.tile as usize]).collect();
                (v, tiles)
            })
            .collect(),
        KingdomCenter::Tile(kind) => patch
            .sorted_tiles()
            .into_iter()
            .filter(|t| t.kind == *kind)
            .map(|t| (t.pose.translation, BTreeSet::from([t])))
            .collect(),
    };
    let found = occurrences.len();
    let margin = radius + 3.0;
    let usable: Vec<_> = occurrences.into_iter().filter(|(c, _)| complete(*c, margin)).collect();
    if found < 2 {
        return Err(AnalysisError::TooFewOccurrences { config: center.to_string(), needed: 2, found });
    }
    if usable.len() < 2 {
        return Err(AnalysisError::NoMargin(center.to_string()));
    }
    let at_origin = |c: CycloPoint, g: &Isometry, set: &BTreeSet<Tile>| -> BTreeSet<Tile> {
        let iso = g.compose(&Isometry::translation(-c));
        set.iter().map(|t| t.transformed(&iso)).collect()
    };
    let (c0, core0) = &usable[0];
    let reference = at_origin(*c0, &Isometry::IDENTITY, core0);
    let mut forced: Option<BTreeSet<Tile>> = None;
    let mut history = Vec::new();
    for (c, core) in &usable {
        let near = tiles_near(patch, &grid, &index, *c, radius);
        let mut aligned = BTreeSet::new();
        for g in orientations() {
            if at_origin(*c, &g, core) == reference {
                aligned.extend(at_origin(*c, &g, &near));
            }
        }
        let next = match forced {
            None => aligned,
            Some(f) => f.intersection(&aligned).copied().collect(),
        };
        history.push(next.len());
        forced = Some(next);
    }
    let forced = forced.unwrap_or_default();
    let last = *history.last().unwrap_or(&0);
    let settled = history.iter().position(|&h| h == last).unwrap_or(0);
    let stable = usable.len() >= 4 && settled < usable.len() / 2;
    let forced = connected_component(&forced, &reference);
    Ok(KingdomReport { center: center.clone(), occurrences: usable.len(), forced, history, stable })
}

/// Tiles of `set` edge-connected to `seed`.
fn connected_component(set: &BTreeSet<Tile>, seed: &BTreeSet<Tile>) -> Vec<Tile> {
    let mut by_edge: HashMap<crate::tiling::Segment, Vec<Tile>> = HashMap::new();
    for t in set {
        let v = t.vertices();
        for i in 0..v.len() {
            by_edge.entry(crate::tiling::segment(v[i], v[(i + 1) % v.len()])).or_default().push(*t);
        }
    }
    let mut seen: BTreeSet<Tile> = seed.iter().filter(|t| set.contains(t)).copied().collect();
    let mut stack: Vec<Tile> = seen.iter().copied().collect();
    while let Some(t) = stack.pop() {
        let v = t.vertices();
        for i in 0..v.len() {
            for n in &by_edge[&crate::tiling::segment(v[i], v[(i + 1) % v.len()])] {
                if seen.insert(*n) {
                    stack.push(*n);
                }
            }
        }
    }
    seen.into_iter().collect()
}
