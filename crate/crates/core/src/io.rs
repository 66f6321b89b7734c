//! Text patch files and SVG rendering.
//!
//! A patch file is line oriented and stores integers only:
//!
//! ```text
//! hbs-patch 1 p2 6
//! half-kite 0 0 0 0 0 0
//! label 0 1 0 0 2
//! ```
//!
//! The header names the format version, tileset and scale exponent. Each
//! tile record is `kind rotation reflected c0 c1 c2 c3`, with the pose's
//! translation in the ζ basis. Optional `label` records attach a vertex
//! colour to a lattice point. Records are written sorted, so equal patches
//! give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::golden::{CycloPoint, Isometry};
use crate::tiling::{EdgeStyle, Patch, Tile, TileKind, Tileset, TilingError, VertexMark};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "hbs-patch";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Tiling { line: usize, source: TilingError },
    #[error("unsupported format version {0}")]
    Version(u32),
}

/// A patch plus optional vertex labels, as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchFile {
    pub patch: Patch,
    pub labels: BTreeMap<CycloPoint, u8>,
}

impl PatchFile {
    pub fn new(patch: Patch) -> Self {
        PatchFile { patch, labels: BTreeMap::new() }
    }
}

pub fn serialize(file: &PatchFile) -> String {
    let p = &file.patch;
    let mut out = format!("{MAGIC} {FORMAT_VERSION} {} {}\n", p.tileset.name(), p.scale_exponent);
    for t in p.sorted_tiles() {
        let [c0, c1, c2, c3] = t.pose.translation.c;
        let _ = writeln!(
            out,
            "{} {} {} {c0} {c1} {c2} {c3}",
            t.kind.name(),
            t.pose.rotation,
            u8::from(t.pose.reflected)
        );
    }
    for (q, l) in &file.labels {
        let [c0, c1, c2, c3] = q.c;
        let _ = writeln!(out, "label {c0} {c1} {c2} {c3} {l}");
    }
    out
}

pub fn serialize_patch(patch: &Patch) -> String {
    serialize(&PatchFile::new(patch.clone()))
}

fn ints<const N: usize>(fields: &[&str], line: usize) -> Result<[i64; N], IoError> {
    let bad = |msg: String| IoError::Parse { line, msg };
    if fields.len() != N {
        return Err(bad(format!("expected {N} integers, found {}", fields.len())));
    }
    let mut out = [0; N];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().map_err(|_| bad(format!("not an integer: {f:?}")))?;
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<PatchFile, IoError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or(IoError::Parse { line: 1, msg: "empty file".into() })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != MAGIC {
        return Err(IoError::Parse { line: n, msg: format!("expected `{MAGIC} <version> <tileset> <scale>`") });
    }
    let version: u32 = h[1].parse().map_err(|_| IoError::Parse { line: n, msg: "bad version".into() })?;
    if version != FORMAT_VERSION {
        return Err(IoError::Version(version));
    }
    let tileset: Tileset = h[2].parse().map_err(|e| IoError::Tiling { line: n, source: e })?;
    let [scale] = ints::<1>(&h[3..], n)?;
    let mut file = PatchFile::new(Patch::new(tileset, scale as i32));
    for (n, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f[0] == "label" {
            let [c0, c1, c2, c3, lab] = ints::<5>(&f[1..], n)?;
            if !(0..=2).contains(&lab) {
                return Err(IoError::Parse { line: n, msg: format!("label {lab} outside 0..=2") });
            }
            file.labels.insert(CycloPoint::new(c0, c1, c2, c3), lab as u8);
            continue;
        }
        let kind = TileKind::parse(tileset, f[0]).map_err(|e| IoError::Tiling { line: n, source: e })?;
        let [rot, refl, c0, c1, c2, c3] = ints::<6>(&f[1..], n)?;
        if !(0..10).contains(&rot) || !(0..=1).contains(&refl) {
            return Err(IoError::Parse { line: n, msg: "rotation must be 0..9 and reflection 0 or 1".into() });
        }
        let pose = Isometry::new(rot as i32, refl == 1, CycloPoint::new(c0, c1, c2, c3));
        file.patch.add_tile(Tile::new(kind, pose)).map_err(|e| IoError::Tiling { line: n, source: e })?;
    }
    Ok(file)
}

/// Colours and layer switches for [`render_svg`].
#[derive(Clone, Debug)]
pub struct RenderStyle {
    /// Stroke width of the first patch, then of the superimposed one.
    pub source_stroke: f64,
    pub derived_stroke: f64,
    /// Vertex label colours, indexed by label.
    pub palette: [&'static str; 3],
    pub show_source: bool,
    pub show_derived: bool,
    pub show_arrows: bool,
    pub show_labels: bool,
    /// Pixels per physical edge length.
    pub unit: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            source_stroke: 0.6,
            derived_stroke: 1.8,
            palette: ["red", "green", "blue"],
            show_source: true,
            show_derived: true,
            show_arrows: true,
            show_labels: true,
            unit: 20.0,
        }
    }
}

fn fill(kind: TileKind) -> &'static str {
    use TileKind::*;
    match kind {
        HalfKite | HalfFat | Hexagon | StarHexagon | Sapphire | Diamond => "#f3e3b5",
        HalfDart | HalfThin | Boat | StarBoat | Ruby | P1Boat => "#b9d3ee",
        Pentagon0 | Pentagon1 | Pentagon2 => "#e8e8e8",
        _ => "#d7c4e8",
    }
}

/// Renders one patch, or a source with a derived patch drawn on top. Both
/// are placed in physical coordinates, so their scale exponents may differ.
pub fn render_svg(patches: &[&PatchFile], style: &RenderStyle) -> Result<String, IoError> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for f in patches {
        for t in f.patch.tiles() {
            pts.extend(t.vertices().iter().map(|v| v.to_f64(f.patch.scale_exponent)));
        }
    }
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    if let Some(&(x, y)) = pts.first() {
        (x0, y0, x1, y1) = (x, y, x, y);
    }
    for &(x, y) in &pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let u = style.unit;
    let pad = 1.0;
    let (w, h) = ((x1 - x0 + 2.0 * pad) * u, (y1 - y0 + 2.0 * pad) * u);
    // y axis flipped so counterclockwise stays counterclockwise on screen
    let sx = |x: f64| (x - x0 + pad) * u;
    let sy = |y: f64| (y1 - y + pad) * u;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="5" markerHeight="5" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="black"/></marker></defs>"#
    );
    for (layer, f) in patches.iter().enumerate() {
        let derived = layer > 0;
        if (derived && !style.show_derived) || (!derived && !style.show_source) {
            continue;
        }
        let e = f.patch.scale_exponent;
        let stroke = if derived { style.derived_stroke } else { style.source_stroke };
        let fill_of = |k| if derived && patches.len() > 1 { "none" } else { fill(k) };
        let _ = writeln!(s, r#"<g id="layer{layer}" stroke="black" stroke-width="{stroke}" stroke-linejoin="round">"#);
        let mut arrows = String::new();
        let mut labels: BTreeMap<CycloPoint, u8> = f.labels.clone();
        for t in f.patch.sorted_tiles() {
            let v = t.vertices();
            let d: Vec<String> = v
                .iter()
                .map(|p| {
                    let (x, y) = p.to_f64(e);
                    format!("{:.3},{:.3}", sx(x), sy(y))
                })
                .collect();
            let _ = writeln!(s, r#"<path class="{}" fill="{}" d="M{} Z"/>"#, t.kind.name(), fill_of(t.kind), d.join(" L"));
            let proto = t.proto();
            let n = v.len();
            for (i, m) in proto.edge_marks.iter().enumerate() {
                let arrowed = matches!(m.style, EdgeStyle::ArrowSingle | EdgeStyle::ArrowDouble | EdgeStyle::HbsArrow);
                if !style.show_arrows || !arrowed || m.direction == 0 {
                    continue;
                }
                let (a, b) = if m.direction > 0 { (v[i], v[(i + 1) % n]) } else { (v[(i + 1) % n], v[i]) };
                let (ax, ay) = a.to_f64(e);
                let (bx, by) = b.to_f64(e);
                // a short arrow at the middle of the edge
                let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
                let (dx, dy) = ((bx - ax) * 0.15, (by - ay) * 0.15);
                let _ = writeln!(
                    arrows,
                    r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" marker-end="url(#arrow)"/>"#,
                    sx(mx - dx),
                    sy(my - dy),
                    sx(mx + dx),
                    sy(my + dy)
                );
            }
            for (i, m) in proto.vertex_marks.iter().enumerate() {
                if let VertexMark::Label(l) = m {
                    labels.entry(v[i]).or_insert(*l);
                }
            }
        }
        let _ = writeln!(s, "</g>");
        if !arrows.is_empty() {
            let _ = write!(s, r#"<g stroke="black" stroke-width="{:.2}">"#, stroke.max(0.8));
            let _ = writeln!(s);
            s.push_str(&arrows);
            let _ = writeln!(s, "</g>");
        }
        if style.show_labels && !labels.is_empty() {
            let _ = writeln!(s, r#"<g stroke="none">"#);
            for (p, l) in &labels {
                let (x, y) = p.to_f64(e);
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="{:.2}" fill="{}"/>"#,
                    sx(x),
                    sy(y),
                    u * 0.12,
                    style.palette[*l as usize % 3]
                );
            }
            let _ = writeln!(s, "</g>");
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
