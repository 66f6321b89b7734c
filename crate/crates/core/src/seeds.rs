//! Named seed patches for generation.

use crate::golden::{CycloPoint, Isometry};
use crate::shapes::{phi, z};
use crate::tiling::{prototile, Patch, Tile, TileKind, Tileset, TilingError};

/// Seed names accepted by [`seed_patch`] for `tileset`.
pub fn seed_names(tileset: Tileset) -> &'static [&'static str] {
    match tileset {
        Tileset::P2 => &["sun", "star", "kite", "dart", "half-kite", "half-dart"],
        Tileset::P3 => &["fat-rhomb", "thin-rhomb", "star", "half-fat", "half-thin"],
        Tileset::Hbs => &["hexagon", "boat", "star"],
        Tileset::Star => &["hexagon", "boat", "s0", "s1", "s2"],
        Tileset::Gemstone => &["sapphire", "ruby", "topaz0", "topaz1", "topaz2"],
        Tileset::P1 => &["pentagon0", "pentagon1", "pentagon2", "diamond", "boat", "star"],
    }
}

fn placed(kind: TileKind, pts: &[CycloPoint]) -> Tile {
    let iso = Isometry::fit(&prototile(kind).boundary, pts)
        .unwrap_or_else(|| panic!("{kind}: seed vertices are not congruent to the prototile"));
    Tile::new(kind, iso)
}

/// Both halves of a split tile whose seam runs from the origin along 36°.
fn mirrored_pair(kind: TileKind) -> [Tile; 2] {
    [
        Tile::new(kind, Isometry::IDENTITY),
        Tile::new(kind, Isometry::new(2, true, CycloPoint::ZERO)),
    ]
}

fn wheel(kind: TileKind) -> Vec<Tile> {
    let pair = mirrored_pair(kind);
    (0..5)
        .flat_map(|k| pair.map(|t| t.transformed(&Isometry::rotation(2 * k))))
        .collect()
}

/// A named seed patch at scale exponent 0.
pub fn seed_patch(tileset: Tileset, name: &str) -> Result<Patch, TilingError> {
    let unknown = || TilingError::UnknownKind(tileset, name.to_string());
    let tiles: Vec<Tile> = match (tileset, name) {
        (Tileset::P2, "sun") => wheel(TileKind::HalfKite),
        (Tileset::P2, "star") => wheel(TileKind::HalfDart),
        (Tileset::P2, "kite") => mirrored_pair(TileKind::HalfKite).to_vec(),
        (Tileset::P2, "dart") => mirrored_pair(TileKind::HalfDart).to_vec(),
        (Tileset::P3, "fat-rhomb") => mirrored_pair(TileKind::HalfFat).to_vec(),
        (Tileset::P3, "star") => wheel(TileKind::HalfFat),
        (Tileset::P3, "thin-rhomb") => {
            let o = CycloPoint::ZERO;
            let (p, q) = (z(0), z(1));
            vec![
                placed(TileKind::HalfThin, &[o, p, q]),
                placed(TileKind::HalfThin, &[p + q, p, q]),
            ]
        }
        (_, n) => {
            let kind = TileKind::parse(tileset, n).map_err(|_| unknown())?;
            vec![Tile::new(kind, Isometry::IDENTITY)]
        }
    };
    let _ = phi;
    Patch::from_tiles(tileset, 0, tiles)
}
