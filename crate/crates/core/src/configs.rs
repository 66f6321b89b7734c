//! Names for HBS and Star vertex neighbourhoods.
//!
//! The corner count gives the colour: five 72° corners meet at a red
//! vertex, three at a green one and two at a blue one. Red vertices are the
//! flowers the φ-decomposition leaves on stars, boats and hexagons.

use crate::analysis::KeyItem;
use crate::tiling::{TileKind, Tileset};

pub(crate) fn hbs_config_name(tileset: Tileset, key: &[KeyItem]) -> String {
    let mut letters: Vec<char> = key
        .iter()
        .map(|(k, ..)| match k.hbs_shape() {
            TileKind::Hexagon => 'h',
            TileKind::Boat => 'b',
            _ => 's',
        })
        .collect();
    letters.sort();
    let letters: String = letters.into_iter().collect();
    let star = key.iter().find_map(|(k, ..)| match k {
        TileKind::StarS0 => Some("-s0"),
        TileKind::StarS1 => Some("-s1"),
        TileKind::StarS2 => Some("-s2"),
        _ => None,
    });
    let suffix = if tileset == Tileset::Star { star.unwrap_or("") } else { "" };
    let base = match (key.len(), letters.as_str()) {
        (5, "hhhhh") => "bellflower".to_string(),
        (5, "bbhhh") => "orchid".to_string(),
        (5, "bbhhs") => "pansy".to_string(),
        (5, l) => format!("red-{l}"),
        (3, l) => format!("green-{l}"),
        (2, l) => format!("blue-{l}"),
        (n, l) => format!("{n}-{l}"),
    };
    base + suffix
}

/// The red-vertex neighbourhoods.
pub const FLOWERS: [&str; 3] = ["bellflower", "orchid", "pansy"];
