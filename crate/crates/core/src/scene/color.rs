use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Code, Diagnostic};

/// Fixed color vocabulary for matching color words in commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PaletteColor {
    Red,
    Orange,
    Yellow,
    Green,
    Teal,
    Blue,
    Purple,
    Pink,
    Brown,
    Gray,
    Black,
    White,
}

impl PaletteColor {
    /// Tie-break order for nearest-color search.
    pub const ALL: [PaletteColor; 12] = [
        PaletteColor::Red,
        PaletteColor::Orange,
        PaletteColor::Yellow,
        PaletteColor::Green,
        PaletteColor::Teal,
        PaletteColor::Blue,
        PaletteColor::Purple,
        PaletteColor::Pink,
        PaletteColor::Brown,
        PaletteColor::Gray,
        PaletteColor::Black,
        PaletteColor::White,
    ];

    /// Anchor points sit between the CSS keyword color and the usual chart
    /// palette hue so both map to the same word.
    pub fn anchor(self) -> [u8; 3] {
        match self {
            PaletteColor::Red => [220, 30, 30],
            PaletteColor::Orange => [255, 140, 10],
            PaletteColor::Yellow => [240, 220, 20],
            PaletteColor::Green => [30, 150, 40],
            PaletteColor::Teal => [20, 160, 160],
            PaletteColor::Blue => [30, 100, 210],
            PaletteColor::Purple => [130, 60, 170],
            PaletteColor::Pink => [240, 130, 190],
            PaletteColor::Brown => [140, 75, 50],
            PaletteColor::Gray => [150, 150, 150],
            PaletteColor::Black => [0, 0, 0],
            PaletteColor::White => [255, 255, 255],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PaletteColor::Red => "red",
            PaletteColor::Orange => "orange",
            PaletteColor::Yellow => "yellow",
            PaletteColor::Green => "green",
            PaletteColor::Teal => "teal",
            PaletteColor::Blue => "blue",
            PaletteColor::Purple => "purple",
            PaletteColor::Pink => "pink",
            PaletteColor::Brown => "brown",
            PaletteColor::Gray => "gray",
            PaletteColor::Black => "black",
            PaletteColor::White => "white",
        }
    }

    /// Color word as it may appear in a command.
    pub fn from_word(word: &str) -> Option<PaletteColor> {
        let w = word.to_ascii_lowercase();
        let w = w.as_str();
        Self::ALL
            .into_iter()
            .find(|c| c.name() == w)
            .or(match w {
                "grey" => Some(PaletteColor::Gray),
                "violet" => Some(PaletteColor::Purple),
                "cyan" => Some(PaletteColor::Teal),
                _ => None,
            })
    }

    pub fn nearest(rgb: [u8; 3]) -> PaletteColor {
        let mut best = PaletteColor::Red;
        let mut best_d = u32::MAX;
        for c in Self::ALL {
            let a = c.anchor();
            let d: u32 = (0..3)
                .map(|i| {
                    let diff = rgb[i] as i32 - a[i] as i32;
                    (diff * diff) as u32
                })
                .sum();
            // strict `<` keeps the earlier palette entry on ties
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorTerm {
    pub term: PaletteColor,
    pub raw: String,
}

/// Parses a hex, `rgb()` or CSS named color.
pub fn parse_rgb(raw: &str) -> Option<[u8; 3]> {
    let c = svgtypes::Color::from_str(&raw.trim().to_ascii_lowercase()).ok()?;
    Some([c.red, c.green, c.blue])
}

/// Maps a raw color string to the nearest palette term. Unparsable input
/// yields gray plus a warning.
pub fn canonical_color(raw: &str) -> (ColorTerm, Option<Diagnostic>) {
    match parse_rgb(raw) {
        Some(rgb) => (
            ColorTerm {
                term: PaletteColor::nearest(rgb),
                raw: raw.to_owned(),
            },
            None,
        ),
        None => (
            ColorTerm {
                term: PaletteColor::Gray,
                raw: raw.to_owned(),
            },
            Some(Diagnostic::warning(
                Code::UnparsableColor,
                format!("cannot parse color `{raw}`; using gray"),
            )),
        ),
    }
}
