use super::Behavior;
use crate::scene::{Role, Shape};

/// Verb phrase, the behavior it signals and the effect it names (if any).
/// Phrases are token sequences; longer phrases are listed before their
/// prefixes so the first hit at a position is the longest.
pub(crate) const VERBS: &[(&[&str], Behavior, Option<&str>)] = &[
    // entrance
    (&["wipe", "in"], Behavior::Entrance, Some("wipe-in")),
    (&["fade", "in"], Behavior::Entrance, Some("fade-in")),
    (&["grow", "in"], Behavior::Entrance, Some("grow-in")),
    (&["fly", "in"], Behavior::Entrance, Some("fly-in")),
    (&["float", "in"], Behavior::Entrance, Some("float-in")),
    (&["zoom", "in"], Behavior::Entrance, Some("zoom-in")),
    (&["bring", "back"], Behavior::Entrance, None),
    (&["grow"], Behavior::Entrance, Some("grow-in")),
    (&["draw"], Behavior::Entrance, Some("wipe-in")),
    (&["show"], Behavior::Entrance, None),
    (&["appear"], Behavior::Entrance, None),
    (&["enter"], Behavior::Entrance, None),
    (&["resume"], Behavior::Entrance, None),
    (&["reveal"], Behavior::Entrance, None),
    (&["display"], Behavior::Entrance, None),
    (&["restore"], Behavior::Entrance, None),
    // exit
    (&["fade", "out"], Behavior::Exit, Some("fade-out")),
    (&["zoom", "out"], Behavior::Exit, Some("zoom-out")),
    (&["wipe", "out"], Behavior::Exit, Some("wipe-out")),
    (&["fade", "away"], Behavior::Exit, Some("fade-out")),
    (&["hide"], Behavior::Exit, Some("hide")),
    (&["remove"], Behavior::Exit, None),
    (&["disappear"], Behavior::Exit, None),
    (&["fade"], Behavior::Exit, Some("fade-out")),
    // emphasis
    (&["change", "color"], Behavior::Emphasis, Some("change-color")),
    (&["change", "colour"], Behavior::Emphasis, Some("change-color")),
    (&["recolor"], Behavior::Emphasis, Some("change-color")),
    (&["keep"], Behavior::Emphasis, Some("keep-one-fade-others")),
    (&["highlight"], Behavior::Emphasis, None),
    (&["emphasize"], Behavior::Emphasis, None),
    (&["emphasise"], Behavior::Emphasis, None),
    (&["shine"], Behavior::Emphasis, Some("shine")),
    (&["flash"], Behavior::Emphasis, Some("flash")),
    (&["blink"], Behavior::Emphasis, Some("flash")),
    (&["bounce"], Behavior::Emphasis, Some("bounce")),
];

/// Inflected verb forms folded onto their base before matching.
pub(crate) fn base_form(token: &str) -> &str {
    match token {
        "shows" | "showing" | "shown" => "show",
        "appears" | "appearing" => "appear",
        "hides" | "hiding" => "hide",
        "fades" | "fading" => "fade",
        "grows" | "growing" => "grow",
        "flashes" | "flashing" => "flash",
        "blinks" | "blinking" => "blink",
        "shines" | "shining" => "shine",
        "bounces" | "bouncing" => "bounce",
        "highlights" | "highlighting" => "highlight",
        "removes" | "removing" => "remove",
        "disappears" => "disappear",
        "wipes" | "wiping" => "wipe",
        "brings" | "bringing" => "bring",
        "keeps" | "keeping" => "keep",
        "reveals" => "reveal",
        "draws" => "draw",
        other => other,
    }
}

pub(crate) enum Noun {
    Shape(Shape),
    Role(Role),
}

pub(crate) fn noun(token: &str) -> Option<Noun> {
    Some(match token {
        "bar" | "bars" => Noun::Shape(Shape::Bar),
        "line" | "lines" | "curve" | "curves" => Noun::Shape(Shape::Line),
        "point" | "points" | "dot" | "dots" | "circle" | "circles" | "bubble" | "bubbles" => {
            Noun::Shape(Shape::Point)
        }
        "slice" | "slices" | "wedge" | "wedges" | "sector" | "sectors" | "pie" => {
            Noun::Shape(Shape::PieSlice)
        }
        "area" | "areas" => Noun::Shape(Shape::Area),
        "polygon" | "polygons" | "radar" | "radars" => Noun::Shape(Shape::Polygon),
        "tick" | "ticks" => Noun::Shape(Shape::Tick),
        "axis" | "axes" => Noun::Role(Role::Axis),
        "label" | "labels" => Noun::Role(Role::Label),
        "legend" | "legends" => Noun::Role(Role::Legend),
        "title" | "titles" => Noun::Role(Role::Title),
        "gridline" | "gridlines" | "grid" => Noun::Role(Role::Gridline),
        "annotation" | "annotations" => Noun::Role(Role::Annotation),
        "background" => Noun::Role(Role::Background),
        _ => return None,
    })
}

const ORDINAL_WORDS: [&str; 20] = [
    "first",
    "second",
    "third",
    "fourth",
    "fifth",
    "sixth",
    "seventh",
    "eighth",
    "ninth",
    "tenth",
    "eleventh",
    "twelfth",
    "thirteenth",
    "fourteenth",
    "fifteenth",
    "sixteenth",
    "seventeenth",
    "eighteenth",
    "nineteenth",
    "twentieth",
];

/// `second`, `2nd`, and the misspelled `2rd` all give 2. Any numeric
/// ordinal suffix is accepted regardless of the digit it follows.
pub fn ordinal_value(token: &str) -> Option<u32> {
    if let Some(i) = ORDINAL_WORDS.iter().position(|w| *w == token) {
        return Some(i as u32 + 1);
    }
    let digits: String = token.chars().take_while(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() {
        return None;
    }
    let suffix = &token[digits.len()..];
    if !matches!(suffix, "st" | "nd" | "rd" | "th") {
        return None;
    }
    digits.parse::<u32>().ok().filter(|n| *n >= 1)
}

/// Words ending in `-ly` that are not manner adverbs.
pub(crate) const NOT_ADVERBS: &[&str] = &[
    "only",
    "fly",
    "early",
    "daily",
    "weekly",
    "monthly",
    "yearly",
    "quarterly",
    "july",
    "italy",
    "family",
    "supply",
    "apply",
    "reply",
    "ally",
    "rely",
    "assembly",
    "anomaly",
    "butterfly",
    "holy",
    "ugly",
];

pub(crate) const STAGGER_ONE_BY_ONE: &[&[&str]] = &[
    &["one", "by", "one"],
    &["one", "after", "another"],
    &["in", "turn"],
    &["in", "sequence"],
    &["individually"],
    &["sequentially"],
    &["successively"],
];

pub(crate) const STAGGER_TOGETHER: &[&[&str]] = &[
    &["together"],
    &["at", "once"],
    &["simultaneously"],
    &["all", "at", "the", "same", "time"],
];

pub(crate) const EASE_WORDS: &[&str] = &["smoothly", "gently", "gradually"];

pub(crate) const EXCEPT_WORDS: &[&[&str]] = &[
    &["except", "for"],
    &["except"],
    &["other", "than"],
    &["apart", "from"],
    &["excluding"],
    &["besides"],
    &["but", "not"],
];

pub(crate) const OTHER_WORDS: &[&str] = &["other", "others", "rest", "remaining"];

pub(crate) const REUSE: &[&[&str]] = &[
    &["same", "as", "above"],
    &["same", "as", "before"],
    &["same", "effect"],
    &["same", "animation"],
    &["same"],
    &["again"],
];
