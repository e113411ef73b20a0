use serde::{Deserialize, Serialize};

use crate::interpret::{Behavior, Direction, Easing, Properties};
use crate::scene::PaletteColor;

/// Visual channels an effect may drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Channel {
    Opacity,
    Translate,
    Scale,
    StrokeDash,
    FillColor,
}

/// Tunable numbers behind the effect realizations and default timings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EffectConstants {
    /// Opacity non-targets dim to during keep-one-fade-others.
    pub dim_opacity: f64,
    /// Opacity trough of each shine pulse, relative to the current value.
    pub shine_low: f64,
    /// Distance in px that fly and float effects travel.
    pub travel_offset: f64,
    /// Height in px of each bounce.
    pub bounce_height: f64,
    /// Share of an opening spent revealing the chart scaffolding.
    pub opening_split: f64,
    /// Longest ramp used to express an instantaneous change.
    pub jump_ramp: f64,
    /// Scale standing in for "collapsed" at the start of grow and zoom.
    pub min_scale: f64,
    /// Fraction of a keep-one-fade-others unit spent dimming (and again restoring).
    pub dim_ramp: f64,
    pub entrance_duration: f64,
    pub emphasis_duration: f64,
    pub exit_duration: f64,
    pub opening_duration: f64,
}

impl Default for EffectConstants {
    fn default() -> Self {
        Self {
            dim_opacity: 0.15,
            shine_low: 0.6,
            travel_offset: 40.0,
            bounce_height: 12.0,
            opening_split: 0.4,
            jump_ramp: 0.001,
            min_scale: 0.001,
            dim_ramp: 0.2,
            entrance_duration: 1.0,
            emphasis_duration: 1.5,
            exit_duration: 0.8,
            opening_duration: 2.5,
        }
    }
}

impl EffectConstants {
    pub fn default_duration(&self, behavior: Behavior) -> f64 {
        match behavior {
            Behavior::Entrance => self.entrance_duration,
            Behavior::Emphasis => self.emphasis_duration,
            Behavior::Exit => self.exit_duration,
            Behavior::Opening => self.opening_duration,
        }
    }

    /// Names of fields outside their sensible range.
    pub fn invalid_fields(&self) -> Vec<&'static str> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let checks = [
            ("dim_opacity", unit(self.dim_opacity)),
            ("shine_low", unit(self.shine_low)),
            ("travel_offset", self.travel_offset.is_finite() && self.travel_offset >= 0.0),
            ("bounce_height", self.bounce_height.is_finite() && self.bounce_height >= 0.0),
            ("opening_split", self.opening_split > 0.0 && self.opening_split < 1.0),
            ("jump_ramp", positive(self.jump_ramp)),
            ("min_scale", self.min_scale > 0.0 && self.min_scale < 1.0),
            ("dim_ramp", self.dim_ramp > 0.0 && self.dim_ramp < 0.5),
            ("entrance_duration", positive(self.entrance_duration)),
            ("emphasis_duration", positive(self.emphasis_duration)),
            ("exit_duration", positive(self.exit_duration)),
            ("opening_duration", positive(self.opening_duration)),
        ];
        checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectDescriptor {
    pub name: String,
    pub behavior: Behavior,
    pub animated_properties: Vec<Channel>,
    /// Restores the pre-animation state when the unit ends.
    pub transient: bool,
    pub default_duration: f64,
    #[serde(default, skip_serializing_if = "Properties::is_empty")]
    pub default_properties: Properties,
}

/// The preset library, in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectRegistry {
    pub effects: Vec<EffectDescriptor>,
}

impl Default for EffectRegistry {
    fn default() -> Self {
        Self::new(&EffectConstants::default())
    }
}

impl EffectRegistry {
    pub fn new(constants: &EffectConstants) -> Self {
        use Behavior::*;
        use Channel::*;
        let props = |direction: Option<Direction>, easing: Option<Easing>, color: Option<PaletteColor>| Properties {
            color,
            direction,
            easing,
            ..Properties::default()
        };
        let table: Vec<(&str, Behavior, Vec<Channel>, bool, Properties)> = vec![
            ("fade-in", Entrance, vec![Opacity], false, Properties::default()),
            ("wipe-in", Entrance, vec![Opacity, StrokeDash], false, Properties::default()),
            ("grow-in", Entrance, vec![Opacity, Scale], false, props(Some(Direction::Bottom), None, None)),
            ("fly-in", Entrance, vec![Opacity, Translate], false, props(Some(Direction::Left), None, None)),
            ("float-in", Entrance, vec![Opacity, Translate], false, props(Some(Direction::Bottom), Some(Easing::EaseInOut), None)),
            ("zoom-in", Entrance, vec![Opacity, Scale], false, Properties::default()),
            ("shine", Emphasis, vec![Opacity], true, Properties::default()),
            ("bounce", Emphasis, vec![Translate], true, Properties::default()),
            ("flash", Emphasis, vec![Opacity], true, Properties::default()),
            ("change-color", Emphasis, vec![FillColor], false, props(None, None, Some(PaletteColor::Red))),
            ("keep-one-fade-others", Emphasis, vec![Opacity], true, Properties::default()),
            ("fade-out", Exit, vec![Opacity], false, Properties::default()),
            ("wipe-out", Exit, vec![Opacity, StrokeDash], false, Properties::default()),
            ("zoom-out", Exit, vec![Opacity, Scale], false, Properties::default()),
            ("hide", Exit, vec![Opacity], false, Properties::default()),
            ("opening", Opening, vec![Opacity, StrokeDash, Scale], false, Properties::default()),
        ];
        Self {
            effects: table
                .into_iter()
                .map(|(name, behavior, animated_properties, transient, default_properties)| EffectDescriptor {
                    name: name.to_owned(),
                    behavior,
                    animated_properties,
                    transient,
                    default_duration: constants.default_duration(behavior),
                    default_properties,
                })
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&EffectDescriptor> {
        self.effects.iter().find(|e| e.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.effects.iter().map(|e| e.name.as_str())
    }

    pub fn for_behavior(&self, behavior: Behavior) -> impl Iterator<Item = &EffectDescriptor> {
        self.effects.iter().filter(move |e| e.behavior == behavior)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_presets_present() {
        let r = EffectRegistry::default();
        for name in [
            "fade-in", "wipe-in", "grow-in", "fly-in", "float-in", "zoom-in", "shine", "bounce", "flash",
            "change-color", "keep-one-fade-others", "fade-out", "zoom-out", "hide",
        ] {
            assert!(r.get(name).is_some(), "{name}");
        }
        assert_eq!(r.get("grow-in").unwrap().behavior, Behavior::Entrance);
        assert!(r.get("shine").unwrap().transient);
        assert!(!r.get("fade-out").unwrap().transient);
    }

    #[test]
    fn durations_follow_constants() {
        let c = EffectConstants {
            exit_duration: 2.0,
            ..EffectConstants::default()
        };
        assert_eq!(EffectRegistry::new(&c).get("hide").unwrap().default_duration, 2.0);
        assert!(c.invalid_fields().is_empty());
        let bad = EffectConstants {
            opening_split: 1.0,
            ..c
        };
        assert_eq!(bad.invalid_fields(), vec!["opening_split"]);
    }
}
