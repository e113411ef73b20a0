//! Keyframe schedules compiled from a spec, the frame sampler and the HTML
//! export.

mod compile;
mod html;

pub use compile::{compile_schedule, compile_schedule_with, Compiled};
pub use html::emit_html;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Code, Diagnostic, Origin};
use crate::interpret::Easing;
use crate::scene::VisualElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Opacity,
    TranslateX,
    TranslateY,
    Scale,
    StrokeDashOffset,
    FillColor,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Opacity,
        Property::TranslateX,
        Property::TranslateY,
        Property::Scale,
        Property::StrokeDashOffset,
        Property::FillColor,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    /// sRGB channels, 0–255, unrounded while interpolating.
    Color([f64; 3]),
}

impl Value {
    pub fn number(self) -> f64 {
        match self {
            Value::Number(n) => n,
            Value::Color(c) => c[0],
        }
    }

    pub fn lerp(self, other: Value, k: f64) -> Value {
        match (self, other) {
            (Value::Color(a), Value::Color(b)) => {
                Value::Color([0, 1, 2].map(|i| a[i] + (b[i] - a[i]) * k))
            }
            (a, b) => {
                let (a, b) = (a.number(), b.number());
                Value::Number(a + (b - a) * k)
            }
        }
    }
}

fn is_linear(e: &Easing) -> bool {
    *e == Easing::Linear
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Keyframe {
    pub t: f64,
    pub value: Value,
    /// Curve of the segment that ends at this keyframe.
    #[serde(default, skip_serializing_if = "is_linear")]
    pub easing: Easing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyTrack {
    pub element_id: String,
    pub property: Property,
    pub keyframes: Vec<Keyframe>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleAxis {
    Both,
    X,
    Y,
}

/// Fixed point and axis of an element's scale animation. The origin is a
/// fraction of the element's bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pivot {
    pub origin: [f64; 2],
    pub axis: ScaleAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementState {
    pub opacity: f64,
    pub translate: [f64; 2],
    pub scale: f64,
    pub fill: [f64; 3],
    #[serde(rename = "dash-offset")]
    pub dash_offset: f64,
}

impl ElementState {
    /// How the element looks in the source chart.
    pub fn authored(element: &VisualElement) -> Self {
        Self {
            opacity: 1.0,
            translate: [0.0, 0.0],
            scale: 1.0,
            fill: element.rgb.map(f64::from),
            dash_offset: 0.0,
        }
    }

    pub fn get(&self, p: Property) -> Value {
        match p {
            Property::Opacity => Value::Number(self.opacity),
            Property::TranslateX => Value::Number(self.translate[0]),
            Property::TranslateY => Value::Number(self.translate[1]),
            Property::Scale => Value::Number(self.scale),
            Property::StrokeDashOffset => Value::Number(self.dash_offset),
            Property::FillColor => Value::Color(self.fill),
        }
    }

    pub fn set(&mut self, p: Property, v: Value) {
        match (p, v) {
            (Property::FillColor, Value::Color(c)) => self.fill = c,
            (Property::FillColor, Value::Number(_)) => {}
            (p, v) => {
                let n = v.number();
                match p {
                    Property::Opacity => self.opacity = n,
                    Property::TranslateX => self.translate[0] = n,
                    Property::TranslateY => self.translate[1] = n,
                    Property::Scale => self.scale = n,
                    Property::StrokeDashOffset => self.dash_offset = n,
                    Property::FillColor => unreachable!(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeyframeSchedule {
    pub total_duration: f64,
    /// State of every element at t = 0, in scene order.
    pub initial_state: BTreeMap<String, ElementState>,
    /// Sorted by element (scene order) then property.
    pub tracks: Vec<PropertyTrack>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pivots: BTreeMap<String, Pivot>,
}

impl KeyframeSchedule {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("schedule serializes");
        text.push('\n');
        text
    }

    pub fn max_keyframe_time(&self) -> f64 {
        self.tracks
            .iter()
            .filter_map(|t| t.keyframes.last())
            .map(|k| k.t)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameState {
    pub t: f64,
    pub elements: BTreeMap<String, ElementState>,
}

/// Smoothstep; the same curve as `cubic-bezier(1/3, 0, 2/3, 1)`.
pub fn ease(easing: Easing, u: f64) -> f64 {
    match easing {
        Easing::Linear => u,
        Easing::EaseInOut => u * u * (3.0 - 2.0 * u),
    }
}

/// Value of a keyframe list at `t`; `None` before the first keyframe.
pub fn track_value(keyframes: &[Keyframe], t: f64) -> Option<Value> {
    let first = keyframes.first()?;
    if t < first.t {
        return None;
    }
    let next = keyframes.partition_point(|k| k.t <= t);
    if next == keyframes.len() {
        return Some(keyframes[next - 1].value);
    }
    let (a, b) = (&keyframes[next - 1], &keyframes[next]);
    let u = (t - a.t) / (b.t - a.t);
    Some(a.value.lerp(b.value, ease(b.easing, u)))
}

/// Every element's state at time `t`.
pub fn sample_frame(schedule: &KeyframeSchedule, t: f64) -> Result<FrameState, Diagnostic> {
    if !(t.is_finite() && (0.0..=schedule.total_duration).contains(&t)) {
        return Err(Diagnostic::error(
            Code::OutOfRangeTime,
            format!("t = {t} lies outside 0..={}", schedule.total_duration),
        )
        .with_origin(Origin::Request));
    }
    let mut elements = schedule.initial_state.clone();
    for track in &schedule.tracks {
        if let (Some(state), Some(v)) = (
            elements.get_mut(&track.element_id),
            track_value(&track.keyframes, t),
        ) {
            state.set(track.property, v);
        }
    }
    Ok(FrameState { t, elements })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kf(t: f64, v: f64) -> Keyframe {
        Keyframe {
            t,
            value: Value::Number(v),
            easing: Easing::Linear,
        }
    }

    #[test]
    fn interpolation() {
        let ks = [kf(2.0, 0.0), kf(3.0, 1.0)];
        assert_eq!(track_value(&ks, 1.0), None);
        assert_eq!(track_value(&ks, 2.5), Some(Value::Number(0.5)));
        assert_eq!(track_value(&ks, 2.0), Some(Value::Number(0.0)));
        assert_eq!(track_value(&ks, 9.0), Some(Value::Number(1.0)));
        let eased = [kf(0.0, 0.0), Keyframe { easing: Easing::EaseInOut, ..kf(1.0, 10.0) }];
        assert_eq!(track_value(&eased, 0.5), Some(Value::Number(5.0)));
        assert!((track_value(&eased, 0.25).unwrap().number() - 1.5625).abs() < 1e-12);
    }

    #[test]
    fn colors_per_channel() {
        let a = Value::Color([0.0, 100.0, 200.0]);
        let b = Value::Color([100.0, 100.0, 0.0]);
        assert_eq!(a.lerp(b, 0.25), Value::Color([25.0, 100.0, 150.0]));
    }

    #[test]
    fn value_json_shapes() {
        assert_eq!(serde_json::to_string(&Value::Number(0.5)).unwrap(), "0.5");
        let c: Value = serde_json::from_str("[1,2,3]").unwrap();
        assert_eq!(c, Value::Color([1.0, 2.0, 3.0]));
    }
}
