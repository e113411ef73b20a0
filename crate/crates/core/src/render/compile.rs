use std::collections::{BTreeMap, HashMap};

use super::{track_value, ElementState, Keyframe, KeyframeSchedule, Pivot, Property, PropertyTrack, ScaleAxis, Value};
use crate::diagnostics::{Code, Diagnostic, Origin};
use crate::interpret::{Behavior, Direction, Easing, Stagger};
use crate::scene::{Role, VisualScene};
use crate::video::{AnimationUnit, DataVideoSpec, EffectConstants, EffectRegistry};

#[derive(Debug, Clone)]
pub struct Compiled {
    pub schedule: KeyframeSchedule,
    pub diagnostics: Vec<Diagnostic>,
}

pub fn compile_schedule(spec: &DataVideoSpec, scene: &VisualScene) -> Compiled {
    compile_schedule_with(spec, scene, &EffectConstants::default())
}

struct Leaf<'a> {
    unit: &'a AnimationUnit,
    path: String,
}

/// Composite units are replaced by their steps, then everything is put in
/// start order (ties by position in the spec) so conflicts resolve the same
/// way however the spec was built.
fn leaves(spec: &DataVideoSpec) -> Vec<Leaf<'_>> {
    let mut out = Vec::new();
    for (i, unit) in spec.animations.iter().enumerate() {
        if unit.sub_units.is_empty() {
            out.push(Leaf {
                unit,
                path: format!("animations[{i}]"),
            });
        } else {
            for (j, sub) in unit.sub_units.iter().enumerate() {
                out.push(Leaf {
                    unit: sub,
                    path: format!("animations[{i}].sub_units[{j}]"),
                });
            }
        }
    }
    out.sort_by(|a, b| a.unit.start.total_cmp(&b.unit.start));
    out
}

struct Writer {
    initial: Vec<ElementState>,
    tracks: BTreeMap<(usize, Property), Vec<Keyframe>>,
    overridden: usize,
}

fn kf(t: f64, value: Value, easing: Easing) -> Keyframe {
    Keyframe { t, value, easing }
}

impl Writer {
    fn current(&self, e: usize, p: Property, t: f64) -> Value {
        self.tracks
            .get(&(e, p))
            .and_then(|k| track_value(k, t))
            .unwrap_or_else(|| self.initial[e].get(p))
    }

    /// Appends a unit's keyframes. Whatever the track held after the first
    /// new keyframe is discarded (the later unit wins). A first value that
    /// differs from the current one becomes a jump over `ramp` seconds.
    fn write(&mut self, e: usize, p: Property, new: &[Keyframe], ramp: f64) {
        let Some(first) = new.first() else { return };
        let s = first.t;
        let cur = self.current(e, p, s);
        let track = self.tracks.entry((e, p)).or_default();
        if track.iter().any(|k| k.t > s) {
            self.overridden += 1;
            track.retain(|k| k.t <= s);
        }
        if track.last().is_none_or(|k| k.t < s) {
            track.push(kf(s, cur, Easing::Linear));
        }
        if first.value != cur {
            track.push(kf(s + ramp, first.value, Easing::Linear));
        }
        for k in &new[1..] {
            let last = track.last_mut().expect("pinned above");
            if k.t > last.t {
                track.push(*k);
            } else {
                last.value = k.value;
            }
        }
    }

    /// Moves a property to `value` at `t` unless it is already there.
    fn set(&mut self, e: usize, p: Property, t: f64, value: Value, ramp: f64) {
        if self.current(e, p, t) != value {
            self.write(e, p, &[kf(t, value, Easing::Linear)], ramp);
        }
    }
}

fn num(v: f64) -> Value {
    Value::Number(v)
}

fn pivot_for(effect: &str, direction: Direction) -> Pivot {
    if effect.starts_with("zoom") {
        return Pivot {
            origin: [0.5, 0.5],
            axis: ScaleAxis::Both,
        };
    }
    match direction {
        Direction::Bottom => Pivot {
            origin: [0.5, 1.0],
            axis: ScaleAxis::Y,
        },
        Direction::Top => Pivot {
            origin: [0.5, 0.0],
            axis: ScaleAxis::Y,
        },
        Direction::Left => Pivot {
            origin: [0.0, 0.5],
            axis: ScaleAxis::X,
        },
        Direction::Right => Pivot {
            origin: [1.0, 0.5],
            axis: ScaleAxis::X,
        },
    }
}

/// Offset an element travels from when it flies in from `direction`.
fn travel(direction: Direction, offset: f64) -> (Property, f64) {
    match direction {
        Direction::Left => (Property::TranslateX, -offset),
        Direction::Right => (Property::TranslateX, offset),
        Direction::Top => (Property::TranslateY, -offset),
        Direction::Bottom => (Property::TranslateY, offset),
    }
}

/// Per-unit settings resolved against the effect's defaults.
struct Resolved {
    easing: Easing,
    direction: Direction,
    stagger: Stagger,
    color: [f64; 3],
}

fn resolve(unit: &AnimationUnit, registry: &EffectRegistry) -> Resolved {
    let defaults = registry.get(&unit.effect).map(|d| d.default_properties.clone()).unwrap_or_default();
    let props = unit.properties.overlay(&defaults);
    Resolved {
        easing: props.easing.unwrap_or_default(),
        direction: props.direction.unwrap_or(Direction::Bottom),
        stagger: props.stagger.unwrap_or(Stagger::Together),
        color: props.color.map_or([220.0, 30.0, 30.0], |c| c.anchor().map(f64::from)),
    }
}

/// State an element has before its entrance effect starts.
fn entrance_start(effect: &str, r: &Resolved, c: &EffectConstants, state: &mut ElementState) {
    state.opacity = 0.0;
    match effect {
        "wipe-in" => state.dash_offset = 1.0,
        "grow-in" | "zoom-in" => state.scale = c.min_scale,
        "fly-in" | "float-in" => {
            let (p, v) = travel(r.direction, c.travel_offset);
            state.set(p, num(v));
        }
        _ => {}
    }
}

pub fn compile_schedule_with(spec: &DataVideoSpec, scene: &VisualScene, constants: &EffectConstants) -> Compiled {
    let registry = EffectRegistry::new(constants);
    let index: HashMap<&str, usize> = scene
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.id.as_str(), i))
        .collect();
    let expand = |id: &str| -> Vec<usize> {
        scene
            .expand(id)
            .iter()
            .filter_map(|m| index.get(m.as_str()).copied())
            .collect()
    };
    let leaves = leaves(spec);

    let mut initial: Vec<ElementState> = scene.elements.iter().map(ElementState::authored).collect();
    let mut seen = vec![false; scene.elements.len()];
    for leaf in &leaves {
        let r = resolve(leaf.unit, &registry);
        for t in &leaf.unit.targets {
            for e in expand(t) {
                if !seen[e] {
                    seen[e] = true;
                    if leaf.unit.behavior == Behavior::Entrance {
                        entrance_start(&leaf.unit.effect, &r, constants, &mut initial[e]);
                    }
                }
            }
        }
    }

    let mut w = Writer {
        initial: initial.clone(),
        tracks: BTreeMap::new(),
        overridden: 0,
    };
    let mut pivots: BTreeMap<usize, Pivot> = BTreeMap::new();
    let mut diagnostics = Vec::new();
    // per parallel exit command: last block seen and the opacity each element had before the group hid it
    let mut hidden_by_sibling: HashMap<usize, (usize, BTreeMap<usize, Value>)> = HashMap::new();
    let marks: Vec<usize> = scene
        .elements
        .iter()
        .enumerate()
        .filter(|(_, e)| e.role == Role::Mark)
        .map(|(i, _)| i)
        .collect();

    for leaf in &leaves {
        let unit = leaf.unit;
        let r = resolve(unit, &registry);
        let (a, d) = (unit.start, unit.duration);
        let b = a + d;
        w.overridden = 0;

        let mut groups: Vec<Vec<usize>> = unit.targets.iter().map(|t| expand(t)).filter(|g| !g.is_empty()).collect();
        groups.sort_by_key(|g| g[0]);
        let targeted: Vec<usize> = groups.iter().flatten().copied().collect();

        if unit.behavior == Behavior::Exit {
            if let Some(block) = unit.provenance.block_index {
                let (prev_block, saved) = hidden_by_sibling
                    .entry(unit.provenance.command_index)
                    .or_insert_with(|| (block, BTreeMap::new()));
                if *prev_block + 1 == block {
                    let restore_end = a + d * constants.dim_ramp;
                    let back: Vec<(usize, Value)> = saved
                        .iter()
                        .filter(|(e, _)| !targeted.contains(e))
                        .map(|(e, v)| (*e, *v))
                        .collect();
                    for (e, before) in back {
                        saved.remove(&e);
                        let cur = w.current(e, Property::Opacity, a);
                        let ramp = [kf(a, cur, Easing::Linear), kf(restore_end, before, Easing::Linear)];
                        w.write(e, Property::Opacity, &ramp, 0.0);
                        for (p, neutral) in [(Property::Scale, 1.0), (Property::StrokeDashOffset, 0.0)] {
                            w.set(e, p, a, num(neutral), (restore_end - a).min(constants.jump_ramp));
                        }
                    }
                }
                *prev_block = block;
                for &e in &targeted {
                    let before = w.current(e, Property::Opacity, a);
                    saved.entry(e).or_insert(before);
                }
            }
        }

        if unit.effect == "keep-one-fade-others" {
            let dim_in = a + d * constants.dim_ramp;
            let dim_out = b - d * constants.dim_ramp;
            for &e in &marks {
                if targeted.contains(&e) {
                    continue;
                }
                let cur = w.current(e, Property::Opacity, a).number();
                if cur <= constants.dim_opacity {
                    continue;
                }
                let dim = num(constants.dim_opacity);
                let ks = [
                    kf(a, num(cur), Easing::Linear),
                    kf(dim_in, dim, r.easing),
                    kf(dim_out, dim, Easing::Linear),
                    kf(b, num(cur), r.easing),
                ];
                w.write(e, Property::Opacity, &ks, 0.0);
            }
        } else {
            let n = groups.len();
            for (i, group) in groups.iter().enumerate() {
                let (s, f) = match r.stagger {
                    Stagger::Together => (a, b),
                    Stagger::OneByOne => (
                        a + d * i as f64 / n as f64,
                        if i + 1 == n { b } else { a + d * (i + 1) as f64 / n as f64 },
                    ),
                };
                for &e in group {
                    apply(&mut w, &mut pivots, e, &unit.effect, &r, constants, s, f);
                }
            }
        }

        if w.overridden > 0 {
            diagnostics.push(
                Diagnostic::warning(
                    Code::ConflictOverridden,
                    format!(
                        "`{}` at {}s cuts short {} property animation(s) still running from earlier units",
                        unit.effect, unit.start, w.overridden
                    ),
                )
                .with_path(leaf.path.clone())
                .with_origin(Origin::Spec),
            );
        }
    }

    let max_t = w.tracks.values().filter_map(|k| k.last()).map(|k| k.t).fold(0.0, f64::max);
    let ids = |e: usize| scene.elements[e].id.clone();
    Compiled {
        schedule: KeyframeSchedule {
            total_duration: spec.total_duration().max(max_t),
            initial_state: initial.iter().enumerate().map(|(e, s)| (ids(e), *s)).collect(),
            tracks: w
                .tracks
                .into_iter()
                .map(|((e, property), keyframes)| PropertyTrack {
                    element_id: ids(e),
                    property,
                    keyframes,
                })
                .collect(),
            pivots: pivots.into_iter().map(|(e, p)| (ids(e), p)).collect(),
        },
        diagnostics,
    }
}

/// Keyframes for one element animated over `[a, b]`.
#[allow(clippy::too_many_arguments)]
fn apply(
    w: &mut Writer,
    pivots: &mut BTreeMap<usize, Pivot>,
    e: usize,
    effect: &str,
    r: &Resolved,
    c: &EffectConstants,
    a: f64,
    b: f64,
) {
    use Property::*;
    let d = b - a;
    let ramp = c.jump_ramp.min(d / 10.0);
    let ez = r.easing;
    let at = |k: f64| a + d * k;
    let lin = Easing::Linear;
    let cur = |w: &Writer, p: Property| w.current(e, p, a);
    let ramp_to = |w: &mut Writer, p: Property, from: Value, to: Value| {
        w.write(e, p, &[kf(a, from, lin), kf(b, to, ez)], ramp);
    };
    // an entrance shows the element in its authored geometry
    let reset = |w: &mut Writer, keep: &[Property]| {
        for (p, neutral) in [(TranslateX, 0.0), (TranslateY, 0.0), (Scale, 1.0), (StrokeDashOffset, 0.0)] {
            if !keep.contains(&p) {
                w.set(e, p, a, num(neutral), ramp);
            }
        }
    };
    let pulses = |w: &mut Writer, p: Property, low: Value| {
        let base = cur(w, p);
        let ks = [
            kf(a, base, lin),
            kf(at(0.25), low, ez),
            kf(at(0.5), base, ez),
            kf(at(0.75), low, ez),
            kf(b, base, ez),
        ];
        w.write(e, p, &ks, ramp);
    };

    match effect {
        "wipe-in" => {
            reset(w, &[StrokeDashOffset]);
            w.set(e, Opacity, a, num(1.0), ramp);
            ramp_to(w, StrokeDashOffset, num(1.0), num(0.0));
        }
        "grow-in" | "zoom-in" => {
            pivots.entry(e).or_insert_with(|| pivot_for(effect, r.direction));
            reset(w, &[Scale]);
            if effect == "grow-in" {
                w.set(e, Opacity, a, num(1.0), ramp);
            } else {
                let o = cur(w, Opacity);
                ramp_to(w, Opacity, o, num(1.0));
            }
            ramp_to(w, Scale, num(c.min_scale), num(1.0));
        }
        "fly-in" | "float-in" => {
            let (p, offset) = travel(r.direction, c.travel_offset);
            reset(w, &[p]);
            let o = cur(w, Opacity);
            ramp_to(w, Opacity, o, num(1.0));
            ramp_to(w, p, num(offset), num(0.0));
        }
        "shine" => {
            let o = cur(w, Opacity).number();
            pulses(w, Opacity, num(o * c.shine_low));
        }
        "flash" => pulses(w, Opacity, num(0.0)),
        "bounce" => {
            let y = cur(w, TranslateY).number();
            pulses(w, TranslateY, num(y - c.bounce_height));
        }
        "change-color" => {
            let from = cur(w, FillColor);
            ramp_to(w, FillColor, from, Value::Color(r.color));
        }
        "fade-out" => {
            let o = cur(w, Opacity);
            ramp_to(w, Opacity, o, num(0.0));
        }
        "wipe-out" => {
            let o = cur(w, Opacity);
            let dash = cur(w, StrokeDashOffset);
            w.write(e, StrokeDashOffset, &[kf(a, dash, lin), kf(b - ramp, num(1.0), ez)], ramp);
            w.write(e, Opacity, &[kf(b - ramp, o, lin), kf(b, num(0.0), lin)], ramp);
        }
        "zoom-out" => {
            pivots.entry(e).or_insert_with(|| pivot_for(effect, r.direction));
            let (o, s) = (cur(w, Opacity), cur(w, Scale));
            ramp_to(w, Opacity, o, num(0.0));
            ramp_to(w, Scale, s, num(c.min_scale));
        }
        "hide" => w.set(e, Opacity, a, num(0.0), ramp),
        // fade-in, and the fallback for composite units without steps
        _ => {
            reset(w, &[]);
            let o = cur(w, Opacity);
            ramp_to(w, Opacity, o, num(1.0));
        }
    }
}
