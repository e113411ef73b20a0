//! A second, deliberately plain keyframe interpolator and the behavioral
//! contracts every compiled schedule must satisfy.

use std::collections::{BTreeMap, BTreeSet};

use reelscript_core::interpret::{Behavior, Easing, Stagger};
use reelscript_core::render::{sample_frame, ElementState, Keyframe, KeyframeSchedule, Property, Value};
use reelscript_core::scene::VisualScene;
use reelscript_core::video::{AnimationUnit, DataVideoSpec};

const TRANSIENT: [&str; 4] = ["shine", "bounce", "flash", "keep-one-fade-others"];

/// y at x on a CSS cubic-bezier(x1, y1, x2, y2), by bisection on x.
pub fn cubic_bezier(x1: f64, y1: f64, x2: f64, y2: f64, x: f64) -> f64 {
    let coord = |p1: f64, p2: f64, s: f64| {
        let r = 1.0 - s;
        3.0 * r * r * s * p1 + 3.0 * r * s * s * p2 + s * s * s
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if coord(x1, x2, mid) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    coord(y1, y2, 0.5 * (lo + hi))
}

fn eased(easing: Easing, u: f64) -> f64 {
    match easing {
        Easing::Linear => u,
        Easing::EaseInOut => cubic_bezier(1.0 / 3.0, 0.0, 2.0 / 3.0, 1.0, u),
    }
}

/// Linear scan for the segment containing `t`.
pub fn naive_value(keyframes: &[Keyframe], t: f64) -> Option<Value> {
    if keyframes.is_empty() || t < keyframes[0].t {
        return None;
    }
    for pair in keyframes.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.t <= t && t < b.t {
            let u = eased(b.easing, (t - a.t) / (b.t - a.t));
            return Some(match (a.value, b.value) {
                (Value::Color(x), Value::Color(y)) => {
                    Value::Color([x[0] + (y[0] - x[0]) * u, x[1] + (y[1] - x[1]) * u, x[2] + (y[2] - x[2]) * u])
                }
                (Value::Number(x), Value::Number(y)) => Value::Number(x + (y - x) * u),
                _ => return None,
            });
        }
    }
    Some(keyframes[keyframes.len() - 1].value)
}

pub fn naive_frame(schedule: &KeyframeSchedule, t: f64) -> BTreeMap<String, ElementState> {
    let mut out = schedule.initial_state.clone();
    for track in &schedule.tracks {
        let Some(state) = out.get_mut(&track.element_id) else {
            continue;
        };
        match (track.property, naive_value(&track.keyframes, t)) {
            (_, None) => {}
            (Property::FillColor, Some(Value::Color(c))) => state.fill = c,
            (Property::Opacity, Some(Value::Number(n))) => state.opacity = n,
            (Property::TranslateX, Some(Value::Number(n))) => state.translate[0] = n,
            (Property::TranslateY, Some(Value::Number(n))) => state.translate[1] = n,
            (Property::Scale, Some(Value::Number(n))) => state.scale = n,
            (Property::StrokeDashOffset, Some(Value::Number(n))) => state.dash_offset = n,
            (p, Some(v)) => panic!("track {p:?} holds {v:?}"),
        }
    }
    out
}

pub fn state_distance(a: &ElementState, b: &ElementState) -> f64 {
    let mut d: f64 = 0.0;
    d = d.max((a.opacity - b.opacity).abs());
    d = d.max((a.scale - b.scale).abs());
    d = d.max((a.dash_offset - b.dash_offset).abs());
    for i in 0..2 {
        d = d.max((a.translate[i] - b.translate[i]).abs());
    }
    for i in 0..3 {
        d = d.max((a.fill[i] - b.fill[i]).abs());
    }
    d
}

pub fn sample_times(total: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n).map(|k| (total * k as f64 / (n - 1) as f64).min(total)).collect()
}

#[derive(Debug, Default)]
pub struct ContractReport {
    pub checks: usize,
    pub violations: Vec<String>,
}

impl ContractReport {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

struct Leaf<'a> {
    unit: &'a AnimationUnit,
    elements: BTreeSet<String>,
}

impl Leaf<'_> {
    fn end(&self) -> f64 {
        self.unit.start + self.unit.duration
    }

    /// Units that can change elements they do not name.
    fn broad(&self) -> bool {
        self.unit.effect == "keep-one-fade-others" || self.unit.provenance.block_index.is_some()
    }

    fn affects(&self, id: &str) -> bool {
        self.broad() || self.elements.contains(id)
    }
}

fn leaves<'a>(spec: &'a DataVideoSpec, scene: &VisualScene) -> Vec<Leaf<'a>> {
    let mut out: Vec<Leaf> = spec
        .animations
        .iter()
        .flat_map(|u| u.leaves())
        .map(|unit| Leaf {
            unit,
            elements: unit.targets.iter().flat_map(|t| scene.expand(t)).collect(),
        })
        .collect();
    out.sort_by(|a, b| a.unit.start.total_cmp(&b.unit.start));
    out
}

/// Earliest start, at or after `from`, of another unit touching `id`.
fn next_touch(all: &[Leaf], me: usize, id: &str, from: f64) -> f64 {
    all.iter()
        .enumerate()
        .filter(|(k, l)| *k != me && l.unit.start >= from && l.affects(id))
        .map(|(_, l)| l.unit.start)
        .fold(f64::INFINITY, f64::min)
}

/// Checks the entrance, exit, transient and stagger contracts at `points`
/// uniform sample times, and the sampler against the plain interpolator.
pub fn check_contracts(spec: &DataVideoSpec, schedule: &KeyframeSchedule, scene: &VisualScene, points: usize) -> ContractReport {
    let mut report = ContractReport::default();
    let total = schedule.total_duration;
    let times = sample_times(total, points);
    let frames: Vec<BTreeMap<String, ElementState>> = times
        .iter()
        .map(|&t| sample_frame(schedule, t).expect("in range").elements)
        .collect();
    let at = |t: f64| sample_frame(schedule, t.clamp(0.0, total)).expect("in range").elements;

    for (t, frame) in times.iter().zip(&frames) {
        let naive = naive_frame(schedule, *t);
        let worst = frame
            .iter()
            .map(|(id, s)| state_distance(s, &naive[id]))
            .fold(0.0, f64::max);
        report.expect(worst <= 1e-6, || format!("t={t}: sampler and plain interpolator differ by {worst}"));
    }

    let all = leaves(spec, scene);

    // entrance: invisible before the first unit, fully visible after it
    for element in &scene.elements {
        let id = element.id.as_str();
        let Some((k, first)) = all.iter().enumerate().find(|(_, l)| l.elements.contains(id)) else {
            continue;
        };
        if first.unit.behavior != Behavior::Entrance {
            continue;
        }
        let (t0, t1) = (first.unit.start, first.end());
        let until = next_touch(&all, k, id, t0);
        for (t, frame) in times.iter().zip(&frames) {
            let o = frame[id].opacity;
            if *t < t0 {
                report.expect(o == 0.0, || format!("{id} visible ({o}) at {t} before its entrance at {t0}"));
            } else if *t >= t1 && *t < until {
                report.expect((o - 1.0).abs() <= 1e-9, || format!("{id} at {o} at {t} after its entrance ended at {t1}"));
            }
        }
    }

    for (k, leaf) in all.iter().enumerate() {
        let u = leaf.unit;
        // exit: gone once the unit completes
        if u.behavior == Behavior::Exit {
            for id in &leaf.elements {
                let until = next_touch(&all, k, id, u.start);
                for (t, frame) in times.iter().zip(&frames) {
                    if *t >= leaf.end() && *t < until {
                        let o = frame[id].opacity;
                        report.expect(o == 0.0, || format!("{id} still at {o} at {t} after exit `{}`", u.effect));
                    }
                }
            }
        }

        // transient: the same state just before and just after
        if TRANSIENT.contains(&u.effect.as_str()) {
            let eps = 1e-3;
            let (before, after) = (u.start - eps, leaf.end() + eps);
            let watched: Vec<&String> = if u.effect == "keep-one-fade-others" {
                schedule.initial_state.keys().collect()
            } else {
                leaf.elements.iter().collect()
            };
            let disturbed = |id: &str| {
                all.iter().enumerate().any(|(j, l)| {
                    j != k && l.unit.start < after && l.end() > before && (l.affects(id) || leaf.broad())
                })
            };
            let (fa, fb) = (at(before), at(after));
            for id in watched {
                if disturbed(id) {
                    continue;
                }
                let d = state_distance(&fa[id.as_str()], &fb[id.as_str()]);
                report.expect(d <= 1e-9, || format!("`{}` at {} leaves {id} changed by {d}", u.effect, u.start));
            }
        }

        // stagger: one tile per target, in scene order, covering the unit
        if u.properties.stagger == Some(Stagger::OneByOne) {
            let position = |t: &String| {
                scene
                    .expand(t)
                    .iter()
                    .filter_map(|m| scene.elements.iter().position(|e| &e.id == m))
                    .min()
                    .unwrap_or(usize::MAX)
            };
            let mut order: Vec<&String> = u.targets.iter().collect();
            order.sort_by_key(|t| position(t));
            let n = order.len() as f64;
            for (i, target) in order.iter().enumerate() {
                let a = u.start + u.duration * i as f64 / n;
                let b = u.start + u.duration * (i as f64 + 1.0) / n;
                for id in scene.expand(target) {
                    let crowded = all.iter().enumerate().any(|(j, l)| {
                        j != k && l.unit.start < leaf.end() && l.end() > u.start && l.affects(&id)
                    });
                    if crowded {
                        continue;
                    }
                    let stamps: Vec<f64> = schedule
                        .tracks
                        .iter()
                        .filter(|tr| tr.element_id == id)
                        .flat_map(|tr| tr.keyframes.iter().map(|kf| kf.t))
                        .filter(|t| *t >= u.start - 1e-9 && *t <= leaf.end() + 1e-9)
                        .collect();
                    let lo = stamps.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = stamps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    report.expect((lo - a).abs() <= 1e-9 && (hi - b).abs() <= 1e-9, || {
                        format!("{id}: tile {i} of `{}` spans [{lo}, {hi}], expected [{a}, {b}]", u.effect)
                    });
                }
            }
        }
    }
    report
}
