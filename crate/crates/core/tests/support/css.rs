//! Headless evaluation of an emitted preview page: reads the generated
//! `@keyframes` and per-element rules back and computes what a browser would
//! show at a given time, without touching the library's sampler.

use std::collections::BTreeMap;

use super::schedule::cubic_bezier;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Timing {
    Linear,
    Bezier([f64; 4]),
}

#[derive(Debug, Clone)]
struct Stop {
    offset: f64,
    decls: BTreeMap<String, String>,
    timing: Timing,
}

#[derive(Debug, Clone, Default)]
struct Rule {
    decls: Vec<(String, String)>,
}

impl Rule {
    fn get(&self, name: &str) -> Option<&str> {
        self.decls.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CssState {
    pub opacity: f64,
    pub translate: [f64; 2],
    pub scale: f64,
    pub dash_offset: f64,
    /// Only when the page sets the paint.
    pub paint: Option<[f64; 3]>,
    pub has_translate: bool,
    pub has_scale: bool,
    pub has_dasharray: bool,
}

#[derive(Debug, Clone)]
pub struct Page {
    pub duration: f64,
    keyframes: BTreeMap<String, Vec<Stop>>,
    rules: BTreeMap<usize, Rule>,
    /// data-sr-n → element id.
    pub ids: BTreeMap<usize, String>,
}

fn declarations(body: &str) -> Vec<(String, String)> {
    body.split(';')
        .filter_map(|d| {
            let (k, v) = d.split_once(':')?;
            Some((k.trim().to_owned(), v.trim().to_owned()))
        })
        .collect()
}

fn timing_of(raw: &str) -> Timing {
    let raw = raw.trim();
    if raw == "linear" {
        return Timing::Linear;
    }
    let inner = raw
        .strip_prefix("cubic-bezier(")
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or_else(|| panic!("unsupported timing function {raw}"));
    let n: Vec<f64> = inner.split(',').map(|x| x.trim().parse().expect("number")).collect();
    Timing::Bezier([n[0], n[1], n[2], n[3]])
}

fn unescape(s: &str) -> String {
    s.replace("&quot;", "\"").replace("&lt;", "<").replace("&gt;", ">").replace("&amp;", "&")
}

fn number(v: &str) -> f64 {
    v.trim().parse().unwrap_or_else(|_| panic!("not a number: {v}"))
}

fn rgb(v: &str) -> [f64; 3] {
    let inner = v.trim().strip_prefix("rgb(").and_then(|r| r.strip_suffix(')')).expect("rgb()");
    let n: Vec<f64> = inner.split(',').map(number).collect();
    [n[0], n[1], n[2]]
}

impl Page {
    pub fn parse(html: &str) -> Page {
        let style = html
            .split_once("<style>")
            .and_then(|(_, rest)| rest.split_once("</style>"))
            .map(|(s, _)| s)
            .expect("style element");
        let mut keyframes = BTreeMap::new();
        let mut rules = BTreeMap::new();
        for line in style.lines() {
            if let Some(rest) = line.strip_prefix("@keyframes ") {
                let (name, body) = rest.split_once('{').expect("keyframes body");
                let body = body.strip_suffix('}').expect("closed keyframes");
                let mut stops: Vec<Stop> = Vec::new();
                for chunk in body.split('}').filter(|c| !c.is_empty()) {
                    let (sel, decls) = chunk.split_once('{').expect("stop");
                    let offset = number(sel.trim_end_matches('%')) / 100.0;
                    let mut map = BTreeMap::new();
                    let mut timing = Timing::Linear;
                    for (k, v) in declarations(decls) {
                        if k == "animation-timing-function" {
                            timing = timing_of(&v);
                        } else {
                            map.insert(k, v);
                        }
                    }
                    // equal selectors merge, later declarations winning
                    match stops.last_mut() {
                        Some(last) if last.offset == offset => {
                            last.decls.extend(map);
                            last.timing = timing;
                        }
                        _ => stops.push(Stop {
                            offset,
                            decls: map,
                            timing,
                        }),
                    }
                }
                stops.sort_by(|a, b| a.offset.total_cmp(&b.offset));
                keyframes.insert(name.to_owned(), stops);
            } else if let Some(rest) = line.strip_prefix("[data-sr-n=\"") {
                let (n, rest) = rest.split_once("\"]{").expect("element rule");
                let body = rest.strip_suffix('}').expect("closed rule");
                rules.insert(n.parse().expect("index"), Rule { decls: declarations(body) });
            }
        }
        let mut ids = BTreeMap::new();
        for piece in html.split(" data-sr-n=\"").skip(1) {
            let (n, rest) = piece.split_once('"').expect("index");
            let id = rest
                .strip_prefix(" data-sr-id=\"")
                .and_then(|r| r.split_once('"'))
                .map(|(id, _)| unescape(id))
                .expect("id attribute");
            ids.insert(n.parse().expect("index"), id);
        }
        let duration = html
            .split_once("<body data-duration=\"")
            .and_then(|(_, r)| r.split_once('"'))
            .map(|(d, _)| number(d))
            .expect("body duration");
        Page {
            duration,
            keyframes,
            rules,
            ids,
        }
    }

    /// Durations of every animation on the page, in seconds.
    pub fn animation_durations(&self) -> Vec<f64> {
        self.rules
            .values()
            .filter_map(|r| r.get("animation-duration"))
            .map(|d| number(d.trim_end_matches('s')))
            .collect()
    }

    fn animated(&self, stops: &[Stop], property: &str, progress: f64) -> Option<String> {
        let with: Vec<&Stop> = stops.iter().filter(|s| s.decls.contains_key(property)).collect();
        let first = with.first()?;
        if progress <= first.offset {
            return Some(first.decls[property].clone());
        }
        for pair in with.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if progress >= a.offset && progress < b.offset {
                let u = (progress - a.offset) / (b.offset - a.offset);
                let k = match a.timing {
                    Timing::Linear => u,
                    Timing::Bezier([x1, y1, x2, y2]) => cubic_bezier(x1, y1, x2, y2, u),
                };
                let (va, vb) = (&a.decls[property], &b.decls[property]);
                return Some(if va.starts_with("rgb(") {
                    let (ca, cb) = (rgb(va), rgb(vb));
                    let c = [0, 1, 2].map(|i| ca[i] + (cb[i] - ca[i]) * k);
                    format!("rgb({},{},{})", c[0], c[1], c[2])
                } else {
                    let (x, y) = (number(va), number(vb));
                    format!("{}", x + (y - x) * k)
                });
            }
        }
        Some(with[with.len() - 1].decls[property].clone())
    }

    /// Computed state of element `n` with every animation sought to `t`.
    pub fn state(&self, n: usize, t: f64) -> CssState {
        let empty = Rule::default();
        let rule = self.rules.get(&n).unwrap_or(&empty);
        let mut values: BTreeMap<String, String> = rule.decls.iter().cloned().collect();
        if let Some(names) = rule.get("animation-name") {
            let duration = number(rule.get("animation-duration").unwrap_or("0s").trim_end_matches('s'));
            let progress = if duration > 0.0 { (t / duration).clamp(0.0, 1.0) } else { 1.0 };
            for name in names.split(',') {
                let stops = &self.keyframes[name.trim()];
                let props: Vec<String> = stops.iter().flat_map(|s| s.decls.keys().cloned()).collect();
                for p in props {
                    if let Some(v) = self.animated(stops, &p, progress) {
                        values.insert(p, v);
                    }
                }
            }
        }
        let num = |k: &str, default: f64| values.get(k).map_or(default, |v| number(v));
        CssState {
            opacity: num("opacity", 1.0),
            translate: [num("--sr-tx", 0.0), num("--sr-ty", 0.0)],
            scale: num("--sr-s", 1.0),
            dash_offset: num("stroke-dashoffset", 0.0),
            paint: values.get("fill").or_else(|| values.get("stroke")).map(|v| rgb(v)),
            has_translate: rule.get("translate").is_some(),
            has_scale: rule.get("scale").is_some(),
            has_dasharray: rule.get("stroke-dasharray").is_some(),
        }
    }
}

/// Compares the page against the sampler at `points` uniform times.
pub fn check_coherence(
    html: &str,
    schedule: &reelscript_core::render::KeyframeSchedule,
    scene: &reelscript_core::scene::VisualScene,
    points: usize,
) -> super::schedule::ContractReport {
    use reelscript_core::render::sample_frame;

    let mut report = super::schedule::ContractReport::default();
    let page = Page::parse(html);
    let total = schedule.total_duration;
    let mut note = |ok: bool, what: String| {
        report.checks += 1;
        if !ok {
            report.violations.push(what);
        }
    };
    note(page.duration == total, format!("page duration {} vs {total}", page.duration));
    for d in page.animation_durations() {
        note(d == total, format!("animation lasts {d}s, schedule {total}s"));
    }
    note(
        page.ids.len() == scene.elements.len(),
        format!("{} instrumented elements for {}", page.ids.len(), scene.elements.len()),
    );
    for t in super::schedule::sample_times(total, points) {
        let frame = sample_frame(schedule, t).expect("in range");
        for (&n, id) in &page.ids {
            let css = page.state(n, t);
            let Some(s) = frame.elements.get(id) else {
                note(false, format!("{id} missing from the frame"));
                continue;
            };
            let paint = css.paint.unwrap_or_else(|| {
                scene.element(id).map_or([0.0; 3], |e| e.rgb.map(f64::from))
            });
            let diffs = [
                (css.opacity - s.opacity).abs(),
                (css.scale - s.scale).abs(),
                (css.translate[0] - s.translate[0]).abs(),
                (css.translate[1] - s.translate[1]).abs(),
                (css.dash_offset - s.dash_offset).abs(),
                (paint[0] - s.fill[0]).abs(),
                (paint[1] - s.fill[1]).abs(),
                (paint[2] - s.fill[2]).abs(),
            ];
            let worst = diffs.iter().copied().fold(0.0, f64::max);
            note(worst <= 1e-6, format!("{id} at t={t}: page {css:?} vs sampler {s:?}"));
            let wired = (css.translate == [0.0, 0.0] || css.has_translate)
                && (css.scale == 1.0 || css.has_scale)
                && (css.dash_offset == 0.0 || css.has_dasharray);
            note(wired, format!("{id} at t={t}: a custom property has no visible effect"));
        }
    }
    report
}
