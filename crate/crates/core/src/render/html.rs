use std::fmt::Write;

use roxmltree::{Document, ParsingOptions};

use super::{ElementState, Keyframe, KeyframeSchedule, Pivot, Property, ScaleAxis, Value};
use crate::interpret::Easing;
use crate::scene::{ingest_svg, Paint, VisualScene};
use crate::video::DataVideoSpec;

const EASE_IN_OUT: &str = "cubic-bezier(0.3333333333333333,0,0.6666666666666666,1)";

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// The CSS declaration a property value maps to.
fn declaration(p: Property, v: Value, paint: Paint) -> String {
    match (p, v) {
        (Property::FillColor, Value::Color([r, g, b])) => {
            let name = if paint == Paint::Stroke { "stroke" } else { "fill" };
            format!("{name}:rgb({r},{g},{b})")
        }
        (p, v) => {
            let n = v.number();
            match p {
                Property::Opacity => format!("opacity:{n}"),
                Property::TranslateX => format!("--sr-tx:{n}"),
                Property::TranslateY => format!("--sr-ty:{n}"),
                Property::Scale => format!("--sr-s:{n}"),
                Property::StrokeDashOffset => format!("stroke-dashoffset:{n}"),
                Property::FillColor => String::new(),
            }
        }
    }
}

fn percent(t: f64, total: f64) -> String {
    format!("{:.12}%", t / total * 100.0)
}

fn keyframes_rule(name: &str, keyframes: &[Keyframe], initial: Value, p: Property, paint: Paint, total: f64) -> String {
    let mut rule = format!("@keyframes {name}{{");
    let mut stops: Vec<(String, Value, Option<Easing>)> = Vec::new();
    if keyframes[0].t > 0.0 {
        stops.push(("0%".into(), initial, None));
    }
    for (i, k) in keyframes.iter().enumerate() {
        stops.push((percent(k.t, total), k.value, keyframes.get(i + 1).map(|n| n.easing)));
    }
    if keyframes.last().is_some_and(|k| k.t < total) {
        stops.push(("100%".into(), keyframes[keyframes.len() - 1].value, None));
    }
    for (at, value, easing) in stops {
        let _ = write!(rule, "{at}{{{}", declaration(p, value, paint));
        if easing == Some(Easing::EaseInOut) {
            let _ = write!(rule, ";animation-timing-function:{EASE_IN_OUT}");
        }
        rule.push('}');
    }
    rule.push('}');
    rule
}

fn pivot_css(p: &Pivot) -> String {
    let scale = match p.axis {
        ScaleAxis::Both => "var(--sr-s)",
        ScaleAxis::X => "var(--sr-s) 1",
        ScaleAxis::Y => "1 var(--sr-s)",
    };
    format!(
        "transform-box:fill-box;transform-origin:{}% {}%;scale:{scale}",
        p.origin[0] * 100.0,
        p.origin[1] * 100.0
    )
}

/// Inserts `data-sr-*` hooks into each element's start tag and returns the
/// root `<svg>` markup.
fn instrument(scene: &VisualScene, dashed: &[bool]) -> String {
    let source = &scene.svg_source;
    let opts = ParsingOptions {
        allow_dtd: true,
        ..ParsingOptions::default()
    };
    let root = match Document::parse_with_options(source, opts) {
        Ok(doc) => doc.root_element().range(),
        Err(_) => return String::new(),
    };
    let mut inserts: Vec<(usize, String)> = scene
        .elements
        .iter()
        .enumerate()
        .filter(|(_, e)| e.source_offset >= root.start && e.source_offset < root.end)
        .map(|(n, e)| {
            let tag_end = source[e.source_offset + 1..]
                .find(|c: char| c.is_whitespace() || c == '/' || c == '>')
                .map_or(source.len(), |i| e.source_offset + 1 + i);
            let mut attrs = format!(" data-sr-n=\"{n}\" data-sr-id=\"{}\"", escape(&e.id));
            if dashed[n] {
                attrs.push_str(" pathLength=\"1\"");
            }
            (tag_end, attrs)
        })
        .collect();
    inserts.sort_by_key(|(at, _)| *at);
    let mut out = String::with_capacity(root.len() + inserts.len() * 40);
    let mut cursor = root.start;
    for (at, attrs) in inserts {
        out.push_str(&source[cursor..at]);
        out.push_str(&attrs);
        cursor = at;
    }
    out.push_str(&source[cursor..root.end]);
    out
}

/// A standalone HTML page that plays the schedule over the chart with
/// word-synchronized captions.
pub fn emit_html(spec: &DataVideoSpec, schedule: &KeyframeSchedule, scene: &VisualScene) -> String {
    let reparsed;
    let scene = if scene.svg_source.is_empty() {
        match ingest_svg(&spec.visualization.svg) {
            Ok(i) => {
                reparsed = i.scene;
                &reparsed
            }
            Err(_) => scene,
        }
    } else {
        scene
    };
    let total = schedule.total_duration;
    let animate = total > 0.0;

    let mut dashed = vec![false; scene.elements.len()];
    let mut css = String::new();
    css.push_str(
        "@property --sr-tx{syntax:'<number>';inherits:false;initial-value:0}\n\
         @property --sr-ty{syntax:'<number>';inherits:false;initial-value:0}\n\
         @property --sr-s{syntax:'<number>';inherits:false;initial-value:1}\n",
    );
    let mut counter = 0usize;
    for (n, element) in scene.elements.iter().enumerate() {
        let tracks: Vec<_> = schedule.tracks.iter().filter(|t| t.element_id == element.id).collect();
        let authored = ElementState::authored(element);
        let initial = schedule.initial_state.get(&element.id).copied().unwrap_or(authored);
        let mut decls: Vec<String> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        for p in Property::ALL {
            let track = tracks.iter().find(|t| t.property == p).filter(|t| !t.keyframes.is_empty());
            match track {
                Some(track) if animate => {
                    let name = format!("sr{counter}");
                    counter += 1;
                    css.push_str(&keyframes_rule(&name, &track.keyframes, initial.get(p), p, element.paint, total));
                    css.push('\n');
                    names.push(name);
                    if p == Property::StrokeDashOffset {
                        dashed[n] = true;
                    }
                }
                _ => {
                    if initial.get(p) != authored.get(p) {
                        decls.push(declaration(p, initial.get(p), element.paint));
                        if p == Property::StrokeDashOffset {
                            dashed[n] = true;
                        }
                    }
                }
            }
        }
        let moves = tracks.iter().any(|t| matches!(t.property, Property::TranslateX | Property::TranslateY))
            || initial.translate != authored.translate;
        if moves {
            decls.push("translate:calc(var(--sr-tx) * 1px) calc(var(--sr-ty) * 1px)".into());
        }
        let scales = tracks.iter().any(|t| t.property == Property::Scale) || initial.scale != authored.scale;
        if scales {
            let pivot = schedule.pivots.get(&element.id).copied().unwrap_or(Pivot {
                origin: [0.5, 0.5],
                axis: ScaleAxis::Both,
            });
            decls.push(pivot_css(&pivot));
        }
        if dashed[n] {
            decls.push("stroke-dasharray:1".into());
        }
        if !names.is_empty() {
            decls.push(format!(
                "animation-name:{};animation-duration:{total}s;animation-timing-function:linear;\
                 animation-fill-mode:both;animation-play-state:paused;animation-delay:0s",
                names.join(",")
            ));
        }
        if !decls.is_empty() {
            let _ = writeln!(css, "[data-sr-n=\"{n}\"]{{{}}}", decls.join(";"));
        }
    }

    let svg = instrument(scene, &dashed);
    let mut captions = String::new();
    for w in &spec.audio.words {
        let _ = write!(
            captions,
            "<span data-start=\"{}\" data-end=\"{}\">{}</span> ",
            w.start,
            w.end,
            escape(&w.word)
        );
    }

    let mut page = String::new();
    page.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>reelscript preview</title>\n<style>\n");
    page.push_str(
        "body{font-family:system-ui,sans-serif;margin:24px;color:#222}\n\
         #sr-stage svg{max-width:100%;height:auto}\n\
         #sr-captions{margin:12px 0;line-height:1.6;max-width:60em}\n\
         #sr-captions span{color:#999}\n\
         #sr-captions span.sr-spoken{color:#222}\n\
         #sr-captions span.sr-now{background:#fde68a}\n\
         #sr-controls{display:flex;gap:8px;align-items:center}\n",
    );
    page.push_str(&css);
    page.push_str("</style>\n</head>\n");
    let _ = writeln!(page, "<body data-duration=\"{total}\">");
    let _ = writeln!(page, "<div id=\"sr-stage\">{svg}</div>");
    let _ = writeln!(page, "<div id=\"sr-captions\">{}</div>", captions.trim_end());
    let _ = writeln!(
        page,
        "<div id=\"sr-controls\"><button id=\"sr-play\" type=\"button\">Play</button>\
         <input id=\"sr-scrub\" type=\"range\" min=\"0\" max=\"{total}\" step=\"0.01\" value=\"0\">\
         <span id=\"sr-clock\"></span></div>"
    );
    page.push_str(SCRIPT);
    page.push_str("</body>\n</html>\n");
    page
}

const SCRIPT: &str = r#"<script>
(function () {
  var total = Number(document.body.dataset.duration);
  var animated = document.querySelectorAll('[data-sr-n]');
  var words = document.querySelectorAll('#sr-captions [data-start]');
  var scrub = document.getElementById('sr-scrub');
  var play = document.getElementById('sr-play');
  var clock = document.getElementById('sr-clock');
  var t = 0, playing = false, last = null;
  function seek(x) {
    t = Math.min(Math.max(x, 0), total);
    for (var i = 0; i < animated.length; i++) animated[i].style.animationDelay = (-t) + 's';
    for (var j = 0; j < words.length; j++) {
      var w = words[j], s = Number(w.dataset.start), e = Number(w.dataset.end);
      w.classList.toggle('sr-spoken', t >= s);
      w.classList.toggle('sr-now', t >= s && t < e);
    }
    scrub.value = t;
    clock.textContent = t.toFixed(2) + ' / ' + total.toFixed(2) + ' s';
  }
  function tick(now) {
    if (!playing) return;
    if (last !== null) seek(t + (now - last) / 1000);
    last = now;
    if (t >= total) { playing = false; play.textContent = 'Play'; return; }
    requestAnimationFrame(tick);
  }
  play.addEventListener('click', function () {
    playing = !playing;
    play.textContent = playing ? 'Pause' : 'Play';
    if (playing) { if (t >= total) seek(0); last = null; requestAnimationFrame(tick); }
  });
  scrub.addEventListener('input', function () { seek(Number(scrub.value)); });
  seek(0);
})();
</script>
"#;
