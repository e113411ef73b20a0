use super::{AnimationUnit, Audio, DataVideoSpec, EffectConstants, EffectRegistry, Provenance, Visualization, SPEC_VERSION};
use crate::diagnostics::{Code, Diagnostic, Origin};
use crate::interpret::{refine_grouping, Behavior, CommandIR, Properties, SceneIndex, Stagger};
use crate::narration::{plain_narration, NarrationDocument};
use crate::scene::{Shape, VisualScene};
use crate::timeline::{AnchoredCommand, WordTiming};

#[derive(Debug, Clone)]
pub struct Assembly {
    pub spec: DataVideoSpec,
    pub diagnostics: Vec<Diagnostic>,
}

/// Shape-aware default for a behavior: bars grow and lines wipe in; other
/// entrances fade.
pub fn default_effect(behavior: Behavior, targets: &[String], scene: &VisualScene) -> &'static str {
    match behavior {
        Behavior::Entrance => {
            let shapes: Vec<Shape> = targets
                .iter()
                .flat_map(|t| scene.expand(t))
                .filter_map(|id| scene.element(&id).map(|e| e.shape))
                .collect();
            if !shapes.is_empty() && shapes.iter().all(|s| *s == Shape::Bar) {
                "grow-in"
            } else if !shapes.is_empty() && shapes.iter().all(|s| *s == Shape::Line) {
                "wipe-in"
            } else {
                "fade-in"
            }
        }
        Behavior::Emphasis => "keep-one-fade-others",
        Behavior::Exit => "fade-out",
        Behavior::Opening => "opening",
    }
}

/// Builds the specification from interpreted, anchored commands (already in
/// timeline order). Commands whose targets come out empty are left out and
/// reported.
pub fn assemble(
    scene: &VisualScene,
    doc: &NarrationDocument,
    timings: &[WordTiming],
    commands: &[AnchoredCommand],
    constants: &EffectConstants,
) -> Assembly {
    let registry = EffectRegistry::new(constants);
    let index = SceneIndex::new(scene);
    let mut diagnostics = Vec::new();
    let mut units: Vec<AnimationUnit> = Vec::new();

    for cmd in commands {
        let span = cmd.anchor.utterance_span;
        let mut report = |d: Diagnostic| diagnostics.push(d.relocate(span, Origin::Narration));
        let provenance = Provenance {
            command_index: cmd.anchor.command_index,
            utterance: cmd.anchor.utterance.clone(),
            block_index: cmd.anchor.block_index,
        };
        let mut ir: CommandIR = cmd.command.clone();

        if ir.reuse_previous {
            match units.iter().rev().find(|u| u.behavior != Behavior::Opening) {
                Some(prev) => {
                    if ir.effect.is_none() {
                        ir.behavior = prev.behavior;
                        ir.effect = Some(prev.effect.clone());
                    }
                    ir.properties = ir.properties.overlay(&prev.properties);
                }
                None => report(Diagnostic::error(
                    Code::NoPreviousUnitToReuse,
                    "nothing earlier to reuse; falling back to the default effect",
                )),
            }
        }

        if ir.behavior == Behavior::Opening {
            let duration = cmd.anchor.duration.unwrap_or(constants.opening_duration);
            match opening(scene, cmd.anchor.trigger, duration, &ir.properties, constants, &provenance) {
                Some(unit) => units.push(unit),
                None => report(Diagnostic::error(
                    Code::EmptyTargetSet,
                    "the chart has nothing for an opening to reveal",
                )),
            }
            continue;
        }

        let evaluation = index.evaluate(&ir.filters);
        let empty = evaluation.targets.is_empty();
        for d in evaluation.diagnostics {
            report(d);
        }
        if empty {
            continue;
        }
        let refined = refine_grouping(&evaluation.targets, scene, ir.behavior, &ir.filters);
        for d in refined.diagnostics {
            report(d);
        }
        if refined.targets.is_empty() {
            report(Diagnostic::error(
                Code::EmptyTargetSet,
                "every matching element is chart scaffolding; nothing left to animate",
            ));
            continue;
        }

        let fallback = default_effect(ir.behavior, &refined.targets, scene);
        let descriptor = match ir.effect.as_deref() {
            None => registry.get(fallback),
            Some(name) => match registry.get(name) {
                Some(d) if d.behavior == ir.behavior || ir.behavior == Behavior::Opening => Some(d),
                Some(d) => {
                    report(Diagnostic::warning(
                        Code::EffectBehaviorMismatch,
                        format!("`{name}` is a {} effect; using it as one", d.behavior),
                    ));
                    Some(d)
                }
                None => {
                    report(Diagnostic::error(
                        Code::UnknownEffect,
                        format!("`{name}` is not in the effect library; using `{fallback}`"),
                    ));
                    registry.get(fallback)
                }
            },
        }
        .expect("default effects are registered");

        units.push(AnimationUnit {
            behavior: descriptor.behavior,
            effect: descriptor.name.clone(),
            start: cmd.anchor.trigger,
            duration: cmd.anchor.duration.unwrap_or(descriptor.default_duration),
            targets: refined.targets,
            properties: ir.properties,
            provenance,
            sub_units: Vec::new(),
        });
    }

    // stable, so equal starts keep timeline order
    units.sort_by(|a, b| a.start.total_cmp(&b.start));

    Assembly {
        spec: DataVideoSpec {
            version: SPEC_VERSION,
            visualization: Visualization {
                reference: None,
                svg: scene.svg_source.clone(),
                scene: scene.clone(),
            },
            narration: plain_narration(doc),
            audio: Audio {
                asset: None,
                words: timings.to_vec(),
            },
            animations: units,
        },
        diagnostics,
    }
}

/// Scaffolding fades in first, then the marks enter one by one.
fn opening(
    scene: &VisualScene,
    start: f64,
    duration: f64,
    properties: &Properties,
    constants: &EffectConstants,
    provenance: &Provenance,
) -> Option<AnimationUnit> {
    let collect = |pick: &dyn Fn(&crate::scene::VisualElement) -> bool| {
        let ids: Vec<String> = scene.elements.iter().filter(|e| pick(e)).map(|e| e.id.clone()).collect();
        refine_grouping(&ids, scene, Behavior::Entrance, &[]).targets
    };
    let scaffold = collect(&|e| e.role.is_structural());
    let marks = collect(&|e| e.role == crate::scene::Role::Mark);
    if scaffold.is_empty() && marks.is_empty() {
        return None;
    }
    let split = start + duration * constants.opening_split;
    let end = start + duration;
    let step = |effect: &str, from: f64, to: f64, targets: Vec<String>, stagger: Stagger| AnimationUnit {
        behavior: Behavior::Entrance,
        effect: effect.to_owned(),
        start: from,
        duration: to - from,
        targets,
        properties: Properties {
            stagger: Some(stagger),
            ..properties.clone()
        },
        provenance: provenance.clone(),
        sub_units: Vec::new(),
    };
    let mut sub_units = Vec::new();
    if !scaffold.is_empty() {
        sub_units.push(step("fade-in", start, split, scaffold.clone(), Stagger::Together));
    }
    if !marks.is_empty() {
        let effect = default_effect(Behavior::Entrance, &marks, scene);
        sub_units.push(step(effect, split, end, marks.clone(), Stagger::OneByOne));
    }
    let mut targets = scaffold;
    targets.extend(marks);
    Some(AnimationUnit {
        behavior: Behavior::Opening,
        effect: "opening".to_owned(),
        start,
        duration,
        targets,
        properties: properties.clone(),
        provenance: provenance.clone(),
        sub_units,
    })
}
