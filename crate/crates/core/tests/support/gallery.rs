use reelscript_core::narration::Node;
use reelscript_core::pipeline::{compile, CompileOptions, CompileOutput};

pub struct Fixture {
    pub name: &'static str,
    pub svg: &'static str,
    pub narration: &'static str,
}

macro_rules! fixture {
    ($name:literal) => {
        Fixture {
            name: $name,
            svg: include_str!(concat!("../../fixtures/gallery/", $name, "/chart.svg")),
            narration: include_str!(concat!("../../fixtures/gallery/", $name, "/narration.txt")),
        }
    };
}

pub const GALLERY: [Fixture; 6] = [
    fixture!("iris"),
    fixture!("air_travel"),
    fixture!("gdp"),
    fixture!("social_media"),
    fixture!("smartphone"),
    fixture!("covid"),
];

pub fn fixture(name: &str) -> &'static Fixture {
    GALLERY.iter().find(|f| f.name == name).expect("known fixture")
}

impl Fixture {
    pub fn compile(&self) -> CompileOutput {
        compile(self.svg, self.narration, &CompileOptions::default())
    }
}

fn text(s: &str) -> Node {
    Node::Text(s.to_owned())
}

fn command(utterance: &str, blocks: Vec<Vec<Node>>) -> Node {
    Node::Command {
        utterance: utterance.to_owned(),
        layout: vec![String::new(); blocks.len()],
        blocks,
    }
}

/// The Iris narration as a hand-built tree.
pub fn iris_golden() -> Vec<Node> {
    vec![
        command("Add an opening animation to show the whole chart", vec![]),
        text(" This parallel coordinates plot shows the Iris dataset, with four distinct axes "),
        command("fade out all lines", vec![]),
        text(" displaying the measurements of each flower. "),
        command(
            "Flash each axis one by one",
            vec![vec![text("sepal length, sepal width, petal length, and petal width")]],
        ),
        text(" are the four features. "),
        command("Fade in all the lines to normal", vec![]),
        text(" Each line represents a single flower. "),
        command(
            "Hide other colored lines",
            vec![
                vec![text("The red lines stand for the setosa species.")],
                vec![text("The green lines stand for the versicolor species.")],
                vec![text("The blue lines stand for the virginica species.")],
            ],
        ),
        text(" This plot helps us discern the relative "),
        command("fade the blue lines", vec![]),
        text(" differences and "),
        command("fade the green lines", vec![]),
        text(" similarities among the three species.\n"),
    ]
}
