use std::fmt::Write;

use super::{json::letter_to_text, Direction, Po2dta};

impl Po2dta {
    /// Graphviz rendering; forward states are boxes, backward ones ellipses.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph po2dta {\n  rankdir=LR;\n");
        for (q, st) in self.states.iter().enumerate() {
            let shape = match st.direction {
                Some(Direction::Forward) => "box",
                Some(Direction::Backward) => "ellipse",
                None if q == self.accept => "doublecircle",
                None => "circle",
            };
            let _ = writeln!(
                out,
                "  q{q} [label=\"{} ({})\", shape={shape}];",
                escape(&st.name),
                st.rank
            );
        }
        let _ = writeln!(out, "  init [shape=point];\n  init -> q{};", self.start);
        for t in &self.transitions {
            let mut label = format!(
                "{}, {}",
                letter_to_text(&t.letter),
                t.guard.display_with(&self.clocks)
            );
            if !t.resets.is_empty() {
                let names: Vec<&str> = t.resets.iter().map(|&c| self.clocks[c].as_str()).collect();
                let _ = write!(label, ", {} := T", names.join(","));
            }
            let _ = writeln!(
                out,
                "  q{} -> q{} [label=\"{}\"];",
                t.from,
                t.to,
                escape(&label)
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
