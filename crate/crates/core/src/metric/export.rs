//! DOT and CSV export of enumerated balls, with byte-stable ordering.

use super::Ball;
use crate::group::format_element;

/// Renders the ball as a Graphviz graph.
///
/// Vertices are labeled with canonical element text and emitted in
/// canonical order; edges are labeled with the index of the generator
/// letter that produced them (indices into the step-letter list).
pub fn ball_to_dot(ball: &Ball) -> String {
    let group = ball.group();
    let entries = ball.sorted_entries();
    let index_of = |e: &crate::group::Element| -> Option<usize> {
        entries.binary_search_by(|probe| probe.0.cmp(e)).ok()
    };
    let steps = ball.gens().step_letters(ball.directed());
    let mut out = String::new();
    let connector = if ball.directed() { "->" } else { "--" };
    out.push_str(if ball.directed() {
        "digraph ball {\n"
    } else {
        "graph ball {\n"
    });
    for (i, (e, d)) in entries.iter().enumerate() {
        out.push_str(&format!(
            "  n{i} [label=\"{}\", distance={d}];\n",
            escape(&format_element(group, e))
        ));
    }
    for (i, (e, _)) in entries.iter().enumerate() {
        for (gen_index, s) in steps.iter().enumerate() {
            let target = group.multiply(e, s).expect("ball elements are valid");
            if let Some(j) = index_of(&target) {
                // In the symmetric case each edge appears once, from its
                // lower endpoint, labeled by the first producing letter.
                if !ball.directed() && j < i {
                    continue;
                }
                out.push_str(&format!("  n{i} {connector} n{j} [label=\"{gen_index}\"];\n"));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Renders the ball as `element,distance` CSV in canonical order.
pub fn ball_to_csv(ball: &Ball) -> String {
    let group = ball.group();
    let mut out = String::from("element,distance\n");
    for (e, d) in ball.sorted_entries() {
        let text = format_element(group, &e);
        if text.contains(',') || text.contains('"') {
            out.push_str(&format!("\"{}\",{d}\n", text.replace('"', "\"\"")));
        } else {
            out.push_str(&format!("{text},{d}\n"));
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use crate::group::{parse_group, Element, GeneratingSet};
    use crate::metric::enumerate_ball;

    #[test]
    fn csv_quotes_tuple_elements_and_sorts_rows() {
        let g = parse_group("direct(zn(1),cyclic(2))").unwrap();
        let gens = GeneratingSet::standard(g.clone(), "s").unwrap();
        let ball = enumerate_ball(&gens, &g.identity(), 1, 100, false).unwrap();
        let csv = super::ball_to_csv(&ball);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "element,distance");
        assert_eq!(lines[1], "\"(-1,0)\",1");
        assert_eq!(lines[2], "\"(0,0)\",0");
        assert_eq!(lines[3], "\"(0,1)\",1");
        assert_eq!(lines[4], "\"(1,0)\",1");
    }

    #[test]
    fn dot_output_is_well_formed_and_deterministic() {
        let g = parse_group("cyclic(4)").unwrap();
        let gens = GeneratingSet::new(g.clone(), [Element::residue(1)], "s").unwrap();
        let ball = enumerate_ball(&gens, &g.identity(), 2, 100, false).unwrap();
        let dot1 = super::ball_to_dot(&ball);
        let ball2 = enumerate_ball(&gens, &g.identity(), 2, 100, false).unwrap();
        assert_eq!(dot1, super::ball_to_dot(&ball2), "export must be stable");
        assert!(dot1.starts_with("graph ball {"));
        assert!(dot1.contains("n0 [label=\"0\", distance=0];"));
        assert!(dot1.contains("--"));
        // Undirected edges appear exactly once per produced pair.
        let edge_count = dot1.matches("--").count();
        // C4 on {1,3}: cycle of length 4 = 4 edges.
        assert_eq!(edge_count, 4);
    }

    #[test]
    fn directed_dot_uses_arrows() {
        let g = parse_group("cyclic(3)").unwrap();
        let gens = GeneratingSet::new(g.clone(), [Element::residue(1)], "s").unwrap();
        let ball = enumerate_ball(&gens, &g.identity(), 2, 100, true).unwrap();
        let dot = super::ball_to_dot(&ball);
        assert!(dot.starts_with("digraph ball {"));
        assert!(dot.contains("->"));
    }
}
