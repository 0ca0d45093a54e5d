//! Named example diagrams shipped as PD files.
//!
//! - `trefoil_D22`: `pretzel_diagram(2, 2)`, a left-handed trefoil.
//! - `mirror6_1_D25`: `pretzel_diagram(2, 5)`.
//! - `8_19`: closure of the braid (σ1σ2)^4.
//! - `11n61_insertion`: `8_19` with a D(2,2) pattern split across arcs
//!   13 (x, v, y blocks) and 9 (u block) of an outer A-circle.
//! - `whitehead`: closure of σ1² with the pattern split across arcs 4 and 1.
//! - `borromean`: closure of σ1²σ2² with blocks at arcs 6, 6, 9 and 4.

use super::{DiagramError, LinkDiagram};

const FILES: [(&str, &str); 6] = [
    ("trefoil_D22", include_str!("../../data/trefoil_D22.pd")),
    ("mirror6_1_D25", include_str!("../../data/mirror6_1_D25.pd")),
    ("8_19", include_str!("../../data/8_19.pd")),
    ("11n61_insertion", include_str!("../../data/11n61_insertion.pd")),
    ("whitehead", include_str!("../../data/whitehead.pd")),
    ("borromean", include_str!("../../data/borromean.pd")),
];

pub const NAMES: [&str; 6] = ["trefoil_D22", "mirror6_1_D25", "8_19", "11n61_insertion", "whitehead", "borromean"];

pub fn builtin(name: &str) -> Result<LinkDiagram, DiagramError> {
    let (_, text) = FILES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| DiagramError::UnknownBuiltin(name.to_string()))?;
    LinkDiagram::parse_pd(text)
}

#[cfg(test)]
mod tests {
    use super::super::{a_smoothing_chord_diagram, braid_closure, insert_pattern_split, pretzel_diagram};
    use super::*;

    #[test]
    fn every_name_parses() {
        for name in NAMES {
            let d = builtin(name).unwrap();
            assert!(d.is_planar(), "{name}");
        }
        assert!(matches!(builtin("nope"), Err(DiagramError::UnknownBuiltin(_))));
    }

    #[test]
    fn files_match_their_generators() {
        let b819 = braid_closure(3, &[1, 2, 1, 2, 1, 2, 1, 2]).unwrap();
        let hopf = braid_closure(2, &[1, 1]).unwrap();
        let chain = braid_closure(3, &[1, 1, 2, 2]).unwrap();
        assert_eq!(builtin("trefoil_D22").unwrap(), pretzel_diagram(2, 2).unwrap());
        assert_eq!(builtin("mirror6_1_D25").unwrap(), pretzel_diagram(2, 5).unwrap());
        assert_eq!(builtin("8_19").unwrap(), b819);
        assert_eq!(builtin("11n61_insertion").unwrap(), insert_pattern_split(&b819, [13, 13, 13, 9], 2, 2).unwrap());
        assert_eq!(builtin("whitehead").unwrap(), insert_pattern_split(&hopf, [4, 4, 4, 1], 2, 2).unwrap());
        assert_eq!(builtin("borromean").unwrap(), insert_pattern_split(&chain, [6, 6, 9, 4], 2, 2).unwrap());
    }

    #[test]
    fn shapes() {
        // (name, crossings, p, n, components, A-circles)
        let expect = [
            ("trefoil_D22", 4, 0, 4, 1, 1),
            ("mirror6_1_D25", 7, 2, 5, 1, 1),
            ("8_19", 8, 8, 0, 1, 3),
            ("11n61_insertion", 12, 8, 4, 1, 3),
            ("whitehead", 6, 2, 4, 2, 2),
            ("borromean", 8, 4, 4, 3, 3),
        ];
        for (name, x, p, n, comps, circles) in expect {
            let d = builtin(name).unwrap();
            let got = (
                d.crossing_count(),
                d.positive_count(),
                d.negative_count(),
                d.component_count(),
                a_smoothing_chord_diagram(&d).unwrap().circle_count(),
            );
            assert_eq!(got, (x, p, n, comps, circles), "{name}");
        }
    }
}
