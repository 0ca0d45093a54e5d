//! Oriented link diagrams in planar-diagram (PD) notation.
//!
//! A crossing is a 4-tuple of arc labels listed counterclockwise, starting
//! at the incoming under-strand. Slots 0 and 2 carry the under-strand, slots
//! 1 and 3 the over-strand. The A-smoothing joins slots (0,1) and (2,3); the
//! B-smoothing joins (0,3) and (1,2).

mod build;
pub mod builtin;
mod chord;
mod smoothing;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{braid_closure, insert_pattern, insert_pattern_split, pretzel_diagram, realize};
pub use chord::{ChordDiagram, ChordEnd, ChordParseError};
pub(crate) use smoothing::circle_labels;
pub use smoothing::{a_smoothing_chord_diagram, smooth, CircleSet, KauffmanState, Label};

pub type ArcLabel = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed token at byte {offset}: {token:?}")]
    Malformed { offset: usize, token: String },
    #[error("empty diagram: use the `circle` token for a crossingless unknot")]
    Empty,
    #[error("arc labels must be positive integers")]
    ZeroLabel,
    #[error("arc {arc} appears {count} times (expected exactly twice)")]
    ArcMultiplicity { arc: ArcLabel, count: usize },
    #[error("arc {arc} is used both as a crossing arc and as a crossingless circle")]
    LoopCollision { arc: ArcLabel },
    #[error("inconsistent orientation on the component through arc {arc}")]
    InconsistentOrientation { arc: ArcLabel },
    #[error("state covers {got} crossings but the diagram has {expected}")]
    StateDomain { expected: usize, got: usize },
    #[error("arc {0} does not exist in the diagram")]
    UnknownArc(ArcLabel),
    #[error("pattern sizes must be at least {min}, got g={g}, h={h}")]
    PatternSize { g: usize, h: usize, min: usize },
    #[error("unknown built-in diagram {0:?}")]
    UnknownBuiltin(String),
    #[error("pattern sites must lie on one A-circle in cyclic order")]
    PatternSites,
    #[error("A-smoothing ribbon graph is not orientable (diagram is not planar)")]
    NonPlanar,
    #[error("invalid JSON diagram: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossingSign {
    Positive,
    Negative,
}

/// An oriented link diagram. Crossing indices follow the order of the input
/// tuples and are the total order used by the incidence signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<[ArcLabel; 4]>,
    loops: Vec<ArcLabel>,
    /// Sorted distinct arc labels; position = internal arc index.
    arcs: Vec<ArcLabel>,
    /// Crossing tuples in internal arc indices.
    slots: Vec<[usize; 4]>,
    signs: Vec<CrossingSign>,
    components: usize,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    crossings: Vec<[ArcLabel; 4]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    circles: Vec<ArcLabel>,
}

impl LinkDiagram {
    /// Builds and validates a diagram from PD tuples plus crossingless
    /// circles, each of which carries its own arc label.
    pub fn new(crossings: Vec<[ArcLabel; 4]>, loops: Vec<ArcLabel>) -> Result<Self, DiagramError> {
        if crossings.is_empty() && loops.is_empty() {
            return Err(DiagramError::Empty);
        }
        let mut count: BTreeMap<ArcLabel, usize> = BTreeMap::new();
        for t in &crossings {
            for &a in t {
                if a == 0 {
                    return Err(DiagramError::ZeroLabel);
                }
                *count.entry(a).or_default() += 1;
            }
        }
        for (&arc, &c) in &count {
            if c != 2 {
                return Err(DiagramError::ArcMultiplicity { arc, count: c });
            }
        }
        let mut seen_loops = BTreeSet::new();
        for &l in &loops {
            if l == 0 {
                return Err(DiagramError::ZeroLabel);
            }
            if count.contains_key(&l) || !seen_loops.insert(l) {
                return Err(DiagramError::LoopCollision { arc: l });
            }
        }
        let mut arcs: Vec<ArcLabel> = count.keys().copied().chain(loops.iter().copied()).collect();
        arcs.sort_unstable();
        let index = |a: ArcLabel| arcs.binary_search(&a).unwrap();
        let slots: Vec<[usize; 4]> = crossings
            .iter()
            .map(|t| [index(t[0]), index(t[1]), index(t[2]), index(t[3])])
            .collect();

        let ends = arc_ends(&slots, arcs.len());
        let mut head = vec![None::<(usize, usize)>; arcs.len()];
        let mut visited = vec![false; arcs.len()];
        let mut components = loops.len();
        for start in 0..arcs.len() {
            if visited[start] || ends[start].is_empty() {
                continue;
            }
            components += 1;
            // Walk the component entering each arc's far end.
            let walk = trace_component(&slots, &ends, start);
            let mut forward_votes = 0usize;
            let mut backward_votes = 0usize;
            for &(arc, (_, slot)) in &walk {
                visited[arc] = true;
                match slot {
                    0 => forward_votes += 1,
                    2 => backward_votes += 1,
                    _ => {}
                }
            }
            if forward_votes > 0 && backward_votes > 0 {
                return Err(DiagramError::InconsistentOrientation { arc: arcs[start] });
            }
            let forward = if forward_votes + backward_votes > 0 {
                forward_votes > 0
            } else {
                // Only over-passes: orient so that labels mostly increase.
                let labels: Vec<ArcLabel> = walk.iter().map(|&(a, _)| arcs[a]).collect();
                let rising = labels.windows(2).filter(|w| w[1] > w[0]).count();
                rising * 2 >= labels.len().saturating_sub(1)
            };
            for &(arc, entry) in &walk {
                head[arc] = Some(if forward { entry } else { other_end(&ends, arc, entry) });
            }
        }

        let signs = slots
            .iter()
            .enumerate()
            .map(|(x, t)| {
                if head[t[3]] == Some((x, 3)) {
                    CrossingSign::Positive
                } else {
                    CrossingSign::Negative
                }
            })
            .collect();

        Ok(LinkDiagram { crossings, loops, arcs, slots, signs, components })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn crossings(&self) -> &[[ArcLabel; 4]] {
        &self.crossings
    }

    /// Labels of the crossingless circles.
    pub fn loops(&self) -> &[ArcLabel] {
        &self.loops
    }

    pub fn sign(&self, crossing: usize) -> CrossingSign {
        self.signs[crossing]
    }

    pub fn positive_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s == CrossingSign::Positive).count()
    }

    pub fn negative_count(&self) -> usize {
        self.crossing_count() - self.positive_count()
    }

    pub fn writhe(&self) -> i64 {
        self.positive_count() as i64 - self.negative_count() as i64
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn arc_labels(&self) -> &[ArcLabel] {
        &self.arcs
    }

    pub fn arc_index(&self, label: ArcLabel) -> Option<usize> {
        self.arcs.binary_search(&label).ok()
    }

    pub fn arc_label(&self, index: usize) -> ArcLabel {
        self.arcs[index]
    }

    /// Crossing tuple in internal arc indices.
    pub fn slots(&self, crossing: usize) -> [usize; 4] {
        self.slots[crossing]
    }

    pub(crate) fn all_slots(&self) -> &[[usize; 4]] {
        &self.slots
    }

    /// Same diagram with crossings listed in a new order:
    /// `order[k]` is the old index of the new crossing `k`.
    pub fn renumbered(&self, order: &[usize]) -> LinkDiagram {
        assert_eq!(order.len(), self.crossing_count());
        let crossings = order.iter().map(|&k| self.crossings[k]).collect();
        LinkDiagram::new(crossings, self.loops.clone()).expect("renumbering keeps validity")
    }

    /// Parses PD text: `X(a,b,c,d)` or `X[a,b,c,d]` tuples, optionally inside
    /// a `PD[...]` wrapper, plus `circle` / `circle(k)` tokens for
    /// crossingless components.
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let (crossings, loop_tokens) = parse_tokens(text)?;
        let mut used: BTreeSet<ArcLabel> = crossings.iter().flatten().copied().collect();
        used.extend(loop_tokens.iter().flatten().copied());
        let mut next = used.iter().next_back().copied().unwrap_or(0) + 1;
        let loops = loop_tokens
            .into_iter()
            .map(|l| {
                l.unwrap_or_else(|| {
                    let v = next;
                    next += 1;
                    v
                })
            })
            .collect();
        LinkDiagram::new(crossings, loops)
    }

    pub fn to_pd(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|t| format!("X({},{},{},{})", t[0], t[1], t[2], t[3]))
            .collect();
        parts.extend(self.loops.iter().map(|l| format!("circle({l})")));
        parts.join(" ")
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        let raw: DiagramJson = serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))?;
        LinkDiagram::new(raw.crossings, raw.circles)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DiagramJson { crossings: self.crossings.clone(), circles: self.loops.clone() })
            .expect("plain data serializes")
    }

    /// Whether the crossing tuples describe a graph in the sphere: every
    /// connected piece with V crossings bounds V + 2 faces.
    pub fn is_planar(&self) -> bool {
        let n = self.crossing_count();
        if n == 0 {
            return true;
        }
        let ends = arc_ends(&self.slots, self.arcs.len());
        let mut seen = vec![[false; 4]; n];
        let mut faces = 0usize;
        for x in 0..n {
            for s in 0..4 {
                if seen[x][s] {
                    continue;
                }
                faces += 1;
                let (mut cx, mut cs) = (x, s);
                while !seen[cx][cs] {
                    seen[cx][cs] = true;
                    let out = (cs + 1) % 4;
                    let arc = self.slots[cx][out];
                    (cx, cs) = other_end(&ends, arc, (cx, out));
                }
            }
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let mut pieces = n;
        for e in ends.iter().filter(|e| e.len() == 2) {
            let (a, b) = (find(&mut parent, e[0].0), find(&mut parent, e[1].0));
            if a != b {
                parent[a] = b;
                pieces -= 1;
            }
        }
        faces == n + 2 * pieces
    }

    /// Arc index → (crossing, slot) where the arc ends, per the orientation.
    /// Crossingless circles have no head.
    pub fn heads(&self) -> Vec<Option<(usize, usize)>> {
        let mut head = vec![None; self.arcs.len()];
        for (x, t) in self.slots.iter().enumerate() {
            head[t[0]] = Some((x, 0));
            let over = if self.signs[x] == CrossingSign::Positive { 3 } else { 1 };
            head[t[over]] = Some((x, over));
        }
        head
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

/// For each arc, the (crossing, slot) positions where it ends.
pub(crate) fn arc_ends(slots: &[[usize; 4]], arcs: usize) -> Vec<Vec<(usize, usize)>> {
    let mut ends = vec![Vec::with_capacity(2); arcs];
    for (x, t) in slots.iter().enumerate() {
        for (s, &a) in t.iter().enumerate() {
            ends[a].push((x, s));
        }
    }
    ends
}

pub(crate) fn other_end(ends: &[Vec<(usize, usize)>], arc: usize, end: (usize, usize)) -> (usize, usize) {
    if ends[arc][0] == end {
        ends[arc][1]
    } else {
        ends[arc][0]
    }
}

/// Walks a link component passing straight through crossings. Returns each
/// arc together with the end at which the walk enters a crossing.
pub(crate) fn trace_component(
    slots: &[[usize; 4]],
    ends: &[Vec<(usize, usize)>],
    start: usize,
) -> Vec<(usize, (usize, usize))> {
    let mut walk = Vec::new();
    let mut arc = start;
    let mut entry = ends[start][1];
    loop {
        walk.push((arc, entry));
        let (x, s) = entry;
        let out = (s + 2) % 4;
        let next = slots[x][out];
        let next_entry = other_end(ends, next, (x, out));
        if next == start && next_entry == ends[start][1] {
            break;
        }
        arc = next;
        entry = next_entry;
    }
    walk
}

type Tokens = (Vec<[ArcLabel; 4]>, Vec<Option<ArcLabel>>);

fn parse_tokens(text: &str) -> Result<Tokens, DiagramError> {
    let bytes = text.as_bytes();
    let mut crossings = Vec::new();
    let mut loops = Vec::new();
    let mut pos = 0;
    let malformed = |offset: usize| {
        let end = text[offset..].find(char::is_whitespace).map_or(text.len(), |e| offset + e);
        DiagramError::Malformed { offset, token: text[offset..end].to_string() }
    };
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() || c == b',' || c == b';' {
            pos += 1;
            continue;
        }
        if text[pos..].starts_with("PD[") || text[pos..].starts_with("PD(") {
            pos += 3;
            continue;
        }
        if (c == b']' || c == b')') && pos + 1 == bytes.len() {
            pos += 1;
            continue;
        }
        if c == b'X' {
            let open = pos + 1;
            if open >= bytes.len() || !(bytes[open] == b'(' || bytes[open] == b'[') {
                return Err(malformed(pos));
            }
            let close_char = if bytes[open] == b'(' { ')' } else { ']' };
            let close = text[open..].find(close_char).map(|e| open + e).ok_or_else(|| malformed(pos))?;
            let fields: Result<Vec<ArcLabel>, _> =
                text[open + 1..close].split(',').map(|f| f.trim().parse::<ArcLabel>()).collect();
            match fields {
                Ok(v) if v.len() == 4 => crossings.push([v[0], v[1], v[2], v[3]]),
                _ => return Err(malformed(pos)),
            }
            pos = close + 1;
            continue;
        }
        if text[pos..].starts_with("circle") {
            let after = pos + "circle".len();
            if after < bytes.len() && bytes[after] == b'(' {
                let close = text[after..].find(')').map(|e| after + e).ok_or_else(|| malformed(pos))?;
                let label = text[after + 1..close].trim().parse::<ArcLabel>().map_err(|_| malformed(pos))?;
                loops.push(Some(label));
                pos = close + 1;
            } else {
                loops.push(None);
                pos = after;
            }
            continue;
        }
        return Err(malformed(pos));
    }
    if crossings.is_empty() && loops.is_empty() {
        return Err(DiagramError::Empty);
    }
    Ok((crossings, loops))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent re-trace: follow each arc from the crossing where it is
    /// an outgoing under-strand or over-strand and check it reaches a
    /// crossing where it is incoming.
    fn arcs_consistent(d: &LinkDiagram) -> bool {
        let mut incoming = BTreeMap::new();
        let mut outgoing = BTreeMap::new();
        for (x, t) in d.crossings().iter().enumerate() {
            *incoming.entry(t[0]).or_insert(0) += 1;
            *outgoing.entry(t[2]).or_insert(0) += 1;
            let (inc, out) = if d.sign(x) == CrossingSign::Positive { (t[3], t[1]) } else { (t[1], t[3]) };
            *incoming.entry(inc).or_insert(0) += 1;
            *outgoing.entry(out).or_insert(0) += 1;
        }
        incoming.values().all(|&c| c == 1) && outgoing.values().all(|&c| c == 1) && incoming.len() == outgoing.len()
    }

    #[test]
    fn parses_trefoil() {
        let d = LinkDiagram::parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.component_count(), 1);
        assert!(arcs_consistent(&d));
        assert_eq!(d.positive_count() + d.negative_count(), 3);
        // This is the left-handed trefoil.
        assert_eq!(d.writhe(), -3);
    }

    #[test]
    fn parses_wrapped_and_brackets() {
        let d = LinkDiagram::parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(d.crossing_count(), 3);
    }

    #[test]
    fn crossingless_unknot() {
        let d = LinkDiagram::parse_pd("circle").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!((d.positive_count(), d.negative_count(), d.writhe()), (0, 0, 0));
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.loops(), &[1]);
        let two = LinkDiagram::parse_pd("circle circle").unwrap();
        assert_eq!(two.loops(), &[1, 2]);
    }

    #[test]
    fn rejects_duplicate_tuple() {
        let err = LinkDiagram::parse_pd("X(1,2,3,4) X(1,2,3,4)").unwrap_err();
        assert!(matches!(err, DiagramError::InconsistentOrientation { .. }), "{err:?}");
    }

    #[test]
    fn rejects_bad_multiplicity_and_tokens() {
        assert_eq!(
            LinkDiagram::parse_pd("X(1,2,3,4)").unwrap_err(),
            DiagramError::ArcMultiplicity { arc: 1, count: 1 }
        );
        assert!(matches!(LinkDiagram::parse_pd("Y(1,2)"), Err(DiagramError::Malformed { .. })));
        assert!(matches!(LinkDiagram::parse_pd("X(1,2,3)"), Err(DiagramError::Malformed { .. })));
        assert_eq!(LinkDiagram::parse_pd("  "), Err(DiagramError::Empty));
        assert_eq!(LinkDiagram::parse_pd("X(0,1,1,0)"), Err(DiagramError::ZeroLabel));
    }

    #[test]
    fn kink_signs() {
        // Arc 1 enters under at slot 0 and leaves over at slot 1, so the
        // over-strand runs from slot 3 to slot 1: positive.
        let pos = LinkDiagram::parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(pos.positive_count(), 1);
        let neg = LinkDiagram::parse_pd("X(1,2,2,1)").unwrap();
        assert_eq!(neg.negative_count(), 1);
        let neg2 = LinkDiagram::parse_pd("X(2,1,1,2)").unwrap();
        assert_eq!(neg2.negative_count(), 1);
    }

    #[test]
    fn planarity() {
        assert!(LinkDiagram::parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap().is_planar());
        assert!(LinkDiagram::parse_pd("X(1,1,2,2)").unwrap().is_planar());
        // Two interleaved bands on the same side of one circle.
        let crossed = ChordDiagram::from_text("circle a b c d\nchord a c\nchord b d").unwrap();
        assert_eq!(realize(&crossed), Err(DiagramError::NonPlanar));
        let split = crossed.with_right_sides(&[1]);
        assert!(realize(&split).unwrap().is_planar());
    }

    #[test]
    fn json_mirror() {
        let d = LinkDiagram::from_json(r#"{"crossings":[[1,4,2,5],[3,6,4,1],[5,2,6,3]]}"#).unwrap();
        assert_eq!(d, LinkDiagram::parse_pd(&d.to_pd()).unwrap());
        assert_eq!(LinkDiagram::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn renumbering_keeps_signs() {
        let d = LinkDiagram::parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let r = d.renumbered(&[2, 0, 1]);
        assert_eq!(r.writhe(), d.writhe());
        assert_eq!(r.crossings()[0], d.crossings()[2]);
    }
}
