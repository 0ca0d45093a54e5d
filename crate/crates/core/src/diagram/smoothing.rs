use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::chord::ChordDiagram;
use super::{arc_ends, other_end, ArcLabel, DiagramError, LinkDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
}

/// A labelling of every crossing by A or B, stored as a bitmask over the
/// crossing order (bit set = B).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KauffmanState {
    pub bits: u64,
    pub crossings: usize,
}

impl KauffmanState {
    pub fn all_a(crossings: usize) -> Self {
        KauffmanState { bits: 0, crossings }
    }

    pub fn all_b(crossings: usize) -> Self {
        KauffmanState { bits: full_mask(crossings), crossings }
    }

    pub fn from_labels(labels: &[Label]) -> Self {
        let bits = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Label::B)
            .fold(0u64, |acc, (k, _)| acc | 1 << k);
        KauffmanState { bits, crossings: labels.len() }
    }

    pub fn label(&self, crossing: usize) -> Label {
        if self.bits >> crossing & 1 == 1 {
            Label::B
        } else {
            Label::A
        }
    }

    /// Number of B labels, the homological degree.
    pub fn b_count(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// The circles of a smoothing, each listed as the cyclic sequence of arcs
/// it runs through. Crossingless components contribute one-arc circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSet {
    pub circles: Vec<Vec<ArcLabel>>,
}

impl CircleSet {
    pub fn count(&self) -> usize {
        self.circles.len()
    }
}

#[inline]
pub(crate) fn partner(slot: usize, b_label: bool) -> usize {
    if b_label {
        3 - slot
    } else {
        slot ^ 1
    }
}

/// Circle index of every arc in the smoothing given by `bits`, circles
/// numbered in order of their smallest arc index.
pub(crate) fn circle_labels(slots: &[[usize; 4]], arcs: usize, bits: u64, out: &mut [u8]) -> usize {
    // Union-find over arcs, joined at each crossing per its label.
    let mut parent: Vec<usize> = (0..arcs).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for (x, t) in slots.iter().enumerate() {
        let b = bits >> x & 1 == 1;
        let pairs = if b { [(0, 3), (1, 2)] } else { [(0, 1), (2, 3)] };
        for (u, v) in pairs {
            let (ru, rv) = (find(&mut parent, t[u]), find(&mut parent, t[v]));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
    }
    let mut id = vec![u8::MAX; arcs];
    let mut count = 0usize;
    for a in 0..arcs {
        let r = find(&mut parent, a);
        if id[r] == u8::MAX {
            id[r] = count as u8;
            count += 1;
        }
        out[a] = id[r];
    }
    count
}

/// Smooths every crossing according to `state`.
pub fn smooth(diagram: &LinkDiagram, state: &KauffmanState) -> Result<CircleSet, DiagramError> {
    if state.crossings != diagram.crossing_count() {
        return Err(DiagramError::StateDomain { expected: diagram.crossing_count(), got: state.crossings });
    }
    let slots = diagram.all_slots();
    let n_arcs = diagram.arc_count();
    let ends = arc_ends(slots, n_arcs);
    let mut seen = vec![false; n_arcs];
    let mut circles = Vec::new();
    for start in 0..n_arcs {
        if seen[start] {
            continue;
        }
        let mut circle = Vec::new();
        if ends[start].is_empty() {
            seen[start] = true;
            circle.push(diagram.arc_label(start));
            circles.push(circle);
            continue;
        }
        let mut arc = start;
        let mut far = ends[start][1];
        loop {
            seen[arc] = true;
            circle.push(diagram.arc_label(arc));
            let (x, s) = far;
            let out = partner(s, state.label(x) == Label::B);
            let next = slots[x][out];
            let next_far = other_end(&ends, next, (x, out));
            if next == start && next_far == ends[start][1] {
                break;
            }
            arc = next;
            far = next_far;
        }
        circles.push(circle);
    }
    Ok(CircleSet { circles })
}

/// The all-A smoothing with one chord per crossing. Circles are numbered in
/// order of their smallest arc, matching the circle numbering used by the
/// chain complex. Cyclic orders are oriented so that every chord is an
/// untwisted band, which always succeeds for planar diagrams.
pub fn a_smoothing_chord_diagram(diagram: &LinkDiagram) -> Result<ChordDiagram, DiagramError> {
    let slots = diagram.all_slots();
    let n_arcs = diagram.arc_count();
    let ends = arc_ends(slots, n_arcs);
    let mut label_of = vec![0u8; n_arcs];
    let count = circle_labels(slots, n_arcs, 0, &mut label_of);

    // Per circle: (chord, end, forward) sequence and gap arcs.
    let mut seqs: Vec<Vec<(usize, u8, bool)>> = vec![Vec::new(); count];
    let mut gaps: Vec<Vec<ArcLabel>> = vec![Vec::new(); count];
    let mut along: Vec<Vec<bool>> = vec![Vec::new(); count];
    let heads = diagram.heads();
    let mut done = vec![false; count];
    for start in 0..n_arcs {
        let c = label_of[start] as usize;
        if done[c] {
            continue;
        }
        done[c] = true;
        if ends[start].is_empty() {
            gaps[c].push(diagram.arc_label(start));
            along[c].push(true);
            continue;
        }
        let mut far = ends[start][1];
        loop {
            let (x, s) = far;
            seqs[c].push((x, (s / 2) as u8, s % 2 == 0));
            let out = s ^ 1;
            let next = slots[x][out];
            let next_far = other_end(&ends, next, (x, out));
            gaps[c].push(diagram.arc_label(next));
            along[c].push(heads[next] == Some(next_far));
            if next == start && next_far == ends[start][1] {
                break;
            }
            far = next_far;
        }
    }

    // Choose circle flips so both ends of every chord run the same way.
    let mut dir = vec![[(0usize, false); 2]; diagram.crossing_count()];
    for (c, seq) in seqs.iter().enumerate() {
        for &(x, e, fwd) in seq {
            dir[x][e as usize] = (c, fwd);
        }
    }
    let mut flip: Vec<Option<bool>> = vec![None; count];
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); count];
    for d in &dir {
        let [(c0, f0), (c1, f1)] = *d;
        if c0 == c1 {
            if f0 != f1 {
                return Err(DiagramError::NonPlanar);
            }
        } else {
            adj[c0].push((c1, f0 != f1));
            adj[c1].push((c0, f0 != f1));
        }
    }
    for root in 0..count {
        if flip[root].is_some() {
            continue;
        }
        flip[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            let fc = flip[c].unwrap();
            for &(o, differ) in &adj[c] {
                let want = fc ^ differ;
                match flip[o] {
                    None => {
                        flip[o] = Some(want);
                        queue.push_back(o);
                    }
                    Some(f) if f != want => return Err(DiagramError::NonPlanar),
                    _ => {}
                }
            }
        }
    }

    let circles: Vec<Vec<(usize, u8)>> = seqs
        .iter()
        .map(|s| s.iter().map(|&(x, e, _)| (x, e)).collect())
        .collect();
    let cd = ChordDiagram::new(circles).expect("every crossing yields two chord ends").with_gaps(gaps, along);
    let flipped: Vec<usize> = (0..count).filter(|&c| flip[c] == Some(true)).collect();
    let cd = if flipped.is_empty() { cd } else { cd.reverse_circles(&flipped) };
    // Forward traversal puts the band on the left.
    let right: Vec<usize> = dir
        .iter()
        .enumerate()
        .filter(|(_, d)| d[0].1 == flip[d[0].0].unwrap())
        .map(|(k, _)| k)
        .collect();
    Ok(cd.with_right_sides(&right))
}

impl ChordDiagram {
    /// Reverses the cyclic order of the listed circles only.
    pub(crate) fn reverse_circles(&self, which: &[usize]) -> ChordDiagram {
        let reversed = self.reversed();
        let circles = (0..self.circle_count())
            .map(|c| if which.contains(&c) { reversed.circle(c).to_vec() } else { self.circle(c).to_vec() })
            .collect();
        let cd = ChordDiagram::new(circles).expect("reversal keeps chords");
        match (self.gaps(), reversed.gaps(), self.along(), reversed.along()) {
            (Some(g), Some(rg), Some(a), Some(ra)) => {
                let pick = |c: usize| which.contains(&c);
                let gaps = (0..self.circle_count()).map(|c| if pick(c) { rg[c].clone() } else { g[c].clone() }).collect();
                let along = (0..self.circle_count()).map(|c| if pick(c) { ra[c].clone() } else { a[c].clone() }).collect();
                cd.with_gaps(gaps, along)
            }
            _ => cd,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> LinkDiagram {
        LinkDiagram::parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap()
    }

    #[test]
    fn unknot_smoothing() {
        let d = LinkDiagram::parse_pd("circle").unwrap();
        let cs = smooth(&d, &KauffmanState::all_a(0)).unwrap();
        assert_eq!(cs.count(), 1);
    }

    #[test]
    fn state_domain_checked() {
        let d = trefoil();
        assert!(matches!(smooth(&d, &KauffmanState::all_a(2)), Err(DiagramError::StateDomain { .. })));
    }

    #[test]
    fn trefoil_extreme_states() {
        let d = trefoil();
        let a = smooth(&d, &KauffmanState::all_a(3)).unwrap();
        let b = smooth(&d, &KauffmanState::all_b(3)).unwrap();
        // Left-handed standard trefoil: adequate, 3 and 2 circles.
        assert_eq!(a.count() + b.count(), 5);
        for cs in [&a, &b] {
            let mut all: Vec<_> = cs.circles.iter().flatten().copied().collect();
            all.sort();
            assert_eq!(all, vec![1, 2, 3, 4, 5, 6]);
        }
    }

    #[test]
    fn fast_and_traced_circle_counts_agree() {
        let d = trefoil();
        let mut buf = vec![0u8; d.arc_count()];
        for bits in 0..8u64 {
            let fast = circle_labels(d.all_slots(), d.arc_count(), bits, &mut buf);
            let traced = smooth(&d, &KauffmanState { bits, crossings: 3 }).unwrap().count();
            assert_eq!(fast, traced);
        }
    }

    #[test]
    fn chord_diagram_of_trefoil() {
        let d = trefoil();
        let cd = a_smoothing_chord_diagram(&d).unwrap();
        assert_eq!(cd.chord_count(), 3);
        assert_eq!(cd.circle_count(), smooth(&d, &KauffmanState::all_a(3)).unwrap().count());
        for k in 0..3 {
            assert!(!cd.is_monochord(k));
        }
    }
}
