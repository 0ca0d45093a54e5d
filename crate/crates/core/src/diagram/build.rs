use super::chord::ChordDiagram;
use super::smoothing::a_smoothing_chord_diagram;
use super::{arc_ends, other_end, trace_component, ArcLabel, DiagramError, LinkDiagram};

/// Builds a link diagram whose A-smoothing is `cd`: every chord becomes a
/// crossing whose A-smoothing runs along the circles. Chord `k` becomes
/// crossing `k`. Components are oriented by the `along` data of `cd` where
/// present; arcs are relabelled consecutively along each component and
/// chordless circles become crossingless circles.
pub fn realize(cd: &ChordDiagram) -> Result<LinkDiagram, DiagramError> {
    let lens: Vec<usize> = (0..cd.circle_count()).map(|c| cd.circle(c).len()).collect();
    let mut offsets = Vec::with_capacity(lens.len());
    let mut total = 0usize;
    for &l in &lens {
        offsets.push(total);
        total += l;
    }
    let seg = |c: usize, p: usize| offsets[c] + p % lens[c];

    // Segment (c,p) runs from end p to end p+1 of circle c.
    let mut slots = vec![[0usize; 4]; cd.chord_count()];
    let mut arrival = vec![(0usize, 0usize); total];
    for k in 0..cd.chord_count() {
        let right = cd.is_right(k);
        for (e, end) in cd.chord(k).iter().enumerate() {
            let (c, p) = (end.circle, end.position);
            let before = seg(c, p + lens[c] - 1);
            let after = seg(c, p);
            let entry = 2 * e + right as usize;
            slots[k][entry] = before;
            slots[k][entry ^ 1] = after;
            arrival[before] = (k, entry);
        }
    }

    let hint = |s: usize| -> Option<bool> {
        let along = cd.along()?;
        let c = offsets.partition_point(|&o| o <= s) - 1;
        Some(along[c][s - offsets[c]])
    };
    let ends = arc_ends(&slots, total);
    let mut head = vec![(0usize, 0usize); total];
    let mut label = vec![0 as ArcLabel; total];
    let mut visited = vec![false; total];
    let mut next_label: ArcLabel = 1;
    for start in 0..total {
        if visited[start] {
            continue;
        }
        let walk = trace_component(&slots, &ends, start);
        let reverse = walk
            .iter()
            .find_map(|&(arc, entry)| hint(arc).map(|h| h != (entry == arrival[arc])))
            .unwrap_or(false);
        let n = walk.len();
        for step in 0..n {
            let (arc, entry) = if reverse { walk[(n - step) % n] } else { walk[step] };
            visited[arc] = true;
            head[arc] = if reverse { other_end(&ends, arc, entry) } else { entry };
            label[arc] = next_label;
            next_label += 1;
        }
    }

    let crossings = slots
        .iter()
        .enumerate()
        .map(|(x, t)| {
            let t = if head[t[0]] == (x, 0) { *t } else { [t[2], t[3], t[0], t[1]] };
            [label[t[0]], label[t[1]], label[t[2]], label[t[3]]]
        })
        .collect();
    let loops = lens
        .iter()
        .filter(|&&l| l == 0)
        .map(|_| {
            next_label += 1;
            next_label - 1
        })
        .collect();
    let diagram = LinkDiagram::new(crossings, loops)?;
    if !diagram.is_planar() {
        return Err(DiagramError::NonPlanar);
    }
    Ok(diagram)
}

/// Splices the pattern onto circle `c`. The four blocks x_1..x_h,
/// v_g..v_1, y_h..y_1, u_1..u_g go after positions `sites[0..4]`
/// respectively; blocks sharing a position keep that order. Outer chords
/// get indices `n..n+g`, inner chords `n+g..n+g+h`.
fn graft(cd: &ChordDiagram, c: usize, sites: [usize; 4], g: usize, h: usize) -> ChordDiagram {
    let n = cd.chord_count();
    let outer = |i: usize| n + i;
    let inner = |j: usize| n + g + j;
    let blocks: [Vec<(usize, u8)>; 4] = [
        (0..h).map(|j| (inner(j), 0)).collect(),
        (0..g).rev().map(|i| (outer(i), 1)).collect(),
        (0..h).rev().map(|j| (inner(j), 1)).collect(),
        (0..g).map(|i| (outer(i), 0)).collect(),
    ];
    let old = cd.circle(c);
    // An empty circle has one gap and no positions.
    let len = old.len().max(1);
    let mut seq = Vec::with_capacity(old.len() + 2 * (g + h));
    // Old position whose gap each new position subdivides.
    let mut source = Vec::with_capacity(seq.capacity());
    for p in 0..len {
        if let Some(&e) = old.get(p) {
            seq.push(e);
            source.push(p);
        }
        for (b, block) in blocks.iter().enumerate() {
            if sites[b] == p {
                seq.extend(block.iter().copied());
                source.extend(std::iter::repeat_n(p, block.len()));
            }
        }
    }
    let mut circles: Vec<Vec<(usize, u8)>> = (0..cd.circle_count()).map(|k| cd.circle(k).to_vec()).collect();
    circles[c] = seq;
    let mut out = ChordDiagram::new(circles).expect("graft keeps chords paired");
    if let (Some(gaps), Some(along)) = (cd.gaps(), cd.along()) {
        let mut new_gaps = gaps.clone();
        let mut new_along = along.clone();
        new_gaps[c] = source.iter().map(|&p| gaps[c][p]).collect();
        new_along[c] = source.iter().map(|&p| along[c][p]).collect();
        out = out.with_gaps(new_gaps, new_along);
    }
    let old_right: Vec<usize> = (0..n).filter(|&k| cd.is_right(k)).collect();
    let new_right: Vec<usize> = (0..g).map(outer).collect();
    out.with_right_sides(&old_right).with_right_sides(&new_right)
}

/// Diagram with a single A-circle carrying `g` parallel outer chords and
/// `h` parallel inner chords; the standard diagram of the pretzel link
/// P(−1,…,−1,h) with `g` entries −1. Crossings 0..g are the outer chords,
/// g..g+h the inner ones.
pub fn pretzel_diagram(g: usize, h: usize) -> Result<LinkDiagram, DiagramError> {
    if g == 0 || h == 0 {
        return Err(DiagramError::PatternSize { g, h, min: 1 });
    }
    let circle = ChordDiagram::new(vec![Vec::new()]).expect("one empty circle");
    realize(&graft(&circle, 0, [0; 4], g, h))
}

/// Grafts the pattern onto the A-circle of `base` that runs through `arc`.
/// Base crossings keep their indices; new crossings follow, outer chords
/// first. New strands inherit the orientation of the cut arc.
pub fn insert_pattern(base: &LinkDiagram, arc: ArcLabel, g: usize, h: usize) -> Result<LinkDiagram, DiagramError> {
    insert_pattern_split(base, [arc; 4], g, h)
}

/// Like [`insert_pattern`] but with each block of chord ends in its own
/// gap: `arcs` are the gaps receiving x_1..x_h, v_g..v_1, y_h..y_1 and
/// u_1..u_g. The gaps must lie on one A-circle in that cyclic order, so
/// base chord ends may separate the blocks but never a family.
pub fn insert_pattern_split(base: &LinkDiagram, arcs: [ArcLabel; 4], g: usize, h: usize) -> Result<LinkDiagram, DiagramError> {
    if g < 2 || h < 2 {
        return Err(DiagramError::PatternSize { g, h, min: 2 });
    }
    let cd = a_smoothing_chord_diagram(base)?;
    let mut sites = [0usize; 4];
    let mut circle = None;
    for (b, &arc) in arcs.iter().enumerate() {
        let (c, p) = cd.find_gap(arc).ok_or(DiagramError::UnknownArc(arc))?;
        if circle.is_some_and(|k| k != c) {
            return Err(DiagramError::PatternSites);
        }
        circle = Some(c);
        sites[b] = p;
    }
    let c = circle.expect("four sites");
    let len = cd.circle(c).len().max(1);
    let offset = |p: usize| (p + len - sites[0]) % len;
    if sites.windows(2).any(|w| offset(w[0]) > offset(w[1])) {
        return Err(DiagramError::PatternSites);
    }
    realize(&graft(&cd, c, sites, g, h))
}

/// Closure of a braid on `strands` strands. Letter `i > 0` is σ_i with the
/// strand from position i crossing over, `−i` its inverse; positions are
/// 1-based.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram, DiagramError> {
    let mut cur: Vec<ArcLabel> = (1..=strands as ArcLabel).collect();
    let mut next = strands as ArcLabel + 1;
    let mut crossings = Vec::with_capacity(word.len());
    for &letter in word {
        let i = letter.unsigned_abs() as usize;
        if i == 0 || i >= strands {
            return Err(DiagramError::Malformed { offset: 0, token: letter.to_string() });
        }
        let (x, y) = (cur[i - 1], cur[i]);
        let (x_out, y_out) = (next, next + 1);
        next += 2;
        crossings.push(if letter > 0 { [y, x_out, y_out, x] } else { [x, y, x_out, y_out] });
        cur[i - 1] = y_out;
        cur[i] = x_out;
    }
    // Close up: the final arc at each position is the initial one.
    let mut loops = Vec::new();
    for (k, &last) in cur.iter().enumerate() {
        let first = k as ArcLabel + 1;
        if last == first {
            loops.push(first);
            continue;
        }
        for t in crossings.iter_mut() {
            for a in t.iter_mut() {
                if *a == last {
                    *a = first;
                }
            }
        }
    }
    LinkDiagram::new(crossings, loops)
}

#[cfg(test)]
mod tests {
    use super::super::smoothing::{smooth, KauffmanState};
    use super::*;

    #[test]
    fn pretzel_has_one_a_circle() {
        for g in 1..=6 {
            for h in 1..=6 {
                let d = pretzel_diagram(g, h).unwrap();
                assert_eq!(d.crossing_count(), g + h);
                let cd = a_smoothing_chord_diagram(&d).unwrap();
                assert_eq!(cd.circle_count(), 1, "g={g} h={h}");
                assert_eq!(cd.monochords().count(), g + h);
                assert_eq!(smooth(&d, &KauffmanState::all_a(g + h)).unwrap().count(), 1);
            }
        }
    }

    #[test]
    fn pretzel_rejects_zero() {
        assert!(pretzel_diagram(0, 2).is_err());
        assert!(pretzel_diagram(2, 0).is_err());
    }

    #[test]
    fn realize_round_trip_keeps_signs() {
        let d = LinkDiagram::parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let cd = a_smoothing_chord_diagram(&d).unwrap();
        let r = realize(&cd).unwrap();
        assert_eq!(r.writhe(), d.writhe());
        assert_eq!(a_smoothing_chord_diagram(&r).unwrap().circle_count(), cd.circle_count());
    }

    #[test]
    fn braid_closure_of_trefoil() {
        let d = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.component_count(), 1);
        assert!(d.is_planar());
        let hopf = braid_closure(2, &[-1, -1]).unwrap();
        assert_eq!(hopf.component_count(), 2);
        assert_eq!(hopf.writhe(), -2);
        let split = braid_closure(3, &[1]).unwrap();
        assert_eq!(split.loops().len(), 1);
    }

    #[test]
    fn insertion_into_unknot_matches_pretzel() {
        let unknot = LinkDiagram::parse_pd("circle").unwrap();
        let d = insert_pattern(&unknot, 1, 2, 3).unwrap();
        let p = pretzel_diagram(2, 3).unwrap();
        assert_eq!(d, p);
        assert!(matches!(insert_pattern(&unknot, 9, 2, 3), Err(DiagramError::UnknownArc(9))));
        assert!(matches!(insert_pattern(&unknot, 1, 1, 3), Err(DiagramError::PatternSize { .. })));
    }
}
