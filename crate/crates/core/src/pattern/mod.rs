//! D(g,h) patterns in the A-smoothing chord diagram.
//!
//! A pattern is a main circle carrying every monochord, split into two
//! nested families whose members all cross each other: `g` outer chords
//! with ends u_1..u_g and v_g..v_1, `h` inner chords with ends x_1..x_h and
//! y_h..y_1, in the cyclic order x, v, y, u. Ends of one family run
//! consecutively; other chord ends may only sit between the four runs.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::ChordDiagram;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatch {
    pub main_circle: usize,
    /// Outer chords u_i–v_i, i = 1..g.
    pub out_chords: Vec<usize>,
    /// Inner chords x_j–y_j, j = 1..h; chord 1 borders circle 0.
    pub in_chords: Vec<usize>,
    /// For k = 0..h, a position on the main circle whose following arc lies
    /// in the k-th region cut out by the inner family. After surgery on
    /// inner chords j_1 < … < j_r, circle m of the row contains region j_m
    /// (with j_0 = 0).
    pub regions: Vec<usize>,
    /// Positions of u_1..u_g on the main circle.
    pub u_ends: Vec<usize>,
    pub external: Vec<usize>,
    /// Parity of the bichord distance from each circle to the main one.
    pub parity: BTreeMap<usize, u8>,
    pub mono_circular: bool,
    pub bipartite_ok: bool,
}

impl PatternMatch {
    pub fn g(&self) -> usize {
        self.out_chords.len()
    }

    pub fn h(&self) -> usize {
        self.in_chords.len()
    }

    /// Bidegrees (i, j) = (r+1, 2r − |s_A D|) of the torsion predicted for
    /// every odd r < h.
    pub fn predicted_bidegrees(&self) -> Vec<(usize, i64, i64)> {
        let circles = 1 + self.external.len() as i64;
        (1..self.h())
            .step_by(2)
            .map(|r| (r, r as i64 + 1, 2 * r as i64 - circles))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("circle {0} is not joined to the others by bichords")]
    Disconnected(usize),
    #[error("bichord graph has an odd cycle through circles {0:?}")]
    OddCycle(Vec<usize>),
}

/// Outcome of two-colouring the circles along bichords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartition {
    Colouring(Vec<u8>),
    /// Circles of an odd cycle, in order.
    OddCycle(Vec<usize>),
}

fn bichord_graph(cd: &ChordDiagram) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); cd.circle_count()];
    for k in cd.bichords() {
        let [a, b] = cd.chord(k);
        adj[a.circle].push(b.circle);
        adj[b.circle].push(a.circle);
    }
    adj
}

/// Breadth-first search from `root`; returns distances and parents.
fn bfs(adj: &[Vec<usize>], root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
    let mut dist = vec![None; adj.len()];
    let mut parent = vec![usize::MAX; adj.len()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(c) = queue.pop_front() {
        for &o in &adj[c] {
            if dist[o].is_none() {
                dist[o] = Some(dist[c].unwrap() + 1);
                parent[o] = c;
                queue.push_back(o);
            }
        }
    }
    (dist, parent)
}

/// Two-colours the circles using bichords as edges. Monochords are loops
/// and play no part.
pub fn is_bipartite_without_monochords(cd: &ChordDiagram) -> Result<Bipartition, PatternError> {
    let adj = bichord_graph(cd);
    if adj.is_empty() {
        return Ok(Bipartition::Colouring(Vec::new()));
    }
    let (dist, parent) = bfs(&adj, 0);
    if let Some(c) = dist.iter().position(Option::is_none) {
        return Err(PatternError::Disconnected(c));
    }
    let depth = |c: usize| dist[c].unwrap();
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            if depth(u) % 2 != depth(v) % 2 {
                continue;
            }
            // Walk both ends up to their common ancestor.
            let (mut a, mut b) = (u, v);
            let (mut left, mut right) = (vec![a], vec![b]);
            while a != b {
                if depth(a) >= depth(b) {
                    a = parent[a];
                    left.push(a);
                } else {
                    b = parent[b];
                    right.push(b);
                }
            }
            right.pop();
            right.reverse();
            left.extend(right);
            return Ok(Bipartition::OddCycle(left));
        }
    }
    Ok(Bipartition::Colouring(dist.iter().map(|d| (d.unwrap() % 2) as u8).collect()))
}

/// Bichord distance parity from `main` to every circle.
pub fn path_parities(cd: &ChordDiagram, main: usize) -> Result<BTreeMap<usize, u8>, PatternError> {
    if let Bipartition::OddCycle(cycle) = is_bipartite_without_monochords(cd)? {
        return Err(PatternError::OddCycle(cycle));
    }
    let (dist, _) = bfs(&bichord_graph(cd), main);
    (0..cd.circle_count())
        .map(|c| dist[c].map(|d| (c, (d % 2) as u8)).ok_or(PatternError::Disconnected(c)))
        .collect()
}

fn crosses(len: usize, a: (usize, usize), b: (usize, usize)) -> bool {
    // Chords on one circle cross when exactly one end of b lies strictly
    // inside the arc from a.0 to a.1.
    let inside = |p: usize| (p + len - a.0) % len < (a.1 + len - a.0) % len;
    inside(b.0) != inside(b.1)
}

/// Splits the ends of a family into two runs of consecutive positions,
/// `first` and `second`, with first[t] joined to second[k−1−t]. None unless
/// the family is parallel with no other ends between its members.
fn nested_runs(len: usize, family: &[(usize, usize)]) -> Option<(Vec<usize>, Vec<usize>)> {
    let k = family.len();
    let mut on = vec![false; len];
    for &(a, b) in family {
        on[a] = true;
        on[b] = true;
    }
    // Starts of maximal runs; with no start every position is an end.
    let starts: Vec<usize> = (0..len).filter(|&p| on[p] && !on[(p + len - 1) % len]).collect();
    let run_from = |s: usize, n: usize| -> Vec<usize> { (0..n).map(|t| (s + t) % len).collect() };
    let splits: Vec<(Vec<usize>, Vec<usize>)> = match starts.len() {
        0 if len == 2 * k => (0..len).map(|s| (run_from(s, k), run_from(s + k, k))).collect(),
        1 => vec![(run_from(starts[0], k), run_from(starts[0] + k, k))],
        2 => vec![(run_from(starts[0], k), run_from(starts[1], k))],
        _ => return None,
    };
    let partner = |p: usize| family.iter().find_map(|&(a, b)| if a == p { Some(b) } else if b == p { Some(a) } else { None });
    splits.into_iter().find(|(first, second)| {
        first.iter().chain(second).all(|&p| on[p]) && (0..k).all(|t| partner(first[t]) == Some(second[k - 1 - t]))
    })
}

/// All D(g,h) patterns of `cd` with g, h ≥ 2, both role assignments.
pub fn find_patterns(cd: &ChordDiagram) -> Vec<PatternMatch> {
    find_patterns_with(cd, 2)
}

/// As [`find_patterns`] with both families of at least `min` chords.
pub fn find_patterns_with(cd: &ChordDiagram, min: usize) -> Vec<PatternMatch> {
    let min = min.max(1);
    let monos: Vec<usize> = cd.monochords().collect();
    if monos.len() < 2 * min {
        return Vec::new();
    }
    let main = cd.chord(monos[0])[0].circle;
    if monos.iter().any(|&k| cd.chord(k)[0].circle != main) {
        return Vec::new();
    }
    let len = cd.circle(main).len();
    let ends = |k: usize| {
        let [a, b] = cd.chord(k);
        (a.position, b.position)
    };
    // Families: chords parallel to the first monochord, and the rest.
    let first = ends(monos[0]);
    let (fam_a, fam_b): (Vec<usize>, Vec<usize>) = monos.iter().partition(|&&k| k == monos[0] || !crosses(len, first, ends(k)));
    if fam_a.len() < min || fam_b.len() < min {
        return Vec::new();
    }
    for &a in &fam_a {
        for &b in &fam_b {
            if !crosses(len, ends(a), ends(b)) {
                return Vec::new();
            }
        }
    }
    let bipartite = matches!(is_bipartite_without_monochords(cd), Ok(Bipartition::Colouring(_)));
    let parity = path_parities(cd, main).unwrap_or_default();
    let external: Vec<usize> = (0..cd.circle_count()).filter(|&c| c != main).collect();

    let mut out = Vec::new();
    for (outer, inner) in [(&fam_a, &fam_b), (&fam_b, &fam_a)] {
        let pairs = |fam: &[usize]| fam.iter().map(|&k| ends(k)).collect::<Vec<_>>();
        let (Some(inner_runs), Some(outer_runs)) = (nested_runs(len, &pairs(inner)), nested_runs(len, &pairs(outer))) else {
            continue;
        };
        // The x run is the inner run holding the smallest position.
        let (xs, _) = if inner_runs.0.contains(&inner_runs.0.iter().chain(&inner_runs.1).copied().min().unwrap()) {
            inner_runs.clone()
        } else {
            (inner_runs.1.clone(), inner_runs.0.clone())
        };
        let chord_at = |p: usize| cd.circle(main)[p].0;
        let in_chords: Vec<usize> = xs.iter().map(|&p| chord_at(p)).collect();
        // Cyclic distance from the start of the x run orders the u run
        // last; u_1 is its first end.
        let from_x = |p: usize| (p + len - xs[0]) % len;
        let us = if from_x(outer_runs.0[0]) > from_x(outer_runs.1[0]) { &outer_runs.0 } else { &outer_runs.1 };
        let out_chords: Vec<usize> = us.iter().map(|&p| chord_at(p)).collect();
        let mut regions = vec![(xs[0] + len - 1) % len];
        regions.extend(xs.iter().copied());
        out.push(PatternMatch {
            main_circle: main,
            out_chords,
            in_chords,
            regions,
            u_ends: us.clone(),
            external: external.clone(),
            parity: parity.clone(),
            mono_circular: cd.circle_count() == 1,
            bipartite_ok: bipartite,
        });
    }
    out.sort_by_key(|m| (m.g(), m.h()));
    out
}
