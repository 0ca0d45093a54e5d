//! Viro's enhanced-state chain complex with integer coefficients.
//!
//! Circles of a smoothing are numbered by their smallest arc index, so an
//! enhanced state is a pair of bitmasks: B-labelled crossings and circles
//! carrying the sign −.

mod chain;
mod matrix;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{LinkDiagram, Label};

pub use chain::{ChainTerm, ChainVector};
pub use matrix::BoundaryMatrix;

/// Kauffman state plus circle signs. Ordered by state bitmask, then by
/// sign mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnhancedState {
    /// Bit x set: crossing x has label B.
    pub state: u64,
    /// Bit c set: circle c has sign −.
    pub minus: u64,
    /// Number of circles of the smoothing.
    pub circles: u8,
}

impl EnhancedState {
    pub fn i(&self) -> i64 {
        self.state.count_ones() as i64
    }

    pub fn theta(&self) -> i64 {
        self.circles as i64 - 2 * self.minus.count_ones() as i64
    }

    pub fn j(&self) -> i64 {
        self.i() + self.theta()
    }

    pub fn label(&self, crossing: usize) -> Label {
        if self.state >> crossing & 1 == 1 {
            Label::B
        } else {
            Label::A
        }
    }

    pub fn is_minus(&self, circle: usize) -> bool {
        self.minus >> circle & 1 == 1
    }
}

impl fmt::Display for EnhancedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[B:{:b} -:{:b}]", self.state, self.minus)
    }
}

/// How incidence numbers are signed. Only `Standard` gives a complex; the
/// other rule exists to check that the test suite notices a broken sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IncidenceRule {
    #[default]
    Standard,
    #[doc(hidden)]
    Unsigned,
}

/// The chain complex of one diagram, with every smoothing precomputed.
#[derive(Clone, Debug)]
pub struct Complex {
    diagram: LinkDiagram,
    n: usize,
    arcs: usize,
    /// `labels[state * arcs + a]`: circle of arc `a` in that smoothing.
    labels: Vec<u8>,
    counts: Vec<u8>,
    rule: IncidenceRule,
}

impl Complex {
    /// Panics if the diagram has more than 24 crossings; callers guard the
    /// size well below that.
    pub fn new(diagram: &LinkDiagram) -> Self {
        let n = diagram.crossing_count();
        assert!(n <= 24, "{n} crossings is beyond the state-enumeration limit");
        let arcs = diagram.arc_count();
        let slots = diagram.all_slots();
        let per_state: Vec<(u8, Vec<u8>)> = (0..1u64 << n)
            .into_par_iter()
            .map(|bits| {
                let mut lab = vec![0u8; arcs];
                let c = crate::diagram::circle_labels(slots, arcs, bits, &mut lab);
                (c as u8, lab)
            })
            .collect();
        let mut labels = Vec::with_capacity(per_state.len() * arcs);
        let mut counts = Vec::with_capacity(per_state.len());
        for (c, lab) in per_state {
            counts.push(c);
            labels.extend(lab);
        }
        Complex { diagram: diagram.clone(), n, arcs, labels, counts, rule: IncidenceRule::Standard }
    }

    pub fn with_rule(mut self, rule: IncidenceRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn crossing_count(&self) -> usize {
        self.n
    }

    pub fn circle_count(&self, state: u64) -> usize {
        self.counts[state as usize] as usize
    }

    /// Circle containing the arc with internal index `arc` in `state`.
    pub fn circle_of_arc(&self, state: u64, arc: usize) -> usize {
        self.labels[state as usize * self.arcs + arc] as usize
    }

    fn lab(&self, state: u64) -> &[u8] {
        let o = state as usize * self.arcs;
        &self.labels[o..o + self.arcs]
    }

    /// Smallest arc index of each circle of `state`.
    fn representatives(&self, state: u64) -> Vec<usize> {
        let lab = self.lab(state);
        let mut rep = vec![usize::MAX; self.circle_count(state)];
        for (a, &c) in lab.iter().enumerate() {
            if rep[c as usize] == usize::MAX {
                rep[c as usize] = a;
            }
        }
        rep
    }

    /// Builds the enhanced state of `state` whose − circles are those
    /// containing the given arcs (internal indices).
    pub fn enhanced(&self, state: u64, minus_arcs: &[usize]) -> EnhancedState {
        let minus = minus_arcs.iter().fold(0u64, |m, &a| m | 1 << self.circle_of_arc(state, a));
        EnhancedState { state, minus, circles: self.counts[state as usize] }
    }

    /// Enhanced states with the given gradings, states ascending and then
    /// sign masks ascending.
    pub fn basis(&self, i: i64, j: i64) -> Vec<EnhancedState> {
        let mut out = Vec::new();
        if i < 0 || i as usize > self.n {
            return out;
        }
        for state in states_with_b_count(self.n, i as usize) {
            let c = self.counts[state as usize] as i64;
            let theta = j - i;
            if (c - theta) % 2 != 0 || theta.abs() > c {
                continue;
            }
            let m = ((c - theta) / 2) as usize;
            for minus in subsets_of_size(c as usize, m) {
                out.push(EnhancedState { state, minus, circles: c as u8 });
            }
        }
        out
    }

    /// All quantum degrees with a nonzero chain group, ascending.
    pub fn quantum_degrees(&self) -> Vec<i64> {
        let mut js = BTreeSet::new();
        for state in 0..1u64 << self.n {
            let i = state.count_ones() as i64;
            let c = self.counts[state as usize] as i64;
            let mut j = i - c;
            while j <= i + c {
                js.insert(j);
                j += 2;
            }
        }
        js.into_iter().collect()
    }

    /// Differential of a single enhanced state as (target, coefficient)
    /// pairs, in crossing order.
    pub fn d_state(&self, s: &EnhancedState) -> Vec<(EnhancedState, i64)> {
        let slots = self.diagram.all_slots();
        let src = self.lab(s.state);
        let mut out = Vec::new();
        for (x, t) in slots.iter().enumerate() {
            if s.state >> x & 1 == 1 {
                continue;
            }
            let target = s.state | 1 << x;
            let dst = self.lab(target);
            let rep = self.representatives(s.state);
            let (ca, cb) = (src[t[0]] as usize, src[t[2]] as usize);
            // Signs of untouched circles carry over.
            let mut base = 0u64;
            for (c, &a) in rep.iter().enumerate() {
                if c != ca && c != cb && s.is_minus(c) {
                    base |= 1 << dst[a];
                }
            }
            let sign = match self.rule {
                IncidenceRule::Standard => {
                    if (s.state & ((1u64 << x) - 1)).count_ones() % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                }
                IncidenceRule::Unsigned => 1,
            };
            let circles = self.counts[target as usize];
            let mk = |minus: u64| EnhancedState { state: target, minus, circles };
            if ca != cb {
                let merged = dst[t[0]] as usize;
                match (s.is_minus(ca), s.is_minus(cb)) {
                    (false, false) => out.push((mk(base), sign)),
                    (true, true) => {}
                    _ => out.push((mk(base | 1 << merged), sign)),
                }
            } else {
                let (d1, d2) = (dst[t[0]] as usize, dst[t[1]] as usize);
                if s.is_minus(ca) {
                    out.push((mk(base | 1 << d1 | 1 << d2), sign));
                } else {
                    out.push((mk(base | 1 << d2), sign));
                    out.push((mk(base | 1 << d1), sign));
                }
            }
        }
        out
    }

    /// Incidence number of the pair: the coefficient of `t` in d(s).
    pub fn incidence(&self, s: &EnhancedState, t: &EnhancedState) -> i64 {
        if t.i() != s.i() + 1 || (s.state & !t.state) != 0 {
            return 0;
        }
        self.d_state(s).into_iter().filter(|(u, _)| u == t).map(|(_, c)| c).sum()
    }

    pub fn differential(&self, z: &ChainVector) -> ChainVector {
        let mut out = ChainVector::zero(z.i + 1, z.j);
        for (s, &c) in z.terms() {
            for (t, e) in self.d_state(s) {
                out.add_term(t, c * e);
            }
        }
        out
    }

    /// Matrix of d from (i,j) to (i+1,j) in the canonical bases.
    pub fn boundary_matrix(&self, i: i64, j: i64) -> BoundaryMatrix {
        let source = self.basis(i, j);
        let target = self.basis(i + 1, j);
        let index: HashMap<EnhancedState, usize> = target.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        let columns = source
            .par_iter()
            .map(|s| {
                let mut col: Vec<(usize, i64)> = self.d_state(s).into_iter().map(|(t, c)| (index[&t], c)).collect();
                col.sort_unstable();
                col
            })
            .collect();
        BoundaryMatrix::new((i, j), source, target, columns)
    }

    /// Coordinates of a chain in the basis at its bidegree.
    pub fn coordinates(&self, z: &ChainVector, basis: &[EnhancedState]) -> Option<Vec<i64>> {
        let index: HashMap<&EnhancedState, usize> = basis.iter().enumerate().map(|(k, s)| (s, k)).collect();
        let mut v = vec![0i64; basis.len()];
        for (s, &c) in z.terms() {
            v[*index.get(s)?] = c;
        }
        Some(v)
    }
}

/// n-bit masks with exactly k ones, ascending.
pub(crate) fn states_with_b_count(n: usize, k: usize) -> impl Iterator<Item = u64> {
    subsets_of_size(n, k)
}

/// All k-subsets of n bits as masks, ascending (Gosper's hack).
pub(crate) fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = if n >= 64 { u64::MAX } else { 1u64 << n };
    let mut cur = if k > n {
        None
    } else if k == 0 {
        Some(0u64)
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let v = cur?;
        cur = if v == 0 {
            None
        } else {
            let c = v & v.wrapping_neg();
            let r = v + c;
            let next = (((r ^ v) >> 2) / c) | r;
            if next < limit && next > v {
                Some(next)
            } else {
                None
            }
        };
        Some(v)
    })
}

pub fn enumerate_basis(diagram: &LinkDiagram, i: i64, j: i64) -> Vec<EnhancedState> {
    Complex::new(diagram).basis(i, j)
}

pub fn boundary_matrix(diagram: &LinkDiagram, i: i64, j: i64) -> BoundaryMatrix {
    Complex::new(diagram).boundary_matrix(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::pretzel_diagram;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
    }

    #[test]
    fn subsets_are_ascending_and_complete() {
        for n in 0..7 {
            for k in 0..=n {
                let v: Vec<u64> = subsets_of_size(n, k).collect();
                assert_eq!(v.len() as u64, binom(n as u64, k as u64));
                assert!(v.windows(2).all(|w| w[0] < w[1]));
                assert!(v.iter().all(|m| m.count_ones() as usize == k && *m < 1 << n));
            }
        }
        assert_eq!(subsets_of_size(2, 3).count(), 0);
    }

    #[test]
    fn unknot_basis() {
        let d = LinkDiagram::parse_pd("circle").unwrap();
        let cx = Complex::new(&d);
        assert_eq!(cx.basis(0, 1).len(), 1);
        assert_eq!(cx.basis(0, -1).len(), 1);
        assert_eq!(cx.basis(0, 0).len(), 0);
        assert_eq!(cx.basis(0, 1)[0].minus, 0);
        assert_eq!(cx.quantum_degrees(), vec![-1, 1]);
    }

    #[test]
    fn pretzel_22_low_state() {
        let d = pretzel_diagram(2, 2).unwrap();
        let cx = Complex::new(&d);
        let b = cx.basis(1, -1);
        // Each single-B state splits the circle in two; both must be −.
        assert_eq!(b.len(), 4);
        for s in &b {
            assert_eq!(s.circles, 2);
            assert_eq!(s.minus, 0b11);
            assert_eq!((s.i(), s.theta(), s.j()), (1, -2, -1));
        }
    }

    #[test]
    fn d_squared_vanishes_on_pretzel() {
        let d = pretzel_diagram(2, 3).unwrap();
        let cx = Complex::new(&d);
        for j in cx.quantum_degrees() {
            for i in 0..5 {
                let a = cx.boundary_matrix(i, j);
                let b = cx.boundary_matrix(i + 1, j);
                assert!(b.compose_is_zero(&a), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn unsigned_rule_breaks_d_squared() {
        let d = pretzel_diagram(2, 3).unwrap();
        let cx = Complex::new(&d).with_rule(IncidenceRule::Unsigned);
        let broken = cx.quantum_degrees().into_iter().any(|j| {
            (0..4).any(|i| !cx.boundary_matrix(i + 1, j).compose_is_zero(&cx.boundary_matrix(i, j)))
        });
        assert!(broken);
    }

    #[test]
    fn incidence_matches_matrix() {
        let d = pretzel_diagram(2, 2).unwrap();
        let cx = Complex::new(&d);
        let m = cx.boundary_matrix(1, 1);
        for (c, s) in m.source().iter().enumerate() {
            for (r, t) in m.target().iter().enumerate() {
                assert_eq!(cx.incidence(s, t), m.entry(r, c));
            }
        }
        assert_eq!(cx.incidence(&m.source()[0], &m.source()[0]), 0);
        // B at crossing 0 and change at crossing 2: one earlier B.
        let s = cx.basis(1, 1).into_iter().find(|s| s.state == 0b0001).unwrap();
        let d_s = cx.d_state(&s);
        assert!(d_s.iter().filter(|(t, _)| t.state == 0b0101).all(|(_, c)| *c == -1));
        assert!(d_s.iter().any(|(t, _)| t.state == 0b0101));
    }

    #[test]
    fn top_state_is_a_cycle() {
        let d = pretzel_diagram(2, 2).unwrap();
        let cx = Complex::new(&d);
        let top = cx.basis(4, 4 + cx.circle_count(0b1111) as i64)[0];
        assert!(cx.differential(&ChainVector::from_state(top)).is_zero());
        assert!(cx.differential(&ChainVector::zero(1, 1)).is_zero());
    }
}
