use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::ArcLabel;

/// Where a chord end sits: a circle and a position in its cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordEnd {
    pub circle: usize,
    pub position: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChordParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("endpoint label {0:?} is not used by exactly one circle and one chord")]
    Unpaired(String),
    #[error("chord {0} does not have exactly two ends")]
    BadChord(usize),
}

/// Circles with chords between points on them. Every circle carries a cyclic
/// order of chord ends; the order is oriented so that each chord behaves as
/// an untwisted band under surgery.
///
/// Chord `k` has ends `0` and `1`. When the diagram comes from the
/// A-smoothing of a link diagram, chord `k` is crossing `k`, end 0 is the
/// strand through slots (0,1) and end 1 the strand through slots (2,3), and
/// `gaps` records the arc lying after each position, and `along` whether
/// that arc is oriented in the direction of the cyclic order.
///
/// Each chord also has a side: seen from the cyclic direction of its
/// circle, the band lies to the left or to the right. Sides do not affect
/// surgery but fix the planar picture; chords default to the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordDiagram {
    circles: Vec<Vec<(usize, u8)>>,
    chords: Vec<[ChordEnd; 2]>,
    gaps: Option<Vec<Vec<ArcLabel>>>,
    along: Option<Vec<Vec<bool>>>,
    right: Vec<bool>,
}

impl ChordDiagram {
    /// `circles[c]` lists `(chord, end)` pairs in cyclic order.
    pub fn new(circles: Vec<Vec<(usize, u8)>>) -> Result<Self, ChordParseError> {
        let chord_count = circles.iter().flatten().map(|&(k, _)| k + 1).max().unwrap_or(0);
        let mut chords = vec![[None::<ChordEnd>; 2]; chord_count];
        for (c, ends) in circles.iter().enumerate() {
            for (position, &(k, e)) in ends.iter().enumerate() {
                let slot = &mut chords[k][e as usize];
                if slot.is_some() || e > 1 {
                    return Err(ChordParseError::BadChord(k));
                }
                *slot = Some(ChordEnd { circle: c, position });
            }
        }
        let chords = chords
            .into_iter()
            .enumerate()
            .map(|(k, [a, b])| match (a, b) {
                (Some(a), Some(b)) => Ok([a, b]),
                _ => Err(ChordParseError::BadChord(k)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let right = vec![false; chords.len()];
        Ok(ChordDiagram { circles, chords, gaps: None, along: None, right })
    }

    pub(crate) fn with_gaps(mut self, gaps: Vec<Vec<ArcLabel>>, along: Vec<Vec<bool>>) -> Self {
        debug_assert_eq!(gaps.len(), self.circles.len());
        debug_assert_eq!(along.len(), self.circles.len());
        self.gaps = Some(gaps);
        self.along = Some(along);
        self
    }

    /// Puts the listed chords on the right-hand side.
    pub fn with_right_sides(mut self, chords: &[usize]) -> Self {
        for &k in chords {
            self.right[k] = true;
        }
        self
    }

    pub fn is_right(&self, chord: usize) -> bool {
        self.right[chord]
    }

    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    pub fn chord_count(&self) -> usize {
        self.chords.len()
    }

    /// Cyclic `(chord, end)` sequence of a circle.
    pub fn circle(&self, c: usize) -> &[(usize, u8)] {
        &self.circles[c]
    }

    pub fn chord(&self, k: usize) -> [ChordEnd; 2] {
        self.chords[k]
    }

    pub fn is_monochord(&self, k: usize) -> bool {
        self.chords[k][0].circle == self.chords[k][1].circle
    }

    pub fn monochords(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.chords.len()).filter(|&k| self.is_monochord(k))
    }

    pub fn bichords(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.chords.len()).filter(|&k| !self.is_monochord(k))
    }

    /// Arc after `position` on circle `c` (between it and the next end).
    /// For a circle without chord ends, position 0 names its only arc.
    pub fn gap(&self, c: usize, position: usize) -> Option<ArcLabel> {
        let gaps = self.gaps.as_ref()?;
        let g = &gaps[c];
        Some(g[position % g.len()])
    }

    /// Arc before `position` on circle `c`.
    pub fn gap_before(&self, c: usize, position: usize) -> Option<ArcLabel> {
        let len = self.circles[c].len().max(1);
        self.gap(c, (position + len - 1) % len)
    }

    pub fn has_gaps(&self) -> bool {
        self.gaps.is_some()
    }

    pub(crate) fn gaps(&self) -> Option<&Vec<Vec<ArcLabel>>> {
        self.gaps.as_ref()
    }

    pub(crate) fn along(&self) -> Option<&Vec<Vec<bool>>> {
        self.along.as_ref()
    }

    /// Locates an arc as `(circle, position)` of the gap it fills.
    pub fn find_gap(&self, arc: ArcLabel) -> Option<(usize, usize)> {
        let gaps = self.gaps.as_ref()?;
        gaps.iter()
            .enumerate()
            .find_map(|(c, g)| g.iter().position(|&a| a == arc).map(|p| (c, p)))
    }

    /// Number of circles after replacing each listed chord by the opposite
    /// smoothing. Each chord acts as an untwisted band: the strand arriving
    /// at one end leaves from the other end along the circle there.
    pub fn circles_after_surgery(&self, surgered: &[usize]) -> usize {
        let mut cut = vec![false; self.chords.len()];
        for &k in surgered {
            cut[k] = true;
        }
        // Segment (c, p) runs from end p to end p+1 on circle c.
        let offsets: Vec<usize> = self
            .circles
            .iter()
            .scan(0, |acc, c| {
                let o = *acc;
                *acc += c.len();
                Some(o)
            })
            .collect();
        let total: usize = self.circles.iter().map(Vec::len).sum();
        let mut next = vec![0usize; total];
        for (c, ends) in self.circles.iter().enumerate() {
            let len = ends.len();
            for p in 0..len {
                let arrive = (p + 1) % len;
                let (k, e) = ends[arrive];
                next[offsets[c] + p] = if cut[k] {
                    let other = self.chords[k][1 - e as usize];
                    offsets[other.circle] + other.position
                } else {
                    offsets[c] + arrive
                };
            }
        }
        let mut seen = vec![false; total];
        let mut cycles = self.circles.iter().filter(|c| c.is_empty()).count();
        for s in 0..total {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                t = next[t];
            }
        }
        cycles
    }

    /// Parses the line format
    ///
    /// ```text
    /// circle p1 p2 p3 p4
    /// chord p1 p3
    /// chord p2 p4
    /// ```
    ///
    /// Labels are arbitrary tokens; chords are numbered in order of their
    /// `chord` lines. `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self, ChordParseError> {
        let mut circles_raw: Vec<Vec<String>> = Vec::new();
        let mut chords_raw: Vec<[String; 2]> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("circle") => circles_raw.push(words.map(str::to_string).collect()),
                Some("chord") => {
                    let w: Vec<String> = words.map(str::to_string).collect();
                    if w.len() != 2 {
                        return Err(ChordParseError::Syntax { line: n + 1, msg: "chord needs two labels".into() });
                    }
                    chords_raw.push([w[0].clone(), w[1].clone()]);
                }
                Some(other) => {
                    return Err(ChordParseError::Syntax { line: n + 1, msg: format!("unknown keyword {other:?}") })
                }
                None => {}
            }
        }
        let mut owner: BTreeMap<&str, (usize, u8)> = BTreeMap::new();
        for (k, pair) in chords_raw.iter().enumerate() {
            for (e, label) in pair.iter().enumerate() {
                if owner.insert(label.as_str(), (k, e as u8)).is_some() {
                    return Err(ChordParseError::Unpaired(label.clone()));
                }
            }
        }
        let mut used = 0;
        let circles = circles_raw
            .iter()
            .map(|labels| {
                labels
                    .iter()
                    .map(|l| {
                        used += 1;
                        owner.get(l.as_str()).copied().ok_or_else(|| ChordParseError::Unpaired(l.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        if used != owner.len() {
            let placed: std::collections::BTreeSet<&String> = circles_raw.iter().flatten().collect();
            let missing = owner.keys().find(|l| !placed.contains(&l.to_string())).unwrap();
            return Err(ChordParseError::Unpaired(missing.to_string()));
        }
        ChordDiagram::new(circles)
    }

    /// Writes the line format, labelling chord `k`'s ends `k.0` and `k.1`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.circles {
            out.push_str("circle");
            for &(k, e) in c {
                let _ = write!(out, " {k}.{e}");
            }
            out.push('\n');
        }
        for k in 0..self.chords.len() {
            let _ = writeln!(out, "chord {k}.0 {k}.1");
        }
        out
    }

    /// Same diagram with every cyclic order reversed.
    pub fn reversed(&self) -> ChordDiagram {
        let circles = self.circles.iter().map(|c| c.iter().rev().copied().collect()).collect();
        let mut cd = ChordDiagram::new(circles).expect("reversal keeps chords");
        cd.right = self.right.iter().map(|r| !r).collect();
        if let Some(gaps) = &self.gaps {
            cd.gaps = Some(
                gaps.iter()
                    .map(|g| {
                        let len = g.len();
                        (0..len).map(|k| g[(2 * len - 2 - k) % len]).collect()
                    })
                    .collect(),
            );
        }
        if let Some(along) = &self.along {
            cd.along = Some(
                along
                    .iter()
                    .map(|g| {
                        let len = g.len();
                        (0..len).map(|k| !g[(2 * len - 2 - k) % len]).collect()
                    })
                    .collect(),
            );
        }
        cd
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "circle a b c d\nchord a c\nchord b d\n";
        let cd = ChordDiagram::from_text(text).unwrap();
        assert_eq!(cd.circle_count(), 1);
        assert_eq!(cd.chord_count(), 2);
        assert_eq!(ChordDiagram::from_text(&cd.to_text()).unwrap(), cd);
    }

    #[test]
    fn text_errors() {
        assert!(matches!(ChordDiagram::from_text("circle a b\nchord a"), Err(ChordParseError::Syntax { .. })));
        assert!(matches!(ChordDiagram::from_text("circle a b\nchord a c"), Err(ChordParseError::Unpaired(_))));
        assert!(matches!(ChordDiagram::from_text("circle a\nchord a b"), Err(ChordParseError::Unpaired(_))));
        assert!(matches!(ChordDiagram::from_text("blob"), Err(ChordParseError::Syntax { .. })));
    }

    #[test]
    fn surgery_on_single_chord_splits() {
        let cd = ChordDiagram::from_text("circle a b\nchord a b").unwrap();
        assert_eq!(cd.circles_after_surgery(&[]), 1);
        assert_eq!(cd.circles_after_surgery(&[0]), 2);
    }

    #[test]
    fn surgery_on_crossed_chords_keeps_one_circle() {
        let cd = ChordDiagram::from_text("circle a b c d\nchord a c\nchord b d").unwrap();
        assert_eq!(cd.circles_after_surgery(&[0]), 2);
        assert_eq!(cd.circles_after_surgery(&[0, 1]), 1);
    }

    #[test]
    fn surgery_on_bichords_merges() {
        let cd = ChordDiagram::from_text("circle a b\ncircle c d\nchord a c\nchord b d").unwrap();
        assert_eq!(cd.circles_after_surgery(&[0]), 1);
        assert_eq!(cd.circles_after_surgery(&[0, 1]), 2);
    }

    #[test]
    fn empty_circles_count() {
        let cd = ChordDiagram::new(vec![vec![]]).unwrap();
        assert_eq!(cd.circles_after_surgery(&[]), 1);
    }
}
