//! Homology of the enhanced-state complex, one quantum degree at a time.

mod euler;
mod membership;
pub mod smith;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::diagram::LinkDiagram;

pub use euler::{graded_euler_characteristic, LaurentPolynomial};
pub use membership::{image_membership, Membership, MembershipError, Obstruction};
pub use smith::{smith_normal_form, SmithForm};

/// Free rank plus torsion invariant factors (each ≥ 2, dividing the next).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn has_even_torsion(&self) -> bool {
        self.torsion.iter().any(|t| t % 2 == 0)
    }

    pub fn count_torsion(&self, order: u64) -> usize {
        self.torsion.iter().filter(|&&t| t == order).count()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for &t in &self.torsion {
            *counts.entry(t).or_default() += 1;
        }
        for (t, c) in counts {
            parts.push(if c == 1 { format!("Z{t}") } else { format!("Z{t}^{c}") });
        }
        f.write_str(&parts.join("+"))
    }
}

/// Conversion between diagram degrees (i,j) and link degrees (h,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingMap {
    pub p: i64,
    pub n: i64,
}

impl GradingMap {
    pub fn of(diagram: &LinkDiagram) -> Self {
        GradingMap { p: diagram.positive_count() as i64, n: diagram.negative_count() as i64 }
    }

    pub fn to_hq(&self, i: i64, j: i64) -> (i64, i64) {
        (i - self.n, j + self.p - 2 * self.n)
    }

    pub fn to_ij(&self, h: i64, q: i64) -> (i64, i64) {
        (h + self.n, q - self.p + 2 * self.n)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Coefficients {
    #[default]
    Integers,
    /// Field with two elements; every group is reported by its dimension.
    Mod2,
}

/// One row of the JSON table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub i: i64,
    pub j: i64,
    pub h: i64,
    pub q: i64,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

/// All nonzero homology groups of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub grading: GradingMap,
    pub groups: BTreeMap<(i64, i64), HomologyGroup>,
}

impl HomologyTable {
    pub fn get(&self, i: i64, j: i64) -> HomologyGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn get_hq(&self, h: i64, q: i64) -> HomologyGroup {
        let (i, j) = self.grading.to_ij(h, q);
        self.get(i, j)
    }

    pub fn rows(&self) -> Vec<TableRow> {
        self.groups
            .iter()
            .map(|(&(i, j), g)| {
                let (h, q) = self.grading.to_hq(i, j);
                TableRow { i, j, h, q, free_rank: g.free_rank, torsion: g.torsion.clone() }
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows()).expect("plain data serializes")
    }

    pub fn from_json(text: &str, grading: GradingMap) -> Result<Self, serde_json::Error> {
        let rows: Vec<TableRow> = serde_json::from_str(text)?;
        let groups = rows
            .into_iter()
            .map(|r| ((r.i, r.j), HomologyGroup { free_rank: r.free_rank, torsion: r.torsion }))
            .collect();
        Ok(HomologyTable { grading, groups })
    }

    /// Σ (−1)^i rank q^j over the free parts.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (&(i, j), g) in &self.groups {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            p.add_term(j, sign * g.free_rank as i64);
        }
        p
    }

    /// Grid with quantum degree rows descending and homological degree
    /// columns ascending. `topological` switches the axes to (h,q).
    pub fn render(&self, topological: bool) -> String {
        let cells: BTreeMap<(i64, i64), String> = self
            .groups
            .iter()
            .map(|(&(i, j), g)| {
                let key = if topological { self.grading.to_hq(i, j) } else { (i, j) };
                (key, g.to_string())
            })
            .collect();
        if cells.is_empty() {
            return "(all groups vanish)\n".to_string();
        }
        let (a, b) = if topological { ("h", "q") } else { ("i", "j") };
        let xs: Vec<i64> = {
            let lo = cells.keys().map(|k| k.0).min().unwrap();
            let hi = cells.keys().map(|k| k.0).max().unwrap();
            (lo..=hi).collect()
        };
        let mut ys: Vec<i64> = cells.keys().map(|k| k.1).collect();
        ys.sort_unstable();
        ys.dedup();
        ys.reverse();
        let width = cells.values().map(String::len).max().unwrap_or(1).max(4);
        let mut out = format!("{:>5} |", format!("{b}\\{a}"));
        for x in &xs {
            out.push_str(&format!(" {x:>width$}"));
        }
        out.push('\n');
        out.push_str(&"-".repeat(7 + xs.len() * (width + 1)));
        out.push('\n');
        for y in ys {
            out.push_str(&format!("{y:>5} |"));
            for x in &xs {
                let cell = cells.get(&(*x, y)).map_or(".", String::as_str);
                out.push_str(&format!(" {cell:>width$}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Rank and invariant factors of each d_i at one quantum degree.
fn degree_data(cx: &Complex, j: i64, coeffs: Coefficients) -> (Vec<usize>, Vec<usize>, Vec<Vec<u64>>) {
    let n = cx.crossing_count() as i64;
    let dims: Vec<usize> = (0..=n).map(|i| cx.basis(i, j).len()).collect();
    let mut ranks = Vec::with_capacity(n as usize);
    let mut torsion = Vec::with_capacity(n as usize);
    for i in 0..n {
        if dims[i as usize] == 0 || dims[i as usize + 1] == 0 {
            ranks.push(0);
            torsion.push(Vec::new());
            continue;
        }
        let m = cx.boundary_matrix(i, j);
        match coeffs {
            Coefficients::Integers => {
                let f = smith::sparse_smith(m.rows(), m.columns());
                ranks.push(f.rank());
                torsion.push(f.torsion());
            }
            Coefficients::Mod2 => {
                ranks.push(smith::rank_mod2(m.rows(), m.columns()));
                torsion.push(Vec::new());
            }
        }
    }
    (dims, ranks, torsion)
}

fn groups_at(dims: &[usize], ranks: &[usize], torsion: &[Vec<u64>], i: usize) -> HomologyGroup {
    let out_rank = ranks.get(i).copied().unwrap_or(0);
    let (in_rank, tors) = if i == 0 { (0, Vec::new()) } else { (ranks[i - 1], torsion[i - 1].clone()) };
    HomologyGroup { free_rank: dims[i] - out_rank - in_rank, torsion: tors }
}

pub fn homology_group(cx: &Complex, i: i64, j: i64) -> HomologyGroup {
    homology_group_with(cx, i, j, Coefficients::Integers)
}

pub fn homology_group_with(cx: &Complex, i: i64, j: i64, coeffs: Coefficients) -> HomologyGroup {
    let n = cx.crossing_count() as i64;
    if i < 0 || i > n {
        return HomologyGroup::default();
    }
    let dim = cx.basis(i, j).len();
    if dim == 0 {
        return HomologyGroup::default();
    }
    let factor = |k: i64| -> (usize, Vec<u64>) {
        if k < 0 || k >= n {
            return (0, Vec::new());
        }
        let m = cx.boundary_matrix(k, j);
        if m.rows() == 0 || m.cols() == 0 {
            return (0, Vec::new());
        }
        match coeffs {
            Coefficients::Integers => {
                let f = smith::sparse_smith(m.rows(), m.columns());
                (f.rank(), f.torsion())
            }
            Coefficients::Mod2 => (smith::rank_mod2(m.rows(), m.columns()), Vec::new()),
        }
    };
    let (out_rank, _) = factor(i);
    let (in_rank, torsion) = factor(i - 1);
    HomologyGroup { free_rank: dim - out_rank - in_rank, torsion }
}

pub fn homology_table(cx: &Complex) -> HomologyTable {
    homology_table_with(cx, Coefficients::Integers)
}

/// Every quantum degree is an independent job.
pub fn homology_table_with(cx: &Complex, coeffs: Coefficients) -> HomologyTable {
    let per_j: Vec<(i64, Vec<HomologyGroup>)> = cx
        .quantum_degrees()
        .into_par_iter()
        .map(|j| {
            let (dims, ranks, torsion) = degree_data(cx, j, coeffs);
            (j, (0..dims.len()).map(|i| groups_at(&dims, &ranks, &torsion, i)).collect())
        })
        .collect();
    let mut groups = BTreeMap::new();
    for (j, gs) in per_j {
        for (i, g) in gs.into_iter().enumerate() {
            if !g.is_zero() {
                groups.insert((i as i64, j), g);
            }
        }
    }
    HomologyTable { grading: GradingMap::of(cx.diagram()), groups }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::pretzel_diagram;

    #[test]
    fn unknot() {
        let d = LinkDiagram::parse_pd("circle").unwrap();
        let t = homology_table(&Complex::new(&d));
        assert_eq!(t.groups.len(), 2);
        assert_eq!(t.get(0, 1), HomologyGroup { free_rank: 1, torsion: vec![] });
        assert_eq!(t.get(0, -1), HomologyGroup { free_rank: 1, torsion: vec![] });
    }

    #[test]
    fn two_unknots() {
        let d = LinkDiagram::parse_pd("circle circle").unwrap();
        let t = homology_table(&Complex::new(&d));
        assert_eq!(t.get(0, 0).free_rank, 2);
        assert_eq!(t.get(0, 2).free_rank, 1);
        assert_eq!(t.get(0, -2).free_rank, 1);
        assert_eq!(t.groups.len(), 3);
    }

    #[test]
    fn kinks_do_not_change_homology() {
        for pd in ["X(1,1,2,2)", "X(1,2,2,1)"] {
            let d = LinkDiagram::parse_pd(pd).unwrap();
            let t = homology_table(&Complex::new(&d));
            let hq: Vec<_> = t.rows().iter().map(|r| (r.h, r.q, r.free_rank, r.torsion.len())).collect();
            assert_eq!(hq, vec![(0, -1, 1, 0), (0, 1, 1, 0)], "{pd}");
        }
    }

    #[test]
    fn single_group_matches_table() {
        let d = pretzel_diagram(2, 3).unwrap();
        let cx = Complex::new(&d);
        let t = homology_table(&cx);
        for j in cx.quantum_degrees() {
            for i in 0..=5 {
                assert_eq!(homology_group(&cx, i, j), t.get(i, j));
            }
        }
    }

    #[test]
    fn rank_nullity() {
        let d = pretzel_diagram(2, 3).unwrap();
        let cx = Complex::new(&d);
        for j in cx.quantum_degrees() {
            let (dims, ranks, _) = degree_data(&cx, j, Coefficients::Integers);
            for i in 0..dims.len() {
                let g = homology_group(&cx, i as i64, j);
                let prev = if i == 0 { 0 } else { ranks[i - 1] };
                assert_eq!(g.free_rank + ranks.get(i).copied().unwrap_or(0) + prev, dims[i]);
                assert!(ranks.get(i).copied().unwrap_or(0) <= dims[i]);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = pretzel_diagram(2, 2).unwrap();
        let t = homology_table(&Complex::new(&d));
        assert_eq!(HomologyTable::from_json(&t.to_json(), t.grading).unwrap(), t);
    }

    #[test]
    fn grading_map_inverts() {
        let g = GradingMap { p: 8, n: 4 };
        assert_eq!(g.to_hq(2, -1), (-2, -1));
        assert_eq!(g.to_ij(-2, -1), (2, -1));
    }
}
