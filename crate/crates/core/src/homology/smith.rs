//! Smith normal form over the integers.
//!
//! Large sparse matrices are first reduced by eliminating ±1 pivots in
//! machine integers; what remains (usually tiny) goes through a dense
//! arbitrary-precision reduction. Any i64 overflow restarts the whole
//! matrix densely.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Invariant factors d_1 | d_2 | … | d_k of a matrix, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Factors greater than one, as machine integers.
    pub fn torsion(&self) -> Vec<u64> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().expect("torsion order exceeds u64"))
            .collect()
    }
}

/// Smith form with unimodular transforms: `u · m · v = diag(factors)`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub form: SmithForm,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    pub rows: usize,
    pub cols: usize,
}

pub fn smith_normal_form(m: &[Vec<i64>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let columns: Vec<Vec<(usize, i64)>> = (0..cols)
        .map(|c| (0..rows).filter(|&r| m[r][c] != 0).map(|r| (r, m[r][c])).collect())
        .collect();
    sparse_smith(rows, &columns)
}

/// Invariant factors of a sparse column-major matrix.
pub fn sparse_smith(rows: usize, columns: &[Vec<(usize, i64)>]) -> SmithForm {
    match unit_elimination(rows, columns) {
        Some((pivots, residual)) => {
            let mut factors = vec![BigInt::one(); pivots];
            if !residual.is_empty() {
                let form = dense_smith(residual, false).form;
                factors.extend(form.factors);
            }
            SmithForm { factors }
        }
        None => {
            let mut dense = vec![vec![BigInt::zero(); columns.len()]; rows];
            for (c, col) in columns.iter().enumerate() {
                for &(r, v) in col {
                    dense[r][c] += v;
                }
            }
            dense_smith(dense, false).form
        }
    }
}

/// Eliminates ±1 pivots. Returns the number of pivots and the remaining
/// nonzero block as a dense matrix, or `None` on overflow.
fn unit_elimination(rows: usize, columns: &[Vec<(usize, i64)>]) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut row_map: Vec<HashMap<usize, i64>> = vec![HashMap::new(); rows];
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); columns.len()];
    for (c, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            let e = row_map[r].entry(c).or_insert(0);
            *e = e.checked_add(v)?;
        }
    }
    for (r, row) in row_map.iter_mut().enumerate() {
        row.retain(|_, v| *v != 0);
        for &c in row.keys() {
            col_rows[c].insert(r);
        }
    }
    let mut pivots = 0usize;
    // Sweep the columns until no unit pivot is left; within a column take
    // the shortest row to limit fill-in.
    loop {
        let mut progress = false;
        for pc in 0..columns.len() {
            let best = col_rows[pc]
                .iter()
                .filter(|&&r| row_map[r][&pc].abs() == 1)
                .min_by_key(|&&r| (row_map[r].len(), r))
                .copied();
            let Some(pr) = best else { continue };
            progress = true;
            pivots += 1;
            let pivot_row = std::mem::take(&mut row_map[pr]);
            for &c in pivot_row.keys() {
                col_rows[c].remove(&pr);
            }
            let pv = pivot_row[&pc];
            let others: Vec<usize> = col_rows[pc].drain().collect();
            for r in others {
                let factor = row_map[r].remove(&pc).expect("column index is exact").checked_mul(pv)?;
                for (&c, &v) in &pivot_row {
                    if c == pc {
                        continue;
                    }
                    let delta = factor.checked_mul(v)?;
                    match row_map[r].entry(c) {
                        Entry::Occupied(mut e) => {
                            let nv = e.get().checked_sub(delta)?;
                            if nv == 0 {
                                e.remove();
                                col_rows[c].remove(&r);
                            } else {
                                *e.get_mut() = nv;
                            }
                        }
                        Entry::Vacant(e) => {
                            e.insert(delta.checked_neg()?);
                            col_rows[c].insert(r);
                        }
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..rows).filter(|&r| !row_map[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = live_rows.iter().flat_map(|&r| row_map[r].keys().copied()).collect();
    live_cols.sort_unstable();
    live_cols.dedup();
    let col_index: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let residual = live_rows
        .iter()
        .map(|&r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (&c, &v) in &row_map[r] {
                row[col_index[&c]] = BigInt::from(v);
            }
            row
        })
        .collect();
    Some((pivots, residual))
}

/// Dense Smith reduction, pivoting on an entry of least absolute value.
pub fn dense_smith(mut a: Vec<Vec<BigInt>>, track: bool) -> SmithDecomposition {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let identity = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n).map(|r| (0..n).map(|c| if r == c { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    };
    let mut u = if track { identity(rows) } else { Vec::new() };
    let mut v = if track { identity(cols) } else { Vec::new() };

    // Elementary operations mirrored on the transforms.
    fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        let (s, d) = if src < dst {
            let (lo, hi) = a.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = a.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        for (x, y) in d.iter_mut().zip(s.iter()) {
            if !y.is_zero() {
                *x -= q * y;
            }
        }
    }
    fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
        for row in a.iter_mut() {
            if !row[src].is_zero() {
                let t = q * &row[src];
                row[dst] -= t;
            }
        }
    }
    fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }

    let mut factors = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // Least nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !a[r][c].is_zero() && best.is_none_or(|(br, bc)| a[r][c].abs() < a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap(t, br);
        swap_cols(&mut a, t, bc);
        if track {
            u.swap(t, br);
            swap_cols(&mut v, t, bc);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let q = a[r][t].div_floor(&a[t][t]);
                row_axpy(&mut a, r, t, &q);
                if track {
                    row_axpy(&mut u, r, t, &q);
                }
                if !a[r][t].is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let q = a[t][c].div_floor(&a[t][t]);
                col_axpy(&mut a, c, t, &q);
                if track {
                    col_axpy(&mut v, c, t, &q);
                }
                if !a[t][c].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // Move a smaller remainder into the pivot position.
                let mut best = (t, t);
                for r in t..rows {
                    if !a[r][t].is_zero() && a[r][t].abs() < a[best.0][best.1].abs() {
                        best = (r, t);
                    }
                }
                for c in t..cols {
                    if !a[t][c].is_zero() && a[t][c].abs() < a[best.0][best.1].abs() {
                        best = (t, c);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                    if track {
                        u.swap(t, best.0);
                    }
                } else if best.1 != t {
                    swap_cols(&mut a, t, best.1);
                    if track {
                        swap_cols(&mut v, t, best.1);
                    }
                }
                continue;
            }
            // Divisibility: fold a non-multiple row into the pivot row.
            let p = a[t][t].clone();
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !a[r][c].is_multiple_of(&p)));
            match bad {
                Some(r) => {
                    let m1 = -BigInt::one();
                    row_axpy(&mut a, t, r, &m1);
                    if track {
                        row_axpy(&mut u, t, r, &m1);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            if track {
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        factors.push(a[t][t].clone());
        t += 1;
    }
    SmithDecomposition { form: SmithForm { factors }, u, v, rows, cols }
}

/// Rank over the field with two elements.
pub fn rank_mod2(rows: usize, columns: &[Vec<(usize, i64)>]) -> usize {
    let words = rows.div_ceil(64);
    let mut vecs: Vec<Vec<u64>> = columns
        .iter()
        .map(|col| {
            let mut w = vec![0u64; words];
            for &(r, v) in col {
                if v.rem_euclid(2) == 1 {
                    w[r / 64] ^= 1 << (r % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for bit in 0..rows {
        let (w, b) = (bit / 64, 1u64 << (bit % 64));
        let Some(p) = (rank..vecs.len()).find(|&k| vecs[k][w] & b != 0) else { continue };
        vecs.swap(rank, p);
        let pivot = vecs[rank].clone();
        for (k, vk) in vecs.iter_mut().enumerate() {
            if k != rank && vk[w] & b != 0 {
                for (x, y) in vk.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..cols).map(|c| (0..inner).map(|k| &row[k] * &b[k][c]).sum()).collect())
            .collect()
    }

    /// Independent oracle: d_1⋯d_k = gcd of k×k minors, computed by brute
    /// force on small matrices.
    fn minor_gcds(m: &[Vec<i64>]) -> Vec<i64> {
        fn det(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|c| {
                    let sub: Vec<Vec<i64>> =
                        m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, &x)| x).collect()).collect();
                    let s = if c % 2 == 0 { 1 } else { -1 };
                    s * m[0][c] * det(&sub)
                })
                .sum()
        }
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|b| m >> b & 1 == 1).collect()).collect()
        }
        let (r, c) = (m.len(), m[0].len());
        let mut out = Vec::new();
        for k in 1..=r.min(c) {
            let mut g = 0i64;
            for rs in combos(r, k) {
                for cs in combos(c, k) {
                    let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = g.gcd(&det(&sub));
                }
            }
            out.push(g);
        }
        out
    }

    #[test]
    fn identity_and_zero() {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(smith_normal_form(&id).factors, vec![BigInt::one(); 3]);
        assert!(smith_normal_form(&[vec![0, 0], vec![0, 0]]).factors.is_empty());
    }

    #[test]
    fn two_by_two() {
        let f = smith_normal_form(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(f.factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn transforms_diagonalize() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let dec = dense_smith(big(&m), true);
        let d = mul(&mul(&dec.u, &big(&m)), &dec.v);
        for (r, row) in d.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                let want = if r == c && r < dec.form.rank() { dec.form.factors[r].clone() } else { BigInt::zero() };
                assert_eq!(*x, want);
            }
        }
        assert_eq!(dec.form.factors, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn agrees_with_minor_gcds_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (r, c) = (rng.gen_range(1..5), rng.gen_range(1..5));
            let m: Vec<Vec<i64>> =
                (0..r).map(|_| (0..c).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(-4..=4) }).collect()).collect();
            let gcds = minor_gcds(&m);
            let f = smith_normal_form(&m);
            let mut prod = BigInt::one();
            for (k, g) in gcds.iter().enumerate() {
                if *g == 0 {
                    assert_eq!(f.rank(), k, "{m:?}");
                    break;
                }
                prod *= &f.factors[k];
                assert_eq!(prod, BigInt::from(g.abs()), "{m:?}");
            }
            assert!(f.factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        }
    }

    #[test]
    fn mod2_rank() {
        let cols = vec![vec![(0, 2), (1, 1)], vec![(1, 1)], vec![(0, 1), (1, 3)]];
        assert_eq!(rank_mod2(2, &cols), 2);
        assert_eq!(rank_mod2(2, &[vec![(0, 2)]]), 0);
    }
}
