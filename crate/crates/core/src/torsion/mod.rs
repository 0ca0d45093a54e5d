//! The chains X, V and V′ built from a D(g,h) pattern, their boundary
//! identities, and certificates that [V] has order two.
//!
//! States are written s^{signs}_{outer; inner}: the B-labelled crossings are
//! outer chords `i…` and inner chords `j_1 < … < j_r`. After surgery on the
//! inner chords the main circle becomes r+1 circles in a row, 0..r, where
//! circle 0 touches the u ends. Circles 1..r−1 are the H-circles.
//!
//! Signs are fixed with the crossings ordered outer chords, inner chords,
//! then the rest. A chain in that order is carried to the diagram's own
//! order by multiplying each state by ε(S) = (−1)^{#pairs of S whose order
//! differs}, which is an isomorphism of complexes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ChainTerm, ChainVector, Complex, EnhancedState};
use crate::diagram::{a_smoothing_chord_diagram, DiagramError};
use crate::homology::{homology_group, image_membership, GradingMap, HomologyGroup, Membership, MembershipError};
use crate::pattern::PatternMatch;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("r = {r} outside 1..={h}")]
    OutOfRange { r: usize, h: usize },
    #[error("r = {0} is even; no torsion claim is made")]
    EvenR(usize),
    #[error("r = h = {0}; the construction needs r < h")]
    FullInner(usize),
    #[error("V′ needs even r < h, got r = {r}, h = {h}")]
    NoVprime { r: usize, h: usize },
    #[error("the pattern has external circles but its bichord graph is not bipartite")]
    NotBipartite,
    #[error("the pattern needs a mono-circular diagram")]
    NotMonoCircular,
    #[error("the witness needs exactly one outer chord, found {0}")]
    NotSingleOuter(usize),
    #[error("pattern does not fit the diagram")]
    Mismatch,
    #[error("boundary identity fails for r = {0}")]
    IdentityFailed(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Membership(#[from] MembershipError),
}

/// Which identity of d(X) held.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryCase {
    /// d(X) = 2V
    TwoV,
    /// d(X) = 2V + 2V′
    TwoVPlusVprime,
}

/// Locates circles of pattern states and applies the sign transport.
struct Frame<'a> {
    cx: &'a Complex,
    m: &'a PatternMatch,
    /// Internal arc index of each region of the main circle.
    regions: Vec<usize>,
    /// One arc per external circle, in `m.external` order.
    externals: Vec<usize>,
    /// Arc between u_1 and u_2, and arc just before u_1.
    between_u: usize,
    before_u: usize,
    rank: Vec<usize>,
}

impl<'a> Frame<'a> {
    fn new(cx: &'a Complex, m: &'a PatternMatch) -> Result<Self, TorsionError> {
        let d = cx.diagram();
        let cd = a_smoothing_chord_diagram(d)?;
        let index = |c: usize, p: usize| -> Result<usize, TorsionError> {
            let label = cd.gap(c, p).ok_or(TorsionError::Mismatch)?;
            d.arc_index(label).ok_or(TorsionError::Mismatch)
        };
        if m.main_circle >= cd.circle_count() || m.u_ends.len() != m.g() || m.regions.len() != m.h() + 1 {
            return Err(TorsionError::Mismatch);
        }
        let len = cd.circle(m.main_circle).len();
        let pattern = m.out_chords.iter().chain(&m.in_chords);
        if pattern.clone().any(|&k| k >= cd.chord_count() || !cd.is_monochord(k)) {
            return Err(TorsionError::Mismatch);
        }
        let regions = m.regions.iter().map(|&p| index(m.main_circle, p)).collect::<Result<_, _>>()?;
        let externals = m.external.iter().map(|&c| index(c, 0)).collect::<Result<_, _>>()?;
        let u1 = m.u_ends[0];
        let between_u = index(m.main_circle, u1)?;
        let before_u = index(m.main_circle, (u1 + len - 1) % len)?;
        let n = cx.crossing_count();
        let mut order: Vec<usize> = pattern.copied().collect();
        let rest: Vec<usize> = (0..n).filter(|x| !order.contains(x)).collect();
        order.extend(rest);
        let mut rank = vec![0; n];
        for (k, &x) in order.iter().enumerate() {
            rank[x] = k;
        }
        Ok(Frame { cx, m, regions, externals, between_u, before_u, rank })
    }

    /// Sign carrying a state from the pattern order to the diagram order.
    fn epsilon(&self, state: u64) -> i64 {
        let bits: Vec<usize> = (0..64).filter(|b| state >> b & 1 == 1).collect();
        let mut flips = 0;
        for (a, &x) in bits.iter().enumerate() {
            for &y in &bits[a + 1..] {
                if self.rank[x] > self.rank[y] {
                    flips += 1;
                }
            }
        }
        if flips % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// State with outer chords `outer` and inner chords `inner` (1-based).
    fn state(&self, outer: &[usize], inner: &[usize]) -> u64 {
        let o = outer.iter().map(|&i| self.m.out_chords[i - 1]);
        let i = inner.iter().map(|&j| self.m.in_chords[j - 1]);
        o.chain(i).fold(0, |s, x| s | 1 << x)
    }

    /// Arc of circle `k` in the row cut out by `inner`.
    fn row_arc(&self, inner: &[usize], k: usize) -> usize {
        if k == 0 {
            self.regions[0]
        } else {
            self.regions[inner[k - 1]]
        }
    }

    fn enhanced(&self, state: u64, minus_arcs: &[usize]) -> EnhancedState {
        self.cx.enhanced(state, minus_arcs)
    }

    fn push(&self, z: &mut ChainVector, s: EnhancedState, c: i64) {
        z.add_term(s, c * self.epsilon(s.state));
    }

    fn externals_except(&self, skip: Option<usize>) -> Vec<usize> {
        self.externals.iter().enumerate().filter(|&(a, _)| Some(a) != skip).map(|(_, &x)| x).collect()
    }

    fn j(&self, r: usize) -> i64 {
        2 * r as i64 - 1 - self.externals.len() as i64
    }
}

fn subsets(h: usize, r: usize) -> Vec<Vec<usize>> {
    crate::complex::subsets_of_size(h, r)
        .map(|mask| (1..=h).filter(|j| mask >> (j - 1) & 1 == 1).collect())
        .collect()
}

fn check_form(m: &PatternMatch, r: usize) -> Result<(), TorsionError> {
    if r == 0 || r > m.h() {
        return Err(TorsionError::OutOfRange { r, h: m.h() });
    }
    if !m.mono_circular {
        if !m.bipartite_ok {
            return Err(TorsionError::NotBipartite);
        }
        if r % 2 == 0 {
            return Err(TorsionError::EvenR(r));
        }
        if r == m.h() {
            return Err(TorsionError::FullInner(r));
        }
    }
    Ok(())
}

/// X = Σ_J (s^{0+} + s^{r+} + Σ_α (−1)^{l_α} s^{α+}) at (r, 2r − |s_A D|):
/// s^{k+} has + on circle k and on the H-circles, − everywhere else.
pub fn build_x(cx: &Complex, m: &PatternMatch, r: usize) -> Result<ChainVector, TorsionError> {
    check_form(m, r)?;
    let f = Frame::new(cx, m)?;
    let mut x = ChainVector::zero(r as i64, f.j(r));
    for inner in subsets(m.h(), r) {
        let state = f.state(&[], &inner);
        let (c0, cr) = (f.row_arc(&inner, 0), f.row_arc(&inner, r));
        for other in [cr, c0] {
            let mut minus = f.externals_except(None);
            minus.push(other);
            f.push(&mut x, f.enhanced(state, &minus), 1);
        }
        for (a, c) in m.external.iter().enumerate() {
            let mut minus = f.externals_except(Some(a));
            minus.extend([c0, cr]);
            let sign = if m.parity.get(c).copied().unwrap_or(0) % 2 == 0 { 1 } else { -1 };
            f.push(&mut x, f.enhanced(state, &minus), sign);
        }
    }
    Ok(x)
}

/// V = Σ_J Σ_i s^{0−}_{i;J} at (r+1, 2r − |s_A D|): − on the merged circle
/// 0 and on the external circles.
pub fn build_v(cx: &Complex, m: &PatternMatch, r: usize) -> Result<ChainVector, TorsionError> {
    check_form(m, r)?;
    let f = Frame::new(cx, m)?;
    let mut v = ChainVector::zero(r as i64 + 1, f.j(r));
    for inner in subsets(m.h(), r) {
        for i in 1..=m.g() {
            let mut minus = f.externals_except(None);
            minus.push(f.regions[0]);
            f.push(&mut v, f.enhanced(f.state(&[i], &inner), &minus), 1);
        }
    }
    Ok(v)
}

/// V′ = Σ s^{0,(r+1)}_{;J′} over (r+1)-subsets J′, for even r < h on a
/// mono-circular pattern.
pub fn build_vprime(cx: &Complex, m: &PatternMatch, r: usize) -> Result<ChainVector, TorsionError> {
    if !m.mono_circular {
        return Err(TorsionError::NotMonoCircular);
    }
    if r == 0 || r % 2 == 1 || r >= m.h() {
        return Err(TorsionError::NoVprime { r, h: m.h() });
    }
    let f = Frame::new(cx, m)?;
    let mut v = ChainVector::zero(r as i64 + 1, f.j(r));
    for inner in subsets(m.h(), r + 1) {
        let minus = [f.row_arc(&inner, 0), f.row_arc(&inner, r + 1)];
        f.push(&mut v, f.enhanced(f.state(&[], &inner), &minus), 1);
    }
    Ok(v)
}

/// Checks d(X) = 2V, or d(X) = 2V + 2V′ for even r < h, by exact chain
/// equality.
pub fn verify_boundary_identity(cx: &Complex, m: &PatternMatch, r: usize) -> Result<BoundaryCase, TorsionError> {
    let dx = cx.differential(&build_x(cx, m, r)?);
    let two_v = build_v(cx, m, r)?.scaled(2);
    if dx == two_v {
        return Ok(BoundaryCase::TwoV);
    }
    if let Ok(vp) = build_vprime(cx, m, r) {
        if dx == two_v.sum(&vp.scaled(2)) {
            return Ok(BoundaryCase::TwoVPlusVprime);
        }
    }
    Err(TorsionError::IdentityFailed(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub dx_identity: bool,
    pub v_is_cycle: bool,
    pub v_not_exact: bool,
    pub two_v_exact: bool,
    pub even_torsion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub pattern: PatternMatch,
    pub r: usize,
    /// Bidegree (i, j) of V.
    pub bidegree: (i64, i64),
    /// Same position as (h, q).
    pub topological: (i64, i64),
    pub chain_x: Vec<ChainTerm>,
    pub chain_v: Vec<ChainTerm>,
    pub chain_vprime: Option<Vec<ChainTerm>>,
    pub checks: Checks,
    pub homology: HomologyGroup,
}

impl TorsionCertificate {
    pub fn is_valid(&self) -> bool {
        let c = &self.checks;
        c.dx_identity && c.v_is_cycle && c.v_not_exact && c.two_v_exact && c.even_torsion
    }

    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let c = &self.checks;
        [
            (c.dx_identity, "dX_identity"),
            (c.v_is_cycle, "V_is_cycle"),
            (c.v_not_exact, "V_not_exact"),
            (c.two_v_exact, "twoV_exact"),
            (c.even_torsion, "even_torsion"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }

    pub fn chain_x(&self) -> ChainVector {
        ChainVector::from_terms(self.r as i64, self.bidegree.1, &self.chain_x)
    }

    pub fn chain_v(&self) -> ChainVector {
        ChainVector::from_terms(self.bidegree.0, self.bidegree.1, &self.chain_v)
    }

    /// Recomputes d(X) = 2V from the stored chains.
    pub fn recheck(&self, cx: &Complex) -> bool {
        cx.differential(&self.chain_x()) == self.chain_v().scaled(2)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Builds X and V for odd r < h and checks that V is a cycle, V is not a
/// boundary, 2V = d(X), and the homology at V's bidegree has even torsion.
pub fn certify_torsion(cx: &Complex, m: &PatternMatch, r: usize) -> Result<TorsionCertificate, TorsionError> {
    if r == 0 || r > m.h() {
        return Err(TorsionError::OutOfRange { r, h: m.h() });
    }
    if r % 2 == 0 {
        return Err(TorsionError::EvenR(r));
    }
    if r == m.h() {
        return Err(TorsionError::FullInner(r));
    }
    let x = build_x(cx, m, r)?;
    let v = build_v(cx, m, r)?;
    let (i, j) = (v.i, v.j);
    let dx = cx.differential(&x);
    let dx_identity = dx == v.scaled(2);
    let v_is_cycle = cx.differential(&v).is_zero();
    let d = cx.boundary_matrix(i - 1, j);
    let v_not_exact = match image_membership(&d, &v)? {
        Membership::Obstructed(ob) => ob.verify(&d, &v),
        Membership::Solvable(_) => false,
    };
    let two_v_exact = dx_identity && image_membership(&d, &v.scaled(2))?.is_solvable();
    let homology = homology_group(cx, i, j);
    Ok(TorsionCertificate {
        pattern: m.clone(),
        r,
        bidegree: (i, j),
        topological: GradingMap::of(cx.diagram()).to_hq(i, j),
        chain_x: x.to_terms(),
        chain_v: v.to_terms(),
        chain_vprime: None,
        checks: Checks { dx_identity, v_is_cycle, v_not_exact, two_v_exact, even_torsion: homology.has_even_torsion() },
        homology,
    })
}

/// Which generator set the parity functional sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionSet {
    /// B only.
    Plain,
    /// B₁ = B plus the two states on outer chords 1 and 2 (r = 1).
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalOutcome {
    /// ε∘π∘d is even on every basis state and ε∘π(V) is odd; carries the
    /// values seen on basis states and on V.
    Passes { values: Vec<i64>, on_v: i64 },
    /// Basis states with an odd value.
    Counterexamples(Vec<(EnhancedState, i64)>),
}

/// The states of B (or B₁): s^{0k}_{;1..r+1} for k = 1..r+1 and
/// s^k_{1;2..r+1} for k = 0..r−1, with every external circle −. For B₁ the
/// two states on outer chords 1, 2 have − on the circle holding the x ends
/// and on one of the other two.
fn projection_states(f: &Frame, r: usize, set: ProjectionSet) -> Vec<EnhancedState> {
    let ext = f.externals_except(None);
    let mut out = Vec::new();
    let full: Vec<usize> = (1..=r + 1).collect();
    let s = f.state(&[], &full);
    for k in 1..=r + 1 {
        let mut minus = ext.clone();
        minus.extend([f.row_arc(&full, 0), f.row_arc(&full, k)]);
        out.push(f.enhanced(s, &minus));
    }
    let rest: Vec<usize> = (2..=r + 1).collect();
    let s = f.state(&[1], &rest);
    for k in 0..r {
        let mut minus = ext.clone();
        minus.push(f.row_arc(&rest, k));
        out.push(f.enhanced(s, &minus));
    }
    if set == ProjectionSet::Extended && f.m.g() >= 2 {
        let s = f.state(&[1, 2], &[]);
        for other in [f.before_u, f.between_u] {
            let mut minus = ext.clone();
            minus.extend([f.regions[0], other]);
            out.push(f.enhanced(s, &minus));
        }
    }
    out
}

/// Evaluates ε∘π_B∘d on every basis state of C^{r, j} and ε∘π_B on V, in
/// the pattern's crossing order. Plain B is used for r > 1 regardless of
/// `set`.
pub fn projection_functional_check(
    cx: &Complex,
    m: &PatternMatch,
    r: usize,
    set: ProjectionSet,
) -> Result<FunctionalOutcome, TorsionError> {
    if r % 2 == 0 {
        return Err(TorsionError::EvenR(r));
    }
    if r >= m.h() {
        return Err(TorsionError::FullInner(r));
    }
    check_form(m, r)?;
    let f = Frame::new(cx, m)?;
    let set = if r == 1 { set } else { ProjectionSet::Plain };
    let b = projection_states(&f, r, set);
    // Coefficient of a diagram-order chain on B, read in the pattern order.
    let eval = |z: &ChainVector| -> i64 { b.iter().map(|t| z.coefficient(t) * f.epsilon(t.state)).sum() };
    let j = f.j(r);
    let mut values = Vec::new();
    let mut odd = Vec::new();
    for s in cx.basis(r as i64, j) {
        let value = eval(&cx.differential(&ChainVector::from_state(s))) * f.epsilon(s.state);
        if value % 2 != 0 {
            odd.push((s, value));
        }
        values.push(value);
    }
    if !odd.is_empty() {
        return Ok(FunctionalOutcome::Counterexamples(odd));
    }
    let on_v = eval(&build_v(cx, m, r)?);
    Ok(FunctionalOutcome::Passes { values, on_v })
}

/// For a pattern with a single outer chord and r = 1: Y = −s^0_{1;} with
/// d(Y) = V, so V is a boundary. Returns Y.
pub fn exactness_witness_g1(cx: &Complex, m: &PatternMatch) -> Result<ChainVector, TorsionError> {
    if m.g() != 1 {
        return Err(TorsionError::NotSingleOuter(m.g()));
    }
    let f = Frame::new(cx, m)?;
    let mut minus = f.externals_except(None);
    minus.push(f.regions[0]);
    let s = f.enhanced(f.state(&[1], &[]), &minus);
    let mut y = ChainVector::zero(s.i(), s.j());
    f.push(&mut y, s, -1);
    if cx.differential(&y) != build_v(cx, m, 1)? {
        return Err(TorsionError::IdentityFailed(1));
    }
    Ok(y)
}

/// Looks up the state s^{minus}_{outer; inner} of the pattern, with `minus`
/// listing circles of the row (0..) to sign −; external circles are signed
/// −. For tests and reports.
pub fn pattern_state(cx: &Complex, m: &PatternMatch, outer: &[usize], inner: &[usize], minus: &[usize]) -> Result<EnhancedState, TorsionError> {
    let f = Frame::new(cx, m)?;
    let mut arcs = f.externals_except(None);
    arcs.extend(minus.iter().map(|&k| f.row_arc(inner, k)));
    Ok(f.enhanced(f.state(outer, inner), &arcs))
}
