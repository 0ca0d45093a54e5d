//! The acceptance corpus: ten checks over random diagrams, pretzel
//! diagrams and the built-ins, each reported as pass, fail or skipped.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{ChainVector, Complex, IncidenceRule};
use crate::diagram::builtin::{builtin, NAMES};
use crate::diagram::{
    a_smoothing_chord_diagram, braid_closure, insert_pattern_split, pretzel_diagram, smooth, KauffmanState, Label,
    LinkDiagram,
};
use crate::homology::{homology_group, homology_table, image_membership, GradingMap, HomologyGroup, Membership};
use crate::pattern::{find_patterns, find_patterns_with, PatternMatch};
use crate::torsion::{
    build_v, build_x, certify_torsion, exactness_witness_g1, pattern_state, projection_functional_check,
    verify_boundary_identity, BoundaryCase, FunctionalOutcome, ProjectionSet, TorsionError,
};

#[derive(Clone, Debug)]
pub struct Options {
    /// Items with more crossings are skipped.
    pub max_crossings: usize,
    pub seed: u64,
    /// Sign rule of every complex built; anything but the standard rule
    /// should make the d² check fail.
    pub rule: IncidenceRule,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_crossings: 14, seed: 1729, rule: IncidenceRule::Standard }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct Report {
    pub id: usize,
    pub title: &'static str,
    pub verdict: Verdict,
    /// What was checked, including items skipped by the size guard.
    pub detail: String,
    pub seconds: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match &self.verdict {
            Verdict::Pass => "PASS".to_string(),
            Verdict::Fail(why) => format!("FAIL ({why})"),
            Verdict::Skipped(why) => format!("SKIP ({why})"),
        };
        write!(f, "[{:>2}] {tag} {} [{:.1}s] {}", self.id, self.title, self.seconds, self.detail)
    }
}

pub const TITLES: [&str; 10] = [
    "d^2 = 0 on random diagrams and built-ins",
    "boundary identity sweep on pretzel diagrams",
    "mirror 6_1 table",
    "trefoil certificate",
    "8_19 with an inserted D(2,2)",
    "Whitehead and Borromean certificates",
    "parity functional",
    "single outer chord makes V exact",
    "no certificate for r = h",
    "renumbering invariance and bracket oracle",
];

type Outcome = Result<String, String>;

/// (i, j) → (free rank, torsion).
pub type Cell = ((i64, i64), (usize, &'static [u64]));

/// Nonzero cells of the mirror 6_1 diagram D(2,5).
pub const MIRROR_SIX_ONE: [Cell; 11] = [
    ((1, -1), (1, &[])),
    ((2, 1), (0, &[2])),
    ((2, 3), (1, &[])),
    ((3, 3), (1, &[])),
    ((4, 5), (1, &[2])),
    ((4, 7), (1, &[])),
    ((5, 7), (1, &[2])),
    ((5, 9), (2, &[])),
    ((6, 9), (1, &[])),
    ((7, 11), (0, &[2])),
    ((7, 13), (1, &[])),
];

struct Ctx<'a> {
    opts: &'a Options,
    skipped: Vec<String>,
}

impl Ctx<'_> {
    fn fits(&mut self, name: &str, d: &LinkDiagram) -> bool {
        if d.crossing_count() > self.opts.max_crossings {
            self.skipped.push(format!("{name} ({} crossings)", d.crossing_count()));
            false
        } else {
            true
        }
    }

    fn complex(&self, d: &LinkDiagram) -> Complex {
        Complex::new(d).with_rule(self.opts.rule)
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_braid(rng: &mut ChaCha8Rng, max_len: usize) -> LinkDiagram {
    let strands = rng.gen_range(2..=4);
    let len = rng.gen_range(1..=max_len);
    let word: Vec<i32> = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands) as i32;
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    braid_closure(strands, &word).expect("letters in range")
}

fn pretzel_match(g: usize, h: usize, min: usize) -> Result<(LinkDiagram, PatternMatch), String> {
    let d = pretzel_diagram(g, h).map_err(|e| e.to_string())?;
    let cd = a_smoothing_chord_diagram(&d).map_err(|e| e.to_string())?;
    let m = find_patterns_with(&cd, min)
        .into_iter()
        .find(|m| m.g() == g && m.h() == h)
        .ok_or_else(|| format!("no D({g},{h}) pattern found"))?;
    Ok((d, m))
}

fn square_is_zero(cx: &Complex) -> bool {
    let n = cx.crossing_count() as i64;
    cx.quantum_degrees().into_iter().all(|j| {
        (0..n - 1).all(|i| cx.boundary_matrix(i + 1, j).compose_is_zero(&cx.boundary_matrix(i, j)))
    })
}

fn c1_square(ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed);
    let mut items: Vec<(String, LinkDiagram)> =
        (0..50).map(|k| (format!("random #{k}"), random_braid(&mut rng, 8))).collect();
    for name in NAMES {
        items.push((name.to_string(), builtin(name).map_err(|e| e.to_string())?));
    }
    let mut checked = 0;
    for (name, d) in &items {
        if !ctx.fits(name, d) {
            continue;
        }
        ensure(square_is_zero(&ctx.complex(d)), || format!("d∘d ≠ 0 on {name}: {}", d.to_pd()))?;
        checked += 1;
    }
    Ok(format!("{checked} diagrams"))
}

fn c2_sweep(ctx: &mut Ctx) -> Outcome {
    let mut count = 0;
    for g in 2..=4 {
        for h in 2..=4 {
            let (d, m) = pretzel_match(g, h, 2)?;
            if !ctx.fits(&format!("D({g},{h})"), &d) {
                continue;
            }
            let cx = ctx.complex(&d);
            for r in 1..=h {
                let want = if r % 2 == 1 || r == h { BoundaryCase::TwoV } else { BoundaryCase::TwoVPlusVprime };
                let got = verify_boundary_identity(&cx, &m, r).map_err(|e| format!("g={g} h={h} r={r}: {e}"))?;
                ensure(got == want, || format!("g={g} h={h} r={r}: {got:?}, expected {want:?}"))?;
                count += 1;
            }
        }
    }
    ensure(count > 0, || "skipped".into())?;
    Ok(format!("{count} (g,h,r) triples"))
}

fn c3_table(ctx: &mut Ctx) -> Outcome {
    let d = builtin("mirror6_1_D25").map_err(|e| e.to_string())?;
    ensure(ctx.fits("mirror6_1_D25", &d), || "skipped".into())?;
    let table = homology_table(&ctx.complex(&d));
    let expected: BTreeMap<(i64, i64), HomologyGroup> = MIRROR_SIX_ONE
        .iter()
        .map(|&(ij, (free_rank, t))| (ij, HomologyGroup { free_rank, torsion: t.to_vec() }))
        .collect();
    ensure(table.groups == expected, || {
        let diff: Vec<String> = expected
            .keys()
            .chain(table.groups.keys())
            .filter(|k| table.get(k.0, k.1) != expected.get(k).cloned().unwrap_or_default())
            .map(|k| format!("{k:?}: got {}", table.get(k.0, k.1)))
            .collect();
        diff.join("; ")
    })?;
    ensure(GradingMap::of(&d) == GradingMap { p: 2, n: 5 }, || "expected p=2, n=5".into())?;
    Ok(format!("{} nonzero cells equal", expected.len()))
}

fn c4_trefoil(ctx: &mut Ctx) -> Outcome {
    let (d, m) = pretzel_match(2, 2, 2)?;
    ensure(ctx.fits("trefoil_D22", &d), || "skipped".into())?;
    let cx = ctx.complex(&d);
    let cert = certify_torsion(&cx, &m, 1).map_err(|e| e.to_string())?;
    ensure(cert.is_valid(), || format!("failed checks {:?}", cert.failures()))?;
    // Each X term hits two V terms, each V term is hit twice, all with
    // coefficient +1 in the pattern order.
    let x = build_x(&cx, &m, 1).map_err(|e| e.to_string())?;
    let v = build_v(&cx, &m, 1).map_err(|e| e.to_string())?;
    let mut hits: BTreeMap<_, i64> = BTreeMap::new();
    let mut rest = ChainVector::zero(2, 1);
    for (s, &c) in x.terms() {
        let dx = cx.differential(&ChainVector::from_state(*s)).scaled(c);
        let mut on_v = 0;
        for (t, &e) in dx.terms() {
            let vc = v.coefficient(t);
            if vc != 0 {
                ensure(e == vc, || format!("{s} → {t} with {e}, V has {vc}"))?;
                *hits.entry(*t).or_default() += 1;
                on_v += 1;
            } else {
                rest.add_term(*t, e);
            }
        }
        ensure(on_v == 2, || format!("{s} hits {on_v} V terms"))?;
    }
    ensure(hits.len() == 4 && hits.values().all(|&k| k == 2), || format!("V hit counts {hits:?}"))?;
    ensure(rest.is_zero(), || format!("terms off V do not cancel: {rest:?}"))?;
    for (j, i) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let s = pattern_state(&cx, &m, &[i], &[j], &[0]).map_err(|e| e.to_string())?;
        ensure(v.coefficient(&s) != 0, || format!("s^0_{{{i};{j}}} missing from V"))?;
    }
    Ok(format!("d(X) = V + V over {} X terms, homology {}", x.len(), cert.homology))
}

fn c5_insertion(ctx: &mut Ctx) -> Outcome {
    let base = braid_closure(3, &[1, 2, 1, 2, 1, 2, 1, 2]).map_err(|e| e.to_string())?;
    let d = insert_pattern_split(&base, [13, 13, 13, 9], 2, 2).map_err(|e| e.to_string())?;
    ensure(ctx.fits("8_19 insertion", &d), || "skipped".into())?;
    let cd = a_smoothing_chord_diagram(&d).map_err(|e| e.to_string())?;
    let shape = (d.crossing_count(), d.positive_count(), d.negative_count(), cd.circle_count());
    ensure(shape == (12, 8, 4, 3), || format!("(crossings, p, n, |s_A D|) = {shape:?}"))?;
    let m = find_patterns(&cd).into_iter().find(|m| m.bipartite_ok).ok_or("no bipartite pattern")?;
    let cx = ctx.complex(&d);
    let cert = certify_torsion(&cx, &m, 1).map_err(|e| e.to_string())?;
    ensure(cert.is_valid(), || format!("failed checks {:?}", cert.failures()))?;
    let (i, j) = GradingMap::of(&d).to_ij(-2, -1);
    let group = homology_group(&cx, i, j);
    ensure(group == HomologyGroup { free_rank: 1, torsion: vec![2] }, || format!("Kh^{{-2,-1}} = {group}"))?;
    ensure(cert.bidegree == (i, j), || format!("certificate at {:?}, expected {:?}", cert.bidegree, (i, j)))?;
    Ok(format!("certificate at (i,j)={:?}, Kh^{{-2,-1}} = {group}", cert.bidegree))
}

fn c6_bipartite(ctx: &mut Ctx) -> Outcome {
    let mut done = Vec::new();
    for name in ["whitehead", "borromean"] {
        let d = builtin(name).map_err(|e| e.to_string())?;
        if !ctx.fits(name, &d) {
            continue;
        }
        let cd = a_smoothing_chord_diagram(&d).map_err(|e| e.to_string())?;
        let ms = find_patterns(&cd);
        let m = ms.iter().find(|m| m.bipartite_ok).ok_or_else(|| format!("{name}: no bipartite match"))?;
        let cx = ctx.complex(&d);
        let cert = certify_torsion(&cx, m, 1).map_err(|e| format!("{name}: {e}"))?;
        ensure(cert.is_valid(), || format!("{name}: failed checks {:?}", cert.failures()))?;
        let want = (2, 2 - cd.circle_count() as i64);
        ensure(cert.bidegree == want, || format!("{name}: bidegree {:?}, expected {want:?}", cert.bidegree))?;
        done.push(format!("{name} {} at {:?}", cert.homology, cert.bidegree));
    }
    ensure(!done.is_empty(), || "skipped".into())?;
    Ok(done.join(", "))
}

fn c7_parity(ctx: &mut Ctx) -> Outcome {
    let (d, m) = pretzel_match(2, 5, 2)?;
    ensure(ctx.fits("D(2,5)", &d), || "skipped".into())?;
    let cx = ctx.complex(&d);
    let run = |r, set| projection_functional_check(&cx, &m, r, set).map_err(|e| e.to_string());
    for (r, set) in [(3, ProjectionSet::Plain), (1, ProjectionSet::Extended)] {
        match run(r, set)? {
            FunctionalOutcome::Passes { on_v, .. } => ensure(on_v % 2 != 0, || format!("r={r}: value {on_v} on V"))?,
            FunctionalOutcome::Counterexamples(bad) => return Err(format!("r={r}: odd on {} states", bad.len())),
        }
    }
    let s = pattern_state(&cx, &m, &[1], &[], &[0]).map_err(|e| e.to_string())?;
    match run(1, ProjectionSet::Plain)? {
        FunctionalOutcome::Counterexamples(bad) => {
            ensure(bad.iter().any(|&(t, v)| t == s && v.abs() == 1), || format!("s^0_{{1;}} not among {bad:?}"))?
        }
        FunctionalOutcome::Passes { .. } => return Err("plain B at r=1 shows no odd value".into()),
    }
    Ok("even on C^{3,5} and C^{1,1} (with B1); plain B at r=1 is odd on s^0_{1;}".into())
}

fn c8_single_outer(ctx: &mut Ctx) -> Outcome {
    let mut done = Vec::new();
    for h in 2..=4 {
        let (d, m) = pretzel_match(1, h, 1)?;
        if !ctx.fits(&format!("D(1,{h})"), &d) {
            continue;
        }
        done.push(h.to_string());
        let cx = ctx.complex(&d);
        let y = exactness_witness_g1(&cx, &m).map_err(|e| format!("h={h}: {e}"))?;
        let v = build_v(&cx, &m, 1).map_err(|e| e.to_string())?;
        let membership = image_membership(&cx.boundary_matrix(1, v.j), &v).map_err(|e| e.to_string())?;
        ensure(matches!(membership, Membership::Solvable(_)), || format!("h={h}: V not exact"))?;
        ensure(cx.differential(&y) == v, || format!("h={h}: d(Y) ≠ V"))?;
    }
    ensure(!done.is_empty(), || "skipped".into())?;
    Ok(format!("d(-s^0_{{1;}}) = V for h = {}", done.join(", ")))
}

fn c9_negative(ctx: &mut Ctx) -> Outcome {
    let (d, m) = pretzel_match(2, 5, 2)?;
    ensure(ctx.fits("D(2,5)", &d), || "skipped".into())?;
    let cx = ctx.complex(&d);
    match certify_torsion(&cx, &m, 5) {
        Err(TorsionError::FullInner(5)) => {}
        other => return Err(format!("r=5 not rejected: {:?}", other.map(|c| c.bidegree))),
    }
    let g = homology_group(&cx, 6, 9);
    ensure(g.torsion.is_empty(), || format!("torsion at (6,9): {g}"))?;
    Ok(format!("r=5 rejected, Kh(6,9) = {g}"))
}

/// ⟨D⟩ as exponent → coefficient in A, by direct state sum:
/// Σ_s A^{#A − #B} (−A² − A⁻²)^{circles}.
pub fn bracket(d: &LinkDiagram) -> BTreeMap<i64, i64> {
    let n = d.crossing_count();
    let mut out = BTreeMap::new();
    for bits in 0..1u64 << n {
        let labels: Vec<Label> = (0..n).map(|x| if bits >> x & 1 == 1 { Label::B } else { Label::A }).collect();
        let c = smooth(d, &KauffmanState::from_labels(&labels)).expect("state fits").count();
        let b = bits.count_ones() as i64;
        // (−A² − A⁻²)^c = (−1)^c Σ_k C(c,k) A^{2c − 4k}
        let mut binom = 1i64;
        for k in 0..=c as i64 {
            let sign = if c % 2 == 0 { 1 } else { -1 };
            *out.entry(n as i64 - 2 * b + 2 * c as i64 - 4 * k).or_insert(0) += sign * binom;
            binom = binom * (c as i64 - k) / (k + 1);
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn c10_invariance(ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.opts.seed ^ 0x5eed);
    let mut diagrams = 0;
    for k in 0..10 {
        let d = random_braid(&mut rng, 7);
        if !ctx.fits(&format!("random #{k}"), &d) {
            continue;
        }
        let n = d.crossing_count();
        let cx = ctx.complex(&d);
        let table = homology_table(&cx);
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let other = homology_table(&ctx.complex(&d.renumbered(&order)));
            ensure(other == table, || format!("diagram #{k} {} changes under {order:?}", d.to_pd()))?;
        }
        // ⟨D⟩ = A^n · χ(q = −A⁻²).
        let mut from_table = BTreeMap::new();
        for (j, c) in table.euler_characteristic().terms() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            *from_table.entry(n as i64 - 2 * j).or_insert(0) += sign * c;
        }
        from_table.retain(|_, v: &mut i64| *v != 0);
        ensure(from_table == bracket(&d), || format!("diagram #{k} {}: bracket differs", d.to_pd()))?;
        diagrams += 1;
    }
    ensure(diagrams > 0, || "skipped".into())?;
    Ok(format!("{diagrams} diagrams × 10 renumberings"))
}

pub fn run_criterion(id: usize, opts: &Options) -> Report {
    assert!((1..=10).contains(&id), "criteria are numbered 1..=10");
    let start = Instant::now();
    let mut ctx = Ctx { opts, skipped: Vec::new() };
    let outcome = match id {
        1 => c1_square(&mut ctx),
        2 => c2_sweep(&mut ctx),
        3 => c3_table(&mut ctx),
        4 => c4_trefoil(&mut ctx),
        5 => c5_insertion(&mut ctx),
        6 => c6_bipartite(&mut ctx),
        7 => c7_parity(&mut ctx),
        8 => c8_single_outer(&mut ctx),
        9 => c9_negative(&mut ctx),
        _ => c10_invariance(&mut ctx),
    };
    let skipped = match ctx.skipped.len() {
        0 => String::new(),
        k if k <= 3 => format!("; skipped {}", ctx.skipped.join(", ")),
        k => format!("; skipped {k} items: {}, …", ctx.skipped[..3].join(", ")),
    };
    let (verdict, detail) = match outcome {
        Ok(detail) => (Verdict::Pass, detail + &skipped),
        Err(why) if !ctx.skipped.is_empty() && why == "skipped" => (Verdict::Skipped(ctx.skipped.join(", ")), String::new()),
        Err(why) => (Verdict::Fail(why), skipped),
    };
    Report { id, title: TITLES[id - 1], verdict, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(opts: &Options) -> Vec<Report> {
    (1..=10).map(|id| run_criterion(id, opts)).collect()
}
