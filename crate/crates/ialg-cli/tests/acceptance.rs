//! End-to-end acceptance gate for the engine and the session runner.
//!
//! Each test exercises one advertised guarantee against hand-derived
//! values, an independent recount, or a certificate replay, and prints a
//! single pass line.  The fixtures are the three rank-2 planes (free,
//! commuting, and the 2-skewed plane) built fresh in every test.

use std::sync::Arc;

use ialg_cli::report::to_json;
use ialg_cli::session::{run_text, RunOptions};
use ialg_cli::{corpus, parse};
use ialg_core::algebra::{Algebra, PresentedAlgebra, RelationInput, RelationSpan};
use ialg_core::checks::{
    check_cocompact_by_criterion, check_sequence_conditions, check_star, check_strongly_indexed,
    check_tails_cocompact, replay_generation, replay_strong_indexing, window_pairs, SweepChain,
};
use ialg_core::field::{Field, Rationals};
use ialg_core::gradedmod::{
    hom_space, torsion_rows, Module, ModuleGenerator, PresRelation, Presentation,
};
use ialg_core::linalg::{Echelon, PivotScan};
use ialg_core::outcome::{InconclusiveReason, Verdict};
use ialg_core::poset::{IndexElement, Window};
use ialg_core::qgr::{a_of_sequence, diagonal_cut_chain, qgr_hom, tau_colimit};
use ialg_core::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Elem = <Rationals as Field>::Elem;

fn q(n: i64) -> Elem {
    Rationals.from_integer(n)
}

fn lat(cs: &[i64]) -> IndexElement {
    IndexElement::lattice(cs)
}

fn plane(name: &str, rels: Vec<RelationInput<Rationals>>) -> Algebra<Rationals> {
    let gens = vec![("x".to_string(), vec![1, 0]), ("y".to_string(), vec![0, 1])];
    Algebra::Presented(
        PresentedAlgebra::from_graded_ring(name, Rationals, 2, gens, rels, Limits::default())
            .unwrap(),
    )
}

fn free_xy() -> Algebra<Rationals> {
    plane("free_xy", vec![])
}

fn commutation(coeff: Elem) -> RelationInput<Rationals> {
    RelationInput {
        span: RelationSpan::Shift(vec![1, 1]),
        terms: vec![
            (q(1), vec!["x".to_string(), "y".to_string()]),
            (coeff, vec!["y".to_string(), "x".to_string()]),
        ],
    }
}

fn poly_xy() -> Algebra<Rationals> {
    plane("poly_xy", vec![commutation(q(-1))])
}

fn q_poly_xy() -> Algebra<Rationals> {
    plane("q_poly_xy", vec![commutation(q(-2))])
}

fn window(a: &Algebra<Rationals>, lo: &[i64], hi: &[i64]) -> Window {
    Window::interval_box(a.poset(), &lat(lo), &lat(hi), a.limits()).unwrap()
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    // Each partial product is itself a binomial, so the division is exact.
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `P(0,0)` modulo the submodule generated by `x*y*y` and `x*x*y`: over the
/// commuting plane the survivors are the two axes and the corner `(1,1)`.
fn truncated_column(d: &Algebra<Rationals>) -> Arc<Module<Rationals>> {
    let rel = |word: &[&str]| {
        let terms = vec![(q(1), word.iter().map(|s| s.to_string()).collect())];
        let el = d.element_from_words(&lat(&[0, 0]), &terms).unwrap();
        PresRelation { at: el.to, terms: vec![(0, el.coords)] }
    };
    Module::presented(
        d.clone(),
        Presentation {
            gens: vec![ModuleGenerator { name: "g".to_string(), at: lat(&[0, 0]) }],
            rels: vec![rel(&["x", "y", "y"]), rel(&["x", "x", "y"])],
        },
        "P(0,0)/col",
    )
    .unwrap()
}

/// Cokernel of `(x, y): P(1,0) + P(0,1) -> P(0,0)`, presented directly:
/// one generator with both degree-one components killed.
fn arrow_cokernel(a: &Algebra<Rationals>) -> Arc<Module<Rationals>> {
    let kill = |at: &[i64]| PresRelation { at: lat(at), terms: vec![(0, vec![q(1)])] };
    Module::presented(
        a.clone(),
        Presentation {
            gens: vec![ModuleGenerator { name: "g".to_string(), at: lat(&[0, 0]) }],
            rels: vec![kill(&[1, 0]), kill(&[0, 1])],
        },
        "coker(x,y)",
    )
    .unwrap()
}

/// First-syzygy cokernel: generators at `(1,0)` and `(0,1)` glued along the
/// square `a*y - b*x` at `(1,1)`.
fn glued_pair(a: &Algebra<Rationals>) -> Arc<Module<Rationals>> {
    Module::presented(
        a.clone(),
        Presentation {
            gens: vec![
                ModuleGenerator { name: "a".to_string(), at: lat(&[1, 0]) },
                ModuleGenerator { name: "b".to_string(), at: lat(&[0, 1]) },
            ],
            rels: vec![PresRelation {
                at: lat(&[1, 1]),
                terms: vec![(0, vec![q(1)]), (1, vec![q(-1)])],
            }],
        },
        "glued",
    )
    .unwrap()
}

fn flat_labels(pairs: &[(IndexElement, Vec<String>)]) -> Vec<&str> {
    pairs.iter().flat_map(|(_, ls)| ls.iter().map(String::as_str)).collect()
}

#[test]
fn criterion_01_free_plane_dims_count_binary_words_two_ways() {
    let b = free_xy();
    let origin = lat(&[0, 0]);
    for s in 0..=6i64 {
        for t in 0..=6i64 {
            let dim = b.dim(&origin, &lat(&[s, t])).unwrap();
            // Independent recount: binary words of length s+t with s ones.
            let len = (s + t) as u32;
            let words = (0u32..1 << len).filter(|m| m.count_ones() == s as u32).count();
            assert_eq!(dim, words, "at ({s},{t})");
            assert_eq!(dim as u64, binom((s + t) as u64, s as u64), "at ({s},{t})");
        }
    }
    println!("[ 1/15] free plane dims count binary words two ways: pass");
}

#[test]
fn criterion_02_commuting_plane_dims_are_the_domination_indicator() {
    let d = poly_xy();
    for m in -1..=5i64 {
        for n in -1..=5i64 {
            for r in -1..=5i64 {
                for s in -1..=5i64 {
                    let got = d.dim(&lat(&[m, n]), &lat(&[r, s])).unwrap();
                    let want = usize::from(r >= m && s >= n);
                    assert_eq!(got, want, "({m},{n}) -> ({r},{s})");
                }
            }
        }
    }
    println!("[ 2/15] commuting plane dims are the domination indicator: pass");
}

#[test]
fn criterion_03_induction_dims_agree_on_small_intervals() {
    for a in [free_xy(), poly_xy()] {
        let pres = a.as_presented().unwrap();
        let mut checked = 0usize;
        for i1 in 0..=2i64 {
            for i2 in 0..=2i64 {
                for j1 in 0..=6i64 {
                    for j2 in 0..=6i64 {
                        let (i, j) = (lat(&[i1, i2]), lat(&[j1, j2]));
                        if !a.poset().leq(&i, &j).unwrap() {
                            continue;
                        }
                        let Ok(size) = a.poset().interval_size(&i, &j, 20) else { continue };
                        if size > 20 {
                            continue;
                        }
                        let direct = a.dim(&i, &j).unwrap();
                        let induced = pres.dim_via_induction(&i, &j).unwrap();
                        assert_eq!(induced, direct, "{}: {i} -> {j}", a.name());
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 100, "{}: only {checked} intervals sampled", a.name());
    }
    println!("[ 3/15] induction dims agree on small intervals: pass");
}

#[test]
fn criterion_04_commuting_tails_are_finitely_generated_everywhere() {
    let d = poly_xy();
    let w = window(&d, &[0, 0], &[4, 4]);
    let pairs = window_pairs(d.poset(), &w);
    assert_eq!(pairs.len(), 225);
    let report = check_tails_cocompact(&d, &pairs, &SweepChain::default()).unwrap();
    assert_eq!(report.verdict(), Verdict::Verified);
    let (_, _, outcome) = report
        .per_pair
        .iter()
        .find(|(i, c, _)| *i == lat(&[0, 0]) && *c == lat(&[1, 1]))
        .unwrap();
    let cert = outcome.certificate.as_ref().unwrap();
    assert_eq!(cert.generators, vec![(lat(&[1, 2]), 1), (lat(&[2, 1]), 1)]);
    assert_eq!(flat_labels(&cert.labels), ["x*y*y", "x*x*y"]);
    println!("[ 4/15] commuting tails are finitely generated everywhere: pass");
}

#[test]
fn criterion_05_free_tail_generators_grow_with_the_window() {
    let b = free_xy();
    let windows: Vec<Window> = (4..=6).map(|k| window(&b, &[0, 0], &[k, 3])).collect();
    let chain = SweepChain::Explicit(windows);
    let report =
        check_tails_cocompact(&b, &[(lat(&[0, 0]), lat(&[1, 1]))], &chain).unwrap();
    let (_, _, outcome) = &report.per_pair[0];
    let Verdict::Inconclusive(InconclusiveReason::Growth(ev)) = &outcome.verdict else {
        panic!("expected growth evidence, got {:?}", outcome.verdict);
    };
    assert_eq!(ev.totals.len(), 3);
    assert!(ev.totals.windows(2).all(|p| p[0] < p[1]), "totals {:?}", ev.totals);
    // Every widening admits one more generator on the x-frontier row.
    for (step, counts) in ev.degree_counts.iter().enumerate() {
        for s in 2..=(4 + step as i64) {
            assert!(
                counts.iter().any(|(idx, n)| *idx == lat(&[s, 1]) && *n > 0),
                "no fresh generator at ({s},1) inside {}",
                ev.windows[step]
            );
        }
    }
    println!("[ 5/15] free tail generators grow with the window: pass");
}

#[test]
fn criterion_06_star_generation_holds_with_arrow_labels() {
    for a in [free_xy(), poly_xy()] {
        let w = window(&a, &[0, 0], &[3, 3]);
        let report = check_star(&a, &w, &SweepChain::default()).unwrap();
        assert_eq!(report.verdict(), Verdict::Verified, "{}", a.name());
        for (i, outcome) in &report.per_index {
            let cert = outcome.certificate.as_ref().unwrap();
            let mut labels = flat_labels(&cert.labels);
            labels.sort_unstable();
            assert_eq!(labels, ["x", "y"], "{} at {i}", a.name());
        }
    }
    println!("[ 6/15] star generation holds with arrow labels: pass");
}

#[test]
fn criterion_07_strong_indexing_separates_the_three_planes() {
    let b = free_xy();
    let d = poly_xy();
    let qp = q_poly_xy();
    for a in [&d, &qp] {
        let out = check_strongly_indexed(a, &window(a, &[0, 0], &[2, 2])).unwrap();
        assert_eq!(out.verdict, Verdict::Verified, "{}", a.name());
    }
    let out = check_strongly_indexed(&b, &window(&b, &[0, 0], &[2, 2])).unwrap();
    assert_eq!(out.verdict, Verdict::Refuted);
    let failure = out.certificate.as_ref().unwrap().failure.as_ref().unwrap();
    assert_eq!(failure.lower, lat(&[0, 0]));
    assert_eq!(failure.mid, lat(&[1, 0]));
    assert_eq!(failure.upper, lat(&[1, 1]));
    assert_eq!((failure.product_rank, failure.full_dim), (1, 2));
    assert_eq!(failure.missing, "y*x");
    // The positive outcomes upgrade the tails verdict without a pair scan.
    for a in [&d, &qp] {
        let out =
            check_cocompact_by_criterion(a, &window(a, &[0, 0], &[2, 2]), &SweepChain::default())
                .unwrap();
        assert!(
            matches!(out.verdict, Verdict::VerifiedByCriterion(_)),
            "{}: {:?}",
            a.name(),
            out.verdict
        );
    }
    println!("[ 7/15] strong indexing separates the three planes: pass");
}

#[test]
fn criterion_08_tail_dims_split_off_the_cut_component() {
    let algebras = [free_xy(), poly_xy()];
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    for trial in 0..50 {
        let a = &algebras[rng.gen_range(0..2)];
        let i = lat(&[rng.gen_range(0..=2), rng.gen_range(0..=2)]);
        let m = if rng.gen_bool(0.5) {
            Module::free(a.clone(), &i, "P").unwrap()
        } else {
            Module::simple(a.clone(), &i, "S").unwrap()
        };
        let cut = lat(&[rng.gen_range(0..=4), rng.gen_range(0..=4)]);
        let j = lat(&[rng.gen_range(0..=5), rng.gen_range(0..=5)]);
        let wide = Module::tail(&m, &cut, false, "wide").unwrap();
        let strict = Module::tail(&m, &cut, true, "strict").unwrap();
        let at_cut = if j == cut { m.dim(&j).unwrap() } else { 0 };
        assert_eq!(
            wide.dim(&j).unwrap(),
            strict.dim(&j).unwrap() + at_cut,
            "trial {trial}: {} from {i}, cut {cut}, at {j}",
            m.name()
        );
    }
    println!("[ 8/15] tail dims split off the cut component: pass");
}

#[test]
fn criterion_09_stabilized_tau_sections_match_torsion_degreewise() {
    let d = poly_xy();
    let w = window(&d, &[0, 0], &[4, 4]);
    let cuts = diagonal_cut_chain(&w, 4).unwrap();
    let samples = [
        Module::free(d.clone(), &lat(&[0, 0]), "P(0,0)").unwrap(),
        Module::simple(d.clone(), &lat(&[0, 0]), "S(0,0)").unwrap(),
        truncated_column(&d),
    ];
    for m in &samples {
        let probe = tau_colimit(m, &cuts, &w).unwrap();
        assert!(probe.probe.stabilized, "{} did not stabilize", m.name());
        let stable = probe.stable.as_ref().unwrap();
        for j in w.elements() {
            let tau: &[Vec<Elem>] =
                stable.iter().find(|(idx, _)| idx == j).map_or(&[], |(_, rows)| rows);
            let torsion = torsion_rows(m, &w, j).unwrap();
            assert_eq!(tau.len(), torsion.len(), "{} at {j}", m.name());
            // Same count plus containment in an independent family: equal spans.
            let mut ech = Echelon::new(Rationals, m.dim(j).unwrap(), PivotScan::Forward);
            for row in &torsion {
                assert!(ech.insert(row.clone()), "{}: dependent torsion row at {j}", m.name());
            }
            for row in tau {
                assert!(!ech.insert(row.clone()), "{}: tau row outside torsion at {j}", m.name());
            }
        }
    }
    println!("[ 9/15] stabilized tau sections match torsion degreewise: pass");
}

#[test]
fn criterion_10_hom_from_a_free_module_is_evaluation_at_its_index() {
    for a in [free_xy(), poly_xy()] {
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P(0,0)").unwrap();
        let targets: Vec<Arc<Module<Rationals>>> = vec![
            p0.clone(),
            Module::free(a.clone(), &lat(&[1, 1]), "P(1,1)").unwrap(),
            Module::simple(a.clone(), &lat(&[0, 0]), "S(0,0)").unwrap(),
            Module::simple(a.clone(), &lat(&[2, 1]), "S(2,1)").unwrap(),
            Module::tail(&p0, &lat(&[1, 1]), true, "P(0,0)>(1,1)").unwrap(),
            arrow_cokernel(&a),
            glued_pair(&a),
        ];
        for i1 in 0..=2i64 {
            for i2 in 0..=2i64 {
                let i = lat(&[i1, i2]);
                let free = Module::free(a.clone(), &i, "P").unwrap();
                let pres = free.implicit_presentation().unwrap();
                for n in &targets {
                    let maps = hom_space(&pres, n).unwrap();
                    assert_eq!(
                        maps.len(),
                        n.dim(&i).unwrap(),
                        "{}: Hom(P{i}, {})",
                        a.name(),
                        n.name()
                    );
                }
            }
        }
    }
    println!("[10/15] hom from a free module is evaluation at its index: pass");
}

#[test]
fn criterion_11_endomorphism_table_of_frees_rebuilds_the_plane() {
    let d = poly_xy();
    let mut entries = Vec::new();
    for i1 in 0..=2i64 {
        for i2 in 0..=2i64 {
            let i = lat(&[i1, i2]);
            let m = Module::free(d.clone(), &i, &format!("P({i1},{i2})")).unwrap();
            entries.push((i, m));
        }
    }
    let seq = a_of_sequence(&entries, "End(frees)").unwrap();
    assert!(seq.connected.is_verified());
    let table = seq.algebra.as_ref().unwrap();
    let index: Vec<IndexElement> = entries.iter().map(|(i, _)| i.clone()).collect();
    for i in &index {
        for j in &index {
            if !d.poset().leq(i, j).unwrap() {
                continue;
            }
            assert_eq!(table.dim(i, j).unwrap(), d.dim(i, j).unwrap(), "{i} -> {j}");
            for mid in &index {
                if d.poset().leq(i, mid).unwrap() && d.poset().leq(mid, j).unwrap() {
                    assert_eq!(
                        table.mul_basis(i, mid, j, 0, 0).unwrap(),
                        d.mul_basis(i, mid, j, 0, 0).unwrap(),
                        "{i} -> {mid} -> {j}"
                    );
                }
            }
        }
    }
    println!("[11/15] endomorphism table of frees rebuilds the plane: pass");
}

#[test]
fn criterion_12_hom_past_the_cuts_kills_the_simple() {
    let d = poly_xy();
    let w = window(&d, &[0, 0], &[5, 5]);
    let cuts = diagonal_cut_chain(&w, 4).unwrap();
    let p0 = Module::free(d.clone(), &lat(&[0, 0]), "P(0,0)").unwrap();
    let s0 = Module::simple(d.clone(), &lat(&[0, 0]), "S(0,0)").unwrap();
    let probe = qgr_hom(&p0, &s0, &cuts, &w).unwrap();
    assert!(probe.probe.stabilized);
    assert_eq!(probe.terminal_dim(), Some(0));
    println!("[12/15] hom past the cuts kills the simple: pass");
}

#[test]
fn criterion_13_sequence_conditions_hold_for_the_commuting_samples() {
    let d = poly_xy();
    let samples = [
        Module::free(d.clone(), &lat(&[0, 0]), "P(0,0)").unwrap(),
        Module::simple(d.clone(), &lat(&[0, 0]), "S(0,0)").unwrap(),
        arrow_cokernel(&d),
    ];
    let w = window(&d, &[0, 0], &[4, 4]);
    let report = check_sequence_conditions(&samples, &w, &SweepChain::default()).unwrap();
    assert_eq!(report.ample_verdict(), Verdict::Verified);
    assert_eq!(report.tails_verdict(), Verdict::Verified);
    assert_eq!(report.surjectivity_verdict(), Verdict::Verified);
    println!("[13/15] sequence conditions hold for the commuting samples: pass");
}

#[test]
fn criterion_14_certificates_replay_independently() {
    let b = free_xy();
    let d = poly_xy();
    let qp = q_poly_xy();
    let chain = SweepChain::default();
    let mut replays = 0usize;

    let replay_tail = |a: &Algebra<Rationals>,
                       m: &Arc<Module<Rationals>>,
                       cut: &IndexElement,
                       cert: &ialg_core::checks::GenerationCertificate| {
        let tail = Module::tail(m, cut, true, &format!("{}>{cut}", m.name())).unwrap();
        let outer = chain.windows_for(a.poset(), cut, a.limits()).unwrap().pop().unwrap();
        replay_generation(&tail, &outer, cert).unwrap()
    };

    // Tail certificates across the commuting window.
    let w4 = window(&d, &[0, 0], &[4, 4]);
    let tails =
        check_tails_cocompact(&d, &window_pairs(d.poset(), &w4), &SweepChain::default()).unwrap();
    for (i, cut, outcome) in &tails.per_pair {
        let free = Module::free(d.clone(), i, &format!("P{i}")).unwrap();
        let cert = outcome.certificate.as_ref().unwrap();
        assert!(replay_tail(&d, &free, cut, cert), "tail ({i}, {cut})");
        replays += 1;
    }

    // Star certificates on both planes.
    for a in [&b, &d] {
        let star = check_star(a, &window(a, &[0, 0], &[3, 3]), &chain).unwrap();
        for (i, outcome) in &star.per_index {
            let free = Module::free(a.clone(), i, &format!("P{i}")).unwrap();
            let cert = outcome.certificate.as_ref().unwrap();
            assert!(replay_tail(a, &free, i, cert), "{} star at {i}", a.name());
            replays += 1;
        }
    }

    // Strong-indexing certificates, including the free refutation.
    for a in [&b, &d, &qp] {
        let w = window(a, &[0, 0], &[2, 2]);
        let out = check_strongly_indexed(a, &w).unwrap();
        let cert = out.certificate.as_ref().unwrap();
        assert!(replay_strong_indexing(a, &w, cert).unwrap(), "{}", a.name());
        replays += 1;
    }

    // Sequence-condition tail certificates on the commuting samples.
    let samples = [
        Module::free(d.clone(), &lat(&[0, 0]), "P(0,0)").unwrap(),
        Module::simple(d.clone(), &lat(&[0, 0]), "S(0,0)").unwrap(),
        arrow_cokernel(&d),
    ];
    let report = check_sequence_conditions(&samples, &w4, &chain).unwrap();
    for (name, cut, outcome) in &report.ample {
        let m = samples.iter().find(|m| m.name() == name).unwrap();
        let cert = outcome.certificate.as_ref().unwrap();
        assert!(replay_tail(&d, m, cut, cert), "{name} above {cut}");
        replays += 1;
    }

    assert!(replays >= 300, "only {replays} certificates replayed");
    println!("[14/15] certificates replay independently ({replays} replays): pass");
}

#[test]
fn criterion_15_corpus_runs_are_byte_for_byte_deterministic() {
    let opts = RunOptions::default();
    let sweep = || -> String {
        corpus::ENTRIES
            .iter()
            .map(|e| to_json(&run_text(e.text, &opts).unwrap()))
            .collect()
    };
    let first = sweep();
    let second = sweep();
    assert_eq!(first, second);
    assert_eq!(first.matches("\"schema\": 1").count(), corpus::ENTRIES.len());
    // Every bundled session parses and names itself.
    for e in corpus::ENTRIES {
        assert_eq!(parse::parse(e.text).unwrap().name.as_deref(), Some(e.name));
    }
    println!("[15/15] corpus runs are byte-for-byte deterministic: pass");
}
