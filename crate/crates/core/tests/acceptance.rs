//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::time::{Duration, Instant};

use kostant::automaton::build_dfa;
use kostant::game::{
    play, reachable_graph, reachable_graph_from, replay_cross_checked, root_counting_check,
    root_counting_check_with, verify_bijection, Configuration, GameSpec, PlayOutcome, Strategy,
    DEFAULT_NODE_CAP,
};
use kostant::mukai::sweep;
use kostant::root_system::{ActiveSet, CartanType, DynkinDiagram, EdgeRecord, Family, RootSystem};
use kostant::syt::{count_syt, fill_tableau, sequence_of_tableau, shape_of, type_a_game, GrassmannianPermutation, StandardTableau};
use kostant::weyl::WeylGroup;
use num_bigint::BigUint;

type Check = std::result::Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(ctx: impl std::fmt::Display) -> impl FnOnce(E) -> String {
    move |e| format!("{ctx}: {e}")
}

fn cfg(x: &[i64]) -> Configuration {
    Configuration::from_i64s(x).unwrap()
}

fn diagram(ty: CartanType) -> DynkinDiagram {
    DynkinDiagram::from_type(ty)
}

/// Every nonempty active set, as bitmasks.
fn active_sets(n: usize) -> impl Iterator<Item = ActiveSet> {
    (1..1u64 << n).map(move |m| ActiveSet::from_mask(n, m))
}

fn a2_worked_example() -> Check {
    let d = DynkinDiagram::catalog(Family::A, 2).unwrap();
    let g = GameSpec::modified(d, ActiveSet::all(2)).unwrap();
    let r = play(&g, Strategy::Lowest);
    let want = vec![cfg(&[0, 0]), cfg(&[1, 0]), cfg(&[1, 2]), cfg(&[2, 2])];
    ensure(r.configs == want, || format!("configs {:?}", r.configs))?;
    // The word of s_{i_3} s_{i_2} s_{i_1} is the moves read backwards.
    let word: Vec<usize> = r.moves.iter().rev().map(|m| m + 1).collect();
    ensure(word == [1, 2, 1], || format!("word {word:?}"))?;
    ensure(r.outcome == PlayOutcome::Terminated, || "did not terminate".into())?;
    Ok("configs (1,0),(1,2),(2,2); word s1s2s1".into())
}

fn reachable_counts() -> Check {
    let mut games = 0;
    for ty in CartanType::all_up_to(4) {
        let d = diagram(ty);
        let group = WeylGroup::generate_default(&d).map_err(err(ty))?;
        for active in active_sets(ty.rank) {
            let j = active.complement();
            let wj = group.ids().filter(|&w| group.in_parabolic(w, &j)).count();
            let want = group.order() / wj;
            let g = GameSpec::modified(d.clone(), active.clone()).unwrap();
            let graph = reachable_graph(&g, DEFAULT_NODE_CAP).map_err(err(ty))?;
            ensure(graph.len() == want, || {
                format!("{ty} I={active}: {} nodes, |W^J| = {want}", graph.len())
            })?;
            games += 1;
        }
    }
    Ok(format!("{games} games"))
}

fn bijection() -> Check {
    let mut games = 0;
    let mut enumerated = 0;
    for ty in CartanType::all_up_to(4) {
        let d = diagram(ty);
        let group = WeylGroup::generate_default(&d).map_err(err(ty))?;
        for active in active_sets(ty.rank) {
            let g = GameSpec::modified(d.clone(), active.clone()).unwrap();
            let report = verify_bijection(&g, &group).map_err(err(format!("{ty} I={active}")))?;
            if let Some(c) = &report.counterexample {
                return Err(format!("{ty} I={active}: {c}"));
            }
            ensure(report.passed(), || format!("{ty} I={active}: failed"))?;
            enumerated += report.nodes_enumerated;
            games += 1;
        }
    }
    Ok(format!("{games} games, {enumerated} path sets enumerated"))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn type_a_binomials() -> Check {
    for n in 2..=8usize {
        for k in 1..n {
            let g = type_a_game(n, k - 1).unwrap();
            let nodes = reachable_graph(&g, DEFAULT_NODE_CAP).map_err(err(n))?.len();
            let want = binomial(n as u64, k as u64) as usize;
            ensure(nodes == want, || format!("n={n} k={k}: {nodes} != C(n,k) = {want}"))?;
        }
    }
    Ok("2 <= n <= 8, all k".into())
}

fn root_counting() -> Check {
    let mut games = 0;
    for ty in CartanType::all_up_to(5) {
        let d = diagram(ty);
        for active in active_sets(ty.rank) {
            let r = root_counting_check(&d, &active).map_err(err(format!("{ty} I={active}")))?;
            ensure(r.holds(), || format!("{ty} I={active}: {r:?}"))?;
            games += 1;
        }
    }
    Ok(format!("{games} games"))
}

fn affine_d4() -> DynkinDiagram {
    let edges: Vec<_> = (2..=5).map(|v| EdgeRecord { from: 1, to: v, arrows: 1 }).collect();
    DynkinDiagram::custom(5, &edges).unwrap()
}

fn classical_facts() -> Check {
    // D4: the figure draws the union of the games from e1..e4.
    let d4 = DynkinDiagram::catalog(Family::D, 4).unwrap();
    let starts: Vec<_> = (0..4).map(|i| Configuration::basis(4, i)).collect();
    let g = GameSpec::classical(d4.clone(), starts[0].clone()).unwrap();
    let all = reachable_graph_from(&g, &starts, DEFAULT_NODE_CAP).map_err(err("D4"))?;
    let roots: HashSet<Configuration> = RootSystem::new(&d4)
        .unwrap()
        .positive_roots()
        .iter()
        .map(|r| cfg(&r.coeffs))
        .collect();
    let nodes: HashSet<Configuration> = all.nodes.iter().cloned().collect();
    ensure(all.len() == 12 && nodes == roots, || format!("D4 figure: {} nodes", all.len()))?;
    ensure(all.edges.len() == 16, || format!("D4 figure: {} edges", all.edges.len()))?;
    let sinks = all.sinks();
    ensure(sinks.len() == 1 && all.nodes[sinks[0]] == cfg(&[1, 2, 1, 1]), || {
        format!("D4 sinks {sinks:?}")
    })?;
    let from_e1 = reachable_graph(&g, DEFAULT_NODE_CAP).map_err(err("D4"))?;
    ensure(
        from_e1.sinks().len() == 1 && from_e1.nodes[from_e1.sinks()[0]] == cfg(&[1, 2, 1, 1]),
        || "D4 from e1: sink".into(),
    )?;

    // F4: every strategy ends at a sink of the reachable graph, so the sinks
    // over all starts e1..e4 are the terminals over all strategies.
    let f4 = DynkinDiagram::catalog(Family::F, 4).unwrap();
    let mut terminals = BTreeSet::new();
    for i in 0..4 {
        let g = GameSpec::classical(f4.clone(), Configuration::basis(4, i)).unwrap();
        let graph = reachable_graph(&g, DEFAULT_NODE_CAP).map_err(err("F4"))?;
        for s in graph.sinks() {
            terminals.insert(graph.nodes[s].clone());
        }
        for &strategy in &[Strategy::Lowest, Strategy::Highest, Strategy::Random(i as u64)] {
            let r = play(&g, strategy);
            ensure(terminals.contains(r.last()), || format!("F4 play ended at {}", r.last()))?;
        }
    }
    let want: BTreeSet<_> = [cfg(&[2, 3, 4, 2]), cfg(&[1, 2, 3, 2])].into_iter().collect();
    ensure(terminals == want, || format!("F4 terminals {terminals:?}"))?;

    // Affine D4 from all ones.
    let g = GameSpec::classical(affine_d4(), cfg(&[1; 5])).unwrap().with_step_cap(1000);
    let r = play(&g, Strategy::Lowest);
    ensure(r.outcome == PlayOutcome::Diverged, || "affine D4 terminated".into())?;
    ensure(r.configs[1] == cfg(&[3, 1, 1, 1, 1]), || format!("affine D4 step 1: {}", r.configs[1]))?;

    Ok(format!(
        "D4 figure 12 nodes/16 edges, sink (1,2,1,1) (from e1 alone: {} nodes); F4 terminals {{(2,3,4,2),(1,2,3,2)}}; affine D4 diverges",
        from_e1.len()
    ))
}

fn dfa_language() -> Check {
    let mut checked = 0;
    for ty in CartanType::all_up_to(3) {
        let d = diagram(ty);
        let group = WeylGroup::generate_default(&d).map_err(err(ty))?;
        let rs = RootSystem::new(&d).unwrap();
        for active in active_sets(ty.rank) {
            let j = active.complement();
            let max_len = rs.roots_outside(&j).len();
            let dfa = build_dfa(&d, &active).map_err(err(ty))?;
            let got: BTreeSet<Vec<usize>> = dfa.enumerate_language(max_len).words().cloned().collect();
            let reps = group.minimal_coset_reps(&j).map_err(err(ty))?;
            let want: BTreeSet<Vec<usize>> = reps
                .reps
                .iter()
                .flat_map(|&w| group.reduced_words(w))
                .map(|mut r| {
                    r.reverse();
                    r
                })
                .collect();
            ensure(got == want, || {
                format!("{ty} I={active}: {} words, oracle {}", got.len(), want.len())
            })?;
            checked += 1;
        }
    }

    let d = DynkinDiagram::catalog(Family::A, 2).unwrap();
    let dfa = build_dfa(&d, &ActiveSet::from_complement(2, [0]).unwrap()).map_err(err("A2"))?;
    let lang: BTreeSet<Vec<usize>> = dfa.enumerate_language(10).words().cloned().collect();
    let want: BTreeSet<Vec<usize>> = [vec![], vec![1], vec![1, 0]].into_iter().collect();
    ensure(lang == want, || format!("A2 J={{s1}} language {lang:?}"))?;
    let state = |c: &[i64]| dfa.state_of(&cfg(c)).unwrap();
    let (e, s2, s1s2, trap) = (state(&[0, 0]), state(&[0, 1]), state(&[1, 1]), dfa.trap());
    let table = [
        (e, [trap, s2]),
        (s2, [s1s2, trap]),
        (s1s2, [trap, trap]),
        (trap, [trap, trap]),
    ];
    ensure(dfa.num_states() == 4 && dfa.start() == e, || "A2 DFA states".into())?;
    for (q, row) in table {
        ensure([dfa.next(q, 0), dfa.next(q, 1)] == row, || format!("A2 DFA row {q}"))?;
    }
    Ok(format!("{checked} (diagram, J) pairs; A2 J={{s1}} table"))
}

fn syt_bijection() -> Check {
    let mut perms = 0;
    for n in 2..=6usize {
        for k in 1..n {
            let g = type_a_game(n, k - 1).unwrap();
            let graph = reachable_graph(&g, DEFAULT_NODE_CAP).map_err(err(n))?;
            let mut seen = HashSet::new();
            for node in 0..graph.len() {
                let paths = graph.paths_to(node);
                let w = GrassmannianPermutation::from_moves(n, k - 1, &paths[0]).map_err(err(n))?;
                let shape = shape_of(&w).map_err(err(n))?;
                ensure(BigUint::from(paths.len()) == count_syt(&shape), || {
                    format!("n={n} k={k} w={:?}: {} sequences, shape {shape}", w.one_line(), paths.len())
                })?;
                let mut tableaux = HashSet::new();
                for p in &paths {
                    let t = fill_tableau(p, n, k - 1).map_err(err(n))?;
                    ensure(t.shape() == &shape, || format!("n={n} k={k}: tableau shape"))?;
                    let back = sequence_of_tableau(&t, n, k - 1).map_err(err(n))?;
                    ensure(&back == p, || format!("n={n} k={k}: roundtrip of {p:?}"))?;
                    tableaux.insert(t);
                }
                ensure(tableaux.len() == paths.len(), || format!("n={n} k={k}: repeated tableau"))?;
                seen.insert(w.one_line().to_vec());
            }
            let all: HashSet<Vec<usize>> = GrassmannianPermutation::all(n, k)
                .into_iter()
                .map(|w| w.one_line().to_vec())
                .collect();
            ensure(seen == all, || format!("n={n} k={k}: Grassmannian permutations differ"))?;
            perms += all.len();
        }
    }

    let examples = [
        (vec![1, 0, 2, 1], vec![vec![1, 3], vec![2, 4]]),
        (vec![1, 2, 0, 1], vec![vec![1, 2], vec![3, 4]]),
    ];
    for (moves, rows) in examples {
        let t = fill_tableau(&moves, 4, 1).map_err(err("A3"))?;
        ensure(t == StandardTableau::new(rows.clone()).unwrap(), || {
            format!("A3 k=2 {moves:?}: {:?}", t.rows())
        })?;
    }
    Ok(format!("{perms} Grassmannian permutations; A3 k=2 examples"))
}

fn mukai() -> Check {
    let report = sweep(6).map_err(err("sweep"))?;
    let violations: Vec<_> = report.violations().collect();
    ensure(violations.is_empty(), || format!("violations: {violations:?}"))?;
    ensure(report.lemma_failures.is_empty(), || format!("lemma fails on {:?}", report.lemma_failures))?;
    for m in 1..=6usize {
        let name = format!("A{m}");
        let full = (1u64 << m) - 1;
        for end in [0, m - 1] {
            let mask = full & !(1 << end);
            let row = report
                .rows
                .iter()
                .find(|r| r.diagram == name && r.delta_p_bitmask == mask)
                .ok_or_else(|| format!("{name} mask {mask} missing"))?;
            ensure(row.equality && row.dimension == m, || format!("{name} end vertex {}: {row:?}", end + 1))?;
        }
    }
    Ok(format!(
        "{} rows, 0 violations, {} equality cases",
        report.rows.len(),
        report.equality_cases().count()
    ))
}

fn cross_model() -> Check {
    let mut steps = 0;
    let mut check = |g: &GameSpec, moves: &[usize]| -> std::result::Result<(), String> {
        replay_cross_checked(g, moves).map_err(err(g.diagram().label()))?;
        steps += moves.len();
        Ok(())
    };
    for ty in CartanType::all_up_to(5) {
        let d = diagram(ty);
        for active in active_sets(ty.rank) {
            let g = GameSpec::modified(d.clone(), active.clone()).unwrap();
            for strategy in [Strategy::Lowest, Strategy::Highest, Strategy::Random(active.mask())] {
                check(&g, &play(&g, strategy).moves)?;
            }
            if ty.rank <= 4 {
                // Every edge of the reachable graph, via one path to its source.
                let graph = reachable_graph(&g, DEFAULT_NODE_CAP).map_err(err(ty))?;
                let mut prefix: Vec<Option<Vec<usize>>> = vec![None; graph.len()];
                prefix[0] = Some(Vec::new());
                for node in graph.topological_order() {
                    let p = prefix[node].clone().ok_or_else(|| format!("{ty}: unreached node"))?;
                    for e in graph.out_edges(node) {
                        let mut q = p.clone();
                        q.push(e.vertex);
                        check(&g, &q)?;
                        prefix[e.to].get_or_insert(q);
                    }
                }
            }
        }
        for active in active_sets(ty.rank).take(4) {
            root_counting_check_with(&d, &active, Strategy::Random(7)).map_err(err(ty))?;
        }
    }
    for (d, start) in [
        (DynkinDiagram::catalog(Family::D, 4).unwrap(), cfg(&[1, 0, 0, 0])),
        (DynkinDiagram::catalog(Family::F, 4).unwrap(), cfg(&[0, 0, 0, 1])),
        (affine_d4(), cfg(&[1; 5])),
    ] {
        let g = GameSpec::classical(d, start).unwrap().with_step_cap(1000);
        check(&g, &play(&g, Strategy::Lowest).moves)?;
    }
    Ok(format!("{steps} steps agree"))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "A2 worked example", limit: Some(Duration::from_millis(1)), run: a2_worked_example },
        Criterion { id: 2, name: "reachable count = |W^J|, rank <= 4", limit: Some(Duration::from_secs(60)), run: reachable_counts },
        Criterion { id: 3, name: "configuration/element bijection, rank <= 4", limit: Some(Duration::from_secs(300)), run: bijection },
        Criterion { id: 4, name: "type A binomial counts", limit: Some(Duration::from_secs(10)), run: type_a_binomials },
        Criterion { id: 5, name: "root counting, rank <= 5", limit: Some(Duration::from_secs(60)), run: root_counting },
        Criterion { id: 6, name: "classical game facts", limit: None, run: classical_facts },
        Criterion { id: 7, name: "DFA language, rank <= 3", limit: Some(Duration::from_secs(30)), run: dfa_language },
        Criterion { id: 8, name: "SYT bijection, n <= 6", limit: Some(Duration::from_secs(120)), run: syt_bijection },
        Criterion { id: 9, name: "Mukai sweep, rank <= 6", limit: Some(Duration::from_secs(120)), run: mukai },
        Criterion { id: 10, name: "cross-model agreement", limit: None, run: cross_model },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let verdict = match (&result, c.limit) {
            (Err(e), _) => Err(e.clone()),
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:?}, limit {limit:?}"))
            }
            (Ok(detail), _) => Ok(detail.clone()),
        };
        match verdict {
            Ok(detail) => println!("[{:>2}] PASS {} ({elapsed:.2?}): {detail}", c.id, c.name),
            Err(e) => {
                failed += 1;
                println!("[{:>2}] FAIL {} ({elapsed:.2?}): {e}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
