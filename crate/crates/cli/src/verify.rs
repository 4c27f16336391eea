//! The `verify` sweeps. Each prints what it checked and fails on the first
//! counterexample.

use std::collections::{BTreeSet, HashSet};

use anyhow::Result;
use kostant::automaton::build_dfa;
use kostant::game::{reachable_graph, root_counting_check, verify_bijection, GameSpec, DEFAULT_NODE_CAP};
use kostant::root_system::{ActiveSet, CartanType, DynkinDiagram, RootSystem};
use kostant::syt::{count_syt, fill_tableau, sequence_of_tableau, shape_of, type_a_game, GrassmannianPermutation};
use kostant::weyl::WeylGroup;

use crate::{VerificationFailed, VerifyCheck};

fn fail(msg: String) -> anyhow::Error {
    VerificationFailed(msg).into()
}

fn active_sets(n: usize) -> impl Iterator<Item = ActiveSet> {
    (1..1u64 << n).map(move |m| ActiveSet::from_mask(n, m))
}

pub fn run(check: &VerifyCheck) -> Result<()> {
    match *check {
        VerifyCheck::Bijection { max_rank } => bijection(max_rank),
        VerifyCheck::RootCounting { max_rank } => root_counting(max_rank),
        VerifyCheck::DfaLanguage { max_rank } => dfa_language(max_rank),
        VerifyCheck::SytBijection { max_n } => syt_bijection(max_n),
    }
}

fn bijection(max_rank: usize) -> Result<()> {
    let (mut games, mut configs) = (0, 0);
    for ty in CartanType::all_up_to(max_rank) {
        let d = DynkinDiagram::from_type(ty);
        let group = WeylGroup::generate_default(&d)?;
        for active in active_sets(ty.rank) {
            let g = GameSpec::modified(d.clone(), active.clone())?;
            let report = verify_bijection(&g, &group)?;
            if let Some(c) = report.counterexample {
                return Err(fail(format!("{ty} I={active}: {c}")));
            }
            games += 1;
            configs += report.nodes;
        }
        println!("{ty}: ok");
    }
    println!("bijection: {games} games, {configs} configurations checked");
    Ok(())
}

fn root_counting(max_rank: usize) -> Result<()> {
    let mut games = 0;
    for ty in CartanType::all_up_to(max_rank) {
        let d = DynkinDiagram::from_type(ty);
        for active in active_sets(ty.rank) {
            let r = root_counting_check(&d, &active)?;
            if !r.holds() {
                let detail = r.mismatch.unwrap_or_else(|| {
                    format!("total chips {} but height sum {}", r.total_chips, r.height_sum)
                });
                return Err(fail(format!("{ty} I={active}: {detail}")));
            }
            games += 1;
        }
        println!("{ty}: ok");
    }
    println!("root counting: {games} games checked");
    Ok(())
}

fn dfa_language(max_rank: usize) -> Result<()> {
    let (mut pairs, mut words) = (0, 0);
    for ty in CartanType::all_up_to(max_rank) {
        let d = DynkinDiagram::from_type(ty);
        let group = WeylGroup::generate_default(&d)?;
        let rs = RootSystem::new(&d)?;
        for active in active_sets(ty.rank) {
            let j = active.complement();
            let dfa = build_dfa(&d, &active)?;
            let got: BTreeSet<Vec<usize>> =
                dfa.enumerate_language(rs.roots_outside(&j).len()).words().cloned().collect();
            let want: BTreeSet<Vec<usize>> = group
                .minimal_coset_reps(&j)?
                .reps
                .iter()
                .flat_map(|&w| group.reduced_words(w))
                .map(|mut r| {
                    r.reverse();
                    r
                })
                .collect();
            if got != want {
                let label = |w: &Vec<usize>| w.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",");
                let extra = got.difference(&want).next().map(label);
                let missing = want.difference(&got).next().map(label);
                return Err(fail(format!(
                    "{ty} J={j}: accepted but not reduced {extra:?}, reduced but rejected {missing:?}"
                )));
            }
            pairs += 1;
            words += got.len();
        }
        println!("{ty}: ok");
    }
    println!("dfa language: {pairs} (diagram, J) pairs, {words} words checked");
    Ok(())
}

fn syt_bijection(max_n: usize) -> Result<()> {
    let (mut perms, mut sequences) = (0, 0);
    for n in 2..=max_n {
        for k in 1..n {
            let g = type_a_game(n, k - 1)?;
            let graph = reachable_graph(&g, DEFAULT_NODE_CAP)?;
            let mut seen = HashSet::new();
            for node in 0..graph.len() {
                let paths = graph.paths_to(node);
                let w = GrassmannianPermutation::from_moves(n, k - 1, &paths[0])?;
                let shape = shape_of(&w)?;
                let expected = count_syt(&shape);
                if expected != paths.len().into() {
                    return Err(fail(format!(
                        "n={n} k={k} w={:?}: {} sequences, {expected} tableaux of shape {shape}",
                        w.one_line(),
                        paths.len()
                    )));
                }
                let mut tableaux = HashSet::new();
                for p in &paths {
                    let t = fill_tableau(p, n, k - 1)?;
                    if sequence_of_tableau(&t, n, k - 1)? != *p || t.shape() != &shape {
                        return Err(fail(format!("n={n} k={k}: roundtrip fails for {p:?}")));
                    }
                    tableaux.insert(t);
                }
                if tableaux.len() != paths.len() {
                    return Err(fail(format!("n={n} k={k} w={:?}: repeated tableau", w.one_line())));
                }
                sequences += paths.len();
                seen.insert(w.one_line().to_vec());
            }
            let all: HashSet<Vec<usize>> =
                GrassmannianPermutation::all(n, k).into_iter().map(|w| w.one_line().to_vec()).collect();
            if seen != all {
                return Err(fail(format!("n={n} k={k}: configurations miss some Grassmannian permutations")));
            }
            perms += all.len();
        }
        println!("n={n}: ok");
    }
    println!("syt bijection: {perms} permutations, {sequences} sequences checked");
    Ok(())
}
