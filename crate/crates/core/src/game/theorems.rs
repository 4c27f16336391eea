//! Game-side checks against the Weyl group oracle.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::algebra::{algebraic_step_at, replay_cross_checked, AlgebraicState};
use super::{play, reachable_graph, Configuration, GameSpec, Strategy, DEFAULT_NODE_CAP};
use crate::error::{Error, Result};
use crate::root_system::{reflect, ActiveSet, Basis, DynkinDiagram, RootSystem, RootVector};
use crate::weyl::{ElementId, Side, WeylGroup};

/// `s_{i_m} ⋯ s_{i_1}` for the legal move sequence `(i_1, …, i_m)`.
///
/// Checks legality through both game models, that the word is reduced, and
/// in modified mode that the element lies in `W^J`.
pub fn word_of(group: &WeylGroup, g: &GameSpec, moves: &[usize]) -> Result<ElementId> {
    replay_cross_checked(g, moves)?;
    let mut w = group.identity();
    for &v in moves {
        w = group.mul_generator(w, v, Side::Left);
    }
    if group.length(w) != moves.len() {
        return Err(Error::Consistency(format!(
            "moves {:?} give an element of length {}",
            super::moves_to_labels(moves),
            group.length(w)
        )));
    }
    if let Some(active) = g.active() {
        if let Some(s) = active.complement().iter().find(|&s| group.is_right_descent(w, s)) {
            return Err(Error::Consistency(format!(
                "element of moves {:?} has right descent s{} in J",
                super::moves_to_labels(moves),
                s + 1
            )));
        }
    }
    Ok(w)
}

/// A reduced word built by always stripping the largest left descent.
fn greedy_word(group: &WeylGroup, w: ElementId) -> Vec<usize> {
    let mut word = Vec::with_capacity(group.length(w));
    let mut cur = w;
    while group.length(cur) > 0 {
        let s = (0..group.rank())
            .rev()
            .find(|&s| group.is_left_descent(cur, s))
            .expect("nontrivial elements have a left descent");
        word.push(s);
        cur = group.mul_generator(cur, s, Side::Left);
    }
    word
}

fn run_algebraic(group: &WeylGroup, active: &ActiveSet, word: &[usize]) -> Result<Configuration> {
    let mut st = AlgebraicState {
        root_part: vec![BigInt::from(0); group.rank()],
        source: active.indicator(),
    };
    // The word is read right to left: its last letter is the first move.
    for (step, &v) in word.iter().rev().enumerate() {
        st = algebraic_step_at(group.cartan(), &st, v, step)?;
    }
    st.configuration()
}

/// `c = w(β) − β` for `w ∈ W^J`, computed along two reduced words that must agree.
pub fn config_of_element(group: &WeylGroup, w: ElementId, active: &ActiveSet) -> Result<Configuration> {
    if let Some(s) = active.complement().iter().find(|&s| group.is_right_descent(w, s)) {
        return Err(Error::Domain(format!(
            "element {} is not a minimal coset representative: s{} is a right descent in J",
            WeylGroup::word_string(&group.canonical_word(w)),
            s + 1
        )));
    }
    let c = run_algebraic(group, active, &group.canonical_word(w))?;
    let other = run_algebraic(group, active, &greedy_word(group, w))?;
    if c != other {
        return Err(Error::Consistency(format!(
            "two reduced words of {} give configurations {c} and {other}",
            WeylGroup::word_string(&group.canonical_word(w))
        )));
    }
    Ok(c)
}

/// A witness that the configuration graph and `W^J` disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub config: Option<Configuration>,
    /// A reduced word of the offending element, 1-based.
    pub word: Option<Vec<usize>>,
    pub reason: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)?;
        if let Some(c) = &self.config {
            write!(f, "; configuration {c}")?;
        }
        if let Some(w) = &self.word {
            let labels: Vec<String> = w.iter().map(ToString::to_string).collect();
            write!(f, "; word ({})", labels.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub nodes: usize,
    pub coset_reps: usize,
    /// Move sequences from the start to the sink.
    pub sink_paths: u128,
    /// Nodes whose path sets were also enumerated word by word.
    pub nodes_enumerated: usize,
    pub counterexample: Option<Counterexample>,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Path sets are listed explicitly only while they stay this small.
const ENUMERATION_LIMIT: u128 = 64;

/// Checks the configuration graph of a modified game against `W^J`.
///
/// Each node gets the element obtained by multiplying along any path; the
/// check then asserts
/// * the node count equals `|W^J|`,
/// * every edge `c --v--> c'` satisfies `w(c') = s_v w(c)` with length +1,
/// * nodes and elements correspond one to one and `config_of_element` inverts the map,
/// * the in-edge labels of a node are exactly the left descents of its element.
///
/// The last point gives path sets equal to reversed reduced words by induction
/// along the graph. Path counts are compared with the oracle's reduced-word
/// counts, and small path sets are also compared word by word.
pub fn verify_bijection(g: &GameSpec, group: &WeylGroup) -> Result<BijectionReport> {
    let active = g
        .active()
        .ok_or_else(|| Error::InvalidSpec("the bijection concerns the modified game".into()))?;
    let graph = reachable_graph(g, DEFAULT_NODE_CAP)?;
    let cosets = group.minimal_coset_reps(&active.complement())?;
    let mut report = BijectionReport {
        nodes: graph.len(),
        coset_reps: cosets.len(),
        sink_paths: 0,
        nodes_enumerated: 0,
        counterexample: None,
    };
    let fail = |config: Option<&Configuration>, w: Option<ElementId>, reason: String| Counterexample {
        config: config.cloned(),
        word: w.map(|w| super::moves_to_labels(&group.canonical_word(w))),
        reason,
    };
    if graph.len() != cosets.len() {
        report.counterexample = Some(fail(
            None,
            None,
            format!("{} configurations but {} coset representatives", graph.len(), cosets.len()),
        ));
        return Ok(report);
    }

    let mut elem: Vec<Option<ElementId>> = vec![None; graph.len()];
    elem[0] = Some(group.identity());
    for e in &graph.edges {
        let from = elem[e.from].expect("edges leave already discovered nodes");
        let w = group.mul_generator(from, e.vertex, Side::Left);
        if group.length(w) != group.length(from) + 1 {
            report.counterexample = Some(fail(
                Some(&graph.nodes[e.to]),
                Some(w),
                format!("firing {} does not lengthen the element", e.vertex + 1),
            ));
            return Ok(report);
        }
        match elem[e.to] {
            None => elem[e.to] = Some(w),
            Some(prev) if prev == w => {}
            Some(prev) => {
                report.counterexample = Some(fail(
                    Some(&graph.nodes[e.to]),
                    Some(prev),
                    format!(
                        "two paths reach the configuration with different elements {} and {}",
                        WeylGroup::word_string(&group.canonical_word(prev)),
                        WeylGroup::word_string(&group.canonical_word(w))
                    ),
                ));
                return Ok(report);
            }
        }
    }
    let elem: Vec<ElementId> = elem.into_iter().map(|e| e.expect("graph is connected")).collect();

    let mut seen = HashSet::new();
    for (node, &w) in elem.iter().enumerate() {
        let config = &graph.nodes[node];
        if !cosets.contains(w) {
            report.counterexample = Some(fail(Some(config), Some(w), "element is not in W^J".into()));
            return Ok(report);
        }
        if !seen.insert(w) {
            report.counterexample = Some(fail(
                Some(config),
                Some(w),
                "two configurations share an element".into(),
            ));
            return Ok(report);
        }
        let back = config_of_element(group, w, active)?;
        if &back != config {
            report.counterexample = Some(fail(
                Some(config),
                Some(w),
                format!("config_of_element gives {back}"),
            ));
            return Ok(report);
        }
    }

    let ins = graph.in_edges_by_node();
    for (node, &w) in elem.iter().enumerate() {
        let mut labels: Vec<usize> = ins[node].iter().map(|e| e.vertex).collect();
        labels.sort_unstable();
        let descents: Vec<usize> = (0..group.rank())
            .filter(|&s| group.is_left_descent(w, s))
            .collect();
        if labels != descents {
            report.counterexample = Some(fail(
                Some(&graph.nodes[node]),
                Some(w),
                format!(
                    "last moves {:?} differ from left descents {:?}",
                    super::moves_to_labels(&labels),
                    super::moves_to_labels(&descents)
                ),
            ));
            return Ok(report);
        }
    }

    let counts = graph.path_counts();
    let oracle_counts = group.reduced_word_counts();
    for (node, &w) in elem.iter().enumerate() {
        if counts[node] != oracle_counts[w.0] {
            report.counterexample = Some(fail(
                Some(&graph.nodes[node]),
                Some(w),
                format!("{} paths but {} reduced words", counts[node], oracle_counts[w.0]),
            ));
            return Ok(report);
        }
    }
    let sinks = graph.sinks();
    if sinks.len() != 1 {
        report.counterexample = Some(fail(None, None, format!("{} sinks", sinks.len())));
        return Ok(report);
    }
    report.sink_paths = counts[sinks[0]];
    if elem[sinks[0]] != cosets.longest {
        report.counterexample = Some(fail(
            Some(&graph.nodes[sinks[0]]),
            Some(elem[sinks[0]]),
            "the sink is not the longest element of W^J".into(),
        ));
        return Ok(report);
    }

    // Explicit path sets, built forward in topological order.
    let mut paths: Vec<Option<Vec<Vec<usize>>>> = vec![None; graph.len()];
    for node in graph.topological_order() {
        if counts[node] > ENUMERATION_LIMIT {
            continue;
        }
        let mut set = Vec::new();
        if node == 0 {
            set.push(Vec::new());
        }
        for e in &ins[node] {
            let prefixes = paths[e.from].as_ref().expect("counts grow along edges");
            for p in prefixes {
                let mut q = p.clone();
                q.push(e.vertex);
                set.push(q);
            }
        }
        set.sort();
        let mut words: Vec<Vec<usize>> = group
            .reduced_words(elem[node])
            .into_iter()
            .map(|mut w| {
                w.reverse();
                w
            })
            .collect();
        words.sort();
        if set != words {
            report.counterexample = Some(fail(
                Some(&graph.nodes[node]),
                Some(elem[node]),
                "paths to the configuration are not the reversed reduced words".into(),
            ));
            return Ok(report);
        }
        report.nodes_enumerated += 1;
        paths[node] = Some(set);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootCountReport {
    /// Total chips in the final configuration.
    #[serde(serialize_with = "ser_bigint")]
    pub total_chips: BigInt,
    /// `Σ ht_I(γ)` over `(Φ^∨)⁺ ∖ (Φ_J^∨)⁺`.
    pub height_sum: i64,
    pub steps: usize,
    pub increments_match: bool,
    /// The coroots behind the per-step increments are exactly `(Φ^∨)⁺ ∖ (Φ_J^∨)⁺`.
    pub coroots_match: bool,
    pub mismatch: Option<String>,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(x) {
        Ok(v) => s.serialize_i64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

impl RootCountReport {
    pub fn equal(&self) -> bool {
        self.total_chips == BigInt::from(self.height_sum)
    }

    pub fn holds(&self) -> bool {
        self.equal() && self.increments_match && self.coroots_match
    }
}

pub fn root_counting_check(d: &DynkinDiagram, active: &ActiveSet) -> Result<RootCountReport> {
    root_counting_check_with(d, active, Strategy::Lowest)
}

/// Plays the modified game once and compares its chip total with the coroot
/// heights. Step `λ` firing `i_λ` must add `K_λ = ht_I(w_{λ−1}⁻¹(α_{i_λ}^∨))`,
/// where `w_{λ−1} = s_{i_{λ−1}} ⋯ s_{i_1}`.
pub fn root_counting_check_with(
    d: &DynkinDiagram,
    active: &ActiveSet,
    strategy: Strategy,
) -> Result<RootCountReport> {
    let roots = RootSystem::new(d)?;
    let g = GameSpec::modified(d.clone(), active.clone())?;
    let result = play(&g, strategy);
    if !result.is_terminated() {
        return Err(Error::Consistency(format!(
            "the modified game on {} did not terminate",
            d.label()
        )));
    }
    replay_cross_checked(&g, &result.moves)?;
    let outside = roots.coroots_outside(&active.complement());
    let height_sum = outside.iter().map(|r| r.i_height(active)).sum();

    let n = d.rank();
    let mut mismatch = None;
    let mut increments_match = true;
    let mut used: Vec<RootVector> = Vec::with_capacity(result.moves.len());
    for (step, &v) in result.moves.iter().enumerate() {
        let mut gamma = RootVector::simple(n, v, Basis::Coroot);
        for &u in result.moves[..step].iter().rev() {
            gamma = reflect(roots.cartan(), &gamma, u);
        }
        let k = gamma.i_height(active);
        if BigInt::from(k) != result.increments[step] && mismatch.is_none() {
            increments_match = false;
            mismatch = Some(format!(
                "step {}: increment {} but the coroot {gamma} has I-height {k}",
                step + 1,
                result.increments[step]
            ));
        }
        used.push(gamma);
    }
    used.sort();
    let mut expected: Vec<RootVector> = outside.into_iter().cloned().collect();
    expected.sort();
    let coroots_match = used == expected;
    if !coroots_match && mismatch.is_none() {
        mismatch = Some("the step coroots are not the positive coroots outside J".into());
    }
    Ok(RootCountReport {
        total_chips: result.last().total(),
        height_sum,
        steps: result.moves.len(),
        increments_match,
        coroots_match,
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::Family;

    fn cfg(x: &[i64]) -> Configuration {
        Configuration::from_i64s(x).unwrap()
    }

    fn setup(f: Family, n: usize, active: &[usize]) -> (WeylGroup, GameSpec, ActiveSet) {
        let d = DynkinDiagram::catalog(f, n).unwrap();
        let group = WeylGroup::generate_default(&d).unwrap();
        let a = ActiveSet::new(n, active.iter().copied()).unwrap();
        (group, GameSpec::modified(d, a.clone()).unwrap(), a)
    }

    #[test]
    fn word_of_reverses_the_moves() {
        let (group, g, _) = setup(Family::A, 2, &[0, 1]);
        let w = word_of(&group, &g, &[0, 1, 0]).unwrap();
        assert_eq!(w, group.longest_element());
        assert_eq!(word_of(&group, &g, &[]).unwrap(), group.identity());

        let (group, g, _) = setup(Family::A, 3, &[1]);
        let w = word_of(&group, &g, &[1, 2, 0, 1]).unwrap();
        assert_eq!(w, group.from_word(&[1, 0, 2, 1]).unwrap());
        assert!(matches!(
            word_of(&group, &g, &[1, 1]),
            Err(Error::IllegalMove { step: 1, vertex: 1, .. })
        ));
    }

    #[test]
    fn config_of_element_examples() {
        let (group, _, a) = setup(Family::A, 2, &[0, 1]);
        assert_eq!(config_of_element(&group, group.identity(), &a).unwrap(), cfg(&[0, 0]));
        assert_eq!(
            config_of_element(&group, group.longest_element(), &a).unwrap(),
            cfg(&[2, 2])
        );
        let (group, _, a) = setup(Family::A, 3, &[1]);
        let w = group.from_word(&[1, 0, 2, 1]).unwrap();
        assert_eq!(config_of_element(&group, w, &a).unwrap(), cfg(&[1, 2, 1]));
        let s1 = group.from_word(&[0]).unwrap();
        assert!(matches!(config_of_element(&group, s1, &a), Err(Error::Domain(_))));
    }

    #[test]
    fn bijection_small_cases() {
        let (group, g, _) = setup(Family::A, 2, &[0, 1]);
        let r = verify_bijection(&g, &group).unwrap();
        assert!(r.passed(), "{:?}", r.counterexample);
        assert_eq!((r.nodes, r.coset_reps, r.sink_paths), (6, 6, 2));

        let (group, g, _) = setup(Family::A, 4, &[0]);
        let r = verify_bijection(&g, &group).unwrap();
        assert!(r.passed());
        assert_eq!(r.nodes, 5);
    }

    #[test]
    fn bijection_f4_full_active_set() {
        let (group, g, _) = setup(Family::F, 4, &[0, 1, 2, 3]);
        let r = verify_bijection(&g, &group).unwrap();
        assert!(r.passed(), "{:?}", r.counterexample);
        assert_eq!(r.nodes, 1152);
    }

    #[test]
    fn root_counting_examples() {
        let a2 = DynkinDiagram::catalog(Family::A, 2).unwrap();
        let r = root_counting_check(&a2, &ActiveSet::all(2)).unwrap();
        assert!(r.holds());
        assert_eq!(r.total_chips, BigInt::from(4));
        let r = root_counting_check(&a2, &ActiveSet::new(2, [0]).unwrap()).unwrap();
        assert!(r.holds());
        assert_eq!(r.height_sum, 2);

        let d4 = DynkinDiagram::catalog(Family::D, 4).unwrap();
        let r = root_counting_check(&d4, &ActiveSet::all(4)).unwrap();
        assert!(r.holds());
        let heights: i64 = positive_coroot_heights(&d4);
        assert_eq!(r.height_sum, heights);
    }

    fn positive_coroot_heights(d: &DynkinDiagram) -> i64 {
        crate::root_system::positive_coroots(d)
            .unwrap()
            .iter()
            .map(RootVector::height)
            .sum()
    }

    #[test]
    fn root_counting_is_strategy_independent() {
        let b3 = DynkinDiagram::catalog(Family::B, 3).unwrap();
        let a = ActiveSet::new(3, [0, 2]).unwrap();
        for seed in 0..5 {
            assert!(root_counting_check_with(&b3, &a, Strategy::Random(seed)).unwrap().holds());
        }
    }
}
