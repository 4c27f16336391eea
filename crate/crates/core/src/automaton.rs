//! Deterministic automata for reduced-word languages of `W^J`.
//!
//! States are the reachable configurations of the modified game plus an
//! explicit trap. Reading letter `s_v` fires `v` when it is sad and falls into
//! the trap otherwise. The accepted words are the legal move sequences; read
//! backwards they are the reduced words of the elements of `W^J`.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{reachable_graph, ConfigGraph, Configuration, GameSpec, DEFAULT_NODE_CAP};
use crate::root_system::{ActiveSet, DynkinDiagram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWordDFA {
    letters: usize,
    labels: Vec<String>,
    configs: Vec<Option<Configuration>>,
    trap: usize,
    start: usize,
    delta: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

/// Accepted words grouped by length. Letters are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordLanguage {
    pub by_length: Vec<Vec<Vec<usize>>>,
}

impl WordLanguage {
    pub fn total(&self) -> usize {
        self.by_length.iter().map(Vec::len).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_length.iter().map(Vec::len).collect()
    }

    pub fn words(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.by_length.iter().flatten()
    }
}

pub fn build_dfa(d: &DynkinDiagram, active: &ActiveSet) -> Result<ReducedWordDFA> {
    let g = GameSpec::modified(d.clone(), active.clone())?;
    build_dfa_for(&g, DEFAULT_NODE_CAP)
}

/// The automaton of any game whose reachable graph fits in `cap` nodes.
pub fn build_dfa_for(g: &GameSpec, cap: usize) -> Result<ReducedWordDFA> {
    let graph = reachable_graph(g, cap)?;
    Ok(ReducedWordDFA::from_graph(&graph, g.rank()))
}

impl ReducedWordDFA {
    pub fn from_graph(graph: &ConfigGraph, letters: usize) -> Self {
        let trap = graph.len();
        let mut delta = vec![vec![trap; letters]; graph.len() + 1];
        for e in &graph.edges {
            delta[e.from][e.vertex] = e.to;
        }
        let mut labels: Vec<String> = graph.nodes.iter().map(ToString::to_string).collect();
        labels.push("trap".into());
        let mut configs: Vec<Option<Configuration>> = graph.nodes.iter().cloned().map(Some).collect();
        configs.push(None);
        let mut accepting = vec![true; graph.len() + 1];
        accepting[trap] = false;
        ReducedWordDFA {
            letters,
            labels,
            configs,
            trap,
            start: 0,
            delta,
            accepting,
        }
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn letters(&self) -> usize {
        self.letters
    }

    pub fn trap(&self) -> usize {
        self.trap
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn label(&self, state: usize) -> &str {
        &self.labels[state]
    }

    /// The configuration behind a state, when it stands for exactly one.
    pub fn config(&self, state: usize) -> Option<&Configuration> {
        self.configs[state].as_ref()
    }

    pub fn state_of(&self, c: &Configuration) -> Option<usize> {
        self.configs.iter().position(|x| x.as_ref() == Some(c))
    }

    pub fn next(&self, state: usize, letter: usize) -> usize {
        self.delta[state][letter]
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    /// The visited states, starting with the start state.
    pub fn run(&self, word: &[usize]) -> Result<Vec<usize>> {
        let mut path = Vec::with_capacity(word.len() + 1);
        let mut q = self.start;
        path.push(q);
        for &a in word {
            if a >= self.letters {
                return Err(Error::VertexOutOfRange { vertex: a, n: self.letters });
            }
            q = self.delta[q][a];
            path.push(q);
        }
        Ok(path)
    }

    pub fn accepts(&self, word: &[usize]) -> Result<bool> {
        let path = self.run(word)?;
        Ok(self.accepting[*path.last().expect("nonempty")])
    }

    /// All accepted words of length at most `max_len`, each length sorted.
    pub fn enumerate_language(&self, max_len: usize) -> WordLanguage {
        let mut by_length = Vec::new();
        if !self.accepting[self.start] {
            return WordLanguage { by_length: vec![Vec::new()] };
        }
        let mut level: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), self.start)];
        for len in 0..=max_len {
            by_length.push(level.iter().map(|(w, _)| w.clone()).collect());
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, q) in &level {
                for a in 0..self.letters {
                    let r = self.delta[*q][a];
                    if self.accepting[r] {
                        let mut u = w.clone();
                        u.push(a);
                        next.push((u, r));
                    }
                }
            }
            level = next;
        }
        WordLanguage { by_length }
    }

    /// Number of accepted words of each length up to `max_len`, without listing them.
    pub fn count_by_length(&self, max_len: usize) -> Vec<u128> {
        let mut ways = vec![0u128; self.num_states()];
        ways[self.start] = 1;
        let mut counts = Vec::with_capacity(max_len + 1);
        for len in 0..=max_len {
            counts.push(
                ways.iter()
                    .enumerate()
                    .filter(|&(q, _)| self.accepting[q])
                    .map(|(_, &k)| k)
                    .sum(),
            );
            if len == max_len {
                break;
            }
            let mut next = vec![0u128; self.num_states()];
            for (q, &k) in ways.iter().enumerate() {
                if k > 0 && self.accepting[q] {
                    for a in 0..self.letters {
                        next[self.delta[q][a]] += k;
                    }
                }
            }
            ways = next;
        }
        counts
    }

    /// Moore partition refinement. States unreachable from the start are dropped.
    pub fn minimize(&self) -> ReducedWordDFA {
        let reachable = self.reachable_states();
        let mut class: HashMap<usize, usize> = reachable
            .iter()
            .map(|&q| (q, usize::from(self.accepting[q])))
            .collect();
        let mut classes = 0;
        loop {
            let mut signatures: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut refined = HashMap::new();
            for &q in &reachable {
                let sig = (
                    class[&q],
                    self.delta[q].iter().map(|r| class[r]).collect::<Vec<_>>(),
                );
                let next_id = signatures.len();
                let id = *signatures.entry(sig).or_insert(next_id);
                refined.insert(q, id);
            }
            let count = signatures.len();
            class = refined;
            if count == classes {
                break;
            }
            classes = count;
        }

        // Renumber classes in breadth-first order from the start.
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut reps: Vec<usize> = Vec::new();
        let mut queue = vec![self.start];
        order.insert(class[&self.start], 0);
        reps.push(self.start);
        let mut head = 0;
        while head < queue.len() {
            let q = queue[head];
            head += 1;
            for a in 0..self.letters {
                let r = self.delta[q][a];
                if let Entry::Vacant(slot) = order.entry(class[&r]) {
                    slot.insert(reps.len());
                    reps.push(r);
                    queue.push(r);
                }
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
        for &q in &reachable {
            members[order[&class[&q]]].push(q);
        }
        let delta = reps
            .iter()
            .map(|&q| self.delta[q].iter().map(|r| order[&class[r]]).collect())
            .collect();
        let accepting: Vec<bool> = reps.iter().map(|&q| self.accepting[q]).collect();
        let labels = members
            .iter()
            .map(|m| {
                if m.len() == 1 {
                    self.labels[m[0]].clone()
                } else {
                    let parts: Vec<&str> = m.iter().map(|&q| self.labels[q].as_str()).collect();
                    format!("{{{}}}", parts.join(" "))
                }
            })
            .collect();
        let configs = members
            .iter()
            .map(|m| if m.len() == 1 { self.configs[m[0]].clone() } else { None })
            .collect();
        let trap = accepting
            .iter()
            .position(|&acc| !acc)
            .unwrap_or(reps.len());
        let mut dfa = ReducedWordDFA {
            letters: self.letters,
            labels,
            configs,
            trap,
            start: 0,
            delta,
            accepting,
        };
        if trap == reps.len() {
            // Every word is accepted; keep an explicit, unreachable trap.
            dfa.labels.push("trap".into());
            dfa.configs.push(None);
            dfa.accepting.push(false);
            dfa.delta.push(vec![trap; self.letters]);
        }
        dfa
    }

    fn reachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = vec![self.start];
        seen[self.start] = true;
        let mut head = 0;
        while head < queue.len() {
            let q = queue[head];
            head += 1;
            for &r in &self.delta[q] {
                if !seen[r] {
                    seen[r] = true;
                    queue.push(r);
                }
            }
        }
        queue.sort_unstable();
        queue
    }

    /// Accepting states are double circles; edges into the trap are dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let extra = if q == self.start { ", penwidth=2" } else { "" };
            let _ = writeln!(out, "  q{q} [label=\"{}\", shape={shape}{extra}];", self.labels[q]);
        }
        for q in 0..self.num_states() {
            let mut grouped: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for (a, &r) in self.delta[q].iter().enumerate() {
                grouped.entry(r).or_default().push(format!("s{}", a + 1));
            }
            for (r, letters) in grouped {
                let style = if r == self.trap { ", style=dashed" } else { "" };
                let _ = writeln!(out, "  q{q} -> q{r} [label=\"{}\"{style}];", letters.join(","));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> DfaJson {
        DfaJson {
            states: self.labels.clone(),
            trap: self.trap,
            start: self.start,
            delta: self.delta.clone(),
            accepting: (0..self.num_states()).filter(|&q| self.accepting[q]).collect(),
        }
    }

    pub fn from_json(json: &DfaJson) -> Result<Self> {
        let n = json.states.len();
        let bad = |msg: String| Err(Error::Parse(format!("dfa: {msg}")));
        if json.delta.len() != n {
            return bad(format!("{} states but {} delta rows", n, json.delta.len()));
        }
        if json.trap >= n || json.start >= n {
            return bad("trap or start index out of range".into());
        }
        let letters = json.delta[0].len();
        if json.delta.iter().any(|row| row.len() != letters || row.iter().any(|&r| r >= n)) {
            return bad("delta rows must be total and point at existing states".into());
        }
        if json.delta[json.trap].iter().any(|&r| r != json.trap) {
            return bad("the trap must be absorbing".into());
        }
        let mut accepting = vec![false; n];
        for &q in &json.accepting {
            if q >= n {
                return bad(format!("accepting state {q} out of range"));
            }
            accepting[q] = true;
        }
        if accepting[json.trap] {
            return bad("the trap cannot accept".into());
        }
        let configs = json.states.iter().map(|l| parse_config_label(l)).collect();
        Ok(ReducedWordDFA {
            letters,
            labels: json.states.clone(),
            configs,
            trap: json.trap,
            start: json.start,
            delta: json.delta.clone(),
            accepting,
        })
    }
}

fn parse_config_label(label: &str) -> Option<Configuration> {
    let inner = label.strip_prefix('(')?.strip_suffix(')')?;
    let chips = inner
        .split(',')
        .map(|x| x.trim().parse().ok())
        .collect::<Option<Vec<_>>>()?;
    Configuration::from_chips(chips).ok()
}

/// The transition table as exchanged in JSON. `delta[q][a]` is the target
/// of state `q` on letter `s_{a+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaJson {
    pub states: Vec<String>,
    pub trap: usize,
    pub start: usize,
    pub delta: Vec<Vec<usize>>,
    pub accepting: Vec<usize>,
}
