//! Brute-force Weyl group engine.
//!
//! Elements are stored by their action on the simple roots: row `i` of the
//! action matrix holds `w(α_i)` in simple-root coordinates. Products compose
//! as actions, `(v·w)(x) = v(w(x))`, and a written word `s_a s_b ⋯` denotes
//! the product in that order.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_system::{ActiveSet, CartanMatrix, DynkinDiagram, RootSystem, RootVector};

pub const DEFAULT_ORACLE_CAP: usize = 200_000;

/// Index of an element inside its [`WeylGroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    n: usize,
    action: Vec<i64>,
    length: usize,
}

impl WeylElement {
    pub fn action(&self) -> Vec<Vec<i64>> {
        self.action.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `w(λ)` for `λ` in simple-root coordinates.
    pub fn apply(&self, coeffs: &[i64]) -> Vec<i64> {
        apply_action(self.n, &self.action, coeffs)
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            action: Vec<Vec<i64>>,
            length: usize,
        }
        Repr {
            action: self.action(),
            length: self.length,
        }
        .serialize(s)
    }
}

fn apply_action(n: usize, action: &[i64], coeffs: &[i64]) -> Vec<i64> {
    let mut out = vec![0; n];
    for (i, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            for (o, &m) in out.iter_mut().zip(&action[i * n..(i + 1) * n]) {
                *o += c * m;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// The full group, generated by breadth-first closure from the identity.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    n: usize,
    roots: RootSystem,
    actions: Vec<Vec<i64>>,
    lengths: Vec<usize>,
    index: HashMap<Vec<i64>, ElementId>,
    left: Vec<ElementId>,
    right: Vec<ElementId>,
    parent: Vec<Option<(usize, ElementId)>>,
}

impl WeylGroup {
    pub fn generate(d: &DynkinDiagram, cap: usize) -> Result<Self> {
        let roots = RootSystem::new(d)?;
        let cartan = roots.cartan().clone();
        let n = d.rank();
        let mut identity = vec![0; n * n];
        for i in 0..n {
            identity[i * n + i] = 1;
        }
        let mut actions = vec![identity.clone()];
        let mut lengths = vec![0];
        let mut parent = vec![None];
        let mut index = HashMap::new();
        index.insert(identity, ElementId(0));
        let mut left: Vec<ElementId> = Vec::new();
        let mut head = 0;
        // Breadth-first over left multiplication: depth equals length.
        while head < actions.len() {
            let w = actions[head].clone();
            for s in 0..n {
                let sw = left_mul(n, &cartan, s, &w);
                let id = match index.get(&sw) {
                    Some(&id) => id,
                    None => {
                        if actions.len() >= cap {
                            return Err(Error::OracleTooLarge { cap });
                        }
                        let id = ElementId(actions.len());
                        index.insert(sw.clone(), id);
                        actions.push(sw);
                        lengths.push(lengths[head] + 1);
                        parent.push(Some((s, ElementId(head))));
                        id
                    }
                };
                left.push(id);
            }
            head += 1;
        }
        let mut right = Vec::with_capacity(actions.len() * n);
        for w in &actions {
            for s in 0..n {
                right.push(index[&right_mul(n, &cartan, s, w)]);
            }
        }
        Ok(WeylGroup {
            n,
            roots,
            actions,
            lengths,
            index,
            left,
            right,
            parent,
        })
    }

    pub fn generate_default(d: &DynkinDiagram) -> Result<Self> {
        Self::generate(d, DEFAULT_ORACLE_CAP)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.actions.len()
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn cartan(&self) -> &CartanMatrix {
        self.roots.cartan()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> {
        (0..self.actions.len()).map(ElementId)
    }

    pub fn identity(&self) -> ElementId {
        ElementId(0)
    }

    pub fn length(&self, w: ElementId) -> usize {
        self.lengths[w.0]
    }

    pub fn element(&self, w: ElementId) -> WeylElement {
        WeylElement {
            n: self.n,
            action: self.actions[w.0].clone(),
            length: self.lengths[w.0],
        }
    }

    pub fn id_of(&self, w: &WeylElement) -> Option<ElementId> {
        self.index.get(&w.action).copied()
    }

    /// `s·w` or `w·s`.
    pub fn mul_generator(&self, w: ElementId, s: usize, side: Side) -> ElementId {
        match side {
            Side::Left => self.left[w.0 * self.n + s],
            Side::Right => self.right[w.0 * self.n + s],
        }
    }

    /// The product `s_{word[0]} s_{word[1]} ⋯` as written.
    pub fn from_word(&self, word: &[usize]) -> Result<ElementId> {
        let mut w = self.identity();
        for &s in word {
            if s >= self.n {
                return Err(Error::VertexOutOfRange { vertex: s, n: self.n });
            }
            w = self.mul_generator(w, s, Side::Right);
        }
        Ok(w)
    }

    pub fn multiply(&self, a: ElementId, b: ElementId) -> ElementId {
        let mut w = b;
        for &s in self.canonical_word(a).iter().rev() {
            w = self.mul_generator(w, s, Side::Left);
        }
        w
    }

    pub fn inverse(&self, w: ElementId) -> ElementId {
        let mut word = self.canonical_word(w);
        word.reverse();
        self.from_word(&word).expect("canonical words use valid generators")
    }

    /// The reduced word recorded by the breadth-first generation.
    pub fn canonical_word(&self, w: ElementId) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.lengths[w.0]);
        let mut cur = w;
        while let Some((s, p)) = self.parent[cur.0] {
            word.push(s);
            cur = p;
        }
        word
    }

    pub fn apply(&self, w: ElementId, coeffs: &[i64]) -> Vec<i64> {
        apply_action(self.n, &self.actions[w.0], coeffs)
    }

    /// `I(w) = Φ⁺ ∩ w⁻¹(−Φ⁺)`.
    pub fn inversion_set(&self, w: ElementId) -> Vec<RootVector> {
        self.roots
            .positive_roots()
            .iter()
            .filter(|r| self.apply(w, &r.coeffs).iter().all(|&c| c <= 0))
            .cloned()
            .collect()
    }

    pub fn is_left_descent(&self, w: ElementId, s: usize) -> bool {
        self.length(self.mul_generator(w, s, Side::Left)) < self.length(w)
    }

    pub fn is_right_descent(&self, w: ElementId, s: usize) -> bool {
        self.length(self.mul_generator(w, s, Side::Right)) < self.length(w)
    }

    pub fn longest_element(&self) -> ElementId {
        ElementId(self.actions.len() - 1)
    }

    /// Membership in the parabolic subgroup `W_J`: some reduced word uses only `J`.
    pub fn in_parabolic(&self, w: ElementId, j: &ActiveSet) -> bool {
        // Every reduced word of an element of W_J uses only letters of J, so
        // the canonical one decides membership.
        self.canonical_word(w).iter().all(|&s| j.contains(s))
    }

    pub fn minimal_coset_reps(&self, j: &ActiveSet) -> Result<CosetSystem> {
        let by_descent: Vec<ElementId> = self
            .ids()
            .filter(|&w| j.iter().all(|s| !self.is_right_descent(w, s)))
            .collect();
        let support = j.indicator();
        let by_inversions: Vec<ElementId> = self
            .ids()
            .filter(|&w| self.inversion_set(w).iter().all(|r| !r.supported_on(&support)))
            .collect();
        if by_descent != by_inversions {
            return Err(Error::Consistency(format!(
                "descent and inversion-set characterizations of W^J disagree ({} vs {} elements)",
                by_descent.len(),
                by_inversions.len()
            )));
        }
        let max_len = by_descent.iter().map(|&w| self.length(w)).max().unwrap_or(0);
        let longest: Vec<ElementId> = by_descent
            .iter()
            .copied()
            .filter(|&w| self.length(w) == max_len)
            .collect();
        if longest.len() != 1 {
            return Err(Error::Consistency(format!(
                "W^J has {} elements of maximal length",
                longest.len()
            )));
        }
        Ok(CosetSystem {
            j: j.clone(),
            reps: by_descent,
            longest: longest[0],
        })
    }

    /// `w = w^J · w_J` with `w^J ∈ W^J` and `w_J ∈ W_J`.
    pub fn parabolic_decompose(&self, w: ElementId, j: &ActiveSet) -> (ElementId, ElementId) {
        let mut head = w;
        let mut tail = self.identity();
        'strip: loop {
            for s in j.iter() {
                if self.is_right_descent(head, s) {
                    head = self.mul_generator(head, s, Side::Right);
                    tail = self.mul_generator(tail, s, Side::Left);
                    continue 'strip;
                }
            }
            break;
        }
        (head, tail)
    }

    /// All reduced words of `w`, sorted lexicographically.
    pub fn reduced_words(&self, w: ElementId) -> Vec<Vec<usize>> {
        let mut memo: HashMap<ElementId, Vec<Vec<usize>>> = HashMap::new();
        let mut words = self.reduced_words_memo(w, &mut memo);
        words.sort();
        words
    }

    fn reduced_words_memo(
        &self,
        w: ElementId,
        memo: &mut HashMap<ElementId, Vec<Vec<usize>>>,
    ) -> Vec<Vec<usize>> {
        if let Some(words) = memo.get(&w) {
            return words.clone();
        }
        let words = if self.length(w) == 0 {
            vec![Vec::new()]
        } else {
            let mut out = Vec::new();
            for s in 0..self.n {
                if self.is_left_descent(w, s) {
                    let rest = self.mul_generator(w, s, Side::Left);
                    for tail in self.reduced_words_memo(rest, memo) {
                        let mut word = Vec::with_capacity(tail.len() + 1);
                        word.push(s);
                        word.extend(tail);
                        out.push(word);
                    }
                }
            }
            out
        };
        memo.insert(w, words.clone());
        words
    }

    /// Number of reduced words of every element, by dynamic programming over length.
    pub fn reduced_word_counts(&self) -> Vec<u128> {
        let mut counts = vec![0u128; self.order()];
        counts[0] = 1;
        // Elements are stored in breadth-first (length) order.
        for w in 1..self.order() {
            counts[w] = (0..self.n)
                .filter(|&s| self.is_left_descent(ElementId(w), s))
                .map(|s| counts[self.mul_generator(ElementId(w), s, Side::Left).0])
                .sum();
        }
        counts
    }

    pub fn word_string(word: &[usize]) -> String {
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().map(|s| format!("s{}", s + 1)).collect()
        }
    }
}

fn left_mul(n: usize, cartan: &CartanMatrix, s: usize, w: &[i64]) -> Vec<i64> {
    let mut out = w.to_vec();
    for row in out.chunks_mut(n) {
        cartan.reflect_in_place(row, s);
    }
    out
}

fn right_mul(n: usize, cartan: &CartanMatrix, s: usize, w: &[i64]) -> Vec<i64> {
    // (w s)(α_i) = w(α_i) − ⟨α_i, α_s^∨⟩ w(α_s)
    let mut out = w.to_vec();
    for i in 0..n {
        let a = cartan.get(i, s);
        if i != s && a != 0 {
            for k in 0..n {
                out[i * n + k] -= a * w[s * n + k];
            }
        }
    }
    for k in 0..n {
        out[s * n + k] = -w[s * n + k];
    }
    out
}

/// Minimal length left coset representatives `W^J`.
#[derive(Debug, Clone)]
pub struct CosetSystem {
    pub j: ActiveSet,
    pub reps: Vec<ElementId>,
    pub longest: ElementId,
}

impl CosetSystem {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn contains(&self, w: ElementId) -> bool {
        self.reps.binary_search(&w).is_ok()
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
