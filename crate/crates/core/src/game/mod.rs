//! The classical and modified Kostant games.
//!
//! A vertex `v` is sad when `2·c_v < Σ_u n_{v,u} c_u + src(v)`, where `src(v)`
//! is 1 for modified vertices and 0 otherwise. Firing a sad vertex replaces
//! `c_v` by `Σ_u n_{v,u} c_u + src(v) − c_v`.

mod algebra;
mod graph;
mod play;
mod theorems;
mod trace;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use algebra::{algebraic_step, replay_cross_checked, AlgebraicState};
pub use graph::{reachable_graph, reachable_graph_from, ConfigGraph, GraphEdge, DEFAULT_NODE_CAP};
pub use play::{play, play_with, Picker, PlayOutcome, PlayResult, Strategy, DEFAULT_STEP_CAP};
pub use theorems::{
    config_of_element, root_counting_check, root_counting_check_with, verify_bijection, word_of,
    BijectionReport,
    Counterexample, RootCountReport,
};
pub use trace::{DiagramRef, GameTrace, ModeName, SpecJson};

use crate::error::{Error, Result};
use crate::root_system::{ActiveSet, DynkinDiagram};

/// A non-negative chip vector indexed by the diagram's vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Vec<BigInt>);

impl Configuration {
    pub fn zero(n: usize) -> Self {
        Configuration(vec![BigInt::zero(); n])
    }

    pub fn basis(n: usize, v: usize) -> Self {
        let mut c = Self::zero(n);
        c.0[v] = BigInt::from(1);
        c
    }

    pub fn from_chips(chips: Vec<BigInt>) -> Result<Self> {
        if chips.iter().any(Signed::is_negative) {
            return Err(Error::InvalidSpec("chip counts must be non-negative".into()));
        }
        Ok(Configuration(chips))
    }

    pub fn from_i64s(chips: &[i64]) -> Result<Self> {
        Self::from_chips(chips.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn chips(&self) -> &[BigInt] {
        &self.0
    }

    pub fn get(&self, v: usize) -> &BigInt {
        &self.0[v]
    }

    /// `|c| = Σ_v c_v`.
    pub fn total(&self) -> BigInt {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Chip counts as `i64`, when they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|c| i64::try_from(c).ok()).collect()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Chips serialize as JSON integers; values beyond `i64` fall back to strings.
impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match i64::try_from(c) {
                Ok(x) => seq.serialize_element(&x)?,
                Err(_) => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Chip {
            Int(i64),
            Text(String),
        }
        let raw = Vec::<Chip>::deserialize(d)?;
        let chips = raw
            .into_iter()
            .map(|c| match c {
                Chip::Int(x) => Ok(BigInt::from(x)),
                Chip::Text(t) => t.parse::<BigInt>().map_err(serde::de::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Configuration::from_chips(chips).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexState {
    Sad,
    Happy,
    Excited,
}

impl fmt::Display for VertexState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VertexState::Sad => "sad",
            VertexState::Happy => "happy",
            VertexState::Excited => "excited",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Classical { initial: Configuration },
    Modified { active: ActiveSet },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    diagram: DynkinDiagram,
    mode: Mode,
    step_cap: usize,
}

impl GameSpec {
    pub fn classical(diagram: DynkinDiagram, initial: Configuration) -> Result<Self> {
        if initial.len() != diagram.rank() {
            return Err(Error::InvalidSpec(format!(
                "initial configuration has {} entries, diagram has {} vertices",
                initial.len(),
                diagram.rank()
            )));
        }
        if initial.is_zero() {
            return Err(Error::InvalidSpec(
                "classical games need an initial configuration with a positive entry".into(),
            ));
        }
        Ok(GameSpec {
            diagram,
            mode: Mode::Classical { initial },
            step_cap: DEFAULT_STEP_CAP,
        })
    }

    pub fn modified(diagram: DynkinDiagram, active: ActiveSet) -> Result<Self> {
        if active.rank() != diagram.rank() {
            return Err(Error::InvalidSpec("active set does not match the diagram rank".into()));
        }
        if active.is_empty() {
            return Err(Error::InvalidSpec("the modified game needs a nonempty active set".into()));
        }
        Ok(GameSpec {
            diagram,
            mode: Mode::Modified { active },
            step_cap: DEFAULT_STEP_CAP,
        })
    }

    pub fn with_step_cap(mut self, step_cap: usize) -> Self {
        self.step_cap = step_cap.max(1);
        self
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn step_cap(&self) -> usize {
        self.step_cap
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    pub fn active(&self) -> Option<&ActiveSet> {
        match &self.mode {
            Mode::Modified { active } => Some(active),
            Mode::Classical { .. } => None,
        }
    }

    pub fn is_modified(&self) -> bool {
        matches!(self.mode, Mode::Modified { .. })
    }

    pub fn start(&self) -> Configuration {
        match &self.mode {
            Mode::Classical { initial } => initial.clone(),
            Mode::Modified { .. } => Configuration::zero(self.rank()),
        }
    }

    fn source(&self, v: usize) -> i64 {
        match &self.mode {
            Mode::Modified { active } if active.contains(v) => 1,
            _ => 0,
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.rank() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.rank() })
        }
    }

    /// `Σ_u n_{v,u} c_u + src(v)`.
    fn drive(&self, c: &Configuration, v: usize) -> BigInt {
        let mut sum = BigInt::from(self.source(v));
        for u in self.diagram.neighbors(v) {
            sum += c.get(u) * self.diagram.arrows(u, v);
        }
        sum
    }

    /// The chip increment a fire at `v` would produce, `K = −⟨c+β, α_v^∨⟩`.
    pub fn increment(&self, c: &Configuration, v: usize) -> BigInt {
        self.drive(c, v) - c.get(v) * 2
    }

    pub fn sad_vertices(&self, c: &Configuration) -> Vec<usize> {
        (0..self.rank())
            .filter(|&v| self.increment(c, v).is_positive())
            .collect()
    }

    pub fn is_terminal(&self, c: &Configuration) -> bool {
        self.sad_vertices(c).is_empty()
    }

    pub fn states(&self, c: &Configuration) -> Vec<VertexState> {
        (0..self.rank())
            .map(|v| vertex_state(c, self, v).expect("vertex in range"))
            .collect()
    }
}

pub fn vertex_state(c: &Configuration, g: &GameSpec, v: usize) -> Result<VertexState> {
    g.check_vertex(v)?;
    let k = g.increment(c, v);
    Ok(if k.is_positive() {
        VertexState::Sad
    } else if k.is_zero() {
        VertexState::Happy
    } else {
        VertexState::Excited
    })
}

/// Fires a sad vertex. Only entry `v` changes.
pub fn fire(c: &Configuration, g: &GameSpec, v: usize) -> Result<Configuration> {
    fire_at_step(c, g, v, 0)
}

pub(crate) fn fire_at_step(
    c: &Configuration,
    g: &GameSpec,
    v: usize,
    step: usize,
) -> Result<Configuration> {
    let state = vertex_state(c, g, v)?;
    if state != VertexState::Sad {
        return Err(Error::IllegalMove { step, vertex: v, state });
    }
    let mut next = c.clone();
    next.0[v] = g.drive(c, v) - c.get(v);
    Ok(next)
}

/// Replays a move sequence from the game's start, returning every visited configuration.
pub fn replay(g: &GameSpec, moves: &[usize]) -> Result<Vec<Configuration>> {
    let mut configs = vec![g.start()];
    for (step, &v) in moves.iter().enumerate() {
        let next = fire_at_step(configs.last().expect("nonempty"), g, v, step)?;
        configs.push(next);
    }
    Ok(configs)
}

/// Converts 1-based move labels to 0-based vertices.
pub fn moves_from_labels(labels: &[usize], n: usize) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|&l| {
            if l == 0 || l > n {
                Err(Error::VertexOutOfRange { vertex: l.wrapping_sub(1), n })
            } else {
                Ok(l - 1)
            }
        })
        .collect()
}

pub fn moves_to_labels(moves: &[usize]) -> Vec<usize> {
    moves.iter().map(|v| v + 1).collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::root_system::{EdgeRecord, Family};

    fn a(n: usize) -> DynkinDiagram {
        DynkinDiagram::catalog(Family::A, n).unwrap()
    }

    pub(crate) fn affine_d4() -> DynkinDiagram {
        let edges: Vec<_> = (2..=5)
            .map(|v| EdgeRecord { from: 1, to: v, arrows: 1 })
            .collect();
        DynkinDiagram::custom(5, &edges).unwrap()
    }

    fn cfg(x: &[i64]) -> Configuration {
        Configuration::from_i64s(x).unwrap()
    }

    #[test]
    fn zero_config_source_vertices_are_sad() {
        let g = GameSpec::modified(a(2), ActiveSet::all(2)).unwrap();
        assert_eq!(vertex_state(&g.start(), &g, 0).unwrap(), VertexState::Sad);
        let g = GameSpec::modified(a(3), ActiveSet::new(3, [1]).unwrap()).unwrap();
        assert_eq!(
            g.states(&g.start()),
            vec![VertexState::Happy, VertexState::Sad, VertexState::Happy]
        );
    }

    #[test]
    fn affine_center_after_firing_is_not_sad() {
        let g = GameSpec::classical(affine_d4(), cfg(&[1, 1, 1, 1, 1])).unwrap();
        let c = fire(&g.start(), &g, 0).unwrap();
        assert_eq!(c, cfg(&[3, 1, 1, 1, 1]));
        assert_ne!(vertex_state(&c, &g, 0).unwrap(), VertexState::Sad);
        for v in 1..5 {
            assert_eq!(vertex_state(&c, &g, v).unwrap(), VertexState::Sad);
        }
    }

    #[test]
    fn isolated_vertex_with_chips_is_excited() {
        let d = DynkinDiagram::custom(1, &[]).unwrap();
        let g = GameSpec::classical(d, cfg(&[5])).unwrap();
        assert_eq!(vertex_state(&g.start(), &g, 0).unwrap(), VertexState::Excited);
    }

    #[test]
    fn a2_worked_example_fires() {
        let g = GameSpec::modified(a(2), ActiveSet::all(2)).unwrap();
        let c1 = fire(&g.start(), &g, 0).unwrap();
        assert_eq!(c1, cfg(&[1, 0]));
        let c2 = fire(&c1, &g, 1).unwrap();
        assert_eq!(c2, cfg(&[1, 2]));
        let c3 = fire(&c2, &g, 0).unwrap();
        assert_eq!(c3, cfg(&[2, 2]));
        assert!(g.is_terminal(&c3));
    }

    #[test]
    fn a4_single_source_walks_right() {
        let g = GameSpec::modified(a(4), ActiveSet::new(4, [0]).unwrap()).unwrap();
        let configs = replay(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(configs.last().unwrap(), &cfg(&[1, 1, 1, 1]));
        assert!(g.is_terminal(configs.last().unwrap()));
    }

    #[test]
    fn firing_a_happy_vertex_is_illegal() {
        let g = GameSpec::modified(a(2), ActiveSet::all(2)).unwrap();
        let c1 = fire(&g.start(), &g, 0).unwrap();
        let err = fire(&c1, &g, 0).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { vertex: 0, .. }));
        let err = replay(&g, &[0, 1, 1]).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { step: 2, vertex: 1, .. }));
    }

    #[test]
    fn spec_validation() {
        assert!(GameSpec::modified(a(2), ActiveSet::new(2, []).unwrap()).is_err());
        assert!(GameSpec::classical(a(2), Configuration::zero(2)).is_err());
        assert!(GameSpec::classical(a(2), cfg(&[1])).is_err());
        assert!(Configuration::from_i64s(&[-1, 0]).is_err());
    }

    #[test]
    fn chips_serialize_as_integers() {
        let c = cfg(&[3, 0, 12]);
        assert_eq!(serde_json::to_string(&c).unwrap(), "[3,0,12]");
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let c = Configuration::from_chips(vec![big.clone()]).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Configuration>(&text).unwrap().get(0), &big);
    }
}
