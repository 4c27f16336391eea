use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{fire_at_step, Configuration, GameSpec, VertexState};
use crate::error::{Error, Result};
use crate::root_system::CartanMatrix;

/// The game state as a vector `v = c + β` of the extended space, where
/// `β = Σ_{p∈I} β_p` and `⟨β_p, α_i^∨⟩ = −δ_{pi}`.
///
/// Only the simple-root coordinates move; the `β` part is fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicState {
    pub root_part: Vec<BigInt>,
    pub source: Vec<bool>,
}

impl AlgebraicState {
    pub fn of_spec(g: &GameSpec) -> Self {
        let source = match g.active() {
            Some(active) => active.indicator(),
            None => vec![false; g.rank()],
        };
        AlgebraicState {
            root_part: g.start().chips().to_vec(),
            source,
        }
    }

    /// `⟨v, α_i^∨⟩ = Σ_j r_j a_{ji} − [i ∈ I]`.
    pub fn pairing(&self, cartan: &CartanMatrix, i: usize) -> BigInt {
        let mut p: BigInt = self
            .root_part
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(j, r)| r * cartan.get(j, i))
            .sum();
        if self.source[i] {
            p -= 1;
        }
        p
    }

    /// The chip configuration `v − β`.
    pub fn configuration(&self) -> Result<Configuration> {
        Configuration::from_chips(self.root_part.clone())
    }
}

/// Applies the extended reflection `s_v`. Legal only when `⟨v_m, α_v^∨⟩ < 0`.
pub fn algebraic_step(cartan: &CartanMatrix, st: &AlgebraicState, v: usize) -> Result<AlgebraicState> {
    algebraic_step_at(cartan, st, v, 0)
}

pub(crate) fn algebraic_step_at(
    cartan: &CartanMatrix,
    st: &AlgebraicState,
    v: usize,
    step: usize,
) -> Result<AlgebraicState> {
    if v >= st.root_part.len() {
        return Err(Error::VertexOutOfRange { vertex: v, n: st.root_part.len() });
    }
    let p = st.pairing(cartan, v);
    if !p.is_negative() {
        let state = if p.is_zero() { VertexState::Happy } else { VertexState::Excited };
        return Err(Error::IllegalMove { step, vertex: v, state });
    }
    let mut next = st.clone();
    next.root_part[v] -= p;
    Ok(next)
}

/// Replays `moves` through both models and checks that the chips agree with
/// the root part after every step. Returns the visited configurations.
pub fn replay_cross_checked(g: &GameSpec, moves: &[usize]) -> Result<Vec<Configuration>> {
    let cartan = CartanMatrix::of(g.diagram());
    let mut st = AlgebraicState::of_spec(g);
    let mut configs = vec![g.start()];
    for (step, &v) in moves.iter().enumerate() {
        let next = fire_at_step(configs.last().expect("nonempty"), g, v, step)?;
        st = algebraic_step_at(&cartan, &st, v, step)?;
        if st.root_part != next.chips() {
            return Err(Error::Consistency(format!(
                "step {}: chips {next} differ from the algebraic root part",
                step + 1
            )));
        }
        configs.push(next);
    }
    Ok(configs)
}
