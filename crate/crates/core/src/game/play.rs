use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{fire_at_step, Configuration, GameSpec};
use crate::error::{Error, Result};

pub const DEFAULT_STEP_CAP: usize = 10_000;

/// How the next sad vertex is picked. The engine imposes no order itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "seed")]
pub enum Strategy {
    Lowest,
    Highest,
    Random(u64),
}

impl FromStr for Strategy {
    type Err = Error;

    /// `lowest`, `highest`, `random` (seed 0) or `random:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lowest" | "lowest-index" => Ok(Strategy::Lowest),
            "highest" | "highest-index" => Ok(Strategy::Highest),
            "random" => Ok(Strategy::Random(0)),
            other => match other.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(Strategy::Random)
                    .map_err(|_| Error::Parse(format!("invalid random seed {seed:?}"))),
                None => Err(Error::Parse(format!("unknown strategy {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlayOutcome {
    Terminated,
    /// The step cap was reached while some vertex was still sad.
    Diverged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayResult {
    pub outcome: PlayOutcome,
    pub moves: Vec<usize>,
    /// Every visited configuration, starting with the initial one.
    pub configs: Vec<Configuration>,
    /// Chip increment of each move.
    pub increments: Vec<BigInt>,
}

impl PlayResult {
    pub fn last(&self) -> &Configuration {
        self.configs.last().expect("a play visits at least its start")
    }

    pub fn is_terminated(&self) -> bool {
        self.outcome == PlayOutcome::Terminated
    }
}

/// The choice function of a [`Strategy`], with its random stream.
#[derive(Debug, Clone)]
pub struct Picker {
    strategy: Strategy,
    rng: Option<ChaCha8Rng>,
}

impl Picker {
    pub fn new(strategy: Strategy) -> Self {
        let rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Picker { strategy, rng }
    }

    /// Picks one of `sad`, which must be nonempty and increasing.
    pub fn pick(&mut self, sad: &[usize]) -> usize {
        match (self.strategy, self.rng.as_mut()) {
            (Strategy::Lowest, _) => sad[0],
            (Strategy::Highest, _) => sad[sad.len() - 1],
            (Strategy::Random(_), Some(rng)) => sad[rng.gen_range(0..sad.len())],
            (Strategy::Random(_), None) => unreachable!("seeded in new"),
        }
    }
}

/// Plays until no vertex is sad or `step_cap` moves have been made.
pub fn play(g: &GameSpec, strategy: Strategy) -> PlayResult {
    let mut picker = Picker::new(strategy);
    play_with(g, |_, sad| Ok(picker.pick(sad))).expect("built-in strategies only pick sad vertices")
}

/// Plays with a caller-supplied choice among the sad vertices (given in
/// increasing order). A choice outside that list is an illegal move.
pub fn play_with<F>(g: &GameSpec, mut choose: F) -> Result<PlayResult>
where
    F: FnMut(&Configuration, &[usize]) -> Result<usize>,
{
    let mut configs = vec![g.start()];
    let mut moves = Vec::new();
    let mut increments = Vec::new();
    loop {
        let current = configs.last().expect("nonempty");
        let sad = g.sad_vertices(current);
        if sad.is_empty() {
            return Ok(PlayResult {
                outcome: PlayOutcome::Terminated,
                moves,
                configs,
                increments,
            });
        }
        if moves.len() >= g.step_cap() {
            return Ok(PlayResult {
                outcome: PlayOutcome::Diverged,
                moves,
                configs,
                increments,
            });
        }
        let v = choose(current, &sad)?;
        let next = fire_at_step(current, g, v, moves.len())?;
        increments.push(next.total() - current.total());
        moves.push(v);
        configs.push(next);
    }
}
