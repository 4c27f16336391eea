use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use kostant::automaton::build_dfa_for;
use kostant::game::{
    fire, reachable_graph, Picker, Configuration, GameSpec, SpecJson, Strategy, VertexState,
};
use kostant::root_system::{positive_roots_capped, CartanMatrix, Family};
use kostant::syt::{fill_tableau, StandardTableau};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::ServiceError;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(3600);

/// Largest reachable graph (and so DFA) bundled into artifacts.
pub const GRAPH_CAP: usize = 20_000;

/// Roots enumerated before a diagram is treated as infinite type.
const FINITE_TYPE_CAP: usize = 10_000;

/// A 128-bit random token, written as 32 hex digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SessionId(u128);

impl SessionId {
    fn random() -> Self {
        SessionId(rand::thread_rng().gen())
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:032x}", self.0)
    }
}

impl FromStr for SessionId {
    type Err = ServiceError;

    fn from_str(s: &str) -> Result<Self, ServiceError> {
        if s.len() != 32 {
            return Err(ServiceError::NotFound(s.to_string()));
        }
        u128::from_str_radix(s, 16)
            .map(SessionId)
            .map_err(|_| ServiceError::NotFound(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub chips: Configuration,
    pub states: Vec<VertexState>,
    /// 1-based moves so far.
    pub word: Vec<usize>,
    pub element_length: usize,
    pub terminal: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub diverging: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tableau: Option<StandardTableau>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Created {
    pub id: String,
    pub state: StateView,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FireRequest {
    pub vertex: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoRequest {
    #[serde(default = "default_strategy")]
    pub strategy: String,
    pub steps: usize,
}

fn default_strategy() -> String {
    "lowest".into()
}

/// `w = s_{i_m} ⋯ s_{i_1}` for the moves `i_1, …, i_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementView {
    pub length: usize,
    /// 1-based reduced word of `w`, i.e. the moves reversed.
    pub reduced_word: Vec<usize>,
    /// Row `i` holds the simple-root coordinates of `w(α_{i+1})`.
    pub action: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifacts {
    pub word: Vec<usize>,
    pub element: ElementView,
    /// DFA states visited while reading the word, starting at the start state.
    pub dfa_path: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tableau: Option<StandardTableau>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub family: char,
    pub min_rank: usize,
    /// `None` for the infinite families.
    pub max_rank: Option<usize>,
}

struct Session {
    spec: GameSpec,
    /// `(configuration before, fired vertex)` for every move.
    history: Vec<(Configuration, usize)>,
    current: Configuration,
    finite_type: bool,
    /// `(n, source)` for a type A game with a single source.
    type_a: Option<(usize, usize)>,
    last_used: Instant,
}

impl Session {
    fn new(spec: GameSpec) -> Self {
        let finite_type = positive_roots_capped(spec.diagram(), FINITE_TYPE_CAP).is_ok();
        let type_a = match (spec.diagram().cartan_type(), spec.active()) {
            (Some(t), Some(active)) if t.family == Family::A && active.len() == 1 => {
                active.iter().next().map(|s| (t.rank + 1, s))
            }
            _ => None,
        };
        Session {
            current: spec.start(),
            spec,
            history: Vec::new(),
            finite_type,
            type_a,
            last_used: Instant::now(),
        }
    }

    fn moves(&self) -> Vec<usize> {
        self.history.iter().map(|&(_, v)| v).collect()
    }

    fn tableau(&self) -> Result<Option<StandardTableau>, ServiceError> {
        match self.type_a {
            Some((n, source)) => fill_tableau(&self.moves(), n, source)
                .map(Some)
                .map_err(|e| ServiceError::game(e, "word")),
            None => Ok(None),
        }
    }

    fn view(&self) -> Result<StateView, ServiceError> {
        let terminal = self.spec.is_terminal(&self.current);
        let capped = self.history.len() >= self.spec.step_cap();
        Ok(StateView {
            chips: self.current.clone(),
            states: self.spec.states(&self.current),
            word: self.moves().iter().map(|v| v + 1).collect(),
            element_length: self.history.len(),
            terminal,
            diverging: !terminal && (capped || !self.finite_type),
            tableau: self.tableau()?,
        })
    }

    fn fire(&mut self, v: usize) -> Result<(), ServiceError> {
        if self.history.len() >= self.spec.step_cap() {
            return Err(ServiceError::Conflict(format!(
                "step cap {} reached",
                self.spec.step_cap()
            )));
        }
        let next = fire(&self.current, &self.spec, v).map_err(|e| ServiceError::game(e, "vertex"))?;
        let prev = std::mem::replace(&mut self.current, next);
        self.history.push((prev, v));
        Ok(())
    }

    fn undo(&mut self) -> Result<(), ServiceError> {
        let (prev, _) = self
            .history
            .pop()
            .ok_or_else(|| ServiceError::Conflict("nothing to undo".into()))?;
        self.current = prev;
        Ok(())
    }

    /// Plays up to `steps` moves from the current configuration; returns them.
    fn auto(&mut self, strategy: Strategy, steps: usize) -> Result<Vec<usize>, ServiceError> {
        let mut picker = Picker::new(strategy);
        let mut fired = Vec::new();
        while fired.len() < steps && self.history.len() < self.spec.step_cap() {
            let sad = self.spec.sad_vertices(&self.current);
            if sad.is_empty() {
                break;
            }
            let v = picker.pick(&sad);
            self.fire(v)?;
            fired.push(v);
        }
        Ok(fired)
    }
}

pub struct SessionStore {
    sessions: Mutex<HashMap<SessionId, Arc<Mutex<Session>>>>,
    idle_timeout: Duration,
    log: Option<Mutex<File>>,
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new(DEFAULT_IDLE_TIMEOUT)
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    // A panic inside one request must not take the whole store down.
    m.lock().unwrap_or_else(|p| p.into_inner())
}

impl SessionStore {
    pub fn new(idle_timeout: Duration) -> Self {
        SessionStore {
            sessions: Mutex::new(HashMap::new()),
            idle_timeout,
            log: None,
        }
    }

    /// Appends every operation to `path` as JSON lines.
    pub fn with_log(mut self, path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        self.log = Some(Mutex::new(file));
        Ok(self)
    }

    pub fn len(&self) -> usize {
        lock(&self.sessions).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn record(&self, id: SessionId, op: &str, mut fields: Value) -> Result<(), ServiceError> {
        let Some(log) = &self.log else {
            return Ok(());
        };
        let ts = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0);
        fields["ts"] = json!(ts);
        fields["session"] = json!(id.to_string());
        fields["op"] = json!(op);
        let mut file = lock(log);
        writeln!(file, "{fields}")?;
        file.flush()?;
        Ok(())
    }

    fn get(&self, id: &str) -> Result<(SessionId, Arc<Mutex<Session>>), ServiceError> {
        self.evict_idle();
        let sid: SessionId = id.parse()?;
        let s = lock(&self.sessions)
            .get(&sid)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))?;
        lock(&s).last_used = Instant::now();
        Ok((sid, s))
    }

    /// Drops sessions idle for longer than the timeout; returns how many.
    pub fn evict_idle(&self) -> usize {
        let now = Instant::now();
        let mut sessions = lock(&self.sessions);
        let expired: Vec<SessionId> = sessions
            .iter()
            // A session locked by a request is in use, so not idle.
            .filter(|(_, s)| match s.try_lock() {
                Ok(s) => now.duration_since(s.last_used) > self.idle_timeout,
                Err(_) => false,
            })
            .map(|(&id, _)| id)
            .collect();
        for id in &expired {
            sessions.remove(id);
        }
        drop(sessions);
        for &id in &expired {
            let _ = self.record(id, "evict", json!({}));
        }
        expired.len()
    }

    pub fn create(&self, spec: &SpecJson) -> Result<Created, ServiceError> {
        self.evict_idle();
        let game = spec.to_spec().map_err(|e| ServiceError::game(e, "spec"))?;
        let session = Session::new(game);
        let state = session.view()?;
        let id = SessionId::random();
        lock(&self.sessions).insert(id, Arc::new(Mutex::new(session)));
        self.record(id, "create", json!({ "spec": spec }))?;
        Ok(Created { id: id.to_string(), state })
    }

    pub fn state(&self, id: &str) -> Result<StateView, ServiceError> {
        let (_, s) = self.get(id)?;
        let view = lock(&s).view();
        view
    }

    /// Fires the 1-based `vertex`.
    pub fn fire(&self, id: &str, vertex: usize) -> Result<StateView, ServiceError> {
        let (sid, s) = self.get(id)?;
        let mut session = lock(&s);
        let n = session.spec.rank();
        if vertex == 0 || vertex > n {
            return Err(ServiceError::Invalid {
                message: format!("vertex {vertex} out of range 1..={n}"),
                field: Some("vertex".into()),
            });
        }
        session.fire(vertex - 1)?;
        self.record(sid, "fire", json!({ "vertex": vertex }))?;
        session.view()
    }

    pub fn undo(&self, id: &str) -> Result<StateView, ServiceError> {
        let (sid, s) = self.get(id)?;
        let mut session = lock(&s);
        session.undo()?;
        self.record(sid, "undo", json!({}))?;
        session.view()
    }

    pub fn auto(&self, id: &str, strategy: &str, steps: usize) -> Result<StateView, ServiceError> {
        let strategy: Strategy = strategy.parse().map_err(|e| ServiceError::game(e, "strategy"))?;
        let (sid, s) = self.get(id)?;
        let mut session = lock(&s);
        let fired = session.auto(strategy, steps)?;
        if !fired.is_empty() {
            let labels: Vec<usize> = fired.iter().map(|v| v + 1).collect();
            self.record(sid, "auto", json!({ "steps": steps, "fired": labels }))?;
        }
        session.view()
    }

    pub fn artifacts(&self, id: &str) -> Result<Artifacts, ServiceError> {
        let (_, s) = self.get(id)?;
        let session = lock(&s);
        let moves = session.moves();
        let word: Vec<usize> = moves.iter().map(|v| v + 1).collect();
        let cartan = CartanMatrix::of(session.spec.diagram());
        let n = session.spec.rank();
        let action = (0..n)
            .map(|i| {
                let mut x = vec![0i64; n];
                x[i] = 1;
                for &m in &moves {
                    cartan.reflect_in_place(&mut x, m);
                }
                x
            })
            .collect();
        let element = ElementView {
            length: moves.len(),
            reduced_word: word.iter().rev().copied().collect(),
            action,
        };
        let graph = reachable_graph(&session.spec, GRAPH_CAP).ok();
        let dfa_path = build_dfa_for(&session.spec, GRAPH_CAP).ok().and_then(|dfa| {
            dfa.run(&moves)
                .ok()
                .map(|path| path.into_iter().map(|q| dfa.label(q).to_string()).collect())
        });
        Ok(Artifacts {
            word,
            element,
            dfa_path,
            tableau: session.tableau()?,
            graph: graph.map(|g| g.to_json()),
        })
    }

    pub fn catalog() -> Vec<CatalogEntry> {
        use Family::*;
        [(A, 1, None), (B, 2, None), (C, 2, None), (D, 4, None), (E, 6, Some(8)), (F, 4, Some(4)), (G, 2, Some(2))]
            .into_iter()
            .map(|(f, min_rank, max_rank)| CatalogEntry { family: f.letter(), min_rank, max_rank })
            .collect()
    }

    /// Rebuilds the sessions recorded in a log written by [`SessionStore::with_log`].
    /// Session ids are kept; evicted sessions stay gone.
    pub fn replay_log(&self, path: &Path) -> Result<usize, ServiceError> {
        let reader = BufReader::new(File::open(path)?);
        let mut sessions = lock(&self.sessions);
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |what: &str| ServiceError::BadRequest {
                message: format!("log line {}: {what}", lineno + 1),
                field: None,
            };
            let entry: Value = serde_json::from_str(&line).map_err(|_| bad("not JSON"))?;
            let id: SessionId = entry["session"]
                .as_str()
                .ok_or_else(|| bad("no session"))?
                .parse()
                .map_err(|_| bad("bad session id"))?;
            let op = entry["op"].as_str().ok_or_else(|| bad("no op"))?;
            if op == "create" {
                let spec: SpecJson =
                    serde_json::from_value(entry["spec"].clone()).map_err(|_| bad("bad spec"))?;
                let game = spec.to_spec().map_err(|e| ServiceError::game(e, "spec"))?;
                sessions.insert(id, Arc::new(Mutex::new(Session::new(game))));
                continue;
            }
            if op == "evict" {
                sessions.remove(&id);
                continue;
            }
            let s = sessions.get(&id).ok_or_else(|| bad("unknown session"))?;
            let mut session = lock(s);
            match op {
                "fire" => {
                    let v = entry["vertex"].as_u64().ok_or_else(|| bad("no vertex"))? as usize;
                    session.fire(v.checked_sub(1).ok_or_else(|| bad("vertex 0"))?)?;
                }
                "undo" => session.undo()?,
                "auto" => {
                    let fired = entry["fired"].as_array().ok_or_else(|| bad("no fired list"))?;
                    for v in fired {
                        let v = v.as_u64().ok_or_else(|| bad("bad vertex"))? as usize;
                        session.fire(v.checked_sub(1).ok_or_else(|| bad("vertex 0"))?)?;
                    }
                }
                _ => return Err(bad("unknown op")),
            }
        }
        Ok(sessions.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> SpecJson {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn ids_roundtrip_through_hex() {
        let id = SessionId::random();
        let text = id.to_string();
        assert_eq!(text.len(), 32);
        assert_eq!(text.parse::<SessionId>().unwrap(), id);
        assert!("xyz".parse::<SessionId>().is_err());
    }

    #[test]
    fn history_matches_the_element_length() {
        let store = SessionStore::default();
        let id = store.create(&spec(r#"{"diagram":"B3","mode":"modified","active":[3]}"#)).unwrap().id;
        let view = store.auto(&id, "highest", 100).unwrap();
        assert!(view.terminal);
        assert!(!view.diverging);
        assert_eq!(view.word.len(), view.element_length);
        // B3 with I={3}: |Φ⁺∖Φ_J⁺| = 9 − 3.
        assert_eq!(view.element_length, 6);
        assert!(view.tableau.is_none());
    }

    #[test]
    fn step_cap_blocks_further_fires() {
        let store = SessionStore::default();
        let id = store
            .create(&spec(r#"{"diagram":"A3","mode":"modified","active":[1,2,3],"step_cap":2}"#))
            .unwrap()
            .id;
        let view = store.auto(&id, "lowest", 10).unwrap();
        assert_eq!(view.element_length, 2);
        assert!(view.diverging);
        let sad = view.states.iter().position(|s| *s == VertexState::Sad).unwrap();
        assert!(matches!(store.fire(&id, sad + 1), Err(ServiceError::Conflict(_))));
    }

    #[test]
    fn catalog_lists_every_family() {
        let letters: String = SessionStore::catalog().iter().map(|e| e.family).collect();
        assert_eq!(letters, "ABCDEFG");
    }
}
