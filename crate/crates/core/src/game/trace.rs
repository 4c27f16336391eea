use serde::{Deserialize, Serialize};

use super::{Configuration, GameSpec, Mode, PlayOutcome, PlayResult};
use crate::error::{Error, Result};
use crate::root_system::{ActiveSet, CartanType, DiagramJson, DiagramLabel, DynkinDiagram};

/// A diagram given either by catalog name (`"F4"`) or as diagram JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiagramRef {
    Type(String),
    Json(DiagramJson),
}

impl DiagramRef {
    pub fn of(d: &DynkinDiagram) -> Self {
        match d.label() {
            DiagramLabel::Catalog(t) => DiagramRef::Type(t.to_string()),
            DiagramLabel::Custom => DiagramRef::Json(d.to_json()),
        }
    }

    pub fn resolve(&self) -> Result<DynkinDiagram> {
        match self {
            DiagramRef::Type(name) => Ok(DynkinDiagram::from_type(name.parse::<CartanType>()?)),
            DiagramRef::Json(json) => DynkinDiagram::from_json(json),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Classical,
    Modified,
}

/// The wire form of a [`GameSpec`]. Vertex labels are 1-based.
///
/// Modified games give either `active` (I) or `inactive` (J); classical games
/// give `initial`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    pub diagram: DiagramRef,
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inactive: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Configuration>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_cap: Option<usize>,
}

impl SpecJson {
    pub fn of(g: &GameSpec) -> Self {
        let (mode, active, initial) = match g.mode() {
            Mode::Classical { initial } => (ModeName::Classical, None, Some(initial.clone())),
            Mode::Modified { active } => (ModeName::Modified, Some(active.labels()), None),
        };
        SpecJson {
            diagram: DiagramRef::of(g.diagram()),
            mode,
            active,
            inactive: None,
            initial,
            step_cap: Some(g.step_cap()),
        }
    }

    pub fn to_spec(&self) -> Result<GameSpec> {
        let d = self.diagram.resolve()?;
        let n = d.rank();
        let g = match self.mode {
            ModeName::Modified => {
                if self.initial.is_some() {
                    return Err(Error::InvalidSpec("initial: only classical games take one".into()));
                }
                let active = match (&self.active, &self.inactive) {
                    (Some(_), Some(_)) => {
                        return Err(Error::InvalidSpec(
                            "active, inactive: give one of the two, not both".into(),
                        ))
                    }
                    (Some(i), None) => ActiveSet::from_labels(n, i),
                    (None, Some(j)) => ActiveSet::from_labels(n, j).map(|j| j.complement()),
                    (None, None) => {
                        return Err(Error::InvalidSpec("active: required for modified games".into()))
                    }
                }
                .map_err(|e| Error::InvalidSpec(format!("active: {e}")))?;
                GameSpec::modified(d, active)?
            }
            ModeName::Classical => {
                if self.active.is_some() || self.inactive.is_some() {
                    return Err(Error::InvalidSpec(
                        "active: classical games have no active set".into(),
                    ));
                }
                let initial = self
                    .initial
                    .clone()
                    .ok_or_else(|| Error::InvalidSpec("initial: required for classical games".into()))?;
                GameSpec::classical(d, initial)?
            }
        };
        Ok(match self.step_cap {
            Some(cap) => g.with_step_cap(cap),
            None => g,
        })
    }
}

/// A finished or capped play, as written by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTrace {
    pub spec: SpecJson,
    pub outcome: PlayOutcome,
    /// 1-based fired vertices, in order.
    pub moves: Vec<usize>,
    pub configs: Vec<Configuration>,
    #[serde(rename = "final")]
    pub final_config: Configuration,
    /// The word of `s_{i_m} ⋯ s_{i_1}`, i.e. the moves reversed.
    pub word: Vec<usize>,
}

impl GameTrace {
    pub fn new(g: &GameSpec, result: &PlayResult) -> Self {
        let moves = super::moves_to_labels(&result.moves);
        let mut word = moves.clone();
        word.reverse();
        GameTrace {
            spec: SpecJson::of(g),
            outcome: result.outcome,
            moves,
            configs: result.configs.clone(),
            final_config: result.last().clone(),
            word,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{play, Strategy};
    use crate::root_system::Family;

    #[test]
    fn a2_trace_json() {
        let d = DynkinDiagram::catalog(Family::A, 2).unwrap();
        let g = GameSpec::modified(d, ActiveSet::all(2)).unwrap();
        let t = GameTrace::new(&g, &play(&g, Strategy::Lowest));
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["moves"], serde_json::json!([1, 2, 1]));
        assert_eq!(v["final"], serde_json::json!([2, 2]));
        assert_eq!(v["spec"]["diagram"], "A2");
        assert_eq!(v["spec"]["active"], serde_json::json!([1, 2]));
        assert_eq!(v["configs"][2], serde_json::json!([1, 2]));
    }

    #[test]
    fn spec_json_forms() {
        let s: SpecJson =
            serde_json::from_str(r#"{"diagram":"A3","mode":"modified","inactive":[1,3]}"#).unwrap();
        let g = s.to_spec().unwrap();
        assert_eq!(g.active().unwrap().labels(), vec![2]);
        assert_eq!(SpecJson::of(&g).to_spec().unwrap(), g);

        let both = r#"{"diagram":"A3","mode":"modified","active":[2],"inactive":[1]}"#;
        assert!(serde_json::from_str::<SpecJson>(both).unwrap().to_spec().is_err());
        let unknown = r#"{"diagram":"A3","mode":"modified","active":[2],"colour":1}"#;
        assert!(serde_json::from_str::<SpecJson>(unknown).is_err());

        let custom = r#"{"diagram":{"n":2,"edges":[{"from":1,"to":1,"arrows":1}]},"mode":"classical","initial":[1,0]}"#;
        assert!(serde_json::from_str::<SpecJson>(custom).unwrap().to_spec().is_err());
        let classical = r#"{"diagram":"D4","mode":"classical","initial":[0,1,0,0]}"#;
        let g = serde_json::from_str::<SpecJson>(classical).unwrap().to_spec().unwrap();
        assert_eq!(g.start(), Configuration::basis(4, 1));
    }
}
