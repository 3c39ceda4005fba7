use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{recv_prop, Distribution, Event, ModelError, Partition, Signals, Structure, StructureParts};
use crate::rational::Rational;
use crate::syntax::{parse, Formula, PlayerId, PropId};

/// Per-player data keyed by state, or listed in state order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ByState<T> {
    Map(IndexMap<String, T>),
    List(Vec<T>),
}

/// The on-disk model format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub states: Vec<String>,
    pub players: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propositions: Option<Vec<String>>,
    pub partitions: Vec<Vec<Vec<String>>>,
    pub posteriors: Vec<Vec<IndexMap<String, Rational>>>,
    pub interpretations: Vec<ByState<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priors: Option<Vec<IndexMap<String, Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_labels: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signals: Option<ByState<Vec<Option<String>>>>,
}

fn prop(name: &str) -> Result<PropId, ModelError> {
    PropId::new(name).ok_or_else(|| ModelError::BadProposition(name.to_string()))
}

fn signal_ok(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ModelFile {
    pub fn into_structure(self) -> Result<Structure, ModelError> {
        let n = self.states.len();
        let index: IndexMap<&str, usize> = self.states.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
        if index.len() != n {
            let dup = self.states.iter().find(|s| self.states.iter().filter(|t| t == s).count() > 1).unwrap();
            return Err(ModelError::DuplicateState(dup.clone()));
        }
        let state = |name: &str| index.get(name).copied().ok_or_else(|| ModelError::UnknownState(name.to_string()));
        let players = self.players;
        if players == 0 {
            return Err(ModelError::NoPlayers);
        }
        let per_player = |field: &'static str, found: usize| {
            if found == players {
                Ok(())
            } else {
                Err(ModelError::PlayerCount { field, expected: players, found })
            }
        };
        let by_state = |data: ByState<Vec<String>>| -> Result<Vec<Vec<String>>, ModelError> {
            match data {
                ByState::List(rows) => {
                    if rows.len() != n {
                        return Err(ModelError::SignalCount { state: "<list>".into(), expected: n, found: rows.len() });
                    }
                    Ok(rows)
                }
                ByState::Map(map) => {
                    let mut rows = vec![Vec::new(); n];
                    for (s, v) in map {
                        rows[state(&s)?] = v;
                    }
                    Ok(rows)
                }
            }
        };

        per_player("partitions", self.partitions.len())?;
        let mut partitions = Vec::with_capacity(players);
        for (i, cells) in self.partitions.iter().enumerate() {
            let cells = cells
                .iter()
                .map(|c| c.iter().map(|s| state(s)).collect::<Result<Event, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let p = Partition::new(n, cells).map_err(|detail| ModelError::NotAPartition {
                player: PlayerId::from_index(i),
                detail: name_states(&detail, &self.states),
            })?;
            partitions.push(p);
        }

        per_player("posteriors", self.posteriors.len())?;
        let mut posteriors = Vec::with_capacity(players);
        for (i, cells) in self.posteriors.iter().enumerate() {
            let expected = partitions[i].len();
            if cells.len() != expected {
                return Err(ModelError::CellCount {
                    field: "posteriors",
                    player: PlayerId::from_index(i),
                    expected,
                    found: cells.len(),
                });
            }
            posteriors.push(cells.iter().map(|m| distribution(n, m, &state)).collect::<Result<Vec<_>, _>>()?);
        }

        per_player("interpretations", self.interpretations.len())?;
        let mut rows_per_player = Vec::with_capacity(players);
        for interp in self.interpretations {
            rows_per_player.push(by_state(interp)?);
        }

        let signals: Option<Signals> = match self.signals {
            None => None,
            Some(data) => {
                let rows: Vec<Option<Vec<Option<String>>>> = match data {
                    ByState::List(rows) => rows.into_iter().map(Some).collect(),
                    ByState::Map(map) => {
                        let mut rows = vec![None; n];
                        for (s, v) in map {
                            rows[state(&s)?] = Some(v);
                        }
                        rows
                    }
                };
                if rows.len() != n {
                    return Err(ModelError::SignalCount { state: "<list>".into(), expected: n, found: rows.len() });
                }
                let mut out = Vec::with_capacity(n);
                for (s, row) in rows.into_iter().enumerate() {
                    let row = row.unwrap_or_else(|| vec![None; players]);
                    if row.len() != players {
                        return Err(ModelError::SignalCount {
                            state: self.states[s].clone(),
                            expected: players,
                            found: row.len(),
                        });
                    }
                    if let Some(bad) = row.iter().flatten().find(|sig| !signal_ok(sig)) {
                        return Err(ModelError::BadSignal(bad.clone()));
                    }
                    out.push(row);
                }
                Some(out)
            }
        };

        let cell_labels: Option<Vec<Vec<Formula>>> = match &self.cell_labels {
            None => None,
            Some(labels) => {
                per_player("cell_labels", labels.len())?;
                let mut out = Vec::with_capacity(players);
                for (i, cells) in labels.iter().enumerate() {
                    let player = PlayerId::from_index(i);
                    let parsed = cells
                        .iter()
                        .map(|text| {
                            parse(text).map_err(|e| ModelError::BadLabel {
                                player,
                                label: text.clone(),
                                reason: e.to_string(),
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    out.push(parsed);
                }
                Some(out)
            }
        };

        // Vocabulary: declared props, or props in order of first use; then
        // every `recv_i_σ` the signals call for.
        let declared = self.propositions.is_some();
        let mut props: Vec<PropId> = Vec::new();
        let add = |p: PropId, props: &mut Vec<PropId>| {
            if !props.contains(&p) {
                props.push(p);
            }
        };
        if let Some(names) = &self.propositions {
            for name in names {
                let p = prop(name)?;
                if props.contains(&p) {
                    return Err(ModelError::BadProposition(format!("{name} (declared twice)")));
                }
                props.push(p);
            }
        }
        if let Some(sig) = &signals {
            let mut names: Vec<&str> = Vec::new();
            for row in sig {
                for s in row.iter().flatten() {
                    if !names.contains(&s.as_str()) {
                        names.push(s);
                    }
                }
            }
            for name in names {
                for i in 0..players {
                    add(recv_prop(PlayerId::from_index(i), name), &mut props);
                }
            }
        }
        for rows in &rows_per_player {
            for row in rows {
                for name in row {
                    let p = prop(name)?;
                    if declared && !props.contains(&p) {
                        return Err(ModelError::UnknownProposition(name.clone()));
                    }
                    add(p, &mut props);
                }
            }
        }
        if !declared {
            for f in cell_labels.iter().flatten().flatten() {
                for p in f.props() {
                    add(p, &mut props);
                }
            }
        }

        let mut interpretations = Vec::with_capacity(players);
        for rows in &rows_per_player {
            let mut ext = vec![Event::EMPTY; props.len()];
            for (s, row) in rows.iter().enumerate() {
                for name in row {
                    let k = props.iter().position(|p| p.as_str() == name).expect("vocabulary covers interpretations");
                    ext[k].insert(s);
                }
            }
            interpretations.push(ext);
        }

        let priors = match &self.priors {
            None => None,
            Some(ps) => {
                per_player("priors", ps.len())?;
                Some(ps.iter().map(|m| distribution(n, m, &state)).collect::<Result<Vec<_>, _>>()?)
            }
        };

        Structure::from_parts(StructureParts {
            states: self.states,
            players,
            props,
            partitions,
            posteriors,
            interpretations,
            cell_labels,
            priors,
            signals,
        })
    }

    pub fn from_structure(m: &Structure) -> Self {
        let n = m.n_states();
        let names = |e: Event| m.event_names(e);
        let dist = |d: &Distribution| -> IndexMap<String, Rational> {
            (0..n).filter(|&s| !d.get(s).is_zero()).map(|s| (m.state_name(s).to_string(), d.get(s).clone())).collect()
        };
        ModelFile {
            states: m.states().to_vec(),
            players: m.n_players(),
            propositions: Some(m.props().iter().map(|p| p.to_string()).collect()),
            partitions: m.player_ids().map(|i| m.partition(i).cells().iter().map(|&c| names(c)).collect()).collect(),
            posteriors: m.player_ids().map(|i| m.posteriors(i).iter().map(dist).collect()).collect(),
            interpretations: m
                .player_ids()
                .map(|i| {
                    ByState::Map(
                        (0..n)
                            .map(|s| {
                                (
                                    m.state_name(s).to_string(),
                                    m.true_props(i, s).into_iter().map(|p| p.to_string()).collect(),
                                )
                            })
                            .collect(),
                    )
                })
                .collect(),
            priors: m.priors().map(|ps| ps.iter().map(dist).collect()),
            cell_labels: m
                .cell_labels()
                .map(|ls| ls.iter().map(|cells| cells.iter().map(|f| f.to_string()).collect()).collect()),
            signals: m
                .signals()
                .map(|rows| ByState::Map((0..n).map(|s| (m.state_name(s).to_string(), rows[s].clone())).collect())),
        }
    }
}

fn distribution(
    n: usize,
    map: &IndexMap<String, Rational>,
    state: &impl Fn(&str) -> Result<usize, ModelError>,
) -> Result<Distribution, ModelError> {
    let mut d = Distribution::zeros(n);
    for (s, v) in map {
        d.set(state(s)?, v.clone());
    }
    Ok(d)
}

/// Replaces `state index k` in partition diagnostics with the state's name.
fn name_states(detail: &str, states: &[String]) -> String {
    let mut out = String::new();
    let mut rest = detail;
    while let Some(pos) = rest.find("state index ") {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + "state index ".len()..];
        let digits: String = after.chars().take_while(|c| c.is_ascii_digit()).collect();
        match digits.parse::<usize>().ok().and_then(|k| states.get(k)) {
            Some(name) => out.push_str(&format!("state `{name}`")),
            None => out.push_str(&format!("state index {digits}")),
        }
        rest = &after[digits.len()..];
    }
    out.push_str(rest);
    out
}

impl Structure {
    pub fn from_json_str(text: &str) -> Result<Structure, ModelError> {
        serde_json::from_str::<ModelFile>(text)?.into_structure()
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&ModelFile::from_structure(self)).expect("model files serialize");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Structure, ModelError> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|source| ModelError::Io { path: path.to_path_buf(), source })?;
        Structure::from_json_str(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ModelError> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json_string())
            .map_err(|source| ModelError::Io { path: path.to_path_buf(), source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "states": ["a", "b"],
        "players": 2,
        "partitions": [[["a", "b"]], [["a"], ["b"]]],
        "posteriors": [[{"a": "1/3", "b": "2/3"}], [{"a": "1"}, {"b": "1"}]],
        "interpretations": [{"a": ["p"]}, [["p"], ["p", "q"]]],
        "signals": {"a": ["s", null]}
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let m = Structure::from_json_str(SMALL).unwrap();
        let names: Vec<_> = m.props().iter().map(|p| p.as_str()).collect();
        assert_eq!(names, ["recv_1_s", "recv_2_s", "p", "q"]);
        assert!(!m.is_common_interpretation());
        assert_eq!(m.signal(PlayerId::from_index(1), 1), None);
        let again = Structure::from_json_str(&m.to_json_string()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn overlapping_partition_is_an_error() {
        let text = SMALL.replace(r#"[["a"], ["b"]]"#, r#"[["a", "b"], ["b"]]"#);
        let err = Structure::from_json_str(&text).unwrap_err();
        assert!(err.to_string().contains("state `b` lies in cells 1 and 2"), "{err}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Structure::from_json_str("{"), Err(ModelError::Json(_))));
        let text = SMALL.replace(r#""1/3""#, r#""1/0""#);
        assert!(matches!(Structure::from_json_str(&text), Err(ModelError::Json(_))));
        let text = SMALL.replace(r#"{"a": ["p"]}"#, r#"{"z": ["p"]}"#);
        assert!(matches!(Structure::from_json_str(&text), Err(ModelError::UnknownState(s)) if s == "z"));
        let text = SMALL.replace(r#"[["p"], ["p", "q"]]"#, r#"[["p"]]"#);
        assert!(Structure::from_json_str(&text).is_err());
    }
}
