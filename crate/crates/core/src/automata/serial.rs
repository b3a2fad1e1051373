//! Versioned JSON form of an automaton.
//!
//! ```json
//! {"version":1,"start":0,
//!  "nodes":[{"id":0,"final":false},{"id":1,"final":true,"action":"inc:n"}],
//!  "edges":[{"from":0,"to":1,"pred":{"kind":"surface","arg":"が"},"before":"pop:s"}]}
//! ```
//!
//! Hooks are stored by name and re-resolved against a [`HookRegistry`] on
//! load. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{build_automaton, Automaton, AutomatonSpec, BuildError, EdgeSpec, HookRegistry, NodeSpec};

pub const AUTOMATON_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerialError {
    #[error("malformed automaton payload: {0}")]
    MalformedPayload(String),
    #[error("unknown hook name `{0}`")]
    UnknownHookName(String),
    #[error("invalid automaton: {0}")]
    Invalid(BuildError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SerializedAutomaton {
    pub version: u32,
    pub start: u32,
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeSpec>,
}

impl From<AutomatonSpec> for SerializedAutomaton {
    fn from(spec: AutomatonSpec) -> Self {
        SerializedAutomaton { version: AUTOMATON_FORMAT_VERSION, start: spec.start, nodes: spec.nodes, edges: spec.edges }
    }
}

impl SerializedAutomaton {
    pub(crate) fn build(self, hooks: &HookRegistry) -> Result<Automaton, SerialError> {
        if self.version != AUTOMATON_FORMAT_VERSION {
            return Err(SerialError::MalformedPayload(format!("unsupported version {}", self.version)));
        }
        let spec = AutomatonSpec { start: self.start, nodes: self.nodes, edges: self.edges };
        build_automaton(&spec, hooks).map_err(|e| match e {
            BuildError::UnknownHook(name) => SerialError::UnknownHookName(name),
            other => SerialError::Invalid(other),
        })
    }
}

impl Automaton {
    pub(crate) fn to_serialized(&self) -> SerializedAutomaton {
        self.spec().into()
    }

    pub fn serialize(&self) -> Vec<u8> {
        serde_json::to_vec(&self.to_serialized()).expect("automaton serializes")
    }

    pub fn deserialize(bytes: &[u8], hooks: &HookRegistry) -> Result<Automaton, SerialError> {
        let doc: SerializedAutomaton =
            serde_json::from_slice(bytes).map_err(|e| SerialError::MalformedPayload(e.to_string()))?;
        doc.build(hooks)
    }
}
