//! Event-driven automata.
//!
//! An [`Automaton`] is a graph of nodes joined by predicate-labeled edges.
//! Every edge consumes exactly one token. Before a shift the edge's
//! `before` hook may inspect and mutate the [`ContextStore`] and veto the
//! transition; after the shift the `after` hook runs, then the target node's
//! action. With a stack in the context store the automaton is a pushdown
//! automaton; with counters and flags it can recognize context-dependent
//! languages.
//!
//! Matching is depth-first with a copy of the context store taken at every
//! shift, so abandoned branches never leak side effects. The longest
//! accepting path wins (ties go to the path whose edges were added first),
//! and only that path's hooks are replayed on the caller's context.

mod context;
mod engine;
mod hooks;
mod predicate;
mod serial;

pub use context::{ContextStore, Value};
pub use engine::{ActiveState, Automaton, MatchOutcome, PartialReport, Step};
pub use hooks::{Hook, HookError, HookEvent, HookRegistry};
pub use predicate::Predicate;
pub use serial::{SerialError, AUTOMATON_FORMAT_VERSION};
pub(crate) use serial::SerializedAutomaton;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Engine steps (edge evaluations) a single match may take.
pub const DEFAULT_STEP_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub id: u32,
    #[serde(rename = "final", default)]
    pub is_final: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: u32,
    pub to: u32,
    #[serde(rename = "pred")]
    pub predicate: Predicate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub before: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub after: Option<String>,
}

/// Unvalidated description of an automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonSpec {
    pub start: u32,
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeSpec>,
}

impl Default for AutomatonSpec {
    fn default() -> Self {
        AutomatonSpec::new()
    }
}

impl AutomatonSpec {
    /// A spec holding only the non-final start node 0.
    pub fn new() -> AutomatonSpec {
        AutomatonSpec {
            start: 0,
            nodes: vec![NodeSpec { id: 0, is_final: false, action: None }],
            edges: Vec::new(),
        }
    }

    /// Adds a node with the next free id.
    pub fn add_node(&mut self, is_final: bool) -> u32 {
        let id = self.nodes.iter().map(|n| n.id + 1).max().unwrap_or(0);
        self.nodes.push(NodeSpec { id, is_final, action: None });
        id
    }

    pub fn add_edge(&mut self, from: u32, to: u32, predicate: Predicate) -> &mut EdgeSpec {
        self.edges.push(EdgeSpec { from, to, predicate, before: None, after: None });
        self.edges.last_mut().unwrap()
    }

    /// Adds a fresh node reached from `from` through `predicate`.
    pub fn add_trans(&mut self, from: u32, predicate: Predicate, is_final: bool) -> u32 {
        let to = self.add_node(is_final);
        self.add_edge(from, to, predicate);
        to
    }

    pub fn set_final(&mut self, id: u32, is_final: bool) {
        if let Some(n) = self.nodes.iter_mut().find(|n| n.id == id) {
            n.is_final = is_final;
        }
    }

    pub fn set_action(&mut self, id: u32, action: impl Into<String>) {
        if let Some(n) = self.nodes.iter_mut().find(|n| n.id == id) {
            n.action = Some(action.into());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("duplicate node id {0}")]
    DuplicateNodeId(u32),
    #[error("edge {edge} references missing node {node}")]
    DanglingEdge { edge: usize, node: u32 },
    #[error("unknown hook `{0}`")]
    UnknownHook(String),
    #[error("start node {0} does not exist")]
    NoStartNode(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("step budget of {budget} exhausted matching from token {start}")]
    BudgetExceeded { budget: usize, start: usize },
    #[error("hook `{hook}` failed at node {node} (edge {edge:?}): {message}")]
    HookPanic { hook: String, node: u32, edge: Option<usize>, message: String },
}

/// Validates a spec and resolves its hooks.
pub fn build_automaton(spec: &AutomatonSpec, hooks: &HookRegistry) -> Result<Automaton, BuildError> {
    Automaton::build(spec, hooks)
}
