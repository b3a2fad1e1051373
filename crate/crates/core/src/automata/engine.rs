use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::context::ContextStore;
use super::hooks::{Hook, HookError, HookEvent, HookRegistry};
use super::predicate::Predicate;
use super::{AutomatonSpec, BuildError, EdgeSpec, MatchError, NodeSpec, DEFAULT_STEP_BUDGET};
use crate::token::Token;

#[derive(Clone)]
struct HookRef {
    name: String,
    hook: Arc<dyn Hook>,
}

#[derive(Clone)]
struct Node {
    id: u32,
    is_final: bool,
    action: Option<HookRef>,
}

#[derive(Clone)]
struct Edge {
    from: usize,
    to: usize,
    predicate: Predicate,
    before: Option<HookRef>,
    after: Option<HookRef>,
}

/// A validated automaton.
///
/// The structure is immutable and cheap to share; each match runs against
/// its own copy of the initial context store.
#[derive(Clone)]
pub struct Automaton {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<usize>>,
    start: usize,
    context: ContextStore,
    budget: usize,
    to_final: Vec<Option<Vec<usize>>>,
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Automaton")
            .field("nodes", &self.nodes.len())
            .field("edges", &self.edges.len())
            .field("start", &self.nodes[self.start].id)
            .field("budget", &self.budget)
            .finish()
    }
}

/// One shift on the accepting path: `token` was consumed, entering `node`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub node: u32,
    pub token: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub matched: bool,
    /// Tokens consumed; present iff `matched`.
    pub length: Option<usize>,
    pub steps: Vec<Step>,
}

impl MatchOutcome {
    fn none() -> MatchOutcome {
        MatchOutcome { matched: false, length: None, steps: Vec::new() }
    }
}

/// A non-final state reached after consuming a suffix of the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveState {
    pub node: u32,
    pub consumed: usize,
    /// Predicates on the outgoing edges, in insertion order.
    pub next: Vec<Predicate>,
    /// Predicates along the shortest continuation to a final node.
    pub continuation: Vec<Predicate>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialReport {
    pub pending: Vec<ActiveState>,
    /// Some suffix of the input drives the automaton into a final node.
    pub completed: bool,
}

impl PartialReport {
    pub fn is_empty(&self) -> bool {
        self.pending.is_empty() && !self.completed
    }
}

struct Frame {
    node: usize,
    pos: usize,
    ctx: ContextStore,
    next: usize,
}

impl Automaton {
    pub(super) fn build(spec: &AutomatonSpec, hooks: &HookRegistry) -> Result<Automaton, BuildError> {
        let mut index: HashMap<u32, usize> = HashMap::with_capacity(spec.nodes.len());
        let mut nodes = Vec::with_capacity(spec.nodes.len());
        for n in &spec.nodes {
            if index.insert(n.id, nodes.len()).is_some() {
                return Err(BuildError::DuplicateNodeId(n.id));
            }
            nodes.push(Node { id: n.id, is_final: n.is_final, action: resolve(hooks, n.action.as_deref())? });
        }
        let start = *index.get(&spec.start).ok_or(BuildError::NoStartNode(spec.start))?;
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut outgoing = vec![Vec::new(); nodes.len()];
        for (i, e) in spec.edges.iter().enumerate() {
            let lookup = |id: u32| index.get(&id).copied().ok_or(BuildError::DanglingEdge { edge: i, node: id });
            let from = lookup(e.from)?;
            let to = lookup(e.to)?;
            outgoing[from].push(i);
            edges.push(Edge {
                from,
                to,
                predicate: e.predicate.clone(),
                before: resolve(hooks, e.before.as_deref())?,
                after: resolve(hooks, e.after.as_deref())?,
            });
        }
        let mut a = Automaton {
            nodes,
            edges,
            outgoing,
            start,
            context: ContextStore::new(),
            budget: DEFAULT_STEP_BUDGET,
            to_final: Vec::new(),
        };
        a.to_final = (0..a.nodes.len()).map(|n| a.shortest_to_final(n)).collect();
        Ok(a)
    }

    /// Sets the step budget for each match run.
    pub fn with_budget(mut self, budget: usize) -> Automaton {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Initial context each run starts from.
    pub fn context(&self) -> &ContextStore {
        &self.context
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Reconstructs the description this automaton was built from.
    pub fn spec(&self) -> AutomatonSpec {
        AutomatonSpec {
            start: self.nodes[self.start].id,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeSpec { id: n.id, is_final: n.is_final, action: n.action.as_ref().map(|h| h.name.clone()) })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    from: self.nodes[e.from].id,
                    to: self.nodes[e.to].id,
                    predicate: e.predicate.clone(),
                    before: e.before.as_ref().map(|h| h.name.clone()),
                    after: e.after.as_ref().map(|h| h.name.clone()),
                })
                .collect(),
        }
    }

    /// Longest match starting at `tokens[start]`, against a fresh context.
    pub fn match_at(&self, tokens: &[Token], start: usize) -> Result<MatchOutcome, MatchError> {
        let mut ctx = self.context.clone();
        self.match_in(&mut ctx, tokens, start)
    }

    /// Longest match starting at `tokens[start]`.
    ///
    /// `ctx` is left untouched unless a match is found, in which case the
    /// hooks along the winning path are applied to it.
    pub fn match_in(&self, ctx: &mut ContextStore, tokens: &[Token], start: usize) -> Result<MatchOutcome, MatchError> {
        if start >= tokens.len() {
            return Ok(MatchOutcome::none());
        }
        let mut best: Option<Vec<usize>> = None;
        self.explore(ctx, tokens, start, |a, path, node, _pos| {
            if a.nodes[node].is_final && best.as_ref().is_none_or(|b| path.len() > b.len()) {
                best = Some(path.to_vec());
            }
        })?;
        let Some(path) = best else {
            return Ok(MatchOutcome::none());
        };
        let mut committed = ctx.clone();
        let mut steps = Vec::with_capacity(path.len());
        for (i, &ei) in path.iter().enumerate() {
            let pos = start + i;
            if !self.shift(&mut committed, ei, &tokens[pos])? {
                let node = self.nodes[self.edges[ei].from].id;
                return Err(MatchError::HookPanic {
                    hook: self.edges[ei].before.as_ref().map(|h| h.name.clone()).unwrap_or_default(),
                    node,
                    edge: Some(ei),
                    message: "hook verdict changed when replaying the accepting path".into(),
                });
            }
            steps.push(Step { node: self.nodes[self.edges[ei].to].id, token: pos });
        }
        *ctx = committed;
        Ok(MatchOutcome { matched: true, length: Some(path.len()), steps })
    }

    /// States reachable by consuming some non-empty suffix of `tokens` entirely.
    pub fn feed_partial(&self, tokens: &[Token]) -> Result<PartialReport, MatchError> {
        let mut report = PartialReport::default();
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let end = tokens.len();
        for s in 0..end {
            let mut reached: Vec<usize> = Vec::new();
            self.explore(&self.context, tokens, s, |_, _, node, pos| {
                if pos == end {
                    reached.push(node);
                }
            })?;
            for node in reached {
                if self.nodes[node].is_final {
                    report.completed = true;
                } else if seen.insert((end - s, node)) {
                    report.pending.push(ActiveState {
                        node: self.nodes[node].id,
                        consumed: end - s,
                        next: self.outgoing[node].iter().map(|&e| self.edges[e].predicate.clone()).collect(),
                        continuation: self.to_final[node]
                            .as_ref()
                            .map(|p| p.iter().map(|&e| self.edges[e].predicate.clone()).collect())
                            .unwrap_or_default(),
                    });
                }
            }
        }
        report.pending.sort_by(|a, b| b.consumed.cmp(&a.consumed).then(a.node.cmp(&b.node)));
        Ok(report)
    }

    /// Depth-first search over all admissible paths from `start`.
    ///
    /// `visit` sees every successful shift as (path of edge indices, node
    /// index entered, input position after the shift). Edges are tried in
    /// insertion order, so paths are visited in lexicographic edge order.
    fn explore<F>(&self, root: &ContextStore, tokens: &[Token], start: usize, mut visit: F) -> Result<(), MatchError>
    where
        F: FnMut(&Automaton, &[usize], usize, usize),
    {
        let mut stack = vec![Frame { node: self.start, pos: start, ctx: root.clone(), next: 0 }];
        let mut path: Vec<usize> = Vec::new();
        let mut steps = 0usize;
        while let Some(top) = stack.last_mut() {
            let out = &self.outgoing[top.node];
            if top.pos >= tokens.len() || top.next >= out.len() {
                stack.pop();
                path.pop();
                continue;
            }
            let ei = out[top.next];
            top.next += 1;
            steps += 1;
            if steps > self.budget {
                return Err(MatchError::BudgetExceeded { budget: self.budget, start });
            }
            let token = &tokens[top.pos];
            let edge = &self.edges[ei];
            if !edge.predicate.accepts(token) {
                continue;
            }
            let mut ctx = top.ctx.clone();
            let pos = top.pos + 1;
            if !self.shift(&mut ctx, ei, token)? {
                continue;
            }
            path.push(ei);
            visit(self, &path, edge.to, pos);
            stack.push(Frame { node: edge.to, pos, ctx, next: 0 });
        }
        Ok(())
    }

    /// Fires before-shift, after-shift and node-reached hooks for edge `ei`.
    /// Returns false when the before-shift hook vetoes the transition.
    fn shift(&self, ctx: &mut ContextStore, ei: usize, token: &Token) -> Result<bool, MatchError> {
        let edge = &self.edges[ei];
        let from = self.nodes[edge.from].id;
        let to = self.nodes[edge.to].id;
        if let Some(h) = &edge.before {
            if !fire(h, ctx, &HookEvent::BeforeShift { token }, from, Some(ei))? {
                return Ok(false);
            }
        }
        if let Some(h) = &edge.after {
            fire(h, ctx, &HookEvent::AfterShift { token }, to, Some(ei))?;
        }
        if let Some(h) = &self.nodes[edge.to].action {
            fire(h, ctx, &HookEvent::NodeReached { node: to }, to, None)?;
        }
        Ok(true)
    }

    fn shortest_to_final(&self, from: usize) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let mut visited = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        visited[from] = true;
        while let Some(n) = queue.pop_front() {
            if self.nodes[n].is_final {
                let mut path = Vec::new();
                let mut cur = n;
                while let Some(e) = prev[cur] {
                    path.push(e);
                    cur = self.edges[e].from;
                }
                path.reverse();
                return Some(path);
            }
            for &e in &self.outgoing[n] {
                let to = self.edges[e].to;
                if !visited[to] {
                    visited[to] = true;
                    prev[to] = Some(e);
                    queue.push_back(to);
                }
            }
        }
        None
    }
}

fn resolve(hooks: &HookRegistry, name: Option<&str>) -> Result<Option<HookRef>, BuildError> {
    match name {
        None => Ok(None),
        Some(name) => hooks
            .resolve(name)
            .map(|hook| Some(HookRef { name: name.to_string(), hook }))
            .ok_or_else(|| BuildError::UnknownHook(name.to_string())),
    }
}

fn fire(h: &HookRef, ctx: &mut ContextStore, event: &HookEvent<'_>, node: u32, edge: Option<usize>) -> Result<bool, MatchError> {
    let result = panic::catch_unwind(AssertUnwindSafe(|| h.hook.fire(ctx, event)));
    let message = match result {
        Ok(Ok(verdict)) => return Ok(verdict),
        Ok(Err(HookError(msg))) => msg,
        Err(payload) => payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "hook panicked".to_string()),
    };
    Err(MatchError::HookPanic { hook: h.name.clone(), node, edge, message })
}
